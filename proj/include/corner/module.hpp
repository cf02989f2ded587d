#pragma once
#include <random>

#include "corner/algebra.hpp"

namespace corner {

/// Finite-dimensional left module: per-vertex spaces plus one action block
/// per algebra basis element (dims[head] x dims[tail]). The total space is
/// the ordered concatenation of the vertex blocks.
template <Field F>
struct FDModule {
  std::shared_ptr<const FDAlgebra<F>> alg;
  std::vector<int> dims;
  std::vector<Matrix<F>> act;

  int total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
  int offset(int v) const {
    int t = 0;
    for (int u = 0; u < v; ++u) t += dims[static_cast<std::size_t>(u)];
    return t;
  }
  int vertex_of(int coord) const {
    int v = 0;
    while (coord >= dims[static_cast<std::size_t>(v)]) coord -= dims[static_cast<std::size_t>(v++)];
    return v;
  }
  bool is_zero() const { return total_dim() == 0; }

  Matrix<F> act_total(int b) const {
    Matrix<F> m(total_dim(), total_dim());
    m.set_block(offset(alg->head(b)), offset(alg->tail(b)), act[static_cast<std::size_t>(b)]);
    return m;
  }

  Matrix<F> act_of(const SparseVec<F>& elem) const {
    Matrix<F> m(total_dim(), total_dim());
    for (const auto& [b, c] : elem) {
      int i0 = offset(alg->head(b)), j0 = offset(alg->tail(b));
      const Matrix<F>& blk = act[static_cast<std::size_t>(b)];
      for (int i = 0; i < blk.rows(); ++i)
        for (int j = 0; j < blk.cols(); ++j)
          if (!blk.at(i, j).is_zero()) m.at(i0 + i, j0 + j) += c * blk.at(i, j);
    }
    return m;
  }

  SparseVec<F> apply_basis_sparse(int b, const SparseVec<F>& v) const {
    int tl = alg->tail(b), hd = alg->head(b);
    int jo = offset(tl), io = offset(hd);
    std::map<int, F> acc;
    for (const auto& [i, c] : v) {
      if (i < jo || i >= jo + dims[static_cast<std::size_t>(tl)]) continue;
      const Matrix<F>& blk = act[static_cast<std::size_t>(b)];
      for (int r = 0; r < blk.rows(); ++r) {
        const F& a = blk.at(r, i - jo);
        if (a.is_zero()) continue;
        F& slot = acc.try_emplace(io + r, F(0)).first->second;
        slot += c * a;
      }
    }
    SparseVec<F> out;
    for (const auto& [i, c] : acc)
      if (!c.is_zero()) out.emplace_back(i, c);
    return out;
  }

  /// Full consistency: shapes, idempotents acting as block projections and
  /// act(x)act(y) = act(xy) on composable basis pairs (products across
  /// mismatched grading are structurally zero in this representation).
  void validate() const {
    require(static_cast<int>(dims.size()) == alg->vertex_count(), "shape", "dimension vector size mismatch");
    require(static_cast<int>(act.size()) == alg->dim(), "shape", "action table size mismatch");
    for (int b = 0; b < alg->dim(); ++b) {
      require(act[static_cast<std::size_t>(b)].rows() == dims[static_cast<std::size_t>(alg->head(b))] &&
                  act[static_cast<std::size_t>(b)].cols() == dims[static_cast<std::size_t>(alg->tail(b))],
              "shape", "action block shape mismatch");
    }
    for (int v = 0; v < alg->vertex_count(); ++v)
      require(act[static_cast<std::size_t>(alg->idem[static_cast<std::size_t>(v)])].is_identity(), "relation",
              "vertex idempotent does not act as the block projection");
    for (int i = 0; i < alg->dim(); ++i)
      for (int j = 0; j < alg->dim(); ++j) {
        if (alg->tail(i) != alg->head(j)) continue;
        Matrix<F> lhs = act[static_cast<std::size_t>(i)] * act[static_cast<std::size_t>(j)];
        Matrix<F> rhs(dims[static_cast<std::size_t>(alg->head(i))], dims[static_cast<std::size_t>(alg->tail(j))]);
        for (const auto& [k, c] : alg->mul(i, j)) rhs = rhs + act[static_cast<std::size_t>(k)].scaled(c);
        require(lhs == rhs, "relation", "action does not respect multiplication on a basis pair");
      }
  }
};

/// Extend arrow matrices multiplicatively along representative paths.
/// Rejects inputs violating a defining relation (reporting the offending
/// relation index and residual) or the nilpotency forced by the truncation.
template <Field F>
FDModule<F> module_from_arrows(std::shared_ptr<const FDAlgebra<F>> alg, std::vector<int> dims,
                               const std::map<std::string, Matrix<F>>& arrow_mats) {
  require(alg->quiver.has_value(), "reference", "algebra has no arrow presentation");
  const Quiver& q = *alg->quiver;
  require(static_cast<int>(dims.size()) == q.vertex_count(), "shape", "dimension vector size mismatch");
  for (int d : dims) require(d >= 0, "shape", "negative dimension");

  std::vector<Matrix<F>> amat;
  for (int a = 0; a < q.arrow_count(); ++a)
    amat.push_back(Matrix<F>(dims[static_cast<std::size_t>(q.arrow(a).head)], dims[static_cast<std::size_t>(q.arrow(a).tail)]));
  for (const auto& [id, m] : arrow_mats) {
    int a = q.arrow_index(id);
    require(m.rows() == amat[static_cast<std::size_t>(a)].rows() && m.cols() == amat[static_cast<std::size_t>(a)].cols(),
            "shape", "arrow '" + id + "' matrix must be " + std::to_string(amat[static_cast<std::size_t>(a)].rows()) +
                         "x" + std::to_string(amat[static_cast<std::size_t>(a)].cols()));
    amat[static_cast<std::size_t>(a)] = m;
  }

  auto along = [&](const PathWord& w) {
    Matrix<F> m = Matrix<F>::identity(dims[static_cast<std::size_t>(w.tail())]);
    for (int a : w.arrows) m = amat[static_cast<std::size_t>(a)] * m;
    return m;
  };

  for (std::size_t r = 0; r < alg->relations.size(); ++r) {
    const auto& rel = alg->relations[r];
    if (rel.terms.empty()) continue;
    Matrix<F> res(dims[static_cast<std::size_t>(rel.head)], dims[static_cast<std::size_t>(rel.tail)]);
    for (const auto& t : rel.terms) res = res + along(t.word).scaled(t.coeff);
    if (!res.is_zero()) {
      std::string msg = "relation " + std::to_string(r) + " violated; residual rows:";
      for (int i = 0; i < res.rows(); ++i) {
        msg += " [";
        for (int j = 0; j < res.cols(); ++j) msg += (j ? "," : "") + res.at(i, j).str();
        msg += "]";
      }
      fail("relation", msg);
    }
  }

  // Paths longer than the truncation level must act as zero.
  std::function<void(int, int, const Matrix<F>&)> walk = [&](int at, int len, const Matrix<F>& m) {
    if (m.is_zero()) return;
    require(len <= alg->level, "relation",
            "truncation violated: a path of length " + std::to_string(alg->level + 1) + " acts nonzero");
    for (int a = 0; a < q.arrow_count(); ++a) {
      if (q.arrow(a).tail != at) continue;
      walk(q.arrow(a).head, len + 1, amat[static_cast<std::size_t>(a)] * m);
    }
  };
  for (int v = 0; v < q.vertex_count(); ++v)
    if (dims[static_cast<std::size_t>(v)] > 0) walk(v, 0, Matrix<F>::identity(dims[static_cast<std::size_t>(v)]));

  FDModule<F> mod;
  mod.alg = alg;
  for (int b = 0; b < alg->dim(); ++b) mod.act.push_back(along(alg->basis[static_cast<std::size_t>(b)].rep));
  mod.dims = std::move(dims);
  return mod;
}

/// Coordinates of the projective column A e_v: basis elements with tail v,
/// grouped by head vertex. The same ordering is used everywhere a statement
/// mentions "the A e_v coordinates".
template <Field F>
std::vector<int> column_coords(const FDAlgebra<F>& a, int v) {
  std::vector<int> out;
  for (int u = 0; u < a.vertex_count(); ++u)
    for (int i = 0; i < a.dim(); ++i)
      if (a.tail(i) == v && a.head(i) == u) out.push_back(i);
  return out;
}

namespace detail {

template <Field F>
FDModule<F> module_on_coords(std::shared_ptr<const FDAlgebra<F>> alg, const std::vector<int>& coords) {
  FDModule<F> mod;
  mod.alg = alg;
  mod.dims.assign(static_cast<std::size_t>(alg->vertex_count()), 0);
  std::vector<int> local(static_cast<std::size_t>(alg->dim()), -1);
  for (int i : coords) local[static_cast<std::size_t>(i)] = mod.dims[static_cast<std::size_t>(alg->head(i))]++;
  for (int y = 0; y < alg->dim(); ++y) {
    Matrix<F> blk(mod.dims[static_cast<std::size_t>(alg->head(y))], mod.dims[static_cast<std::size_t>(alg->tail(y))]);
    for (int x : coords) {
      if (alg->head(x) != alg->tail(y)) continue;
      for (const auto& [k, c] : alg->mul(y, x)) {
        require(local[static_cast<std::size_t>(k)] >= 0, "relation", "internal: regular action leaves the column");
        blk.at(local[static_cast<std::size_t>(k)], local[static_cast<std::size_t>(x)]) = c;
      }
    }
    mod.act.push_back(std::move(blk));
  }
  return mod;
}

}  // namespace detail

/// The summand A e_v of the left regular module, action by left multiplication.
template <Field F>
FDModule<F> regular_column(std::shared_ptr<const FDAlgebra<F>> alg, int v) {
  return detail::module_on_coords(alg, column_coords(*alg, v));
}

/// The left regular module itself.
template <Field F>
FDModule<F> regular_module(std::shared_ptr<const FDAlgebra<F>> alg) {
  std::vector<int> coords;
  for (int u = 0; u < alg->vertex_count(); ++u)
    for (int i = 0; i < alg->dim(); ++i)
      if (alg->head(i) == u) coords.push_back(i);
  return detail::module_on_coords(alg, coords);
}

/// Module homomorphism, stored as per-vertex blocks.
template <Field F>
struct ModuleHom {
  std::vector<Matrix<F>> blocks;

  Matrix<F> total(const FDModule<F>& src, const FDModule<F>& tgt) const {
    Matrix<F> m(tgt.total_dim(), src.total_dim());
    for (std::size_t v = 0; v < blocks.size(); ++v)
      m.set_block(tgt.offset(static_cast<int>(v)), src.offset(static_cast<int>(v)), blocks[v]);
    return m;
  }
};

template <Field F>
ModuleHom<F> identity_hom(const FDModule<F>& m) {
  ModuleHom<F> h;
  for (int d : m.dims) h.blocks.push_back(Matrix<F>::identity(d));
  return h;
}

template <Field F>
ModuleHom<F> hom_compose(const ModuleHom<F>& g, const ModuleHom<F>& h) {
  ModuleHom<F> out;
  for (std::size_t v = 0; v < g.blocks.size(); ++v) out.blocks.push_back(g.blocks[v] * h.blocks[v]);
  return out;
}

template <Field F>
bool is_module_hom(const FDModule<F>& src, const FDModule<F>& tgt, const ModuleHom<F>& h) {
  for (int b = 0; b < src.alg->dim(); ++b) {
    int tl = src.alg->tail(b), hd = src.alg->head(b);
    Matrix<F> lhs = h.blocks[static_cast<std::size_t>(hd)] * src.act[static_cast<std::size_t>(b)];
    Matrix<F> rhs = tgt.act[static_cast<std::size_t>(b)] * h.blocks[static_cast<std::size_t>(tl)];
    if (!(lhs == rhs)) return false;
  }
  return true;
}

/// Basis of the space of module homomorphisms M -> N: solves the linear
/// system "commutes with the action of every basis element".
template <Field F>
std::vector<ModuleHom<F>> hom_space(const FDModule<F>& m, const FDModule<F>& n) {
  require(m.alg == n.alg, "reference", "hom_space needs modules over the same algebra");
  const FDAlgebra<F>& a = *m.alg;
  int nv = a.vertex_count();
  std::vector<int> uoff(static_cast<std::size_t>(nv) + 1, 0);
  for (int v = 0; v < nv; ++v)
    uoff[static_cast<std::size_t>(v) + 1] = uoff[static_cast<std::size_t>(v)] + n.dims[static_cast<std::size_t>(v)] * m.dims[static_cast<std::size_t>(v)];
  int unknowns = uoff[static_cast<std::size_t>(nv)];
  auto slot = [&](int v, int r, int c) { return uoff[static_cast<std::size_t>(v)] + r * m.dims[static_cast<std::size_t>(v)] + c; };

  std::vector<Vector<F>> rows;
  for (int b = 0; b < a.dim(); ++b) {
    if (a.is_trivial(b)) continue;
    int tl = a.tail(b), hd = a.head(b);
    const Matrix<F>& am = m.act[static_cast<std::size_t>(b)];
    const Matrix<F>& an = n.act[static_cast<std::size_t>(b)];
    for (int r = 0; r < n.dims[static_cast<std::size_t>(hd)]; ++r)
      for (int c = 0; c < m.dims[static_cast<std::size_t>(tl)]; ++c) {
        Vector<F> row(static_cast<std::size_t>(unknowns));
        for (int k = 0; k < m.dims[static_cast<std::size_t>(hd)]; ++k)
          if (!am.at(k, c).is_zero()) row[static_cast<std::size_t>(slot(hd, r, k))] += am.at(k, c);
        for (int k = 0; k < n.dims[static_cast<std::size_t>(tl)]; ++k)
          if (!an.at(r, k).is_zero()) row[static_cast<std::size_t>(slot(tl, k, c))] -= an.at(r, k);
        rows.push_back(std::move(row));
      }
  }
  Matrix<F> sys(static_cast<int>(rows.size()), unknowns);
  for (std::size_t i = 0; i < rows.size(); ++i) sys.set_row(static_cast<int>(i), rows[i]);
  std::vector<ModuleHom<F>> out;
  for (const Vector<F>& sol : kernel_basis(sys)) {
    ModuleHom<F> h;
    for (int v = 0; v < nv; ++v) {
      Matrix<F> blk(n.dims[static_cast<std::size_t>(v)], m.dims[static_cast<std::size_t>(v)]);
      for (int r = 0; r < blk.rows(); ++r)
        for (int c = 0; c < blk.cols(); ++c) blk.at(r, c) = sol[static_cast<std::size_t>(slot(v, r, c))];
      h.blocks.push_back(std::move(blk));
    }
    out.push_back(std::move(h));
  }
  return out;
}

/// True when the submodule generated by the distinguished-vertex block is
/// everything. The zero module counts as 0-generated.
template <Field F>
bool is_zero_generated(const FDModule<F>& m) {
  int total = m.total_dim();
  if (total == 0) return true;
  const FDAlgebra<F>& a = *m.alg;
  int s = a.source;
  if (m.dims[static_cast<std::size_t>(s)] == 0) return false;
  std::vector<Vector<F>> span;
  for (int b = 0; b < a.dim(); ++b) {
    if (a.tail(b) != s) continue;
    for (int c = 0; c < m.dims[static_cast<std::size_t>(s)]; ++c) {
      Vector<F> v(static_cast<std::size_t>(total));
      for (int r = 0; r < m.dims[static_cast<std::size_t>(a.head(b))]; ++r)
        v[static_cast<std::size_t>(m.offset(a.head(b)) + r)] = m.act[static_cast<std::size_t>(b)].at(r, c);
      span.push_back(std::move(v));
    }
  }
  return subspace_from_vectors(span, total).dim() == total;
}

enum class Iso { Yes, No, Inconclusive };

template <Field F>
struct IsoResult {
  Iso verdict = Iso::Inconclusive;
  std::string reason;
  std::optional<ModuleHom<F>> witness;
  bool yes() const { return verdict == Iso::Yes; }
  bool no() const { return verdict == Iso::No; }
};

namespace detail {

// Evaluation of the column A e_source on the source basis vector, one block
// per head vertex. Kernel = annihilator of the module's source generator.
template <Field F>
std::vector<Matrix<F>> eval_blocks(const FDModule<F>& m, const std::vector<std::vector<int>>& cols_by_vertex) {
  const FDAlgebra<F>& a = *m.alg;
  std::vector<Matrix<F>> out;
  for (int u = 0; u < a.vertex_count(); ++u) {
    Matrix<F> e(m.dims[static_cast<std::size_t>(u)], static_cast<int>(cols_by_vertex[static_cast<std::size_t>(u)].size()));
    for (std::size_t k = 0; k < cols_by_vertex[static_cast<std::size_t>(u)].size(); ++k)
      e.set_col(static_cast<int>(k), m.act[static_cast<std::size_t>(cols_by_vertex[static_cast<std::size_t>(u)][k])].col(0));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

/// Isomorphism test. For 0-generated modules with one-dimensional source
/// block the decision is exact: the annihilators of the source generators
/// inside A e_source coincide iff the modules are isomorphic. Otherwise a
/// fixed sequence of combinations of a Hom basis is searched for an
/// invertible element, reporting Inconclusive when the search exhausts.
template <Field F>
IsoResult<F> is_isomorphic(const FDModule<F>& m, const FDModule<F>& n) {
  require(m.alg == n.alg, "reference", "is_isomorphic needs modules over the same algebra");
  const FDAlgebra<F>& a = *m.alg;
  IsoResult<F> res;
  if (m.dims != n.dims) {
    res.verdict = Iso::No;
    res.reason = "dimension vectors differ";
    return res;
  }
  if (m.total_dim() == 0) {
    res.verdict = Iso::Yes;
    res.reason = "zero modules";
    res.witness = identity_hom(m);
    return res;
  }
  int s = a.source;
  bool exact_case = m.dims[static_cast<std::size_t>(s)] == 1 && is_zero_generated(m) && is_zero_generated(n);
  if (exact_case) {
    std::vector<std::vector<int>> cols(static_cast<std::size_t>(a.vertex_count()));
    for (int i : column_coords(a, s)) cols[static_cast<std::size_t>(a.head(i))].push_back(i);
    std::vector<Matrix<F>> em = detail::eval_blocks(m, cols), en = detail::eval_blocks(n, cols);
    for (int u = 0; u < a.vertex_count(); ++u) {
      Subspace<F> km = subspace_from_vectors(kernel_basis(em[static_cast<std::size_t>(u)]), em[static_cast<std::size_t>(u)].cols());
      Subspace<F> kn = subspace_from_vectors(kernel_basis(en[static_cast<std::size_t>(u)]), en[static_cast<std::size_t>(u)].cols());
      if (!subspace_equal(km, kn)) {
        res.verdict = Iso::No;
        res.reason = "source annihilators differ at vertex '" + a.vertex_names[static_cast<std::size_t>(u)] + "'";
        return res;
      }
    }
    ModuleHom<F> h;
    for (int u = 0; u < a.vertex_count(); ++u) {
      Matrix<F> blk(n.dims[static_cast<std::size_t>(u)], m.dims[static_cast<std::size_t>(u)]);
      for (int j = 0; j < m.dims[static_cast<std::size_t>(u)]; ++j) {
        Vector<F> e(static_cast<std::size_t>(m.dims[static_cast<std::size_t>(u)]));
        e[static_cast<std::size_t>(j)] = F(1);
        auto xi = solve_linear(em[static_cast<std::size_t>(u)], e);
        require(xi.has_value(), "arith", "internal: evaluation not surjective on a 0-generated module");
        blk.set_col(j, en[static_cast<std::size_t>(u)].apply(*xi));
      }
      h.blocks.push_back(std::move(blk));
    }
    res.verdict = Iso::Yes;
    res.reason = "source annihilators coincide";
    res.witness = std::move(h);
    return res;
  }

  std::vector<ModuleHom<F>> h1 = hom_space(m, n);
  std::vector<ModuleHom<F>> h2 = hom_space(n, m);
  std::vector<ModuleHom<F>> e1 = hom_space(m, m);
  std::vector<ModuleHom<F>> e2 = hom_space(n, n);
  if (h1.size() != h2.size() || e1.size() != e2.size()) {
    res.verdict = Iso::No;
    res.reason = "hom space dimensions differ";
    return res;
  }
  if (h1.empty()) {
    res.verdict = Iso::No;
    res.reason = "no nonzero homomorphisms";
    return res;
  }
  auto invertible = [&](const ModuleHom<F>& h) {
    for (std::size_t v = 0; v < h.blocks.size(); ++v) {
      const Matrix<F>& b = h.blocks[v];
      if (b.rows() != b.cols()) return false;
      if (rank(b) != b.rows()) return false;
    }
    return true;
  };
  auto combine = [&](const std::vector<long>& cs) {
    ModuleHom<F> h;
    for (int v = 0; v < a.vertex_count(); ++v) {
      Matrix<F> blk(n.dims[static_cast<std::size_t>(v)], m.dims[static_cast<std::size_t>(v)]);
      for (std::size_t k = 0; k < h1.size(); ++k)
        if (cs[k] != 0) blk = blk + h1[k].blocks[static_cast<std::size_t>(v)].scaled(F(cs[k]));
      h.blocks.push_back(std::move(blk));
    }
    return h;
  };
  std::vector<long> cs(h1.size(), 0);
  for (std::size_t k = 0; k < h1.size(); ++k) {
    std::fill(cs.begin(), cs.end(), 0);
    cs[k] = 1;
    ModuleHom<F> h = combine(cs);
    if (invertible(h)) {
      res.verdict = Iso::Yes;
      res.reason = "invertible hom basis element";
      res.witness = std::move(h);
      return res;
    }
  }
  std::mt19937 gen(0xC0FFEEu);
  for (int t = 0; t < 200; ++t) {
    for (std::size_t k = 0; k < cs.size(); ++k) cs[k] = static_cast<long>(gen() % 5) - 2;
    ModuleHom<F> h = combine(cs);
    if (invertible(h)) {
      res.verdict = Iso::Yes;
      res.reason = "invertible combination found";
      res.witness = std::move(h);
      return res;
    }
  }
  res.verdict = Iso::Inconclusive;
  res.reason = "no invertible combination found; hom dimensions are symmetric";
  return res;
}

/// Direct sum, summand order preserved; voffset records where each summand
/// sits inside every vertex block.
template <Field F>
struct DirectSum {
  FDModule<F> module;
  std::vector<std::vector<int>> voffset;
};

template <Field F>
DirectSum<F> direct_sum(const std::vector<FDModule<F>>& parts) {
  require(!parts.empty(), "shape", "direct sum of nothing needs an algebra");
  auto alg = parts.front().alg;
  DirectSum<F> out;
  out.module.alg = alg;
  out.module.dims.assign(static_cast<std::size_t>(alg->vertex_count()), 0);
  for (const auto& p : parts) {
    require(p.alg == alg, "reference", "direct sum needs a common algebra");
    std::vector<int> off;
    for (int v = 0; v < alg->vertex_count(); ++v) {
      off.push_back(out.module.dims[static_cast<std::size_t>(v)]);
      out.module.dims[static_cast<std::size_t>(v)] += p.dims[static_cast<std::size_t>(v)];
    }
    out.voffset.push_back(std::move(off));
  }
  for (int b = 0; b < alg->dim(); ++b) {
    Matrix<F> blk(out.module.dims[static_cast<std::size_t>(alg->head(b))], out.module.dims[static_cast<std::size_t>(alg->tail(b))]);
    for (std::size_t s = 0; s < parts.size(); ++s)
      blk.set_block(out.voffset[s][static_cast<std::size_t>(alg->head(b))], out.voffset[s][static_cast<std::size_t>(alg->tail(b))],
                    parts[s].act[static_cast<std::size_t>(b)]);
    out.module.act.push_back(std::move(blk));
  }
  return out;
}

/// Canonical basis of a column span with O(1) coordinate extraction.
template <Field F>
struct ColumnBasis {
  Subspace<F> rows;  // RREF rows are the basis vectors
  int dim() const { return rows.dim(); }
  Matrix<F> as_columns() const { return rows.rows.transpose(); }
  Vector<F> express(const Vector<F>& w) const {
    Vector<F> out(static_cast<std::size_t>(rows.dim()));
    for (int k = 0; k < rows.dim(); ++k) out[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(rows.pivots[static_cast<std::size_t>(k)])];
    Vector<F> check = w;
    for (int k = 0; k < rows.dim(); ++k)
      for (int j = 0; j < rows.ambient(); ++j)
        if (!rows.rows.at(k, j).is_zero()) check[static_cast<std::size_t>(j)] -= out[static_cast<std::size_t>(k)] * rows.rows.at(k, j);
    for (const F& x : check) require(x.is_zero(), "arith", "vector outside the recorded span");
    return out;
  }
};

template <Field F>
ColumnBasis<F> column_basis_of(const Matrix<F>& cols) {
  return ColumnBasis<F>{subspace_from_rows(cols.transpose())};
}

template <Field F>
struct ImageModule {
  FDModule<F> module;
  ModuleHom<F> corestriction;  // source -> image, surjective
  ModuleHom<F> inclusion;      // image -> target
};

/// Image of a module homomorphism with its induced action.
template <Field F>
ImageModule<F> image_module(const FDModule<F>& src, const FDModule<F>& tgt, const ModuleHom<F>& h) {
  const FDAlgebra<F>& a = *src.alg;
  std::vector<ColumnBasis<F>> cb;
  for (int v = 0; v < a.vertex_count(); ++v) cb.push_back(column_basis_of(h.blocks[static_cast<std::size_t>(v)]));
  ImageModule<F> out;
  out.module.alg = src.alg;
  for (int v = 0; v < a.vertex_count(); ++v) out.module.dims.push_back(cb[static_cast<std::size_t>(v)].dim());
  for (int b = 0; b < a.dim(); ++b) {
    int tl = a.tail(b), hd = a.head(b);
    Matrix<F> blk(out.module.dims[static_cast<std::size_t>(hd)], out.module.dims[static_cast<std::size_t>(tl)]);
    Matrix<F> basis_cols = cb[static_cast<std::size_t>(tl)].as_columns();
    for (int j = 0; j < blk.cols(); ++j)
      blk.set_col(j, cb[static_cast<std::size_t>(hd)].express(tgt.act[static_cast<std::size_t>(b)].apply(basis_cols.col(j))));
    out.module.act.push_back(std::move(blk));
  }
  for (int v = 0; v < a.vertex_count(); ++v) {
    Matrix<F> cores(out.module.dims[static_cast<std::size_t>(v)], src.dims[static_cast<std::size_t>(v)]);
    for (int j = 0; j < src.dims[static_cast<std::size_t>(v)]; ++j)
      cores.set_col(j, cb[static_cast<std::size_t>(v)].express(h.blocks[static_cast<std::size_t>(v)].col(j)));
    out.corestriction.blocks.push_back(std::move(cores));
    out.inclusion.blocks.push_back(cb[static_cast<std::size_t>(v)].as_columns());
  }
  return out;
}

template <Field F>
struct QuotientModule {
  FDModule<F> module;
  ModuleHom<F> projection;
};

/// Quotient by an action-invariant graded subspace (RREF basis per vertex).
template <Field F>
QuotientModule<F> quotient_module(const FDModule<F>& m, const std::vector<Subspace<F>>& sub) {
  const FDAlgebra<F>& a = *m.alg;
  require(static_cast<int>(sub.size()) == a.vertex_count(), "shape", "need one subspace per vertex");
  for (int v = 0; v < a.vertex_count(); ++v)
    require(sub[static_cast<std::size_t>(v)].ambient() == m.dims[static_cast<std::size_t>(v)], "shape",
            "subspace ambient mismatch at a vertex");
  for (int b = 0; b < a.dim(); ++b) {
    int tl = a.tail(b), hd = a.head(b);
    for (int k = 0; k < sub[static_cast<std::size_t>(tl)].dim(); ++k) {
      Vector<F> img = m.act[static_cast<std::size_t>(b)].apply(sub[static_cast<std::size_t>(tl)].rows.row(k));
      require(subspace_contains(sub[static_cast<std::size_t>(hd)], img), "shape", "subspace is not action-invariant");
    }
  }
  QuotientModule<F> out;
  out.module.alg = m.alg;
  std::vector<std::vector<int>> freecols;
  for (int v = 0; v < a.vertex_count(); ++v) {
    std::vector<bool> piv(static_cast<std::size_t>(m.dims[static_cast<std::size_t>(v)]), false);
    for (int p : sub[static_cast<std::size_t>(v)].pivots) piv[static_cast<std::size_t>(p)] = true;
    std::vector<int> fc;
    for (int j = 0; j < m.dims[static_cast<std::size_t>(v)]; ++j)
      if (!piv[static_cast<std::size_t>(j)]) fc.push_back(j);
    out.module.dims.push_back(static_cast<int>(fc.size()));
    freecols.push_back(std::move(fc));
  }
  auto reduce_coords = [&](int v, const Vector<F>& x) {
    Vector<F> r = coset_reduce(x, sub[static_cast<std::size_t>(v)]);
    Vector<F> out_local(freecols[static_cast<std::size_t>(v)].size());
    for (std::size_t k = 0; k < freecols[static_cast<std::size_t>(v)].size(); ++k)
      out_local[k] = r[static_cast<std::size_t>(freecols[static_cast<std::size_t>(v)][k])];
    return out_local;
  };
  for (int b = 0; b < a.dim(); ++b) {
    int tl = a.tail(b), hd = a.head(b);
    Matrix<F> blk(out.module.dims[static_cast<std::size_t>(hd)], out.module.dims[static_cast<std::size_t>(tl)]);
    for (std::size_t k = 0; k < freecols[static_cast<std::size_t>(tl)].size(); ++k) {
      Vector<F> e(static_cast<std::size_t>(m.dims[static_cast<std::size_t>(tl)]));
      e[static_cast<std::size_t>(freecols[static_cast<std::size_t>(tl)][k])] = F(1);
      blk.set_col(static_cast<int>(k), reduce_coords(hd, m.act[static_cast<std::size_t>(b)].apply(e)));
    }
    out.module.act.push_back(std::move(blk));
  }
  for (int v = 0; v < a.vertex_count(); ++v) {
    Matrix<F> proj(out.module.dims[static_cast<std::size_t>(v)], m.dims[static_cast<std::size_t>(v)]);
    for (int j = 0; j < m.dims[static_cast<std::size_t>(v)]; ++j) {
      Vector<F> e(static_cast<std::size_t>(m.dims[static_cast<std::size_t>(v)]));
      e[static_cast<std::size_t>(j)] = F(1);
      proj.set_col(j, reduce_coords(v, e));
    }
    out.projection.blocks.push_back(std::move(proj));
  }
  return out;
}

/// Per-vertex bases of the submodule generated by total-space vectors.
template <Field F>
std::vector<Subspace<F>> submodule_generated(const FDModule<F>& m, const std::vector<Vector<F>>& totals) {
  const FDAlgebra<F>& a = *m.alg;
  int total = m.total_dim();
  std::vector<SparseVec<F>> gens;
  for (const auto& v : totals) {
    require(static_cast<int>(v.size()) == total, "shape", "generator dimension mismatch");
    SparseVec<F> s;
    for (int i = 0; i < total; ++i)
      if (!v[static_cast<std::size_t>(i)].is_zero()) s.emplace_back(i, v[static_cast<std::size_t>(i)]);
    gens.push_back(std::move(s));
  }
  auto apply = [&](int b, const SparseVec<F>& v) { return m.apply_basis_sparse(b, v); };
  SparseRref<F> acc = spin_closure_sparse<F>(std::move(gens), a.dim(), apply);
  std::vector<std::vector<Vector<F>>> rows(static_cast<std::size_t>(a.vertex_count()));
  for (const auto& [p, row] : acc.rows()) {
    int v = m.vertex_of(p);
    Vector<F> local(static_cast<std::size_t>(m.dims[static_cast<std::size_t>(v)]));
    for (const auto& [i, c] : row) {
      require(m.vertex_of(i) == v, "shape", "internal: submodule row not graded");
      local[static_cast<std::size_t>(i - m.offset(v))] = c;
    }
    rows[static_cast<std::size_t>(v)].push_back(std::move(local));
  }
  std::vector<Subspace<F>> out;
  for (int v = 0; v < a.vertex_count(); ++v)
    out.push_back(subspace_from_vectors(rows[static_cast<std::size_t>(v)], m.dims[static_cast<std::size_t>(v)]));
  return out;
}

}  // namespace corner
