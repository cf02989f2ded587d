#pragma once
#include <tuple>

#include "corner/module.hpp"

namespace corner {

struct CornerSet {
  std::vector<int> verts;
};

struct Covering {
  std::vector<CornerSet> sets;
};

template <Field F>
CornerSet make_corner_set(const FDAlgebra<F>& a, std::vector<int> verts) {
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  for (int v : verts) require(v >= 0 && v < a.vertex_count(), "corner", "corner set vertex out of range");
  require(std::find(verts.begin(), verts.end(), a.source) != verts.end(), "corner",
          "corner set must contain the distinguished vertex");
  return CornerSet{std::move(verts)};
}

template <Field F>
Covering make_covering(const FDAlgebra<F>& a, std::vector<std::vector<int>> sets) {
  require(!sets.empty(), "corner", "covering needs at least one corner set");
  Covering cov;
  std::vector<bool> seen(static_cast<std::size_t>(a.vertex_count()), false);
  for (auto& s : sets) {
    CornerSet cs = make_corner_set(a, std::move(s));
    for (int v : cs.verts) seen[static_cast<std::size_t>(v)] = true;
    cov.sets.push_back(std::move(cs));
  }
  for (int v = 0; v < a.vertex_count(); ++v)
    require(seen[static_cast<std::size_t>(v)], "corner",
            "covering misses vertex '" + a.vertex_names[static_cast<std::size_t>(v)] + "'");
  return cov;
}

/// Cornering restriction j*: keep the blocks over the corner set; each
/// corner basis element acts by its parent block.
template <Field F>
FDModule<F> restrict_module(const Cornered<F>& c, const FDModule<F>& f) {
  require(f.alg == c.parent, "reference", "restrict: module lives over a different algebra");
  FDModule<F> out;
  out.alg = c.algebra;
  for (int v : c.verts) out.dims.push_back(f.dims[static_cast<std::size_t>(v)]);
  for (int b = 0; b < c.algebra->dim(); ++b) out.act.push_back(f.act[static_cast<std::size_t>(c.embed[static_cast<std::size_t>(b)])]);
  return out;
}

template <Field F>
ModuleHom<F> restrict_hom(const Cornered<F>& c, const ModuleHom<F>& h) {
  ModuleHom<F> out;
  for (int v : c.verts) out.blocks.push_back(h.blocks[static_cast<std::size_t>(v)]);
  return out;
}

// ---------------------------------------------------------------------------
// Induction j_! = A e_I (x)_{A_I} (-), modelled as the span of pairs
// x (x) n with x in A e_I, n in N_{tail x}, modulo the balancing subspace.
// The balancing subspace is the left-module closure of the relations
// h (x) n - e_{head h} (x) (h n) for h running over the corner basis.

template <Field F>
struct Induced {
  Cornered<F> c;
  FDModule<F> nmod;    // the corner module that was induced
  FDModule<F> module;  // the result, over the parent algebra
  std::vector<std::pair<int, int>> wpairs;  // (parent basis x, local n), grouped by head(x)
  std::vector<int> wbase;                   // parent basis -> first W coordinate, or -1
  SparseRref<F> balancing;
  std::vector<int> module_to_w;
  std::vector<int> w_to_module;

  int wsize() const { return static_cast<int>(wpairs.size()); }
  int pair_coord(int x, int n) const {
    require(wbase[static_cast<std::size_t>(x)] >= 0, "reference", "internal: pair outside A e_I");
    return wbase[static_cast<std::size_t>(x)] + n;
  }

  /// Canonical image of a presentation-space vector in the quotient module.
  Vector<F> reduce_w(const SparseVec<F>& wv) const {
    SparseVec<F> r = balancing.reduce(wv);
    Vector<F> out(static_cast<std::size_t>(module.total_dim()));
    for (const auto& [i, cf] : r) {
      int mc = w_to_module[static_cast<std::size_t>(i)];
      require(mc >= 0, "reference", "internal: reduced vector hits a pivot coordinate");
      out[static_cast<std::size_t>(mc)] = cf;
    }
    return out;
  }
};

template <Field F>
Induced<F> induce(const Cornered<F>& c, const FDModule<F>& n) {
  require(n.alg == c.algebra, "reference", "induce: module is not over the cornered algebra");
  const FDAlgebra<F>& a = *c.parent;
  Induced<F> ind;
  ind.c = c;
  ind.nmod = n;
  ind.wbase.assign(static_cast<std::size_t>(a.dim()), -1);
  for (int u = 0; u < a.vertex_count(); ++u)
    for (int x = 0; x < a.dim(); ++x) {
      if (a.head(x) != u) continue;
      int tl = c.vlocal[static_cast<std::size_t>(a.tail(x))];
      if (tl < 0) continue;
      ind.wbase[static_cast<std::size_t>(x)] = ind.wsize();
      for (int k = 0; k < n.dims[static_cast<std::size_t>(tl)]; ++k) ind.wpairs.emplace_back(x, k);
    }

  std::vector<SparseVec<F>> gens;
  for (int h = 0; h < c.algebra->dim(); ++h) {
    if (c.algebra->is_trivial(h)) continue;
    int tl = c.algebra->tail(h);
    int hx = c.embed[static_cast<std::size_t>(h)];
    int ehd = a.idem[static_cast<std::size_t>(c.verts[static_cast<std::size_t>(c.algebra->head(h))])];
    const Matrix<F>& am = n.act[static_cast<std::size_t>(h)];
    for (int k = 0; k < n.dims[static_cast<std::size_t>(tl)]; ++k) {
      std::map<int, F> acc;
      acc[ind.pair_coord(hx, k)] = F(1);
      for (int r = 0; r < am.rows(); ++r) {
        if (am.at(r, k).is_zero()) continue;
        F& slot = acc.try_emplace(ind.pair_coord(ehd, r), F(0)).first->second;
        slot -= am.at(r, k);
      }
      SparseVec<F> v;
      for (const auto& [i, cf] : acc)
        if (!cf.is_zero()) v.emplace_back(i, cf);
      if (!v.empty()) gens.push_back(std::move(v));
    }
  }

  // Left-multiplication operators generating the A-action.
  std::vector<SparseVec<F>> op_elems;
  if (a.quiver.has_value()) {
    for (const auto& cls : a.arrow_class)
      if (!cls.empty()) op_elems.push_back(cls);
  } else {
    for (int b = 0; b < a.dim(); ++b)
      if (!a.is_trivial(b)) op_elems.push_back(SparseVec<F>{{b, F(1)}});
  }
  std::vector<std::vector<std::optional<SparseVec<F>>>> lcache(
      op_elems.size(), std::vector<std::optional<SparseVec<F>>>(static_cast<std::size_t>(a.dim())));
  auto lmul = [&](int op, int x) -> const SparseVec<F>& {
    auto& slot = lcache[static_cast<std::size_t>(op)][static_cast<std::size_t>(x)];
    if (!slot) slot = a.mul_elems(op_elems[static_cast<std::size_t>(op)], SparseVec<F>{{x, F(1)}});
    return *slot;
  };
  auto apply = [&](int op, const SparseVec<F>& v) -> SparseVec<F> {
    std::map<int, F> acc;
    for (const auto& [wc, cv] : v) {
      const auto& [x, k] = ind.wpairs[static_cast<std::size_t>(wc)];
      for (const auto& [y, cf] : lmul(op, x)) {
        F& slot = acc.try_emplace(ind.pair_coord(y, k), F(0)).first->second;
        slot += cv * cf;
      }
    }
    SparseVec<F> out;
    for (const auto& [i, cf] : acc)
      if (!cf.is_zero()) out.emplace_back(i, cf);
    return out;
  };
  ind.balancing = spin_closure_sparse<F>(std::move(gens), static_cast<int>(op_elems.size()), apply);

  ind.w_to_module.assign(static_cast<std::size_t>(ind.wsize()), -1);
  for (int w = 0; w < ind.wsize(); ++w) {
    if (ind.balancing.is_pivot(w)) continue;
    ind.w_to_module[static_cast<std::size_t>(w)] = static_cast<int>(ind.module_to_w.size());
    ind.module_to_w.push_back(w);
  }
  ind.module.alg = c.parent;
  ind.module.dims.assign(static_cast<std::size_t>(a.vertex_count()), 0);
  for (int w : ind.module_to_w)
    ++ind.module.dims[static_cast<std::size_t>(a.head(ind.wpairs[static_cast<std::size_t>(w)].first))];

  for (int y = 0; y < a.dim(); ++y) {
    int tl = a.tail(y), hd = a.head(y);
    Matrix<F> blk(ind.module.dims[static_cast<std::size_t>(hd)], ind.module.dims[static_cast<std::size_t>(tl)]);
    int col = 0;
    for (int mc = 0; mc < ind.module.total_dim(); ++mc) {
      const auto& [x, k] = ind.wpairs[static_cast<std::size_t>(ind.module_to_w[static_cast<std::size_t>(mc)])];
      if (a.head(x) != tl) continue;
      SparseVec<F> wv;
      for (const auto& [z, cf] : a.mul(y, x)) wv.emplace_back(ind.pair_coord(z, k), cf);
      std::sort(wv.begin(), wv.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
      Vector<F> total = ind.reduce_w(wv);
      for (int r = 0; r < blk.rows(); ++r) blk.at(r, col) = total[static_cast<std::size_t>(ind.module.offset(hd) + r)];
      ++col;
    }
    ind.module.act.push_back(std::move(blk));
  }
  return ind;
}

/// Functorial action of induction on a corner-module homomorphism.
template <Field F>
ModuleHom<F> induce_hom(const Induced<F>& src, const Induced<F>& dst, const ModuleHom<F>& h) {
  const FDAlgebra<F>& a = *src.c.parent;
  ModuleHom<F> out;
  for (int v = 0; v < a.vertex_count(); ++v)
    out.blocks.push_back(Matrix<F>(dst.module.dims[static_cast<std::size_t>(v)], src.module.dims[static_cast<std::size_t>(v)]));
  for (int mc = 0; mc < src.module.total_dim(); ++mc) {
    const auto& [x, k] = src.wpairs[static_cast<std::size_t>(src.module_to_w[static_cast<std::size_t>(mc)])];
    int u = a.head(x);
    int tl = src.c.vlocal[static_cast<std::size_t>(a.tail(x))];
    SparseVec<F> wv;
    const Matrix<F>& hb = h.blocks[static_cast<std::size_t>(tl)];
    for (int r = 0; r < hb.rows(); ++r)
      if (!hb.at(r, k).is_zero()) wv.emplace_back(dst.pair_coord(x, r), hb.at(r, k));
    std::sort(wv.begin(), wv.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    Vector<F> total = dst.reduce_w(wv);
    for (int r = 0; r < dst.module.dims[static_cast<std::size_t>(u)]; ++r)
      out.blocks[static_cast<std::size_t>(u)].at(r, mc - src.module.offset(u)) =
          total[static_cast<std::size_t>(dst.module.offset(u) + r)];
  }
  return out;
}

/// Counit of (j_!, j*) at F: x (x) f |-> x . f, evaluated on representative
/// pairs of the induced model of j_! j* F.
template <Field F>
ModuleHom<F> counit_shriek(const Induced<F>& ind, const FDModule<F>& f) {
  require(f.alg == ind.c.parent, "reference", "counit: module over the wrong algebra");
  for (std::size_t vc = 0; vc < ind.c.verts.size(); ++vc)
    require(ind.nmod.dims[vc] == f.dims[static_cast<std::size_t>(ind.c.verts[vc])], "shape",
            "counit: induced module was not built from the restriction of this module");
  const FDAlgebra<F>& a = *ind.c.parent;
  ModuleHom<F> out;
  for (int v = 0; v < a.vertex_count(); ++v)
    out.blocks.push_back(Matrix<F>(f.dims[static_cast<std::size_t>(v)], ind.module.dims[static_cast<std::size_t>(v)]));
  for (int mc = 0; mc < ind.module.total_dim(); ++mc) {
    const auto& [x, k] = ind.wpairs[static_cast<std::size_t>(ind.module_to_w[static_cast<std::size_t>(mc)])];
    int u = a.head(x);
    Vector<F> col = f.act[static_cast<std::size_t>(x)].col(k);
    for (int r = 0; r < f.dims[static_cast<std::size_t>(u)]; ++r)
      out.blocks[static_cast<std::size_t>(u)].at(r, mc - ind.module.offset(u)) = col[static_cast<std::size_t>(r)];
  }
  return out;
}

/// Unit of (j_!, j*) at N: n |-> class of e_v (x) n, a corner-module map
/// N -> j* j_! N.
template <Field F>
ModuleHom<F> unit_shriek(const Induced<F>& ind) {
  const FDAlgebra<F>& a = *ind.c.parent;
  const FDModule<F>& n = ind.nmod;
  ModuleHom<F> out;
  for (std::size_t vc = 0; vc < ind.c.verts.size(); ++vc) {
    int v = ind.c.verts[vc];
    Matrix<F> blk(ind.module.dims[static_cast<std::size_t>(v)], n.dims[vc]);
    for (int k = 0; k < n.dims[vc]; ++k) {
      SparseVec<F> wv{{ind.pair_coord(a.idem[static_cast<std::size_t>(v)], k), F(1)}};
      Vector<F> total = ind.reduce_w(wv);
      for (int r = 0; r < blk.rows(); ++r) blk.at(r, k) = total[static_cast<std::size_t>(ind.module.offset(v) + r)];
    }
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coinduction j_* = Hom_{A_I}(e_I A, -): grading-respecting solutions f of
// f(h x) = h f(x). This agrees with Hom_{A_I}(A, -) because e_I annihilates
// the complement (1 - e_I) A as a left A_I-module.

template <Field F>
struct Coinduced {
  Cornered<F> c;
  FDModule<F> nmod;
  FDModule<F> module;  // over the parent algebra
  std::vector<int> eIA;     // parent basis with head inside the corner, grouped by tail
  std::vector<int> ubase;   // parent basis -> unknown offset (global), or -1
  std::vector<std::pair<int, int>> urange;  // per parent vertex: [begin, end)
  std::vector<Subspace<F>> sols;            // per parent vertex, in local coordinates

  /// Coordinates of a raw solution (local to vertex v) in the solution basis.
  Vector<F> express(int v, const Vector<F>& g) const {
    const Subspace<F>& s = sols[static_cast<std::size_t>(v)];
    Vector<F> out(static_cast<std::size_t>(s.dim()));
    for (int k = 0; k < s.dim(); ++k) out[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(s.pivots[static_cast<std::size_t>(k)])];
    Vector<F> check = g;
    for (int k = 0; k < s.dim(); ++k)
      for (int j = 0; j < s.ambient(); ++j)
        if (!s.rows.at(k, j).is_zero()) check[static_cast<std::size_t>(j)] -= out[static_cast<std::size_t>(k)] * s.rows.at(k, j);
    for (const F& x : check) require(x.is_zero(), "arith", "internal: vector is not a coinduction solution");
    return out;
  }
};

template <Field F>
Coinduced<F> coinduce(const Cornered<F>& c, const FDModule<F>& n) {
  require(n.alg == c.algebra, "reference", "coinduce: module is not over the cornered algebra");
  const FDAlgebra<F>& a = *c.parent;
  Coinduced<F> cod;
  cod.c = c;
  cod.nmod = n;
  cod.ubase.assign(static_cast<std::size_t>(a.dim()), -1);
  int total = 0;
  for (int v = 0; v < a.vertex_count(); ++v) {
    int begin = total;
    for (int x = 0; x < a.dim(); ++x) {
      if (a.tail(x) != v) continue;
      int hl = c.vlocal[static_cast<std::size_t>(a.head(x))];
      if (hl < 0) continue;
      cod.eIA.push_back(x);
      cod.ubase[static_cast<std::size_t>(x)] = total;
      total += n.dims[static_cast<std::size_t>(hl)];
    }
    cod.urange.emplace_back(begin, total);
  }

  cod.module.alg = c.parent;
  for (int v = 0; v < a.vertex_count(); ++v) {
    auto [begin, end] = cod.urange[static_cast<std::size_t>(v)];
    int width = end - begin;
    std::vector<Vector<F>> rows;
    for (int h = 0; h < c.algebra->dim(); ++h) {
      if (c.algebra->is_trivial(h)) continue;
      int hx = c.embed[static_cast<std::size_t>(h)];
      int h_tail_parent = a.tail(hx);
      int hl_head = c.algebra->head(h), hl_tail = c.algebra->tail(h);
      const Matrix<F>& am = n.act[static_cast<std::size_t>(h)];
      for (int x : cod.eIA) {
        if (a.tail(x) != v || a.head(x) != h_tail_parent) continue;
        for (int r = 0; r < n.dims[static_cast<std::size_t>(hl_head)]; ++r) {
          Vector<F> row(static_cast<std::size_t>(width));
          for (const auto& [k, cf] : a.mul(hx, x))
            row[static_cast<std::size_t>(cod.ubase[static_cast<std::size_t>(k)] - begin + r)] += cf;
          for (int s = 0; s < n.dims[static_cast<std::size_t>(hl_tail)]; ++s)
            if (!am.at(r, s).is_zero())
              row[static_cast<std::size_t>(cod.ubase[static_cast<std::size_t>(x)] - begin + s)] -= am.at(r, s);
          rows.push_back(std::move(row));
        }
      }
    }
    Matrix<F> sys(static_cast<int>(rows.size()), width);
    for (std::size_t i = 0; i < rows.size(); ++i) sys.set_row(static_cast<int>(i), rows[i]);
    cod.sols.push_back(subspace_from_vectors(kernel_basis(sys), width));
    cod.module.dims.push_back(cod.sols.back().dim());
  }

  for (int y = 0; y < a.dim(); ++y) {
    int v = a.tail(y), u = a.head(y);
    auto [vb, ve] = cod.urange[static_cast<std::size_t>(v)];
    auto [ub, ue] = cod.urange[static_cast<std::size_t>(u)];
    Matrix<F> blk(cod.module.dims[static_cast<std::size_t>(u)], cod.module.dims[static_cast<std::size_t>(v)]);
    for (int beta = 0; beta < cod.module.dims[static_cast<std::size_t>(v)]; ++beta) {
      Vector<F> fvec = cod.sols[static_cast<std::size_t>(v)].rows.row(beta);
      Vector<F> g(static_cast<std::size_t>(ue - ub));
      for (int x : cod.eIA) {
        if (a.tail(x) != u) continue;
        int m = cod.nmod.dims[static_cast<std::size_t>(c.vlocal[static_cast<std::size_t>(a.head(x))])];
        for (const auto& [k, cf] : a.mul(x, y))
          for (int r = 0; r < m; ++r)
            g[static_cast<std::size_t>(cod.ubase[static_cast<std::size_t>(x)] - ub + r)] +=
                cf * fvec[static_cast<std::size_t>(cod.ubase[static_cast<std::size_t>(k)] - vb + r)];
      }
      blk.set_col(beta, cod.express(u, g));
    }
    cod.module.act.push_back(std::move(blk));
  }
  return cod;
}

/// Functorial action of coinduction on a corner-module homomorphism.
template <Field F>
ModuleHom<F> coinduce_hom(const Coinduced<F>& src, const Coinduced<F>& dst, const ModuleHom<F>& h) {
  const FDAlgebra<F>& a = *src.c.parent;
  ModuleHom<F> out;
  for (int v = 0; v < a.vertex_count(); ++v) {
    auto [sb, se] = src.urange[static_cast<std::size_t>(v)];
    auto [db, de] = dst.urange[static_cast<std::size_t>(v)];
    Matrix<F> blk(dst.module.dims[static_cast<std::size_t>(v)], src.module.dims[static_cast<std::size_t>(v)]);
    for (int beta = 0; beta < src.module.dims[static_cast<std::size_t>(v)]; ++beta) {
      Vector<F> fvec = src.sols[static_cast<std::size_t>(v)].rows.row(beta);
      Vector<F> g(static_cast<std::size_t>(de - db));
      for (int x : src.eIA) {
        if (a.tail(x) != v) continue;
        int hl = src.c.vlocal[static_cast<std::size_t>(a.head(x))];
        const Matrix<F>& hb = h.blocks[static_cast<std::size_t>(hl)];
        for (int r2 = 0; r2 < hb.rows(); ++r2)
          for (int r = 0; r < hb.cols(); ++r)
            if (!hb.at(r2, r).is_zero())
              g[static_cast<std::size_t>(dst.ubase[static_cast<std::size_t>(x)] - db + r2)] +=
                  hb.at(r2, r) * fvec[static_cast<std::size_t>(src.ubase[static_cast<std::size_t>(x)] - sb + r)];
      }
      blk.set_col(beta, dst.express(v, g));
    }
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

/// Unit of (j*, j_*) at F: f |-> (x |-> x . f), a parent-module map
/// F -> j_* j* F.
template <Field F>
ModuleHom<F> unit_star(const Coinduced<F>& cod, const FDModule<F>& f) {
  require(f.alg == cod.c.parent, "reference", "unit: module over the wrong algebra");
  for (std::size_t vc = 0; vc < cod.c.verts.size(); ++vc)
    require(cod.nmod.dims[vc] == f.dims[static_cast<std::size_t>(cod.c.verts[vc])], "shape",
            "unit: coinduced module was not built from the restriction of this module");
  const FDAlgebra<F>& a = *cod.c.parent;
  ModuleHom<F> out;
  for (int v = 0; v < a.vertex_count(); ++v) {
    auto [vb, ve] = cod.urange[static_cast<std::size_t>(v)];
    Matrix<F> blk(cod.module.dims[static_cast<std::size_t>(v)], f.dims[static_cast<std::size_t>(v)]);
    for (int j = 0; j < f.dims[static_cast<std::size_t>(v)]; ++j) {
      Vector<F> g(static_cast<std::size_t>(ve - vb));
      for (int x : cod.eIA) {
        if (a.tail(x) != v) continue;
        Vector<F> col = f.act[static_cast<std::size_t>(x)].col(j);
        for (std::size_t r = 0; r < col.size(); ++r)
          g[static_cast<std::size_t>(cod.ubase[static_cast<std::size_t>(x)] - vb) + r] += col[r];
      }
      blk.set_col(j, cod.express(v, g));
    }
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

/// Counit of (j*, j_*) at N: evaluation at the idempotent arguments, a
/// corner-module map j* j_* N -> N.
template <Field F>
ModuleHom<F> counit_star(const Coinduced<F>& cod) {
  const FDAlgebra<F>& a = *cod.c.parent;
  const FDModule<F>& n = cod.nmod;
  ModuleHom<F> out;
  for (std::size_t vc = 0; vc < cod.c.verts.size(); ++vc) {
    int v = cod.c.verts[vc];
    auto [vb, ve] = cod.urange[static_cast<std::size_t>(v)];
    int e = a.idem[static_cast<std::size_t>(v)];
    Matrix<F> blk(n.dims[vc], cod.module.dims[static_cast<std::size_t>(v)]);
    for (int beta = 0; beta < cod.module.dims[static_cast<std::size_t>(v)]; ++beta) {
      Vector<F> fvec = cod.sols[static_cast<std::size_t>(v)].rows.row(beta);
      for (int r = 0; r < n.dims[vc]; ++r)
        blk.at(r, beta) = fvec[static_cast<std::size_t>(cod.ubase[static_cast<std::size_t>(e)] - vb + r)];
    }
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The canonical map nu: j_! N -> j_* N, x (x) n |-> (y |-> (y x) . n).

namespace detail {

template <Field F>
Vector<F> nu_raw(const Induced<F>& ind, const Coinduced<F>& cod, int x, int k) {
  const FDAlgebra<F>& a = *ind.c.parent;
  const FDModule<F>& n = ind.nmod;
  int u = a.head(x);
  auto [ub, ue] = cod.urange[static_cast<std::size_t>(u)];
  Vector<F> g(static_cast<std::size_t>(ue - ub));
  for (int y : cod.eIA) {
    if (a.tail(y) != u) continue;
    for (const auto& [z, cf] : a.mul(y, x)) {
      int zl = ind.c.parent_to_corner[static_cast<std::size_t>(z)];
      require(zl >= 0, "descent", "internal: nu product leaves the corner");
      const Matrix<F>& am = n.act[static_cast<std::size_t>(zl)];
      for (int r = 0; r < am.rows(); ++r)
        if (!am.at(r, k).is_zero())
          g[static_cast<std::size_t>(cod.ubase[static_cast<std::size_t>(y)] - ub + r)] += cf * am.at(r, k);
    }
  }
  return g;
}

}  // namespace detail

/// nu evaluated on presentation generators and descent-checked against the
/// balancing subspace; descent failure would be an implementation bug and
/// raises an error.
template <Field F>
ModuleHom<F> nu_map(const Induced<F>& ind, const Coinduced<F>& cod) {
  require(ind.c.parent == cod.c.parent && ind.c.verts == cod.c.verts, "reference",
          "nu: induction and coinduction use different corners");
  require(ind.nmod.dims == cod.nmod.dims, "reference", "nu: different corner modules");
  const FDAlgebra<F>& a = *ind.c.parent;

  for (const auto& [piv, row] : ind.balancing.rows()) {
    int u = a.head(ind.wpairs[static_cast<std::size_t>(piv)].first);
    auto [ub, ue] = cod.urange[static_cast<std::size_t>(u)];
    Vector<F> acc(static_cast<std::size_t>(ue - ub));
    for (const auto& [wc, cf] : row) {
      const auto& [x, k] = ind.wpairs[static_cast<std::size_t>(wc)];
      require(a.head(x) == u, "descent", "internal: balancing row is not graded");
      Vector<F> g = detail::nu_raw(ind, cod, x, k);
      for (std::size_t i = 0; i < g.size(); ++i) acc[i] += cf * g[i];
    }
    for (const F& v : acc)
      require(v.is_zero(), "descent", "nu does not descend through the balancing subspace");
  }

  ModuleHom<F> out;
  for (int v = 0; v < a.vertex_count(); ++v)
    out.blocks.push_back(Matrix<F>(cod.module.dims[static_cast<std::size_t>(v)], ind.module.dims[static_cast<std::size_t>(v)]));
  for (int mc = 0; mc < ind.module.total_dim(); ++mc) {
    const auto& [x, k] = ind.wpairs[static_cast<std::size_t>(ind.module_to_w[static_cast<std::size_t>(mc)])];
    int u = a.head(x);
    Vector<F> col = cod.express(u, detail::nu_raw(ind, cod, x, k));
    for (std::size_t r = 0; r < col.size(); ++r)
      out.blocks[static_cast<std::size_t>(u)].at(static_cast<int>(r), mc - ind.module.offset(u)) = col[r];
  }
  return out;
}

// ---------------------------------------------------------------------------
// psi, phi, the splitting of Psi, slicing and reconstruction.

template <Field F>
struct PsiMap {
  std::vector<Cornered<F>> corners;
  std::vector<Induced<F>> parts;
  DirectSum<F> dom;
  ModuleHom<F> hom;  // dom.module -> F
};

/// psi_F: direct sum over the covering of the counits j_! j* F -> F.
template <Field F>
PsiMap<F> psi_map(const FDModule<F>& f, const Covering& cov) {
  PsiMap<F> out;
  for (const CornerSet& s : cov.sets) {
    Cornered<F> c = corner_algebra(f.alg, s.verts);
    FDModule<F> n = restrict_module(c, f);
    out.parts.push_back(induce(c, n));
    out.corners.push_back(std::move(c));
  }
  std::vector<FDModule<F>> mods;
  for (const auto& p : out.parts) mods.push_back(p.module);
  out.dom = direct_sum(mods);
  const FDAlgebra<F>& a = *f.alg;
  for (int v = 0; v < a.vertex_count(); ++v)
    out.hom.blocks.push_back(Matrix<F>(f.dims[static_cast<std::size_t>(v)], out.dom.module.dims[static_cast<std::size_t>(v)]));
  for (std::size_t t = 0; t < out.parts.size(); ++t) {
    ModuleHom<F> eps = counit_shriek(out.parts[t], f);
    for (int v = 0; v < a.vertex_count(); ++v)
      out.hom.blocks[static_cast<std::size_t>(v)].set_block(0, out.dom.voffset[t][static_cast<std::size_t>(v)],
                                                            eps.blocks[static_cast<std::size_t>(v)]);
  }
  return out;
}

template <Field F>
struct PhiMap {
  std::vector<Cornered<F>> corners;
  std::vector<Coinduced<F>> parts;
  DirectSum<F> cod;
  ModuleHom<F> hom;  // F -> cod.module
};

/// phi_F: direct sum over the covering of the units F -> j_* j* F.
template <Field F>
PhiMap<F> phi_map(const FDModule<F>& f, const Covering& cov) {
  PhiMap<F> out;
  for (const CornerSet& s : cov.sets) {
    Cornered<F> c = corner_algebra(f.alg, s.verts);
    FDModule<F> n = restrict_module(c, f);
    out.parts.push_back(coinduce(c, n));
    out.corners.push_back(std::move(c));
  }
  std::vector<FDModule<F>> mods;
  for (const auto& p : out.parts) mods.push_back(p.module);
  out.cod = direct_sum(mods);
  const FDAlgebra<F>& a = *f.alg;
  for (int v = 0; v < a.vertex_count(); ++v)
    out.hom.blocks.push_back(Matrix<F>(out.cod.module.dims[static_cast<std::size_t>(v)], f.dims[static_cast<std::size_t>(v)]));
  for (std::size_t t = 0; t < out.parts.size(); ++t) {
    ModuleHom<F> u = unit_star(out.parts[t], f);
    for (int v = 0; v < a.vertex_count(); ++v)
      out.hom.blocks[static_cast<std::size_t>(v)].set_block(out.cod.voffset[t][static_cast<std::size_t>(v)], 0,
                                                            u.blocks[static_cast<std::size_t>(v)]);
  }
  return out;
}

enum class SplitStyle { Assign, Average };

/// The linear section P of Psi on the regular module, expressed on the
/// presentation space of the bimodule summands (Psi is evaluated there as
/// x (x) z |-> x z, which descends to the quotient model). The deterministic
/// Assign style routes e_j A into the first covering set containing j; the
/// Average style spreads it with equal weights, matching the averaging
/// construction.
template <Field F>
struct Splitting {
  Covering cov;
  SplitStyle style = SplitStyle::Assign;
  std::vector<Cornered<F>> corners;
  std::vector<int> nrank;  // parent basis z -> local index within its head block
  // per parent basis element p: terms (slot, x, z, coeff) of P(p)
  std::vector<std::vector<std::tuple<int, int, int, F>>> p_cols;
  Matrix<F> psi_after_p;
  bool right_module_ok = false;
};

template <Field F>
Splitting<F> splitting_p(std::shared_ptr<const FDAlgebra<F>> alg, const Covering& cov, SplitStyle style) {
  const FDAlgebra<F>& a = *alg;
  Splitting<F> sp;
  sp.cov = cov;
  sp.style = style;
  for (const CornerSet& s : cov.sets) sp.corners.push_back(corner_algebra(alg, s.verts));

  sp.nrank.assign(static_cast<std::size_t>(a.dim()), -1);
  std::vector<int> counter(static_cast<std::size_t>(a.vertex_count()), 0);
  for (int u = 0; u < a.vertex_count(); ++u)
    for (int z = 0; z < a.dim(); ++z)
      if (a.head(z) == u) sp.nrank[static_cast<std::size_t>(z)] = counter[static_cast<std::size_t>(u)]++;

  for (int p = 0; p < a.dim(); ++p) {
    int j = a.head(p);
    std::vector<int> slots;
    for (std::size_t t = 0; t < cov.sets.size(); ++t)
      if (sp.corners[t].vlocal[static_cast<std::size_t>(j)] >= 0) slots.push_back(static_cast<int>(t));
    require(!slots.empty(), "corner", "internal: covering misses a vertex");
    std::vector<std::tuple<int, int, int, F>> col;
    if (style == SplitStyle::Assign) {
      col.emplace_back(slots.front(), a.idem[static_cast<std::size_t>(j)], p, F(1));
    } else {
      F w = F(1) / F(static_cast<long>(slots.size()));
      for (int t : slots) col.emplace_back(t, a.idem[static_cast<std::size_t>(j)], p, w);
    }
    sp.p_cols.push_back(std::move(col));
  }

  // Psi after P, evaluated through the structure constants.
  sp.psi_after_p = Matrix<F>(a.dim(), a.dim());
  for (int p = 0; p < a.dim(); ++p)
    for (const auto& [t, x, z, cf] : sp.p_cols[static_cast<std::size_t>(p)])
      for (const auto& [k, c2] : a.mul(x, z)) sp.psi_after_p.at(k, p) += cf * c2;

  // Right-module property P(p a) = P(p) a with the right action on the
  // second tensor slot.
  sp.right_module_ok = true;
  for (int p = 0; p < a.dim() && sp.right_module_ok; ++p)
    for (int ar = 0; ar < a.dim() && sp.right_module_ok; ++ar) {
      std::map<std::tuple<int, int, int>, F> lhs, rhs;
      for (const auto& [q, cq] : a.mul(p, ar))
        for (const auto& [t, x, z, cf] : sp.p_cols[static_cast<std::size_t>(q)]) {
          F& slot = lhs.try_emplace(std::make_tuple(t, x, z), F(0)).first->second;
          slot += cq * cf;
        }
      for (const auto& [t, x, z, cf] : sp.p_cols[static_cast<std::size_t>(p)])
        for (const auto& [z2, cz] : a.mul(z, ar)) {
          F& slot = rhs.try_emplace(std::make_tuple(t, x, z2), F(0)).first->second;
          slot += cf * cz;
        }
      for (auto& [key, v] : rhs) {
        auto it = lhs.find(key);
        F l = it == lhs.end() ? F(0) : it->second;
        if (!(l == v)) sp.right_module_ok = false;
      }
      for (auto& [key, v] : lhs) {
        if (rhs.count(key)) continue;
        if (!v.is_zero()) sp.right_module_ok = false;
      }
    }
  return sp;
}

/// P(p) as a presentation-space vector of the given covering slot, for
/// descending into a materialized induced model.
template <Field F>
SparseVec<F> splitting_w_vector(const Splitting<F>& sp, int slot, const Induced<F>& ind, int p) {
  SparseVec<F> out;
  for (const auto& [t, x, z, cf] : sp.p_cols[static_cast<std::size_t>(p)])
    if (t == slot) out.emplace_back(ind.pair_coord(x, sp.nrank[static_cast<std::size_t>(z)]), cf);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// ---------------------------------------------------------------------------
// Slice bundles, reconstruction, separation.

enum class Provenance { FromModule, External };

template <Field F>
struct SliceBundle {
  Covering cov;
  std::vector<Cornered<F>> corners;
  std::vector<FDModule<F>> slices;
  Provenance prov = Provenance::External;
};

template <Field F>
SliceBundle<F> slice(const FDModule<F>& f, const Covering& cov) {
  SliceBundle<F> b;
  b.cov = cov;
  b.prov = Provenance::FromModule;
  for (const CornerSet& s : cov.sets) {
    Cornered<F> c = corner_algebra(f.alg, s.verts);
    b.slices.push_back(restrict_module(c, f));
    b.corners.push_back(std::move(c));
  }
  return b;
}

template <Field F>
struct Reconstruction {
  FDModule<F> module;
  bool consistent = false;
  std::vector<IsoResult<F>> slice_checks;
  std::string method;
};

/// Reconstruct a module from its cornered slices. When every slice has
/// source dimension at most one (the cyclic setting where slice data is a
/// complete invariant), the annihilator of the source generator inside
/// A e_source is cut out by the slice data exactly and the result is
/// A e_source modulo it. Other bundles fall back to the image of the
/// blockwise canonical map (+) j_! N_t -> (+) j_* N_t; no uniqueness is
/// claimed when the consistency flag comes back false.
template <Field F>
Reconstruction<F> reconstruct(const SliceBundle<F>& b) {
  require(!b.slices.empty(), "corner", "empty bundle");
  auto parent = b.corners.front().parent;
  for (std::size_t t = 0; t < b.slices.size(); ++t) {
    require(b.corners[t].parent == parent, "reference", "bundle mixes parent algebras");
    require(b.slices[t].alg == b.corners[t].algebra, "reference", "slice/corner algebra mismatch");
  }
  const FDAlgebra<F>& a = *parent;
  Reconstruction<F> out;

  bool small_source = true;
  for (std::size_t t = 0; t < b.slices.size(); ++t)
    if (b.slices[t].dims[static_cast<std::size_t>(b.corners[t].algebra->source)] > 1) small_source = false;

  if (small_source) {
    out.method = "annihilator";
    FDModule<F> base = regular_column(parent, a.source);
    std::vector<std::vector<int>> sc(static_cast<std::size_t>(a.vertex_count()));
    for (int i : column_coords(a, a.source)) sc[static_cast<std::size_t>(a.head(i))].push_back(i);
    std::vector<Subspace<F>> subs;
    for (int u = 0; u < a.vertex_count(); ++u) {
      const std::vector<int>& cols = sc[static_cast<std::size_t>(u)];
      std::vector<Vector<F>> rows;
      for (std::size_t t = 0; t < b.slices.size(); ++t) {
        const Cornered<F>& c = b.corners[t];
        const FDModule<F>& n = b.slices[t];
        if (n.dims[static_cast<std::size_t>(c.algebra->source)] != 1) continue;
        for (int y = 0; y < a.dim(); ++y) {
          if (a.tail(y) != u || c.vlocal[static_cast<std::size_t>(a.head(y))] < 0) continue;
          int m = n.dims[static_cast<std::size_t>(c.vlocal[static_cast<std::size_t>(a.head(y))])];
          std::vector<Vector<F>> block(static_cast<std::size_t>(m), Vector<F>(cols.size()));
          bool nonzero = false;
          for (std::size_t k = 0; k < cols.size(); ++k)
            for (const auto& [z, cf] : a.mul(y, cols[k])) {
              int zl = c.parent_to_corner[static_cast<std::size_t>(z)];
              require(zl >= 0, "corner", "internal: annihilator product leaves the corner");
              const Matrix<F>& am = n.act[static_cast<std::size_t>(zl)];
              for (int r = 0; r < m; ++r)
                if (!am.at(r, 0).is_zero()) {
                  block[static_cast<std::size_t>(r)][k] += cf * am.at(r, 0);
                  nonzero = true;
                }
            }
          if (nonzero)
            for (auto& row : block) rows.push_back(std::move(row));
        }
      }
      Matrix<F> sys(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) sys.set_row(static_cast<int>(i), rows[i]);
      subs.push_back(subspace_from_vectors(kernel_basis(sys), static_cast<int>(cols.size())));
    }
    out.module = quotient_module(base, subs).module;
  } else {
    out.method = "nu-image";
    std::vector<Induced<F>> inds;
    std::vector<Coinduced<F>> cods;
    for (std::size_t t = 0; t < b.slices.size(); ++t) {
      inds.push_back(induce(b.corners[t], b.slices[t]));
      cods.push_back(coinduce(b.corners[t], b.slices[t]));
    }
    std::vector<FDModule<F>> imods, cmods;
    for (const auto& i : inds) imods.push_back(i.module);
    for (const auto& c : cods) cmods.push_back(c.module);
    DirectSum<F> di = direct_sum(imods), dc = direct_sum(cmods);
    ModuleHom<F> big;
    for (int v = 0; v < a.vertex_count(); ++v)
      big.blocks.push_back(Matrix<F>(dc.module.dims[static_cast<std::size_t>(v)], di.module.dims[static_cast<std::size_t>(v)]));
    for (std::size_t t = 0; t < inds.size(); ++t) {
      ModuleHom<F> nu = nu_map(inds[t], cods[t]);
      for (int v = 0; v < a.vertex_count(); ++v)
        big.blocks[static_cast<std::size_t>(v)].set_block(dc.voffset[t][static_cast<std::size_t>(v)],
                                                          di.voffset[t][static_cast<std::size_t>(v)],
                                                          nu.blocks[static_cast<std::size_t>(v)]);
    }
    out.module = image_module(di.module, dc.module, big).module;
  }

  out.consistent = true;
  for (std::size_t t = 0; t < b.slices.size(); ++t) {
    FDModule<F> re = restrict_module(b.corners[t], out.module);
    out.slice_checks.push_back(is_isomorphic(re, b.slices[t]));
    if (!out.slice_checks.back().yes()) out.consistent = false;
  }
  return out;
}

template <Field F>
struct Distinguish {
  bool distinguished = false;
  int witness_slice = -1;
  bool counterexample = false;
  std::vector<IsoResult<F>> slice_results;
  IsoResult<F> modules_compare;
};

/// Compare two modules slice by slice. For non-isomorphic 0-generated
/// modules with source dimension one the covering must separate them; when
/// it does not, the result is flagged as a counterexample for the caller to
/// archive rather than silently passed.
template <Field F>
Distinguish<F> distinguishes(const FDModule<F>& f, const FDModule<F>& g, const Covering& cov) {
  require(f.alg == g.alg, "reference", "distinguishes needs modules over the same algebra");
  Distinguish<F> out;
  for (std::size_t t = 0; t < cov.sets.size(); ++t) {
    Cornered<F> c = corner_algebra(f.alg, cov.sets[t].verts);
    out.slice_results.push_back(is_isomorphic(restrict_module(c, f), restrict_module(c, g)));
    if (out.slice_results.back().no() && !out.distinguished) {
      out.distinguished = true;
      out.witness_slice = static_cast<int>(t);
    }
  }
  if (!out.distinguished) {
    out.modules_compare = is_isomorphic(f, g);
    if (out.modules_compare.no()) out.counterexample = true;
  }
  return out;
}

}  // namespace corner
