#pragma once
#include <memory>
#include <optional>

#include "corner/quiver.hpp"

namespace corner {

struct BasisElem {
  int tail = -1, head = -1;
  PathWord rep;
};

/// Finite-dimensional algebra presented by a path basis graded by
/// (tail, head), a structure-constant table and the complete orthogonal
/// family of vertex idempotents (classes of trivial paths).
template <Field F>
struct FDAlgebra {
  std::vector<std::string> vertex_names;
  int source = 0;
  std::vector<BasisElem> basis;
  std::vector<std::vector<SparseVec<F>>> mult;  // mult[i][j] = x_i * x_j
  std::vector<int> idem;                        // vertex -> basis index of trivial path

  // Provenance, present on arrow-presented (non-cornered) algebras.
  std::optional<Quiver> quiver;
  std::vector<RelationElement<F>> relations;
  std::vector<SparseVec<F>> arrow_class;  // class of each arrow in the basis
  int level = 0;

  int dim() const { return static_cast<int>(basis.size()); }
  int vertex_count() const { return static_cast<int>(vertex_names.size()); }
  int tail(int i) const { return basis[static_cast<std::size_t>(i)].tail; }
  int head(int i) const { return basis[static_cast<std::size_t>(i)].head; }
  bool is_trivial(int i) const { return basis[static_cast<std::size_t>(i)].rep.length() == 0; }

  const SparseVec<F>& mul(int i, int j) const { return mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

  SparseVec<F> mul_elems(const SparseVec<F>& x, const SparseVec<F>& y) const {
    std::map<int, F> acc;
    for (const auto& [i, a] : x)
      for (const auto& [j, b] : y) {
        F c = a * b;
        if (c.is_zero()) continue;
        for (const auto& [k, s] : mul(i, j)) {
          F& slot = acc.try_emplace(k, F(0)).first->second;
          slot += c * s;
        }
      }
    SparseVec<F> out;
    for (const auto& [k, v] : acc)
      if (!v.is_zero()) out.emplace_back(k, v);
    return out;
  }

  SparseVec<F> unit_elem() const {
    SparseVec<F> one;
    for (int v = 0; v < vertex_count(); ++v) one.emplace_back(idem[static_cast<std::size_t>(v)], F(1));
    std::sort(one.begin(), one.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return one;
  }

  /// Structural invariants: unit decomposition, orthogonal idempotents,
  /// grading compatibility, and associativity on basis triples (all of them
  /// when assoc_sample == 0, otherwise that many seeded samples).
  void check_invariants(int assoc_sample = 0) const {
    SparseVec<F> one = unit_elem();
    for (int i = 0; i < dim(); ++i) {
      SparseVec<F> u{{i, F(1)}};
      require(mul_elems(one, u) == u && mul_elems(u, one) == u, "relation", "idempotents do not sum to the unit");
    }
    for (int u = 0; u < vertex_count(); ++u)
      for (int v = 0; v < vertex_count(); ++v) {
        SparseVec<F> p = mul(idem[static_cast<std::size_t>(u)], idem[static_cast<std::size_t>(v)]);
        SparseVec<F> expect;
        if (u == v) expect.emplace_back(idem[static_cast<std::size_t>(v)], F(1));
        require(p == expect, "relation", "idempotents are not orthogonal");
      }
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) {
        const SparseVec<F>& p = mul(i, j);
        if (tail(i) != head(j)) {
          require(p.empty(), "relation", "grading violated: nonzero product across mismatched vertices");
        } else {
          for (const auto& [k, c] : p)
            require(tail(k) == tail(j) && head(k) == head(i), "relation", "grading violated in product support");
        }
      }
    auto assoc_check = [&](int i, int j, int k) {
      SparseVec<F> jk = mul(j, k);
      SparseVec<F> ij = mul(i, j);
      SparseVec<F> left = mul_elems(ij, SparseVec<F>{{k, F(1)}});
      SparseVec<F> right = mul_elems(SparseVec<F>{{i, F(1)}}, jk);
      require(left == right, "relation", "associativity violated on a basis triple");
    };
    if (assoc_sample <= 0) {
      for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) {
          if (tail(i) != head(j)) continue;
          for (int k = 0; k < dim(); ++k) {
            if (tail(j) != head(k)) continue;
            assoc_check(i, j, k);
          }
        }
    } else {
      std::uint64_t s = 0x9e3779b97f4a7c15ull;
      auto next = [&]() { s ^= s << 13; s ^= s >> 7; s ^= s << 17; return s; };
      for (int t = 0; t < assoc_sample; ++t)
        assoc_check(static_cast<int>(next() % static_cast<std::uint64_t>(dim())),
                    static_cast<int>(next() % static_cast<std::uint64_t>(dim())),
                    static_cast<int>(next() % static_cast<std::uint64_t>(dim())));
    }
  }
};

/// Finite-dimensional quotient of the path algebra: paths of length at most
/// `level` modulo the two-sided ideal generated by the relations inside the
/// truncation. Basis elements are the non-pivot paths of the ideal closure.
template <Field F>
std::shared_ptr<const FDAlgebra<F>> truncated_algebra(const Quiver& q, std::vector<RelationElement<F>> rels,
                                                      int level) {
  require(level >= 1, "parse", "truncation level must be at least 1");

  // Path enumeration, by length then construction order.
  std::vector<PathWord> paths;
  std::map<PathWord, int> pid;
  auto add_path = [&](PathWord w) {
    int id = static_cast<int>(paths.size());
    pid.emplace(w, id);
    paths.push_back(std::move(w));
  };
  for (int v = 0; v < q.vertex_count(); ++v) add_path(PathWord::trivial(v));
  std::size_t lo = 0, hi = paths.size();
  for (int len = 1; len <= level; ++len) {
    for (std::size_t p = lo; p < hi; ++p)
      for (int a = 0; a < q.arrow_count(); ++a) {
        if (q.arrow(a).tail != paths[p].head(q)) continue;
        PathWord w = paths[p];
        w.arrows.push_back(a);
        add_path(std::move(w));
      }
    lo = hi;
    hi = paths.size();
  }

  // Relation vectors inside the truncation; longer terms are already zero.
  std::vector<SparseVec<F>> gens;
  for (const auto& rel : rels) {
    std::map<int, F> acc;
    for (const auto& t : rel.terms) {
      if (t.word.length() > level) continue;
      F& slot = acc.try_emplace(pid.at(t.word), F(0)).first->second;
      slot += t.coeff;
    }
    SparseVec<F> v;
    for (const auto& [i, c] : acc)
      if (!c.is_zero()) v.emplace_back(i, c);
    if (!v.empty()) gens.push_back(std::move(v));
  }

  // Two-sided ideal closure: spin under left and right concatenation by
  // every arrow, products sharper than the truncation vanish.
  int na = q.arrow_count();
  auto apply = [&](int op, const SparseVec<F>& v) -> SparseVec<F> {
    bool left = op < na;
    int a = left ? op : op - na;
    SparseVec<F> out;
    for (const auto& [i, c] : v) {
      const PathWord& p = paths[static_cast<std::size_t>(i)];
      if (p.length() + 1 > level) continue;
      if (left) {
        if (q.arrow(a).tail != p.head(q)) continue;
        PathWord w = p;
        w.arrows.push_back(a);
        out.emplace_back(pid.at(w), c);
      } else {
        if (q.arrow(a).head != p.tail()) continue;
        PathWord w;
        w.start = q.arrow(a).tail;
        w.arrows.reserve(p.arrows.size() + 1);
        w.arrows.push_back(a);
        w.arrows.insert(w.arrows.end(), p.arrows.begin(), p.arrows.end());
        out.emplace_back(pid.at(w), c);
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
  };
  SparseRref<F> ideal = spin_closure_sparse<F>(std::move(gens), 2 * na, apply);

  auto alg = std::make_shared<FDAlgebra<F>>();
  for (int v = 0; v < q.vertex_count(); ++v) alg->vertex_names.push_back(q.vertex_name(v));
  alg->source = q.source();
  alg->quiver = q;
  alg->relations = std::move(rels);
  alg->level = level;

  std::vector<int> basis_of_path(paths.size(), -1);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (ideal.is_pivot(static_cast<int>(i))) continue;
    basis_of_path[i] = alg->dim();
    alg->basis.push_back(BasisElem{paths[i].tail(), paths[i].head(q), paths[i]});
  }
  alg->idem.resize(static_cast<std::size_t>(q.vertex_count()));
  for (int v = 0; v < q.vertex_count(); ++v) {
    int b = basis_of_path[static_cast<std::size_t>(pid.at(PathWord::trivial(v)))];
    require(b >= 0, "relation", "relation ideal collapses the idempotent at vertex '" + q.vertex_name(v) + "'");
    alg->idem[static_cast<std::size_t>(v)] = b;
  }

  // Canonical class of a path: reduce its unit vector modulo the ideal.
  std::vector<std::optional<SparseVec<F>>> memo(paths.size());
  auto class_of_path = [&](int path_id) -> const SparseVec<F>& {
    auto& slot = memo[static_cast<std::size_t>(path_id)];
    if (!slot) {
      SparseVec<F> red = ideal.reduce(SparseVec<F>{{path_id, F(1)}});
      SparseVec<F> out;
      for (const auto& [i, c] : red) out.emplace_back(basis_of_path[static_cast<std::size_t>(i)], c);
      std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      slot = std::move(out);
    }
    return *slot;
  };

  int d = alg->dim();
  alg->mult.assign(static_cast<std::size_t>(d), std::vector<SparseVec<F>>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const BasisElem& xi = alg->basis[static_cast<std::size_t>(i)];
      const BasisElem& xj = alg->basis[static_cast<std::size_t>(j)];
      if (xi.tail != xj.head) continue;
      if (xi.rep.length() + xj.rep.length() > level) continue;
      PathWord w = xj.rep;  // right factor applied first
      if (w.length() == 0) w.start = xi.rep.start;
      w.arrows.insert(w.arrows.end(), xi.rep.arrows.begin(), xi.rep.arrows.end());
      alg->mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = class_of_path(pid.at(w));
    }

  for (int a = 0; a < na; ++a)
    alg->arrow_class.push_back(class_of_path(pid.at(PathWord::of_arrows(q, {a}))));

  // The generators themselves must vanish in the quotient.
  for (const auto& rel : alg->relations) {
    std::map<int, F> acc;
    for (const auto& t : rel.terms) {
      if (t.word.length() > level) continue;
      for (const auto& [k, c] : class_of_path(pid.at(t.word))) {
        F& slot = acc.try_emplace(k, F(0)).first->second;
        slot += t.coeff * c;
      }
    }
    for (const auto& [k, c] : acc)
      require(c.is_zero(), "relation", "internal: relation does not vanish in the quotient");
  }
  return alg;
}

/// A cornered algebra e_I A e_I together with its embedding data.
template <Field F>
struct Cornered {
  std::shared_ptr<const FDAlgebra<F>> parent;
  std::vector<int> verts;  // parent vertex indices, sorted
  std::shared_ptr<const FDAlgebra<F>> algebra;
  std::vector<int> embed;             // corner basis index -> parent basis index
  std::vector<int> parent_to_corner;  // parent basis index -> corner index or -1
  std::vector<int> vlocal;            // parent vertex -> corner vertex or -1

  bool is_all() const { return static_cast<int>(verts.size()) == parent->vertex_count(); }
};

/// Corner the algebra at a vertex subset containing the distinguished
/// vertex. The basis is the subset of the parent basis with both endpoints
/// inside the set; multiplication is inherited.
template <Field F>
Cornered<F> corner_algebra(std::shared_ptr<const FDAlgebra<F>> a, std::vector<int> verts) {
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  for (int v : verts)
    require(v >= 0 && v < a->vertex_count(), "corner", "corner set vertex out of range");
  require(std::find(verts.begin(), verts.end(), a->source) != verts.end(), "corner",
          "corner set must contain the distinguished vertex");

  Cornered<F> c;
  c.parent = a;
  c.verts = verts;
  c.vlocal.assign(static_cast<std::size_t>(a->vertex_count()), -1);
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) c.vlocal[static_cast<std::size_t>(verts[static_cast<std::size_t>(i)])] = i;

  auto corner = std::make_shared<FDAlgebra<F>>();
  for (int v : verts) corner->vertex_names.push_back(a->vertex_names[static_cast<std::size_t>(v)]);
  corner->source = c.vlocal[static_cast<std::size_t>(a->source)];
  corner->level = a->level;

  c.parent_to_corner.assign(static_cast<std::size_t>(a->dim()), -1);
  for (int i = 0; i < a->dim(); ++i) {
    if (c.vlocal[static_cast<std::size_t>(a->tail(i))] < 0 || c.vlocal[static_cast<std::size_t>(a->head(i))] < 0) continue;
    c.parent_to_corner[static_cast<std::size_t>(i)] = corner->dim();
    c.embed.push_back(i);
    corner->basis.push_back(BasisElem{c.vlocal[static_cast<std::size_t>(a->tail(i))],
                                      c.vlocal[static_cast<std::size_t>(a->head(i))],
                                      a->basis[static_cast<std::size_t>(i)].rep});
  }
  int d = corner->dim();
  corner->mult.assign(static_cast<std::size_t>(d), std::vector<SparseVec<F>>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      SparseVec<F> out;
      for (const auto& [k, cf] : a->mul(c.embed[static_cast<std::size_t>(i)], c.embed[static_cast<std::size_t>(j)])) {
        int lk = c.parent_to_corner[static_cast<std::size_t>(k)];
        require(lk >= 0, "corner", "internal: corner product escapes the corner");
        out.emplace_back(lk, cf);
      }
      std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      corner->mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(out);
    }
  corner->idem.resize(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    int b = c.parent_to_corner[static_cast<std::size_t>(a->idem[static_cast<std::size_t>(verts[i])])];
    require(b >= 0, "corner", "internal: idempotent missing from corner");
    corner->idem[i] = b;
  }
  c.algebra = std::move(corner);
  return c;
}

}  // namespace corner
