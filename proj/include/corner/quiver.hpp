#pragma once
#include <map>
#include <string>
#include <vector>

#include "corner/linalg.hpp"

namespace corner {

struct Arrow {
  std::string id;
  int tail = -1;
  int head = -1;
};

/// Finite quiver with one distinguished vertex (the "source" of the
/// 0-generated theory; the framing vertex in the McKay setting).
class Quiver {
 public:
  Quiver() = default;
  Quiver(std::vector<std::string> vertex_names, const std::string& source_name, std::vector<Arrow> arrows)
      : names_(std::move(vertex_names)), arrows_(std::move(arrows)) {
    for (int v = 0; v < static_cast<int>(names_.size()); ++v) {
      require(index_.emplace(names_[v], v).second, "parse", "duplicate vertex id '" + names_[v] + "'");
    }
    source_ = vertex_index(source_name);
    for (int a = 0; a < static_cast<int>(arrows_.size()); ++a) {
      const Arrow& ar = arrows_[a];
      require(ar.tail >= 0 && ar.tail < vertex_count() && ar.head >= 0 && ar.head < vertex_count(),
              "parse", "arrow '" + ar.id + "' has endpoints outside the vertex set");
      require(arrow_index_.emplace(ar.id, a).second, "parse", "duplicate arrow id '" + ar.id + "'");
    }
  }

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int source() const { return source_; }
  const std::string& vertex_name(int v) const { return names_[static_cast<std::size_t>(v)]; }
  int vertex_index(const std::string& name) const {
    auto it = index_.find(name);
    require(it != index_.end(), "reference", "unknown vertex '" + name + "'");
    return it->second;
  }
  bool has_vertex(const std::string& name) const { return index_.count(name) != 0; }

  int arrow_count() const { return static_cast<int>(arrows_.size()); }
  const Arrow& arrow(int a) const { return arrows_[static_cast<std::size_t>(a)]; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  int arrow_index(const std::string& id) const {
    auto it = arrow_index_.find(id);
    require(it != arrow_index_.end(), "reference", "unknown arrow '" + id + "'");
    return it->second;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Arrow> arrows_;
  std::map<std::string, int> index_;
  std::map<std::string, int> arrow_index_;
  int source_ = 0;
};

/// A path in the quiver. Arrows are stored in application order: arrows[0]
/// acts first. In the usual right-to-left notation a_k ... a_1 this vector
/// reads a_1, ..., a_k. Trivial paths carry only their vertex.
struct PathWord {
  int start = -1;            // tail vertex
  std::vector<int> arrows;   // application order

  static PathWord trivial(int v) { return PathWord{v, {}}; }

  static PathWord of_arrows(const Quiver& q, std::vector<int> applied) {
    require(!applied.empty(), "parse", "empty arrow word needs a vertex");
    PathWord w;
    w.start = q.arrow(applied.front()).tail;
    int at = w.start;
    for (int a : applied) {
      require(q.arrow(a).tail == at, "parse",
              "non-composable word at arrow '" + q.arrow(a).id + "'");
      at = q.arrow(a).head;
    }
    w.arrows = std::move(applied);
    return w;
  }

  int length() const { return static_cast<int>(arrows.size()); }
  int tail() const { return start; }
  int head(const Quiver& q) const { return arrows.empty() ? start : q.arrow(arrows.back()).head; }

  bool operator==(const PathWord& o) const { return start == o.start && arrows == o.arrows; }
  bool operator<(const PathWord& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (start != o.start) return start < o.start;
    return arrows < o.arrows;
  }
};

template <Field F>
struct RelationTerm {
  F coeff;
  PathWord word;
};

/// Formal linear combination of parallel paths; the grading (tail, head)
/// is shared by every stored term and zero coefficients are dropped.
template <Field F>
struct RelationElement {
  std::vector<RelationTerm<F>> terms;
  int tail = -1, head = -1;

  static RelationElement make(const Quiver& q, std::vector<RelationTerm<F>> terms) {
    RelationElement r;
    for (auto& t : terms) {
      if (t.coeff.is_zero()) continue;
      int tl = t.word.tail(), hd = t.word.head(q);
      if (r.terms.empty()) {
        r.tail = tl;
        r.head = hd;
      } else {
        require(tl == r.tail && hd == r.head, "relation",
                "malformed relation: non-parallel terms (" + q.vertex_name(tl) + "->" + q.vertex_name(hd) +
                    " vs " + q.vertex_name(r.tail) + "->" + q.vertex_name(r.head) + ")");
      }
      r.terms.push_back(std::move(t));
    }
    return r;
  }
};

/// Doubled quiver: an involution a <-> a* on arrows, swapping tail and head.
struct DoubledQuiver {
  Quiver q;
  std::vector<int> star;  // involution on arrow indices
};

/// Framed McKay quiver of the cyclic group Z/m inside SL(2) acting with
/// weights (1, -1): cycle arrows x_i: i -> i+1 with duals x_i*: i+1 -> i,
/// plus the framing pair b: inf -> 0, b*: 0 -> inf. The framing vertex is
/// the distinguished one.
inline DoubledQuiver framed_mckay_quiver(int m) {
  require(m >= 2, "parse", "framed McKay quiver needs group order m >= 2");
  std::vector<std::string> names{"inf"};
  for (int i = 0; i < m; ++i) names.push_back(std::to_string(i));
  std::vector<Arrow> arrows;
  std::vector<int> star;
  auto vertex = [&](int i) { return 1 + ((i % m) + m) % m; };
  for (int i = 0; i < m; ++i) {
    arrows.push_back({"x" + std::to_string(i), vertex(i), vertex(i + 1)});
    arrows.push_back({"x" + std::to_string(i) + "*", vertex(i + 1), vertex(i)});
    star.push_back(static_cast<int>(star.size()) + 1);
    star.push_back(static_cast<int>(star.size()) - 1);
  }
  arrows.push_back({"b", 0, vertex(0)});
  arrows.push_back({"b*", vertex(0), 0});
  star.push_back(static_cast<int>(star.size()) + 1);
  star.push_back(static_cast<int>(star.size()) - 1);
  return DoubledQuiver{Quiver(std::move(names), "inf", std::move(arrows)), std::move(star)};
}

/// Default orientation signs: +1 on the plain arrows, -1 on the starred
/// partner (the partner with the larger index).
inline std::vector<int> default_signs(const DoubledQuiver& dq) {
  std::vector<int> eps(static_cast<std::size_t>(dq.q.arrow_count()));
  for (int a = 0; a < dq.q.arrow_count(); ++a) eps[static_cast<std::size_t>(a)] = a < dq.star[static_cast<std::size_t>(a)] ? 1 : -1;
  return eps;
}

/// One preprojective relation per vertex i: sum over arrows a with head i of
/// eps(a) * a a* (a* applied first).
template <Field F>
std::vector<RelationElement<F>> preprojective_relations(const DoubledQuiver& dq, const std::vector<int>& eps) {
  const Quiver& q = dq.q;
  require(static_cast<int>(eps.size()) == q.arrow_count(), "relation", "sign map size mismatch");
  for (int a = 0; a < q.arrow_count(); ++a) {
    require(eps[static_cast<std::size_t>(a)] == 1 || eps[static_cast<std::size_t>(a)] == -1, "relation",
            "sign map must take values +1/-1");
    require(eps[static_cast<std::size_t>(a)] != eps[static_cast<std::size_t>(dq.star[static_cast<std::size_t>(a)])],
            "relation", "sign map must separate '" + q.arrow(a).id + "' from its dual");
  }
  std::vector<RelationElement<F>> rels;
  for (int v = 0; v < q.vertex_count(); ++v) {
    std::vector<RelationTerm<F>> terms;
    for (int a = 0; a < q.arrow_count(); ++a) {
      if (q.arrow(a).head != v) continue;
      int as = dq.star[static_cast<std::size_t>(a)];
      terms.push_back({F(eps[static_cast<std::size_t>(a)]), PathWord::of_arrows(q, {as, a})});
    }
    rels.push_back(RelationElement<F>::make(q, std::move(terms)));
  }
  return rels;
}

/// Append each named arrow as a singleton relation (two-sided ideal
/// generators killing the arrow).
template <Field F>
std::vector<RelationElement<F>> kill_arrows(const Quiver& q, std::vector<RelationElement<F>> rels,
                                            const std::vector<std::string>& arrow_ids) {
  for (const std::string& id : arrow_ids) {
    int a = q.arrow_index(id);
    rels.push_back(RelationElement<F>::make(q, {{F(1), PathWord::of_arrows(q, {a})}}));
  }
  return rels;
}

}  // namespace corner
