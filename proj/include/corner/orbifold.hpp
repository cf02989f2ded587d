#pragma once
#include "corner/recollement.hpp"

namespace corner {

/// Young diagram of a monomial ideal. Box (i, j) is the monomial x^i y^j;
/// box (i, j) belongs to the diagram when i < parts[j].
struct Partition {
  std::vector<int> parts;  // weakly decreasing, positive

  int size() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
  }
  std::vector<std::pair<int, int>> boxes() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t j = 0; j < parts.size(); ++j)
      for (int i = 0; i < parts[j]; ++i) out.emplace_back(i, static_cast<int>(j));
    return out;
  }
  bool contains(int i, int j) const {
    return j >= 0 && j < static_cast<int>(parts.size()) && i >= 0 && i < parts[static_cast<std::size_t>(j)];
  }
  std::string str() const {
    std::string s = "(";
    for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? "," : "") + std::to_string(parts[k]);
    return s + ")";
  }
  bool operator==(const Partition& o) const { return parts == o.parts; }
};

/// All partitions of n in descending lexicographic order: (n), (n-1,1), ...
inline std::vector<Partition> partitions_of(int n) {
  require(n >= 0, "parse", "partitions of a negative number");
  std::vector<Partition> out;
  std::vector<int> acc;
  std::function<void(int, int)> rec = [&](int rest, int maxpart) {
    if (rest == 0) {
      out.push_back(Partition{acc});
      return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
      acc.push_back(p);
      rec(rest - p, p);
      acc.pop_back();
    }
  };
  rec(n, n);
  return out;
}

using IsotypeVector = std::vector<long>;

/// Character content of the diagram under the cyclic group of order m:
/// the box (i, j) carries the character (i - j) mod m.
inline IsotypeVector weight_content(const Partition& p, int m) {
  require(m >= 2, "parse", "cyclic group order must be at least 2");
  IsotypeVector n(static_cast<std::size_t>(m), 0);
  for (const auto& [i, j] : p.boxes()) ++n[static_cast<std::size_t>((((i - j) % m) + m) % m)];
  return n;
}

/// Torus-fixed points of the equivariant Hilbert scheme component with the
/// given isotype: monomial ideals whose quotient has that character content.
inline std::vector<Partition> enumerate_fixed_points(int m, const IsotypeVector& n) {
  require(m >= 2, "parse", "cyclic group order must be at least 2");
  require(static_cast<int>(n.size()) == m, "shape", "isotype vector must have one entry per character");
  long total = 0;
  for (long k : n) {
    require(k >= 0, "shape", "isotype multiplicities must be nonnegative");
    total += k;
  }
  std::vector<Partition> out;
  for (const Partition& p : partitions_of(static_cast<int>(total)))
    if (weight_content(p, m) == n) out.push_back(p);
  return out;
}

/// The framed McKay algebra for Z/m with the returning framing arrow
/// killed, truncated at the given level. Memoized per (m, level).
template <Field F>
std::shared_ptr<const FDAlgebra<F>> mckay_algebra(int m, int level) {
  static std::map<std::pair<int, int>, std::shared_ptr<const FDAlgebra<F>>> cache;
  auto key = std::make_pair(m, level);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  DoubledQuiver dq = framed_mckay_quiver(m);
  auto rels = kill_arrows(dq.q, preprojective_relations<F>(dq, default_signs(dq)), {"b*"});
  auto alg = truncated_algebra(dq.q, std::move(rels), level);
  cache.emplace(key, alg);
  return alg;
}

/// The module of a fixed point: monomials outside the ideal graded by
/// character, the cycle arrows acting as multiplication by x and y and the
/// framing arrow sending the framing generator to the constant monomial.
/// Needs level >= |p| so that the truncation is faithful on the module.
template <Field F>
FDModule<F> fixed_point_module(const Partition& p, int m, int level) {
  require(level >= p.size(), "shape",
          "truncation level " + std::to_string(level) + " too small for partition " + p.str());
  auto alg = mckay_algebra<F>(m, level);

  // local index of each box within its character class
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  std::map<std::pair<int, int>, std::pair<int, int>> slot;  // box -> (class, local)
  for (const auto& [i, j] : p.boxes()) {
    int c = (((i - j) % m) + m) % m;
    slot[{i, j}] = {c, counts[static_cast<std::size_t>(c)]++};
  }
  std::vector<int> dims{1};
  for (int c = 0; c < m; ++c) dims.push_back(counts[static_cast<std::size_t>(c)]);

  std::map<std::string, Matrix<F>> arrows;
  for (int c = 0; c < m; ++c) {
    Matrix<F> mx(counts[static_cast<std::size_t>((c + 1) % m)], counts[static_cast<std::size_t>(c)]);
    Matrix<F> my(counts[static_cast<std::size_t>(c)], counts[static_cast<std::size_t>((c + 1) % m)]);
    for (const auto& [box, cl] : slot) {
      const auto& [i, j] = box;
      if (cl.first == c && p.contains(i + 1, j)) mx.at(slot.at({i + 1, j}).second, cl.second) = F(1);
      if (cl.first == (c + 1) % m && p.contains(i, j + 1)) my.at(slot.at({i, j + 1}).second, cl.second) = F(1);
    }
    arrows.emplace("x" + std::to_string(c), std::move(mx));
    arrows.emplace("x" + std::to_string(c) + "*", std::move(my));
  }
  Matrix<F> b(counts[0], 1);
  if (p.contains(0, 0)) b.at(slot.at({0, 0}).second, 0) = F(1);
  arrows.emplace("b", std::move(b));

  return module_from_arrows(alg, std::move(dims), arrows);
}

/// Covering by the corner sets {framing, i} for every character i.
template <Field F>
Covering singleton_covering(const FDAlgebra<F>& a) {
  std::vector<std::vector<int>> sets;
  for (int v = 0; v < a.vertex_count(); ++v)
    if (v != a.source) sets.push_back({a.source, v});
  return make_covering(a, std::move(sets));
}

struct HilbPairResult {
  int i = 0, j = 0;
  bool isomorphic = false;
  bool distinguished = false;
  int witness_slice = -1;
  bool counterexample = false;
};

template <Field F>
struct HilbReport {
  int m = 0;
  IsotypeVector n;
  int level = 0;
  Covering cov;
  std::shared_ptr<const FDAlgebra<F>> algebra;
  std::vector<Partition> points;
  std::vector<FDModule<F>> modules;
  std::vector<HilbPairResult> pairs;
  std::vector<Distinguish<F>> counterexamples;
  bool all_ok = true;
};

/// Enumerate the fixed points with the requested isotype, build their
/// modules, and certify that every non-isomorphic pair is separated by its
/// slices over the covering. Separation failures are collected as
/// counterexample payloads rather than swallowed.
template <Field F>
HilbReport<F> hilb_injectivity_experiment(int m, const IsotypeVector& n, const Covering& cov, int level) {
  HilbReport<F> rep;
  rep.m = m;
  rep.n = n;
  rep.level = level;
  rep.cov = cov;
  rep.algebra = mckay_algebra<F>(m, level);
  rep.points = enumerate_fixed_points(m, n);
  for (const Partition& p : rep.points) {
    rep.modules.push_back(fixed_point_module<F>(p, m, level));
    require(is_zero_generated(rep.modules.back()), "relation",
            "internal: fixed point module is not 0-generated");
  }
  for (std::size_t i = 0; i < rep.modules.size(); ++i)
    for (std::size_t j = i + 1; j < rep.modules.size(); ++j) {
      HilbPairResult pr;
      pr.i = static_cast<int>(i);
      pr.j = static_cast<int>(j);
      IsoResult<F> iso = is_isomorphic(rep.modules[i], rep.modules[j]);
      pr.isomorphic = iso.yes();
      Distinguish<F> d = distinguishes(rep.modules[i], rep.modules[j], cov);
      pr.distinguished = d.distinguished;
      pr.witness_slice = d.witness_slice;
      pr.counterexample = d.counterexample;
      if (pr.isomorphic || pr.counterexample || !pr.distinguished) {
        rep.all_ok = false;
        rep.counterexamples.push_back(std::move(d));
      }
      rep.pairs.push_back(pr);
    }
  return rep;
}

}  // namespace corner
