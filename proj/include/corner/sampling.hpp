#pragma once
#include <random>

#include "corner/recollement.hpp"

namespace corner {

/// Deterministic seeded generator. Sampling goes through modulo reduction of
/// the raw mt19937 stream, which is pinned by the standard, so transcripts
/// are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(static_cast<std::uint32_t>(seed ^ (seed >> 32))) {}

  int uniform(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(g_() % static_cast<std::uint32_t>(hi - lo + 1));
  }

 private:
  std::mt19937 g_;
};

/// Random quotient of the distinguished projective column: always a valid
/// 0-generated module whose source block has the dimension of e A e at the
/// distinguished vertex.
template <Field F>
FDModule<F> random_source_quotient(std::shared_ptr<const FDAlgebra<F>> alg, Rng& rng) {
  FDModule<F> base = regular_column(alg, alg->source);
  for (int attempt = 0; attempt < 4; ++attempt) {
    int k = rng.uniform(0, 2);
    std::vector<Vector<F>> gens;
    for (int g = 0; g < k; ++g) {
      Vector<F> v(static_cast<std::size_t>(base.total_dim()));
      for (auto& x : v) x = F(rng.uniform(-2, 2));
      gens.push_back(std::move(v));
    }
    QuotientModule<F> q = quotient_module(base, submodule_generated(base, gens));
    if (!q.module.is_zero() || attempt == 3) return q.module;
  }
  return base;
}

/// Random valid module. Arrow matrices are rejection-sampled first; on
/// algebras whose relations random matrices essentially never satisfy
/// (preprojective families), the generator falls back to quotients and sums
/// of projective columns, which validate by construction.
template <Field F>
FDModule<F> random_module(std::shared_ptr<const FDAlgebra<F>> alg, Rng& rng) {
  int shape = rng.uniform(0, 3);
  if (shape == 0 && alg->quiver.has_value()) {
    const Quiver& q = *alg->quiver;
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::vector<int> dims;
      for (int v = 0; v < alg->vertex_count(); ++v) dims.push_back(rng.uniform(0, 2));
      std::map<std::string, Matrix<F>> mats;
      for (const Arrow& ar : q.arrows()) {
        Matrix<F> m(dims[static_cast<std::size_t>(ar.head)], dims[static_cast<std::size_t>(ar.tail)]);
        for (int i = 0; i < m.rows(); ++i)
          for (int j = 0; j < m.cols(); ++j) m.at(i, j) = F(rng.uniform(-2, 2));
        mats.emplace(ar.id, std::move(m));
      }
      try {
        return module_from_arrows(alg, std::move(dims), mats);
      } catch (const Error&) {
        // rejected: relations or nilpotency failed
      }
    }
    return random_source_quotient(alg, rng);
  }
  if (shape == 1) {
    // quotient of a random pair of projective columns
    int u = rng.uniform(0, alg->vertex_count() - 1);
    int v = rng.uniform(0, alg->vertex_count() - 1);
    DirectSum<F> d = direct_sum<F>({regular_column(alg, u), regular_column(alg, v)});
    std::vector<Vector<F>> gens;
    for (int g = rng.uniform(0, 2); g > 0; --g) {
      Vector<F> w(static_cast<std::size_t>(d.module.total_dim()));
      for (auto& x : w) x = F(rng.uniform(-1, 1));
      gens.push_back(std::move(w));
    }
    return quotient_module(d.module, submodule_generated(d.module, gens)).module;
  }
  if (shape == 2) {
    DirectSum<F> d = direct_sum<F>({random_source_quotient(alg, rng),
                                    regular_column(alg, rng.uniform(0, alg->vertex_count() - 1))});
    return d.module;
  }
  return random_source_quotient(alg, rng);
}

}  // namespace corner
