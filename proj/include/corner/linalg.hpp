#pragma once
#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "corner/matrix.hpp"

namespace corner {

template <Field F>
struct RrefResult {
  Matrix<F> mat;
  std::vector<int> pivots;
};

/// Reduced row echelon form by Gauss-Jordan with exact division.
/// Row space is preserved; pivots are listed in column order.
template <Field F>
RrefResult<F> rref(const Matrix<F>& m) {
  Matrix<F> a = m;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int p = -1;
    for (int i = r; i < a.rows(); ++i)
      if (!a.at(i, c).is_zero()) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(p, j), a.at(r, j));
    F inv = F(1) / a.at(r, c);
    for (int j = c; j < a.cols(); ++j) a.at(r, j) = a.at(r, j) * inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, c).is_zero()) continue;
      F f = a.at(i, c);
      for (int j = c; j < a.cols(); ++j) a.at(i, j) = a.at(i, j) - f * a.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

template <Field F>
int rank(const Matrix<F>& m) {
  return static_cast<int>(rref(m).pivots.size());
}

/// Basis of the null space, one vector per free column, free columns ascending.
template <Field F>
std::vector<Vector<F>> kernel_basis(const Matrix<F>& m) {
  RrefResult<F> r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : r.pivots) is_pivot[p] = true;
  std::vector<Vector<F>> out;
  for (int c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    Vector<F> v(m.cols());
    v[c] = F(1);
    for (std::size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = -r.mat.at(static_cast<int>(k), c);
    out.push_back(std::move(v));
  }
  return out;
}

/// Basis of the column space: the pivot columns of the input.
template <Field F>
std::vector<Vector<F>> image_basis(const Matrix<F>& m) {
  RrefResult<F> r = rref(m);
  std::vector<Vector<F>> out;
  for (int p : r.pivots) out.push_back(m.col(p));
  return out;
}

/// One solution of A x = b, or nullopt when inconsistent. Free variables zero.
template <Field F>
std::optional<Vector<F>> solve_linear(const Matrix<F>& a, const Vector<F>& b) {
  require(static_cast<int>(b.size()) == a.rows(), "shape", "solve shape mismatch");
  Matrix<F> ab(a.rows(), a.cols() + 1);
  ab.set_block(0, 0, a);
  for (int i = 0; i < a.rows(); ++i) ab.at(i, a.cols()) = b[i];
  RrefResult<F> r = rref(ab);
  for (int p : r.pivots)
    if (p == a.cols()) return std::nullopt;
  Vector<F> x(a.cols());
  for (std::size_t k = 0; k < r.pivots.size(); ++k) x[r.pivots[k]] = r.mat.at(static_cast<int>(k), a.cols());
  return x;
}

/// A subspace stored as an RREF row basis (no zero rows).
template <Field F>
struct Subspace {
  Matrix<F> rows;        // RREF, rank many rows
  std::vector<int> pivots;
  int dim() const { return rows.rows(); }
  int ambient() const { return rows.cols(); }
};

template <Field F>
Subspace<F> subspace_from_rows(const Matrix<F>& m) {
  RrefResult<F> r = rref(m);
  int k = static_cast<int>(r.pivots.size());
  return {r.mat.block(0, 0, k, m.cols()), r.pivots};
}

template <Field F>
Subspace<F> subspace_from_vectors(const std::vector<Vector<F>>& vs, int ambient) {
  Matrix<F> m(static_cast<int>(vs.size()), ambient);
  for (std::size_t i = 0; i < vs.size(); ++i) m.set_row(static_cast<int>(i), vs[i]);
  return subspace_from_rows(m);
}

/// RREF bases are canonical, so equality of subspaces is matrix equality.
template <Field F>
bool subspace_equal(const Subspace<F>& a, const Subspace<F>& b) {
  return a.pivots == b.pivots && a.rows == b.rows;
}

/// Canonical coset representative: eliminate every pivot coordinate of the
/// subspace from v.
template <Field F>
Vector<F> coset_reduce(const Vector<F>& v, const Subspace<F>& s) {
  require(static_cast<int>(v.size()) == s.ambient(), "shape", "coset_reduce shape mismatch");
  Vector<F> out = v;
  for (int k = 0; k < s.dim(); ++k) {
    const F& c = out[s.pivots[k]];
    if (c.is_zero()) continue;
    F f = c;
    for (int j = 0; j < s.ambient(); ++j)
      if (!s.rows.at(k, j).is_zero()) out[j] = out[j] - f * s.rows.at(k, j);
  }
  return out;
}

template <Field F>
bool subspace_contains(const Subspace<F>& s, const Vector<F>& v) {
  Vector<F> r = coset_reduce(v, s);
  for (const F& x : r)
    if (!x.is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Sparse incremental RREF, used for ideal closure and balancing subspaces
// where vectors are graded and stay short.

template <Field F>
using SparseVec = std::vector<std::pair<int, F>>;  // ascending index, no zeros

template <Field F>
SparseVec<F> sparse_axpy(const SparseVec<F>& v, const F& c, const SparseVec<F>& w) {
  SparseVec<F> out;
  out.reserve(v.size() + w.size());
  std::size_t i = 0, j = 0;
  while (i < v.size() || j < w.size()) {
    if (j >= w.size() || (i < v.size() && v[i].first < w[j].first)) {
      out.push_back(v[i++]);
    } else if (i >= v.size() || w[j].first < v[i].first) {
      F x = c * w[j].second;
      if (!x.is_zero()) out.emplace_back(w[j].first, x);
      ++j;
    } else {
      F x = v[i].second + c * w[j].second;
      if (!x.is_zero()) out.emplace_back(v[i].first, x);
      ++i;
      ++j;
    }
  }
  return out;
}

template <Field F>
SparseVec<F> sparse_scale(const SparseVec<F>& v, const F& c) {
  SparseVec<F> out;
  out.reserve(v.size());
  for (const auto& [i, x] : v) {
    F y = x * c;
    if (!y.is_zero()) out.emplace_back(i, y);
  }
  return out;
}

/// Incrementally maintained reduced row echelon basis over sparse vectors.
template <Field F>
class SparseRref {
 public:
  /// Reduce v against the current rows; the result has no pivot coordinates.
  SparseVec<F> reduce(SparseVec<F> v) const {
    for (;;) {
      const std::pair<int, F>* hit = nullptr;
      for (const auto& e : v) {
        if (rows_.count(e.first)) { hit = &e; break; }
      }
      if (!hit) return v;
      v = sparse_axpy(v, -hit->second, rows_.at(hit->first));
    }
  }

  /// Insert v; returns true when the rank grew.
  bool insert(SparseVec<F> v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    int p = v.front().first;
    v = sparse_scale(v, F(1) / v.front().second);
    // Clear the new pivot coordinate from existing rows.
    for (auto& [q, row] : rows_) {
      for (const auto& e : row) {
        if (e.first == p) {
          row = sparse_axpy(row, -e.second, v);
          break;
        }
        if (e.first > p) break;
      }
    }
    rows_.emplace(p, std::move(v));
    return true;
  }

  int rank() const { return static_cast<int>(rows_.size()); }
  bool is_pivot(int i) const { return rows_.count(i) != 0; }

  std::vector<int> pivots() const {
    std::vector<int> out;
    out.reserve(rows_.size());
    for (const auto& [p, _] : rows_) out.push_back(p);
    return out;
  }

  const std::map<int, SparseVec<F>>& rows() const { return rows_; }

 private:
  std::map<int, SparseVec<F>> rows_;
};

/// Smallest subspace containing the generators and invariant under every
/// operator, computed by a work-list closure. `apply(op, v)` must be linear.
template <Field F>
SparseRref<F> spin_closure_sparse(std::vector<SparseVec<F>> gens, int op_count,
                                  const std::function<SparseVec<F>(int, const SparseVec<F>&)>& apply) {
  SparseRref<F> acc;
  std::vector<SparseVec<F>> queue;
  for (auto& g : gens) {
    SparseVec<F> r = acc.reduce(std::move(g));
    if (!r.empty() && acc.insert(r)) queue.push_back(std::move(r));
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    SparseVec<F> v = queue[q];  // copy: rows mutate underneath
    for (int op = 0; op < op_count; ++op) {
      SparseVec<F> w = acc.reduce(apply(op, v));
      if (!w.empty() && acc.insert(w)) queue.push_back(std::move(w));
    }
  }
  return acc;
}

/// Dense column-vector front end: smallest subspace containing `vectors`
/// invariant under every operator matrix, returned as an RREF row basis.
template <Field F>
Subspace<F> spin_closure(const std::vector<Vector<F>>& vectors, const std::vector<Matrix<F>>& operators,
                         int ambient) {
  for (const auto& op : operators)
    require(op.rows() == ambient && op.cols() == ambient, "shape", "spin operator must be square of ambient dimension");
  for (const auto& v : vectors)
    require(static_cast<int>(v.size()) == ambient, "shape", "spin vector dimension mismatch");
  std::vector<SparseVec<F>> gens;
  for (const auto& v : vectors) {
    SparseVec<F> s;
    for (int i = 0; i < ambient; ++i)
      if (!v[i].is_zero()) s.emplace_back(i, v[i]);
    gens.push_back(std::move(s));
  }
  auto apply = [&](int op, const SparseVec<F>& v) {
    Vector<F> dense(ambient);
    for (const auto& [i, c] : v) dense[i] = c;
    Vector<F> w = operators[static_cast<std::size_t>(op)].apply(dense);
    SparseVec<F> s;
    for (int i = 0; i < ambient; ++i)
      if (!w[i].is_zero()) s.emplace_back(i, w[i]);
    return s;
  };
  SparseRref<F> acc = spin_closure_sparse<F>(std::move(gens), static_cast<int>(operators.size()), apply);
  Matrix<F> rows(acc.rank(), ambient);
  int r = 0;
  for (const auto& [p, row] : acc.rows()) {
    for (const auto& [i, c] : row) rows.at(r, i) = c;
    ++r;
  }
  return subspace_from_rows(rows);
}

}  // namespace corner
