#pragma once
#include <initializer_list>
#include <vector>

#include "corner/base.hpp"
#include "corner/scalar.hpp"

namespace corner {

template <Field F>
using Vector = std::vector<F>;

/// Dense matrix over an exact field, row major.
template <Field F>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {
    require(rows >= 0 && cols >= 0, "shape", "negative matrix dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = F(1);
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    Matrix m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      require(static_cast<int>(row.size()) == c, "shape", "ragged matrix literal");
      int j = 0;
      for (long v : row) m.at(i, j++) = F(v);
      ++i;
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  F& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const F& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  bool is_zero() const {
    for (const F& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!(at(i, j) == (i == j ? F(1) : F(0)))) return false;
    return true;
  }

  Matrix operator+(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "shape", "matrix addition shape mismatch");
    Matrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k] + o.data_[k];
    return m;
  }

  Matrix operator-(const Matrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "shape", "matrix subtraction shape mismatch");
    Matrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k] - o.data_[k];
    return m;
  }

  Matrix operator*(const Matrix& o) const {
    require(cols_ == o.rows_, "shape", "matrix product shape mismatch");
    Matrix m(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const F& a = at(i, k);
        if (a.is_zero()) continue;
        for (int j = 0; j < o.cols_; ++j) {
          const F& b = o.at(k, j);
          if (!b.is_zero()) m.at(i, j) += a * b;
        }
      }
    return m;
  }

  Matrix scaled(const F& c) const {
    Matrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k] * c;
    return m;
  }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
  }

  Vector<F> apply(const Vector<F>& v) const {
    require(static_cast<int>(v.size()) == cols_, "shape", "matrix apply shape mismatch");
    Vector<F> out(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!at(i, j).is_zero() && !v[j].is_zero()) out[i] += at(i, j) * v[j];
    return out;
  }

  Vector<F> row(int i) const {
    Vector<F> out(cols_);
    for (int j = 0; j < cols_; ++j) out[j] = at(i, j);
    return out;
  }

  Vector<F> col(int j) const {
    Vector<F> out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
  }

  void set_row(int i, const Vector<F>& v) {
    require(static_cast<int>(v.size()) == cols_, "shape", "row shape mismatch");
    for (int j = 0; j < cols_; ++j) at(i, j) = v[j];
  }

  void set_col(int j, const Vector<F>& v) {
    require(static_cast<int>(v.size()) == rows_, "shape", "column shape mismatch");
    for (int i = 0; i < rows_; ++i) at(i, j) = v[i];
  }

  void set_block(int i0, int j0, const Matrix& b) {
    require(i0 + b.rows_ <= rows_ && j0 + b.cols_ <= cols_, "shape", "block out of range");
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) at(i0 + i, j0 + j) = b.at(i, j);
  }

  Matrix block(int i0, int j0, int r, int c) const {
    require(i0 + r <= rows_ && j0 + c <= cols_, "shape", "block out of range");
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
    return m;
  }

  static Matrix hcat(const Matrix& a, const Matrix& b) {
    require(a.rows_ == b.rows_, "shape", "hcat row mismatch");
    Matrix m(a.rows_, a.cols_ + b.cols_);
    m.set_block(0, 0, a);
    m.set_block(0, a.cols_, b);
    return m;
  }

  static Matrix vcat(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.cols_, "shape", "vcat column mismatch");
    Matrix m(a.rows_ + b.rows_, a.cols_);
    m.set_block(0, 0, a);
    m.set_block(a.rows_, 0, b);
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

 private:
  int rows_, cols_;
  std::vector<F> data_;
};

}  // namespace corner
