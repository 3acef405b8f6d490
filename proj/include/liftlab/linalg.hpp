#pragma once

// Small dense row-major matrices over an arbitrary scalar (double or nested duals).

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "liftlab/dual.hpp"
#include "liftlab/errors.hpp"

namespace liftlab {

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), S(0.0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const S& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  const std::vector<S>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<S> operator*(const Matrix& a, const std::vector<S>& v) {
    std::vector<S> r(static_cast<std::size_t>(a.rows_), S(0.0));
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

using MatrixD = Matrix<double>;

/// Gauss-Jordan inverse with partial pivoting on the primal values.
template <class S>
Matrix<S> inverse(const Matrix<S>& m, double singular_tol = 1e-300) {
  const int n = m.rows();
  if (n != m.cols()) throw GeometryError("inverse of non-square matrix");
  Matrix<S> a = m;
  Matrix<S> inv = Matrix<S>::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(primal(a(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(primal(a(r, col)));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best <= singular_tol) throw GeometryError("singular matrix");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    const S p = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) = a(col, j) / p;
      inv(col, j) = inv(col, j) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = a(r, col);
      if (primal(f) == 0.0 && !is_dual_v<S>) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Determinant by LU with partial pivoting (double only).
double determinant(const MatrixD& m);

double frobenius_norm(const MatrixD& m);
double max_abs(const MatrixD& m);
MatrixD symmetrize(const MatrixD& m);

/// Number of (positive, negative, zero) eigenvalues of a symmetric matrix.
struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};
Inertia inertia(const MatrixD& symmetric, double zero_tol = 1e-12);

/// Strip derivative parts.
template <class S>
MatrixD primal_matrix(const Matrix<S>& m) {
  MatrixD r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = primal(m(i, j));
  return r;
}

}  // namespace liftlab
