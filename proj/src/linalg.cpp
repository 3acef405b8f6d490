#include "liftlab/linalg.hpp"

#include <Eigen/Dense>

namespace liftlab {

namespace {

Eigen::MatrixXd to_eigen(const MatrixD& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace

double determinant(const MatrixD& m) {
  if (m.rows() != m.cols()) throw GeometryError("determinant of non-square matrix");
  return to_eigen(m).partialPivLu().determinant();
}

double frobenius_norm(const MatrixD& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const MatrixD& m) {
  double s = 0.0;
  for (double v : m.data()) s = std::max(s, std::abs(v));
  return s;
}

MatrixD symmetrize(const MatrixD& m) {
  MatrixD s(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

Inertia inertia(const MatrixD& symmetric, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(symmetric), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  Inertia r;
  for (double v : ev) {
    if (v > zero_tol * scale) {
      ++r.positive;
    } else if (v < -zero_tol * scale) {
      ++r.negative;
    } else {
      ++r.zero;
    }
  }
  return r;
}

}  // namespace liftlab
