#pragma once

// Structures on TM: the non-linear connection N_i^j = y^a Gamma^j_{ai}, the adapted
// frame {X_h, X_hbar} with its coframe {dx^h, dy^h + N_i^h dx^i}, and the lift
// metric  gt = a g1 + b g2 + c g3  whose adapted components are [[a g, b g], [b g, c g]].
//
// Frames and coframes are stored with one adapted element per ROW, expressed in the
// coordinate basis (d/dx^1..d/dx^n, d/dy^1..d/dy^n), so that
//   frame * transpose(coframe) = I   and   coordinate_matrix = coframe^T * adapted * coframe.

#include <span>
#include <string>
#include <vector>

#include "liftlab/manifold.hpp"

namespace liftlab {

struct TMPoint {
  EvalPoint x;
  std::vector<double> y;

  int dim() const { return static_cast<int>(x.size()); }
  /// (x^1..x^n, y^1..y^n)
  std::vector<double> coords() const;
  static TMPoint from_coords(std::span<const double> z);
};

struct LiftMetricCoeffs {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  double discriminant() const { return a * c - b * b; }
};

enum class Signature { riemannian, pseudo, singular };

std::string to_string(Signature s);

/// riemannian iff a > 0 and ac - b^2 > 0; singular iff ac - b^2 = 0; pseudo otherwise.
Signature signature_classify(const LiftMetricCoeffs& coeffs);

/// Throws ConfigError when ac - b^2 = 0.
void require_nonsingular(const LiftMetricCoeffs& coeffs);

struct AdaptedFrame {
  TMPoint point;
  MatrixD frame;    // row h: X_h, row n+h: X_hbar
  MatrixD coframe;  // row h: dx^h, row n+h: delta y^h
  MatrixD n_coeffs;  // n_coeffs(i, j) = N_i^j
};

struct LiftMetricValue {
  TMPoint point;
  MatrixD adapted_blocks;
  MatrixD coordinate_matrix;
  Inertia inertia;

  std::string signature_report() const;
};

// ---------------------------------------------------------------------------
// Generic-scalar building blocks

/// N(i, j) = N_i^j = y^a Gamma^j_{ai}
template <class S>
Matrix<S> connection_coefficients(const Christoffel<S>& gamma, std::span<const S> y) {
  const int n = gamma.n;
  Matrix<S> N(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      S acc(0.0);
      for (int a = 0; a < n; ++a) acc += y[a] * gamma(j, a, i);
      N(i, j) = acc;
    }
  return N;
}

template <class S>
Matrix<S> frame_matrix(const Matrix<S>& N) {
  const int n = N.rows();
  Matrix<S> F = Matrix<S>::identity(2 * n);
  for (int h = 0; h < n; ++h)
    for (int m = 0; m < n; ++m) F(h, n + m) = -N(h, m);
  return F;
}

template <class S>
Matrix<S> coframe_matrix(const Matrix<S>& N) {
  const int n = N.rows();
  Matrix<S> W = Matrix<S>::identity(2 * n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i) W(n + h, i) = N(i, h);
  return W;
}

template <class S>
Matrix<S> lift_metric_blocks(const Matrix<S>& g, const LiftMetricCoeffs& c) {
  const int n = g.rows();
  Matrix<S> A(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = S(c.a) * g(i, j);
      A(i, n + j) = S(c.b) * g(i, j);
      A(n + i, j) = S(c.b) * g(i, j);
      A(n + i, n + j) = S(c.c) * g(i, j);
    }
  return A;
}

/// Coordinate-basis matrix of gt at (x, y).
template <class S>
Matrix<S> coordinate_lift_metric(const ManifoldSpec& spec, const LiftMetricCoeffs& c, std::span<const S> x,
                                 std::span<const S> y) {
  MetricJet<S> jet = metric_jet<S>(spec, x);
  Matrix<S> W = coframe_matrix(connection_coefficients(jet.gamma, y));
  return W.transpose() * lift_metric_blocks(jet.g, c) * W;
}

// ---------------------------------------------------------------------------
// Double-valued API

MatrixD nonlinear_connection(const ManifoldSpec& spec, const TMPoint& p);

/// Transforms N from the source chart to the target chart. chart_map gives the
/// source coordinates x^h as functions of the target coordinates; p is in the target chart.
MatrixD chart_transform_n(const ManifoldSpec& spec_from, const ManifoldSpec& spec_to,
                          const std::vector<Expr>& chart_map, const TMPoint& p);

AdaptedFrame adapted_frame(const ManifoldSpec& spec, const TMPoint& p);

LiftMetricValue lift_metric(const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs, const TMPoint& p);

}  // namespace liftlab
