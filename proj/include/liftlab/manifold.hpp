#pragma once

// Base-manifold geometry in a single chart: metric, Christoffel symbols and the
// curvature tensor, evaluated over any scalar type so that every quantity can be
// differentiated again with dual numbers.
//
// Index layout (asserted by tests):
//   Christoffel(k, i, j)  = Gamma^k_{ij}
//   Curvature(i, j, k, m) = K_{ijk}^m
//                         = d_i Gamma^m_{jk} - d_j Gamma^m_{ik}
//                           + Gamma^m_{ia} Gamma^a_{jk} - Gamma^m_{ja} Gamma^a_{ik}

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liftlab/expr.hpp"
#include "liftlab/linalg.hpp"

namespace liftlab {

struct DomainBox {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x) const;
};

using EvalPoint = std::vector<double>;

class ManifoldSpec {
 public:
  ManifoldSpec() = default;

  /// metric is row-major n*n; the box is used for validation sampling and as the flow domain.
  ManifoldSpec(std::string name, int dim, std::vector<Expr> metric, std::optional<DomainBox> domain_hint);

  /// Parse the metric from text.
  static ManifoldSpec from_text(std::string name, const std::vector<std::vector<std::string>>& metric,
                                std::optional<DomainBox> domain_hint);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Expr& metric_expr(int i, int j) const { return metric_[static_cast<std::size_t>(i * dim_ + j)]; }
  const std::vector<Expr>& metric_exprs() const { return metric_; }
  const DomainBox& domain() const { return domain_; }
  bool has_domain_hint() const { return has_hint_; }

 private:
  std::string name_;
  int dim_ = 0;
  std::vector<Expr> metric_;
  DomainBox domain_;
  bool has_hint_ = false;
};

// ---------------------------------------------------------------------------
// Generic-scalar tensors

template <class S>
struct Christoffel {
  int n = 0;
  std::vector<S> data;

  Christoffel() = default;
  explicit Christoffel(int dim) : n(dim), data(static_cast<std::size_t>(dim * dim * dim), S(0.0)) {}
  S& operator()(int k, int i, int j) { return data[static_cast<std::size_t>((k * n + i) * n + j)]; }
  const S& operator()(int k, int i, int j) const { return data[static_cast<std::size_t>((k * n + i) * n + j)]; }
};

template <class S>
struct Curvature {
  int n = 0;
  std::vector<S> data;

  Curvature() = default;
  explicit Curvature(int dim) : n(dim), data(static_cast<std::size_t>(dim * dim * dim * dim), S(0.0)) {}
  S& operator()(int i, int j, int k, int m) { return data[static_cast<std::size_t>(((i * n + j) * n + k) * n + m)]; }
  const S& operator()(int i, int j, int k, int m) const {
    return data[static_cast<std::size_t>(((i * n + j) * n + k) * n + m)];
  }
};

/// Metric, inverse, first derivatives (dg[k] = d_k g) and Christoffels at one point.
template <class S>
struct MetricJet {
  Matrix<S> g;
  Matrix<S> ginv;
  std::vector<Matrix<S>> dg;
  Christoffel<S> gamma;
};

/// MetricJet plus derivatives of the Christoffels and the curvature tensor.
template <class S>
struct ConnectionJet {
  MetricJet<S> metric;
  std::vector<Christoffel<S>> dgamma;  // dgamma[i](k, a, b) = d_i Gamma^k_{ab}
  Curvature<S> curvature;
};

template <class S>
std::vector<Dual<S>> lift_point(std::span<const S> x) {
  std::vector<Dual<S>> r;
  r.reserve(x.size());
  for (const S& v : x) r.emplace_back(v, S(0.0));
  return r;
}

template <class S>
Matrix<S> metric(const ManifoldSpec& spec, std::span<const S> x) {
  const int n = spec.dim();
  Matrix<S> g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = spec.metric_expr(i, j).template eval<S>(x);
      g(j, i) = g(i, j);
    }
  return g;
}

template <class S>
MetricJet<S> metric_jet(const ManifoldSpec& spec, std::span<const S> x) {
  const int n = spec.dim();
  MetricJet<S> jet;
  jet.g = Matrix<S>(n, n);
  jet.dg.assign(static_cast<std::size_t>(n), Matrix<S>(n, n));
  std::vector<Dual<S>> xd = lift_point<S>(x);
  for (int k = 0; k < n; ++k) {
    xd[k].d = S(1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Dual<S> v = spec.metric_expr(i, j).template eval<Dual<S>>(xd);
        if (k == 0) {
          jet.g(i, j) = v.v;
          jet.g(j, i) = v.v;
        }
        jet.dg[k](i, j) = v.d;
        jet.dg[k](j, i) = v.d;
      }
    xd[k].d = S(0.0);
  }
  jet.ginv = inverse(jet.g, 1e-14);
  jet.gamma = Christoffel<S>(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        S acc(0.0);
        for (int m = 0; m < n; ++m)
          acc += jet.ginv(k, m) * (jet.dg[i](m, j) + jet.dg[j](m, i) - jet.dg[m](i, j));
        acc *= S(0.5);
        jet.gamma(k, i, j) = acc;
        jet.gamma(k, j, i) = acc;
      }
  return jet;
}

template <class S>
ConnectionJet<S> connection_jet(const ManifoldSpec& spec, std::span<const S> x) {
  const int n = spec.dim();
  ConnectionJet<S> cj;
  cj.dgamma.reserve(static_cast<std::size_t>(n));
  std::vector<Dual<S>> xd = lift_point<S>(x);
  for (int i = 0; i < n; ++i) {
    xd[i].d = S(1.0);
    MetricJet<Dual<S>> dj = metric_jet<Dual<S>>(spec, xd);
    xd[i].d = S(0.0);
    if (i == 0) {
      cj.metric.g = Matrix<S>(n, n);
      cj.metric.ginv = Matrix<S>(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          cj.metric.g(a, b) = dj.g(a, b).v;
          cj.metric.ginv(a, b) = dj.ginv(a, b).v;
        }
      cj.metric.dg.assign(static_cast<std::size_t>(n), Matrix<S>(n, n));
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) cj.metric.dg[k](a, b) = dj.dg[k](a, b).v;
      cj.metric.gamma = Christoffel<S>(n);
      for (std::size_t q = 0; q < dj.gamma.data.size(); ++q) cj.metric.gamma.data[q] = dj.gamma.data[q].v;
    }
    Christoffel<S> d(n);
    for (std::size_t q = 0; q < dj.gamma.data.size(); ++q) d.data[q] = dj.gamma.data[q].d;
    cj.dgamma.push_back(std::move(d));
  }
  const Christoffel<S>& G = cj.metric.gamma;
  cj.curvature = Curvature<S>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          S acc = cj.dgamma[i](m, j, k) - cj.dgamma[j](m, i, k);
          for (int a = 0; a < n; ++a) acc += G(m, i, a) * G(a, j, k) - G(m, j, a) * G(a, i, k);
          cj.curvature(i, j, k, m) = acc;
        }
    }
  return cj;
}

// ---------------------------------------------------------------------------
// Double-valued API

struct MetricValue {
  EvalPoint point;
  MatrixD g;
  MatrixD ginv;
};

struct ChristoffelValue {
  EvalPoint point;
  Christoffel<double> gamma;
};

struct CurvatureValue {
  EvalPoint point;
  Curvature<double> k;
  MatrixD g;
  std::optional<double> sectional;  // two-dimensional charts only

  /// K_{ijkm} = K_{ijm}^l g_{lk}; satisfies K_{ijkm} = kappa (g_ik g_jm - g_jk g_im) at constant curvature kappa.
  double lowered(int i, int j, int k, int m) const;
};

MetricValue metric_at(const ManifoldSpec& spec, std::span<const double> p);
ChristoffelValue christoffel(const ManifoldSpec& spec, std::span<const double> p);
CurvatureValue curvature(const ManifoldSpec& spec, std::span<const double> p);

}  // namespace liftlab
