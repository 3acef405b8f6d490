#pragma once

// Independent reference computations for the tests. Nothing here goes through the
// dual-number paths of the library: metric derivatives are central differences of plain
// metric evaluations and linear algebra is done with Eigen directly.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "liftlab/liftlab.hpp"

namespace oracle {

using Vec = std::vector<double>;

inline Eigen::MatrixXd to_eigen(const liftlab::MatrixD& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Eigen::MatrixXd metric(const liftlab::ManifoldSpec& spec, const Vec& x) {
  const int n = spec.dim();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = liftlab::eval(spec.metric_expr(i, j), x);
  return g;
}

// dg[k](i, j) = d_k g_ij
inline std::vector<Eigen::MatrixXd> metric_derivative(const liftlab::ManifoldSpec& spec, const Vec& x,
                                                      double h = 1e-5) {
  std::vector<Eigen::MatrixXd> dg;
  for (int k = 0; k < spec.dim(); ++k) {
    Vec p = x, m = x;
    p[k] += h;
    m[k] -= h;
    dg.push_back((metric(spec, p) - metric(spec, m)) / (2 * h));
  }
  return dg;
}

// gamma[k][i][j] = Gamma^k_ij from finite-difference metric derivatives.
using Gamma = std::vector<std::vector<std::vector<double>>>;

inline Gamma christoffel(const liftlab::ManifoldSpec& spec, const Vec& x, double h = 1e-5) {
  const int n = spec.dim();
  const Eigen::MatrixXd ginv = metric(spec, x).inverse();
  const auto dg = metric_derivative(spec, x, h);
  Gamma G(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += ginv(k, m) * (dg[i](m, j) + dg[j](m, i) - dg[m](i, j));
        G[k][i][j] = 0.5 * acc;
      }
  return G;
}

// K[i][j][k][m] = K_{ijk}^m = d_i G^m_jk - d_j G^m_ik + G^m_ia G^a_jk - G^m_ja G^a_ik
inline std::vector<double> curvature(const liftlab::ManifoldSpec& spec, const Vec& x, double h = 1e-4) {
  const int n = spec.dim();
  std::vector<Gamma> dG;
  for (int a = 0; a < n; ++a) {
    Vec p = x, m = x;
    p[a] += h;
    m[a] -= h;
    const Gamma gp = christoffel(spec, p, 1e-6), gm = christoffel(spec, m, 1e-6);
    Gamma d = gp;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[k][i][j] = (gp[k][i][j] - gm[k][i][j]) / (2 * h);
    dG.push_back(d);
  }
  const Gamma G = christoffel(spec, x);
  std::vector<double> K(static_cast<std::size_t>(n * n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double acc = dG[i][m][j][k] - dG[j][m][i][k];
          for (int a = 0; a < n; ++a) acc += G[m][i][a] * G[a][j][k] - G[m][j][a] * G[a][i][k];
          K[((i * n + j) * n + k) * n + m] = acc;
        }
  return K;
}

// Random point inside the manifold's chart box, shrunk by 10%.
inline Vec random_point(const liftlab::ManifoldSpec& spec, std::mt19937_64& rng) {
  const auto& d = spec.domain();
  Vec x(d.lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = d.hi[i] - d.lo[i];
    std::uniform_real_distribution<double> u(d.lo[i] + 0.1 * w, d.hi[i] - 0.1 * w);
    x[i] = u(rng);
  }
  return x;
}

inline liftlab::TMPoint random_tm_point(const liftlab::ManifoldSpec& spec, std::mt19937_64& rng) {
  liftlab::TMPoint p;
  p.x = random_point(spec, rng);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < spec.dim(); ++i) p.y.push_back(u(rng));
  return p;
}

// Random polynomial with integer coefficients and exponents; returns its text together
// with its exact derivative with respect to x_{wrt+1}, built term by term.
struct Polynomial {
  std::string text;
  std::string derivative_text;
};

inline Polynomial random_polynomial(std::mt19937_64& rng, int dim, int wrt) {
  std::uniform_int_distribution<int> nterms(1, 5), coef(-5, 5), expo(0, 3), var(0, dim - 1);
  Polynomial p;
  const int terms = nterms(rng);
  for (int t = 0; t < terms; ++t) {
    int c = coef(rng);
    if (c == 0) c = 1;
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    const int factors = 1 + expo(rng) % 2;
    for (int f = 0; f < factors; ++f) e[var(rng)] += 1 + expo(rng) % 3;
    std::string term = std::to_string(c);
    std::string dterm;
    for (int i = 0; i < dim; ++i)
      if (e[i] > 0) term += "*x" + std::to_string(i + 1) + "^" + std::to_string(e[i]);
    if (e[wrt] > 0) {
      dterm = std::to_string(c * e[wrt]);
      for (int i = 0; i < dim; ++i) {
        const int k = i == wrt ? e[i] - 1 : e[i];
        if (k > 0) dterm += "*x" + std::to_string(i + 1) + "^" + std::to_string(k);
      }
    } else {
      dterm = "0";
    }
    p.text += (t ? " + (" : "(") + term + ")";
    p.derivative_text += (t ? " + (" : "(") + dterm + ")";
  }
  return p;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
