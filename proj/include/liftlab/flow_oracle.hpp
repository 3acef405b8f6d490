#pragma once

// Independent Lie derivative of gt: integrate the flow of X in coordinates (RK4 with
// the variational equation for the flow Jacobian), pull gt back and central-difference
// in flow time:  L_X gt (p0) ~ [J+^T G(phi_t p0) J+ - J-^T G(phi_-t p0) J-] / (2t).
// Works in the coordinate basis only.

#include <vector>

#include "liftlab/lie_calculus.hpp"

namespace liftlab {

struct OracleOptions {
  double t_step = 2.5e-4;
  int steps = 64;
};

struct FlowState {
  TMPoint point;
  MatrixD jacobian;
  double t = 0.0;
};

FlowState flow(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p0, double t, int steps);

/// Flows to +t_step and -t_step; reusable across metric coefficients.
struct FlowPair {
  FlowState plus;
  FlowState minus;
  double t_step = 0.0;
};

FlowPair flow_pair(const LiftField& x, const ManifoldSpec& spec, const TMPoint& p0, const OracleOptions& opt);

/// Central difference of the pulled-back coordinate matrix of gt.
MatrixD pullback_derivative(const FlowPair& fp, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs);

BilinearFormValue numeric_lie_derivative(const LiftField& x, const ManifoldSpec& spec, const LiftMetricCoeffs& coeffs,
                                         const TMPoint& p0, const OracleOptions& opt = {});

}  // namespace liftlab
