// Copyright (c) 2026 the helmpml authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include "helmpml/smoothstep.hpp"

namespace helmpml {

/// Radial complex-scaling profile f with
///   f = 0 and f' = 0 exactly on r <= R1,
///   f > 0 and f' >= 0 on r > R1,
///   f = r exactly on r >= R2.
///
/// The default construction is f(r) = r * S((r - R1)/(R2 - R1)) with S the
/// C-infinity step; f/r = S is nondecreasing, so the profile is admissible
/// in any dimension.  A stacked-step variant f(r) = r * sum_i w_i S_i is
/// provided for building profiles with a plateau followed by a steep rise
/// (used by the half-plane diagnostics).
class ScalingFunction {
 public:
  struct Eval {
    double f;
    double df;
    double ddf;
  };

  struct Step {
    double weight;  // > 0, weights sum to 1
    double lo;      // rise starts here (>= R1)
    double hi;      // rise complete here (<= R2)
  };

  static ScalingFunction smooth_step_profile(double R1, double R2) {
    check_radii(R1, R2);
    ScalingFunction s;
    s.R1_ = R1;
    s.R2_ = R2;
    s.steps_ = {{1.0, R1, R2}};
    return s;
  }

  static ScalingFunction stacked_steps(double R1, double R2,
                                       std::vector<Step> steps) {
    check_radii(R1, R2);
    if (steps.empty()) throw std::invalid_argument("stacked_steps: no steps");
    double wsum = 0.0;
    for (const auto& st : steps) {
      if (st.weight <= 0.0) throw std::invalid_argument("step weight <= 0");
      if (st.lo < R1 || st.hi > R2 || st.hi <= st.lo)
        throw std::invalid_argument("step interval outside [R1, R2]");
      wsum += st.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
      throw std::invalid_argument("step weights must sum to 1");
    if (std::abs(steps.front().lo - R1) > 1e-12)
      throw std::invalid_argument("first step must turn on at R1");
    ScalingFunction s;
    s.R1_ = R1;
    s.R2_ = R2;
    s.steps_ = std::move(steps);
    return s;
  }

  Eval eval(double r) const {
    if (r < 0.0) throw std::domain_error("ScalingFunction: r < 0");
    if (r <= R1_) return {0.0, 0.0, 0.0};
    if (r >= R2_) return {r, 1.0, 0.0};
    double s = 0.0, ds = 0.0, dds = 0.0;
    for (const auto& st : steps_) {
      const double w = st.hi - st.lo;
      const SmoothStep u = smooth_step((r - st.lo) / w);
      s += st.weight * u.s;
      ds += st.weight * u.ds / w;
      dds += st.weight * u.dds / (w * w);
    }
    return {r * s, s + r * ds, 2.0 * ds + r * dds};
  }

  double R1() const { return R1_; }
  double R2() const { return R2_; }

 private:
  static void check_radii(double R1, double R2) {
    if (!(R1 > 0.0)) throw std::invalid_argument("ScalingFunction: R1 <= 0");
    if (!(R2 > R1)) throw std::invalid_argument("ScalingFunction: R2 <= R1");
  }

  double R1_ = 0.0;
  double R2_ = 0.0;
  std::vector<Step> steps_;
};

/// PML configuration: scaling profile, absorption angle theta, dimension,
/// and the truncation radius R_tr.  The realized scaling is
/// f_theta(r) = f(r) tan(theta).
class PmlSetup {
 public:
  PmlSetup(ScalingFunction scaling, double theta, int dim, double R_tr,
           double theta_margin = 1e-4)
      : scaling_(std::move(scaling)), theta_(theta), dim_(dim), R_tr_(R_tr) {
    constexpr double half_pi = 1.5707963267948966;
    if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
    if (!(theta >= theta_margin && theta <= half_pi - theta_margin))
      throw std::invalid_argument("theta outside [eps, pi/2 - eps]");
    if (!(R_tr > scaling_.R1())) throw std::invalid_argument("R_tr <= R1");
    tan_theta_ = std::tan(theta);
  }

  struct ThetaEval {
    double f;   // f_theta(r)
    double df;  // f_theta'(r)
    double ddf;
  };

  ThetaEval eval_theta(double r) const {
    const auto e = scaling_.eval(r);
    return {e.f * tan_theta_, e.df * tan_theta_, e.ddf * tan_theta_};
  }

  const ScalingFunction& scaling() const { return scaling_; }
  double theta() const { return theta_; }
  double tan_theta() const { return tan_theta_; }
  int dim() const { return dim_; }
  double R_tr() const { return R_tr_; }
  double R1() const { return scaling_.R1(); }
  double R2() const { return scaling_.R2(); }

 private:
  ScalingFunction scaling_;
  double theta_;
  int dim_;
  double R_tr_;
  double tan_theta_;
};

}  // namespace helmpml
