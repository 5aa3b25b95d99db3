#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "tubefocal/curve.hpp"
#include "tubefocal/expression.hpp"
#include "tubefocal/tolerances.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Planar unit-speed curve reconstructed from its signed turning rate k(u):
//   theta(u) = int_{u0}^{u} k ds,    gamma(u) = int_{u0}^{u} (cos theta,
//                                                            sin theta, 0) ds.
// Positions come from checkpointed adaptive Gauss-Kronrod quadrature with the
// tolerance in Tolerances::quadrature; every derivative of gamma is closed
// form in theta and the jets of k, so jet queries at any nesting depth are as
// accurate as the positions themselves.  A negative or sign-changing k is
// fine: it bends the trace the other way, and the curve stays unit speed.
// The recovered Frenet curvature is |k|.
// ---------------------------------------------------------------------------
class CurvatureSpine final : public CurveModel {
 public:
  // checkpoints is the size of the precomputed table over [u_min, u_max];
  // the anchor u0 (where theta = 0 and gamma = 0) must lie in the range.
  CurvatureSpine(ExprTree kappa, double u0, double u_min, double u_max,
                 int checkpoints = 64, const Tolerances& tol = {});

  CurveDerivs<double> derivs(double u) const override;
  CurveDerivs<Jet3d> derivs(const Jet3d& u) const override;
  CurveDerivs<Jet3dd> derivs(const Jet3dd& u) const override;

  double u_min() const override { return u_min_; }
  double u_max() const override { return u_max_; }

  // tangent angle with turning_angle(u0) = 0
  double turning_angle(double u) const;

  const ExprTree& turning_rate() const { return kappa_; }

 private:
  // gamma components with derivative orders 0..9 at one parameter value;
  // order 9 saturates the deepest jet query the evaluator interface admits
  struct Towers {
    std::array<double, 10> x, y;
  };

  Towers make_towers(double a) const;
  const Towers& towers_at(double a) const;
  int segment_of(double a) const;
  double theta_at(double a) const;
  Eigen::Vector2d gamma_at(double a) const;

  template <class S>
  CurveDerivs<S> derivs_impl(const S& u) const;

  ExprTree kappa_;
  double u0_, u_min_, u_max_;
  double quad_tol_;
  std::vector<double> cp_u_, cp_theta_;
  std::vector<Eigen::Vector2d> cp_gamma_;
  Eigen::Vector2d gamma_shift_ = Eigen::Vector2d::Zero();

  mutable std::mutex mu_;
  mutable std::unordered_map<double, Towers> cache_;
};

std::shared_ptr<const CurveModel> spine_from_curvature(ExprTree kappa, double u0,
                                                       double u_min, double u_max,
                                                       int checkpoints = 64,
                                                       const Tolerances& tol = {});

}  // namespace tubefocal
