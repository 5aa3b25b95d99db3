#pragma once

#include <Eigen/Dense>

#include "tubefocal/curve.hpp"
#include "tubefocal/errors.hpp"
#include "tubefocal/finite_diff.hpp"
#include "tubefocal/tolerances.hpp"

namespace tubefocal {

// Frenet data of a unit-speed curve at one parameter value.  The formulas are
// taken literally: T = gamma', N1 = gamma''/|gamma''|, N2 = T x N1,
// kappa = |gamma''|, tau = det(gamma', gamma'', gamma''')/|gamma''|^2.
// No renormalization is applied; the unit-speed check guards the inputs.
struct FrenetApparatus {
  Eigen::Vector3d gamma, T, N1, N2;
  double kappa = 0.0;
  double tau = 0.0;
  Jet3d kappa_jet;  // kappa and its first three u-derivatives
  Jet3d tau_jet;
};

// Frame fields at a generic scalar, for surface maps evaluated on jets.
template <class S>
struct FrenetFrame {
  Vec3<S> gamma, T, N1, N2;
  S kappa;
};

// Assembles the frame at scalar S without pointwise guards; the caller is
// expected to have validated the curve (frenet_at does for doubles).
template <class S>
FrenetFrame<S> frenet_frame(const CurveModel& curve, const S& u) {
  const CurveDerivs<S> d = curve.derivs(u);
  FrenetFrame<S> f;
  f.gamma = d.g0;
  f.T = d.g1;
  f.kappa = norm3(d.g2);
  const S inv_kappa = S(1.0) / f.kappa;
  f.N1 = d.g2 * inv_kappa;
  f.N2 = cross3(f.T, f.N1);
  return f;
}

// Full apparatus with guards: throws NotUnitSpeed when | |gamma'| - 1 |
// exceeds tol.unit_speed and VanishingCurvature when kappa <= tol.eps_kappa.
FrenetApparatus frenet_at(const CurveModel& curve, double u, const Tolerances& tol = {});

// Residuals of the frame equations T' = kappa N1, N1' = -kappa T + tau N2,
// N2' = -tau N1, one row per equation (Euclidean norm of the defect).
struct FrameOdeResiduals {
  double rows[3] = {0.0, 0.0, 0.0};
  double max() const { return std::max(rows[0], std::max(rows[1], rows[2])); }
};

// derivative of the frame taken through jets
FrameOdeResiduals frenet_ode_residual_jet(const CurveModel& curve, double u, const Tolerances& tol = {});
// derivative of the frame taken by central differences on frames at u +- h
FrameOdeResiduals frenet_ode_residual_fd(const CurveModel& curve, double u, const Tolerances& tol = {});

}  // namespace tubefocal
