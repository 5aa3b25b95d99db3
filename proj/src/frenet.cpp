#include "tubefocal/frenet.hpp"

#include <cmath>
#include <string>

namespace tubefocal {

namespace {

// frame vectors together with their first u-derivatives, shared by the two
// residual paths below
struct FrameAndRates {
  Eigen::Vector3d T, N1, N2, Tp, N1p, N2p;
  double kappa = 0.0, tau = 0.0;
};

Eigen::Vector3d jet_value(const Vec3<Jet3d>& v) {
  return {v.x().f, v.y().f, v.z().f};
}

Eigen::Vector3d jet_rate(const Vec3<Jet3d>& v) {
  return {v.x().d1, v.y().d1, v.z().d1};
}

FrameOdeResiduals residuals_of(const FrameAndRates& fr) {
  FrameOdeResiduals r;
  r.rows[0] = (fr.Tp - fr.kappa * fr.N1).norm();
  r.rows[1] = (fr.N1p + fr.kappa * fr.T - fr.tau * fr.N2).norm();
  r.rows[2] = (fr.N2p + fr.tau * fr.N1).norm();
  return r;
}

}  // namespace

FrenetApparatus frenet_at(const CurveModel& curve, double u, const Tolerances& tol) {
  const CurveDerivs<Jet3d> d = curve.derivs(jet_var(u));

  const Eigen::Vector3d g1 = primal3(d.g1);
  const double speed = g1.norm();
  if (std::abs(speed - 1.0) > tol.unit_speed)
    throw NotUnitSpeed("curve speed " + std::to_string(speed) + " at u = " + std::to_string(u));

  const Jet3d kappa_jet = norm3(d.g2);
  if (!(kappa_jet.f > tol.eps_kappa))
    throw VanishingCurvature("curvature " + std::to_string(kappa_jet.f) + " at u = " + std::to_string(u));

  FrenetApparatus f;
  f.gamma = primal3(d.g0);
  f.T = g1;
  f.kappa = kappa_jet.f;
  f.kappa_jet = kappa_jet;
  f.N1 = primal3(d.g2) / f.kappa;
  f.N2 = f.T.cross(f.N1);
  f.tau_jet = det3(d.g1, d.g2, d.g3) / dot3(d.g2, d.g2);
  f.tau = f.tau_jet.f;
  return f;
}

FrameOdeResiduals frenet_ode_residual_jet(const CurveModel& curve, double u, const Tolerances& tol) {
  const FrenetApparatus base = frenet_at(curve, u, tol);  // guards

  const CurveDerivs<Jet3d> d = curve.derivs(jet_var(u));
  const Jet3d kappa_jet = norm3(d.g2);
  const Vec3<Jet3d> N1 = d.g2 * reciprocal(kappa_jet);
  const Vec3<Jet3d> N2 = cross3(d.g1, N1);

  FrameAndRates fr;
  fr.kappa = base.kappa;
  fr.tau = base.tau;
  fr.T = jet_value(d.g1);
  fr.N1 = jet_value(N1);
  fr.N2 = jet_value(N2);
  fr.Tp = jet_rate(d.g1);
  fr.N1p = jet_rate(N1);
  fr.N2p = jet_rate(N2);
  return residuals_of(fr);
}

FrameOdeResiduals frenet_ode_residual_fd(const CurveModel& curve, double u, const Tolerances& tol) {
  const double h = tol.fd_h;
  const FrenetApparatus c = frenet_at(curve, u, tol);
  const FrenetApparatus p = frenet_at(curve, u + h, tol);
  const FrenetApparatus m = frenet_at(curve, u - h, tol);

  FrameAndRates fr;
  fr.kappa = c.kappa;
  fr.tau = c.tau;
  fr.T = c.T;
  fr.N1 = c.N1;
  fr.N2 = c.N2;
  fr.Tp = (p.T - m.T) / (2.0 * h);
  fr.N1p = (p.N1 - m.N1) / (2.0 * h);
  fr.N2p = (p.N2 - m.N2) / (2.0 * h);
  return residuals_of(fr);
}

}  // namespace tubefocal
