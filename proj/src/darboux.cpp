#include "tubefocal/darboux.hpp"

#include <cmath>
#include <string>

namespace tubefocal {

namespace {

Eigen::Vector3d jet_value(const Vec3<Jet3d>& v) {
  return {v.x().f, v.y().f, v.z().f};
}

Eigen::Vector3d jet_rate(const Vec3<Jet3d>& v) {
  return {v.x().d1, v.y().d1, v.z().d1};
}

struct DarbouxRates {
  Eigen::Vector3d T, Y, U, Tp, Yp, Up;
  double kg = 0.0, kn = 0.0, taug = 0.0;
};

FrameOdeResiduals residuals_of(const DarbouxRates& fr) {
  FrameOdeResiduals r;
  r.rows[0] = (fr.Tp - (fr.kg * fr.Y + fr.kn * fr.U)).norm();
  r.rows[1] = (fr.Yp - (-fr.kg * fr.T + fr.taug * fr.U)).norm();
  r.rows[2] = (fr.Up - (-fr.kn * fr.T - fr.taug * fr.Y)).norm();
  return r;
}

}  // namespace

DarbouxApparatus DarbouxSource::apparatus(double u) const {
  const DarbouxFrame<Jet3dd> deep = frame(deep_var(u));

  DarbouxApparatus a;
  a.gamma = primal3(deep.gamma);
  a.T = primal3(deep.T);
  a.Y = primal3(deep.Y);
  a.U = primal3(deep.U);
  a.kg_jet = deep.kg.f;
  a.kn_jet = deep.kn.f;
  a.kg = a.kg_jet.f;
  a.kn = a.kn_jet.f;

  if (const std::optional<Jet3d> tg = taug_jet_at(u)) {
    a.taug_jet = *tg;
    a.taug_derived = false;
  } else {
    // taug = <Y', U>; the deep components carry enough orders for a full jet
    Jet3d acc(0.0);
    for (int i = 0; i < 3; ++i) acc += deep.Y[i].d1 * deep.U[i].f;
    a.taug_jet = acc;
    a.taug_derived = true;
  }
  a.taug = a.taug_jet.f;
  return a;
}

DirectDarbouxFrame::DirectDarbouxFrame(Input input, const Tolerances& tol, int validation_samples)
    : in_(std::move(input)) {
  if (!(in_.u_min < in_.u_max)) throw Error("frame parameter range is empty");
  const FrameValidationReport rep = validate_darboux_source(*this, validation_samples, tol);
  if (!rep.ok)
    throw FrameInconsistent(rep.worst_part, "worst violation at u = " + std::to_string(rep.worst_u));
}

std::optional<Jet3d> DirectDarbouxFrame::taug_jet_at(double u) const {
  if (!in_.taug) return std::nullopt;
  return eval_jet3(*in_.taug, u);
}

HostSurfaceCurve::HostSurfaceCurve(std::array<ExprTree, 3> host, ExprTree s_of_u, ExprTree t_of_u,
                                   double u_min, double u_max, const Tolerances& tol,
                                   int validation_samples)
    : host_(std::move(host)),
      s_of_u_(std::move(s_of_u)),
      t_of_u_(std::move(t_of_u)),
      u_min_(u_min),
      u_max_(u_max),
      eps_host_(tol.eps_reg) {
  if (!(u_min_ < u_max_)) throw Error("frame parameter range is empty");
  for (int i = 0; i < validation_samples; ++i) {
    const double u = u_min_ + (u_max_ - u_min_) * (i + 0.5) / validation_samples;
    const DarbouxFrame<double> fr = frame_impl(u);  // throws DegenerateHost on a flat spot
    const double speed = fr.T.norm();
    if (std::abs(speed - 1.0) > tol.unit_speed)
      throw NotUnitSpeed("host track speed " + std::to_string(speed) + " at u = " + std::to_string(u));
  }
}

std::optional<Jet3d> RotatedFrenetDarboux::taug_jet_at(double u) const {
  // constant rotation angle: taug = tau - theta' reduces to tau
  return frenet_at(*curve_, u).tau_jet;
}

DarbouxApparatus frenet_to_darboux(const FrenetApparatus& f, double theta, double theta_prime) {
  const Jet3d theta_jet(theta, theta_prime, 0.0, 0.0);
  const Jet3d c = cos(theta_jet), s = sin(theta_jet);

  DarbouxApparatus a;
  a.gamma = f.gamma;
  a.T = f.T;
  a.Y = c.f * f.N1 + s.f * f.N2;
  a.U = c.f * f.N2 - s.f * f.N1;
  a.kg_jet = f.kappa_jet * c;
  a.kn_jet = f.kappa_jet * s;
  a.taug_jet = f.tau_jet - Jet3d(theta_prime, 0.0, 0.0, 0.0);
  a.kg = a.kg_jet.f;
  a.kn = a.kn_jet.f;
  a.taug = a.taug_jet.f;
  a.taug_derived = false;
  return a;
}

FrameOdeResiduals darboux_ode_residual_jet(const DarbouxSource& src, double u) {
  const DarbouxFrame<Jet3d> fr = src.frame(jet_var(u));
  DarbouxRates r;
  r.T = jet_value(fr.T);
  r.Y = jet_value(fr.Y);
  r.U = jet_value(fr.U);
  r.Tp = jet_rate(fr.T);
  r.Yp = jet_rate(fr.Y);
  r.Up = jet_rate(fr.U);
  r.kg = fr.kg.f;
  r.kn = fr.kn.f;
  r.taug = src.apparatus(u).taug;
  return residuals_of(r);
}

FrameOdeResiduals darboux_ode_residual_fd(const DarbouxSource& src, double u, double h) {
  const DarbouxFrame<double> c = src.frame(u);
  const DarbouxFrame<double> p = src.frame(u + h);
  const DarbouxFrame<double> m = src.frame(u - h);
  DarbouxRates r;
  r.T = c.T;
  r.Y = c.Y;
  r.U = c.U;
  r.Tp = (p.T - m.T) / (2.0 * h);
  r.Yp = (p.Y - m.Y) / (2.0 * h);
  r.Up = (p.U - m.U) / (2.0 * h);
  r.kg = c.kg;
  r.kn = c.kn;
  r.taug = src.apparatus(u).taug;
  return residuals_of(r);
}

FrameValidationReport validate_darboux_source(const DarbouxSource& src, int samples,
                                              const Tolerances& tol) {
  FrameValidationReport rep;
  double worst_ratio = 0.0;
  const auto probe = [&](double value, double tolerance, const char* part, double u, double& slot) {
    slot = std::max(slot, value);
    const double ratio = value / tolerance;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      rep.worst_part = part;
      rep.worst_u = u;
    }
  };

  const double a = src.u_min(), b = src.u_max();
  for (int i = 0; i < samples; ++i) {
    const double u = a + (b - a) * (i + 0.5) / samples;
    const DarbouxFrame<Jet3d> fr = src.frame(jet_var(u));

    const Eigen::Vector3d T = jet_value(fr.T), Y = jet_value(fr.Y), U = jet_value(fr.U);
    probe(std::abs(T.norm() - 1.0), tol.frame_orthonormality, "|T|", u, rep.max_unit_norm);
    probe(std::abs(Y.norm() - 1.0), tol.frame_orthonormality, "|Y|", u, rep.max_unit_norm);
    probe(std::abs(U.norm() - 1.0), tol.frame_orthonormality, "|U|", u, rep.max_unit_norm);
    probe(std::abs(T.dot(Y)), tol.frame_orthonormality, "<T,Y>", u, rep.max_orthogonality);
    probe(std::abs(T.dot(U)), tol.frame_orthonormality, "<T,U>", u, rep.max_orthogonality);
    probe(std::abs(Y.dot(U)), tol.frame_orthonormality, "<Y,U>", u, rep.max_orthogonality);
    probe(std::abs(T.cross(Y).dot(U) - 1.0), tol.frame_orthonormality, "det", u, rep.max_handedness);
    probe((T - jet_rate(fr.gamma)).norm(), tol.frame_orthonormality, "T vs gamma'", u,
          rep.max_tangent_gap);

    DarbouxRates rates;
    rates.T = T;
    rates.Y = Y;
    rates.U = U;
    rates.Tp = jet_rate(fr.T);
    rates.Yp = jet_rate(fr.Y);
    rates.Up = jet_rate(fr.U);
    rates.kg = fr.kg.f;
    rates.kn = fr.kn.f;
    rates.taug = src.apparatus(u).taug;
    const FrameOdeResiduals ode = residuals_of(rates);
    probe(ode.rows[0], tol.frame_ode_jet, "T' equation", u, rep.max_ode_residual);
    probe(ode.rows[1], tol.frame_ode_jet, "Y' equation", u, rep.max_ode_residual);
    probe(ode.rows[2], tol.frame_ode_jet, "U' equation", u, rep.max_ode_residual);
  }
  rep.ok = worst_ratio <= 1.0;
  return rep;
}

}  // namespace tubefocal
