#include "tubefocal/tube.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace tubefocal {

namespace {

std::string num(double x) {
  std::ostringstream oss;
  oss << std::setprecision(17) << x;
  return oss.str();
}

std::string num6(double x) {
  std::ostringstream oss;
  oss << std::setprecision(6) << x;
  return oss.str();
}

void require_planar(const FrenetApparatus& a, const Tolerances& tol) {
  if (std::abs(a.gamma.z()) > tol.planarity)
    throw NotPlanar("spine leaves the z = 0 plane: |gamma_z| = " + num6(std::abs(a.gamma.z())));
  if (std::abs(a.tau) > tol.planarity)
    throw NotPlanar("spine carries torsion: |tau| = " + num6(std::abs(a.tau)));
}

void require_curved(const FrenetApparatus& a, const Tolerances& tol) {
  if (!(a.kappa > tol.eps_kappa))
    throw VanishingCurvature("kappa = " + num6(a.kappa) + " is below the curvature guard");
}

// shape operator in the (X_u, X_v) basis, same layout as the numeric path
Eigen::Matrix2d shape_of(const FundamentalForms& f) {
  Eigen::Matrix2d s;
  s << f.G * f.l - f.F * f.m, f.G * f.m - f.F * f.n,
      f.E * f.m - f.F * f.l, f.E * f.n - f.F * f.m;
  return s / f.W2;
}

// flat-sheet curvature summary: K = 0, principal pair {2H, 0}
CurvatureSummary flat_summary(const FundamentalForms& f, double mean) {
  CurvatureSummary c;
  c.K = 0.0;
  c.H = mean;
  c.kappa1 = mean + std::abs(mean);
  c.kappa2 = mean - std::abs(mean);
  c.shape = shape_of(f);
  return c;
}

struct FrenetFocalGuarded {
  double cv = 0.0, sv = 0.0, tv = 0.0;  // cos v, sin v, tan v
};

FrenetFocalGuarded guard_frenet_focal(const FrenetApparatus& a, double v,
                                      const Tolerances& tol) {
  require_planar(a, tol);
  require_curved(a, tol);
  FrenetFocalGuarded g;
  g.cv = std::cos(v);
  g.sv = std::sin(v);
  if (!(std::abs(g.cv) > tol.eps_v))
    throw FocalPoleV("focal sheet has a pole where cos v = 0 (v = " + num6(v) + ")");
  g.tv = g.sv / g.cv;
  const double k = a.kappa;
  const double wstar = std::abs(a.kappa_jet.d1) / (k * k * k * g.cv * g.cv);
  if (!(wstar > tol.eps_reg))
    throw FocalDegenerate("focal sheet collapses where kappa' = 0: |kappa'| = " +
                          num6(std::abs(a.kappa_jet.d1)));
  return g;
}

void guard_darboux_pole(const BScalar& B, double v, const Tolerances& tol) {
  if (!(std::abs(B.b) > tol.eps_b))
    throw FocalPoleB("focal sheet has a pole where kg cos v + kn sin v = 0 (v = " +
                     num6(v) + ")");
}

void guard_darboux_degenerate(const BScalar& B, double taug, const Tolerances& tol) {
  const double den = B.b_u - B.b_v * taug;
  const double ab = std::abs(B.b);
  const double wstar = std::abs(den) / (ab * ab * ab);
  if (!(wstar > tol.eps_reg))
    throw FocalDegenerate("focal sheet is degenerate where b_u - b_v taug = 0 (residual " +
                          num6(den) + ")");
}

}  // namespace

BScalar b_scalar(const Jet3d& kg_jet, const Jet3d& kn_jet, double v) {
  const double cv = std::cos(v), sv = std::sin(v);
  BScalar out;
  out.b = kg_jet.f * cv + kn_jet.f * sv;
  out.b_u = kg_jet.d1 * cv + kn_jet.d1 * sv;
  out.b_v = -kg_jet.f * sv + kn_jet.f * cv;
  out.b_uu = kg_jet.d2 * cv + kn_jet.d2 * sv;
  out.b_uv = -kg_jet.d1 * sv + kn_jet.d1 * cv;
  out.b_vv = -out.b;
  return out;
}

// --- Frenet tube -------------------------------------------------------------

SurfaceJet tube_point_frenet(const FrenetApparatus& a, double r, double v,
                             const Tolerances& tol) {
  require_planar(a, tol);
  require_curved(a, tol);
  const double cv = std::cos(v), sv = std::sin(v);
  const double k = a.kappa, kp = a.kappa_jet.d1;
  const double h = 1.0 - k * r * cv;
  SurfaceJet j;
  j.X = a.gamma + r * (cv * a.N1 + sv * a.N2);
  j.Xu = h * a.T;
  j.Xv = -r * sv * a.N1 + r * cv * a.N2;
  j.Xuu = -kp * r * cv * a.T + k * h * a.N1;
  j.Xuv = k * r * sv * a.T;
  j.Xvv = -r * cv * a.N1 - r * sv * a.N2;
  return j;
}

SurfaceJet tube_point_frenet(const CurveModel& spine, double r, double u, double v,
                             const Tolerances& tol) {
  return tube_point_frenet(frenet_at(spine, u, tol), r, v, tol);
}

TubeForms tube_forms_frenet(const FrenetApparatus& a, double r, double v,
                            const Tolerances& tol) {
  require_planar(a, tol);
  require_curved(a, tol);
  const double cv = std::cos(v), sv = std::sin(v);
  const double k = a.kappa;
  const double h = 1.0 - k * r * cv;
  if (!(std::abs(h) * r > tol.eps_reg))
    throw SingularPoint("tube is singular where kappa r cos v = 1: |1 - kappa r cos v| r = " +
                        num6(std::abs(h) * r));
  TubeForms out;
  FundamentalForms& f = out.forms;
  f.E = h * h;
  f.F = 0.0;
  f.G = r * r;
  f.W2 = h * h * r * r;
  f.N = -cv * a.N1 - sv * a.N2;
  f.l = -k * h * cv;
  f.m = 0.0;
  f.n = r;
  CurvatureSummary& c = out.curvature;
  c.K = -k * cv / (r * h);
  c.H = (1.0 - 2.0 * k * r * cv) / (2.0 * r * h);
  c.kappa1 = 1.0 / r;
  c.kappa2 = -k * cv / h;
  c.shape = shape_of(f);
  return out;
}

TubeForms tube_forms_frenet(const CurveModel& spine, double r, double u, double v,
                            const Tolerances& tol) {
  return tube_forms_frenet(frenet_at(spine, u, tol), r, v, tol);
}

// --- Frenet focal sheet --------------------------------------------------------

SurfaceJet focal_point_frenet(const FrenetApparatus& a, double v, const Tolerances& tol) {
  const FrenetFocalGuarded g = guard_frenet_focal(a, v, tol);
  const double k = a.kappa, kp = a.kappa_jet.d1, kpp = a.kappa_jet.d2;
  const Eigen::Vector3d dir = a.N1 + g.tv * a.N2;
  const double sec2 = 1.0 + g.tv * g.tv;
  SurfaceJet j;
  j.X = a.gamma + dir / k;
  j.Xu = (-kp / (k * k)) * dir;
  j.Xv = (1.0 / (k * g.cv * g.cv)) * a.N2;
  j.Xuu = (kp / k) * a.T + ((-kpp * k + 2.0 * kp * kp) / (k * k * k)) * dir;
  j.Xuv = (-kp / (k * k)) * sec2 * a.N2;
  j.Xvv = (2.0 * g.sv / (k * g.cv * g.cv * g.cv)) * a.N2;
  return j;
}

SurfaceJet focal_point_frenet(const CurveModel& spine, double u, double v,
                              const Tolerances& tol) {
  return focal_point_frenet(frenet_at(spine, u, tol), v, tol);
}

FocalForms focal_forms_frenet(const FrenetApparatus& a, double v, const Tolerances& tol) {
  const FrenetFocalGuarded g = guard_frenet_focal(a, v, tol);
  const double k = a.kappa, kp = a.kappa_jet.d1;
  const double k2 = k * k, k3 = k2 * k;
  const double cv2 = g.cv * g.cv;
  FocalForms out;
  FundamentalForms& f = out.forms;
  f.E = kp * kp / (k2 * k2 * cv2);
  f.F = -kp * g.sv / (k3 * cv2 * g.cv);
  f.G = 1.0 / (k2 * cv2 * cv2);
  f.W2 = kp * kp / (k3 * k3 * cv2 * cv2);
  f.N = -a.T;
  f.l = -kp / k;
  f.m = 0.0;
  f.n = 0.0;
  out.mean = -k3 / (2.0 * kp);
  out.curvature = flat_summary(f, out.mean);
  return out;
}

FocalForms focal_forms_frenet(const CurveModel& spine, double u, double v,
                              const Tolerances& tol) {
  return focal_forms_frenet(frenet_at(spine, u, tol), v, tol);
}

// --- Darboux tube --------------------------------------------------------------

SurfaceJet tube_point_darboux(const DarbouxApparatus& a, double r, double v) {
  const double cv = std::cos(v), sv = std::sin(v);
  const BScalar B = b_scalar(a.kg_jet, a.kn_jet, v);
  const double h = 1.0 - B.b * r;
  const double tg = a.taug, tgp = a.taug_jet.d1;
  SurfaceJet j;
  j.X = a.gamma + r * (cv * a.Y + sv * a.U);
  j.Xu = h * a.T - r * tg * sv * a.Y + r * tg * cv * a.U;
  j.Xv = -r * sv * a.Y + r * cv * a.U;
  j.Xuu = (-B.b_u * r - r * tg * B.b_v) * a.T +
          (a.kg * h - r * tgp * sv - r * tg * tg * cv) * a.Y +
          (a.kn * h + r * tgp * cv - r * tg * tg * sv) * a.U;
  j.Xuv = -B.b_v * r * a.T - r * tg * cv * a.Y - r * tg * sv * a.U;
  j.Xvv = -r * cv * a.Y - r * sv * a.U;
  return j;
}

SurfaceJet tube_point_darboux(const DarbouxSource& src, double r, double u, double v) {
  return tube_point_darboux(src.apparatus(u), r, v);
}

TubeForms tube_forms_darboux(const DarbouxApparatus& a, double r, double v,
                             const Tolerances& tol) {
  const double cv = std::cos(v), sv = std::sin(v);
  const BScalar B = b_scalar(a.kg_jet, a.kn_jet, v);
  const double tg = a.taug;
  const double h = 1.0 - B.b * r;
  if (!(std::abs(h) * r > tol.eps_reg))
    throw SingularPoint("tube is singular where b r = 1: |1 - b r| r = " +
                        num6(std::abs(h) * r));
  TubeForms out;
  FundamentalForms& f = out.forms;
  f.E = h * h + r * r * tg * tg;
  f.F = r * r * tg;
  f.G = r * r;
  f.W2 = h * h * r * r;
  f.N = -cv * a.Y - sv * a.U;
  f.l = -h * B.b + r * tg * tg;
  f.m = r * tg;
  f.n = r;
  CurvatureSummary& c = out.curvature;
  c.K = B.b / (r * (B.b * r - 1.0));
  c.H = (1.0 - 2.0 * B.b * r) / (2.0 * h * r);
  c.kappa1 = 1.0 / r;
  c.kappa2 = B.b / (B.b * r - 1.0);
  c.shape = shape_of(f);
  return out;
}

TubeForms tube_forms_darboux(const DarbouxSource& src, double r, double u, double v,
                             const Tolerances& tol) {
  return tube_forms_darboux(src.apparatus(u), r, v, tol);
}

// --- Darboux focal sheet ---------------------------------------------------------

SurfaceJet focal_point_darboux(const DarbouxApparatus& a, double v, const Tolerances& tol) {
  const double cv = std::cos(v), sv = std::sin(v);
  const BScalar B = b_scalar(a.kg_jet, a.kn_jet, v);
  guard_darboux_pole(B, v, tol);
  guard_darboux_degenerate(B, a.taug, tol);
  const double b = B.b, bu = B.b_u, bv = B.b_v;
  const double buu = B.b_uu, buv = B.b_uv, bvv = B.b_vv;
  const double tg = a.taug, tgp = a.taug_jet.d1;
  const double b2 = b * b, b3 = b2 * b, b4 = b2 * b2;
  SurfaceJet j;
  j.X = a.gamma + (cv * a.Y + sv * a.U) / b;
  j.Xu = (-(bu / b2) * cv - (tg / b) * sv) * a.Y + (-(bu / b2) * sv + (tg / b) * cv) * a.U;
  j.Xv = (-(bv / b2) * cv - sv / b) * a.Y + (-(bv / b2) * sv + cv / b) * a.U;
  j.Xuu = ((bu - bv * tg) / b) * a.T +
          ((-buu * b2 * cv + 2.0 * b * bu * bu * cv + 2.0 * bu * b2 * tg * sv -
            b3 * tg * tg * cv - b3 * tgp * sv) /
           b4) *
              a.Y +
          ((-buu * b2 * sv + 2.0 * b * bu * bu * sv - 2.0 * bu * b2 * tg * cv -
            b3 * tg * tg * sv + b3 * tgp * cv) /
           b4) *
              a.U;
  j.Xuv = ((-buv * b2 * cv + 2.0 * b * bu * bv * cv + bu * b2 * sv + bv * b2 * tg * sv -
            b3 * tg * cv) /
           b4) *
              a.Y +
          ((-buv * b2 * sv + 2.0 * b * bu * bv * sv - bu * b2 * cv - bv * b2 * tg * cv -
            b3 * tg * sv) /
           b4) *
              a.U;
  j.Xvv = ((-bvv * b2 * cv + 2.0 * b * bv * bv * cv + 2.0 * bv * b2 * sv - b3 * cv) / b4) *
              a.Y +
          ((-bvv * b2 * sv + 2.0 * b * bv * bv * sv - 2.0 * bv * b2 * cv - b3 * sv) / b4) *
              a.U;
  return j;
}

SurfaceJet focal_point_darboux(const DarbouxSource& src, double u, double v,
                               const Tolerances& tol) {
  return focal_point_darboux(src.apparatus(u), v, tol);
}

FocalForms focal_forms_darboux(const DarbouxApparatus& a, double v, const Tolerances& tol) {
  const BScalar B = b_scalar(a.kg_jet, a.kn_jet, v);
  guard_darboux_pole(B, v, tol);
  guard_darboux_degenerate(B, a.taug, tol);
  const double b = B.b, bu = B.b_u, bv = B.b_v, tg = a.taug;
  const double b2 = b * b, b4 = b2 * b2, b6 = b4 * b2;
  const double den = bu - bv * tg;
  FocalForms out;
  FundamentalForms& f = out.forms;
  f.E = (bu * bu + b2 * tg * tg) / b4;
  f.F = (bu * bv + b2 * tg) / b4;
  f.G = (bv * bv + b2) / b4;
  f.W2 = den * den / b6;
  f.N = a.T;
  f.l = den / b;
  f.m = 0.0;
  f.n = 0.0;
  out.mean = (bv * bv + b2) * b / (2.0 * den);
  out.curvature = flat_summary(f, out.mean);
  return out;
}

FocalForms focal_forms_darboux(const DarbouxSource& src, double u, double v,
                               const Tolerances& tol) {
  return focal_forms_darboux(src.apparatus(u), v, tol);
}

// --- Parameter-curve classification -----------------------------------------------

namespace {

ClassificationReport residuals_from(const SurfaceJet& j, const Eigen::Vector3d& N) {
  ClassificationReport rep;
  rep.u_asymptotic = std::abs(j.Xuu.dot(N));
  rep.v_asymptotic = std::abs(j.Xvv.dot(N));
  rep.u_geodesic = j.Xuu.cross(N).norm();
  rep.v_geodesic = j.Xvv.cross(N).norm();
  return rep;
}

}  // namespace

ClassificationReport classify_focal_curves(const FrenetApparatus& a, double v,
                                           const Tolerances& tol) {
  const SurfaceJet j = focal_point_frenet(a, v, tol);
  const FocalForms f = focal_forms_frenet(a, v, tol);
  ClassificationReport rep = residuals_from(j, f.forms.N);
  rep.mode = FrameMode::Frenet;
  const double k = a.kappa, kp = a.kappa_jet.d1, kpp = a.kappa_jet.d2;
  rep.u_geodesic_condition = 2.0 * kp * kp - k * kpp;
  rep.u_geodesic_condition_rate = 0.0;
  rep.u_geodesic_combined = rep.u_geodesic_condition;
  rep.v_geodesic_condition = std::sin(v);
  rep.v_geodesic_attainable = true;
  return rep;
}

ClassificationReport classify_focal_curves(const DarbouxApparatus& a, double v,
                                           const Tolerances& tol) {
  const SurfaceJet j = focal_point_darboux(a, v, tol);
  const FocalForms f = focal_forms_darboux(a, v, tol);
  ClassificationReport rep = residuals_from(j, f.forms.N);
  rep.mode = FrameMode::Darboux;
  const BScalar B = b_scalar(a.kg_jet, a.kn_jet, v);
  const double b = B.b, bu = B.b_u;
  const double tg = a.taug, tgp = a.taug_jet.d1, tgpp = a.taug_jet.d2;
  rep.u_geodesic_condition = b * (2.0 * bu * bu - B.b_uu * b - b * b * tg * tg);
  rep.u_geodesic_condition_rate = b * b * (2.0 * bu * tg - b * tgp);
  rep.u_geodesic_combined = -2.0 * tg * (bu * tgp + b * tgpp) + 4.0 * b * tgp * tgp -
                            4.0 * b * tg * tg * tg * tg;
  rep.v_geodesic_condition = B.b_v;
  rep.v_geodesic_attainable = false;
  return rep;
}

ClassificationReport classify_focal_curves(const CurveModel& spine, double u, double v,
                                           const Tolerances& tol) {
  return classify_focal_curves(frenet_at(spine, u, tol), v, tol);
}

ClassificationReport classify_focal_curves(const DarbouxSource& src, double u, double v,
                                           const Tolerances& tol) {
  return classify_focal_curves(src.apparatus(u), v, tol);
}

// --- Specification validation -------------------------------------------------------

void validate_tube_spec(const TubeSpec& spec, int samples, const Tolerances& tol) {
  if (!(spec.r > 0.0))
    throw Error("tube radius must be positive, got " + num6(spec.r));
  if (spec.mode == FrameMode::Frenet) {
    if (!spec.spine) throw Error("Frenet-mode tube needs a spine curve");
    const UnitSpeedReport us = check_unit_speed(*spec.spine, samples, tol.unit_speed);
    if (!us.ok)
      throw NotUnitSpeed("spine speed deviates from 1 by " + num6(us.max_deviation) +
                         " near u = " + num6(us.worst_u));
    const PlanarityReport pl = check_planarity(*spec.spine, samples, tol.planarity);
    if (!pl.ok)
      throw NotPlanar("spine is not planar: max |gamma_z| = " + num6(pl.max_component) +
                      ", max |tau| = " + num6(pl.max_torsion));
  } else {
    if (!spec.source) throw Error("Darboux-mode tube needs a frame source");
  }
}

// --- Spine curvature families ---------------------------------------------------------

ExprTree geodesic_curvature_expr(const SpineFamilyParams& p, double u_min, double u_max) {
  const double lo = p.c1 * u_min + p.c2;
  const double hi = p.c1 * u_max + p.c2;
  if (!(lo * hi > 0.0))
    throw DomainError("geodesic family denominator c1 u + c2 vanishes on [" + num6(u_min) +
                      ", " + num6(u_max) + "]");
  return parse_expr("0 - 1/((" + num(p.c1) + ")*u + (" + num(p.c2) + "))");
}

ExprTree cmc_curvature_expr(const SpineFamilyParams& p, double u_min, double u_max) {
  const double shift = p.c1 * p.c;
  const double lo = u_min + shift;
  const double hi = u_max + shift;
  if (!(p.c > 0.0) || !(lo > 0.0) || !(hi > 0.0))
    throw DomainError("constant-mean family needs c > 0 and u + c1 c > 0 on [" +
                      num6(u_min) + ", " + num6(u_max) + "]");
  return parse_expr("sqrt((" + num(p.c) + ")/(u + (" + num(shift) + ")))");
}

}  // namespace tubefocal
