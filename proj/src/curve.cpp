#include "tubefocal/curve.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

#include "tubefocal/errors.hpp"
#include "tubefocal/jet.hpp"

namespace tubefocal {

AnalyticCurve::AnalyticCurve(ExprTree x, ExprTree y, ExprTree z, double u_min, double u_max)
    : comp_{std::move(x), std::move(y), std::move(z)}, u_min_(u_min), u_max_(u_max) {
  if (!(u_min_ < u_max_)) throw Error("curve parameter range is empty");
  for (const ExprTree& c : comp_)
    if (c.empty()) throw Error("curve component expression is empty");
}

const ExprTree& AnalyticCurve::component(int i) const {
  if (i < 0 || i > 2) throw std::out_of_range("curve component index");
  return comp_[i];
}

UnitSpeedReport check_unit_speed(const CurveModel& curve, int samples, double tol) {
  UnitSpeedReport rep;
  const double a = curve.u_min(), b = curve.u_max();
  for (int i = 0; i < samples; ++i) {
    const double u = a + (b - a) * (i + 0.5) / samples;
    const CurveDerivs<double> d = curve.derivs(u);
    const double dev = std::abs(d.g1.norm() - 1.0);
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_u = u;
    }
  }
  rep.ok = rep.max_deviation <= tol;
  return rep;
}

PlanarityReport check_planarity(const CurveModel& curve, int samples, double tol) {
  PlanarityReport rep;
  const double a = curve.u_min(), b = curve.u_max();
  for (int i = 0; i < samples; ++i) {
    const double u = a + (b - a) * (i + 0.5) / samples;
    const CurveDerivs<double> d = curve.derivs(u);
    rep.max_component = std::max(rep.max_component, std::abs(d.g0.z()));
    const double kappa2 = d.g2.squaredNorm();
    if (kappa2 > 0.0) {
      const double tau = d.g1.cross(d.g2).dot(d.g3) / kappa2;
      rep.max_torsion = std::max(rep.max_torsion, std::abs(tau));
    }
  }
  rep.ok = rep.max_component <= tol && rep.max_torsion <= tol;
  return rep;
}

}  // namespace tubefocal
