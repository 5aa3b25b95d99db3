#pragma once

#include <memory>
#include <utility>

#include "tubefocal/expression.hpp"
#include "tubefocal/jet.hpp"

namespace tubefocal {

// Position and first three derivatives of a space curve, carried at scalar S.
// With S = Jet3d or Jet3dd the entries themselves hold derivative towers, so a
// single call covers both deep univariate and mixed-partial needs.
template <class S>
struct CurveDerivs {
  Vec3<S> g0, g1, g2, g3;
};

// A spine curve that can be evaluated at plain points and at jet points.  The
// overload set is the whole contract: downstream code is templated on the
// scalar and never cares how the curve is represented.
class CurveModel {
 public:
  virtual ~CurveModel() = default;

  virtual CurveDerivs<double> derivs(double u) const = 0;
  virtual CurveDerivs<Jet3d> derivs(const Jet3d& u) const = 0;
  virtual CurveDerivs<Jet3dd> derivs(const Jet3dd& u) const = 0;

  // parameter range the model is meant to be sampled on
  virtual double u_min() const = 0;
  virtual double u_max() const = 0;

  Eigen::Vector3d point(double u) const { return derivs(u).g0; }
};

// Curve given by one expression tree per component, differentiated by jet
// evaluation.  The trees use the single variable "u".
class AnalyticCurve final : public CurveModel {
 public:
  AnalyticCurve(ExprTree x, ExprTree y, ExprTree z, double u_min, double u_max);

  CurveDerivs<double> derivs(double u) const override { return derivs_impl(u); }
  CurveDerivs<Jet3d> derivs(const Jet3d& u) const override { return derivs_impl(u); }
  CurveDerivs<Jet3dd> derivs(const Jet3dd& u) const override { return derivs_impl(u); }

  double u_min() const override { return u_min_; }
  double u_max() const override { return u_max_; }

  const ExprTree& component(int i) const;

 private:
  template <class S>
  CurveDerivs<S> derivs_impl(const S& u) const {
    const Jet3<S> seed[1] = {jet_var(u)};
    CurveDerivs<S> out;
    for (int i = 0; i < 3; ++i) {
      const Jet3<S> c = eval<Jet3<S>>(comp_[i], seed);
      out.g0[i] = c.f;
      out.g1[i] = c.d1;
      out.g2[i] = c.d2;
      out.g3[i] = c.d3;
    }
    return out;
  }

  ExprTree comp_[3];
  double u_min_, u_max_;
};

struct UnitSpeedReport {
  double max_deviation = 0.0;  // max over samples of | |gamma'| - 1 |
  double worst_u = 0.0;
  bool ok = false;
};

// Samples |gamma'| on the model's range.  Callers decide whether a failure is
// fatal; frame constructors treat it as one.
UnitSpeedReport check_unit_speed(const CurveModel& curve, int samples, double tol);

struct PlanarityReport {
  double max_component = 0.0;  // max |gamma_3|
  double max_torsion = 0.0;
  bool ok = false;
};

// A spine is treated as planar when it stays in the z = 0 plane and its
// torsion vanishes along the sampled range.
PlanarityReport check_planarity(const CurveModel& curve, int samples, double tol);

}  // namespace tubefocal
