#pragma once

#include <memory>

#include <Eigen/Dense>

#include "tubefocal/curve.hpp"
#include "tubefocal/darboux.hpp"
#include "tubefocal/errors.hpp"
#include "tubefocal/frenet.hpp"
#include "tubefocal/surface.hpp"
#include "tubefocal/tolerances.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Tubes of constant radius r around a spine curve, and the focal sheet swept
// by the centers of normal curvature.  Two frame conventions:
//
//   Frenet  X(u,v) = gamma + r (cos v N1 + sin v N2), spine planar,
//           focal sheet X* = gamma + (1/(kappa cos v)) (cos v N1 + sin v N2);
//   Darboux X(u,v) = gamma + r (cos v Y + sin v U) for any frame source,
//           focal sheet X* = gamma + (1/b) (cos v Y + sin v U)
//           with b = kg cos v + kn sin v.
//
// Every function here is a closed-form expression in the frame apparatus.
// The map functors at the bottom route the same geometry through the generic
// surface-jet engine, giving an independent numeric path for cross-checks.
//
// Orientation: the closed forms use the inward normal -cos v Y - sin v U on
// the tube (so the radial principal curvature is +1/r), the focal normals are
// -T (Frenet) and +T (Darboux).  The numeric path orients by X_u x X_v; the
// two agree up to a per-patch sign that comparisons must resolve.
// ---------------------------------------------------------------------------

enum class FrameMode { Frenet, Darboux };

// b(u,v) = kg(u) cos v + kn(u) sin v together with the partial derivatives
// the focal closed forms consume; the scalar jets supply the u-orders.
struct BScalar {
  double b = 0.0;
  double b_u = 0.0;
  double b_v = 0.0;
  double b_uu = 0.0;
  double b_uv = 0.0;
  double b_vv = 0.0;
};

BScalar b_scalar(const Jet3d& kg_jet, const Jet3d& kn_jet, double v);

// fundamental forms plus curvature data of one closed-form evaluation
struct TubeForms {
  FundamentalForms forms;
  CurvatureSummary curvature;
};

// Focal sheets are flat (K = 0 identically); `mean` is the closed-form mean
// curvature, duplicated outside the summary because it is the quantity the
// constant-mean-curvature spine families are built around.
struct FocalForms {
  FundamentalForms forms;
  CurvatureSummary curvature;
  double mean = 0.0;
};

// --- Frenet branch (planar spine) ------------------------------------------
// Each operation exists at two levels: on a precomputed apparatus (cheap to
// sweep in v for a fixed u) and on the curve itself.  The apparatus level
// re-checks planarity pointwise: |gamma_z| and |tau| within tol.planarity,
// else NotPlanar.  Curvature below tol.eps_kappa raises VanishingCurvature.

SurfaceJet tube_point_frenet(const FrenetApparatus& a, double r, double v,
                             const Tolerances& tol = {});
SurfaceJet tube_point_frenet(const CurveModel& spine, double r, double u, double v,
                             const Tolerances& tol = {});

// throws SingularPoint when |W| = |1 - kappa r cos v| r <= tol.eps_reg
TubeForms tube_forms_frenet(const FrenetApparatus& a, double r, double v,
                            const Tolerances& tol = {});
TubeForms tube_forms_frenet(const CurveModel& spine, double r, double u, double v,
                            const Tolerances& tol = {});

// throws FocalPoleV when |cos v| <= tol.eps_v and FocalDegenerate when the
// sheet collapses, |W*| = |kappa'| / (kappa^3 cos^2 v) <= tol.eps_reg
SurfaceJet focal_point_frenet(const FrenetApparatus& a, double v,
                              const Tolerances& tol = {});
SurfaceJet focal_point_frenet(const CurveModel& spine, double u, double v,
                              const Tolerances& tol = {});

FocalForms focal_forms_frenet(const FrenetApparatus& a, double v,
                              const Tolerances& tol = {});
FocalForms focal_forms_frenet(const CurveModel& spine, double u, double v,
                              const Tolerances& tol = {});

// --- Darboux branch (any frame source) -------------------------------------

SurfaceJet tube_point_darboux(const DarbouxApparatus& a, double r, double v);
SurfaceJet tube_point_darboux(const DarbouxSource& src, double r, double u, double v);

// throws SingularPoint when |W| = |1 - b r| r <= tol.eps_reg
TubeForms tube_forms_darboux(const DarbouxApparatus& a, double r, double v,
                             const Tolerances& tol = {});
TubeForms tube_forms_darboux(const DarbouxSource& src, double r, double u, double v,
                             const Tolerances& tol = {});

// throws FocalPoleB when |b| <= tol.eps_b and FocalDegenerate when
// |W*| = |b_u - b_v taug| / |b|^3 <= tol.eps_reg
SurfaceJet focal_point_darboux(const DarbouxApparatus& a, double v,
                               const Tolerances& tol = {});
SurfaceJet focal_point_darboux(const DarbouxSource& src, double u, double v,
                               const Tolerances& tol = {});

FocalForms focal_forms_darboux(const DarbouxApparatus& a, double v,
                               const Tolerances& tol = {});
FocalForms focal_forms_darboux(const DarbouxSource& src, double u, double v,
                               const Tolerances& tol = {});

// --- Parameter curves of the focal sheet ------------------------------------

// Residuals of the asymptotic/geodesic tests for the u- and v-parameter
// curves through one focal point, plus the closed-form side conditions that
// decide them.  All four residuals are evaluated from the closed-form jet, so
// they vanish exactly where the conditions say they should.
struct ClassificationReport {
  FrameMode mode = FrameMode::Frenet;

  double u_asymptotic = 0.0;  // |<X*_uu, N*>|; positive wherever the sheet is regular
  double v_asymptotic = 0.0;  // |<X*_vv, N*>|; identically zero
  double u_geodesic = 0.0;    // |X*_uu x N*|
  double v_geodesic = 0.0;    // |X*_vv x N*|

  // Frenet: 2 kappa'^2 - kappa kappa'' (zero exactly on kappa = -1/(c1 u + c2)).
  // Darboux: b (2 b_u^2 - b_uu b - b^2 taug^2), the first of the raw pair.
  double u_geodesic_condition = 0.0;
  // Darboux only: b^2 (2 b_u taug - b taug'), the second of the raw pair;
  // zero in Frenet mode.  u_geodesic = hypot(condition, rate) / b^4.
  double u_geodesic_condition_rate = 0.0;
  // Darboux combination -2 taug (b_u taug' + b taug'') + 4 b taug'^2 - 4 b taug^4.
  // It presumes the rate condition holds along the curve; with taug = 0 it
  // vanishes identically and only the raw pair remains decisive.  Frenet mode
  // copies u_geodesic_condition here.
  double u_geodesic_combined = 0.0;

  // Frenet: sin v (v-curves geodesic exactly at v = t pi).  Darboux: b_v;
  // demanding it along a whole v-curve forces kg = kn = 0, hence the flag.
  double v_geodesic_condition = 0.0;
  bool v_geodesic_attainable = true;
};

ClassificationReport classify_focal_curves(const FrenetApparatus& a, double v,
                                           const Tolerances& tol = {});
ClassificationReport classify_focal_curves(const DarbouxApparatus& a, double v,
                                           const Tolerances& tol = {});
ClassificationReport classify_focal_curves(const CurveModel& spine, double u, double v,
                                           const Tolerances& tol = {});
ClassificationReport classify_focal_curves(const DarbouxSource& src, double u, double v,
                                           const Tolerances& tol = {});

// --- Tube specification ------------------------------------------------------

// One tube job: a frame convention, the matching spine source, and a radius.
struct TubeSpec {
  FrameMode mode = FrameMode::Frenet;
  std::shared_ptr<const CurveModel> spine;      // Frenet mode
  std::shared_ptr<const DarbouxSource> source;  // Darboux mode
  double r = 1.0;
};

// Rejects r <= 0, a missing source, and (Frenet mode) a spine that leaves the
// z = 0 plane or carries torsion anywhere on its parameter range.
void validate_tube_spec(const TubeSpec& spec, int samples = 64, const Tolerances& tol = {});

// --- Spine curvature families -----------------------------------------------

// Constants of the two special curvature families.  The geodesic family
// kappa(u) = -1/(c1 u + c2) makes every u-parameter curve of the Frenet focal
// sheet a geodesic; the constant-mean family kappa(u) = sqrt(c/(u + c1 c))
// gives the focal sheet mean curvature identically c.
struct SpineFamilyParams {
  double c = 1.0;
  double c1 = 0.0;
  double c2 = 1.0;
};

// curvature expressions in the variable u; both throw DomainError when the
// family denominator vanishes (or the radicand is nonpositive) on the span
ExprTree geodesic_curvature_expr(const SpineFamilyParams& p, double u_min, double u_max);
ExprTree cmc_curvature_expr(const SpineFamilyParams& p, double u_min, double u_max);

// --- Generic surface maps -----------------------------------------------------
// Immersions (u, v) -> R^3 evaluable at plain numbers and at jets, for the
// numeric surface_jet / fd_surface_jet path.  They derive everything from the
// frame fields and never touch the closed forms above.

class FrenetTubeMap {
 public:
  FrenetTubeMap(std::shared_ptr<const CurveModel> spine, double r)
      : spine_(std::move(spine)), r_(r) {
    if (!spine_) throw Error("tube map needs a spine curve");
    if (!(r_ > 0.0)) throw Error("tube radius must be positive");
  }

  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    const FrenetFrame<S> f = frenet_frame(*spine_, u);
    return f.gamma + (f.N1 * cos(v) + f.N2 * sin(v)) * S(r_);
  }

 private:
  std::shared_ptr<const CurveModel> spine_;
  double r_;
};

class FrenetFocalMap {
 public:
  explicit FrenetFocalMap(std::shared_ptr<const CurveModel> spine)
      : spine_(std::move(spine)) {
    if (!spine_) throw Error("focal map needs a spine curve");
  }

  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    const FrenetFrame<S> f = frenet_frame(*spine_, u);
    return f.gamma + (f.N1 + f.N2 * tan(v)) * (S(1.0) / f.kappa);
  }

 private:
  std::shared_ptr<const CurveModel> spine_;
};

class DarbouxTubeMap {
 public:
  DarbouxTubeMap(std::shared_ptr<const DarbouxSource> src, double r)
      : src_(std::move(src)), r_(r) {
    if (!src_) throw Error("tube map needs a frame source");
    if (!(r_ > 0.0)) throw Error("tube radius must be positive");
  }

  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    const DarbouxFrame<S> f = src_->frame(u);
    return f.gamma + (f.Y * cos(v) + f.U * sin(v)) * S(r_);
  }

 private:
  std::shared_ptr<const DarbouxSource> src_;
  double r_;
};

class DarbouxFocalMap {
 public:
  explicit DarbouxFocalMap(std::shared_ptr<const DarbouxSource> src)
      : src_(std::move(src)) {
    if (!src_) throw Error("focal map needs a frame source");
  }

  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    const DarbouxFrame<S> f = src_->frame(u);
    const S cv = cos(v), sv = sin(v);
    const S b = f.kg * cv + f.kn * sv;
    return f.gamma + (f.Y * cv + f.U * sv) * (S(1.0) / b);
  }

 private:
  std::shared_ptr<const DarbouxSource> src_;
};

}  // namespace tubefocal
