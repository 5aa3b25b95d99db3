#pragma once

#include <Eigen/Dense>

#include "tubefocal/errors.hpp"
#include "tubefocal/jet.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Generic parametric-surface engine.  A "surface map" is any callable with
//   template <class S> Vec3<S> operator()(const S& u, const S& v) const
// Evaluating it once on nested jets yields every partial through second
// order; central differences on the plain-double overload give a fully
// independent oracle for the same quantities.
// ---------------------------------------------------------------------------

// position and first/second partials at one (u, v)
struct SurfaceJet {
  Eigen::Vector3d X, Xu, Xv, Xuu, Xuv, Xvv;
};

struct FundamentalForms {
  double E = 0.0, F = 0.0, G = 0.0;  // first form
  double W2 = 0.0;                   // EG - F^2
  double l = 0.0, m = 0.0, n = 0.0;  // second form against N
  Eigen::Vector3d N = Eigen::Vector3d::Zero();
};

struct CurvatureSummary {
  double K = 0.0, H = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0;  // H +- sqrt(H^2 - K)
  Eigen::Matrix2d shape;              // shape operator in the (X_u, X_v) basis
};

enum class CurveDir { U, V };

// pointwise classification data for one parameter direction
struct DirectionClass {
  double normal_component = 0.0;   // second-form coefficient; zero iff asymptotic
  double geodesic_residual = 0.0;  // |acceleration x N|; zero iff geodesic
};

// one nested-jet evaluation: outer slot differentiates in u, inner in v
template <class Map>
SurfaceJet surface_jet(const Map& map, double u, double v) {
  const Vec3<Jet3dd> X = map(bivar_u(u), bivar_v(v));
  SurfaceJet j;
  for (int i = 0; i < 3; ++i) {
    j.X[i] = X[i].f.f;
    j.Xu[i] = X[i].d1.f;
    j.Xv[i] = X[i].f.d1;
    j.Xuu[i] = X[i].d2.f;
    j.Xuv[i] = X[i].d1.d1;
    j.Xvv[i] = X[i].f.d2;
  }
  return j;
}

// same point with the differentiation slots swapped (v outer, u inner);
// comparing the mixed partial against surface_jet checks slot symmetry
template <class Map>
SurfaceJet surface_jet_swapped(const Map& map, double u, double v) {
  const Vec3<Jet3dd> X = map(Jet3dd(jet_var(u)), jet_var(Jet3d(v)));
  SurfaceJet j;
  for (int i = 0; i < 3; ++i) {
    j.X[i] = X[i].f.f;
    j.Xu[i] = X[i].f.d1;
    j.Xv[i] = X[i].d1.f;
    j.Xuu[i] = X[i].f.d2;
    j.Xuv[i] = X[i].d1.d1;
    j.Xvv[i] = X[i].d2.f;
  }
  return j;
}

// independent oracle: second-order central differences on plain doubles
template <class Map>
SurfaceJet fd_surface_jet(const Map& map, double u, double v, double h) {
  const auto P = [&](double a, double b) -> Eigen::Vector3d {
    const Vec3<double> x = map(a, b);
    return {x[0], x[1], x[2]};
  };
  const Eigen::Vector3d c = P(u, v);
  const Eigen::Vector3d up = P(u + h, v), um = P(u - h, v);
  const Eigen::Vector3d vp = P(u, v + h), vm = P(u, v - h);
  SurfaceJet j;
  j.X = c;
  j.Xu = (up - um) / (2.0 * h);
  j.Xv = (vp - vm) / (2.0 * h);
  j.Xuu = (up - 2.0 * c + um) / (h * h);
  j.Xvv = (vp - 2.0 * c + vm) / (h * h);
  j.Xuv = (P(u + h, v + h) - P(u + h, v - h) - P(u - h, v + h) + P(u - h, v - h)) / (4.0 * h * h);
  return j;
}

// E, F, G, N, l, m, n; throws SingularPoint when W^2 = EG - F^2 <= eps_reg
FundamentalForms fundamental_forms(const SurfaceJet& j, double eps_reg = 1e-10);

// Gaussian/mean/principal curvatures and the shape operator.  The principal
// radicand H^2 - K is clamped to zero when within -1e-12 (umbilic round-off).
CurvatureSummary curvatures(const FundamentalForms& f);

// asymptotic/geodesic data of the parameter curve through the point
DirectionClass classify_point(const SurfaceJet& j, const FundamentalForms& f, CurveDir dir);

}  // namespace tubefocal
