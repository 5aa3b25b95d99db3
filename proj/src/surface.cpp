#include "tubefocal/surface.hpp"

#include <cmath>
#include <string>

namespace tubefocal {

FundamentalForms fundamental_forms(const SurfaceJet& j, double eps_reg) {
  FundamentalForms f;
  f.E = j.Xu.dot(j.Xu);
  f.F = j.Xu.dot(j.Xv);
  f.G = j.Xv.dot(j.Xv);
  f.W2 = f.E * f.G - f.F * f.F;
  if (!(f.W2 > eps_reg))
    throw SingularPoint("EG - F^2 = " + std::to_string(f.W2) + " at a sampled point");
  f.N = j.Xu.cross(j.Xv) / std::sqrt(f.W2);
  f.l = j.Xuu.dot(f.N);
  f.m = j.Xuv.dot(f.N);
  f.n = j.Xvv.dot(f.N);
  return f;
}

CurvatureSummary curvatures(const FundamentalForms& f) {
  CurvatureSummary c;
  c.K = (f.l * f.n - f.m * f.m) / f.W2;
  c.H = (f.E * f.n - 2.0 * f.F * f.m + f.G * f.l) / (2.0 * f.W2);

  double disc = c.H * c.H - c.K;
  if (disc < 0.0) {
    if (disc < -1e-12)
      throw Error("principal curvature radicand " + std::to_string(disc) +
                  " is negative beyond round-off");
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  c.kappa1 = c.H + root;
  c.kappa2 = c.H - root;

  c.shape << f.G * f.l - f.F * f.m, f.G * f.m - f.F * f.n,
             f.E * f.m - f.F * f.l, f.E * f.n - f.F * f.m;
  c.shape /= f.W2;
  return c;
}

DirectionClass classify_point(const SurfaceJet& j, const FundamentalForms& f, CurveDir dir) {
  DirectionClass d;
  const Eigen::Vector3d& acc = (dir == CurveDir::U) ? j.Xuu : j.Xvv;
  d.normal_component = acc.dot(f.N);
  d.geodesic_residual = acc.cross(f.N).norm();
  return d;
}

}  // namespace tubefocal
