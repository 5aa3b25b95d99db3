#include <cmath>
#include <random>

#include "doctest.h"
#include "tubefocal/surface.hpp"

using namespace tubefocal;

namespace {

struct PlaneMap {
  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    return Vec3<S>(u, v, S(0.0));
  }
};

struct SphereMap {
  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    return Vec3<S>(sin(u) * cos(v), sin(u) * sin(v), cos(u));
  }
};

struct SaddleMap {
  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    return Vec3<S>(u, v, u * u - v * v);
  }
};

struct CylinderMap {
  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    return Vec3<S>(cos(u), sin(u), v);
  }
};

struct ConeMap {
  template <class S>
  Vec3<S> operator()(const S& u, const S& v) const {
    return Vec3<S>(v * cos(u), v * sin(u), v);
  }
};

void check_close(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double tol) {
  CHECK((a - b).norm() <= tol);
}

double jet_gap(const SurfaceJet& a, const SurfaceJet& b) {
  double g = (a.X - b.X).norm();
  g = std::max(g, (a.Xu - b.Xu).norm());
  g = std::max(g, (a.Xv - b.Xv).norm());
  g = std::max(g, (a.Xuu - b.Xuu).norm());
  g = std::max(g, (a.Xuv - b.Xuv).norm());
  g = std::max(g, (a.Xvv - b.Xvv).norm());
  return g;
}

}  // namespace

TEST_CASE("plane jet, forms, and direction classes are flat") {
  const SurfaceJet j = surface_jet(PlaneMap{}, 0.7, -1.2);
  check_close(j.X, Eigen::Vector3d(0.7, -1.2, 0.0), 1e-15);
  check_close(j.Xu, Eigen::Vector3d(1, 0, 0), 1e-15);
  check_close(j.Xv, Eigen::Vector3d(0, 1, 0), 1e-15);
  CHECK(j.Xuu.norm() == 0.0);
  CHECK(j.Xuv.norm() == 0.0);
  CHECK(j.Xvv.norm() == 0.0);

  const FundamentalForms f = fundamental_forms(j);
  CHECK(f.E == 1.0);
  CHECK(f.F == 0.0);
  CHECK(f.G == 1.0);
  CHECK(f.l == 0.0);
  CHECK(f.m == 0.0);
  CHECK(f.n == 0.0);

  const CurvatureSummary c = curvatures(f);
  CHECK(c.K == 0.0);
  CHECK(c.H == 0.0);
  CHECK(c.shape.norm() == 0.0);

  for (const CurveDir dir : {CurveDir::U, CurveDir::V}) {
    const DirectionClass d = classify_point(j, f, dir);
    CHECK(d.normal_component == 0.0);
    CHECK(d.geodesic_residual == 0.0);
  }
}

TEST_CASE("unit sphere jet at the equator matches hand differentiation") {
  const SurfaceJet j = surface_jet(SphereMap{}, M_PI / 2.0, 0.0);
  check_close(j.X, Eigen::Vector3d(1, 0, 0), 1e-15);
  check_close(j.Xu, Eigen::Vector3d(0, 0, -1), 1e-15);
  check_close(j.Xv, Eigen::Vector3d(0, 1, 0), 1e-15);
  check_close(j.Xuu, Eigen::Vector3d(-1, 0, 0), 1e-15);
  check_close(j.Xuv, Eigen::Vector3d(0, 0, 0), 1e-15);
  check_close(j.Xvv, Eigen::Vector3d(-1, 0, 0), 1e-15);

  const FundamentalForms f = fundamental_forms(j);
  const CurvatureSummary c = curvatures(f);
  CHECK(std::abs(c.K - 1.0) <= 1e-14);
  CHECK(std::abs(std::abs(c.H) - 1.0) <= 1e-14);
  CHECK(std::abs(c.kappa1 * c.kappa2 - c.K) <= 1e-14);
}

TEST_CASE("swapped-slot evaluation agrees, including the mixed partial") {
  std::mt19937 rng(160301);
  std::uniform_real_distribution<double> uu(0.3, 2.7), vv(-3.0, 3.0);
  for (int i = 0; i < 25; ++i) {
    const double u = uu(rng), v = vv(rng);
    const SurfaceJet a = surface_jet(SphereMap{}, u, v);
    const SurfaceJet b = surface_jet_swapped(SphereMap{}, u, v);
    CHECK(jet_gap(a, b) <= 1e-8);

    const SurfaceJet sa = surface_jet(SaddleMap{}, u, v);
    const SurfaceJet sb = surface_jet_swapped(SaddleMap{}, u, v);
    CHECK(jet_gap(sa, sb) <= 1e-8);
  }
}

TEST_CASE("difference oracle reproduces the jet partials") {
  std::mt19937 rng(908172);
  std::uniform_real_distribution<double> uu(0.4, 2.6), vv(-2.0, 2.0);
  for (int i = 0; i < 15; ++i) {
    const double u = uu(rng), v = vv(rng);
    const SurfaceJet a = surface_jet(SphereMap{}, u, v);
    const SurfaceJet fd = fd_surface_jet(SphereMap{}, u, v, 1e-4);
    CHECK((a.X - fd.X).norm() <= 1e-14);
    CHECK((a.Xu - fd.Xu).norm() <= 1e-8);
    CHECK((a.Xv - fd.Xv).norm() <= 1e-8);
    CHECK((a.Xuu - fd.Xuu).norm() <= 1e-6);
    CHECK((a.Xuv - fd.Xuv).norm() <= 1e-6);
    CHECK((a.Xvv - fd.Xvv).norm() <= 1e-6);
  }
}

TEST_CASE("fundamental form invariants hold along random sphere points") {
  std::mt19937 rng(70911);
  std::uniform_real_distribution<double> uu(0.3, 2.8), vv(0.0, 6.28);
  for (int i = 0; i < 40; ++i) {
    const double u = uu(rng), v = vv(rng);
    const FundamentalForms f = fundamental_forms(surface_jet(SphereMap{}, u, v));
    CHECK(f.E >= 0.0);
    CHECK(f.G >= 0.0);
    CHECK(std::abs(f.W2 - (f.E * f.G - f.F * f.F)) <= 1e-12 * std::max(1.0, std::abs(f.W2)));
    CHECK(std::abs(f.N.norm() - 1.0) <= 1e-12);

    const SurfaceJet j = surface_jet(SphereMap{}, u, v);
    CHECK(std::abs(f.N.dot(j.Xu)) <= 1e-9);
    CHECK(std::abs(f.N.dot(j.Xv)) <= 1e-9);

    // a sphere is all umbilic: the principal split collapses
    const CurvatureSummary c = curvatures(f);
    CHECK(std::abs(c.K - 1.0) <= 1e-10);
    CHECK(std::abs(c.kappa1 - c.kappa2) <= 1e-5);
  }
}

TEST_CASE("curvature identities tie the summary together") {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> uu(-1.5, 1.5);
  for (int i = 0; i < 40; ++i) {
    const double u = uu(rng), v = uu(rng);
    const CurvatureSummary c = curvatures(fundamental_forms(surface_jet(SaddleMap{}, u, v)));
    const double scale = std::max(1.0, std::abs(c.K));
    CHECK(std::abs(c.kappa1 * c.kappa2 - c.K) <= 1e-10 * scale);
    CHECK(std::abs(c.kappa1 + c.kappa2 - 2.0 * c.H) <= 1e-10 * scale);
    CHECK(std::abs(c.shape.trace() - 2.0 * c.H) <= 1e-10 * scale);
    CHECK(std::abs(c.shape.determinant() - c.K) <= 1e-10 * scale);
  }

  const CurvatureSummary c0 = curvatures(fundamental_forms(surface_jet(SaddleMap{}, 0.0, 0.0)));
  CHECK(std::abs(c0.K + 4.0) <= 1e-13);
  CHECK(std::abs(c0.H) <= 1e-13);
  CHECK(std::abs(c0.kappa1 - 2.0) <= 1e-13);
  CHECK(std::abs(c0.kappa2 + 2.0) <= 1e-13);
}

TEST_CASE("umbilic forms collapse the principal split; round-off is clamped") {
  FundamentalForms f;
  f.E = f.G = 1.0;
  f.F = 0.0;
  f.W2 = 1.0;
  f.l = f.n = 1.0;
  f.m = 0.0;
  f.N = Eigen::Vector3d(0, 0, 1);
  const CurvatureSummary c = curvatures(f);
  CHECK(c.K == 1.0);
  CHECK(c.H == 1.0);
  CHECK(c.kappa1 == 1.0);
  CHECK(c.kappa2 == 1.0);

  // radicand pushed just below zero by an inconsistent W2: clamped
  FundamentalForms g = f;
  g.W2 = 1.0 + 1e-13;
  const CurvatureSummary cg = curvatures(g);
  CHECK(cg.kappa1 == cg.kappa2);

  // far beyond round-off: refused
  FundamentalForms h = f;
  h.W2 = 1.0 + 1e-6;
  CHECK_THROWS_AS(curvatures(h), Error);
}

TEST_CASE("cylinder parameter curves: circles are geodesics, rulings asymptotic") {
  const SurfaceJet j = surface_jet(CylinderMap{}, 1.1, 0.4);
  const FundamentalForms f = fundamental_forms(j);

  const DirectionClass du = classify_point(j, f, CurveDir::U);
  CHECK(std::abs(std::abs(du.normal_component) - 1.0) <= 1e-13);  // circles bend normally
  CHECK(du.geodesic_residual <= 1e-13);                           // but stay geodesic

  const DirectionClass dv = classify_point(j, f, CurveDir::V);
  CHECK(std::abs(dv.normal_component) <= 1e-13);  // straight rulings: asymptotic
  CHECK(dv.geodesic_residual <= 1e-13);
}

TEST_CASE("degenerate points are reported as singular") {
  CHECK_THROWS_AS(fundamental_forms(surface_jet(ConeMap{}, 1.0, 0.0)), SingularPoint);
  CHECK_NOTHROW(fundamental_forms(surface_jet(ConeMap{}, 1.0, 0.5)));
}
