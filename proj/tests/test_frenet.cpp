#include <cmath>
#include <random>

#include "doctest.h"
#include "tubefocal/curve.hpp"
#include "tubefocal/finite_diff.hpp"
#include "tubefocal/frenet.hpp"

using namespace tubefocal;

namespace {

AnalyticCurve make_log_spiral() {
  // planar unit-speed spiral with curvature 1/(u + sqrt(2)) and zero torsion
  return AnalyticCurve(parse_expr("(u/sqrt(2)+1)*cos(ln(u/sqrt(2)+1))"),
                       parse_expr("(u/sqrt(2)+1)*sin(ln(u/sqrt(2)+1))"),
                       parse_expr("0"), 0.0, 4.0);
}

AnalyticCurve make_helix() {
  // unit-speed circular helix with kappa = tau = 1/2
  return AnalyticCurve(parse_expr("cos(u/sqrt(2))"), parse_expr("sin(u/sqrt(2))"),
                       parse_expr("u/sqrt(2)"), 0.0, 8.0);
}

AnalyticCurve make_circle_r2() {
  // unit-speed circle of radius 2 centered at (0, 2, 0)
  return AnalyticCurve(parse_expr("2*sin(u/2)"), parse_expr("2-2*cos(u/2)"),
                       parse_expr("0"), 0.0, 12.0);
}

void check_close(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double tol) {
  CHECK((a - b).norm() <= tol);
}

}  // namespace

TEST_CASE("helix frame matches hand-computed vectors and invariants") {
  const AnalyticCurve helix = make_helix();
  const double u = 0.9;
  const FrenetApparatus f = frenet_at(helix, u);

  const double s2 = std::sqrt(2.0);
  const double c = std::cos(u / s2), s = std::sin(u / s2);

  CHECK(std::abs(f.kappa - 0.5) <= 1e-14);
  CHECK(std::abs(f.tau - 0.5) <= 1e-14);
  check_close(f.T, Eigen::Vector3d(-s / s2, c / s2, 1.0 / s2), 1e-14);
  check_close(f.N1, Eigen::Vector3d(-c, -s, 0.0), 1e-14);
  check_close(f.N2, Eigen::Vector3d(s / s2, -c / s2, 1.0 / s2), 1e-14);

  // constant invariants: every derivative slot of the jets vanishes
  CHECK(std::abs(f.kappa_jet.d1) <= 1e-13);
  CHECK(std::abs(f.kappa_jet.d2) <= 1e-12);
  CHECK(std::abs(f.kappa_jet.d3) <= 1e-11);
  CHECK(std::abs(f.tau_jet.d1) <= 1e-13);
  CHECK(std::abs(f.tau_jet.d2) <= 1e-12);
  CHECK(std::abs(f.tau_jet.d3) <= 1e-11);
}

TEST_CASE("frame vectors stay orthonormal and right-handed along curves") {
  std::mt19937 rng(5150);
  for (const AnalyticCurve& curve : {make_log_spiral(), make_helix(), make_circle_r2()}) {
    std::uniform_real_distribution<double> pick(curve.u_min() + 0.1, curve.u_max() - 0.1);
    for (int i = 0; i < 20; ++i) {
      const double u = pick(rng);
      const FrenetApparatus f = frenet_at(curve, u);
      CHECK(std::abs(f.T.norm() - 1.0) <= 1e-12);
      CHECK(std::abs(f.N1.norm() - 1.0) <= 1e-12);
      CHECK(std::abs(f.N2.norm() - 1.0) <= 1e-12);
      CHECK(std::abs(f.T.dot(f.N1)) <= 1e-12);
      CHECK(std::abs(f.T.dot(f.N2)) <= 1e-12);
      CHECK(std::abs(f.N1.dot(f.N2)) <= 1e-12);
      CHECK(std::abs(f.T.cross(f.N1).dot(f.N2) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("log spiral curvature jet matches the closed form 1/(u+sqrt(2))") {
  const AnalyticCurve spiral = make_log_spiral();
  const double s2 = std::sqrt(2.0);

  const FrenetApparatus f = frenet_at(spiral, s2);
  const double x = 2.0 * s2;  // u + sqrt(2) at u = sqrt(2)
  CHECK(std::abs(f.kappa - 1.0 / x) <= 1e-13);
  CHECK(std::abs(f.kappa_jet.d1 + 1.0 / (x * x)) <= 1e-12);
  CHECK(std::abs(f.kappa_jet.d2 - 2.0 / (x * x * x)) <= 1e-11);
  CHECK(std::abs(f.kappa_jet.d3 + 6.0 / (x * x * x * x)) <= 1e-10);

  // torsion of a curve in the z = 0 plane is identically zero, exactly
  CHECK(f.tau == 0.0);
  CHECK(f.tau_jet.d1 == 0.0);
  check_close(f.N2, Eigen::Vector3d(0.0, 0.0, 1.0), 1e-13);

  // independent difference oracle for the curvature jet
  const auto kappa_of = [&](double u) { return frenet_at(spiral, u).kappa; };
  const Jet3d fd = fd_jet3_of(kappa_of, s2, FdOptions{});
  CHECK(std::abs(fd.f - f.kappa_jet.f) <= 1e-12);
  CHECK(std::abs(fd.d1 - f.kappa_jet.d1) <= 1e-7);
  CHECK(std::abs(fd.d2 - f.kappa_jet.d2) <= 1e-6);
  CHECK(std::abs(fd.d3 - f.kappa_jet.d3) <= 1e-4);
}

TEST_CASE("circle of radius 2 has curvature 1/2 and inward normal") {
  const AnalyticCurve circle = make_circle_r2();
  const FrenetApparatus f = frenet_at(circle, 1e-9);
  CHECK(std::abs(f.kappa - 0.5) <= 1e-12);
  CHECK(std::abs(f.tau) <= 1e-12);
  check_close(f.gamma, Eigen::Vector3d(0.0, 0.0, 0.0), 1e-8);
  check_close(f.T, Eigen::Vector3d(1.0, 0.0, 0.0), 1e-8);
  check_close(f.N1, Eigen::Vector3d(0.0, 1.0, 0.0), 1e-8);
}

TEST_CASE("unit speed and planarity checks") {
  const AnalyticCurve spiral = make_log_spiral();
  CHECK(check_unit_speed(spiral, 64, 1e-6).ok);
  CHECK(check_unit_speed(make_helix(), 64, 1e-6).ok);
  CHECK(check_planarity(spiral, 64, 1e-9).ok);
  CHECK_FALSE(check_planarity(make_helix(), 64, 1e-9).ok);

  const AnalyticCurve fast(parse_expr("2*u"), parse_expr("0"), parse_expr("0"), 0.0, 1.0);
  const UnitSpeedReport bad = check_unit_speed(fast, 16, 1e-6);
  CHECK_FALSE(bad.ok);
  CHECK(std::abs(bad.max_deviation - 1.0) <= 1e-12);
  CHECK_THROWS_AS(frenet_at(fast, 0.5), NotUnitSpeed);

  const AnalyticCurve line(parse_expr("u/sqrt(2)"), parse_expr("u/sqrt(2)"), parse_expr("0"), 0.0, 1.0);
  CHECK(check_unit_speed(line, 16, 1e-6).ok);
  CHECK_THROWS_AS(frenet_at(line, 0.5), VanishingCurvature);
}

TEST_CASE("frame equations close: jet derivatives and difference oracle") {
  std::mt19937 rng(77002);
  for (const AnalyticCurve& curve : {make_log_spiral(), make_helix()}) {
    std::uniform_real_distribution<double> pick(curve.u_min() + 0.2, curve.u_max() - 0.2);
    for (int i = 0; i < 20; ++i) {
      const double u = pick(rng);
      CHECK(frenet_ode_residual_jet(curve, u).max() <= 1e-12);
      CHECK(frenet_ode_residual_fd(curve, u).max() <= 1e-4);
    }
  }
}

TEST_CASE("jet-valued frame agrees with the pointwise apparatus") {
  const AnalyticCurve helix = make_helix();
  const double u = 2.25;
  const FrenetApparatus f = frenet_at(helix, u);

  const FrenetFrame<Jet3dd> deep = frenet_frame(helix, bivar_u(u));
  CHECK(std::abs(primal(deep.kappa) - f.kappa) <= 1e-14);
  check_close(primal3(deep.gamma), f.gamma, 1e-14);
  check_close(primal3(deep.T), f.T, 1e-14);
  check_close(primal3(deep.N1), f.N1, 1e-14);
  check_close(primal3(deep.N2), f.N2, 1e-14);

  // the outer derivative slot of the deep frame reproduces T' = kappa N1
  const Eigen::Vector3d Tp(deep.T.x().d1.f, deep.T.y().d1.f, deep.T.z().d1.f);
  check_close(Tp, f.kappa * f.N1, 1e-13);
}

TEST_CASE("analytic curve construction guards") {
  CHECK_THROWS_AS(AnalyticCurve(parse_expr("u"), parse_expr("u"), parse_expr("0"), 1.0, 1.0), Error);
  const AnalyticCurve c = make_helix();
  CHECK(c.component(0).str() == "cos(u/sqrt(2))");
  CHECK_THROWS_AS(c.component(3), std::out_of_range);
}
