#include "tubefocal/spine.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <type_traits>
#include <utility>

#include "tubefocal/errors.hpp"

namespace tubefocal {

namespace {

// 15-point Gauss-Kronrod rule on [-1, 1]: abscissae (positive half; the
// odd-indexed entries and the center are the embedded 7-point Gauss rule)
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

constexpr int kMaxDepth = 28;

inline double norm_of(double x) { return std::abs(x); }
inline double norm_of(const Eigen::Vector2d& v) { return v.lpNorm<Eigen::Infinity>(); }

template <class F>
using value_of = std::decay_t<decltype(std::declval<const F&>()(0.0))>;

template <class F>
value_of<F> gk15(const F& f, double a, double b, double& err) {
  using V = value_of<F>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const V fc = f(c);
  V i15 = fc * kWgk[7];
  V i7 = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const V s = V(f(c - x) + f(c + x));
    i15 += s * kWgk[j];
    if (j % 2 == 1) i7 += s * kWg[(j - 1) / 2];
  }
  i15 *= h;
  i7 *= h;
  err = norm_of(V(i15 - i7));
  return i15;
}

template <class F>
value_of<F> integrate(const F& f, double a, double b, double tol, int depth = 0) {
  using V = value_of<F>;
  double err = 0.0;
  V whole = gk15(f, a, b, err);
  if (std::isfinite(err) && err <= tol) return whole;
  if (depth >= kMaxDepth) {
    std::ostringstream os;
    os << "quadrature did not converge on [" << a << ", " << b << "]: residual " << err
       << " exceeds " << tol;
    throw QuadratureFailure(os.str());
  }
  const double c = 0.5 * (a + b);
  const V left = integrate(f, a, c, 0.5 * tol, depth + 1);
  const V right = integrate(f, c, b, 0.5 * tol, depth + 1);
  return V(left + right);
}

template <class F>
value_of<F> integrate_signed(const F& f, double a, double b, double tol) {
  using V = value_of<F>;
  if (a == b) return V(V(f(a)) * 0.0);
  if (a < b) return integrate(f, a, b, tol);
  return V(integrate(f, b, a, tol) * -1.0);
}

// slot (i, j, k) of a triple-nested jet holds the derivative of total order
// i + j + k; order_slot extracts one representative of order m
const Jet3dd& pick(const Jet3<Jet3dd>& j, int i) {
  switch (i) {
    case 0: return j.f;
    case 1: return j.d1;
    case 2: return j.d2;
    default: return j.d3;
  }
}
const Jet3d& pick(const Jet3dd& j, int i) {
  switch (i) {
    case 0: return j.f;
    case 1: return j.d1;
    case 2: return j.d2;
    default: return j.d3;
  }
}
double pick(const Jet3d& j, int i) {
  switch (i) {
    case 0: return j.f;
    case 1: return j.d1;
    case 2: return j.d2;
    default: return j.d3;
  }
}

double order_slot(const Jet3<Jet3dd>& j, int m) {
  const int i = std::min(m, 3);
  m -= i;
  const int k = std::min(m, 3);
  m -= k;
  return pick(pick(pick(j, i), k), m);
}

Jet3<Jet3dd> deep3_var(double a) { return jet_var(jet_var(jet_var(a))); }

}  // namespace

CurvatureSpine::CurvatureSpine(ExprTree kappa, double u0, double u_min, double u_max,
                               int checkpoints, const Tolerances& tol)
    : kappa_(std::move(kappa)),
      u0_(u0),
      u_min_(u_min),
      u_max_(u_max),
      quad_tol_(tol.quadrature) {
  if (!(u_min < u_max)) throw DomainError("spine range is empty: u_min must be below u_max");
  if (!(u0 >= u_min && u0 <= u_max))
    throw DomainError("spine anchor u0 must lie inside [u_min, u_max]");
  if (checkpoints < 16) {
    std::ostringstream os;
    os << "spine needs at least 16 checkpoints, got " << checkpoints;
    throw DomainError(os.str());
  }

  const auto rate = [this](double s) { return eval_value(kappa_, s); };

  cp_u_.resize(size_t(checkpoints));
  const double gap = (u_max_ - u_min_) / double(checkpoints - 1);
  for (int i = 0; i < checkpoints; ++i) cp_u_[size_t(i)] = u_min_ + gap * double(i);
  cp_u_.back() = u_max_;

  // tangent angle first, accumulated panel by panel and then shifted so the
  // anchor reads zero; positions second, using the shifted angle
  cp_theta_.assign(cp_u_.size(), 0.0);
  for (size_t i = 1; i < cp_u_.size(); ++i)
    cp_theta_[i] = cp_theta_[i - 1] + integrate(rate, cp_u_[i - 1], cp_u_[i], quad_tol_);
  const double shift = theta_at(u0_);
  for (double& t : cp_theta_) t -= shift;

  cp_gamma_.assign(cp_u_.size(), Eigen::Vector2d::Zero());
  for (size_t i = 1; i < cp_u_.size(); ++i) {
    const double base_u = cp_u_[i - 1];
    const double base_theta = cp_theta_[i - 1];
    const auto heading = [&](double s) -> Eigen::Vector2d {
      const double th = base_theta + integrate_signed(rate, base_u, s, quad_tol_ * 1e-2);
      return {std::cos(th), std::sin(th)};
    };
    cp_gamma_[i] = cp_gamma_[i - 1] + integrate(heading, cp_u_[i - 1], cp_u_[i], quad_tol_);
  }
  gamma_shift_ = gamma_at(u0_);
}

int CurvatureSpine::segment_of(double a) const {
  const double gap = (u_max_ - u_min_) / double(cp_u_.size() - 1);
  const auto i = static_cast<long>(std::floor((a - u_min_) / gap));
  return int(std::clamp(i, 0l, long(cp_u_.size()) - 1));
}

double CurvatureSpine::theta_at(double a) const {
  const int i = segment_of(a);
  const auto rate = [this](double s) { return eval_value(kappa_, s); };
  return cp_theta_[size_t(i)] + integrate_signed(rate, cp_u_[size_t(i)], a, quad_tol_);
}

Eigen::Vector2d CurvatureSpine::gamma_at(double a) const {
  const int i = segment_of(a);
  const double base_u = cp_u_[size_t(i)];
  const double base_theta = cp_theta_[size_t(i)];
  const auto rate = [this](double s) { return eval_value(kappa_, s); };
  const auto heading = [&](double s) -> Eigen::Vector2d {
    const double th = base_theta + integrate_signed(rate, base_u, s, quad_tol_ * 1e-2);
    return {std::cos(th), std::sin(th)};
  };
  return cp_gamma_[size_t(i)] + integrate_signed(heading, base_u, a, quad_tol_);
}

double CurvatureSpine::turning_angle(double u) const { return theta_at(u); }

CurvatureSpine::Towers CurvatureSpine::make_towers(double a) const {
  // derivatives of the turning rate through order 8 in one deep evaluation
  const Jet3<Jet3dd> seed[1] = {deep3_var(a)};
  const Jet3<Jet3dd> k = eval<Jet3<Jet3dd>>(kappa_, seed);

  std::array<double, 10> theta{};
  theta[0] = theta_at(a);
  for (int m = 1; m <= 9; ++m) theta[size_t(m)] = order_slot(k, m - 1);

  // towers of cos(theta) and sin(theta): compose the Taylor data of theta
  // with a fresh deep seed centered at zero and read the orders back off
  const Jet3<Jet3dd> th = taylor_apply(std::span<const double>(theta), deep3_var(0.0));
  const Jet3<Jet3dd> c = cos(th);
  const Jet3<Jet3dd> s = sin(th);

  Towers t;
  const Eigen::Vector2d g0 = gamma_at(a) - gamma_shift_;
  t.x[0] = g0.x();
  t.y[0] = g0.y();
  for (int m = 1; m <= 9; ++m) {
    t.x[size_t(m)] = order_slot(c, m - 1);
    t.y[size_t(m)] = order_slot(s, m - 1);
  }
  return t;
}

const CurvatureSpine::Towers& CurvatureSpine::towers_at(double a) const {
  {
    std::lock_guard lk(mu_);
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
  }
  Towers t = make_towers(a);
  std::lock_guard lk(mu_);
  return cache_.emplace(a, t).first->second;
}

template <class S>
CurveDerivs<S> CurvatureSpine::derivs_impl(const S& u) const {
  const double a = primal(u);
  const Towers& t = towers_at(a);
  const Jet3<S> delta = jet_var(u) - Jet3<S>(S(a));
  const Jet3<S> x = taylor_apply(std::span<const double>(t.x), delta);
  const Jet3<S> y = taylor_apply(std::span<const double>(t.y), delta);
  CurveDerivs<S> out;
  out.g0 = Vec3<S>(x.f, y.f, S(0));
  out.g1 = Vec3<S>(x.d1, y.d1, S(0));
  out.g2 = Vec3<S>(x.d2, y.d2, S(0));
  out.g3 = Vec3<S>(x.d3, y.d3, S(0));
  return out;
}

CurveDerivs<double> CurvatureSpine::derivs(double u) const { return derivs_impl(u); }
CurveDerivs<Jet3d> CurvatureSpine::derivs(const Jet3d& u) const { return derivs_impl(u); }
CurveDerivs<Jet3dd> CurvatureSpine::derivs(const Jet3dd& u) const { return derivs_impl(u); }

std::shared_ptr<const CurveModel> spine_from_curvature(ExprTree kappa, double u0,
                                                       double u_min, double u_max,
                                                       int checkpoints,
                                                       const Tolerances& tol) {
  return std::make_shared<CurvatureSpine>(std::move(kappa), u0, u_min, u_max, checkpoints,
                                          tol);
}

}  // namespace tubefocal
