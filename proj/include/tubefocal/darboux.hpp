#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "tubefocal/curve.hpp"
#include "tubefocal/frenet.hpp"
#include "tubefocal/tolerances.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Surface-adapted frame (T, Y, U) along a unit-speed curve: T the tangent,
// U the surface normal, Y = U x T the tangent normal.  The triple is
// right-handed, det[T Y U] = +1, and obeys
//   T' =  kg Y + kn U
//   Y' = -kg T + taug U
//   U' = -kn T - taug Y
// ---------------------------------------------------------------------------

// frame fields at a generic scalar, used by surface maps on jets
template <class S>
struct DarbouxFrame {
  Vec3<S> gamma, T, Y, U;
  S kg, kn;
};

// pointwise frame with derivative jets of the scalar invariants
struct DarbouxApparatus {
  Eigen::Vector3d gamma, T, Y, U;
  double kg = 0.0, kn = 0.0, taug = 0.0;
  Jet3d kg_jet, kn_jet, taug_jet;
  bool taug_derived = false;  // true when taug came from <Y', U> instead of an input
};

class DarbouxSource {
 public:
  virtual ~DarbouxSource() = default;

  virtual DarbouxFrame<double> frame(double u) const = 0;
  virtual DarbouxFrame<Jet3d> frame(const Jet3d& u) const = 0;
  virtual DarbouxFrame<Jet3dd> frame(const Jet3dd& u) const = 0;

  virtual double u_min() const = 0;
  virtual double u_max() const = 0;

  // invariant jets assembled from a deep evaluation; taug falls back to
  // <Y', U> when the source does not carry it explicitly
  DarbouxApparatus apparatus(double u) const;

 protected:
  virtual std::optional<Jet3d> taug_jet_at(double) const { return std::nullopt; }
};

// Frame spelled out as expression trees (curve, three frame fields, kg, kn,
// optionally taug).  Construction samples the frame and rejects input that is
// not orthonormal, not right-handed, inconsistent with the curve tangent, or
// in conflict with the frame equations.
class DirectDarbouxFrame final : public DarbouxSource {
 public:
  struct Input {
    std::array<ExprTree, 3> gamma, T, Y, U;
    ExprTree kg, kn;
    std::optional<ExprTree> taug;
    double u_min = 0.0, u_max = 1.0;
  };

  DirectDarbouxFrame(Input input, const Tolerances& tol = {}, int validation_samples = 32);

  DarbouxFrame<double> frame(double u) const override { return frame_impl(u); }
  DarbouxFrame<Jet3d> frame(const Jet3d& u) const override { return frame_impl(u); }
  DarbouxFrame<Jet3dd> frame(const Jet3dd& u) const override { return frame_impl(u); }

  double u_min() const override { return in_.u_min; }
  double u_max() const override { return in_.u_max; }

 protected:
  std::optional<Jet3d> taug_jet_at(double u) const override;

 private:
  template <class S>
  DarbouxFrame<S> frame_impl(const S& u) const {
    const S vars[1] = {u};
    DarbouxFrame<S> out;
    for (int i = 0; i < 3; ++i) {
      out.gamma[i] = eval<S>(in_.gamma[size_t(i)], vars);
      out.T[i] = eval<S>(in_.T[size_t(i)], vars);
      out.Y[i] = eval<S>(in_.Y[size_t(i)], vars);
      out.U[i] = eval<S>(in_.U[size_t(i)], vars);
    }
    out.kg = eval<S>(in_.kg, vars);
    out.kn = eval<S>(in_.kn, vars);
    return out;
  }

  Input in_;
};

// Curve on a parametric host patch X(s, t): the frame normal is the host
// normal Xs x Xt / |Xs x Xt| along (s(u), t(u)).  The curve must be unit
// speed; the host must be regular along the track.
class HostSurfaceCurve final : public DarbouxSource {
 public:
  HostSurfaceCurve(std::array<ExprTree, 3> host, ExprTree s_of_u, ExprTree t_of_u,
                   double u_min, double u_max, const Tolerances& tol = {},
                   int validation_samples = 32);

  DarbouxFrame<double> frame(double u) const override { return frame_impl(u); }
  DarbouxFrame<Jet3d> frame(const Jet3d& u) const override { return frame_impl(u); }
  DarbouxFrame<Jet3dd> frame(const Jet3dd& u) const override { return frame_impl(u); }

  double u_min() const override { return u_min_; }
  double u_max() const override { return u_max_; }

 private:
  template <class S>
  DarbouxFrame<S> frame_impl(const S& u) const {
    const Jet3<S> ju[1] = {jet_var(u)};
    const Jet3<S> s_jet = eval<Jet3<S>>(s_of_u_, ju);
    const Jet3<S> t_jet = eval<Jet3<S>>(t_of_u_, ju);

    DarbouxFrame<S> out;
    Vec3<S> gamma_dd;
    {
      const Jet3<S> st[2] = {s_jet, t_jet};
      for (int i = 0; i < 3; ++i) {
        const Jet3<S> c = eval<Jet3<S>>(host_[size_t(i)], st);
        out.gamma[i] = c.f;
        out.T[i] = c.d1;
        gamma_dd[i] = c.d2;
      }
    }

    // host partials at the track point; the jet marks one host variable at a
    // time while the point itself keeps its u-dependence
    Vec3<S> Xs, Xt;
    {
      const Jet3<S> by_s[2] = {jet_var(s_jet.f), Jet3<S>(t_jet.f)};
      const Jet3<S> by_t[2] = {Jet3<S>(s_jet.f), jet_var(t_jet.f)};
      for (int i = 0; i < 3; ++i) {
        Xs[i] = eval<Jet3<S>>(host_[size_t(i)], by_s).d1;
        Xt[i] = eval<Jet3<S>>(host_[size_t(i)], by_t).d1;
      }
    }
    const Vec3<S> raw = cross3(Xs, Xt);
    const S len = norm3(raw);
    if (!(primal(len) > eps_host_))
      throw DegenerateHost("host normal vanishes near u = " + std::to_string(primal(u)));
    const S inv_len = S(1.0) / len;
    out.U = raw * inv_len;
    out.Y = cross3(out.U, out.T);
    out.kg = dot3(gamma_dd, out.Y);
    out.kn = dot3(gamma_dd, out.U);
    return out;
  }

  std::array<ExprTree, 3> host_;
  ExprTree s_of_u_, t_of_u_;
  double u_min_, u_max_;
  double eps_host_;
};

// Frame obtained by rotating the Frenet normal plane by a fixed angle theta:
// Y = cos(theta) N1 - sin(theta) N2, U = sin(theta) N1 + cos(theta) N2.
// The rotation sign is chosen so that the triple is right-handed AND the
// frame equations hold with kg = kappa cos(theta), kn = kappa sin(theta),
// taug = tau (both curvatures positive for theta in (0, pi/2)).
class RotatedFrenetDarboux final : public DarbouxSource {
 public:
  RotatedFrenetDarboux(std::shared_ptr<const CurveModel> curve, double theta)
      : curve_(std::move(curve)), theta_(theta) {}

  DarbouxFrame<double> frame(double u) const override { return frame_impl(u); }
  DarbouxFrame<Jet3d> frame(const Jet3d& u) const override { return frame_impl(u); }
  DarbouxFrame<Jet3dd> frame(const Jet3dd& u) const override { return frame_impl(u); }

  double u_min() const override { return curve_->u_min(); }
  double u_max() const override { return curve_->u_max(); }

  double theta() const { return theta_; }
  const CurveModel& spine() const { return *curve_; }

 protected:
  std::optional<Jet3d> taug_jet_at(double u) const override;

 private:
  template <class S>
  DarbouxFrame<S> frame_impl(const S& u) const {
    const FrenetFrame<S> f = frenet_frame(*curve_, u);
    const S c = S(std::cos(theta_)), s = S(std::sin(theta_));
    DarbouxFrame<S> out;
    out.gamma = f.gamma;
    out.T = f.T;
    out.Y = f.N1 * c - f.N2 * s;
    out.U = f.N1 * s + f.N2 * c;
    out.kg = f.kappa * c;
    out.kn = f.kappa * s;
    return out;
  }

  std::shared_ptr<const CurveModel> curve_;
  double theta_;
};

// Pointwise conversion of Frenet data at one parameter value, packaging the
// textbook relation verbatim: Y = cos(theta) N1 + sin(theta) N2,
// U = -sin(theta) N1 + cos(theta) N2, kg = kappa cos(theta),
// kn = kappa sin(theta), taug = tau - theta'.  theta is treated as locally
// linear (second and higher derivatives zero) when filling the jets.
DarbouxApparatus frenet_to_darboux(const FrenetApparatus& f, double theta, double theta_prime);

// residuals of the three frame equations, by jets and by central differences
FrameOdeResiduals darboux_ode_residual_jet(const DarbouxSource& src, double u);
FrameOdeResiduals darboux_ode_residual_fd(const DarbouxSource& src, double u, double h);

// worst violations over sampled parameters; DirectDarbouxFrame construction
// turns any violation into FrameInconsistent
struct FrameValidationReport {
  double max_unit_norm = 0.0;   // | |T|-1 |, same for Y, U
  double max_orthogonality = 0.0;
  double max_handedness = 0.0;  // |det[T Y U] - 1|
  double max_tangent_gap = 0.0; // |T - gamma'|
  double max_ode_residual = 0.0;
  double worst_u = 0.0;
  std::string worst_part;
  bool ok = false;
};

FrameValidationReport validate_darboux_source(const DarbouxSource& src, int samples,
                                              const Tolerances& tol);

}  // namespace tubefocal
