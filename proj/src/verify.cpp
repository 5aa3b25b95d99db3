#include "tubefocal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "tubefocal/darboux.hpp"
#include "tubefocal/errors.hpp"
#include "tubefocal/frenet.hpp"
#include "tubefocal/surface.hpp"

namespace tubefocal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RowStats {
  long tube_regular = 0, tube_singular = 0;
  long focal_regular = 0, focal_pole_v = 0, focal_pole_b = 0, focal_degenerate = 0;
  long mask_mismatch = 0;

  double tube_max_ratio = 0.0, focal_max_ratio = 0.0;
  double tube_max_rel_dev = 0.0, focal_max_rel_dev = 0.0;
  double max_focal_K_jet = 0.0, max_focal_K_fd = 0.0;
  double min_focal_H = kInf;
  double min_u_asymptotic = kInf;
  double max_v_asymptotic = 0.0;
  double min_u_geodesic = kInf, max_u_geodesic = 0.0;
  double min_v_geodesic = kInf, max_v_geodesic = 0.0;
  double max_spine_recovery = 0.0, max_focal_offset = 0.0;
  double max_principal_dev = 0.0;
  double max_frame_ode = 0.0;

  int tube_first_sign = 0, focal_first_sign = 0;
  long tube_flips = 0, focal_flips = 0;
  double tube_min_dot = kInf, focal_min_dot = kInf;
};

// one closed-vs-numeric pair: returns the tolerance ratio and tracks the
// relative deviation alongside
void compare(double closed, double numeric, const Tolerances& tol, double& max_ratio,
             double& max_rel) {
  const double mag = std::max(std::abs(closed), std::abs(numeric));
  const double allowed =
      std::max(tol.closed_vs_numeric_rel * mag, tol.closed_vs_numeric_abs);
  const double diff = std::abs(closed - numeric);
  max_ratio = std::max(max_ratio, diff / allowed);
  const double scale = std::max(mag, tol.closed_vs_numeric_abs / tol.closed_vs_numeric_rel);
  max_rel = std::max(max_rel, diff / scale);
}

void track_sign(double dot, int& first_sign, long& flips, double& min_dot) {
  min_dot = std::min(min_dot, std::abs(dot));
  const int s = dot >= 0.0 ? 1 : -1;
  if (first_sign == 0)
    first_sign = s;
  else if (s != first_sign)
    ++flips;
}

struct Maps {
  std::optional<FrenetTubeMap> f_tube;
  std::optional<FrenetFocalMap> f_focal;
  std::optional<DarbouxTubeMap> d_tube;
  std::optional<DarbouxFocalMap> d_focal;
};

SurfaceJet tube_jet_numeric(const Maps& m, double u, double v) {
  return m.f_tube ? surface_jet(*m.f_tube, u, v) : surface_jet(*m.d_tube, u, v);
}
SurfaceJet focal_jet_numeric(const Maps& m, double u, double v) {
  return m.f_focal ? surface_jet(*m.f_focal, u, v) : surface_jet(*m.d_focal, u, v);
}
SurfaceJet focal_jet_fd(const Maps& m, double u, double v, double h) {
  return m.f_focal ? fd_surface_jet(*m.f_focal, u, v, h) : fd_surface_jet(*m.d_focal, u, v, h);
}

RowStats run_row(const TubeSpec& spec, const GridSpec& grid, const VerifyOptions& opt,
                 const Maps& maps, int i) {
  RowStats rs;
  const Tolerances& tol = opt.tol;
  const double u = grid.u_min + (grid.u_max - grid.u_min) * double(i) / double(grid.n_u - 1);
  const bool frenet = spec.mode == FrameMode::Frenet;

  rs.max_frame_ode = frenet ? frenet_ode_residual_jet(*spec.spine, u, tol).max()
                            : darboux_ode_residual_jet(*spec.source, u).max();

  std::optional<FrenetApparatus> fa;
  std::optional<DarbouxApparatus> da;
  if (frenet)
    fa = frenet_at(*spec.spine, u, tol);
  else
    da = spec.source->apparatus(u);
  const Eigen::Vector3d gamma = frenet ? fa->gamma : da->gamma;

  for (int j = 0; j < grid.n_v; ++j) {
    const double v =
        grid.v_min + (grid.v_max - grid.v_min) * double(j) / double(grid.n_v - 1);

    // ---- tube ----------------------------------------------------------
    std::optional<TubeForms> tf;
    try {
      tf = frenet ? tube_forms_frenet(*fa, spec.r, v, tol)
                  : tube_forms_darboux(*da, spec.r, v, tol);
    } catch (const SingularPoint&) {
      ++rs.tube_singular;
    }

    std::optional<SurfaceJet> tube_jet;
    std::optional<FundamentalForms> nf;
    if (tf) {
      tube_jet = tube_jet_numeric(maps, u, v);
      try {
        nf = fundamental_forms(*tube_jet);
      } catch (const DegenerateHost&) {
        ++rs.mask_mismatch;  // closed form regular, numeric degenerate
      }
    }

    if (tf && nf) {
      ++rs.tube_regular;
      track_sign(nf->N.dot(tf->forms.N), rs.tube_first_sign, rs.tube_flips,
                 rs.tube_min_dot);
      const double s = rs.tube_first_sign;
      compare(tf->forms.E, nf->E, tol, rs.tube_max_ratio, rs.tube_max_rel_dev);
      compare(tf->forms.F, nf->F, tol, rs.tube_max_ratio, rs.tube_max_rel_dev);
      compare(tf->forms.G, nf->G, tol, rs.tube_max_ratio, rs.tube_max_rel_dev);
      compare(tf->forms.l + opt.perturb_closed_l, s * nf->l, tol, rs.tube_max_ratio,
              rs.tube_max_rel_dev);
      compare(tf->forms.m, s * nf->m, tol, rs.tube_max_ratio, rs.tube_max_rel_dev);
      compare(tf->forms.n, s * nf->n, tol, rs.tube_max_ratio, rs.tube_max_rel_dev);
      const CurvatureSummary nc = curvatures(*nf);
      compare(tf->curvature.K, nc.K, tol, rs.tube_max_ratio, rs.tube_max_rel_dev);
      compare(tf->curvature.H, s * nc.H, tol, rs.tube_max_ratio, rs.tube_max_rel_dev);

      // principal split: sorted closed pair against the sorted numeric pair
      const double c_hi = std::max(tf->curvature.kappa1, tf->curvature.kappa2);
      const double c_lo = std::min(tf->curvature.kappa1, tf->curvature.kappa2);
      const double n_hi = std::max(s * nc.kappa1, s * nc.kappa2);
      const double n_lo = std::min(s * nc.kappa1, s * nc.kappa2);
      rs.max_principal_dev = std::max(
          {rs.max_principal_dev, std::abs(c_hi - n_hi), std::abs(c_lo - n_lo),
           std::abs(tf->curvature.kappa1 - 1.0 / spec.r)});

      rs.max_spine_recovery = std::max(
          rs.max_spine_recovery, (tube_jet->X + spec.r * tf->forms.N - gamma).norm());
    }

    // ---- focal sheet -----------------------------------------------------
    std::optional<FocalForms> ff;
    try {
      ff = frenet ? focal_forms_frenet(*fa, v, tol) : focal_forms_darboux(*da, v, tol);
    } catch (const FocalPoleV&) {
      ++rs.focal_pole_v;
    } catch (const FocalPoleB&) {
      ++rs.focal_pole_b;
    } catch (const FocalDegenerate&) {
      ++rs.focal_degenerate;
    } catch (const VanishingCurvature&) {
      ++rs.focal_degenerate;
    }
    if (!ff) continue;

    const SurfaceJet fj = focal_jet_numeric(maps, u, v);
    std::optional<FundamentalForms> nff;
    try {
      nff = fundamental_forms(fj);
    } catch (const DegenerateHost&) {
      ++rs.mask_mismatch;
      continue;
    }
    ++rs.focal_regular;

    track_sign(nff->N.dot(ff->forms.N), rs.focal_first_sign, rs.focal_flips,
               rs.focal_min_dot);
    const double s = rs.focal_first_sign;
    compare(ff->forms.E, nff->E, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);
    compare(ff->forms.F, nff->F, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);
    compare(ff->forms.G, nff->G, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);
    compare(ff->forms.l, s * nff->l, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);
    compare(ff->forms.m, s * nff->m, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);
    compare(ff->forms.n, s * nff->n, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);
    const CurvatureSummary nfc = curvatures(*nff);
    compare(ff->curvature.K, nfc.K, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);
    compare(ff->mean, s * nfc.H, tol, rs.focal_max_ratio, rs.focal_max_rel_dev);

    rs.max_focal_K_jet = std::max(rs.max_focal_K_jet, std::abs(nfc.K));
    const FundamentalForms fd_forms =
        fundamental_forms(focal_jet_fd(maps, u, v, tol.surface_fd_h));
    rs.max_focal_K_fd = std::max(rs.max_focal_K_fd, std::abs(curvatures(fd_forms).K));

    rs.min_focal_H = std::min(rs.min_focal_H, std::abs(ff->mean));
    rs.min_u_asymptotic = std::min(rs.min_u_asymptotic, std::abs(nff->l));
    rs.max_v_asymptotic = std::max(rs.max_v_asymptotic, std::abs(nff->n));

    const ClassificationReport cls =
        frenet ? classify_focal_curves(*fa, v, tol) : classify_focal_curves(*da, v, tol);
    rs.min_u_geodesic = std::min(rs.min_u_geodesic, cls.u_geodesic);
    rs.max_u_geodesic = std::max(rs.max_u_geodesic, cls.u_geodesic);
    rs.min_v_geodesic = std::min(rs.min_v_geodesic, cls.v_geodesic);
    rs.max_v_geodesic = std::max(rs.max_v_geodesic, cls.v_geodesic);

    if (tf && nf) {
      rs.max_focal_offset = std::max(
          rs.max_focal_offset,
          (fj.X - (tube_jet->X + tf->forms.N / tf->curvature.kappa2)).norm());
    }
  }
  return rs;
}

int resolve_threads(int requested, int rows) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("TUBEFOCAL_THREADS")) t = std::atoi(env);
  }
  if (t <= 0) t = int(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return std::clamp(t, 1, std::max(1, rows));
}

}  // namespace

const CheckResult* TheoremReport::find(const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

TheoremReport verify_theorems(const TubeSpec& spec, const GridSpec& grid,
                              const VerifyOptions& opt) {
  if (grid.n_u < 2 || grid.n_v < 2)
    throw DomainError("verification grid needs at least 2 samples per direction");
  if (!(grid.u_min < grid.u_max) || !(grid.v_min < grid.v_max))
    throw DomainError("verification grid range is empty");
  validate_tube_spec(spec, 64, opt.tol);

  Maps maps;
  if (spec.mode == FrameMode::Frenet) {
    maps.f_tube.emplace(spec.spine, spec.r);
    maps.f_focal.emplace(spec.spine);
  } else {
    maps.d_tube.emplace(spec.source, spec.r);
    maps.d_focal.emplace(spec.source);
  }

  const int threads = resolve_threads(opt.threads, grid.n_u);
  std::vector<RowStats> rows(size_t(grid.n_u));
  std::vector<std::exception_ptr> errors;
  errors.resize(size_t(threads));
  const auto work = [&](int t) {
    try {
      for (int i = t; i < grid.n_u; i += threads)
        rows[size_t(i)] = run_row(spec, grid, opt, maps, i);
    } catch (...) {
      errors[size_t(t)] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);

  TheoremReport rep;
  rep.mode = spec.mode;
  rep.grid = grid;
  rep.threads_used = threads;
  rep.min_focal_H = kInf;
  rep.min_u_asymptotic = kInf;
  rep.min_u_geodesic = kInf;
  rep.min_v_geodesic = kInf;
  rep.tube_min_normal_dot = kInf;
  rep.focal_min_normal_dot = kInf;
  rep.tube_points = long(grid.n_u) * grid.n_v;
  rep.focal_points = long(grid.n_u) * grid.n_v;

  long tube_flips = 0, focal_flips = 0;
  for (const RowStats& rs : rows) {
    rep.tube_regular += rs.tube_regular;
    rep.tube_singular += rs.tube_singular;
    rep.focal_regular += rs.focal_regular;
    rep.focal_pole_v += rs.focal_pole_v;
    rep.focal_pole_b += rs.focal_pole_b;
    rep.focal_degenerate += rs.focal_degenerate;
    rep.mask_mismatch += rs.mask_mismatch;

    rep.tube_max_ratio = std::max(rep.tube_max_ratio, rs.tube_max_ratio);
    rep.focal_max_ratio = std::max(rep.focal_max_ratio, rs.focal_max_ratio);
    rep.tube_max_rel_dev = std::max(rep.tube_max_rel_dev, rs.tube_max_rel_dev);
    rep.focal_max_rel_dev = std::max(rep.focal_max_rel_dev, rs.focal_max_rel_dev);
    rep.max_focal_K_jet = std::max(rep.max_focal_K_jet, rs.max_focal_K_jet);
    rep.max_focal_K_fd = std::max(rep.max_focal_K_fd, rs.max_focal_K_fd);
    rep.min_focal_H = std::min(rep.min_focal_H, rs.min_focal_H);
    rep.min_u_asymptotic = std::min(rep.min_u_asymptotic, rs.min_u_asymptotic);
    rep.max_v_asymptotic = std::max(rep.max_v_asymptotic, rs.max_v_asymptotic);
    rep.min_u_geodesic = std::min(rep.min_u_geodesic, rs.min_u_geodesic);
    rep.max_u_geodesic = std::max(rep.max_u_geodesic, rs.max_u_geodesic);
    rep.min_v_geodesic = std::min(rep.min_v_geodesic, rs.min_v_geodesic);
    rep.max_v_geodesic = std::max(rep.max_v_geodesic, rs.max_v_geodesic);
    rep.max_spine_recovery = std::max(rep.max_spine_recovery, rs.max_spine_recovery);
    rep.max_focal_offset = std::max(rep.max_focal_offset, rs.max_focal_offset);
    rep.max_principal_dev = std::max(rep.max_principal_dev, rs.max_principal_dev);
    rep.max_frame_ode = std::max(rep.max_frame_ode, rs.max_frame_ode);
    rep.tube_min_normal_dot = std::min(rep.tube_min_normal_dot, rs.tube_min_dot);
    rep.focal_min_normal_dot = std::min(rep.focal_min_normal_dot, rs.focal_min_dot);

    tube_flips += rs.tube_flips;
    if (rs.tube_first_sign != 0) {
      if (rep.tube_sign == 0)
        rep.tube_sign = rs.tube_first_sign;
      else if (rs.tube_first_sign != rep.tube_sign)
        ++tube_flips;
    }
    focal_flips += rs.focal_flips;
    if (rs.focal_first_sign != 0) {
      if (rep.focal_sign == 0)
        rep.focal_sign = rs.focal_first_sign;
      else if (rs.focal_first_sign != rep.focal_sign)
        ++focal_flips;
    }
  }

  for (double* m : {&rep.min_focal_H, &rep.min_u_asymptotic, &rep.min_u_geodesic,
                    &rep.min_v_geodesic, &rep.tube_min_normal_dot,
                    &rep.focal_min_normal_dot})
    if (!std::isfinite(*m)) *m = 0.0;

  const Tolerances& tol = opt.tol;
  const bool focal_all_degenerate = rep.focal_regular == 0 && rep.focal_degenerate > 0 &&
                                    rep.focal_pole_v == 0 && rep.focal_pole_b == 0 &&
                                    rep.mask_mismatch == 0;

  const auto add = [&](const std::string& name, double observed, double bound,
                       bool pass_value, const std::string& note = "") {
    CheckResult c;
    c.name = name;
    c.observed = observed;
    c.bound = bound;
    c.pass = pass_value;
    c.note = note;
    rep.checks.push_back(std::move(c));
  };
  const auto add_focal = [&](const std::string& name, double observed, double bound,
                             bool pass_value, const std::string& note = "") {
    CheckResult c;
    c.name = name;
    c.observed = observed;
    c.bound = bound;
    if (focal_all_degenerate) {
      c.pass = true;
      c.skipped = true;
      c.note = "degenerate - skipped";
    } else {
      c.pass = pass_value;
      c.note = note;
    }
    rep.checks.push_back(std::move(c));
  };

  add("tube.regular_set", double(rep.tube_regular), 1.0, rep.tube_regular > 0,
      "regular tube samples on the grid");
  add("tube.closed_vs_numeric", rep.tube_max_ratio, 1.0,
      rep.tube_regular > 0 && rep.tube_max_ratio <= 1.0,
      "worst tolerance ratio over E,F,G,l,m,n,K,H");
  add("tube.orientation", rep.tube_min_normal_dot, 0.999,
      rep.tube_regular > 0 && tube_flips == 0 && rep.tube_min_normal_dot >= 0.999,
      rep.tube_sign >= 0 ? "sign +1" : "sign -1");
  add("tube.principal_split", rep.max_principal_dev, tol.principal_split,
      rep.tube_regular > 0 && rep.max_principal_dev <= tol.principal_split,
      "sorted pair vs numeric, and kappa1 vs 1/r");
  add("tube.spine_recovery", rep.max_spine_recovery, tol.spine_recovery,
      rep.tube_regular > 0 && rep.max_spine_recovery <= tol.spine_recovery,
      "X + r N back to the spine");
  add("mask.consistency", double(rep.mask_mismatch), 0.0, rep.mask_mismatch == 0,
      "closed-form and numeric regularity agree");

  add_focal("focal.regular_set", double(rep.focal_regular), 1.0, rep.focal_regular > 0,
            "regular focal samples on the grid");
  add_focal("focal.closed_vs_numeric", rep.focal_max_ratio, 1.0,
            rep.focal_regular > 0 && rep.focal_max_ratio <= 1.0,
            "worst tolerance ratio over E,F,G,l,m,n,K,H");
  add_focal("focal.orientation", rep.focal_min_normal_dot, 0.999,
            rep.focal_regular > 0 && focal_flips == 0 &&
                rep.focal_min_normal_dot >= 0.999,
            rep.focal_sign >= 0 ? "sign +1" : "sign -1");
  add_focal("focal.flatness_jet", rep.max_focal_K_jet, tol.flatness_jet,
            rep.focal_regular > 0 && rep.max_focal_K_jet <= tol.flatness_jet,
            "max |K| of the focal sheet, nested-jet path");
  add_focal("focal.flatness_fd", rep.max_focal_K_fd, tol.flatness_fd,
            rep.focal_regular > 0 && rep.max_focal_K_fd <= tol.flatness_fd,
            "max |K| of the focal sheet, difference path");
  add_focal("focal.nonminimal", rep.min_focal_H, 0.0,
            rep.focal_regular > 0 && rep.min_focal_H > 0.0,
            "infimum of |H| over the regular set");
  add_focal("focal.never_asymptotic_u", rep.min_u_asymptotic, tol.asymptotic_min,
            rep.focal_regular > 0 && rep.min_u_asymptotic > tol.asymptotic_min,
            "u-curves keep a nonzero normal component");
  add_focal("focal.asymptotic_v", rep.max_v_asymptotic, tol.flatness_jet,
            rep.focal_regular > 0 && rep.max_v_asymptotic <= tol.flatness_jet,
            "v-curves have vanishing normal component");
  add_focal("focal.offset_identity", rep.max_focal_offset, tol.spine_recovery,
            rep.focal_regular > 0 && rep.max_focal_offset <= tol.spine_recovery,
            "focal point equals tube point offset by 1/kappa2");
  add("frame.ode_residual", rep.max_frame_ode, tol.frame_ode_jet,
      rep.max_frame_ode <= tol.frame_ode_jet, "frame equations along the rows");

  rep.pass = true;
  for (const CheckResult& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace tubefocal
