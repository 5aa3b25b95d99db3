#pragma once

#include <string>
#include <vector>

#include "tubefocal/tube.hpp"

namespace tubefocal {

// inclusive uniform sampling grid in the (u, v) parameter rectangle
struct GridSpec {
  double u_min = 0.0, u_max = 1.0;
  int n_u = 2;
  double v_min = 0.0, v_max = 1.0;
  int n_v = 2;
};

// one named verdict inside a theorem report
struct CheckResult {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

// Everything the verification sweep measured, plus the verdicts.  Deviation
// ratios are |a - b| / max(rel * max(|a|, |b|), abs): a value of 1 sits
// exactly on the configured tolerance.
struct TheoremReport {
  FrameMode mode = FrameMode::Frenet;
  GridSpec grid;
  int threads_used = 1;

  // masked-point counts per singularity class
  long tube_points = 0, tube_regular = 0, tube_singular = 0;
  long focal_points = 0, focal_regular = 0;
  long focal_pole_v = 0, focal_pole_b = 0, focal_degenerate = 0;
  long mask_mismatch = 0;

  // extrema over the regular set
  double tube_max_ratio = 0.0, focal_max_ratio = 0.0;
  double tube_max_rel_dev = 0.0, focal_max_rel_dev = 0.0;
  double max_focal_K_jet = 0.0, max_focal_K_fd = 0.0;
  double min_focal_H = 0.0;       // min |H*|
  double min_u_asymptotic = 0.0;  // min |l*| (numeric)
  double max_v_asymptotic = 0.0;  // max |n*| (numeric)
  double min_u_geodesic = 0.0, max_u_geodesic = 0.0;
  double min_v_geodesic = 0.0, max_v_geodesic = 0.0;
  double max_spine_recovery = 0.0, max_focal_offset = 0.0;
  double max_principal_dev = 0.0;
  double max_frame_ode = 0.0;
  double tube_min_normal_dot = 0.0, focal_min_normal_dot = 0.0;
  int tube_sign = 0, focal_sign = 0;

  std::vector<CheckResult> checks;
  bool pass = false;

  const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
  Tolerances tol;
  // negative control: a bias added to every closed-form tube l before the
  // comparison, so a run with a nonzero value must fail
  double perturb_closed_l = 0.0;
  int threads = 0;  // 0: TUBEFOCAL_THREADS, falling back to the hardware
};

// Sweeps the grid, comparing every closed-form quantity of the tube and its
// focal sheet against the generic numeric path, and checks the structural
// facts (flat focal sheet, nowhere-minimal, v-curves asymptotic, principal
// split, spine recovery, frame equations).  Report-only: never throws for
// masked points; an empty regular set fails the corresponding check instead,
// except that a focal sheet masked as degenerate everywhere (constant
// curvature spine) marks the focal checks as skipped.
TheoremReport verify_theorems(const TubeSpec& spec, const GridSpec& grid,
                              const VerifyOptions& opt = {});

}  // namespace tubefocal
