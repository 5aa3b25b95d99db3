#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tubefocal/tolerances.hpp"
#include "tubefocal/tube.hpp"
#include "tubefocal/verify.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Job configuration files.  Plain INI: [section] headers, key = value lines,
// full-line comments starting with '#' or ';'.  Inline comments are not
// supported because values are expression text.  Scalar values may be any
// constant expression ("sqrt(2)", "pi/4"); counts must be plain integers.
//
// Sections:
//   [job]        name, mode = frenet | darboux, r
//   [spine]      x, y, z, u_min, u_max          (analytic curve)
//                kappa, u0, u_min, u_max [, checkpoints]  (curvature-driven)
//   [frame]      darboux only; source = rotated | direct | host
//                rotated: theta
//                direct:  T_x..T_z, Y_x..Y_z, U_x..U_z, kg, kn [, taug]
//   [host]       darboux/host only; x, y, z in (s, t), s, t in u,
//                u_min, u_max                   (replaces [spine])
//   [grid]       u_min, u_max, n_u, v_min, v_max, n_v
//   [tolerances] any name from list_tolerances
//   [outputs]    tube_mesh, focal_mesh, fields_csv, report_json (paths)
//   [debug]      perturb_closed_l
// ---------------------------------------------------------------------------

// artifact paths; an empty string skips the artifact
struct OutputSpec {
  std::string tube_mesh;
  std::string focal_mesh;
  std::string fields_csv;
  std::string report_json;
};

struct JobConfig {
  std::string name = "job";
  TubeSpec spec;
  GridSpec grid;
  Tolerances tol;
  OutputSpec outputs;
  double perturb_closed_l = 0.0;
  std::string raw_text;  // verbatim file content, hashed into reports
};

// Overrides are applied after the [tolerances] section and before any frame
// or spine construction, so they affect construction-time guards too.
using ToleranceOverrides = std::vector<std::pair<std::string, double>>;

JobConfig parse_config_text(const std::string& text, const ToleranceOverrides& overrides = {});
JobConfig load_config(const std::string& path, const ToleranceOverrides& overrides = {});

}  // namespace tubefocal
