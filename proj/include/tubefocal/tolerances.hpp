#pragma once

#include <string>
#include <vector>

namespace tubefocal {

// Numeric guards and comparison thresholds used across the library.  Configs
// and the command line may override any entry by its listed name.
struct Tolerances {
  double eps_kappa = 1e-8;              // vanishing-curvature guard
  double eps_b = 1e-8;                  // pole guard on b and on b_u - b_v*tau_g
  double eps_v = 1e-8;                  // pole guard on cos v
  double eps_reg = 1e-10;               // singularity guard on W^2
  double unit_speed = 1e-6;             // |gamma'|-1 bound, no reparametrization
  double planarity = 1e-9;              // |gamma_3| and |tau| bound for planar spines
  double frame_ode_jet = 1e-6;          // frame equation residual, jet derivatives
  double frame_ode_fd = 1e-4;           // frame equation residual, difference oracle
  double frame_orthonormality = 1e-8;   // unit norms, orthogonality, det - 1
  double fd_h = 1e-3;                   // curve difference-oracle step
  double surface_fd_h = 1e-4;           // surface difference-oracle step
  double quadrature = 1e-10;            // spine integration absolute tolerance
  double closed_vs_numeric_rel = 1e-6;  // closed form vs numeric path, relative
  double closed_vs_numeric_abs = 1e-8;  // absolute floor for the comparison above
  double flatness_jet = 1e-8;           // |K*| bound, jet path
  double flatness_fd = 1e-4;            // |K*| bound, difference path
  double anchor = 1e-6;                 // spot-value checks
  double geodesic_residual = 1e-6;      // |X*_uu x N*| bound on geodesic families
  double asymptotic_min = 1e-10;        // |l*| must stay above this on regular grids
  double principal_split = 1e-8;        // {kappa1, kappa2} set comparison
  double spine_recovery = 1e-9;         // |X + r N - gamma| bound
  double reduction_consistency = 1e-10; // Darboux-with-theta-0 vs Frenet
};

// named access for config/CLI overrides; throws on unknown names
void set_tolerance(Tolerances& t, const std::string& name, double value);
std::vector<std::pair<std::string, double>> list_tolerances(const Tolerances& t);

}  // namespace tubefocal
