#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "embedded_configs.hpp"
#include "tubefocal/config.hpp"
#include "tubefocal/darboux.hpp"
#include "tubefocal/errors.hpp"
#include "tubefocal/expression.hpp"
#include "tubefocal/frenet.hpp"
#include "tubefocal/mesh.hpp"
#include "tubefocal/report.hpp"
#include "tubefocal/spine.hpp"
#include "tubefocal/verify.hpp"

namespace fs = std::filesystem;
using namespace tubefocal;

namespace {

ToleranceOverrides parse_overrides(const std::vector<std::string>& raw) {
  ToleranceOverrides out;
  for (const auto& kv : raw) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error("--tol-override expects name=value, got '" + kv + "'");
    const ExprTree tree = parse_expr(kv.substr(eq + 1), SymbolTable::constants_only());
    out.emplace_back(kv.substr(0, eq), eval_value(tree, 0.0));
  }
  return out;
}

fs::path mesh_path(const fs::path& out_dir, const std::string& rel, const std::string& format) {
  fs::path p = out_dir / rel;
  p.replace_extension(format);
  return p;
}

void build_job(const JobConfig& job, const fs::path& out_dir, const std::string& format) {
  fs::create_directories(out_dir);

  const auto announce = [](const fs::path& p, const GridMesh& mesh) {
    std::cout << "wrote " << p.string() << " (" << mesh.vertices.size() << " vertices, "
              << mesh.quads.size() << " quads)\n";
  };
  const auto export_mesh = [&](const GridMesh& mesh, const fs::path& p) {
    if (format == "ply") {
      export_ply(mesh, p.string());
    } else {
      export_obj(mesh, p.string());
    }
    announce(p, mesh);
  };

  if (!job.outputs.tube_mesh.empty()) {
    const GridMesh tube = sample_surface(job.spec, job.grid, SurfaceKind::Tube, job.tol);
    export_mesh(tube, mesh_path(out_dir, job.outputs.tube_mesh, format));
  }
  if (!job.outputs.focal_mesh.empty() || !job.outputs.fields_csv.empty()) {
    const GridMesh focal = sample_surface(job.spec, job.grid, SurfaceKind::Focal, job.tol);
    if (!job.outputs.focal_mesh.empty())
      export_mesh(focal, mesh_path(out_dir, job.outputs.focal_mesh, format));
    if (!job.outputs.fields_csv.empty()) {
      const fs::path p = out_dir / job.outputs.fields_csv;
      export_csv(focal, p.string());
      std::cout << "wrote " << p.string() << " (" << size_t(focal.n_u) * size_t(focal.n_v)
                << " rows)\n";
    }
  }
}

int verify_job(const JobConfig& job, const fs::path& out_dir, int threads) {
  VerifyOptions opt;
  opt.tol = job.tol;
  opt.perturb_closed_l = job.perturb_closed_l;
  opt.threads = threads;
  const TheoremReport rep = verify_theorems(job.spec, job.grid, opt);

  for (const auto& c : rep.checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (c.skipped) {
      std::cout << "  (skipped: " << c.note << ")";
    } else {
      std::cout << "  observed " << c.observed << "  bound " << c.bound;
      if (!c.note.empty()) std::cout << "  (" << c.note << ")";
    }
    std::cout << "\n";
  }
  std::cout << (rep.pass ? "PASS" : "FAIL") << "  " << job.name << " overall\n";

  if (!job.outputs.report_json.empty()) {
    fs::create_directories(out_dir);
    const fs::path p = out_dir / job.outputs.report_json;
    write_report(build_report(job, rep, current_timestamp_utc()), p.string());
    std::cout << "wrote " << p.string() << "\n";
  }
  return rep.pass ? 0 : 1;
}

void print_csv_row(std::initializer_list<double> cells) {
  bool first = true;
  std::cout.precision(17);
  for (const double c : cells) {
    if (!first) std::cout << ",";
    std::cout << c;
    first = false;
  }
  std::cout << "\n";
}

void curve_info(const JobConfig& job, int n) {
  if (job.spec.mode == FrameMode::Frenet) {
    std::cout << "u,x,y,z,T_x,T_y,T_z,N1_x,N1_y,N1_z,N2_x,N2_y,N2_z,kappa,tau\n";
    const CurveModel& spine = *job.spec.spine;
    for (int i = 0; i < n; ++i) {
      const double u =
          spine.u_min() + (spine.u_max() - spine.u_min()) * double(i) / double(n - 1);
      const FrenetApparatus a = frenet_at(spine, u, job.tol);
      print_csv_row({u, a.gamma[0], a.gamma[1], a.gamma[2], a.T[0], a.T[1], a.T[2], a.N1[0],
                     a.N1[1], a.N1[2], a.N2[0], a.N2[1], a.N2[2], a.kappa, a.tau});
    }
    return;
  }
  std::cout << "u,x,y,z,T_x,T_y,T_z,Y_x,Y_y,Y_z,U_x,U_y,U_z,kg,kn,taug\n";
  const DarbouxSource& src = *job.spec.source;
  for (int i = 0; i < n; ++i) {
    const double u = src.u_min() + (src.u_max() - src.u_min()) * double(i) / double(n - 1);
    const DarbouxApparatus a = src.apparatus(u);
    print_csv_row({u, a.gamma[0], a.gamma[1], a.gamma[2], a.T[0], a.T[1], a.T[2], a.Y[0], a.Y[1],
                   a.Y[2], a.U[0], a.U[1], a.U[2], a.kg, a.kn, a.taug});
  }
}

void spine_from_kappa_csv(const std::string& kappa, double u0, double u_min, double u_max, int n,
                          int checkpoints) {
  const ExprTree tree = parse_expr(kappa, SymbolTable::curve());
  const auto spine = spine_from_curvature(tree, u0, u_min, u_max, checkpoints);
  std::cout << "u,x,y,z,kappa\n";
  for (int i = 0; i < n; ++i) {
    const double u = u_min + (u_max - u_min) * double(i) / double(n - 1);
    const CurveDerivs<double> d = spine->derivs(u);
    print_csv_row({u, d.g0[0], d.g0[1], d.g0[2], d.g2.norm()});
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tubes around spine curves, their focal sheets, and verification reports"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", format = "obj";
  std::vector<std::string> tol_raw;
  int threads = 0;

  auto* build = app.add_subcommand("build", "sample tube and focal meshes from a config");
  build->add_option("-c,--config", config_path, "job config file")->required();
  build->add_option("-o,--out", out_dir, "output directory (default .)");
  build->add_option("-f,--format", format, "mesh format: obj or ply")
      ->check(CLI::IsMember({"obj", "ply"}));
  build->add_option("--tol-override,--tol", tol_raw, "tolerance override name=value (repeatable)");

  auto* verify = app.add_subcommand(
      "verify", "sweep the grid comparing closed forms against the numeric path");
  verify->add_option("-c,--config", config_path, "job config file")->required();
  verify->add_option("-o,--out", out_dir, "output directory (default .)");
  verify->add_option("--threads", threads, "worker threads (0: TUBEFOCAL_THREADS or hardware)");
  verify->add_option("--tol-override,--tol", tol_raw, "tolerance override name=value (repeatable)");

  auto* reproduce =
      app.add_subcommand("reproduce-examples", "build and verify both bundled example jobs");
  reproduce->add_option("-o,--out", out_dir, "output directory (default .)");
  reproduce->add_option("--threads", threads, "worker threads");

  int info_n = 33;
  auto* info = app.add_subcommand("curve-info", "tabulate the spine frame apparatus as CSV");
  info->add_option("-c,--config", config_path, "job config file")->required();
  info->add_option("-n,--samples", info_n, "number of samples (default 33)");

  std::string kappa_expr;
  double sk_u0 = 0.0, sk_umin = 0.0, sk_umax = 1.0;
  int sk_n = 100, sk_checkpoints = 64;
  auto* from_kappa = app.add_subcommand(
      "spine-from-kappa", "reconstruct a planar unit-speed spine from a curvature profile");
  from_kappa->add_option("--kappa", kappa_expr, "curvature expression in u")->required();
  from_kappa->add_option("--u0", sk_u0, "anchor parameter (identity frame there)")->required();
  from_kappa->add_option("--u-min", sk_umin, "range start")->required();
  from_kappa->add_option("--u-max", sk_umax, "range end")->required();
  from_kappa->add_option("-n,--samples", sk_n, "number of samples (default 100)");
  from_kappa->add_option("--checkpoints", sk_checkpoints, "integration checkpoints (default 64)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      build_job(load_config(config_path, parse_overrides(tol_raw)), out_dir, format);
      return 0;
    }
    if (verify->parsed()) {
      return verify_job(load_config(config_path, parse_overrides(tol_raw)), out_dir, threads);
    }
    if (reproduce->parsed()) {
      int failures = 0;
      for (const auto& bundled : embedded::kBundled) {
        const JobConfig job = parse_config_text(std::string(bundled.text));
        std::cout << "=== " << job.name << " ===\n";
        build_job(job, out_dir, "obj");
        failures += verify_job(job, out_dir, threads);
      }
      return failures == 0 ? 0 : 1;
    }
    if (info->parsed()) {
      if (info_n < 2) throw Error("curve-info needs at least 2 samples");
      curve_info(load_config(config_path), info_n);
      return 0;
    }
    if (from_kappa->parsed()) {
      if (sk_n < 2) throw Error("spine-from-kappa needs at least 2 samples");
      spine_from_kappa_csv(kappa_expr, sk_u0, sk_umin, sk_umax, sk_n, sk_checkpoints);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
