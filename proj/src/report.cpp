#include "tubefocal/report.hpp"

#include <ctime>
#include <fstream>

#include "tubefocal/errors.hpp"

namespace tubefocal {

std::string tool_version() { return "tubefocal 1.0.0"; }

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[16];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 0xf];
    h >>= 4;
  }
  return std::string(buf, 16);
}

std::string current_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  const size_t len = std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf, len);
}

nlohmann::ordered_json build_report(const JobConfig& job, const TheoremReport& rep,
                                    const std::string& timestamp) {
  using json = nlohmann::ordered_json;
  json j;
  j["tool"] = tool_version();
  j["timestamp"] = timestamp;

  json config;
  config["hash"] = "fnv1a:" + hash_hex(fnv1a64(job.raw_text));
  config["name"] = job.name;
  config["mode"] = rep.mode == FrameMode::Frenet ? "frenet" : "darboux";
  config["r"] = job.spec.r;
  j["config"] = config;

  json grid;
  grid["u_min"] = rep.grid.u_min;
  grid["u_max"] = rep.grid.u_max;
  grid["n_u"] = rep.grid.n_u;
  grid["v_min"] = rep.grid.v_min;
  grid["v_max"] = rep.grid.v_max;
  grid["n_v"] = rep.grid.n_v;
  j["grid"] = grid;

  j["threads"] = rep.threads_used;

  json tols;
  for (const auto& [name, value] : list_tolerances(job.tol)) tols[name] = value;
  j["tolerances"] = tols;

  json counts;
  counts["tube_points"] = rep.tube_points;
  counts["tube_regular"] = rep.tube_regular;
  counts["tube_singular"] = rep.tube_singular;
  counts["focal_points"] = rep.focal_points;
  counts["focal_regular"] = rep.focal_regular;
  counts["focal_pole_v"] = rep.focal_pole_v;
  counts["focal_pole_b"] = rep.focal_pole_b;
  counts["focal_degenerate"] = rep.focal_degenerate;
  counts["mask_mismatch"] = rep.mask_mismatch;
  j["counts"] = counts;

  json m;
  m["tube_max_ratio"] = rep.tube_max_ratio;
  m["tube_max_rel_dev"] = rep.tube_max_rel_dev;
  m["focal_max_ratio"] = rep.focal_max_ratio;
  m["focal_max_rel_dev"] = rep.focal_max_rel_dev;
  m["max_focal_K_jet"] = rep.max_focal_K_jet;
  m["max_focal_K_fd"] = rep.max_focal_K_fd;
  m["min_focal_H"] = rep.min_focal_H;
  m["min_u_asymptotic"] = rep.min_u_asymptotic;
  m["max_v_asymptotic"] = rep.max_v_asymptotic;
  m["min_u_geodesic"] = rep.min_u_geodesic;
  m["max_u_geodesic"] = rep.max_u_geodesic;
  m["min_v_geodesic"] = rep.min_v_geodesic;
  m["max_v_geodesic"] = rep.max_v_geodesic;
  m["max_spine_recovery"] = rep.max_spine_recovery;
  m["max_focal_offset"] = rep.max_focal_offset;
  m["max_principal_dev"] = rep.max_principal_dev;
  m["max_frame_ode"] = rep.max_frame_ode;
  m["tube_min_normal_dot"] = rep.tube_min_normal_dot;
  m["focal_min_normal_dot"] = rep.focal_min_normal_dot;
  m["tube_sign"] = rep.tube_sign;
  m["focal_sign"] = rep.focal_sign;
  j["measurements"] = m;

  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["observed"] = c.observed;
    e["bound"] = c.bound;
    e["pass"] = c.pass;
    e["skipped"] = c.skipped;
    e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["pass"] = rep.pass;
  return j;
}

void write_report(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << doc.dump(2) << "\n";
  out.flush();
  if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace tubefocal
