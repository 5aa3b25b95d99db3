#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "tubefocal/config.hpp"
#include "tubefocal/darboux.hpp"
#include "tubefocal/errors.hpp"
#include "tubefocal/report.hpp"
#include "tubefocal/verify.hpp"

using namespace tubefocal;
namespace fs = std::filesystem;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kPi = 3.141592653589793;

const char* kSpiralJob = R"(# weekly regression job
[job]
name = spiral-check
mode = frenet
r = sqrt(2)

[spine]
x = (u/sqrt(2) + 1) * cos(ln(u/sqrt(2) + 1))
y = (u/sqrt(2) + 1) * sin(ln(u/sqrt(2) + 1))
z = 0
u_min = 0
u_max = 4

[grid]
u_min = 0.5
u_max = 3
n_u = 12
v_min = -1.2
v_max = 1.2
n_v = 10

[tolerances]
closed_vs_numeric_rel = 2e-6

[outputs]
tube_mesh = spiral_tube.obj
report_json = spiral_report.json

[debug]
perturb_closed_l = 0
)";

std::string helix_job(const std::string& grid, const std::string& extra = "") {
  return "[job]\nname = helix-check\nmode = darboux\nr = sqrt(2)\n"
         "[spine]\nx = cos(u/sqrt(2))\ny = sin(u/sqrt(2))\nz = u/sqrt(2)\n"
         "u_min = 0\nu_max = 8\n"
         "[frame]\nsource = rotated\ntheta = pi/4\n" +
         std::string("[grid]\n") + grid + extra;
}

const char* kSmallGrid = "u_min = 1\nu_max = 5\nn_u = 8\nv_min = -0.6\nv_max = 0.6\nn_v = 8\n";

std::string config_dir() { return TUBEFOCAL_CONFIG_DIR; }

// parse failures should point at the offending field
void expect_parse_error(const std::string& text, const std::string& field) {
  try {
    parse_config_text(text);
    FAIL_CHECK("expected ConfigParseError for field ", field);
  } catch (const ConfigParseError& e) {
    CHECK(e.field == field);
  }
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const size_t at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

// --- Named tolerance access ------------------------------------------------------

TEST_CASE("tolerances are listable and settable by name") {
  Tolerances tol;
  const auto listed = list_tolerances(tol);
  CHECK(listed.size() == 22);
  CHECK(listed.front().first == "eps_kappa");
  CHECK(listed.front().second == 1e-8);
  CHECK(listed.back().first == "reduction_consistency");

  set_tolerance(tol, "flatness_jet", 3e-7);
  CHECK(tol.flatness_jet == 3e-7);

  // every listed name routes to exactly one member, its own
  for (const auto& [name, value] : listed) {
    Tolerances fresh;
    set_tolerance(fresh, name, 0.123);
    int changed = 0;
    for (const auto& [other, after] : list_tolerances(fresh))
      if (after == 0.123) {
        ++changed;
        CHECK(other == name);
      }
    CHECK(changed == 1);
  }
}

TEST_CASE("tolerance setters reject unknown names and nonpositive values") {
  Tolerances tol;
  CHECK_THROWS_WITH_AS(set_tolerance(tol, "epsilon_kappa", 1e-6), doctest::Contains("unknown"),
                       Error);
  CHECK_THROWS_WITH_AS(set_tolerance(tol, "eps_kappa", 0.0), doctest::Contains("positive"), Error);
  CHECK_THROWS_WITH_AS(set_tolerance(tol, "eps_kappa", -1e-9), doctest::Contains("positive"),
                       Error);
}

// --- Config parsing -----------------------------------------------------------------

TEST_CASE("frenet job round-trips through the parser") {
  const JobConfig job = parse_config_text(kSpiralJob);
  CHECK(job.name == "spiral-check");
  CHECK(job.spec.mode == FrameMode::Frenet);
  CHECK(job.spec.r == std::sqrt(2.0));
  REQUIRE(job.spec.spine != nullptr);
  CHECK(job.spec.spine->u_min() == 0.0);
  CHECK(job.spec.spine->u_max() == 4.0);
  CHECK(job.grid.n_u == 12);
  CHECK(job.grid.n_v == 10);
  CHECK(job.grid.v_min == -1.2);
  CHECK(job.tol.closed_vs_numeric_rel == 2e-6);
  CHECK(job.tol.eps_kappa == 1e-8);  // untouched default
  CHECK(job.outputs.tube_mesh == "spiral_tube.obj");
  CHECK(job.outputs.focal_mesh.empty());
  CHECK(job.outputs.report_json == "spiral_report.json");
  CHECK(job.perturb_closed_l == 0.0);
  CHECK(job.raw_text == kSpiralJob);
}

TEST_CASE("rotated darboux job builds the expected frame") {
  const JobConfig job = parse_config_text(helix_job(kSmallGrid));
  CHECK(job.spec.mode == FrameMode::Darboux);
  REQUIRE(job.spec.source != nullptr);
  const DarbouxApparatus a = job.spec.source->apparatus(1.0);
  CHECK(a.kg == doctest::Approx(1.0 / (2.0 * kSqrt2)).epsilon(1e-12));
  CHECK(a.kn == doctest::Approx(1.0 / (2.0 * kSqrt2)).epsilon(1e-12));
  CHECK(a.taug == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("direct-frame job validates and builds") {
  // straight line with a constant frame: a right circular cylinder tube
  const std::string text =
      "[job]\nname = line\nmode = darboux\nr = 0.75\n"
      "[spine]\nx = u\ny = 0\nz = 0\nu_min = 0\nu_max = 2\n"
      "[frame]\nsource = direct\n"
      "T_x = 1\nT_y = 0\nT_z = 0\n"
      "Y_x = 0\nY_y = 1\nY_z = 0\n"
      "U_x = 0\nU_y = 0\nU_z = 1\n"
      "kg = 0\nkn = 0\ntaug = 0\n"
      "[grid]\nu_min = 0\nu_max = 2\nn_u = 4\nv_min = 0\nv_max = 1\nn_v = 4\n";
  const JobConfig job = parse_config_text(text);
  REQUIRE(job.spec.source != nullptr);
  const TubeForms tf = tube_forms_darboux(*job.spec.source, job.spec.r, 1.0, 0.5);
  CHECK(tf.curvature.K == doctest::Approx(0.0));
  CHECK(tf.curvature.H == doctest::Approx(1.0 / 1.5).epsilon(1e-12));

  // an inconsistent frame is rejected at construction, not at first use
  const std::string broken = replace_once(text, "kg = 0", "kg = 1/10");
  CHECK_THROWS_AS(parse_config_text(broken), FrameInconsistent);
}

TEST_CASE("host-curve job builds and verifies end to end") {
  // unit-speed helix on the unit cylinder x = cos s, y = sin s, z = t
  const std::string text =
      "[job]\nname = on-cylinder\nmode = darboux\nr = sqrt(2)\n"
      "[frame]\nsource = host\n"
      "[host]\nx = cos(s)\ny = sin(s)\nz = t\n"
      "s = u/sqrt(2)\nt = u/sqrt(2)\nu_min = 0\nu_max = 8\n"
      "[grid]\nu_min = 1\nu_max = 6\nn_u = 8\nv_min = 0.3\nv_max = 1.2\nn_v = 8\n";
  const JobConfig job = parse_config_text(text);
  REQUIRE(job.spec.source != nullptr);

  VerifyOptions opt;
  opt.tol = job.tol;
  const TheoremReport rep = verify_theorems(job.spec, job.grid, opt);
  CHECK(rep.pass);
  CHECK(rep.tube_regular == 64);
  CHECK(rep.focal_regular == 64);
}

TEST_CASE("parse failures name the offending field") {
  const std::string base = helix_job(kSmallGrid);

  expect_parse_error(replace_once(base, "n_u = 8", "n_u = 1"), "grid.n_u");
  expect_parse_error(replace_once(base, "n_v = 8", "n_v = -3"), "grid.n_v");
  expect_parse_error(replace_once(base, "n_u = 8", "n_u = 8.5"), "grid.n_u");
  expect_parse_error(replace_once(base, "u_max = 5", "u_max = 0.5"), "grid.u_max");
  expect_parse_error(replace_once(base, "mode = darboux", "mode = euler"), "job.mode");
  expect_parse_error(replace_once(base, "r = sqrt(2)", "r = 0"), "job.r");
  expect_parse_error(replace_once(base, "r = sqrt(2)", "r = u + 1"), "job.r");
  expect_parse_error(replace_once(base, "r = sqrt(2)", "r = sqrt(2"), "job.r");
  expect_parse_error(replace_once(base, "theta = pi/4", "theta = pi/4\nwobble = 2"),
                     "frame.wobble");
  expect_parse_error(replace_once(base, "source = rotated", "source = parallel"), "frame.source");
  expect_parse_error(replace_once(base, "[frame]", "[fame]"), "fame");
  expect_parse_error(base + "[extra]\nk = 1\n", "extra");
  expect_parse_error(base + "[job]\nname = again\n", "job");
  expect_parse_error(replace_once(base, "n_v = 8", "n_v = 8\nn_v = 9"), "grid.n_v");
  expect_parse_error(replace_once(base, "x = cos(u/sqrt(2))", "x = cos(w)"), "spine.x");
  expect_parse_error(replace_once(base, "y = sin(u/sqrt(2))\n", ""), "spine.y");

  // grid range must stay inside the spine range
  expect_parse_error(replace_once(base, "u_max = 5\nn_u", "u_max = 9\nn_u"), "grid.u_min");

  // frenet jobs reject frame sections outright
  expect_parse_error(replace_once(base, "mode = darboux", "mode = frenet"), "frame");

  // structural junk
  expect_parse_error("x = 1\n", "line 1");
  expect_parse_error("[job\nmode = frenet\n", "line 1");
  expect_parse_error("[job]\njust some words\n", "line 2");

  // a curvature-driven spine cannot also give components
  expect_parse_error(replace_once(base, "x = cos(u/sqrt(2))", "kappa = 1/2\nu0 = 1\nx = 1"),
                     "spine.kappa");
}

TEST_CASE("curvature-driven spine section reconstructs the curve") {
  const std::string text =
      "[job]\nname = rebuilt\nmode = frenet\nr = sqrt(2)\n"
      "[spine]\nkappa = 1/(u + sqrt2)\nu0 = 1\nu_min = 0.5\nu_max = 3\ncheckpoints = 32\n"
      "[grid]\nu_min = 0.5\nu_max = 3\nn_u = 8\nv_min = -1.2\nv_max = 1.2\nn_v = 8\n";
  const JobConfig job = parse_config_text(text);
  REQUIRE(job.spec.spine != nullptr);

  VerifyOptions opt;
  opt.tol = job.tol;
  const TheoremReport rep = verify_theorems(job.spec, job.grid, opt);
  CHECK(rep.pass);
  // the reciprocal-linear curvature family makes every u-curve a geodesic
  CHECK(rep.max_u_geodesic <= 1e-6);
}

TEST_CASE("overrides land after the tolerances section") {
  const std::string text = helix_job(kSmallGrid, "[tolerances]\neps_b = 1e-6\nanchor = 1e-5\n");
  const JobConfig plain = parse_config_text(text);
  CHECK(plain.tol.eps_b == 1e-6);
  CHECK(plain.tol.anchor == 1e-5);

  const JobConfig overridden = parse_config_text(text, {{"eps_b", 1e-4}});
  CHECK(overridden.tol.eps_b == 1e-4);
  CHECK(overridden.tol.anchor == 1e-5);

  CHECK_THROWS_AS(parse_config_text(text, {{"nope", 1.0}}), Error);
}

TEST_CASE("load_config reads the bundled example files") {
  const JobConfig ex1 = load_config(config_dir() + "/example1.cfg");
  CHECK(ex1.name == "example-1");
  CHECK(ex1.spec.mode == FrameMode::Frenet);
  CHECK(ex1.spec.r == std::sqrt(2.0));
  CHECK(ex1.grid.n_u == 100);
  CHECK(ex1.outputs.report_json == "example1_report.json");

  const JobConfig ex2 = load_config(config_dir() + "/example2.cfg");
  CHECK(ex2.name == "example-2");
  CHECK(ex2.spec.mode == FrameMode::Darboux);
  CHECK(ex2.grid.v_max == 0.68);

  CHECK_THROWS_AS(load_config(config_dir() + "/does_not_exist.cfg"), IoError);
}

// --- Verification sweeps ---------------------------------------------------------------

TEST_CASE("bundled examples verify clean on reduced grids") {
  for (const char* rel : {"/example1.cfg", "/example2.cfg"}) {
    JobConfig job = load_config(config_dir() + rel);
    job.grid.n_u = 16;
    job.grid.n_v = 16;

    VerifyOptions opt;
    opt.tol = job.tol;
    opt.perturb_closed_l = job.perturb_closed_l;
    const TheoremReport rep = verify_theorems(job.spec, job.grid, opt);

    INFO("config ", rel);
    CHECK(rep.pass);
    CHECK(rep.checks.size() == 16);
    CHECK(rep.tube_regular == 256);
    CHECK(rep.focal_regular == 256);
    CHECK(rep.mask_mismatch == 0);
    for (const auto& c : rep.checks) {
      INFO("check ", c.name, " observed ", c.observed, " bound ", c.bound);
      CHECK(c.pass);
      CHECK(!c.skipped);
    }
    REQUIRE(rep.find("focal.flatness_jet") != nullptr);
    CHECK(rep.find("focal.flatness_jet")->observed <= 1e-8);
    CHECK(rep.find("bogus") == nullptr);
  }
}

TEST_CASE("constant-curvature spine skips the focal checks and still passes") {
  TubeSpec spec;
  spec.mode = FrameMode::Frenet;
  spec.spine = std::make_shared<AnalyticCurve>(parse_expr("2*cos(u/2)"), parse_expr("2*sin(u/2)"),
                                               parse_expr("0"), 0.0, 12.0);
  spec.r = 0.5;
  const GridSpec grid{1.0, 11.0, 8, -0.5, 0.5, 8};
  const TheoremReport rep = verify_theorems(spec, grid);

  CHECK(rep.pass);
  CHECK(rep.focal_regular == 0);
  CHECK(rep.focal_degenerate == 64);
  REQUIRE(rep.find("focal.flatness_jet") != nullptr);
  CHECK(rep.find("focal.flatness_jet")->skipped);
  CHECK(rep.find("focal.flatness_jet")->note.find("degenerate") != std::string::npos);
  CHECK_FALSE(rep.find("tube.closed_vs_numeric")->skipped);
  CHECK(rep.find("tube.closed_vs_numeric")->pass);
}

TEST_CASE("biased closed form fails exactly the comparison check") {
  JobConfig job = parse_config_text(kSpiralJob);
  job.grid.n_u = 8;
  job.grid.n_v = 8;

  VerifyOptions opt;
  opt.tol = job.tol;
  opt.perturb_closed_l = 1e-3;
  const TheoremReport rep = verify_theorems(job.spec, job.grid, opt);

  CHECK_FALSE(rep.pass);
  REQUIRE(rep.find("tube.closed_vs_numeric") != nullptr);
  CHECK_FALSE(rep.find("tube.closed_vs_numeric")->pass);
  for (const auto& c : rep.checks)
    if (c.name != "tube.closed_vs_numeric") {
      INFO("check ", c.name);
      CHECK(c.pass);
    }
}

// --- Reports -------------------------------------------------------------------------

TEST_CASE("fnv1a matches the reference vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hash_hex(0xaf63dc4c8601ec8cull) == "af63dc4c8601ec8c");
  CHECK(hash_hex(0x1ull) == "0000000000000001");
}

TEST_CASE("timestamps are iso-8601 utc") {
  const std::string ts = current_timestamp_utc();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[7] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[13] == ':');
  CHECK(ts[16] == ':');
  CHECK(ts.back() == 'Z');
}

TEST_CASE("reports are deterministic up to the timestamp line") {
  JobConfig job = parse_config_text(kSpiralJob);
  job.grid.n_u = 6;
  job.grid.n_v = 6;
  VerifyOptions opt;
  opt.tol = job.tol;
  const TheoremReport rep = verify_theorems(job.spec, job.grid, opt);

  const auto doc1 = build_report(job, rep, "2026-01-01T00:00:00Z");
  const auto doc2 = build_report(job, rep, "2026-01-01T00:00:00Z");
  CHECK(doc1.dump(2) == doc2.dump(2));

  // a different timestamp changes exactly one line, and that line only
  const auto doc3 = build_report(job, rep, "2026-02-02T02:02:02Z");
  std::vector<std::string> a, b;
  {
    std::istringstream sa(doc1.dump(2)), sb(doc3.dump(2));
    for (std::string l; std::getline(sa, l);) a.push_back(l);
    for (std::string l; std::getline(sb, l);) b.push_back(l);
  }
  REQUIRE(a.size() == b.size());
  int diffs = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) {
      ++diffs;
      CHECK(a[i].find("timestamp") != std::string::npos);
    }
  CHECK(diffs == 1);
}

TEST_CASE("report layout carries fixed keys in a fixed order") {
  JobConfig job = parse_config_text(kSpiralJob);
  job.grid.n_u = 6;
  job.grid.n_v = 6;
  VerifyOptions opt;
  opt.tol = job.tol;
  const TheoremReport rep = verify_theorems(job.spec, job.grid, opt);
  const auto doc = build_report(job, rep, "2026-01-01T00:00:00Z");

  std::vector<std::string> keys;
  for (const auto& item : doc.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"tool", "timestamp", "config", "grid", "threads",
                                         "tolerances", "counts", "measurements", "checks",
                                         "pass"});

  CHECK(doc["tool"] == tool_version());
  CHECK(doc["config"]["hash"] ==
        "fnv1a:" + hash_hex(fnv1a64(job.raw_text)));
  CHECK(doc["config"]["mode"] == "frenet");
  CHECK(doc["config"]["r"] == std::sqrt(2.0));
  CHECK(doc["grid"]["n_u"] == 6);
  CHECK(doc["tolerances"].size() == 22);
  CHECK(doc["counts"]["tube_points"] == 36);
  CHECK(doc["checks"].size() == 16);
  CHECK(doc["checks"][0]["name"] == "tube.regular_set");
  CHECK(doc["pass"] == true);

  // round trip through a file
  const fs::path p = fs::temp_directory_path() / "tubefocal_report_test.json";
  write_report(doc, p.string());
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == doc.dump(2) + "\n");
  const auto back = nlohmann::ordered_json::parse(buf.str());
  CHECK(back == doc);

  CHECK_THROWS_AS(write_report(doc, "/nonexistent_dir_1a2b/report.json"), IoError);
}
