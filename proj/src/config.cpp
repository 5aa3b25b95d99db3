#include "tubefocal/config.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tubefocal/curve.hpp"
#include "tubefocal/darboux.hpp"
#include "tubefocal/errors.hpp"
#include "tubefocal/expression.hpp"
#include "tubefocal/spine.hpp"

namespace tubefocal {

// --- Named tolerance access ---------------------------------------------------

namespace {

struct ToleranceEntry {
  const char* name;
  double Tolerances::* member;
};

constexpr ToleranceEntry kToleranceTable[] = {
    {"eps_kappa", &Tolerances::eps_kappa},
    {"eps_b", &Tolerances::eps_b},
    {"eps_v", &Tolerances::eps_v},
    {"eps_reg", &Tolerances::eps_reg},
    {"unit_speed", &Tolerances::unit_speed},
    {"planarity", &Tolerances::planarity},
    {"frame_ode_jet", &Tolerances::frame_ode_jet},
    {"frame_ode_fd", &Tolerances::frame_ode_fd},
    {"frame_orthonormality", &Tolerances::frame_orthonormality},
    {"fd_h", &Tolerances::fd_h},
    {"surface_fd_h", &Tolerances::surface_fd_h},
    {"quadrature", &Tolerances::quadrature},
    {"closed_vs_numeric_rel", &Tolerances::closed_vs_numeric_rel},
    {"closed_vs_numeric_abs", &Tolerances::closed_vs_numeric_abs},
    {"flatness_jet", &Tolerances::flatness_jet},
    {"flatness_fd", &Tolerances::flatness_fd},
    {"anchor", &Tolerances::anchor},
    {"geodesic_residual", &Tolerances::geodesic_residual},
    {"asymptotic_min", &Tolerances::asymptotic_min},
    {"principal_split", &Tolerances::principal_split},
    {"spine_recovery", &Tolerances::spine_recovery},
    {"reduction_consistency", &Tolerances::reduction_consistency},
};

}  // namespace

void set_tolerance(Tolerances& t, const std::string& name, double value) {
  for (const auto& e : kToleranceTable) {
    if (name != e.name) continue;
    if (!(value > 0.0))
      throw Error("tolerance '" + name + "' must be positive, got " + std::to_string(value));
    t.*e.member = value;
    return;
  }
  throw Error("unknown tolerance '" + name + "'");
}

std::vector<std::pair<std::string, double>> list_tolerances(const Tolerances& t) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(std::size(kToleranceTable));
  for (const auto& e : kToleranceTable) out.emplace_back(e.name, t.*e.member);
  return out;
}

// --- INI scanning ---------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Entry {
  std::string key, value;
  bool used = false;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;
  bool claimed = false;
};

std::vector<Section> scan_ini(const std::string& text) {
  std::vector<Section> out;
  std::istringstream in(text);
  std::string raw;
  Section* cur = nullptr;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string at = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigParseError(at, "unterminated section header: " + line);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigParseError(at, "empty section name");
      for (const auto& s : out)
        if (s.name == name) throw ConfigParseError(name, "duplicate section");
      out.push_back({name, {}, false});
      cur = &out.back();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError(at, "expected 'key = value' or '[section]', got: " + line);
    if (cur == nullptr) throw ConfigParseError(at, "key before any [section] header");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigParseError(at, "empty key");
    for (const auto& e : cur->entries)
      if (e.key == key) throw ConfigParseError(cur->name + "." + key, "duplicate key");
    cur->entries.push_back({key, value, false});
  }
  return out;
}

// claims one section by name; tracks which keys were consumed
class Reader {
 public:
  Reader(std::vector<Section>& sections, std::string name) : name_(std::move(name)) {
    for (auto& s : sections)
      if (s.name == name_) {
        sec_ = &s;
        s.claimed = true;
      }
  }

  bool present() const { return sec_ != nullptr; }
  std::string path(const std::string& key) const { return name_ + "." + key; }

  bool has(const std::string& key) const {
    if (!sec_) return false;
    for (const auto& e : sec_->entries)
      if (e.key == key) return true;
    return false;
  }

  std::optional<std::string> get(const std::string& key) {
    if (!sec_) return std::nullopt;
    for (auto& e : sec_->entries)
      if (e.key == key) {
        e.used = true;
        return e.value;
      }
    return std::nullopt;
  }

  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) throw ConfigParseError(path(key), "missing required field");
    return *v;
  }

  // every remaining entry, marked consumed (free-form sections)
  std::vector<std::pair<std::string, std::string>> all() {
    std::vector<std::pair<std::string, std::string>> out;
    if (!sec_) return out;
    for (auto& e : sec_->entries) {
      e.used = true;
      out.emplace_back(e.key, e.value);
    }
    return out;
  }

 private:
  std::string name_;
  Section* sec_ = nullptr;
};

// --- Value parsers ---------------------------------------------------------------

double parse_scalar(const std::string& path, const std::string& text) {
  try {
    const ExprTree tree = parse_expr(text, SymbolTable::constants_only());
    return eval_value(tree, 0.0);
  } catch (const Error& e) {
    throw ConfigParseError(path, "not a constant expression: " + std::string(e.what()));
  }
}

int parse_count(const std::string& path, const std::string& text) {
  int v = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ConfigParseError(path, "expected an integer, got '" + text + "'");
  return v;
}

ExprTree parse_tree(const std::string& path, const std::string& text, const SymbolTable& sym) {
  try {
    return parse_expr(text, sym);
  } catch (const Error& e) {
    throw ConfigParseError(path, e.what());
  }
}

std::string num6(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// --- Section assembly ---------------------------------------------------------------

GridSpec build_grid(Reader& grid) {
  if (!grid.present()) throw ConfigParseError("grid", "missing required section");
  GridSpec g;
  g.u_min = parse_scalar(grid.path("u_min"), grid.require("u_min"));
  g.u_max = parse_scalar(grid.path("u_max"), grid.require("u_max"));
  g.n_u = parse_count(grid.path("n_u"), grid.require("n_u"));
  g.v_min = parse_scalar(grid.path("v_min"), grid.require("v_min"));
  g.v_max = parse_scalar(grid.path("v_max"), grid.require("v_max"));
  g.n_v = parse_count(grid.path("n_v"), grid.require("n_v"));
  if (g.n_u < 2)
    throw ConfigParseError("grid.n_u", "need at least 2 samples, got " + std::to_string(g.n_u));
  if (g.n_v < 2)
    throw ConfigParseError("grid.n_v", "need at least 2 samples, got " + std::to_string(g.n_v));
  if (!(g.u_min < g.u_max)) throw ConfigParseError("grid.u_max", "u range is empty");
  if (!(g.v_min < g.v_max)) throw ConfigParseError("grid.v_max", "v range is empty");
  return g;
}

std::shared_ptr<const CurveModel> build_spine(Reader& spine, const Tolerances& tol) {
  if (!spine.present()) throw ConfigParseError("spine", "missing required section");
  if (spine.has("kappa")) {
    if (spine.has("x") || spine.has("y") || spine.has("z"))
      throw ConfigParseError("spine.kappa", "curvature-driven spines take kappa/u0, not x/y/z");
    ExprTree kappa = parse_tree(spine.path("kappa"), spine.require("kappa"), SymbolTable::curve());
    const double u0 = parse_scalar(spine.path("u0"), spine.require("u0"));
    const double u_min = parse_scalar(spine.path("u_min"), spine.require("u_min"));
    const double u_max = parse_scalar(spine.path("u_max"), spine.require("u_max"));
    int checkpoints = 64;
    if (auto c = spine.get("checkpoints")) checkpoints = parse_count(spine.path("checkpoints"), *c);
    return spine_from_curvature(std::move(kappa), u0, u_min, u_max, checkpoints, tol);
  }
  ExprTree x = parse_tree(spine.path("x"), spine.require("x"), SymbolTable::curve());
  ExprTree y = parse_tree(spine.path("y"), spine.require("y"), SymbolTable::curve());
  ExprTree z = parse_tree(spine.path("z"), spine.require("z"), SymbolTable::curve());
  const double u_min = parse_scalar(spine.path("u_min"), spine.require("u_min"));
  const double u_max = parse_scalar(spine.path("u_max"), spine.require("u_max"));
  if (!(u_min < u_max)) throw ConfigParseError("spine.u_max", "parameter range is empty");
  return std::make_shared<AnalyticCurve>(std::move(x), std::move(y), std::move(z), u_min, u_max);
}

std::shared_ptr<const DarbouxSource> build_source(Reader& frame, Reader& spine, Reader& host,
                                                  const Tolerances& tol) {
  if (!frame.present()) throw ConfigParseError("frame", "darboux mode needs a [frame] section");
  const std::string source = frame.require("source");

  if (source == "rotated") {
    if (host.present()) throw ConfigParseError("host", "only source = host takes a [host] section");
    double theta = 0.0;
    if (auto t = frame.get("theta")) theta = parse_scalar(frame.path("theta"), *t);
    return std::make_shared<RotatedFrenetDarboux>(build_spine(spine, tol), theta);
  }

  if (source == "direct") {
    if (host.present()) throw ConfigParseError("host", "only source = host takes a [host] section");
    if (!spine.present()) throw ConfigParseError("spine", "missing required section");
    if (spine.has("kappa"))
      throw ConfigParseError("spine.kappa", "direct frames need an explicit x/y/z spine");
    const SymbolTable sym = SymbolTable::curve();
    DirectDarbouxFrame::Input in;
    const char* axes = "xyz";
    for (int i = 0; i < 3; ++i) {
      const std::string axis(1, axes[i]);
      in.gamma[size_t(i)] = parse_tree(spine.path(axis), spine.require(axis), sym);
      in.T[size_t(i)] = parse_tree(frame.path("T_" + axis), frame.require("T_" + axis), sym);
      in.Y[size_t(i)] = parse_tree(frame.path("Y_" + axis), frame.require("Y_" + axis), sym);
      in.U[size_t(i)] = parse_tree(frame.path("U_" + axis), frame.require("U_" + axis), sym);
    }
    in.kg = parse_tree(frame.path("kg"), frame.require("kg"), sym);
    in.kn = parse_tree(frame.path("kn"), frame.require("kn"), sym);
    if (auto tg = frame.get("taug")) in.taug = parse_tree(frame.path("taug"), *tg, sym);
    in.u_min = parse_scalar(spine.path("u_min"), spine.require("u_min"));
    in.u_max = parse_scalar(spine.path("u_max"), spine.require("u_max"));
    if (!(in.u_min < in.u_max)) throw ConfigParseError("spine.u_max", "parameter range is empty");
    return std::make_shared<DirectDarbouxFrame>(std::move(in), tol);
  }

  if (source == "host") {
    if (spine.present())
      throw ConfigParseError("spine", "host-curve frames derive the spine from [host]");
    if (!host.present()) throw ConfigParseError("host", "source = host needs a [host] section");
    const SymbolTable patch = SymbolTable::surface();
    std::array<ExprTree, 3> hx = {
        parse_tree(host.path("x"), host.require("x"), patch),
        parse_tree(host.path("y"), host.require("y"), patch),
        parse_tree(host.path("z"), host.require("z"), patch),
    };
    ExprTree s = parse_tree(host.path("s"), host.require("s"), SymbolTable::curve());
    ExprTree t = parse_tree(host.path("t"), host.require("t"), SymbolTable::curve());
    const double u_min = parse_scalar(host.path("u_min"), host.require("u_min"));
    const double u_max = parse_scalar(host.path("u_max"), host.require("u_max"));
    if (!(u_min < u_max)) throw ConfigParseError("host.u_max", "parameter range is empty");
    return std::make_shared<HostSurfaceCurve>(std::move(hx), std::move(s), std::move(t), u_min,
                                              u_max, tol);
  }

  throw ConfigParseError("frame.source", "expected rotated, direct, or host, got '" + source + "'");
}

}  // namespace

JobConfig parse_config_text(const std::string& text, const ToleranceOverrides& overrides) {
  std::vector<Section> sections = scan_ini(text);
  Reader job(sections, "job");
  Reader spine(sections, "spine");
  Reader frame(sections, "frame");
  Reader host(sections, "host");
  Reader grid(sections, "grid");
  Reader tolerances(sections, "tolerances");
  Reader outputs(sections, "outputs");
  Reader debug(sections, "debug");

  for (const auto& s : sections)
    if (!s.claimed) throw ConfigParseError(s.name, "unknown section");

  JobConfig out;
  out.raw_text = text;

  if (!job.present()) throw ConfigParseError("job", "missing required section");
  if (auto n = job.get("name")) out.name = *n;
  const std::string mode = job.require("mode");
  if (mode == "frenet") {
    out.spec.mode = FrameMode::Frenet;
  } else if (mode == "darboux") {
    out.spec.mode = FrameMode::Darboux;
  } else {
    throw ConfigParseError("job.mode", "expected frenet or darboux, got '" + mode + "'");
  }
  out.spec.r = parse_scalar(job.path("r"), job.require("r"));
  if (!(out.spec.r > 0.0))
    throw ConfigParseError("job.r", "radius must be positive, got " + num6(out.spec.r));

  // tolerances first: construction-time guards read them
  for (const auto& [key, value] : tolerances.all()) {
    const double v = parse_scalar("tolerances." + key, value);
    try {
      set_tolerance(out.tol, key, v);
    } catch (const Error& e) {
      throw ConfigParseError("tolerances." + key, e.what());
    }
  }
  for (const auto& [key, value] : overrides) set_tolerance(out.tol, key, value);

  out.grid = build_grid(grid);

  if (out.spec.mode == FrameMode::Frenet) {
    if (frame.present())
      throw ConfigParseError("frame", "frenet mode does not take a frame section");
    if (host.present()) throw ConfigParseError("host", "frenet mode does not take a host section");
    out.spec.spine = build_spine(spine, out.tol);
  } else {
    out.spec.source = build_source(frame, spine, host, out.tol);
  }

  if (auto p = outputs.get("tube_mesh")) out.outputs.tube_mesh = *p;
  if (auto p = outputs.get("focal_mesh")) out.outputs.focal_mesh = *p;
  if (auto p = outputs.get("fields_csv")) out.outputs.fields_csv = *p;
  if (auto p = outputs.get("report_json")) out.outputs.report_json = *p;

  if (auto p = debug.get("perturb_closed_l"))
    out.perturb_closed_l = parse_scalar(debug.path("perturb_closed_l"), *p);

  for (const auto& s : sections)
    for (const auto& e : s.entries)
      if (!e.used) throw ConfigParseError(s.name + "." + e.key, "unknown field");

  const double lo =
      out.spec.mode == FrameMode::Frenet ? out.spec.spine->u_min() : out.spec.source->u_min();
  const double hi =
      out.spec.mode == FrameMode::Frenet ? out.spec.spine->u_max() : out.spec.source->u_max();
  if (out.grid.u_min < lo - 1e-12 || out.grid.u_max > hi + 1e-12)
    throw ConfigParseError("grid.u_min", "grid u range [" + num6(out.grid.u_min) + ", " +
                                             num6(out.grid.u_max) +
                                             "] leaves the spine parameter range [" + num6(lo) +
                                             ", " + num6(hi) + "]");

  validate_tube_spec(out.spec, 64, out.tol);
  return out;
}

JobConfig load_config(const std::string& path, const ToleranceOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file: " + path);
  return parse_config_text(buf.str(), overrides);
}

}  // namespace tubefocal
