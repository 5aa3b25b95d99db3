#include "tubefocal/mesh.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "tubefocal/errors.hpp"

namespace tubefocal {

const char* mask_reason_name(MaskReason r) {
  switch (r) {
    case MaskReason::Regular:
      return "regular";
    case MaskReason::TubeSingular:
      return "tube_singular";
    case MaskReason::FocalPoleV:
      return "focal_pole_v";
    case MaskReason::FocalPoleB:
      return "focal_pole_b";
    case MaskReason::FocalDegenerate:
      return "focal_degenerate";
  }
  return "unknown";
}

// --- Sampling -------------------------------------------------------------------

namespace {

struct NodeSample {
  MaskReason mask = MaskReason::Regular;
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  std::array<double, 6> f{};
};

// shortest decimal form that parses back to the same double
std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace

GridMesh sample_surface(const TubeSpec& spec, const GridSpec& grid, SurfaceKind kind,
                        const Tolerances& tol) {
  if (grid.n_u < 2 || grid.n_v < 2)
    throw DomainError("sampling grid needs at least 2 samples per direction");
  if (!(grid.u_min < grid.u_max) || !(grid.v_min < grid.v_max))
    throw DomainError("sampling grid range is empty");
  validate_tube_spec(spec, 64, tol);

  const bool tube = kind == SurfaceKind::Tube;
  const bool frenet = spec.mode == FrameMode::Frenet;

  GridMesh mesh;
  mesh.n_u = grid.n_u;
  mesh.n_v = grid.n_v;
  mesh.us.resize(size_t(grid.n_u));
  mesh.vs.resize(size_t(grid.n_v));
  mesh.field_names =
      tube ? std::vector<std::string>{"K", "H", "kappa1", "kappa2"}
           : std::vector<std::string>{"K", "H", "u_asymptotic", "v_asymptotic",
                                      "u_geodesic", "v_geodesic"};
  const size_t nf = mesh.field_names.size();

  for (int j = 0; j < grid.n_v; ++j)
    mesh.vs[size_t(j)] = grid.v_min + (grid.v_max - grid.v_min) * double(j) / double(grid.n_v - 1);

  std::vector<NodeSample> nodes(size_t(grid.n_u) * size_t(grid.n_v));
  for (int i = 0; i < grid.n_u; ++i) {
    const double u =
        grid.u_min + (grid.u_max - grid.u_min) * double(i) / double(grid.n_u - 1);
    mesh.us[size_t(i)] = u;

    std::optional<FrenetApparatus> fa;
    std::optional<DarbouxApparatus> da;
    bool row_dead = false;
    try {
      if (frenet) {
        fa = frenet_at(*spec.spine, u, tol);
      } else {
        da = spec.source->apparatus(u);
      }
    } catch (const VanishingCurvature&) {
      row_dead = true;
    } catch (const DegenerateHost&) {
      row_dead = true;
    }

    for (int j = 0; j < grid.n_v; ++j) {
      const double v = mesh.vs[size_t(j)];
      NodeSample& ns = nodes[size_t(mesh.node(i, j))];
      if (row_dead) {
        ns.mask = tube ? MaskReason::TubeSingular : MaskReason::FocalDegenerate;
        continue;
      }
      try {
        if (tube) {
          const TubeForms tf = frenet ? tube_forms_frenet(*fa, spec.r, v, tol)
                                      : tube_forms_darboux(*da, spec.r, v, tol);
          const SurfaceJet pj =
              frenet ? tube_point_frenet(*fa, spec.r, v, tol) : tube_point_darboux(*da, spec.r, v);
          ns.pos = pj.X;
          ns.f = {tf.curvature.K, tf.curvature.H, tf.curvature.kappa1, tf.curvature.kappa2};
        } else {
          const FocalForms ff =
              frenet ? focal_forms_frenet(*fa, v, tol) : focal_forms_darboux(*da, v, tol);
          const SurfaceJet pj =
              frenet ? focal_point_frenet(*fa, v, tol) : focal_point_darboux(*da, v, tol);
          const ClassificationReport cr =
              frenet ? classify_focal_curves(*fa, v, tol) : classify_focal_curves(*da, v, tol);
          ns.pos = pj.X;
          ns.f = {ff.curvature.K, ff.curvature.H, cr.u_asymptotic,
                  cr.v_asymptotic, cr.u_geodesic,  cr.v_geodesic};
        }
      } catch (const SingularPoint&) {
        ns.mask = MaskReason::TubeSingular;
      } catch (const FocalPoleV&) {
        ns.mask = MaskReason::FocalPoleV;
      } catch (const FocalPoleB&) {
        ns.mask = MaskReason::FocalPoleB;
      } catch (const FocalDegenerate&) {
        ns.mask = MaskReason::FocalDegenerate;
      } catch (const VanishingCurvature&) {
        ns.mask = tube ? MaskReason::TubeSingular : MaskReason::FocalDegenerate;
      }
    }
  }

  mesh.mask.resize(nodes.size());
  mesh.vertex_of_node.assign(nodes.size(), -1);
  mesh.fields.assign(nf, {});
  for (size_t n = 0; n < nodes.size(); ++n) {
    mesh.mask[n] = nodes[n].mask;
    if (nodes[n].mask != MaskReason::Regular) continue;
    mesh.vertex_of_node[n] = long(mesh.vertices.size());
    mesh.node_of_vertex.push_back(long(n));
    mesh.vertices.push_back(nodes[n].pos);
    for (size_t k = 0; k < nf; ++k) mesh.fields[k].push_back(nodes[n].f[k]);
  }
  if (mesh.vertices.empty()) throw EmptyMesh("every grid node is masked; nothing to mesh");

  for (int i = 0; i + 1 < grid.n_u; ++i) {
    for (int j = 0; j + 1 < grid.n_v; ++j) {
      const long a = mesh.vertex_of_node[size_t(mesh.node(i, j))];
      const long b = mesh.vertex_of_node[size_t(mesh.node(i, j + 1))];
      const long c = mesh.vertex_of_node[size_t(mesh.node(i + 1, j + 1))];
      const long d = mesh.vertex_of_node[size_t(mesh.node(i + 1, j))];
      if (a < 0 || b < 0 || c < 0 || d < 0) continue;
      mesh.quads.push_back({a, b, c, d});
    }
  }
  return mesh;
}

// --- Exporters -------------------------------------------------------------------

void export_obj(const GridMesh& mesh, const std::string& path) {
  if (!mesh.field_names.empty()) {
    std::cerr << "warning: obj carries no per-vertex scalars; dropping "
              << mesh.field_names.size() << " field(s):";
    for (const auto& f : mesh.field_names) std::cerr << " " << f;
    std::cerr << "\n";
  }
  std::ofstream out = open_out(path);
  for (const auto& p : mesh.vertices)
    out << "v " << fmt(p[0]) << " " << fmt(p[1]) << " " << fmt(p[2]) << "\n";
  for (const auto& q : mesh.quads)
    out << "f " << q[0] + 1 << " " << q[1] + 1 << " " << q[2] + 1 << " " << q[3] + 1 << "\n";
  finish_out(out, path);
}

void export_ply(const GridMesh& mesh, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  for (const auto& f : mesh.field_names) out << "property double " << f << "\n";
  out << "element face " << mesh.quads.size() << "\n";
  out << "property list uchar int vertex_indices\n";
  out << "end_header\n";
  for (size_t vi = 0; vi < mesh.vertices.size(); ++vi) {
    const auto& p = mesh.vertices[vi];
    out << fmt(p[0]) << " " << fmt(p[1]) << " " << fmt(p[2]);
    for (const auto& field : mesh.fields) out << " " << fmt(field[vi]);
    out << "\n";
  }
  for (const auto& q : mesh.quads)
    out << "4 " << q[0] << " " << q[1] << " " << q[2] << " " << q[3] << "\n";
  finish_out(out, path);
}

namespace {

// RFC 4180: quote a cell only when it holds a comma, quote, or line break
std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

}  // namespace

void export_csv(const GridMesh& mesh, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "u,v,x,y,z,mask";
  for (const auto& f : mesh.field_names) out << "," << csv_cell(f);
  out << "\r\n";
  for (int i = 0; i < mesh.n_u; ++i) {
    for (int j = 0; j < mesh.n_v; ++j) {
      const size_t n = size_t(mesh.node(i, j));
      const long vi = mesh.vertex_of_node[n];
      out << fmt(mesh.us[size_t(i)]) << "," << fmt(mesh.vs[size_t(j)]) << ",";
      if (vi >= 0) {
        const auto& p = mesh.vertices[size_t(vi)];
        out << fmt(p[0]) << "," << fmt(p[1]) << "," << fmt(p[2]);
      } else {
        out << ",,";
      }
      out << "," << mask_reason_name(mesh.mask[n]);
      for (const auto& field : mesh.fields) {
        out << ",";
        if (vi >= 0) out << fmt(field[size_t(vi)]);
      }
      out << "\r\n";
    }
  }
  finish_out(out, path);
}

// --- Reader ---------------------------------------------------------------------

PlyContents read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ply file: " + path);

  std::string line;
  const auto next = [&]() -> const std::string& {
    if (!std::getline(in, line)) throw IoError("unexpected end of ply header: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next() != "ply") throw IoError("not a ply file: " + path);
  if (next() != "format ascii 1.0") throw IoError("unsupported ply format: " + path);

  long n_vertex = -1, n_face = -1;
  std::vector<std::string> props;
  enum class Elem { None, Vertex, Face };
  Elem elem = Elem::None;
  while (true) {
    const std::string header = next();
    if (header == "end_header") break;
    std::istringstream ls(header);
    std::string word;
    ls >> word;
    if (word == "comment") continue;
    if (word == "element") {
      std::string name;
      long count = 0;
      ls >> name >> count;
      if (name == "vertex") {
        n_vertex = count;
        elem = Elem::Vertex;
      } else if (name == "face") {
        n_face = count;
        elem = Elem::Face;
      } else {
        throw IoError("unsupported ply element '" + name + "': " + path);
      }
      continue;
    }
    if (word == "property") {
      if (elem != Elem::Vertex) continue;  // face list property
      std::string type, name;
      ls >> type >> name;
      if (type != "double") throw IoError("vertex properties must be double: " + path);
      props.push_back(name);
      continue;
    }
    throw IoError("unexpected ply header line '" + header + "': " + path);
  }
  if (n_vertex < 0) throw IoError("ply header lacks a vertex element: " + path);
  if (props.size() < 3 || props[0] != "x" || props[1] != "y" || props[2] != "z")
    throw IoError("ply vertices must start with x y z: " + path);

  PlyContents out;
  out.field_names.assign(props.begin() + 3, props.end());
  out.fields.assign(out.field_names.size(), {});
  for (long vi = 0; vi < n_vertex; ++vi) {
    Eigen::Vector3d p;
    if (!(in >> p[0] >> p[1] >> p[2])) throw IoError("truncated ply vertex data: " + path);
    for (auto& field : out.fields) {
      double val = 0.0;
      if (!(in >> val)) throw IoError("truncated ply vertex data: " + path);
      field.push_back(val);
    }
    out.vertices.push_back(p);
  }
  for (long fi = 0; fi < (n_face > 0 ? n_face : 0); ++fi) {
    int count = 0;
    if (!(in >> count)) throw IoError("truncated ply face data: " + path);
    if (count != 4) throw IoError("expected quad faces: " + path);
    std::array<long, 4> q{};
    for (auto& idx : q)
      if (!(in >> idx)) throw IoError("truncated ply face data: " + path);
    out.faces.push_back(q);
  }
  return out;
}

}  // namespace tubefocal
