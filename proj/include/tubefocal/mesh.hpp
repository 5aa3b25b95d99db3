#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tubefocal/tolerances.hpp"
#include "tubefocal/tube.hpp"
#include "tubefocal/verify.hpp"

namespace tubefocal {

// ---------------------------------------------------------------------------
// Structured grid sampling of a tube or its focal sheet, and mesh exporters.
//
// Nodes run row-major with v fastest: node(i, j) = i * n_v + j for the i-th u
// sample and j-th v sample.  Vertices are the unmasked nodes in node order.
// Quads join four unmasked corners counter-clockwise as sampled:
//   (i, j), (i, j+1), (i+1, j+1), (i+1, j).
// ---------------------------------------------------------------------------

enum class MaskReason { Regular, TubeSingular, FocalPoleV, FocalPoleB, FocalDegenerate };

const char* mask_reason_name(MaskReason r);

enum class SurfaceKind { Tube, Focal };

struct GridMesh {
  int n_u = 0, n_v = 0;
  std::vector<double> us, vs;  // parameter values per grid line

  std::vector<MaskReason> mask;       // one per node
  std::vector<long> vertex_of_node;   // -1 where masked
  std::vector<long> node_of_vertex;

  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<long, 4>> quads;  // vertex indices

  std::vector<std::string> field_names;
  std::vector<std::vector<double>> fields;  // [field][vertex]

  long node(int i, int j) const { return long(i) * n_v + j; }
};

// Samples the requested sheet over the grid.  Tube meshes carry the fields
// K, H, kappa1, kappa2; focal meshes carry K, H and the four parameter-curve
// residuals.  Throws EmptyMesh when every node is masked.
GridMesh sample_surface(const TubeSpec& spec, const GridSpec& grid, SurfaceKind kind,
                        const Tolerances& tol = {});

// Wavefront OBJ: v/f records only.  OBJ carries no per-vertex scalars, so any
// fields are dropped with a warning on stderr.
void export_obj(const GridMesh& mesh, const std::string& path);

// ascii PLY 1.0 with one double property per field and quad faces
void export_ply(const GridMesh& mesh, const std::string& path);

// RFC 4180 CSV, one record per grid node: u, v, x, y, z, mask, fields.
// Coordinate and field cells are empty on masked nodes.
void export_csv(const GridMesh& mesh, const std::string& path);

// minimal ascii-PLY reader used to confirm exports round-trip
struct PlyContents {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::string> field_names;
  std::vector<std::vector<double>> fields;  // [field][vertex]
  std::vector<std::array<long, 4>> faces;
};

PlyContents read_ply(const std::string& path);

}  // namespace tubefocal
