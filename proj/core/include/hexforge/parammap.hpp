#pragma once

#include <array>
#include <vector>

#include "hexforge/geometry.hpp"
#include "hexforge/hex_mesh.hpp"
#include "hexforge/polycube.hpp"
#include "hexforge/tri_mesh.hpp"

namespace hexforge {

// Flattening of one labeled surface patch onto the unit square. Boundary
// vertices get chord-length coordinates along the square sides, interior
// vertices solve the cotangent Laplace equation.
struct PatchParam {
  int patch = 0;
  std::vector<int> tris;   // patch triangles, ascending mesh ids
  std::vector<int> verts;  // patch vertices, ascending mesh ids
  std::vector<std::array<double, 2>> uv;

  int local(int vertex) const;  // -1 if the vertex is not in the patch

  // Locate (u, v) in the flattened triangulation and pull the point back to
  // the surface. Triangles are scanned in ascending id order and the first
  // containing one wins, so results are reproducible.
  Point3 inverse_map(const TriMesh& mesh, double u, double v) const;
};

// Throws FlippedTriangles when both cotangent and uniform weights produce an
// inverted triangle, SolveFailure when the factorization breaks down.
PatchParam harmonic_parameterize(const TriMesh& mesh, const TriAdjacency& adj,
                                 const std::vector<int>& labels, const PatchQuad& quad);

struct MapResult {
  HexMesh mesh;
  int segments = 1;  // sample intervals per polycube cell edge
  // Entity counts of the mapped complex (not vertex tallies).
  long corner_count = 0;
  long edge_count = 0;
  long face_count = 0;
  long cell_count = 0;
};

// Map the polycube complex onto the surface bounded volume. Every cell is
// split into segments^3 hexahedra with segments = 2^subdivisions. Vertices
// are owned by the lowest-dimensional complex entity they lie on, so shared
// faces and edges are sampled once and the result is independent of cell
// traversal order.
MapResult map_polycube(const TriMesh& mesh, const TriAdjacency& adj,
                       const std::vector<int>& labels,
                       const std::vector<PatchQuad>& patch_quads, const PolycubeStructure& pc,
                       int subdivisions);

}  // namespace hexforge
