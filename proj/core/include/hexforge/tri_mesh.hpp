#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hexforge/geometry.hpp"

namespace hexforge {

// Triangle surface mesh. Triangles are vertex index triples, counter-clockwise
// seen from outside for a closed surface with outward orientation.
struct TriMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;

  // Derived per-triangle data, filled by finalize().
  std::vector<Vec3> tri_normal;   // unit normal, zero vector for degenerate triangles
  std::vector<double> tri_area;

  void finalize();
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
};

// Edge/vertex incidence of a triangle mesh. Edges are stored with a < b and
// listed in lexicographic order; all incidence lists are sorted.
struct TriAdjacency {
  std::vector<std::array<int, 2>> edges;
  std::vector<std::vector<int>> edge_tris;
  std::vector<std::vector<int>> vertex_tris;
  std::unordered_map<std::uint64_t, int> edge_index;

  int edge_id(int a, int b) const;
  const std::vector<int>& tris_of_edge(int a, int b) const;
};

// Throws NonManifoldError if an edge has more than two incident triangles.
TriAdjacency build_tri_adjacency(const TriMesh& mesh);

bool is_closed_surface(const TriMesh& mesh, const TriAdjacency& adj);

// Consistent orientation: every interior edge is traversed once in each
// direction by its two triangles.
bool is_consistently_oriented(const TriMesh& mesh, const TriAdjacency& adj);

double signed_volume(const TriMesh& mesh);

// Flips all triangles when the signed volume is negative so normals point
// outward. Requires a consistently oriented closed surface.
void orient_outward(TriMesh& mesh);

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

} // namespace hexforge
