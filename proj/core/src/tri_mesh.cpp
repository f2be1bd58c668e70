#include "hexforge/tri_mesh.hpp"

#include <algorithm>

#include "hexforge/errors.hpp"

namespace hexforge {

void TriMesh::finalize() {
  tri_normal.assign(triangles.size(), Vec3{});
  tri_area.assign(triangles.size(), 0.0);
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    Vec3 n = cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
    double len = norm(n);
    tri_area[t] = 0.5 * len;
    tri_normal[t] = len > 0.0 ? n / len : Vec3{};
  }
}

int TriAdjacency::edge_id(int a, int b) const {
  auto it = edge_index.find(edge_key(a, b));
  return it == edge_index.end() ? -1 : it->second;
}

const std::vector<int>& TriAdjacency::tris_of_edge(int a, int b) const {
  static const std::vector<int> empty;
  int id = edge_id(a, b);
  return id < 0 ? empty : edge_tris[id];
}

TriAdjacency build_tri_adjacency(const TriMesh& mesh) {
  TriAdjacency adj;
  adj.vertex_tris.resize(mesh.vertices.size());
  std::vector<std::array<int, 2>> raw;
  raw.reserve(mesh.triangles.size() * 3);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= mesh.num_vertices())
        throw IndexOutOfRange("triangle vertex id out of range");
      adj.vertex_tris[tri[k]].push_back(static_cast<int>(t));
      int a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      raw.push_back({a, b});
    }
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  adj.edges = std::move(raw);
  adj.edge_tris.resize(adj.edges.size());
  adj.edge_index.reserve(adj.edges.size() * 2);
  for (std::size_t e = 0; e < adj.edges.size(); ++e)
    adj.edge_index[edge_key(adj.edges[e][0], adj.edges[e][1])] = static_cast<int>(e);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      adj.edge_tris[adj.edge_id(tri[k], tri[(k + 1) % 3])].push_back(static_cast<int>(t));
  }
  for (auto& tris : adj.edge_tris) {
    if (tris.size() > 2) throw NonManifoldError("edge shared by more than two triangles");
  }
  return adj;
}

bool is_closed_surface(const TriMesh&, const TriAdjacency& adj) {
  for (const auto& tris : adj.edge_tris)
    if (tris.size() != 2) return false;
  return true;
}

bool is_consistently_oriented(const TriMesh& mesh, const TriAdjacency& adj) {
  // Count directed traversals per edge; consistency means each interior edge
  // is used exactly once in each direction.
  std::unordered_map<std::uint64_t, int> forward;
  forward.reserve(adj.edges.size() * 2);
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
      if (++forward[key] > 1) return false;
    }
  }
  for (std::size_t e = 0; e < adj.edges.size(); ++e) {
    if (adj.edge_tris[e].size() != 2) continue;
    int a = adj.edges[e][0], b = adj.edges[e][1];
    std::uint64_t ab = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    std::uint64_t ba = (static_cast<std::uint64_t>(b) << 32) | static_cast<std::uint32_t>(a);
    if (forward.count(ab) != 1 || forward.count(ba) != 1) return false;
  }
  return true;
}

double signed_volume(const TriMesh& mesh) {
  double v = 0.0;
  for (const auto& tri : mesh.triangles)
    v += dot(mesh.vertices[tri[0]], cross(mesh.vertices[tri[1]], mesh.vertices[tri[2]]));
  return v / 6.0;
}

void orient_outward(TriMesh& mesh) {
  if (signed_volume(mesh) < 0.0) {
    for (auto& tri : mesh.triangles) std::swap(tri[1], tri[2]);
    mesh.finalize();
  }
}

} // namespace hexforge
