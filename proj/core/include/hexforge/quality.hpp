#pragma once

#include <array>
#include <vector>

#include "hexforge/hex_mesh.hpp"

namespace hexforge {

// Minimum scaled Jacobian over the eight corner frames of a hexahedron.
// Any zero-length corner edge degenerates the cell to -1.
double cell_scaled_jacobian(const HexMesh& mesh, const std::array<int, 8>& cell);

double hex_cell_volume(const HexMesh& mesh, const std::array<int, 8>& cell);

struct QualityReport {
  double min_sj = 1.0;
  double max_sj = -1.0;
  double mean_sj = 0.0;
  long negative = 0;
  int worst_cell = -1;
  std::vector<double> cell_sj;
};

QualityReport mesh_quality(const HexMesh& mesh);

// Sharp boundary edges are those whose two adjacent boundary quads bend past
// the normal-dot threshold. Vertices collect their incident sharp edges;
// consumers decide how a given sharp degree constrains them.
struct FeatureSet {
  std::vector<int> sharp_degree;                  // per vertex
  std::vector<char> pinned;                       // user-marked immovable vertices
  std::vector<std::vector<int>> sharp_neighbors;  // per vertex, ascending
  std::vector<std::array<int, 2>> sharp_edges;    // a < b, sorted

  bool is_corner(int v) const {
    return pinned[v] || sharp_degree[v] >= 3 || sharp_degree[v] == 1;
  }
  bool is_crease(int v) const { return !pinned[v] && sharp_degree[v] == 2; }
};

FeatureSet detect_features(const HexMesh& mesh, const HexAdjacency& adj, double dot_tol = 0.8,
                           const std::vector<int>& pinned = {});

// Manual feature entry: boundary edges whose endpoints are both marked become
// sharp; a marked vertex with no marked boundary neighbor is pinned as a
// point feature. Throws IndexOutOfRange for bad ids.
FeatureSet features_from_marked(const HexMesh& mesh, const HexAdjacency& adj,
                                const std::vector<int>& marked);

// Insert one layer of cells under the boundary: every boundary vertex gets an
// inward duplicate at offset x shortest incident edge, original cells adopt
// the duplicates, and each boundary quad grows a new cell between the two
// layers. Duplicates are appended in ascending boundary vertex order.
HexMesh pillow(const HexMesh& mesh, const HexAdjacency& adj, double offset = 0.3);

struct SmoothOptions {
  double step = 0.001;
  int iterations = 50;
};

// Gauss-Seidel moves toward a per-vertex target (crease midpoint, boundary
// quad area centroid, or cell volume centroid), each accepted only when the
// minimum scaled Jacobian of the incident cells strictly improves. Returns
// the number of accepted moves.
long smooth(HexMesh& mesh, const HexAdjacency& adj, const FeatureSet& features,
            const SmoothOptions& options);

struct OptimizeOptions {
  double step = 0.001;
  int iterations = 15;
};

// Finite-difference ascent on the local minimum scaled Jacobian, applied to
// the vertices of negative cells and the worst corner of the worst cell.
// Crease vertices move along the crease, pinned and high-degree feature
// vertices stay put. Returns the number of accepted moves.
long optimize(HexMesh& mesh, const HexAdjacency& adj, const FeatureSet& features,
              const OptimizeOptions& options);

}  // namespace hexforge
