#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hexforge/hex_mesh.hpp"
#include "hexforge/quality.hpp"

namespace hexforge {

struct SubdivisionResult {
  HexMesh mesh;
  // Affine mask of every child vertex over the parent vertices; each row sums
  // to one and is sorted by parent id.
  std::vector<std::vector<std::pair<int, double>>> prolongation;
  // Sharp edges split in two, pinned vertices stay pinned; no re-detection.
  FeatureSet features;
  // Eight children per parent cell in octant order, x fastest. The child at
  // octant (a, b, c) covers parent parameters u = (a + u') / 2 and so on.
  std::vector<std::array<int, 8>> children;
  long parent_vertices = 0;
};

// One global step of volumetric Catmull-Clark refinement. Child vertex ids:
// parent vertices keep their ids, then one vertex per edge, per face and per
// cell in adjacency order. Interior masks blend cell centroids, face and edge
// midpoints; the boundary follows surface Catmull-Clark; sharp edges use the
// univariate cubic masks and feature corners interpolate. Regular regions
// reproduce uniform tricubic B-spline knot insertion.
SubdivisionResult subdivide(const HexMesh& mesh, const HexAdjacency& adj,
                            const FeatureSet& features);

}  // namespace hexforge
