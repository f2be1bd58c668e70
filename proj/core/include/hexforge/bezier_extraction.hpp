#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hexforge/hex_mesh.hpp"
#include "hexforge/io/bext.hpp"
#include "hexforge/quality.hpp"

namespace hexforge {

// Bezier lattice of one cell: 4x4x4 points, u fastest.
inline int bezier_index(int iu, int iv, int iw) { return iu + 4 * iv + 16 * iw; }

double bernstein3(int k, double t);
double bernstein3_deriv(int k, double t);

// Affine combination of mesh vertices, ascending vertex ids, weights sum to one.
struct SparsePoint {
  std::vector<std::pair<int, double>> w;
};

struct CellExtraction {
  std::array<SparsePoint, 64> pts;
};

// Bezier extraction induced by the hex mesh. Interior points average the
// tricubic body stencils of the cells around the containing entity; on the
// boundary the quad mesh supplies surface stencils, sharp edges carry the
// univariate curve stencils, and sharp corners interpolate their vertex.
// Regular interior regions reproduce uniform tricubic B-spline extraction.
class BezierExtractor {
 public:
  BezierExtractor(const HexMesh& mesh, const HexAdjacency& adj, const FeatureSet& features);

  CellExtraction cell(int c) const;

 private:
  SparsePoint body(int c, int iu, int iv, int iw) const;
  SparsePoint body_near(int c, int vertex) const;
  SparsePoint quad_point(int face, int vertex) const;
  bool sharp(int a, int b) const;

  const HexMesh& mesh_;
  const HexAdjacency& adj_;
  const FeatureSet& fs_;
  std::vector<std::vector<int>> vertex_bfaces_;  // boundary faces per vertex, ascending
  std::vector<std::vector<int>> edge_bfaces_;    // boundary faces per edge, ascending
};

struct ElementSample {
  Point3 position;
  Vec3 du, dv, dw;
  double partition = 0.0;
};

// Evaluate the spline restricted to one extracted element at (u, v, w) in the
// unit cube: geometry, parametric derivatives and the basis sum.
ElementSample evaluate_element(const BextDoc& doc, int element, double u, double v, double w);

}  // namespace hexforge
