#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hexforge/tri_mesh.hpp"

namespace hexforge {

// Normal-space generators, fixed order +X, -X, +Y, -Y, +Z, -Z.
struct GeneratorSet {
  std::array<Vec3, 6> dirs;
  static GeneratorSet axes();
};

// Opposite generator of an orientation id.
inline int opposite_orientation(int o) { return o ^ 1; }

struct Segmentation {
  std::vector<int> labels;           // per-triangle patch id
  GeneratorSet generators;
  std::vector<double> energy_trace;  // energy after each assignment step
  int iterations = 0;
  bool converged = false;
};

struct CvtOptions {
  int max_iterations = 100;
  double rel_tolerance = 1e-6;
  // Harmonic boundary enhancement weight; 0 gives the classical iteration.
  // The distance of triangle i to generator j adds omega times the mean
  // squared normal deviation of i's edge neighbors.
  double omega = 0.0;
};

// Centroidal Voronoi tessellation of the Gauss map onto six generators.
// Assignment minimizes the (enhanced) distance, ties to the lowest generator;
// the update step is the exact minimizer of the energy for fixed labels, so
// the recorded energy trace never increases. Empty regions keep their
// previous generator and emit a warning.
Segmentation segment_cvt(const TriMesh& mesh, const TriAdjacency& adj,
                         const CvtOptions& opts, std::ostream* warn = nullptr);

double segmentation_energy(const TriMesh& mesh, const TriAdjacency& adj,
                           const std::vector<int>& labels, const GeneratorSet& gen,
                           double omega);

// Applies "element patch" rows. Throws IndexOutOfRange for bad element ids.
void apply_overrides(Segmentation& seg, const std::vector<std::pair<int, int>>& rows);

// Patch layout rules for a polycube boundary:
//   1. patches of opposite orientation may not share a boundary curve,
//   2. geometric corners of the model must touch at least three patches,
//   3. every patch boundary is one loop with exactly four monotone sides.
struct ConstraintReport {
  std::vector<std::array<int, 2>> opposite_adjacent;  // violating patch pairs
  std::vector<int> weak_corners;                      // vertices touching <= 2 patches
  std::vector<int> bad_boundary_patches;              // patch labels
  bool ok() const {
    return opposite_adjacent.empty() && weak_corners.empty() && bad_boundary_patches.empty();
  }
};

ConstraintReport validate_polycube_constraints(const TriMesh& mesh, const TriAdjacency& adj,
                                               const std::vector<int>& labels,
                                               double sharp_dot_tol = 0.8);

struct PatchInfo {
  int label = 0;
  int triangles = 0;
  double area = 0.0;
  double boundary_length = 0.0;
  int islands = 1;                 // connected components of the patch
  int single_triangle_islands = 0;
  std::vector<int> island_seeds;   // lowest triangle id of each non-main component
};

struct PatchReport {
  std::vector<PatchInfo> patches;  // ascending label order
  int single_triangle_islands = 0;
};

PatchReport patch_report(const TriMesh& mesh, const TriAdjacency& adj,
                         const std::vector<int>& labels);

} // namespace hexforge
