#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hexforge/hex_mesh.hpp"
#include "hexforge/io/bext.hpp"
#include "hexforge/io/text.hpp"
#include "hexforge/quality.hpp"

namespace hexforge {

struct HierarchyLevel {
  HexMesh mesh;          // full global refinement of the previous level
  FeatureSet features;   // propagated, never re-detected
  std::vector<char> in_domain;  // per cell: covered by this level
  std::vector<char> refined;    // per cell: replaced by its children
  std::vector<char> candidate;  // per vertex: support inside the level domain
  std::vector<char> active;     // per vertex: contributes a basis function
  std::vector<std::array<int, 8>> children;                       // per cell, below the last level
  std::vector<std::vector<std::pair<int, double>>> prolongation;  // empty on the last level
  std::vector<long> function_id;  // per vertex, -1 unless active
};

struct LeafCell {
  int level = 0;
  int cell = 0;
};

struct Hierarchy {
  std::vector<HierarchyLevel> levels;
  std::vector<LeafCell> leaves;  // level-major, ascending cell id
  long num_functions = 0;
};

// Build the truncated hierarchy over the hex mesh. Each refinement list names
// cells of its level mesh (children of cell c appear at ids 8c..8c+7 one
// level down); every named cell must lie in the level domain. A function is
// a candidate when its extraction support stays inside the level domain, and
// it is deactivated only when the support is fully refined and every
// prolongation child is itself a candidate one level down, which keeps the
// emitted basis a partition of unity. Function ids run level-major in vertex
// order.
Hierarchy build_hierarchy(const HexMesh& mesh, const FeatureSet& features,
                          const std::vector<RefineList>& refinements);

// Bezier extraction of every leaf cell: nodes are the active functions with
// their level control points, rows the truncated 64-coefficient expansions.
BextDoc extract_bext(const Hierarchy& h);

// Inspection mesh: 27 hexahedra per extracted element through its 4x4x4
// Bezier net (vertices are duplicated between elements).
HexMesh bezier_lattice_mesh(const BextDoc& doc);

}  // namespace hexforge
