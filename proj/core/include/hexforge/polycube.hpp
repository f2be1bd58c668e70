#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "hexforge/hex_mesh.hpp"
#include "hexforge/segmentation.hpp"
#include "hexforge/tri_mesh.hpp"

namespace hexforge {

// Vertices where three or more patches meet, ascending.
std::vector<int> detect_corners(const TriMesh& mesh, const TriAdjacency& adj,
                                const std::vector<int>& labels);

// One quad per patch: its four corners in counter-clockwise order seen from
// outside, rotated so the lowest corner id comes first, plus the boundary
// vertex path of each side (side k runs corners[k] -> corners[(k+1)%4]).
struct PatchQuad {
  int patch = 0;
  std::array<int, 4> corners = {-1, -1, -1, -1};
  std::array<std::vector<int>, 4> side_paths;
};

// Throws PatchCornerCount when a patch boundary does not carry exactly four
// corners, ValidationError when it is not a single closed loop.
std::vector<PatchQuad> build_boundary_quads(const TriMesh& mesh, const TriAdjacency& adj,
                                            const std::vector<int>& labels,
                                            const std::vector<int>& corners);

// Polycube cell complex. Corner ids of surface corners are triangle-mesh
// vertex indices; user-added interior corners use synthetic ids above that
// range. Quads and cells index into `corners`; cells follow the hexahedron
// corner order and are normalized to positive volume.
struct PolycubeCorner {
  long id = 0;
  Point3 pos;
  bool interior = false;
};

struct PolycubeStructure {
  std::vector<PolycubeCorner> corners;        // ascending id
  std::vector<std::array<int, 4>> quads;      // corner indices, outward cycles
  std::vector<int> quad_patch;                // parallel to quads
  std::vector<std::array<int, 8>> cells;      // corner indices
  std::vector<std::array<int, 2>> edges;      // unique quad sides, a < b, sorted

  int corner_index(long id) const;            // -1 if absent
};

// Combines the corner list (surface corners plus user-added interior ones),
// the patch quads and optional interior cells. A patch quad is a lattice
// rectangle; when cells are present it must be tiled exactly by boundary
// faces of the cell complex. Throws IndexOutOfRange for unknown corner ids,
// NonConformal if a cell face is shared by more than two cells,
// UncoveredBoundary if some boundary face falls outside every quad or some
// quad is not fully tiled.
PolycubeStructure assemble_polycube(const std::vector<std::pair<long, Point3>>& corner_list,
                                    const std::vector<PatchQuad>& quads,
                                    const std::vector<std::array<long, 8>>& cell_rows);

// Quad index covering each face of the complex, -1 for interior faces and
// for boundary faces no quad rectangle contains. A face belongs to a quad
// when it lies in the quad plane with the same outward normal and its
// rectangle is inside the quad rectangle; ties go to the lowest patch label.
std::vector<int> associate_boundary_faces(const PolycubeStructure& pc, const HexAdjacency& hx);

struct PolycubeValidation {
  std::vector<int> degenerate_cells;                 // repeated corners inside a cell
  std::vector<std::array<int, 4>> unmatched_boundary;  // boundary faces outside every quad
  std::vector<int> uncovered_quads;                  // quads not tiled by boundary faces
  bool connected = true;
  bool ok() const {
    return degenerate_cells.empty() && unmatched_boundary.empty() && uncovered_quads.empty() &&
           connected;
  }
};

PolycubeValidation validate_polycube(const PolycubeStructure& pc);

// Keyword round trip: corners as *NODE (id + 1), quads as *ELEMENT_SHELL with
// the patch label as part id, cells as *ELEMENT_SOLID.
void write_structure_keyword(const std::string& path, const PolycubeStructure& pc);
PolycubeStructure read_structure_keyword(const std::string& path);

} // namespace hexforge
