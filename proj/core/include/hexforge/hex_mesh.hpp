#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hexforge/geometry.hpp"

namespace hexforge {

// Hexahedral cells use the VTK_HEXAHEDRON corner order: corners 0-3 are the
// w=0 quad counter-clockwise seen from below, corners 4-7 the w=1 quad above
// them. All readers normalize into this order.
struct HexMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 8>> cells;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
};

// Reference-cube coordinates of each corner.
inline constexpr int HEX_CORNER_XYZ[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

// Corner index for given reference coordinates: HEX_CORNER_AT[x][y][z].
inline constexpr int HEX_CORNER_AT[2][2][2] = {
    {{0, 4}, {3, 7}}, {{1, 5}, {2, 6}}};

inline constexpr int HEX_EDGES[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

// Face corner cycles wind so the face normal points out of the cell.
inline constexpr int HEX_FACES[6][4] = {
    {0, 3, 2, 1},   // w = 0
    {4, 5, 6, 7},   // w = 1
    {0, 1, 5, 4},   // v = 0
    {2, 3, 7, 6},   // v = 1
    {1, 2, 6, 5},   // u = 1
    {3, 0, 4, 7}};  // u = 0

// Local face slot holding the axis = const side: HEX_FACE_OF_SIDE[axis][side].
inline constexpr int HEX_FACE_OF_SIDE[3][2] = {{5, 4}, {2, 3}, {0, 1}};

// Adjacent corner along the u, v, w axis, and the sign that makes
// det(edge_u, edge_v, edge_w) positive on the reference cube.
inline constexpr int HEX_CORNER_NBR[8][3] = {
    {1, 3, 4}, {0, 2, 5}, {3, 1, 6}, {2, 0, 7},
    {5, 7, 0}, {4, 6, 1}, {7, 5, 2}, {6, 4, 3}};
inline constexpr double HEX_CORNER_SIGN[8] = {1, -1, 1, -1, -1, 1, -1, 1};

struct QuadFace {
  std::array<int, 4> key;    // sorted vertex ids
  std::array<int, 4> cycle;  // corner cycle, outward for cells[0]
  std::array<int, 2> cells = {-1, -1};       // incident cells, ascending
  std::array<int, 2> cell_face = {-1, -1};   // local face slot in each cell
  bool boundary() const { return cells[1] < 0; }
};

struct FaceKeyHash {
  std::size_t operator()(const std::array<int, 4>& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int v : k) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Full incidence of a hex mesh: edges and faces in lexicographic key order,
// incidence lists sorted. Throws NonManifoldError if a face has more than
// two incident cells.
struct HexAdjacency {
  std::vector<std::array<int, 2>> edges;
  std::vector<std::vector<int>> edge_cells;
  std::vector<QuadFace> faces;
  std::vector<std::vector<int>> vertex_cells;
  std::vector<char> vertex_boundary;
  std::vector<int> boundary_faces;                 // indices into faces
  std::vector<std::array<int, 6>> cell_faces;      // face id per local slot
  std::vector<std::array<int, 12>> cell_edges;     // edge id per local slot
  std::unordered_map<std::uint64_t, int> edge_index;
  std::unordered_map<std::array<int, 4>, int, FaceKeyHash> face_index;

  int edge_id(int a, int b) const;
  int face_id(std::array<int, 4> key) const;   // key need not be sorted
};

HexAdjacency build_hex_adjacency(const HexMesh& mesh);

struct BoundaryQuad {
  std::array<int, 4> cycle;  // outward corner cycle
  int cell = -1;
  int cell_face = -1;
};

// Boundary faces with outward winding, in face key order.
std::vector<BoundaryQuad> boundary_surface(const HexMesh& mesh, const HexAdjacency& adj);

enum class ElementClass { Boundary, InteriorRegular, InteriorIrregular };

// Boundary: touches a boundary vertex. InteriorIrregular: some edge is shared
// by a number of cells other than four. InteriorRegular otherwise.
std::vector<ElementClass> classify_elements(const HexMesh& mesh, const HexAdjacency& adj);

} // namespace hexforge
