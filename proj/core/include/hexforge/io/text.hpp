#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hexforge/geometry.hpp"

namespace hexforge {

// Plain text side files. Values may be separated by whitespace or commas;
// '#' starts a comment. Duplicate rows are dropped with a warning on `warn`.

// Rows "element patch": manual patch reassignment after segmentation.
std::vector<std::pair<int, int>> read_override(const std::string& path, std::ostream* warn = nullptr);

// Rows of vertex indices marking sharp features.
std::vector<int> read_sharp(const std::string& path, std::ostream* warn = nullptr);

struct RefineList {
  int level = 0;
  std::vector<int> cells;  // sorted, unique
};

// One file per refinement level; rows are cell indices of that level's mesh.
RefineList read_refine(const std::string& path, int level, std::ostream* warn = nullptr);

// Corner rows "id x y z". Ids above the surface-vertex range denote
// user-added interior corners.
std::vector<std::pair<long, Point3>> read_corner_file(const std::string& path);
void write_corner_file(const std::string& path, const std::vector<std::pair<long, Point3>>& corners);

// Edge rows "a,b"; face rows "a,b,c,d" (counter-clockwise seen from outside).
std::vector<std::array<long, 2>> read_edge_file(const std::string& path);
void write_edge_file(const std::string& path, const std::vector<std::array<long, 2>>& edges);
std::vector<std::array<long, 4>> read_face_file(const std::string& path);
void write_face_file(const std::string& path, const std::vector<std::array<long, 4>>& faces);

// Rows of 8 corner ids per interior cell, hexahedron corner order.
std::vector<std::array<long, 8>> read_cells_file(const std::string& path);

} // namespace hexforge
