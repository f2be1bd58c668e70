#pragma once

#include <array>
#include <string>
#include <vector>

#include "hexforge/tri_mesh.hpp"

namespace hexforge {

// Minimal LS-DYNA keyword (.k) subset: *NODE, *ELEMENT_SHELL, *ELEMENT_SOLID.
// Lines starting with '$' are comments; unknown keyword blocks are skipped.
// Data lines may be space or comma delimited. Solid records may spread the
// eight node ids over a continuation line.
struct KeywordDoc {
  struct Shell {
    long id = 0;
    int part = 0;
    std::array<long, 4> n = {0, 0, 0, 0};
    int count = 0;  // 3 or 4
  };
  struct Solid {
    long id = 0;
    int part = 0;
    std::array<long, 8> n = {0, 0, 0, 0, 0, 0, 0, 0};
  };

  std::vector<long> node_ids;
  std::vector<Point3> node_pos;
  std::vector<Shell> shells;
  std::vector<Solid> solids;
};

KeywordDoc read_keyword(const std::string& path);
void write_keyword(const std::string& path, const KeywordDoc& doc);

// Labeled triangle surface: shell part ids become patch labels; node ids are
// remapped to dense 0-based indices with the original ids retained.
struct TriSurface {
  TriMesh mesh;
  std::vector<int> labels;
  std::vector<long> node_ids;
};

// Throws MixedElementError if the file contains solids or true quads,
// ParseError on malformed records, IoError if unreadable.
TriSurface read_keyword_tri(const std::string& path);

// Node ids are written as dense index + 1 unless original ids are supplied.
void write_keyword_tri(const std::string& path, const TriMesh& mesh,
                       const std::vector<int>& labels,
                       const std::vector<long>* node_ids = nullptr);

} // namespace hexforge
