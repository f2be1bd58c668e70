#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace hexforge {

// Bezier extraction container written for downstream solvers. Each element
// stores the ids of its supporting control points and, per control point,
// one extraction row of 64 Bernstein coefficients (transpose layout: the
// row scales that control point's contribution to the element's 64 tricubic
// Bezier points). See docs/bext_format.md for the concrete grammar.
struct BextElement {
  std::vector<int> nodes;                                    // global control point ids
  std::vector<std::vector<std::pair<int, double>>> rows;     // per node: (column, value), column < 64
};

struct BextDoc {
  std::vector<std::array<double, 4>> points;  // x y z weight
  std::vector<BextElement> elements;
};

inline constexpr int BEXT_SPARSE_ROW_LIMIT = 20;  // rows with fewer non-zeros are written sparse

// Byte-stable output: fixed grammar, 17 significant digits. Throws
// ValidationError on non-finite values or column/node ids out of range.
void write_bext(const std::string& path, const BextDoc& doc);

} // namespace hexforge
