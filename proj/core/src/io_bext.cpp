#include "hexforge/io/bext.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hexforge/errors.hpp"

namespace hexforge {

void write_bext(const std::string& path, const BextDoc& doc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write BEXT file: " + path);
  char buf[128];

  out << "BEXT 1.0\n";
  out << "NODES " << doc.points.size() << "\n";
  for (const auto& p : doc.points) {
    for (double v : p)
      if (!std::isfinite(v)) throw ValidationError("non-finite control point in BEXT output");
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", p[0], p[1], p[2], p[3]);
    out << buf;
  }
  out << "ELEMENTS " << doc.elements.size() << "\n";
  for (std::size_t e = 0; e < doc.elements.size(); ++e) {
    const BextElement& el = doc.elements[e];
    if (el.rows.size() != el.nodes.size())
      throw ValidationError("BEXT element row count does not match node count");
    out << "ELEM " << e << " NODES " << el.nodes.size() << "\n";
    for (std::size_t k = 0; k < el.nodes.size(); ++k) {
      if (el.nodes[k] < 0 || el.nodes[k] >= static_cast<int>(doc.points.size()))
        throw ValidationError("BEXT node id out of range");
      out << el.nodes[k] << (k + 1 < el.nodes.size() ? ' ' : '\n');
    }
    if (el.nodes.empty()) out << "\n";
    out << "MATRIX " << el.rows.size() << " 64\n";
    for (const auto& row : el.rows) {
      for (const auto& [col, val] : row) {
        if (col < 0 || col >= 64) throw ValidationError("BEXT column out of range");
        if (!std::isfinite(val)) throw ValidationError("non-finite extraction value");
      }
      if (static_cast<int>(row.size()) < BEXT_SPARSE_ROW_LIMIT) {
        out << "s " << row.size();
        for (const auto& [col, val] : row) {
          std::snprintf(buf, sizeof(buf), " %d %.17g", col, val);
          out << buf;
        }
        out << "\n";
      } else {
        std::array<double, 64> dense{};
        for (const auto& [col, val] : row) dense[col] = val;
        out << "d";
        for (double v : dense) {
          std::snprintf(buf, sizeof(buf), " %.17g", v);
          out << buf;
        }
        out << "\n";
      }
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

} // namespace hexforge
