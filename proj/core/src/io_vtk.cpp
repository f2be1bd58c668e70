#include "hexforge/io/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hexforge/errors.hpp"

namespace hexforge {

HexMesh read_vtk_hex(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open VTK file: " + path);

  std::string word;
  HexMesh mesh;
  long npoints = -1, ncells = -1;
  // Token scan; the legacy ASCII layout is whitespace separated throughout.
  while (in >> word) {
    if (word == "DATASET") {
      in >> word;
      if (word != "UNSTRUCTURED_GRID")
        throw ParseError(path + ": expected UNSTRUCTURED_GRID, got " + word);
    } else if (word == "POINTS") {
      std::string type;
      if (!(in >> npoints >> type)) throw ParseError(path + ": malformed POINTS header");
      mesh.vertices.resize(npoints);
      for (long i = 0; i < npoints; ++i) {
        if (!(in >> mesh.vertices[i].x >> mesh.vertices[i].y >> mesh.vertices[i].z))
          throw ParseError(path + ": truncated POINTS section");
      }
    } else if (word == "CELLS") {
      long total = 0;
      if (!(in >> ncells >> total)) throw ParseError(path + ": malformed CELLS header");
      mesh.cells.resize(ncells);
      for (long c = 0; c < ncells; ++c) {
        int n = 0;
        if (!(in >> n)) throw ParseError(path + ": truncated CELLS section");
        if (n != 8) throw UnsupportedCellType(path + ": cell with " + std::to_string(n) + " points");
        for (int k = 0; k < 8; ++k) {
          if (!(in >> mesh.cells[c][k])) throw ParseError(path + ": truncated cell record");
        }
      }
    } else if (word == "CELL_TYPES") {
      long n = 0;
      if (!(in >> n)) throw ParseError(path + ": malformed CELL_TYPES header");
      for (long c = 0; c < n; ++c) {
        int t = 0;
        if (!(in >> t)) throw ParseError(path + ": truncated CELL_TYPES section");
        if (t != 12) throw UnsupportedCellType(path + ": cell type " + std::to_string(t));
      }
    }
  }
  if (npoints < 0 || ncells < 0) throw ParseError(path + ": missing POINTS or CELLS section");
  return mesh;
}

void write_vtk_hex(const std::string& path, const HexMesh& mesh, const std::string& scalar_name,
                   const std::vector<double>* cell_scalars) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write VTK file: " + path);
  char buf[128];
  out << "# vtk DataFile Version 2.0\nhex mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point3& p : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out << buf;
  }
  out << "CELLS " << mesh.num_cells() << " " << mesh.num_cells() * 9 << "\n";
  for (const auto& c : mesh.cells) {
    out << "8";
    for (int v : c) out << " " << v;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.num_cells() << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) out << "12\n";
  if (cell_scalars) {
    if (static_cast<int>(cell_scalars->size()) != mesh.num_cells())
      throw ValidationError("cell scalar count does not match cell count");
    out << "CELL_DATA " << mesh.num_cells() << "\n";
    out << "SCALARS " << (scalar_name.empty() ? "value" : scalar_name) << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : *cell_scalars) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", v);
      out << buf;
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

} // namespace hexforge
