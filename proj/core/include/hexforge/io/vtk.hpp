#pragma once

#include <string>
#include <vector>

#include "hexforge/hex_mesh.hpp"

namespace hexforge {

// Legacy ASCII VTK unstructured grid, cell type 12 (hexahedron) only.
// Throws UnsupportedCellType for any other cell type.
HexMesh read_vtk_hex(const std::string& path);

// Optional per-cell scalar field written as CELL_DATA.
void write_vtk_hex(const std::string& path, const HexMesh& mesh,
                   const std::string& scalar_name = "",
                   const std::vector<double>* cell_scalars = nullptr);

} // namespace hexforge
