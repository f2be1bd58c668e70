#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "hexforge/hex_mesh.hpp"
#include "hexforge/tri_mesh.hpp"

namespace fixtures {

// Unit cube [0,1]^3 surface with n x n quads per face, each split into two
// triangles. Vertices are shared across faces, orientation is outward, and
// the mesh is finalized.
hexforge::TriMesh cube_surface(int n);

// Per-triangle labels 0..5 by dominant normal axis in the generator order
// +X, -X, +Y, -Y, +Z, -Z.
std::vector<int> dominant_axis_labels(const hexforge::TriMesh& mesh);

// Displace every vertex by a uniform random offset in [-amplitude, amplitude]^3
// (deterministic for a given seed) and refresh the derived triangle data.
hexforge::TriMesh jittered(hexforge::TriMesh mesh, double amplitude, unsigned seed);

// Structured grid of nx x ny x nz cells with the given spacing, origin at 0.
hexforge::HexMesh grid_hexes(int nx, int ny, int nz, double spacing = 1.0);

// Vertex id inside grid_hexes(nx, ny, nz).
int grid_vertex(int nx, int ny, int nz, int i, int j, int k);

// N hexahedra sharing one straight interior edge (a 2N-gon cross-section
// split into N quads around its center, extruded along z). sectors = 3 gives
// the valence-3 extraordinary edge.
hexforge::HexMesh fan_hexes(int sectors, int layers = 1);

// Three unit cells forming an L in the z = 0 plane.
hexforge::HexMesh l_block();

// Split every cell into 8 at the trilinear midpoints (no smoothing), to grow
// a fixture while keeping its shape.
hexforge::HexMesh split_linear(const hexforge::HexMesh& mesh);

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Directories handed in by the test harness.
std::string data_dir();  // HEXFORGE_TEST_DATA
std::string cli_path();  // HEXFORGE_CLI_PATH

// Run a command line, capture combined stdout+stderr, return the exit code.
int run_command(const std::string& command, std::string* output = nullptr);

}  // namespace fixtures
