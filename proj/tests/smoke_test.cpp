#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "hexforge/hex_mesh.hpp"
#include "hexforge/quality.hpp"
#include "hexforge/tri_mesh.hpp"

namespace hf = hexforge;

TEST(Smoke, CubeSurfaceIsClosedAndOutward) {
  hf::TriMesh mesh = fixtures::cube_surface(4);
  EXPECT_EQ(mesh.num_triangles(), 12 * 16);
  hf::TriAdjacency adj = hf::build_tri_adjacency(mesh);
  EXPECT_TRUE(hf::is_closed_surface(mesh, adj));
  EXPECT_TRUE(hf::is_consistently_oriented(mesh, adj));
  EXPECT_NEAR(hf::signed_volume(mesh), 1.0, 1e-12);
}

TEST(Smoke, GridHexesQuality) {
  hf::HexMesh mesh = fixtures::grid_hexes(2, 2, 2);
  EXPECT_EQ(mesh.num_vertices(), 27);
  EXPECT_EQ(mesh.num_cells(), 8);
  hf::QualityReport q = hf::mesh_quality(mesh);
  EXPECT_NEAR(q.min_sj, 1.0, 1e-14);
}
