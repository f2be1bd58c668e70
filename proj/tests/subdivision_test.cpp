#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "hexforge/quality.hpp"
#include "hexforge/subdivision.hpp"

namespace hf = hexforge;

namespace {

std::map<int, double> as_map(const std::vector<std::pair<int, double>>& row) {
  std::map<int, double> m;
  for (const auto& [v, w] : row) m[v] += w;
  return m;
}

// Knot-insertion masks of the uniform cubic B-spline, one axis at a time:
// an even (vertex) child blends offsets -1,0,+1 with 1/8, 6/8, 1/8; an odd
// (midpoint) child blends offsets 0,+1 with 1/2, 1/2. The volumetric masks
// of a regular interior region must be their tensor products.
std::map<int, double> tensor_mask(int i, int j, int k, std::array<int, 3> parity) {
  const double even_w[3] = {1.0 / 8.0, 6.0 / 8.0, 1.0 / 8.0};
  const double odd_w[2] = {0.5, 0.5};
  const int base[3] = {i, j, k};
  std::map<int, double> row;
  const int lo[2] = {-1, 0};
  const int hi[2] = {1, 1};
  int off[3];
  for (off[0] = lo[parity[0]]; off[0] <= hi[parity[0]]; ++off[0]) {
    for (off[1] = lo[parity[1]]; off[1] <= hi[parity[1]]; ++off[1]) {
      for (off[2] = lo[parity[2]]; off[2] <= hi[parity[2]]; ++off[2]) {
        double w = 1.0;
        for (int a = 0; a < 3; ++a) {
          w *= parity[a] ? odd_w[off[a]] : even_w[off[a] + 1];
        }
        row[fixtures::grid_vertex(5, 5, 5, base[0] + off[0], base[1] + off[1],
                                  base[2] + off[2])] += w;
      }
    }
  }
  return row;
}

void expect_rows_equal(const std::map<int, double>& got, const std::map<int, double>& want,
                       const char* what) {
  EXPECT_EQ(got.size(), want.size()) << what;
  for (const auto& [v, w] : want) {
    const auto it = got.find(v);
    ASSERT_NE(it, got.end()) << what << ": missing parent " << v;
    EXPECT_NEAR(it->second, w, 1e-14) << what << ": parent " << v;
  }
}

int cell_at(const hf::HexMesh& mesh, double x, double y, double z) {
  for (int c = 0; c < mesh.num_cells(); ++c) {
    hf::Point3 g{0, 0, 0};
    for (int v : mesh.cells[c]) g += mesh.vertices[v];
    g = (1.0 / 8.0) * g;
    if (std::abs(g.x - x) < 1e-9 && std::abs(g.y - y) < 1e-9 && std::abs(g.z - z) < 1e-9) {
      return c;
    }
  }
  ADD_FAILURE() << "no cell centered at " << x << "," << y << "," << z;
  return -1;
}

}  // namespace

TEST(Subdivision, InteriorMasksMatchKnotInsertion) {
  const hf::HexMesh mesh = fixtures::grid_hexes(5, 5, 5);
  const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
  const hf::FeatureSet fs = hf::detect_features(mesh, adj);
  const hf::SubdivisionResult sub = hf::subdivide(mesh, adj, fs);

  const int c = cell_at(mesh, 2.5, 2.5, 2.5);
  ASSERT_GE(c, 0);
  const std::array<int, 8>& kids = sub.children[c];
  const std::array<int, 8>& inner = sub.mesh.cells[kids[0]];  // octant (0,0,0)

  // Vertex child: parent vertices keep their ids.
  const int vertex_child = inner[hf::HEX_CORNER_AT[0][0][0]];
  EXPECT_EQ(vertex_child, fixtures::grid_vertex(5, 5, 5, 2, 2, 2));
  const std::map<int, double> vrow = as_map(sub.prolongation[vertex_child]);
  expect_rows_equal(vrow, tensor_mask(2, 2, 2, {0, 0, 0}), "vertex mask");

  // The four stated spot weights of the vertex mask.
  EXPECT_NEAR(vrow.at(fixtures::grid_vertex(5, 5, 5, 2, 2, 2)), 27.0 / 64.0, 1e-15);
  EXPECT_NEAR(vrow.at(fixtures::grid_vertex(5, 5, 5, 3, 2, 2)), 9.0 / 128.0, 1e-15);
  EXPECT_NEAR(vrow.at(fixtures::grid_vertex(5, 5, 5, 3, 3, 2)), 3.0 / 256.0, 1e-15);
  EXPECT_NEAR(vrow.at(fixtures::grid_vertex(5, 5, 5, 3, 3, 3)), 1.0 / 512.0, 1e-15);

  // Edge child along +x, face child of the w=0 face, body child.
  const int edge_child = inner[hf::HEX_CORNER_AT[1][0][0]];
  expect_rows_equal(as_map(sub.prolongation[edge_child]), tensor_mask(2, 2, 2, {1, 0, 0}),
                    "edge mask");
  const int face_child = inner[hf::HEX_CORNER_AT[1][1][0]];
  expect_rows_equal(as_map(sub.prolongation[face_child]), tensor_mask(2, 2, 2, {1, 1, 0}),
                    "face mask");
  const int body_child = inner[hf::HEX_CORNER_AT[1][1][1]];
  expect_rows_equal(as_map(sub.prolongation[body_child]), tensor_mask(2, 2, 2, {1, 1, 1}),
                    "body mask");
}

TEST(Subdivision, SharpCubeBecomesHalfSpacingLattice) {
  const hf::HexMesh mesh = fixtures::grid_hexes(1, 1, 1);
  const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
  const hf::FeatureSet fs = hf::detect_features(mesh, adj);
  const hf::SubdivisionResult sub = hf::subdivide(mesh, adj, fs);

  EXPECT_EQ(sub.parent_vertices, 8);
  ASSERT_EQ(sub.mesh.num_vertices(), 27);
  ASSERT_EQ(sub.mesh.num_cells(), 8);
  ASSERT_EQ(sub.children.size(), 1u);
  for (int m = 0; m < 8; ++m) EXPECT_EQ(sub.children[0][m], m);

  // Feature corners interpolate, crease midpoints are exact midpoints, face
  // and body children are centroids: the child lattice is the half-spacing
  // grid on the same cube.
  std::set<std::array<int, 3>> lattice;
  for (const hf::Point3& p : sub.mesh.vertices) {
    for (double coord : {p.x, p.y, p.z}) {
      const double snapped = std::round(coord * 2.0) / 2.0;
      EXPECT_NEAR(coord, snapped, 1e-12);
    }
    lattice.insert({int(std::lround(p.x * 2)), int(std::lround(p.y * 2)),
                    int(std::lround(p.z * 2))});
  }
  EXPECT_EQ(lattice.size(), 27u);

  // Octant ordering: the child in octant (a,b,c) keeps the parent corner
  // vertex at its own (a,b,c) corner.
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int cc = 0; cc < 2; ++cc) {
        const int child = sub.children[0][a + 2 * b + 4 * cc];
        EXPECT_EQ(sub.mesh.cells[child][hf::HEX_CORNER_AT[a][b][cc]],
                  mesh.cells[0][hf::HEX_CORNER_AT[a][b][cc]]);
      }
    }
  }

  // Prolongation spot checks: corner, crease midpoint, face centroid, body.
  for (int v = 0; v < 8; ++v) {
    const std::map<int, double> row = as_map(sub.prolongation[v]);
    ASSERT_EQ(row.size(), 1u);
    EXPECT_DOUBLE_EQ(row.at(v), 1.0);
  }
  int creases = 0, faces = 0, bodies = 0;
  for (int v = 8; v < 27; ++v) {
    const std::map<int, double> row = as_map(sub.prolongation[v]);
    if (row.size() == 2) {
      ++creases;
      for (const auto& [p, w] : row) {
        EXPECT_LT(p, 8);
        EXPECT_DOUBLE_EQ(w, 0.5);
      }
    } else if (row.size() == 4) {
      ++faces;
      for (const auto& [p, w] : row) {
        EXPECT_LT(p, 8);
        EXPECT_DOUBLE_EQ(w, 0.25);
      }
    } else {
      ++bodies;
      EXPECT_EQ(row.size(), 8u);
      for (const auto& [p, w] : row) {
        EXPECT_LT(p, 8);
        EXPECT_DOUBLE_EQ(w, 0.125);
      }
    }
  }
  EXPECT_EQ(creases, 12);
  EXPECT_EQ(faces, 6);
  EXPECT_EQ(bodies, 1);
}

TEST(Subdivision, ChildCellIdsAreBlockedByParent) {
  const hf::HexMesh mesh = fixtures::grid_hexes(2, 2, 2);
  const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
  const hf::FeatureSet fs = hf::detect_features(mesh, adj);
  const hf::SubdivisionResult sub = hf::subdivide(mesh, adj, fs);

  ASSERT_EQ(sub.children.size(), 8u);
  for (int c = 0; c < 8; ++c) {
    for (int m = 0; m < 8; ++m) EXPECT_EQ(sub.children[c][m], 8 * c + m);
  }
  EXPECT_EQ(sub.mesh.num_cells(), 64);
  EXPECT_EQ(sub.mesh.num_vertices(), 27 + 54 + 36 + 8);

  // A sharp-rimmed uniform grid refines onto the uniform half-spacing grid,
  // so quality stays ideal.
  EXPECT_GT(hf::mesh_quality(sub.mesh).min_sj, 0.99);
}

TEST(Subdivision, ProlongationRowsAreAffineAndSorted) {
  const hf::HexMesh meshes[] = {fixtures::l_block(), fixtures::fan_hexes(3)};
  for (const hf::HexMesh& mesh : meshes) {
    const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
    const hf::FeatureSet fs = hf::detect_features(mesh, adj);
    const hf::SubdivisionResult sub = hf::subdivide(mesh, adj, fs);
    ASSERT_EQ(sub.prolongation.size(), static_cast<std::size_t>(sub.mesh.num_vertices()));
    for (const auto& row : sub.prolongation) {
      ASSERT_FALSE(row.empty());
      double sum = 0.0;
      int prev = -1;
      for (const auto& [p, w] : row) {
        EXPECT_GT(p, prev) << "parent ids must ascend";
        prev = p;
        ASSERT_GE(p, 0);
        ASSERT_LT(p, sub.parent_vertices);
        sum += w;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    EXPECT_GT(hf::mesh_quality(sub.mesh).min_sj, 0.0);
  }
}

TEST(Subdivision, FeaturesPropagateWithoutRedetection) {
  const hf::HexMesh mesh = fixtures::l_block();
  const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
  hf::FeatureSet fs = hf::detect_features(mesh, adj);
  ASSERT_FALSE(fs.sharp_edges.empty());
  const int pinned_vertex = 0;
  fs.pinned[pinned_vertex] = 1;

  const hf::SubdivisionResult sub = hf::subdivide(mesh, adj, fs);

  EXPECT_EQ(sub.features.sharp_edges.size(), 2 * fs.sharp_edges.size());
  long pinned_count = 0;
  for (char p : sub.features.pinned) pinned_count += p;
  EXPECT_EQ(pinned_count, 1);
  EXPECT_TRUE(sub.features.pinned[pinned_vertex]);

  // Each parent sharp edge (a, b) splits at its midpoint child m into the
  // child sharp edges (a, m) and (m, b).
  std::set<std::array<int, 2>> child_sharp(sub.features.sharp_edges.begin(),
                                           sub.features.sharp_edges.end());
  for (const std::array<int, 2>& e : fs.sharp_edges) {
    int mid = -1;
    for (int v = static_cast<int>(sub.parent_vertices); v < sub.mesh.num_vertices(); ++v) {
      const std::map<int, double> row = as_map(sub.prolongation[v]);
      if (row.size() == 2 && row.count(e[0]) && row.count(e[1])) {
        mid = v;
        break;
      }
    }
    ASSERT_GE(mid, 0) << "no midpoint child for sharp edge " << e[0] << "-" << e[1];
    EXPECT_TRUE(child_sharp.count({std::min(e[0], mid), std::max(e[0], mid)}));
    EXPECT_TRUE(child_sharp.count({std::min(e[1], mid), std::max(e[1], mid)}));
  }
}
