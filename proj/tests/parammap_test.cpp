#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "hexforge/errors.hpp"
#include "hexforge/parammap.hpp"
#include "hexforge/polycube.hpp"
#include "hexforge/quality.hpp"

namespace hf = hexforge;

namespace {

struct MapFixture {
  hf::TriMesh mesh;
  hf::TriAdjacency adj;
  std::vector<int> labels;
  std::vector<hf::PatchQuad> quads;
  hf::PolycubeStructure pc;
};

int vertex_at(const hf::TriMesh& mesh, double x, double y, double z) {
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (hf::dist(mesh.vertices[v], {x, y, z}) < 1e-9) return v;
  }
  return -1;
}

// Unit cube surface with the single-cell polycube structure.
MapFixture cube_setup(int n, double jitter_amp = 0.0, unsigned seed = 1) {
  MapFixture s;
  s.mesh = fixtures::cube_surface(n);
  std::array<long, 8> row{};
  for (int k = 0; k < 8; ++k) {
    row[k] = vertex_at(s.mesh, hf::HEX_CORNER_XYZ[k][0], hf::HEX_CORNER_XYZ[k][1],
                       hf::HEX_CORNER_XYZ[k][2]);
  }
  if (jitter_amp > 0.0) {
    // Keep the polycube corner coordinates exact: jitter, then snap corners.
    hf::TriMesh noisy = fixtures::jittered(s.mesh, jitter_amp, seed);
    for (int k = 0; k < 8; ++k) {
      noisy.vertices[row[k]] = {double(hf::HEX_CORNER_XYZ[k][0]),
                                double(hf::HEX_CORNER_XYZ[k][1]),
                                double(hf::HEX_CORNER_XYZ[k][2])};
    }
    noisy.finalize();
    s.mesh = noisy;
  }
  s.adj = hf::build_tri_adjacency(s.mesh);
  s.labels = fixtures::dominant_axis_labels(s.mesh);
  const std::vector<int> corners = hf::detect_corners(s.mesh, s.adj, s.labels);
  s.quads = hf::build_boundary_quads(s.mesh, s.adj, s.labels, corners);
  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int v : corners) corner_list.push_back({v, s.mesh.vertices[v]});
  s.pc = hf::assemble_polycube(corner_list, s.quads, {row});
  return s;
}

// Box [0,1]^2 x [0,2] split into two stacked unit cells.
MapFixture two_cell_setup() {
  MapFixture s;
  s.mesh = fixtures::cube_surface(2);
  for (auto& p : s.mesh.vertices) p.z *= 2.0;
  s.mesh.finalize();
  s.adj = hf::build_tri_adjacency(s.mesh);
  s.labels = fixtures::dominant_axis_labels(s.mesh);
  const std::vector<int> corners = hf::detect_corners(s.mesh, s.adj, s.labels);
  s.quads = hf::build_boundary_quads(s.mesh, s.adj, s.labels, corners);
  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int v : corners) corner_list.push_back({v, s.mesh.vertices[v]});
  for (double x : {0.0, 1.0}) {
    for (double y : {0.0, 1.0}) {
      const int v = vertex_at(s.mesh, x, y, 1.0);
      corner_list.push_back({v, s.mesh.vertices[v]});
    }
  }
  auto cid = [&](double x, double y, double z) {
    return static_cast<long>(vertex_at(s.mesh, x, y, z));
  };
  std::vector<std::array<long, 8>> cells;
  for (double z0 : {0.0, 1.0}) {
    cells.push_back({cid(0, 0, z0), cid(1, 0, z0), cid(1, 1, z0), cid(0, 1, z0),
                     cid(0, 0, z0 + 1), cid(1, 0, z0 + 1), cid(1, 1, z0 + 1),
                     cid(0, 1, z0 + 1)});
  }
  s.pc = hf::assemble_polycube(corner_list, s.quads, cells);
  return s;
}

double surface_distance(const hf::TriMesh& mesh, const hf::Point3& p) {
  // Distance to the nearest triangle, brute force over vertices and planes.
  double best = 1e300;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const hf::Point3& a = mesh.vertices[mesh.triangles[t][0]];
    const hf::Point3& b = mesh.vertices[mesh.triangles[t][1]];
    const hf::Point3& c = mesh.vertices[mesh.triangles[t][2]];
    // Clamped barycentric projection.
    const hf::Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = hf::dot(ab, ap), d2 = hf::dot(ac, ap);
    const double a11 = hf::dot(ab, ab), a12 = hf::dot(ab, ac), a22 = hf::dot(ac, ac);
    const double det = a11 * a22 - a12 * a12;
    double u = det > 0 ? (a22 * d1 - a12 * d2) / det : 0.0;
    double v = det > 0 ? (a11 * d2 - a12 * d1) / det : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    if (u + v > 1.0) {
      const double s = (u + v - 1.0) / 2.0;
      u -= s;
      v -= s;
    }
    best = std::min(best, hf::dist(p, a + ab * u + ac * v));
  }
  return best;
}

}  // namespace

TEST(Harmonic, FlatPatchReproducesLinearMap) {
  const MapFixture s = cube_setup(4);
  for (const auto& quad : s.quads) {
    const hf::PatchParam pp = hf::harmonic_parameterize(s.mesh, s.adj, s.labels, quad);
    ASSERT_EQ(pp.verts.size(), pp.uv.size());
    // Corners land on the unit square corners in order.
    const double sq[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (int k = 0; k < 4; ++k) {
      const int local = pp.local(quad.corners[k]);
      ASSERT_GE(local, 0);
      EXPECT_NEAR(pp.uv[local][0], sq[k][0], 1e-12);
      EXPECT_NEAR(pp.uv[local][1], sq[k][1], 1e-12);
    }
    // On a flat uniformly meshed face the cotangent solve is exact for the
    // linear map, so pulling every (u, v) back must land on the vertex.
    for (size_t k = 0; k < pp.verts.size(); ++k) {
      const hf::Point3 back = pp.inverse_map(s.mesh, pp.uv[k][0], pp.uv[k][1]);
      EXPECT_NEAR(hf::dist(back, s.mesh.vertices[pp.verts[k]]), 0.0, 1e-9);
    }
  }
}

TEST(Harmonic, NoFlippedTrianglesOnNoisyCube) {
  const MapFixture s = cube_setup(6, 0.01, 11);
  for (const auto& quad : s.quads) {
    const hf::PatchParam pp = hf::harmonic_parameterize(s.mesh, s.adj, s.labels, quad);
    for (int t : pp.tris) {
      const auto& tri = s.mesh.triangles[t];
      const auto& a = pp.uv[pp.local(tri[0])];
      const auto& b = pp.uv[pp.local(tri[1])];
      const auto& c = pp.uv[pp.local(tri[2])];
      const double area2 =
          (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
      EXPECT_GT(area2, 0.0) << "triangle " << t;
    }
  }
}

TEST(Map, SingleCubeCountsAcrossLevels) {
  const MapFixture s = cube_setup(4);
  const struct {
    int subdivisions;
    int vertices;
    int cells;
  } expect[] = {{0, 8, 1}, {1, 27, 8}, {2, 125, 64}};
  for (const auto& e : expect) {
    const hf::MapResult mr =
        hf::map_polycube(s.mesh, s.adj, s.labels, s.quads, s.pc, e.subdivisions);
    EXPECT_EQ(mr.mesh.num_vertices(), e.vertices) << "s=" << e.subdivisions;
    EXPECT_EQ(mr.mesh.num_cells(), e.cells) << "s=" << e.subdivisions;
    EXPECT_EQ(mr.segments, 1 << e.subdivisions);

    const hf::QualityReport q = hf::mesh_quality(mr.mesh);
    EXPECT_GT(q.min_sj, 0.99) << "unit cube maps to a uniform grid";
  }
}

TEST(Map, TwoStackedCellsCounts) {
  const MapFixture s = two_cell_setup();
  const hf::MapResult mr = hf::map_polycube(s.mesh, s.adj, s.labels, s.quads, s.pc, 1);
  EXPECT_EQ(mr.mesh.num_vertices(), 45);
  EXPECT_EQ(mr.mesh.num_cells(), 16);

  // Conforming: no face with more than two incident cells, interior faces
  // shared exactly twice.
  const hf::HexAdjacency adj = hf::build_hex_adjacency(mr.mesh);
  EXPECT_EQ(adj.boundary_faces.size(), 2u * 4u + 4u * 8u);
  const hf::QualityReport q = hf::mesh_quality(mr.mesh);
  EXPECT_GT(q.min_sj, 0.99);
}

TEST(Map, BoundaryVerticesLieOnSurface) {
  const MapFixture s = cube_setup(6, 0.008, 3);
  const hf::MapResult mr = hf::map_polycube(s.mesh, s.adj, s.labels, s.quads, s.pc, 2);
  const hf::HexAdjacency adj = hf::build_hex_adjacency(mr.mesh);
  for (int v = 0; v < mr.mesh.num_vertices(); ++v) {
    if (!adj.vertex_boundary[v]) continue;
    EXPECT_LT(surface_distance(s.mesh, mr.mesh.vertices[v]), 1e-6);
  }
  const hf::QualityReport q = hf::mesh_quality(mr.mesh);
  EXPECT_GT(q.min_sj, 0.5) << "mildly noisy cube still maps to a sound grid";
}

TEST(Map, ComplexEntityCounts) {
  const MapFixture s = cube_setup(3);
  const hf::MapResult mr = hf::map_polycube(s.mesh, s.adj, s.labels, s.quads, s.pc, 2);
  EXPECT_EQ(mr.corner_count, 8);
  EXPECT_EQ(mr.edge_count, 12);
  EXPECT_EQ(mr.face_count, 6);
  EXPECT_EQ(mr.cell_count, 1);
  // Vertex ownership by entity dimension: corners + edge interiors + face
  // interiors + cell interiors account for every mesh vertex exactly once.
  const int seg = mr.segments;
  const long by_entity = mr.corner_count + mr.edge_count * (seg - 1) +
                         mr.face_count * (seg - 1) * (seg - 1) +
                         mr.cell_count * (seg - 1) * (seg - 1) * (seg - 1);
  EXPECT_EQ(by_entity, mr.mesh.num_vertices());
}

TEST(Map, RequiresCells) {
  MapFixture s = cube_setup(2);
  hf::PolycubeStructure boundary_only = s.pc;
  boundary_only.cells.clear();
  EXPECT_THROW(hf::map_polycube(s.mesh, s.adj, s.labels, s.quads, boundary_only, 1),
               hf::Error);
}
