#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "hexforge/errors.hpp"
#include "hexforge/polycube.hpp"
#include "hexforge/segmentation.hpp"

namespace hf = hexforge;

namespace {

struct Labeled {
  hf::TriMesh mesh;
  hf::TriAdjacency adj;
  std::vector<int> labels;
};

Labeled labeled_cube(int n) {
  Labeled c;
  c.mesh = fixtures::cube_surface(n);
  c.adj = hf::build_tri_adjacency(c.mesh);
  c.labels = fixtures::dominant_axis_labels(c.mesh);
  return c;
}

int vertex_at(const hf::TriMesh& mesh, double x, double y, double z) {
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (hf::dist(mesh.vertices[v], {x, y, z}) < 1e-9) return v;
  }
  return -1;
}

// Hexagonal prism: six rectangular side facets, triangulated caps.
Labeled hex_prism() {
  Labeled p;
  const int n = 6;
  for (int ring = 0; ring < 2; ++ring) {
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * 3.14159265358979323846 * k / n;
      p.mesh.vertices.push_back({std::cos(a), std::sin(a), double(ring)});
    }
  }
  const int c0 = 2 * n, c1 = 2 * n + 1;
  p.mesh.vertices.push_back({0, 0, 0});
  p.mesh.vertices.push_back({0, 0, 1});
  auto r0 = [n](int k) { return k % n; };
  auto r1 = [n](int k) { return n + k % n; };
  for (int k = 0; k < n; ++k) {
    p.mesh.triangles.push_back({r0(k), r0(k + 1), r1(k + 1)});
    p.mesh.triangles.push_back({r0(k), r1(k + 1), r1(k)});
    p.labels.push_back(6);
    p.labels.push_back(6);
    p.mesh.triangles.push_back({c0, r0(k + 1), r0(k)});
    p.labels.push_back(5);
    p.mesh.triangles.push_back({c1, r1(k), r1(k + 1)});
    p.labels.push_back(4);
  }
  p.mesh.finalize();
  p.adj = hf::build_tri_adjacency(p.mesh);
  return p;
}

}  // namespace

TEST(Polycube, DetectCornersFindsCubeCorners) {
  const Labeled c = labeled_cube(3);
  const std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  ASSERT_EQ(corners.size(), 8u);
  for (int v : corners) {
    const hf::Point3& p = c.mesh.vertices[v];
    for (int axis = 0; axis < 3; ++axis) {
      EXPECT_TRUE(std::abs(p[axis]) < 1e-12 || std::abs(p[axis] - 1.0) < 1e-12);
    }
  }
  EXPECT_TRUE(std::is_sorted(corners.begin(), corners.end()));
}

TEST(Polycube, BoundaryQuadsWalkCubeEdges) {
  const Labeled c = labeled_cube(3);
  const std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  const std::vector<hf::PatchQuad> quads =
      hf::build_boundary_quads(c.mesh, c.adj, c.labels, corners);
  ASSERT_EQ(quads.size(), 6u);
  for (const auto& q : quads) {
    // Four distinct corners, each a detected corner.
    std::set<int> cs(q.corners.begin(), q.corners.end());
    EXPECT_EQ(cs.size(), 4u);
    for (int v : q.corners) {
      EXPECT_TRUE(std::binary_search(corners.begin(), corners.end(), v));
    }
    EXPECT_EQ(q.corners[0], *std::min_element(q.corners.begin(), q.corners.end()));
    for (int s = 0; s < 4; ++s) {
      const auto& path = q.side_paths[s];
      ASSERT_EQ(path.size(), 4u) << "three segments per cube edge";
      EXPECT_EQ(path.front(), q.corners[s]);
      EXPECT_EQ(path.back(), q.corners[(s + 1) % 4]);
      // Each side hugs one cube edge: two coordinates frozen.
      int frozen = 0;
      for (int axis = 0; axis < 3; ++axis) {
        bool same = true;
        for (int v : path) {
          if (std::abs(c.mesh.vertices[v][axis] - c.mesh.vertices[path[0]][axis]) > 1e-12)
            same = false;
        }
        frozen += same;
      }
      EXPECT_EQ(frozen, 2);
    }
  }
}

TEST(Polycube, BadCornerCountThrows) {
  const Labeled c = labeled_cube(2);
  std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  corners.pop_back();  // drop one corner: some patch now has three
  EXPECT_THROW(hf::build_boundary_quads(c.mesh, c.adj, c.labels, corners),
               hf::PatchCornerCount);
}

TEST(Polycube, AssembleBoundaryOnlyStructure) {
  // Without a cell file the assembly carries corners and quads alone; this is
  // the surface connectivity a user consumes to author the cells.
  const Labeled c = labeled_cube(2);
  const std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  const auto quads = hf::build_boundary_quads(c.mesh, c.adj, c.labels, corners);
  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int v : corners) corner_list.push_back({v, c.mesh.vertices[v]});
  const hf::PolycubeStructure pc = hf::assemble_polycube(corner_list, quads, {});
  EXPECT_EQ(pc.corners.size(), 8u);
  EXPECT_EQ(pc.quads.size(), 6u);
  EXPECT_TRUE(pc.cells.empty());
  EXPECT_EQ(pc.edges.size(), 12u);
  EXPECT_TRUE(hf::validate_polycube(pc).ok());
}

TEST(Polycube, AssembleSingleCube) {
  const Labeled c = labeled_cube(2);
  const std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  const auto quads = hf::build_boundary_quads(c.mesh, c.adj, c.labels, corners);
  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int v : corners) corner_list.push_back({v, c.mesh.vertices[v]});

  std::array<long, 8> row{};
  for (int k = 0; k < 8; ++k) {
    row[k] = vertex_at(c.mesh, hf::HEX_CORNER_XYZ[k][0], hf::HEX_CORNER_XYZ[k][1],
                       hf::HEX_CORNER_XYZ[k][2]);
    ASSERT_GE(row[k], 0);
  }
  const hf::PolycubeStructure pc = hf::assemble_polycube(corner_list, quads, {row});
  EXPECT_EQ(pc.corners.size(), 8u);
  EXPECT_EQ(pc.quads.size(), 6u);
  ASSERT_EQ(pc.cells.size(), 1u);
  EXPECT_EQ(pc.edges.size(), 12u);
  const hf::PolycubeValidation val = hf::validate_polycube(pc);
  EXPECT_TRUE(val.ok());

  // The lone cell is the unit cube with positive volume ordering.
  const auto& cell = pc.cells[0];
  std::set<int> distinct(cell.begin(), cell.end());
  EXPECT_EQ(distinct.size(), 8u);
  for (int k = 0; k < 8; ++k) {
    const hf::Point3 expect{double(hf::HEX_CORNER_XYZ[k][0]), double(hf::HEX_CORNER_XYZ[k][1]),
                            double(hf::HEX_CORNER_XYZ[k][2])};
    EXPECT_NEAR(hf::dist(pc.corners[cell[k]].pos, expect), 0.0, 1e-12);
  }
}

TEST(Polycube, AssembleTwoStackedCells) {
  // Box [0,1]^2 x [0,2] as two conforming unit cells sharing the z = 1 face.
  Labeled c = labeled_cube(2);
  for (auto& p : c.mesh.vertices) p.z *= 2.0;
  c.mesh.finalize();
  c.labels = fixtures::dominant_axis_labels(c.mesh);

  const std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  ASSERT_EQ(corners.size(), 8u);
  const auto quads = hf::build_boundary_quads(c.mesh, c.adj, c.labels, corners);

  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int v : corners) corner_list.push_back({v, c.mesh.vertices[v]});
  // The four surface vertices where the shared face meets the sides.
  std::vector<long> mid;
  for (double x : {0.0, 1.0}) {
    for (double y : {0.0, 1.0}) {
      const int v = vertex_at(c.mesh, x, y, 1.0);
      ASSERT_GE(v, 0);
      corner_list.push_back({v, c.mesh.vertices[v]});
      mid.push_back(v);
    }
  }
  auto corner_id = [&](double x, double y, double z) {
    const int v = vertex_at(c.mesh, x, y, z);
    EXPECT_GE(v, 0);
    return static_cast<long>(v);
  };
  std::vector<std::array<long, 8>> cells;
  for (double z0 : {0.0, 1.0}) {
    cells.push_back({corner_id(0, 0, z0), corner_id(1, 0, z0), corner_id(1, 1, z0),
                     corner_id(0, 1, z0), corner_id(0, 0, z0 + 1), corner_id(1, 0, z0 + 1),
                     corner_id(1, 1, z0 + 1), corner_id(0, 1, z0 + 1)});
  }

  const hf::PolycubeStructure pc = hf::assemble_polycube(corner_list, quads, cells);
  EXPECT_EQ(pc.corners.size(), 12u);
  EXPECT_EQ(pc.cells.size(), 2u);
  EXPECT_TRUE(hf::validate_polycube(pc).ok());

  // Dropping the upper cell leaves the side quads half tiled.
  cells.pop_back();
  EXPECT_THROW(hf::assemble_polycube(corner_list, quads, cells), hf::UncoveredBoundary);
}

TEST(Polycube, AssembleRejectsUnknownCorner) {
  const Labeled c = labeled_cube(2);
  const std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  const auto quads = hf::build_boundary_quads(c.mesh, c.adj, c.labels, corners);
  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int v : corners) corner_list.push_back({v, c.mesh.vertices[v]});
  std::vector<std::array<long, 8>> cells = {{corner_list[0].first, 999999, 1, 2, 3, 4, 5, 6}};
  EXPECT_THROW(hf::assemble_polycube(corner_list, quads, cells), hf::IndexOutOfRange);
}

TEST(Polycube, StructureKeywordRoundTrip) {
  fixtures::TempDir tmp("structure");
  const Labeled c = labeled_cube(2);
  const std::vector<int> corners = hf::detect_corners(c.mesh, c.adj, c.labels);
  const auto quads = hf::build_boundary_quads(c.mesh, c.adj, c.labels, corners);
  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int v : corners) corner_list.push_back({v, c.mesh.vertices[v]});
  const hf::PolycubeStructure pc = hf::assemble_polycube(corner_list, quads, {});

  const std::string path = tmp.file("structure.k");
  hf::write_structure_keyword(path, pc);
  const hf::PolycubeStructure back = hf::read_structure_keyword(path);
  ASSERT_EQ(back.corners.size(), pc.corners.size());
  for (size_t k = 0; k < pc.corners.size(); ++k) {
    EXPECT_EQ(back.corners[k].id, pc.corners[k].id);
    EXPECT_NEAR(hf::dist(back.corners[k].pos, pc.corners[k].pos), 0.0, 1e-12);
  }
  EXPECT_EQ(back.quads, pc.quads);
  EXPECT_EQ(back.quad_patch, pc.quad_patch);
  EXPECT_EQ(back.cells, pc.cells);
}

TEST(Constraints, CleanCubeHasNoViolations) {
  const Labeled c = labeled_cube(3);
  const hf::ConstraintReport rep = hf::validate_polycube_constraints(c.mesh, c.adj, c.labels);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.opposite_adjacent.empty());
  EXPECT_TRUE(rep.weak_corners.empty());
  EXPECT_TRUE(rep.bad_boundary_patches.empty());
}

TEST(Constraints, OppositePatchesSharingBoundaryDetected) {
  Labeled c = labeled_cube(3);
  // Swallow +Y into +X: the enlarged +X patch now borders -X across the
  // (-X, +Y) cube edge, an opposite-orientation adjacency.
  for (auto& l : c.labels) {
    if (l == 2) l = 0;
  }
  const hf::ConstraintReport rep = hf::validate_polycube_constraints(c.mesh, c.adj, c.labels);
  EXPECT_FALSE(rep.ok());
  const bool found = std::find(rep.opposite_adjacent.begin(), rep.opposite_adjacent.end(),
                               (std::array<int, 2>{0, 1})) != rep.opposite_adjacent.end();
  EXPECT_TRUE(found);
}

TEST(Constraints, WeakCornerDetected) {
  Labeled c = labeled_cube(3);
  // Merge +Z and +Y into one synthetic patch id: no opposite id exists, but
  // the two corners on the (+Y, +Z) cube edge now touch only two patches.
  for (auto& l : c.labels) {
    if (l == 2 || l == 4) l = 6;
  }
  const hf::ConstraintReport rep = hf::validate_polycube_constraints(c.mesh, c.adj, c.labels);
  ASSERT_FALSE(rep.weak_corners.empty());
  for (int v : rep.weak_corners) {
    const hf::Point3& p = c.mesh.vertices[v];
    EXPECT_NEAR(p.y, 1.0, 1e-12);
    EXPECT_NEAR(p.z, 1.0, 1e-12);
  }
  EXPECT_EQ(rep.weak_corners.size(), 2u);
}

TEST(Constraints, CylinderSideBandPatchDetected) {
  const Labeled p = hex_prism();
  const hf::ConstraintReport rep = hf::validate_polycube_constraints(p.mesh, p.adj, p.labels);
  const bool flagged = std::find(rep.bad_boundary_patches.begin(), rep.bad_boundary_patches.end(),
                                 6) != rep.bad_boundary_patches.end();
  EXPECT_TRUE(flagged);
}
