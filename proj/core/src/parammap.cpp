#include "hexforge/parammap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "hexforge/errors.hpp"

namespace hexforge {

int PatchParam::local(int vertex) const {
  auto it = std::lower_bound(verts.begin(), verts.end(), vertex);
  if (it == verts.end() || *it != vertex) return -1;
  return static_cast<int>(it - verts.begin());
}

Point3 PatchParam::inverse_map(const TriMesh& mesh, double u, double v) const {
  constexpr double kTol = 1e-12;
  for (int t : tris) {
    const auto& tri = mesh.triangles[t];
    const auto& A = uv[local(tri[0])];
    const auto& B = uv[local(tri[1])];
    const auto& C = uv[local(tri[2])];
    double denom = (B[1] - C[1]) * (A[0] - C[0]) + (C[0] - B[0]) * (A[1] - C[1]);
    if (std::abs(denom) < 1e-300) continue;
    double l1 = ((B[1] - C[1]) * (u - C[0]) + (C[0] - B[0]) * (v - C[1])) / denom;
    double l2 = ((C[1] - A[1]) * (u - C[0]) + (A[0] - C[0]) * (v - C[1])) / denom;
    double l3 = 1.0 - l1 - l2;
    if (l1 >= -kTol && l2 >= -kTol && l3 >= -kTol)
      return mesh.vertices[tri[0]] * l1 + mesh.vertices[tri[1]] * l2 + mesh.vertices[tri[2]] * l3;
  }
  throw LocationFailure("no triangle of patch " + std::to_string(patch) + " contains (" +
                        std::to_string(u) + ", " + std::to_string(v) + ")");
}

PatchParam harmonic_parameterize(const TriMesh& mesh, const TriAdjacency& adj,
                                 const std::vector<int>& labels, const PatchQuad& quad) {
  (void)adj;
  PatchParam pp;
  pp.patch = quad.patch;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    if (labels[t] == quad.patch) pp.tris.push_back(static_cast<int>(t));
  std::set<int> vset;
  for (int t : pp.tris)
    for (int v : mesh.triangles[t]) vset.insert(v);
  pp.verts.assign(vset.begin(), vset.end());
  pp.uv.assign(pp.verts.size(), {0.0, 0.0});

  // Chord-length boundary conditions on the unit square, sides ccw.
  static const double SQ[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<char> is_bnd(pp.verts.size(), 0);
  for (int k = 0; k < 4; ++k) {
    const std::vector<int>& path = quad.side_paths[k];
    std::vector<double> acc(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i)
      acc[i] = acc[i - 1] + dist(mesh.vertices[path[i - 1]], mesh.vertices[path[i]]);
    double total = acc.empty() ? 0.0 : acc.back();
    const double* a = SQ[k];
    const double* b = SQ[(k + 1) % 4];
    for (std::size_t i = 0; i < path.size(); ++i) {
      int l = pp.local(path[i]);
      if (l < 0)
        throw ValidationError("patch " + std::to_string(quad.patch) +
                              " boundary vertex is not on the patch");
      double t = total > 0.0 ? acc[i] / total : 0.0;
      pp.uv[l] = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
      is_bnd[l] = 1;
    }
  }

  const int nv = static_cast<int>(pp.verts.size());
  std::vector<int> unknown(nv, -1);
  int nu = 0;
  for (int i = 0; i < nv; ++i)
    if (!is_bnd[i]) unknown[i] = nu++;

  auto flips_ok = [&]() {
    for (int t : pp.tris) {
      const auto& tri = mesh.triangles[t];
      const auto& A = pp.uv[pp.local(tri[0])];
      const auto& B = pp.uv[pp.local(tri[1])];
      const auto& C = pp.uv[pp.local(tri[2])];
      double area2 = (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]);
      if (area2 <= 0.0) return false;
    }
    return true;
  };

  auto solve_with = [&](bool cotan) {
    if (nu == 0) return;
    std::map<std::pair<int, int>, double> w;
    for (int t : pp.tris) {
      const auto& tri = mesh.triangles[t];
      for (int e = 0; e < 3; ++e) {
        int a = tri[e], b = tri[(e + 1) % 3], c = tri[(e + 2) % 3];
        double wt = 0.5;
        if (cotan) {
          Vec3 ca = mesh.vertices[a] - mesh.vertices[c];
          Vec3 cb = mesh.vertices[b] - mesh.vertices[c];
          double cr = norm(cross(ca, cb));
          wt = cr > 1e-300 ? 0.5 * dot(ca, cb) / cr : 0.0;
        }
        int la = pp.local(a), lb = pp.local(b);
        auto key = std::minmax(la, lb);
        w[{key.first, key.second}] += wt;
      }
    }
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nu, 2);
    std::vector<double> diag(nu, 0.0);
    for (const auto& [key, wacc] : w) {
      double wt = std::max(wacc, 1e-10);
      int ui = unknown[key.first], uj = unknown[key.second];
      if (ui >= 0) diag[ui] += wt;
      if (uj >= 0) diag[uj] += wt;
      if (ui >= 0 && uj >= 0) {
        trips.emplace_back(ui, uj, -wt);
        trips.emplace_back(uj, ui, -wt);
      } else if (ui >= 0) {
        rhs(ui, 0) += wt * pp.uv[key.second][0];
        rhs(ui, 1) += wt * pp.uv[key.second][1];
      } else if (uj >= 0) {
        rhs(uj, 0) += wt * pp.uv[key.first][0];
        rhs(uj, 1) += wt * pp.uv[key.first][1];
      }
    }
    for (int i = 0; i < nu; ++i) trips.emplace_back(i, i, diag[i]);
    Eigen::SparseMatrix<double> A(nu, nu);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success)
      throw SolveFailure("patch " + std::to_string(quad.patch) +
                         " parameterization factorization failed");
    Eigen::MatrixXd x = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success)
      throw SolveFailure("patch " + std::to_string(quad.patch) + " parameterization solve failed");
    for (int i = 0; i < nv; ++i)
      if (unknown[i] >= 0) pp.uv[i] = {x(unknown[i], 0), x(unknown[i], 1)};
  };

  solve_with(true);
  if (!flips_ok()) {
    solve_with(false);
    if (!flips_ok())
      throw FlippedTriangles("patch " + std::to_string(quad.patch) +
                             " has inverted triangles in the flattened layout");
  }
  return pp;
}

namespace {

struct Grid2 {
  int n = 0;
  std::vector<Point3> p;
  void init(int n_) {
    n = n_;
    p.assign(static_cast<std::size_t>(n + 1) * (n + 1), Point3{});
  }
  Point3& at(int A, int B) { return p[static_cast<std::size_t>(A) + (n + 1) * B]; }
  const Point3& at(int A, int B) const { return p[static_cast<std::size_t>(A) + (n + 1) * B]; }
};

struct Grid3 {
  int n = 0;
  std::vector<Point3> p;
  void init(int n_) {
    n = n_;
    p.assign(static_cast<std::size_t>(n + 1) * (n + 1) * (n + 1), Point3{});
  }
  Point3& at(int i, int j, int k) {
    return p[static_cast<std::size_t>(i) +
             static_cast<std::size_t>(n + 1) * (j + static_cast<std::size_t>(n + 1) * k)];
  }
  const Point3& at(int i, int j, int k) const {
    return p[static_cast<std::size_t>(i) +
             static_cast<std::size_t>(n + 1) * (j + static_cast<std::size_t>(n + 1) * k)];
  }
};

// n + 1 points at uniform chord-length fractions along a polyline.
std::vector<Point3> chord_sample(const std::vector<Point3>& poly, int n) {
  std::vector<double> acc(poly.size(), 0.0);
  for (std::size_t i = 1; i < poly.size(); ++i) acc[i] = acc[i - 1] + dist(poly[i - 1], poly[i]);
  double total = acc.back();
  std::vector<Point3> out(n + 1);
  out[0] = poly.front();
  out[n] = poly.back();
  std::size_t seg = 1;
  for (int i = 1; i < n; ++i) {
    double target = total * i / n;
    while (seg + 1 < poly.size() && acc[seg] < target) ++seg;
    double len = acc[seg] - acc[seg - 1];
    double t = len > 0.0 ? (target - acc[seg - 1]) / len : 0.0;
    out[i] = poly[seg - 1] + (poly[seg] - poly[seg - 1]) * t;
  }
  return out;
}

struct Frame {
  int qi = -1;
  int label = 0;
  const PatchQuad* quad = nullptr;
  const PatchParam* param = nullptr;
  Point3 L0;
  Vec3 du, dv;
  double idu2 = 0.0, idv2 = 0.0;
};

std::array<double, 2> frame_uv(const Frame& fr, const Point3& P) {
  Vec3 d = P - fr.L0;
  double u = dot(d, fr.du) * fr.idu2;
  double v = dot(d, fr.dv) * fr.idv2;
  u = std::min(std::max(u, 0.0), 1.0);
  v = std::min(std::max(v, 0.0), 1.0);
  return {u, v};
}

// Lattice axes of a face grid inside the cell reference cube: grid point
// (A, B) sits at cell lattice coordinate p0 + A d1 + B d3.
struct FaceInCell {
  std::array<int, 3> p0 = {0, 0, 0};
  std::array<int, 3> d1 = {0, 0, 0};
  std::array<int, 3> d3 = {0, 0, 0};
};

} // namespace

MapResult map_polycube(const TriMesh& mesh, const TriAdjacency& adj,
                       const std::vector<int>& labels,
                       const std::vector<PatchQuad>& patch_quads, const PolycubeStructure& pc,
                       int subdivisions) {
  if (subdivisions < 0) throw ValidationError("subdivision count must be non-negative");
  if (pc.cells.empty()) throw ValidationError("polycube structure has no cells");
  const int n = 1 << subdivisions;
  const long nmv = static_cast<long>(mesh.vertices.size());

  std::map<int, PatchParam> params;
  for (const auto& pq : patch_quads)
    params.emplace(pq.patch, harmonic_parameterize(mesh, adj, labels, pq));

  HexMesh pm;
  pm.vertices.reserve(pc.corners.size());
  for (const auto& c : pc.corners) pm.vertices.push_back(c.pos);
  pm.cells = pc.cells;
  HexAdjacency hx = build_hex_adjacency(pm);

  const long C0 = static_cast<long>(pc.corners.size());
  const long E = static_cast<long>(hx.edges.size());
  const long F = static_cast<long>(hx.faces.size());
  const long C = static_cast<long>(pc.cells.size());

  // Patch frames over the structure quads, checked against the segmentation.
  std::vector<Frame> frames(pc.quads.size());
  for (std::size_t qi = 0; qi < pc.quads.size(); ++qi) {
    Frame& fr = frames[qi];
    fr.qi = static_cast<int>(qi);
    fr.label = pc.quad_patch[qi];
    for (const auto& pq : patch_quads) {
      if (pq.patch != fr.label) continue;
      bool match = true;
      for (int k = 0; k < 4; ++k)
        if (pc.corners[pc.quads[qi][k]].id != pq.corners[k]) match = false;
      if (match) {
        fr.quad = &pq;
        break;
      }
    }
    if (!fr.quad)
      throw ValidationError("structure quad with patch label " + std::to_string(fr.label) +
                            " does not match any segmentation patch");
    fr.param = &params.at(fr.label);
    fr.L0 = pc.corners[pc.quads[qi][0]].pos;
    fr.du = pc.corners[pc.quads[qi][1]].pos - fr.L0;
    fr.dv = pc.corners[pc.quads[qi][3]].pos - fr.L0;
    double du2 = norm2(fr.du), dv2 = norm2(fr.dv);
    if (du2 <= 0.0 || dv2 <= 0.0)
      throw ValidationError("structure quad " + std::to_string(qi) + " is degenerate");
    fr.idu2 = 1.0 / du2;
    fr.idv2 = 1.0 / dv2;
  }
  auto frame_before = [&](int a, int b) {
    if (a < 0) return false;
    if (b < 0) return true;
    if (frames[a].label != frames[b].label) return frames[a].label < frames[b].label;
    return a < b;
  };

  std::vector<int> face_frame = associate_boundary_faces(pc, hx);
  for (int f : hx.boundary_faces)
    if (face_frame[f] < 0)
      throw ValidationError("complex boundary face is not covered by any patch");

  // Lowest patch frame adjacent to each boundary corner and edge.
  std::vector<int> corner_frame(C0, -1), edge_frame(E, -1), edge_bnd(E, 0);
  for (int f : hx.boundary_faces) {
    const auto& cyc = hx.faces[f].cycle;
    int fr = face_frame[f];
    for (int k = 0; k < 4; ++k) {
      int a = cyc[k], b = cyc[(k + 1) % 4];
      if (frame_before(fr, corner_frame[a])) corner_frame[a] = fr;
      int e = hx.edge_id(a, b);
      edge_bnd[e] = 1;
      if (frame_before(fr, edge_frame[e])) edge_frame[e] = fr;
    }
  }

  // Mesh vertices pinned to patch boundary curves.
  std::set<long> pinned_ids;
  for (const auto& pq : patch_quads)
    for (const auto& path : pq.side_paths)
      for (int v : path) pinned_ids.insert(v);

  // Corner positions: pinned mesh vertices, then patch pull-backs, interior
  // corners by a graph Laplace solve over complex edges.
  std::vector<Point3> cpos(C0);
  for (long v = 0; v < C0; ++v) {
    if (!hx.vertex_boundary[v]) continue;
    long id = pc.corners[v].id;
    if (id >= 0 && id < nmv && pinned_ids.count(id)) {
      cpos[v] = mesh.vertices[id];
    } else {
      int fr = corner_frame[v];
      if (fr < 0) throw ValidationError("boundary corner without an adjacent patch");
      auto uv = frame_uv(frames[fr], pc.corners[v].pos);
      cpos[v] = frames[fr].param->inverse_map(mesh, uv[0], uv[1]);
    }
  }
  {
    std::vector<long> iidx(C0, -1);
    long ni = 0;
    for (long v = 0; v < C0; ++v)
      if (!hx.vertex_boundary[v]) iidx[v] = ni++;
    if (ni > 0) {
      std::vector<Eigen::Triplet<double>> trips;
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ni, 3);
      std::vector<double> diag(ni, 0.0);
      for (const auto& e : hx.edges) {
        long ia = iidx[e[0]], ib = iidx[e[1]];
        if (ia < 0 && ib < 0) continue;
        if (ia >= 0) diag[ia] += 1.0;
        if (ib >= 0) diag[ib] += 1.0;
        if (ia >= 0 && ib >= 0) {
          trips.emplace_back(ia, ib, -1.0);
          trips.emplace_back(ib, ia, -1.0);
        } else if (ia >= 0) {
          for (int k = 0; k < 3; ++k) rhs(ia, k) += cpos[e[1]][k];
        } else {
          for (int k = 0; k < 3; ++k) rhs(ib, k) += cpos[e[0]][k];
        }
      }
      for (long i = 0; i < ni; ++i) trips.emplace_back(i, i, diag[i]);
      Eigen::SparseMatrix<double> A(ni, ni);
      A.setFromTriplets(trips.begin(), trips.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
      Eigen::MatrixXd x = ldlt.solve(rhs);
      if (ldlt.info() != Eigen::Success)
        throw SolveFailure("interior corner placement failed");
      for (long v = 0; v < C0; ++v)
        if (iidx[v] >= 0) cpos[v] = {x(iidx[v], 0), x(iidx[v], 1), x(iidx[v], 2)};
    }
  }

  // Edge samples, oriented from the lower to the higher corner index.
  std::vector<std::vector<Point3>> esamp(E);
  for (long e = 0; e < E; ++e) {
    int a = hx.edges[e][0], b = hx.edges[e][1];
    auto& samp = esamp[e];
    samp.assign(n + 1, Point3{});
    samp[0] = cpos[a];
    samp[n] = cpos[b];
    if (n == 1) continue;
    long ia = pc.corners[a].id, ib = pc.corners[b].id;

    if (edge_bnd[e]) {
      // A patch side polyline through both corners carries the geometry.
      std::vector<Point3> poly;
      if (ia >= 0 && ia < nmv && ib >= 0 && ib < nmv) {
        std::vector<int> order;
        for (std::size_t qi = 0; qi < frames.size(); ++qi) order.push_back(static_cast<int>(qi));
        std::sort(order.begin(), order.end(), frame_before);
        for (int qi : order) {
          for (int k = 0; k < 4 && poly.empty(); ++k) {
            const auto& path = frames[qi].quad->side_paths[k];
            auto ita = std::find(path.begin(), path.end(), static_cast<int>(ia));
            auto itb = std::find(path.begin(), path.end(), static_cast<int>(ib));
            if (ita == path.end() || itb == path.end()) continue;
            if (ita < itb) {
              for (auto it = ita; it <= itb; ++it) poly.push_back(mesh.vertices[*it]);
            } else {
              for (auto it = itb; it <= ita; ++it) poly.push_back(mesh.vertices[*it]);
              std::reverse(poly.begin(), poly.end());
            }
          }
          if (!poly.empty()) break;
        }
      }
      if (poly.size() >= 2) {
        samp = chord_sample(poly, n);
        samp[0] = cpos[a];
        samp[n] = cpos[b];
        continue;
      }
      // Edge crosses a patch interior: pull the lattice segment back.
      int fr = edge_frame[e];
      if (fr < 0) throw ValidationError("boundary edge without an adjacent patch");
      Point3 La = pc.corners[a].pos, Lb = pc.corners[b].pos;
      for (int i = 1; i < n; ++i) {
        Point3 P = La + (Lb - La) * (static_cast<double>(i) / n);
        auto uv = frame_uv(frames[fr], P);
        samp[i] = frames[fr].param->inverse_map(mesh, uv[0], uv[1]);
      }
    } else {
      for (int i = 1; i < n; ++i)
        samp[i] = cpos[a] + (cpos[b] - cpos[a]) * (static_cast<double>(i) / n);
    }
  }

  // Face grids in the canonical cycle frame of the complex.
  std::vector<Grid2> fgrid(F);
#pragma omp parallel for schedule(static)
  for (long f = 0; f < F; ++f) {
    Grid2& g = fgrid[f];
    g.init(n);
    const auto& cyc = hx.faces[f].cycle;
    auto edge_row = [&](int p, int q, int t) {
      const auto& es = esamp[hx.edge_id(p, q)];
      return p < q ? es[t] : es[n - t];
    };
    for (int A = 0; A <= n; ++A) {
      g.at(A, 0) = edge_row(cyc[0], cyc[1], A);
      g.at(A, n) = edge_row(cyc[3], cyc[2], A);
    }
    for (int B = 0; B <= n; ++B) {
      g.at(0, B) = edge_row(cyc[0], cyc[3], B);
      g.at(n, B) = edge_row(cyc[1], cyc[2], B);
    }
    if (n == 1) continue;
    if (face_frame[f] >= 0) {
      const Frame& fr = frames[face_frame[f]];
      Point3 P0 = pc.corners[cyc[0]].pos;
      Vec3 e1 = pc.corners[cyc[1]].pos - P0;
      Vec3 e3 = pc.corners[cyc[3]].pos - P0;
      for (int B = 1; B < n; ++B) {
        for (int A = 1; A < n; ++A) {
          Point3 P = P0 + e1 * (static_cast<double>(A) / n) + e3 * (static_cast<double>(B) / n);
          auto uv = frame_uv(fr, P);
          g.at(A, B) = fr.param->inverse_map(mesh, uv[0], uv[1]);
        }
      }
    } else {
      for (int B = 1; B < n; ++B) {
        double vb = static_cast<double>(B) / n;
        for (int A = 1; A < n; ++A) {
          double ua = static_cast<double>(A) / n;
          g.at(A, B) = g.at(0, B) * (1.0 - ua) + g.at(n, B) * ua + g.at(A, 0) * (1.0 - vb) +
                       g.at(A, n) * vb -
                       (g.at(0, 0) * ((1.0 - ua) * (1.0 - vb)) + g.at(n, 0) * (ua * (1.0 - vb)) +
                        g.at(0, n) * ((1.0 - ua) * vb) + g.at(n, n) * (ua * vb));
        }
      }
    }
  }

  // Global vertex layout: corners, edge interiors, face interiors, cell
  // interiors, each in entity order.
  const long es = n - 1;
  const long fs = es * es;
  const long cs = es * es * es;
  const long base_edges = C0;
  const long base_faces = base_edges + E * es;
  const long base_cells = base_faces + F * fs;
  const long total = base_cells + C * cs;

  MapResult out;
  out.segments = n;
  out.corner_count = C0;
  out.edge_count = E;
  out.face_count = F;
  out.cell_count = C;
  out.mesh.vertices.assign(total, Point3{});
  for (long v = 0; v < C0; ++v) out.mesh.vertices[v] = cpos[v];
  for (long e = 0; e < E; ++e)
    for (int t = 1; t < n; ++t) out.mesh.vertices[base_edges + e * es + t - 1] = esamp[e][t];
  for (long f = 0; f < F; ++f)
    for (int A = 1; A < n; ++A)
      for (int B = 1; B < n; ++B)
        out.mesh.vertices[base_faces + f * fs + (A - 1) * es + (B - 1)] = fgrid[f].at(A, B);

  // Face placement inside each cell for layer copies and vertex resolution.
  std::vector<std::array<FaceInCell, 6>> fic(C);
  for (long c = 0; c < C; ++c) {
    for (int slot = 0; slot < 6; ++slot) {
      const auto& cyc = hx.faces[hx.cell_faces[c][slot]].cycle;
      int lc0 = -1, lc1 = -1, lc3 = -1;
      for (int k = 0; k < 8; ++k) {
        if (pc.cells[c][k] == cyc[0]) lc0 = k;
        if (pc.cells[c][k] == cyc[1]) lc1 = k;
        if (pc.cells[c][k] == cyc[3]) lc3 = k;
      }
      if (lc0 < 0 || lc1 < 0 || lc3 < 0) throw ValidationError("face corner not found in cell");
      FaceInCell& fc = fic[c][slot];
      for (int m = 0; m < 3; ++m) {
        fc.p0[m] = HEX_CORNER_XYZ[lc0][m] * n;
        fc.d1[m] = HEX_CORNER_XYZ[lc1][m] - HEX_CORNER_XYZ[lc0][m];
        fc.d3[m] = HEX_CORNER_XYZ[lc3][m] - HEX_CORNER_XYZ[lc0][m];
      }
    }
  }

  // Cell interiors by transfinite interpolation of the six face grids.
#pragma omp parallel for schedule(static)
  for (long c = 0; c < C; ++c) {
    Grid3 g;
    g.init(n);
    for (int slot = 0; slot < 6; ++slot) {
      const FaceInCell& fc = fic[c][slot];
      const Grid2& fg = fgrid[hx.cell_faces[c][slot]];
      for (int A = 0; A <= n; ++A)
        for (int B = 0; B <= n; ++B)
          g.at(fc.p0[0] + A * fc.d1[0] + B * fc.d3[0], fc.p0[1] + A * fc.d1[1] + B * fc.d3[1],
               fc.p0[2] + A * fc.d1[2] + B * fc.d3[2]) = fg.at(A, B);
    }
    for (int k = 1; k < n; ++k) {
      double w = static_cast<double>(k) / n;
      for (int j = 1; j < n; ++j) {
        double v = static_cast<double>(j) / n;
        for (int i = 1; i < n; ++i) {
          double u = static_cast<double>(i) / n;
          Point3 fsum = g.at(0, j, k) * (1.0 - u) + g.at(n, j, k) * u +
                        g.at(i, 0, k) * (1.0 - v) + g.at(i, n, k) * v +
                        g.at(i, j, 0) * (1.0 - w) + g.at(i, j, n) * w;
          Point3 esum = (g.at(i, 0, 0) * (1.0 - v) + g.at(i, n, 0) * v) * (1.0 - w) +
                        (g.at(i, 0, n) * (1.0 - v) + g.at(i, n, n) * v) * w +
                        (g.at(0, j, 0) * (1.0 - u) + g.at(n, j, 0) * u) * (1.0 - w) +
                        (g.at(0, j, n) * (1.0 - u) + g.at(n, j, n) * u) * w +
                        (g.at(0, 0, k) * (1.0 - u) + g.at(n, 0, k) * u) * (1.0 - v) +
                        (g.at(0, n, k) * (1.0 - u) + g.at(n, n, k) * u) * v;
          Point3 csum = ((g.at(0, 0, 0) * (1.0 - u) + g.at(n, 0, 0) * u) * (1.0 - v) +
                         (g.at(0, n, 0) * (1.0 - u) + g.at(n, n, 0) * u) * v) *
                            (1.0 - w) +
                        ((g.at(0, 0, n) * (1.0 - u) + g.at(n, 0, n) * u) * (1.0 - v) +
                         (g.at(0, n, n) * (1.0 - u) + g.at(n, n, n) * u) * v) *
                            w;
          Point3 P = fsum - esum + csum;
          out.mesh.vertices[base_cells + c * cs + (i - 1) +
                            es * ((j - 1) + es * static_cast<long>(k - 1))] = P;
        }
      }
    }
  }

  // Sub-cell connectivity through entity-owned vertex ids.
  auto resolve = [&](long c, int i, int j, int k) -> long {
    int ends = (i == 0 || i == n ? 1 : 0) + (j == 0 || j == n ? 1 : 0) + (k == 0 || k == n ? 1 : 0);
    if (ends == 3) return pc.cells[c][HEX_CORNER_AT[i == n][j == n][k == n]];
    if (ends == 2) {
      int axis = (i != 0 && i != n) ? 0 : (j != 0 && j != n) ? 1 : 2;
      int t = axis == 0 ? i : axis == 1 ? j : k;
      std::array<int, 3> at0 = {i == n, j == n, k == n}, at1 = at0;
      at0[axis] = 0;
      at1[axis] = 1;
      int ga = pc.cells[c][HEX_CORNER_AT[at0[0]][at0[1]][at0[2]]];
      int gb = pc.cells[c][HEX_CORNER_AT[at1[0]][at1[1]][at1[2]]];
      long e = hx.edge_id(ga, gb);
      int tt = ga < gb ? t : n - t;
      return base_edges + e * es + tt - 1;
    }
    if (ends == 1) {
      int axis = (i == 0 || i == n) ? 0 : (j == 0 || j == n) ? 1 : 2;
      int side = (axis == 0 ? i : axis == 1 ? j : k) == n;
      int slot = HEX_FACE_OF_SIDE[axis][side];
      const FaceInCell& fc = fic[c][slot];
      int di = i - fc.p0[0], dj = j - fc.p0[1], dk = k - fc.p0[2];
      int A = fc.d1[0] * di + fc.d1[1] * dj + fc.d1[2] * dk;
      int B = fc.d3[0] * di + fc.d3[1] * dj + fc.d3[2] * dk;
      return base_faces + static_cast<long>(hx.cell_faces[c][slot]) * fs + (A - 1) * es + (B - 1);
    }
    return base_cells + c * cs + (i - 1) + es * ((j - 1) + es * static_cast<long>(k - 1));
  };

  out.mesh.cells.reserve(C * static_cast<long>(n) * n * n);
  for (long c = 0; c < C; ++c) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          std::array<int, 8> cell;
          for (int m = 0; m < 8; ++m) {
            const int* d = HEX_CORNER_XYZ[m];
            cell[m] = static_cast<int>(resolve(c, i + d[0], j + d[1], k + d[2]));
          }
          out.mesh.cells.push_back(cell);
        }
      }
    }
  }
  return out;
}

} // namespace hexforge
