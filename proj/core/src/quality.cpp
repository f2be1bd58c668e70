#include "hexforge/quality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hexforge/errors.hpp"

namespace hexforge {

double cell_scaled_jacobian(const HexMesh& mesh, const std::array<int, 8>& cell) {
  double mn = 1.0;
  for (int c = 0; c < 8; ++c) {
    const Point3& p = mesh.vertices[cell[c]];
    Vec3 eu = mesh.vertices[cell[HEX_CORNER_NBR[c][0]]] - p;
    Vec3 ev = mesh.vertices[cell[HEX_CORNER_NBR[c][1]]] - p;
    Vec3 ew = mesh.vertices[cell[HEX_CORNER_NBR[c][2]]] - p;
    double lu = norm(eu), lv = norm(ev), lw = norm(ew);
    if (lu <= 0.0 || lv <= 0.0 || lw <= 0.0) return -1.0;
    double sj = HEX_CORNER_SIGN[c] * dot(cross(eu, ev), ew) / (lu * lv * lw);
    mn = std::min(mn, sj);
  }
  return mn;
}

double hex_cell_volume(const HexMesh& mesh, const std::array<int, 8>& cell) {
  double vol = 0.0;
  for (const auto& f : HEX_FACES) {
    const Point3& a = mesh.vertices[cell[f[0]]];
    const Point3& b = mesh.vertices[cell[f[1]]];
    const Point3& c = mesh.vertices[cell[f[2]]];
    const Point3& d = mesh.vertices[cell[f[3]]];
    vol += dot(a, cross(b, c)) + dot(a, cross(c, d));
  }
  return vol / 6.0;
}

QualityReport mesh_quality(const HexMesh& mesh) {
  QualityReport rep;
  const long nc = mesh.num_cells();
  rep.cell_sj.assign(nc, 0.0);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < nc; ++c) rep.cell_sj[c] = cell_scaled_jacobian(mesh, mesh.cells[c]);
  if (nc == 0) return rep;
  double sum = 0.0;
  rep.min_sj = rep.cell_sj[0];
  rep.max_sj = rep.cell_sj[0];
  rep.worst_cell = 0;
  for (long c = 0; c < nc; ++c) {
    double sj = rep.cell_sj[c];
    sum += sj;
    if (sj < rep.min_sj) {
      rep.min_sj = sj;
      rep.worst_cell = static_cast<int>(c);
    }
    rep.max_sj = std::max(rep.max_sj, sj);
    if (sj < 0.0) ++rep.negative;
  }
  rep.mean_sj = sum / nc;
  return rep;
}

namespace {

Vec3 quad_normal(const HexMesh& mesh, const std::array<int, 4>& cyc) {
  Vec3 d1 = mesh.vertices[cyc[2]] - mesh.vertices[cyc[0]];
  Vec3 d2 = mesh.vertices[cyc[3]] - mesh.vertices[cyc[1]];
  return normalized(cross(d1, d2));
}

double quad_area(const HexMesh& mesh, const std::array<int, 4>& cyc) {
  Vec3 d1 = mesh.vertices[cyc[2]] - mesh.vertices[cyc[0]];
  Vec3 d2 = mesh.vertices[cyc[3]] - mesh.vertices[cyc[1]];
  return 0.5 * norm(cross(d1, d2));
}

} // namespace

FeatureSet detect_features(const HexMesh& mesh, const HexAdjacency& adj, double dot_tol,
                           const std::vector<int>& pinned) {
  const int nv = mesh.num_vertices();
  FeatureSet fs;
  fs.sharp_degree.assign(nv, 0);
  fs.pinned.assign(nv, 0);
  fs.sharp_neighbors.assign(nv, {});
  for (int v : pinned) {
    if (v < 0 || v >= nv) throw IndexOutOfRange("pinned vertex " + std::to_string(v));
    fs.pinned[v] = 1;
  }

  std::vector<BoundaryQuad> bquads = boundary_surface(mesh, adj);
  std::map<std::array<int, 2>, std::vector<int>> edge_quads;
  for (std::size_t q = 0; q < bquads.size(); ++q) {
    const auto& cyc = bquads[q].cycle;
    for (int k = 0; k < 4; ++k) {
      int a = cyc[k], b = cyc[(k + 1) % 4];
      if (a > b) std::swap(a, b);
      edge_quads[{a, b}].push_back(static_cast<int>(q));
    }
  }
  for (const auto& [key, qs] : edge_quads) {
    if (qs.size() != 2) continue;
    Vec3 n1 = quad_normal(mesh, bquads[qs[0]].cycle);
    Vec3 n2 = quad_normal(mesh, bquads[qs[1]].cycle);
    if (dot(n1, n2) < dot_tol) {
      fs.sharp_edges.push_back(key);
      fs.sharp_degree[key[0]]++;
      fs.sharp_degree[key[1]]++;
      fs.sharp_neighbors[key[0]].push_back(key[1]);
      fs.sharp_neighbors[key[1]].push_back(key[0]);
    }
  }
  for (auto& nb : fs.sharp_neighbors) std::sort(nb.begin(), nb.end());
  return fs;
}

FeatureSet features_from_marked(const HexMesh& mesh, const HexAdjacency& adj,
                                const std::vector<int>& marked) {
  const int nv = mesh.num_vertices();
  FeatureSet fs;
  fs.sharp_degree.assign(nv, 0);
  fs.pinned.assign(nv, 0);
  fs.sharp_neighbors.assign(nv, {});
  std::vector<char> mark(nv, 0);
  for (int v : marked) {
    if (v < 0 || v >= nv) throw IndexOutOfRange("marked vertex " + std::to_string(v));
    mark[v] = 1;
  }

  std::set<std::array<int, 2>> edges;
  for (int f : adj.boundary_faces) {
    const auto& cyc = adj.faces[f].cycle;
    for (int k = 0; k < 4; ++k) {
      int a = cyc[k], b = cyc[(k + 1) % 4];
      if (a > b) std::swap(a, b);
      if (mark[a] && mark[b]) edges.insert({a, b});
    }
  }
  fs.sharp_edges.assign(edges.begin(), edges.end());
  for (const auto& se : fs.sharp_edges) {
    fs.sharp_degree[se[0]]++;
    fs.sharp_degree[se[1]]++;
    fs.sharp_neighbors[se[0]].push_back(se[1]);
    fs.sharp_neighbors[se[1]].push_back(se[0]);
  }
  for (auto& nb : fs.sharp_neighbors) std::sort(nb.begin(), nb.end());
  for (int v = 0; v < nv; ++v) {
    if (mark[v] && fs.sharp_degree[v] == 0) fs.pinned[v] = 1;
  }
  return fs;
}

HexMesh pillow(const HexMesh& mesh, const HexAdjacency& adj, double offset) {
  const int nv = mesh.num_vertices();
  std::vector<BoundaryQuad> bquads = boundary_surface(mesh, adj);
  if (bquads.empty()) return mesh;

  // Shortest incident edge per boundary vertex, over all cell edges.
  std::vector<double> shortest(nv, 0.0);
  for (const auto& e : adj.edges) {
    double len = dist(mesh.vertices[e[0]], mesh.vertices[e[1]]);
    for (int v : {e[0], e[1]}) {
      if (!adj.vertex_boundary[v]) continue;
      if (shortest[v] == 0.0 || len < shortest[v]) shortest[v] = len;
    }
  }

  // Inward direction: negated average of incident boundary quad normals.
  std::vector<Vec3> inward(nv, Vec3{});
  for (const auto& bq : bquads) {
    Vec3 nrm = quad_normal(mesh, bq.cycle);
    for (int v : bq.cycle) inward[v] -= nrm;
  }

  std::vector<int> dup(nv, -1);
  HexMesh out;
  out.vertices = mesh.vertices;
  for (int v = 0; v < nv; ++v) {
    if (!adj.vertex_boundary[v]) continue;
    dup[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[v] + normalized(inward[v]) * (offset * shortest[v]));
  }

  out.cells = mesh.cells;
  for (auto& cell : out.cells)
    for (int& v : cell)
      if (dup[v] >= 0) v = dup[v];
  for (const auto& bq : bquads) {
    std::array<int, 8> cell;
    for (int k = 0; k < 4; ++k) {
      cell[k] = dup[bq.cycle[k]];
      cell[4 + k] = bq.cycle[k];
    }
    out.cells.push_back(cell);
  }
  return out;
}

namespace {

double local_min_sj(const HexMesh& mesh, const HexAdjacency& adj, int v) {
  double mn = 1.0;
  for (int c : adj.vertex_cells[v]) mn = std::min(mn, cell_scaled_jacobian(mesh, mesh.cells[c]));
  return mn;
}

} // namespace

long smooth(HexMesh& mesh, const HexAdjacency& adj, const FeatureSet& features,
            const SmoothOptions& options) {
  const int nv = mesh.num_vertices();
  std::vector<BoundaryQuad> bquads = boundary_surface(mesh, adj);
  std::vector<std::vector<int>> vertex_quads(nv);
  for (std::size_t q = 0; q < bquads.size(); ++q)
    for (int v : bquads[q].cycle) vertex_quads[v].push_back(static_cast<int>(q));

  long accepted = 0;
  for (int it = 0; it < options.iterations; ++it) {
    long moved = 0;
    for (int v = 0; v < nv; ++v) {
      if (adj.vertex_cells[v].empty() || features.pinned[v]) continue;
      Point3 target;
      if (adj.vertex_boundary[v]) {
        if (features.is_corner(v)) continue;
        if (features.is_crease(v)) {
          const auto& nb = features.sharp_neighbors[v];
          target = (mesh.vertices[nb[0]] + mesh.vertices[nb[1]]) * 0.5;
        } else {
          Point3 acc{};
          double wsum = 0.0;
          for (int q : vertex_quads[v]) {
            const auto& cyc = bquads[q].cycle;
            Point3 centroid = (mesh.vertices[cyc[0]] + mesh.vertices[cyc[1]] +
                               mesh.vertices[cyc[2]] + mesh.vertices[cyc[3]]) *
                              0.25;
            double area = quad_area(mesh, cyc);
            acc += centroid * area;
            wsum += area;
          }
          if (wsum <= 0.0) continue;
          target = acc / wsum;
        }
      } else {
        Point3 acc{};
        double wsum = 0.0;
        for (int c : adj.vertex_cells[v]) {
          Point3 centroid{};
          for (int p : mesh.cells[c]) centroid += mesh.vertices[p];
          centroid = centroid / 8.0;
          double vol = hex_cell_volume(mesh, mesh.cells[c]);
          acc += centroid * vol;
          wsum += vol;
        }
        if (wsum <= 0.0) continue;
        target = acc / wsum;
      }
      Point3 old = mesh.vertices[v];
      double before = local_min_sj(mesh, adj, v);
      mesh.vertices[v] = old + (target - old) * options.step;
      double after = local_min_sj(mesh, adj, v);
      if (after > before) {
        ++moved;
      } else {
        mesh.vertices[v] = old;
      }
    }
    accepted += moved;
    if (moved == 0) break;
  }
  return accepted;
}

long optimize(HexMesh& mesh, const HexAdjacency& adj, const FeatureSet& features,
              const OptimizeOptions& options) {
  std::vector<double> shortest(mesh.num_vertices(), 0.0);
  auto refresh_shortest = [&](int v) {
    double mn = 0.0;
    const Point3& p = mesh.vertices[v];
    for (int c : adj.vertex_cells[v]) {
      const auto& cell = mesh.cells[c];
      for (int k = 0; k < 8; ++k) {
        if (cell[k] != v) continue;
        for (int m = 0; m < 3; ++m) {
          double len = dist(p, mesh.vertices[cell[HEX_CORNER_NBR[k][m]]]);
          if (mn == 0.0 || len < mn) mn = len;
        }
      }
    }
    return mn;
  };

  long accepted = 0;
  for (int it = 0; it < options.iterations; ++it) {
    QualityReport rep = mesh_quality(mesh);
    std::set<int> targets;
    for (long c = 0; c < static_cast<long>(mesh.cells.size()); ++c)
      if (rep.cell_sj[c] < 0.0)
        for (int v : mesh.cells[c]) targets.insert(v);
    if (rep.worst_cell >= 0) {
      const auto& cell = mesh.cells[rep.worst_cell];
      int worst_corner = 0;
      double worst = 2.0;
      for (int c = 0; c < 8; ++c) {
        const Point3& p = mesh.vertices[cell[c]];
        Vec3 eu = mesh.vertices[cell[HEX_CORNER_NBR[c][0]]] - p;
        Vec3 ev = mesh.vertices[cell[HEX_CORNER_NBR[c][1]]] - p;
        Vec3 ew = mesh.vertices[cell[HEX_CORNER_NBR[c][2]]] - p;
        double lu = norm(eu), lv = norm(ev), lw = norm(ew);
        double sj = lu > 0.0 && lv > 0.0 && lw > 0.0
                        ? HEX_CORNER_SIGN[c] * dot(cross(eu, ev), ew) / (lu * lv * lw)
                        : -1.0;
        if (sj < worst) {
          worst = sj;
          worst_corner = c;
        }
      }
      targets.insert(cell[worst_corner]);
      for (int m = 0; m < 3; ++m) targets.insert(cell[HEX_CORNER_NBR[worst_corner][m]]);
    }

    long moved = 0;
    for (int v : targets) {
      if (features.pinned[v]) continue;
      if (adj.vertex_boundary[v] && features.is_corner(v)) continue;
      double scale = refresh_shortest(v);
      if (scale <= 0.0) continue;
      Point3 old = mesh.vertices[v];
      double f0 = local_min_sj(mesh, adj, v);
      double h = 1e-6 * scale;
      Vec3 grad{};
      for (int axis = 0; axis < 3; ++axis) {
        mesh.vertices[v][axis] = old[axis] + h;
        double fp = local_min_sj(mesh, adj, v);
        mesh.vertices[v][axis] = old[axis] - h;
        double fm = local_min_sj(mesh, adj, v);
        mesh.vertices[v][axis] = old[axis];
        grad[axis] = (fp - fm) / (2.0 * h);
      }
      if (adj.vertex_boundary[v] && features.is_crease(v)) {
        const auto& nb = features.sharp_neighbors[v];
        Vec3 tan = normalized(mesh.vertices[nb[1]] - mesh.vertices[nb[0]]);
        grad = tan * dot(grad, tan);
      }
      double gnorm = norm(grad);
      if (gnorm <= 0.0) continue;
      Vec3 dir = grad / gnorm;
      double step = options.step * scale;
      bool ok = false;
      for (int half = 0; half <= 3 && !ok; ++half, step *= 0.5) {
        mesh.vertices[v] = old + dir * step;
        if (local_min_sj(mesh, adj, v) > f0) ok = true;
      }
      if (ok) {
        ++moved;
      } else {
        mesh.vertices[v] = old;
      }
    }
    accepted += moved;
    if (moved == 0) break;
  }
  return accepted;
}

} // namespace hexforge
