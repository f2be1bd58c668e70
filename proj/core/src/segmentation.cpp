#include "hexforge/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "hexforge/errors.hpp"

namespace hexforge {

GeneratorSet GeneratorSet::axes() {
  GeneratorSet g;
  g.dirs = {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, 1, 0},
            Vec3{0, -1, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1}};
  return g;
}

namespace {

// Edge-adjacent triangles of each triangle (at most 3).
std::vector<std::vector<int>> edge_neighbors(const TriMesh& mesh, const TriAdjacency& adj) {
  std::vector<std::vector<int>> nbr(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      for (int other : adj.tris_of_edge(tri[k], tri[(k + 1) % 3]))
        if (other != static_cast<int>(t)) nbr[t].push_back(other);
    }
    std::sort(nbr[t].begin(), nbr[t].end());
    nbr[t].erase(std::unique(nbr[t].begin(), nbr[t].end()), nbr[t].end());
  }
  return nbr;
}

double hbe_distance(const TriMesh& mesh, const std::vector<std::vector<int>>& nbr, int tri,
                    const Vec3& g, double omega) {
  double d = norm2(mesh.tri_normal[tri] - g);
  if (omega > 0.0 && !nbr[tri].empty()) {
    double s = 0.0;
    for (int k : nbr[tri]) s += norm2(mesh.tri_normal[k] - g);
    d += omega * s / static_cast<double>(nbr[tri].size());
  }
  return d;
}

} // namespace

double segmentation_energy(const TriMesh& mesh, const TriAdjacency& adj,
                           const std::vector<int>& labels, const GeneratorSet& gen,
                           double omega) {
  auto nbr = edge_neighbors(mesh, adj);
  double e = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    e += mesh.tri_area[t] * hbe_distance(mesh, nbr, static_cast<int>(t), gen.dirs[labels[t]], omega);
  return e;
}

Segmentation segment_cvt(const TriMesh& mesh, const TriAdjacency& adj, const CvtOptions& opts,
                         std::ostream* warn) {
  const int nt = mesh.num_triangles();
  auto nbr = edge_neighbors(mesh, adj);

  Segmentation seg;
  seg.generators = GeneratorSet::axes();
  seg.labels.assign(nt, 0);

  auto assign = [&]() {
    for (int t = 0; t < nt; ++t) {
      int best = 0;
      double best_d = hbe_distance(mesh, nbr, t, seg.generators.dirs[0], opts.omega);
      for (int j = 1; j < 6; ++j) {
        double d = hbe_distance(mesh, nbr, t, seg.generators.dirs[j], opts.omega);
        if (d < best_d) { best_d = d; best = j; }
      }
      seg.labels[t] = best;
    }
  };

  auto energy = [&]() {
    double e = 0.0;
    for (int t = 0; t < nt; ++t)
      e += mesh.tri_area[t] * hbe_distance(mesh, nbr, t, seg.generators.dirs[seg.labels[t]], opts.omega);
    return e;
  };

  // The per-region energy is const - 2 g . v with
  // v = sum a_i (kappa_i + omega/|N(i)| sum_{k in N(i)} kappa_k),
  // so the exact minimizing generator is v normalized.
  auto update = [&]() {
    std::array<Vec3, 6> v{};
    for (int t = 0; t < nt; ++t) {
      Vec3 contrib = mesh.tri_normal[t];
      if (opts.omega > 0.0 && !nbr[t].empty()) {
        Vec3 s{};
        for (int k : nbr[t]) s += mesh.tri_normal[k];
        contrib += s * (opts.omega / static_cast<double>(nbr[t].size()));
      }
      v[seg.labels[t]] += contrib * mesh.tri_area[t];
    }
    for (int j = 0; j < 6; ++j) {
      double n = norm(v[j]);
      if (n > 0.0) {
        seg.generators.dirs[j] = v[j] / n;
      } else if (warn) {
        *warn << "warning: empty region " << j << ", generator kept\n";
      }
    }
  };

  assign();
  seg.energy_trace.push_back(energy());
  for (int it = 1; it <= opts.max_iterations; ++it) {
    update();
    assign();
    double e = energy();
    double prev = seg.energy_trace.back();
    seg.energy_trace.push_back(e);
    seg.iterations = it;
    if (prev == 0.0 || std::abs(prev - e) / std::abs(prev) < opts.rel_tolerance) {
      seg.converged = true;
      break;
    }
  }
  return seg;
}

void apply_overrides(Segmentation& seg, const std::vector<std::pair<int, int>>& rows) {
  for (const auto& [elem, patch] : rows) {
    if (elem < 0 || elem >= static_cast<int>(seg.labels.size()))
      throw IndexOutOfRange("override element " + std::to_string(elem) + " out of range");
    seg.labels[elem] = patch;
  }
}

namespace {

// Dominant orientation id of a patch from its area-weighted mean normal.
int patch_orientation(const Vec3& mean) {
  int axis = 0;
  double best = std::abs(mean.x);
  if (std::abs(mean.y) > best) { axis = 1; best = std::abs(mean.y); }
  if (std::abs(mean.z) > best) { axis = 2; }
  double comp = axis == 0 ? mean.x : (axis == 1 ? mean.y : mean.z);
  return axis * 2 + (comp >= 0.0 ? 0 : 1);
}

struct DirectedBoundary {
  // Per patch: directed boundary edges a->b with the neighbouring patch label
  // (-1 at surface boundary). Interior of the patch lies left of a->b.
  std::map<int, std::multimap<int, std::pair<int, int>>> out;  // patch -> a -> (b, nbr)
};

DirectedBoundary patch_boundaries(const TriMesh& mesh, const TriAdjacency& adj,
                                  const std::vector<int>& labels) {
  DirectedBoundary db;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    int lab = labels[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      int nbr_label = -1;
      for (int other : adj.tris_of_edge(a, b)) {
        if (other != static_cast<int>(t)) nbr_label = labels[other];
      }
      if (nbr_label != lab) db.out[lab].emplace(a, std::make_pair(b, nbr_label));
    }
  }
  return db;
}

} // namespace

ConstraintReport validate_polycube_constraints(const TriMesh& mesh, const TriAdjacency& adj,
                                               const std::vector<int>& labels,
                                               double sharp_dot_tol) {
  ConstraintReport report;
  std::set<int> label_set(labels.begin(), labels.end());

  // Patch mean normals and adjacency.
  std::map<int, Vec3> mean_normal;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    mean_normal[labels[t]] += mesh.tri_normal[t] * mesh.tri_area[t];
  std::map<int, int> orient;
  for (const auto& [lab, mean] : mean_normal) orient[lab] = patch_orientation(mean);

  std::set<std::array<int, 2>> adjacent_pairs;
  for (std::size_t e = 0; e < adj.edges.size(); ++e) {
    const auto& tris = adj.edge_tris[e];
    if (tris.size() != 2) continue;
    int la = labels[tris[0]], lb = labels[tris[1]];
    if (la == lb) continue;
    adjacent_pairs.insert({std::min(la, lb), std::max(la, lb)});
  }
  for (const auto& pair : adjacent_pairs) {
    if (orient[pair[0]] == opposite_orientation(orient[pair[1]]))
      report.opposite_adjacent.push_back(pair);
  }

  // Geometric corners: vertices with three or more sharp incident edges.
  std::vector<int> sharp_count(mesh.vertices.size(), 0);
  for (std::size_t e = 0; e < adj.edges.size(); ++e) {
    const auto& tris = adj.edge_tris[e];
    if (tris.size() != 2) continue;
    if (dot(mesh.tri_normal[tris[0]], mesh.tri_normal[tris[1]]) < sharp_dot_tol) {
      ++sharp_count[adj.edges[e][0]];
      ++sharp_count[adj.edges[e][1]];
    }
  }
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (sharp_count[v] < 3) continue;
    std::set<int> touching;
    for (int t : adj.vertex_tris[v]) touching.insert(labels[t]);
    if (touching.size() <= 2) report.weak_corners.push_back(static_cast<int>(v));
  }

  // Network corners: vertices touching three or more patches.
  std::vector<char> is_corner(mesh.vertices.size(), 0);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    std::set<int> touching;
    for (int t : adj.vertex_tris[v]) touching.insert(labels[t]);
    if (touching.size() >= 3) is_corner[v] = 1;
  }

  // Boundary loop of each patch: one loop, four corners, one neighbour per side.
  DirectedBoundary db = patch_boundaries(mesh, adj, labels);
  for (int lab : label_set) {
    auto it = db.out.find(lab);
    if (it == db.out.end()) {
      report.bad_boundary_patches.push_back(lab);  // closed patch, no boundary
      continue;
    }
    auto edges = it->second;  // copy, consumed while walking
    bool bad = false;
    int loops = 0;
    int corners_on_loop = 0;
    std::vector<int> side_breaks_ok;
    while (!edges.empty() && !bad) {
      ++loops;
      int start = edges.begin()->first;
      auto [first_to, first_nbr] = edges.begin()->second;
      edges.erase(edges.begin());
      std::vector<int> verts = {start, first_to};
      std::vector<int> nbrs = {first_nbr};
      while (verts.back() != start) {
        auto range = edges.equal_range(verts.back());
        if (range.first == range.second) { bad = true; break; }
        auto pick = range.first;  // lowest target id, map is ordered by key only
        for (auto e2 = range.first; e2 != range.second; ++e2)
          if (e2->second.first < pick->second.first) pick = e2;
        verts.push_back(pick->second.first);
        nbrs.push_back(pick->second.second);
        edges.erase(pick);
        if (verts.size() > mesh.triangles.size() * 3 + 8) { bad = true; break; }
      }
      if (bad) break;
      // verts forms a closed loop; count corners and check side monotonicity.
      int n = static_cast<int>(verts.size()) - 1;
      for (int k = 0; k < n; ++k)
        if (is_corner[verts[k]]) ++corners_on_loop;
      // A side change without a corner means a side borders several patches.
      for (int k = 0; k < n; ++k) {
        int prev_nbr = nbrs[(k + n - 1) % n];
        if (nbrs[k] != prev_nbr && !is_corner[verts[k]]) bad = true;
      }
    }
    if (bad || loops != 1 || corners_on_loop != 4)
      report.bad_boundary_patches.push_back(lab);
  }
  std::sort(report.bad_boundary_patches.begin(), report.bad_boundary_patches.end());
  return report;
}

PatchReport patch_report(const TriMesh& mesh, const TriAdjacency& adj,
                         const std::vector<int>& labels) {
  PatchReport report;
  std::map<int, PatchInfo> info;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    PatchInfo& pi = info[labels[t]];
    pi.label = labels[t];
    ++pi.triangles;
    pi.area += mesh.tri_area[t];
  }

  // Boundary length: edges whose two triangles carry different labels.
  for (std::size_t e = 0; e < adj.edges.size(); ++e) {
    const auto& tris = adj.edge_tris[e];
    int la = labels[tris[0]];
    int lb = tris.size() == 2 ? labels[tris[1]] : -1;
    if (la == lb) continue;
    double len = dist(mesh.vertices[adj.edges[e][0]], mesh.vertices[adj.edges[e][1]]);
    info[la].boundary_length += len;
    if (lb >= 0) info[lb].boundary_length += len;
  }

  // Connected components per label over edge adjacency. Components scan in
  // ascending triangle order, so a component's root is its lowest id.
  std::vector<int> comp(mesh.triangles.size(), -1);
  std::map<int, std::vector<std::pair<int, int>>> comps;  // label -> (size, seed)
  for (std::size_t t0 = 0; t0 < mesh.triangles.size(); ++t0) {
    if (comp[t0] >= 0) continue;
    int lab = labels[t0];
    std::vector<int> stack = {static_cast<int>(t0)};
    comp[t0] = static_cast<int>(t0);
    int size = 0;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      ++size;
      const auto& tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k) {
        for (int other : adj.tris_of_edge(tri[k], tri[(k + 1) % 3])) {
          if (other != t && comp[other] < 0 && labels[other] == lab) {
            comp[other] = static_cast<int>(t0);
            stack.push_back(other);
          }
        }
      }
    }
    comps[lab].push_back({size, static_cast<int>(t0)});
  }
  for (auto& [lab, pi] : info) {
    auto& parts = comps[lab];
    pi.islands = static_cast<int>(parts.size());
    // Everything but the largest component is an island; ties keep the
    // earliest component as the main one.
    int main_part = 0;
    for (std::size_t k = 1; k < parts.size(); ++k) {
      if (parts[k].first > parts[main_part].first) main_part = static_cast<int>(k);
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (static_cast<int>(k) == main_part) continue;
      pi.island_seeds.push_back(parts[k].second);
      if (parts[k].first == 1) ++pi.single_triangle_islands;
    }
    report.single_triangle_islands += pi.single_triangle_islands;
    report.patches.push_back(pi);
  }
  return report;
}

} // namespace hexforge
