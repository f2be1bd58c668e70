#include "hexforge/polycube.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "hexforge/errors.hpp"
#include "hexforge/io/keyword.hpp"

namespace hexforge {

std::vector<int> detect_corners(const TriMesh& mesh, const TriAdjacency& adj,
                                const std::vector<int>& labels) {
  std::vector<int> corners;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    std::set<int> touching;
    for (int t : adj.vertex_tris[v]) touching.insert(labels[t]);
    if (touching.size() >= 3) corners.push_back(static_cast<int>(v));
  }
  return corners;
}

std::vector<PatchQuad> build_boundary_quads(const TriMesh& mesh, const TriAdjacency& adj,
                                            const std::vector<int>& labels,
                                            const std::vector<int>& corners) {
  std::set<int> corner_set(corners.begin(), corners.end());
  std::set<int> label_set(labels.begin(), labels.end());
  std::vector<PatchQuad> result;

  for (int lab : label_set) {
    // Directed boundary edges with the patch interior on the left.
    std::multimap<int, int> next;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      if (labels[t] != lab) continue;
      const auto& tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k) {
        int a = tri[k], b = tri[(k + 1) % 3];
        bool on_boundary = true;
        for (int other : adj.tris_of_edge(a, b))
          if (other != static_cast<int>(t) && labels[other] == lab) on_boundary = false;
        if (on_boundary) next.emplace(a, b);
      }
    }
    if (next.empty())
      throw ValidationError("patch " + std::to_string(lab) + " has no boundary");

    const std::size_t total_edges = next.size();
    int start = next.begin()->first;
    std::vector<int> loop = {start};
    int cur = start;
    while (true) {
      auto range = next.equal_range(cur);
      if (range.first == range.second)
        throw ValidationError("patch " + std::to_string(lab) + " boundary is not closed");
      auto pick = range.first;
      for (auto it = range.first; it != range.second; ++it)
        if (it->second < pick->second) pick = it;
      cur = pick->second;
      next.erase(pick);
      if (cur == start) break;
      loop.push_back(cur);
      if (loop.size() > total_edges + 1)
        throw ValidationError("patch " + std::to_string(lab) + " boundary walk failed");
    }
    if (!next.empty())
      throw ValidationError("patch " + std::to_string(lab) + " boundary has multiple loops");

    std::vector<int> corner_pos;
    for (std::size_t i = 0; i < loop.size(); ++i)
      if (corner_set.count(loop[i])) corner_pos.push_back(static_cast<int>(i));
    if (corner_pos.size() != 4)
      throw PatchCornerCount("patch " + std::to_string(lab) + " has " +
                             std::to_string(corner_pos.size()) + " corners, expected 4");

    // Rotate so the lowest corner id leads.
    int best = 0;
    for (int k = 1; k < 4; ++k)
      if (loop[corner_pos[k]] < loop[corner_pos[best]]) best = k;

    PatchQuad pq;
    pq.patch = lab;
    const int n = static_cast<int>(loop.size());
    for (int k = 0; k < 4; ++k) {
      int p0 = corner_pos[(best + k) % 4];
      int p1 = corner_pos[(best + k + 1) % 4];
      pq.corners[k] = loop[p0];
      std::vector<int>& path = pq.side_paths[k];
      for (int i = p0;; i = (i + 1) % n) {
        path.push_back(loop[i]);
        if (i == p1 && path.size() > 1) break;
        if (static_cast<int>(path.size()) > n + 1)
          throw ValidationError("patch " + std::to_string(lab) + " side walk failed");
      }
    }
    result.push_back(std::move(pq));
  }
  return result;
}

int PolycubeStructure::corner_index(long id) const {
  auto it = std::lower_bound(corners.begin(), corners.end(), id,
                             [](const PolycubeCorner& c, long v) { return c.id < v; });
  if (it == corners.end() || it->id != id) return -1;
  return static_cast<int>(it - corners.begin());
}

namespace {

double cell_volume_estimate(const PolycubeStructure& pc, const std::array<int, 8>& cell) {
  std::array<Point3, 8> v;
  for (int k = 0; k < 8; ++k) v[k] = pc.corners[cell[k]].pos;
  double vol = 0.0;
  for (const auto& f : HEX_FACES) {
    const Point3 &a = v[f[0]], &b = v[f[1]], &c = v[f[2]], &d = v[f[3]];
    vol += dot(a, cross(b, c)) + dot(a, cross(c, d));
  }
  return vol / 6.0;
}

double lattice_epsilon(const PolycubeStructure& pc) {
  Point3 lo = pc.corners.empty() ? Point3{} : pc.corners[0].pos;
  Point3 hi = lo;
  for (const auto& c : pc.corners) {
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], c.pos[k]);
      hi[k] = std::max(hi[k], c.pos[k]);
    }
  }
  return 1e-9 * std::max(1.0, norm(hi - lo));
}

struct QuadFrame {
  Point3 L0;
  Vec3 du, dv, nq;
  double idu2 = 0.0, idv2 = 0.0, inq = 0.0;
};

QuadFrame quad_frame(const PolycubeStructure& pc, int qi) {
  const auto& q = pc.quads[qi];
  QuadFrame fr;
  fr.L0 = pc.corners[q[0]].pos;
  fr.du = pc.corners[q[1]].pos - fr.L0;
  fr.dv = pc.corners[q[3]].pos - fr.L0;
  fr.nq = cross(fr.du, fr.dv);
  double du2 = norm2(fr.du), dv2 = norm2(fr.dv), nq2 = norm(fr.nq);
  if (du2 <= 0.0 || dv2 <= 0.0 || nq2 <= 0.0)
    throw ValidationError("patch quad " + std::to_string(qi) + " is degenerate");
  fr.idu2 = 1.0 / du2;
  fr.idv2 = 1.0 / dv2;
  fr.inq = 1.0 / nq2;
  return fr;
}

HexMesh lattice_mesh(const PolycubeStructure& pc) {
  HexMesh pm;
  pm.vertices.reserve(pc.corners.size());
  for (const auto& c : pc.corners) pm.vertices.push_back(c.pos);
  pm.cells = pc.cells;
  return pm;
}

std::vector<double> quad_coverage(const PolycubeStructure& pc, const HexAdjacency& hx,
                                  const std::vector<int>& face_quad) {
  std::vector<double> covered(pc.quads.size(), 0.0);
  for (int f : hx.boundary_faces) {
    if (face_quad[f] < 0) continue;
    const auto& cyc = hx.faces[f].cycle;
    Vec3 e1 = pc.corners[cyc[1]].pos - pc.corners[cyc[0]].pos;
    Vec3 e2 = pc.corners[cyc[3]].pos - pc.corners[cyc[0]].pos;
    covered[face_quad[f]] += norm(cross(e1, e2));
  }
  return covered;
}

} // namespace

PolycubeStructure assemble_polycube(const std::vector<std::pair<long, Point3>>& corner_list,
                                    const std::vector<PatchQuad>& quads,
                                    const std::vector<std::array<long, 8>>& cell_rows) {
  PolycubeStructure pc;
  std::set<long> quad_ids;
  for (const auto& pq : quads)
    for (int c : pq.corners) quad_ids.insert(c);

  for (const auto& [id, pos] : corner_list) {
    PolycubeCorner c;
    c.id = id;
    c.pos = pos;
    c.interior = quad_ids.count(id) == 0;
    pc.corners.push_back(c);
  }
  std::sort(pc.corners.begin(), pc.corners.end(),
            [](const PolycubeCorner& a, const PolycubeCorner& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < pc.corners.size(); ++i)
    if (pc.corners[i].id == pc.corners[i - 1].id)
      throw ValidationError("duplicate corner id " + std::to_string(pc.corners[i].id));

  auto lookup = [&](long id) {
    int idx = pc.corner_index(id);
    if (idx < 0) throw IndexOutOfRange("unknown corner id " + std::to_string(id));
    return idx;
  };

  for (const auto& pq : quads) {
    std::array<int, 4> q;
    for (int k = 0; k < 4; ++k) q[k] = lookup(pq.corners[k]);
    pc.quads.push_back(q);
    pc.quad_patch.push_back(pq.patch);
  }

  for (const auto& row : cell_rows) {
    std::array<int, 8> cell;
    for (int k = 0; k < 8; ++k) cell[k] = lookup(row[k]);
    if (cell_volume_estimate(pc, cell) < 0.0) {
      std::swap(cell[0], cell[4]);
      std::swap(cell[1], cell[5]);
      std::swap(cell[2], cell[6]);
      std::swap(cell[3], cell[7]);
    }
    pc.cells.push_back(cell);
  }

  // Unique quad sides.
  std::set<std::array<int, 2>> edge_set;
  for (const auto& q : pc.quads) {
    for (int k = 0; k < 4; ++k) {
      int a = q[k], b = q[(k + 1) % 4];
      if (a > b) std::swap(a, b);
      edge_set.insert({a, b});
    }
  }
  pc.edges.assign(edge_set.begin(), edge_set.end());

  if (!pc.cells.empty()) {
    std::map<std::array<int, 4>, int> face_count;
    for (const auto& cell : pc.cells) {
      for (const auto& f : HEX_FACES) {
        std::array<int, 4> key = {cell[f[0]], cell[f[1]], cell[f[2]], cell[f[3]]};
        std::sort(key.begin(), key.end());
        if (++face_count[key] > 2) throw NonConformal("cell face shared by more than two cells");
      }
    }
    HexAdjacency hx = build_hex_adjacency(lattice_mesh(pc));
    std::vector<int> face_quad = associate_boundary_faces(pc, hx);
    for (int f : hx.boundary_faces)
      if (face_quad[f] < 0)
        throw UncoveredBoundary("complex boundary face outside every patch quad");
    std::vector<double> covered = quad_coverage(pc, hx, face_quad);
    for (std::size_t qi = 0; qi < pc.quads.size(); ++qi) {
      QuadFrame fr = quad_frame(pc, static_cast<int>(qi));
      double expected = norm(fr.nq);
      if (std::abs(covered[qi] - expected) > 1e-6 * expected)
        throw UncoveredBoundary("patch quad " + std::to_string(qi) +
                                " is not tiled by complex boundary faces");
    }
  }
  return pc;
}

std::vector<int> associate_boundary_faces(const PolycubeStructure& pc, const HexAdjacency& hx) {
  const double eps = lattice_epsilon(pc);

  std::vector<int> order(pc.quads.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pc.quad_patch[a] != pc.quad_patch[b]) return pc.quad_patch[a] < pc.quad_patch[b];
    return a < b;
  });
  std::vector<QuadFrame> frames;
  frames.reserve(pc.quads.size());
  for (std::size_t qi = 0; qi < pc.quads.size(); ++qi)
    frames.push_back(quad_frame(pc, static_cast<int>(qi)));

  std::vector<int> out(hx.faces.size(), -1);
  for (int f : hx.boundary_faces) {
    const auto& cyc = hx.faces[f].cycle;
    std::array<Point3, 4> P;
    for (int k = 0; k < 4; ++k) P[k] = pc.corners[cyc[k]].pos;
    Vec3 nf = cross(P[1] - P[0], P[3] - P[0]);
    for (int qi : order) {
      const QuadFrame& fr = frames[qi];
      if (dot(nf, fr.nq) <= 0.0) continue;
      bool inside = true;
      for (int k = 0; k < 4 && inside; ++k) {
        Vec3 d = P[k] - fr.L0;
        if (std::abs(dot(d, fr.nq)) * fr.inq > eps) {
          inside = false;
          break;
        }
        double u = dot(d, fr.du) * fr.idu2;
        double v = dot(d, fr.dv) * fr.idv2;
        double eu = eps * std::sqrt(fr.idu2), ev = eps * std::sqrt(fr.idv2);
        if (u < -eu || u > 1.0 + eu || v < -ev || v > 1.0 + ev) inside = false;
      }
      if (inside) {
        out[f] = qi;
        break;
      }
    }
  }
  return out;
}

PolycubeValidation validate_polycube(const PolycubeStructure& pc) {
  PolycubeValidation val;

  for (std::size_t c = 0; c < pc.cells.size(); ++c) {
    std::set<int> unique(pc.cells[c].begin(), pc.cells[c].end());
    if (unique.size() != 8) val.degenerate_cells.push_back(static_cast<int>(c));
  }
  if (pc.cells.empty() || !val.degenerate_cells.empty()) return val;

  HexAdjacency hx = build_hex_adjacency(lattice_mesh(pc));
  std::vector<int> face_quad = associate_boundary_faces(pc, hx);
  for (int f : hx.boundary_faces)
    if (face_quad[f] < 0) val.unmatched_boundary.push_back(hx.faces[f].key);

  std::vector<double> covered = quad_coverage(pc, hx, face_quad);
  for (std::size_t qi = 0; qi < pc.quads.size(); ++qi) {
    QuadFrame fr = quad_frame(pc, static_cast<int>(qi));
    double expected = norm(fr.nq);
    if (std::abs(covered[qi] - expected) > 1e-6 * expected)
      val.uncovered_quads.push_back(static_cast<int>(qi));
  }

  std::vector<char> seen(pc.cells.size(), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int f : hx.cell_faces[c]) {
      for (int other : hx.faces[f].cells) {
        if (other >= 0 && !seen[other]) {
          seen[other] = 1;
          stack.push_back(other);
        }
      }
    }
  }
  for (char s : seen)
    if (!s) val.connected = false;
  return val;
}

void write_structure_keyword(const std::string& path, const PolycubeStructure& pc) {
  KeywordDoc doc;
  for (const auto& c : pc.corners) {
    doc.node_ids.push_back(c.id + 1);
    doc.node_pos.push_back(c.pos);
  }
  for (std::size_t qi = 0; qi < pc.quads.size(); ++qi) {
    KeywordDoc::Shell sh;
    sh.id = static_cast<long>(qi) + 1;
    sh.part = pc.quad_patch[qi];
    for (int k = 0; k < 4; ++k) sh.n[k] = pc.corners[pc.quads[qi][k]].id + 1;
    sh.count = 4;
    doc.shells.push_back(sh);
  }
  for (std::size_t ci = 0; ci < pc.cells.size(); ++ci) {
    KeywordDoc::Solid so;
    so.id = static_cast<long>(ci) + 1;
    so.part = 1;
    for (int k = 0; k < 8; ++k) so.n[k] = pc.corners[pc.cells[ci][k]].id + 1;
    doc.solids.push_back(so);
  }
  write_keyword(path, doc);
}

PolycubeStructure read_structure_keyword(const std::string& path) {
  KeywordDoc doc = read_keyword(path);
  std::vector<std::pair<long, Point3>> corner_list;
  for (std::size_t i = 0; i < doc.node_ids.size(); ++i)
    corner_list.emplace_back(doc.node_ids[i] - 1, doc.node_pos[i]);

  std::vector<PatchQuad> quads;
  for (const auto& sh : doc.shells) {
    if (sh.count != 4)
      throw ParseError(path + ": polycube structure shells must be quads");
    PatchQuad pq;
    pq.patch = static_cast<int>(sh.part);
    for (int k = 0; k < 4; ++k) pq.corners[k] = static_cast<int>(sh.n[k] - 1);
    quads.push_back(pq);
  }
  std::vector<std::array<long, 8>> cells;
  for (const auto& so : doc.solids) {
    std::array<long, 8> row;
    for (int k = 0; k < 8; ++k) row[k] = so.n[k] - 1;
    cells.push_back(row);
  }
  return assemble_polycube(corner_list, quads, cells);
}

} // namespace hexforge
