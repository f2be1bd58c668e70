#include "hexforge/subdivision.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hexforge/errors.hpp"

namespace hexforge {

namespace {

using Row = std::vector<std::pair<int, double>>;

class MaskBuilder {
 public:
  void add(int v, double w) { acc_[v] += w; }
  void add_cell_mid(const std::array<int, 8>& cell, double w) {
    for (int v : cell) acc_[v] += w / 8.0;
  }
  void add_face_mid(const std::array<int, 4>& cyc, double w) {
    for (int v : cyc) acc_[v] += w / 4.0;
  }
  void add_edge_mid(int a, int b, double w) {
    acc_[a] += w / 2.0;
    acc_[b] += w / 2.0;
  }
  Row row() const {
    Row r;
    r.reserve(acc_.size());
    for (const auto& [v, w] : acc_) r.emplace_back(v, w);
    return r;
  }

 private:
  std::map<int, double> acc_;
};

Point3 apply_row(const HexMesh& mesh, const Row& row) {
  Point3 p{0.0, 0.0, 0.0};
  for (const auto& [v, w] : row) p += w * mesh.vertices[v];
  return p;
}

}  // namespace

SubdivisionResult subdivide(const HexMesh& mesh, const HexAdjacency& adj,
                            const FeatureSet& features) {
  const int nv = mesh.num_vertices();
  const int ne = static_cast<int>(adj.edges.size());
  const int nf = static_cast<int>(adj.faces.size());
  const int nc = mesh.num_cells();
  if (static_cast<int>(features.pinned.size()) != nv) {
    throw ValidationError("feature set does not match the mesh");
  }

  // Incidence tables beyond the base adjacency.
  std::vector<std::vector<int>> vertex_edges(nv), vertex_faces(nv), edge_faces(ne);
  std::vector<std::vector<int>> vertex_bedges(nv), vertex_bfaces(nv), edge_bfaces(ne);
  for (int e = 0; e < ne; ++e) {
    vertex_edges[adj.edges[e][0]].push_back(e);
    vertex_edges[adj.edges[e][1]].push_back(e);
  }
  for (int f = 0; f < nf; ++f) {
    const auto& cyc = adj.faces[f].cycle;
    const bool bnd = adj.faces[f].boundary();
    for (int k = 0; k < 4; ++k) {
      vertex_faces[cyc[k]].push_back(f);
      if (bnd) vertex_bfaces[cyc[k]].push_back(f);
      const int e = adj.edge_id(cyc[k], cyc[(k + 1) % 4]);
      edge_faces[e].push_back(f);
      if (bnd) edge_bfaces[e].push_back(f);
    }
  }
  for (int e = 0; e < ne; ++e) {
    if (!edge_bfaces[e].empty()) {
      vertex_bedges[adj.edges[e][0]].push_back(e);
      vertex_bedges[adj.edges[e][1]].push_back(e);
    }
  }

  auto is_sharp = [&](int a, int b) {
    std::array<int, 2> key{std::min(a, b), std::max(a, b)};
    return std::binary_search(features.sharp_edges.begin(), features.sharp_edges.end(), key);
  };

  SubdivisionResult out;
  out.parent_vertices = nv;
  out.prolongation.resize(nv + ne + nf + nc);

  // Vertex points.
  for (int v = 0; v < nv; ++v) {
    MaskBuilder mb;
    if (!adj.vertex_boundary.empty() && adj.vertex_boundary[v]) {
      if (features.is_corner(v)) {
        mb.add(v, 1.0);
      } else if (features.is_crease(v)) {
        const auto& nb = features.sharp_neighbors[v];
        mb.add(nb[0], 1.0 / 8.0);
        mb.add(v, 6.0 / 8.0);
        mb.add(nb[1], 1.0 / 8.0);
      } else {
        const double n = static_cast<double>(vertex_bedges[v].size());
        for (int f : vertex_bfaces[v]) {
          mb.add_face_mid(adj.faces[f].cycle, 1.0 / (n * vertex_bfaces[v].size()));
        }
        for (int e : vertex_bedges[v]) {
          mb.add_edge_mid(adj.edges[e][0], adj.edges[e][1], 2.0 / (n * n));
        }
        mb.add(v, (n - 3.0) / n);
      }
    } else {
      const double kc = static_cast<double>(adj.vertex_cells[v].size());
      const double kf = static_cast<double>(vertex_faces[v].size());
      const double ke = static_cast<double>(vertex_edges[v].size());
      for (int c : adj.vertex_cells[v]) mb.add_cell_mid(mesh.cells[c], 1.0 / (8.0 * kc));
      for (int f : vertex_faces[v]) mb.add_face_mid(adj.faces[f].cycle, 3.0 / (8.0 * kf));
      for (int e : vertex_edges[v]) mb.add_edge_mid(adj.edges[e][0], adj.edges[e][1], 3.0 / (8.0 * ke));
      mb.add(v, 1.0 / 8.0);
    }
    out.prolongation[v] = mb.row();
  }

  // Edge points.
  for (int e = 0; e < ne; ++e) {
    const int a = adj.edges[e][0];
    const int b = adj.edges[e][1];
    MaskBuilder mb;
    if (!edge_bfaces[e].empty()) {
      if (is_sharp(a, b)) {
        mb.add_edge_mid(a, b, 1.0);
      } else {
        mb.add(a, 1.0 / 4.0);
        mb.add(b, 1.0 / 4.0);
        const double kf = static_cast<double>(edge_bfaces[e].size());
        for (int f : edge_bfaces[e]) mb.add_face_mid(adj.faces[f].cycle, 2.0 / (4.0 * kf));
      }
    } else {
      const double kc = static_cast<double>(adj.edge_cells[e].size());
      const double kf = static_cast<double>(edge_faces[e].size());
      for (int c : adj.edge_cells[e]) mb.add_cell_mid(mesh.cells[c], 1.0 / (kc * kc));
      for (int f : edge_faces[e]) mb.add_face_mid(adj.faces[f].cycle, 2.0 / (kc * kf));
      mb.add_edge_mid(a, b, (kc - 3.0) / kc);
    }
    out.prolongation[nv + e] = mb.row();
  }

  // Face points.
  for (int f = 0; f < nf; ++f) {
    MaskBuilder mb;
    if (adj.faces[f].boundary()) {
      mb.add_face_mid(adj.faces[f].cycle, 1.0);
    } else {
      mb.add_cell_mid(mesh.cells[adj.faces[f].cells[0]], 1.0 / 4.0);
      mb.add_cell_mid(mesh.cells[adj.faces[f].cells[1]], 1.0 / 4.0);
      mb.add_face_mid(adj.faces[f].cycle, 1.0 / 2.0);
    }
    out.prolongation[nv + ne + f] = mb.row();
  }

  // Cell points.
  for (int c = 0; c < nc; ++c) {
    MaskBuilder mb;
    mb.add_cell_mid(mesh.cells[c], 1.0);
    out.prolongation[nv + ne + nf + c] = mb.row();
  }

  out.mesh.vertices.resize(nv + ne + nf + nc);
  for (int v = 0; v < nv + ne + nf + nc; ++v) {
    out.mesh.vertices[v] = apply_row(mesh, out.prolongation[v]);
  }

  // Child connectivity: lattice coordinate 0/2 hits a parent corner, one odd
  // axis an edge vertex, two a face vertex, three the cell vertex.
  auto lattice_vertex = [&](int c, int l0, int l1, int l2) {
    const int l[3] = {l0, l1, l2};
    int odd = (l0 & 1) + (l1 & 1) + (l2 & 1);
    if (odd == 0) return mesh.cells[c][HEX_CORNER_AT[l0 / 2][l1 / 2][l2 / 2]];
    if (odd == 1) {
      int axis = (l0 & 1) ? 0 : (l1 & 1) ? 1 : 2;
      int p[3] = {l0 / 2, l1 / 2, l2 / 2};
      p[axis] = 0;
      const int ga = mesh.cells[c][HEX_CORNER_AT[p[0]][p[1]][p[2]]];
      p[axis] = 1;
      const int gb = mesh.cells[c][HEX_CORNER_AT[p[0]][p[1]][p[2]]];
      return nv + adj.edge_id(ga, gb);
    }
    if (odd == 2) {
      int axis = !(l0 & 1) ? 0 : !(l1 & 1) ? 1 : 2;
      const int side = l[axis] / 2;
      return nv + ne + adj.cell_faces[c][HEX_FACE_OF_SIDE[axis][side]];
    }
    return nv + ne + nf + c;
  };

  out.mesh.cells.resize(static_cast<std::size_t>(nc) * 8);
  out.children.resize(nc);
  for (int c = 0; c < nc; ++c) {
    for (int oz = 0; oz < 2; ++oz) {
      for (int oy = 0; oy < 2; ++oy) {
        for (int ox = 0; ox < 2; ++ox) {
          const int m = ox + 2 * oy + 4 * oz;
          const int id = c * 8 + m;
          out.children[c][m] = id;
          std::array<int, 8>& cell = out.mesh.cells[id];
          for (int k = 0; k < 8; ++k) {
            cell[k] = lattice_vertex(c, ox + HEX_CORNER_XYZ[k][0], oy + HEX_CORNER_XYZ[k][1],
                                     oz + HEX_CORNER_XYZ[k][2]);
          }
        }
      }
    }
  }

  // Feature propagation.
  const int cnv = nv + ne + nf + nc;
  out.features.pinned.assign(cnv, 0);
  for (int v = 0; v < nv; ++v) out.features.pinned[v] = features.pinned[v];
  std::set<std::array<int, 2>> child_sharp;
  for (const auto& se : features.sharp_edges) {
    const int e = adj.edge_id(se[0], se[1]);
    child_sharp.insert({se[0], nv + e});
    child_sharp.insert({se[1], nv + e});
  }
  out.features.sharp_edges.assign(child_sharp.begin(), child_sharp.end());
  out.features.sharp_degree.assign(cnv, 0);
  out.features.sharp_neighbors.assign(cnv, {});
  for (const auto& se : out.features.sharp_edges) {
    out.features.sharp_degree[se[0]]++;
    out.features.sharp_degree[se[1]]++;
    out.features.sharp_neighbors[se[0]].push_back(se[1]);
    out.features.sharp_neighbors[se[1]].push_back(se[0]);
  }
  for (auto& nb : out.features.sharp_neighbors) std::sort(nb.begin(), nb.end());
  return out;
}

}  // namespace hexforge
