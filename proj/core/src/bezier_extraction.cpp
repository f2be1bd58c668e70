#include "hexforge/bezier_extraction.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "hexforge/errors.hpp"

namespace hexforge {

double bernstein3(int k, double t) {
  const double s = 1.0 - t;
  switch (k) {
    case 0: return s * s * s;
    case 1: return 3.0 * s * s * t;
    case 2: return 3.0 * s * t * t;
    case 3: return t * t * t;
    default: return 0.0;
  }
}

double bernstein3_deriv(int k, double t) {
  const double s = 1.0 - t;
  switch (k) {
    case 0: return -3.0 * s * s;
    case 1: return 3.0 * s * (1.0 - 3.0 * t);
    case 2: return 3.0 * t * (2.0 - 3.0 * t);
    case 3: return 3.0 * t * t;
    default: return 0.0;
  }
}

namespace {

SparsePoint from_map(const std::map<int, double>& acc, double scale) {
  SparsePoint sp;
  sp.w.reserve(acc.size());
  for (const auto& [v, w] : acc) sp.w.emplace_back(v, w * scale);
  return sp;
}

void accumulate(std::map<int, double>& acc, const SparsePoint& sp) {
  for (const auto& [v, w] : sp.w) acc[v] += w;
}

}  // namespace

BezierExtractor::BezierExtractor(const HexMesh& mesh, const HexAdjacency& adj,
                                 const FeatureSet& features)
    : mesh_(mesh), adj_(adj), fs_(features) {
  vertex_bfaces_.resize(mesh.num_vertices());
  edge_bfaces_.resize(adj.edges.size());
  for (int f : adj.boundary_faces) {
    const auto& cyc = adj.faces[f].cycle;
    for (int k = 0; k < 4; ++k) {
      vertex_bfaces_[cyc[k]].push_back(f);
      edge_bfaces_[adj.edge_id(cyc[k], cyc[(k + 1) % 4])].push_back(f);
    }
  }
}

bool BezierExtractor::sharp(int a, int b) const {
  std::array<int, 2> key{std::min(a, b), std::max(a, b)};
  return std::binary_search(fs_.sharp_edges.begin(), fs_.sharp_edges.end(), key);
}

// Tricubic body point (iu, iv, iw in {1, 2}): per axis 2/3 on the near corner
// layer and 1/3 on the far one.
SparsePoint BezierExtractor::body(int c, int iu, int iv, int iw) const {
  const int idx[3] = {iu, iv, iw};
  SparsePoint sp;
  sp.w.reserve(8);
  std::map<int, double> acc;
  for (int k = 0; k < 8; ++k) {
    double w = 1.0;
    for (int ax = 0; ax < 3; ++ax) {
      const int side = HEX_CORNER_XYZ[k][ax];
      const bool near = (idx[ax] == 1) == (side == 0);
      w *= near ? 2.0 / 3.0 : 1.0 / 3.0;
    }
    acc[mesh_.cells[c][k]] += w;
  }
  return from_map(acc, 1.0);
}

SparsePoint BezierExtractor::body_near(int c, int vertex) const {
  const auto& cell = mesh_.cells[c];
  for (int k = 0; k < 8; ++k) {
    if (cell[k] == vertex) {
      return body(c, HEX_CORNER_XYZ[k][0] ? 2 : 1, HEX_CORNER_XYZ[k][1] ? 2 : 1,
                  HEX_CORNER_XYZ[k][2] ? 2 : 1);
    }
  }
  throw IndexOutOfRange("vertex is not a corner of the cell");
}

// Inner surface point of a boundary quad, nearest the given corner: bicubic
// weights 4/9, 2/9, 2/9, 1/9 over the quad cycle.
SparsePoint BezierExtractor::quad_point(int face, int vertex) const {
  const auto& cyc = adj_.faces[face].cycle;
  int k = -1;
  for (int i = 0; i < 4; ++i) {
    if (cyc[i] == vertex) k = i;
  }
  if (k < 0) throw IndexOutOfRange("vertex is not a corner of the face");
  std::map<int, double> acc;
  acc[cyc[k]] += 4.0 / 9.0;
  acc[cyc[(k + 1) % 4]] += 2.0 / 9.0;
  acc[cyc[(k + 3) % 4]] += 2.0 / 9.0;
  acc[cyc[(k + 2) % 4]] += 1.0 / 9.0;
  return from_map(acc, 1.0);
}

CellExtraction BezierExtractor::cell(int c) const {
  if (c < 0 || c >= mesh_.num_cells()) throw IndexOutOfRange("cell id out of range");
  CellExtraction ext;
  const auto& cell = mesh_.cells[c];
  for (int iw = 0; iw < 4; ++iw) {
    for (int iv = 0; iv < 4; ++iv) {
      for (int iu = 0; iu < 4; ++iu) {
        const int idx[3] = {iu, iv, iw};
        int ends = 0;
        for (int ax = 0; ax < 3; ++ax) ends += (idx[ax] == 0 || idx[ax] == 3) ? 1 : 0;
        // Nearest cell corner of the lattice point.
        const int nx = iu >= 2 ? 1 : 0;
        const int ny = iv >= 2 ? 1 : 0;
        const int nz = iw >= 2 ? 1 : 0;
        const int g = cell[HEX_CORNER_AT[nx][ny][nz]];
        SparsePoint sp;
        if (ends == 0) {
          sp = body(c, iu, iv, iw);
        } else if (ends == 1) {
          int axis = 0;
          for (int ax = 0; ax < 3; ++ax) {
            if (idx[ax] == 0 || idx[ax] == 3) axis = ax;
          }
          const int side = idx[axis] == 3 ? 1 : 0;
          const int f = adj_.cell_faces[c][HEX_FACE_OF_SIDE[axis][side]];
          if (adj_.faces[f].boundary()) {
            sp = quad_point(f, g);
          } else {
            std::map<int, double> acc;
            for (int cc : {adj_.faces[f].cells[0], adj_.faces[f].cells[1]}) {
              accumulate(acc, body_near(cc, g));
            }
            sp = from_map(acc, 0.5);
          }
        } else if (ends == 2) {
          int axis = 0;
          for (int ax = 0; ax < 3; ++ax) {
            if (idx[ax] != 0 && idx[ax] != 3) axis = ax;
          }
          // Other endpoint of the cell edge the point lies on.
          int ox = nx, oy = ny, oz = nz;
          if (axis == 0) ox = 1 - ox;
          if (axis == 1) oy = 1 - oy;
          if (axis == 2) oz = 1 - oz;
          const int h = cell[HEX_CORNER_AT[ox][oy][oz]];
          const int e = adj_.edge_id(g, h);
          if (sharp(g, h)) {
            sp.w.reserve(2);
            std::map<int, double> acc;
            acc[g] += 2.0 / 3.0;
            acc[h] += 1.0 / 3.0;
            sp = from_map(acc, 1.0);
          } else if (!edge_bfaces_[e].empty()) {
            std::map<int, double> acc;
            for (int f : edge_bfaces_[e]) accumulate(acc, quad_point(f, g));
            sp = from_map(acc, 1.0 / static_cast<double>(edge_bfaces_[e].size()));
          } else {
            std::map<int, double> acc;
            for (int cc : adj_.edge_cells[e]) accumulate(acc, body_near(cc, g));
            sp = from_map(acc, 1.0 / static_cast<double>(adj_.edge_cells[e].size()));
          }
        } else {
          if (!adj_.vertex_boundary[g]) {
            std::map<int, double> acc;
            for (int cc : adj_.vertex_cells[g]) accumulate(acc, body_near(cc, g));
            sp = from_map(acc, 1.0 / static_cast<double>(adj_.vertex_cells[g].size()));
          } else if (fs_.is_corner(g)) {
            sp.w.emplace_back(g, 1.0);
          } else if (fs_.is_crease(g)) {
            const auto& nb = fs_.sharp_neighbors[g];
            std::map<int, double> acc;
            acc[nb[0]] += 1.0 / 6.0;
            acc[g] += 4.0 / 6.0;
            acc[nb[1]] += 1.0 / 6.0;
            sp = from_map(acc, 1.0);
          } else {
            std::map<int, double> acc;
            for (int f : vertex_bfaces_[g]) accumulate(acc, quad_point(f, g));
            sp = from_map(acc, 1.0 / static_cast<double>(vertex_bfaces_[g].size()));
          }
        }
        ext.pts[bezier_index(iu, iv, iw)] = std::move(sp);
      }
    }
  }
  return ext;
}

ElementSample evaluate_element(const BextDoc& doc, int element, double u, double v, double w) {
  if (element < 0 || element >= static_cast<int>(doc.elements.size())) {
    throw IndexOutOfRange("element id out of range");
  }
  double bu[4], bv[4], bw[4], du[4], dv[4], dw[4];
  for (int k = 0; k < 4; ++k) {
    bu[k] = bernstein3(k, u);
    bv[k] = bernstein3(k, v);
    bw[k] = bernstein3(k, w);
    du[k] = bernstein3_deriv(k, u);
    dv[k] = bernstein3_deriv(k, v);
    dw[k] = bernstein3_deriv(k, w);
  }
  double basis[64], basis_u[64], basis_v[64], basis_w[64];
  for (int iw = 0; iw < 4; ++iw) {
    for (int iv = 0; iv < 4; ++iv) {
      for (int iu = 0; iu < 4; ++iu) {
        const int i = bezier_index(iu, iv, iw);
        basis[i] = bu[iu] * bv[iv] * bw[iw];
        basis_u[i] = du[iu] * bv[iv] * bw[iw];
        basis_v[i] = bu[iu] * dv[iv] * bw[iw];
        basis_w[i] = bu[iu] * bv[iv] * dw[iw];
      }
    }
  }
  const BextElement& el = doc.elements[element];
  ElementSample out;
  for (std::size_t r = 0; r < el.nodes.size(); ++r) {
    double s = 0.0, su = 0.0, sv = 0.0, sw = 0.0;
    for (const auto& [col, val] : el.rows[r]) {
      s += val * basis[col];
      su += val * basis_u[col];
      sv += val * basis_v[col];
      sw += val * basis_w[col];
    }
    const auto& p = doc.points[el.nodes[r]];
    const Point3 pt{p[0], p[1], p[2]};
    out.position += s * pt;
    out.du += su * pt;
    out.dv += sv * pt;
    out.dw += sw * pt;
    out.partition += s;
  }
  return out;
}

}  // namespace hexforge
