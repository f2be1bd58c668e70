#include "hexforge/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "hexforge/bezier_extraction.hpp"
#include "hexforge/errors.hpp"
#include "hexforge/subdivision.hpp"

namespace hexforge {

Hierarchy build_hierarchy(const HexMesh& mesh, const FeatureSet& features,
                          const std::vector<RefineList>& refinements) {
  const int depth = static_cast<int>(refinements.size());
  for (int m = 0; m < depth; ++m) {
    if (refinements[m].level != m) {
      throw InvalidRefineList("refinement lists must cover levels 0..k-1 in order");
    }
  }

  Hierarchy h;
  h.levels.resize(depth + 1);
  h.levels[0].mesh = mesh;
  h.levels[0].features = features;

  std::vector<HexAdjacency> adjs(depth + 1);
  for (int m = 0; m <= depth; ++m) {
    HierarchyLevel& lev = h.levels[m];
    adjs[m] = build_hex_adjacency(lev.mesh);
    const int ncell = lev.mesh.num_cells();
    if (m == 0) {
      lev.in_domain.assign(ncell, 1);
    } else {
      lev.in_domain.assign(ncell, 0);
      const HierarchyLevel& prev = h.levels[m - 1];
      for (int c = 0; c < prev.mesh.num_cells(); ++c) {
        if (!prev.refined[c]) continue;
        for (int ch : prev.children[c]) lev.in_domain[ch] = 1;
      }
    }
    lev.refined.assign(ncell, 0);
    if (m < depth) {
      for (int c : refinements[m].cells) {
        if (c < 0 || c >= ncell) throw InvalidRefineList("refined cell id out of range");
        if (!lev.in_domain[c]) throw InactiveElement("refined cell is outside the level domain");
        lev.refined[c] = 1;
      }
      SubdivisionResult sub = subdivide(lev.mesh, adjs[m], lev.features);
      lev.children = std::move(sub.children);
      lev.prolongation = std::move(sub.prolongation);
      h.levels[m + 1].mesh = std::move(sub.mesh);
      h.levels[m + 1].features = std::move(sub.features);
    }
  }

  // Support classification per level from the extraction stencils.
  std::vector<std::vector<char>> supp_refined(depth + 1);
  for (int m = 0; m <= depth; ++m) {
    HierarchyLevel& lev = h.levels[m];
    const int nvert = lev.mesh.num_vertices();
    std::vector<char> has(nvert, 0), all_dom(nvert, 1), all_ref(nvert, 1);
    BezierExtractor ex(lev.mesh, adjs[m], lev.features);
    for (int c = 0; c < lev.mesh.num_cells(); ++c) {
      const CellExtraction ext = ex.cell(c);
      std::set<int> stencil;
      for (const auto& sp : ext.pts) {
        for (const auto& [v, w] : sp.w) {
          if (w != 0.0) stencil.insert(v);
        }
      }
      for (int v : stencil) {
        has[v] = 1;
        if (!lev.in_domain[c]) all_dom[v] = 0;
        if (!lev.refined[c]) all_ref[v] = 0;
      }
    }
    lev.candidate.assign(nvert, 0);
    supp_refined[m].assign(nvert, 0);
    for (int v = 0; v < nvert; ++v) {
      lev.candidate[v] = has[v] && all_dom[v];
      supp_refined[m][v] = has[v] && all_ref[v];
    }
  }

  // A function stays active unless its support is fully refined and every
  // prolongation child remains a candidate one level down.
  h.num_functions = 0;
  for (int m = 0; m <= depth; ++m) {
    HierarchyLevel& lev = h.levels[m];
    const int nvert = lev.mesh.num_vertices();
    std::vector<char> guard(nvert, 1);
    if (m < depth) {
      const HierarchyLevel& next = h.levels[m + 1];
      for (int c = 0; c < next.mesh.num_vertices(); ++c) {
        if (next.candidate[c]) continue;
        for (const auto& [b, w] : lev.prolongation[c]) {
          if (w != 0.0) guard[b] = 0;
        }
      }
    }
    lev.active.assign(nvert, 0);
    lev.function_id.assign(nvert, -1);
    for (int v = 0; v < nvert; ++v) {
      const bool deactivated = m < depth && lev.candidate[v] && supp_refined[m][v] && guard[v];
      lev.active[v] = lev.candidate[v] && !deactivated;
      if (lev.active[v]) lev.function_id[v] = h.num_functions++;
    }
  }

  for (int m = 0; m <= depth; ++m) {
    const HierarchyLevel& lev = h.levels[m];
    for (int c = 0; c < lev.mesh.num_cells(); ++c) {
      if (lev.in_domain[c] && !lev.refined[c]) h.leaves.push_back({m, c});
    }
  }
  return h;
}

BextDoc extract_bext(const Hierarchy& h) {
  BextDoc doc;
  for (const HierarchyLevel& lev : h.levels) {
    for (int v = 0; v < lev.mesh.num_vertices(); ++v) {
      if (!lev.active[v]) continue;
      const Point3& p = lev.mesh.vertices[v];
      doc.points.push_back({p.x, p.y, p.z, 1.0});
    }
  }

  // Truncated representation of every function over the current level basis,
  // kept in ascending function id order.
  std::vector<std::pair<long, std::map<int, double>>> trows;
  for (int m = 0; m < static_cast<int>(h.levels.size()); ++m) {
    const HierarchyLevel& lev = h.levels[m];
    for (int v = 0; v < lev.mesh.num_vertices(); ++v) {
      if (lev.active[v]) trows.push_back({lev.function_id[v], {{v, 1.0}}});
    }

    const HexAdjacency adj = build_hex_adjacency(lev.mesh);
    const BezierExtractor ex(lev.mesh, adj, lev.features);
    for (int c = 0; c < lev.mesh.num_cells(); ++c) {
      if (!lev.in_domain[c] || lev.refined[c]) continue;
      const CellExtraction ext = ex.cell(c);
      BextElement el;
      for (const auto& [fid, row] : trows) {
        std::array<double, 64> coef{};
        bool any = false;
        for (int i = 0; i < 64; ++i) {
          double s = 0.0;
          for (const auto& [b, w] : ext.pts[i].w) {
            const auto it = row.find(b);
            if (it != row.end()) s += w * it->second;
          }
          coef[i] = s;
          if (s != 0.0) any = true;
        }
        if (!any) continue;
        el.nodes.push_back(static_cast<int>(fid));
        std::vector<std::pair<int, double>> sparse;
        for (int i = 0; i < 64; ++i) {
          if (coef[i] != 0.0) sparse.emplace_back(i, coef[i]);
        }
        el.rows.push_back(std::move(sparse));
      }
      doc.elements.push_back(std::move(el));
    }

    if (m + 1 < static_cast<int>(h.levels.size())) {
      const HierarchyLevel& next = h.levels[m + 1];
      // Column view of the prolongation: children reached from each parent.
      std::vector<std::vector<std::pair<int, double>>> columns(lev.mesh.num_vertices());
      for (int c = 0; c < static_cast<int>(lev.prolongation.size()); ++c) {
        for (const auto& [b, w] : lev.prolongation[c]) {
          if (w != 0.0) columns[b].emplace_back(c, w);
        }
      }
      std::vector<std::pair<long, std::map<int, double>>> advanced;
      for (const auto& [fid, row] : trows) {
        std::map<int, double> nrow;
        for (const auto& [b, t] : row) {
          for (const auto& [c, w] : columns[b]) {
            if (!next.active[c]) nrow[c] += t * w;  // truncation drops active children
          }
        }
        if (!nrow.empty()) advanced.push_back({fid, std::move(nrow)});
      }
      trows = std::move(advanced);
    }
  }
  return doc;
}

HexMesh bezier_lattice_mesh(const BextDoc& doc) {
  HexMesh out;
  for (const BextElement& el : doc.elements) {
    const int base = out.num_vertices();
    std::array<Point3, 64> pts{};
    for (std::size_t r = 0; r < el.nodes.size(); ++r) {
      const auto& p = doc.points[el.nodes[r]];
      const Point3 cp{p[0], p[1], p[2]};
      for (const auto& [col, val] : el.rows[r]) pts[col] += val * cp;
    }
    for (const Point3& p : pts) out.vertices.push_back(p);
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
          std::array<int, 8> cell;
          for (int m = 0; m < 8; ++m) {
            cell[m] = base + bezier_index(i + HEX_CORNER_XYZ[m][0], j + HEX_CORNER_XYZ[m][1],
                                          k + HEX_CORNER_XYZ[m][2]);
          }
          out.cells.push_back(cell);
        }
      }
    }
  }
  return out;
}

}  // namespace hexforge
