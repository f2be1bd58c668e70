#include "hexforge/hex_mesh.hpp"

#include <algorithm>

#include "hexforge/errors.hpp"
#include "hexforge/tri_mesh.hpp"

namespace hexforge {

int HexAdjacency::edge_id(int a, int b) const {
  auto it = edge_index.find(edge_key(a, b));
  return it == edge_index.end() ? -1 : it->second;
}

int HexAdjacency::face_id(std::array<int, 4> key) const {
  std::sort(key.begin(), key.end());
  auto it = face_index.find(key);
  return it == face_index.end() ? -1 : it->second;
}

HexAdjacency build_hex_adjacency(const HexMesh& mesh) {
  HexAdjacency adj;
  adj.vertex_cells.resize(mesh.vertices.size());
  adj.cell_faces.resize(mesh.cells.size());
  adj.cell_edges.resize(mesh.cells.size());

  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    for (int v : mesh.cells[c]) {
      if (v < 0 || v >= mesh.num_vertices())
        throw IndexOutOfRange("cell vertex id out of range");
      adj.vertex_cells[v].push_back(static_cast<int>(c));
    }
  }
  for (auto& cs : adj.vertex_cells) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  }

  // Edges.
  std::vector<std::array<int, 2>> raw_edges;
  raw_edges.reserve(mesh.cells.size() * 12);
  for (const auto& cell : mesh.cells) {
    for (const auto& e : HEX_EDGES) {
      int a = cell[e[0]], b = cell[e[1]];
      if (a > b) std::swap(a, b);
      raw_edges.push_back({a, b});
    }
  }
  std::sort(raw_edges.begin(), raw_edges.end());
  raw_edges.erase(std::unique(raw_edges.begin(), raw_edges.end()), raw_edges.end());
  adj.edges = std::move(raw_edges);
  adj.edge_cells.resize(adj.edges.size());
  adj.edge_index.reserve(adj.edges.size() * 2);
  for (std::size_t e = 0; e < adj.edges.size(); ++e)
    adj.edge_index[edge_key(adj.edges[e][0], adj.edges[e][1])] = static_cast<int>(e);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int k = 0; k < 12; ++k) {
      int id = adj.edge_id(cell[HEX_EDGES[k][0]], cell[HEX_EDGES[k][1]]);
      adj.cell_edges[c][k] = id;
      adj.edge_cells[id].push_back(static_cast<int>(c));
    }
  }
  for (auto& cs : adj.edge_cells) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  }

  // Faces, keyed by sorted corner ids, ordered by key.
  std::vector<std::array<int, 4>> keys;
  keys.reserve(mesh.cells.size() * 6);
  for (const auto& cell : mesh.cells) {
    for (const auto& f : HEX_FACES) {
      std::array<int, 4> key = {cell[f[0]], cell[f[1]], cell[f[2]], cell[f[3]]};
      std::sort(key.begin(), key.end());
      keys.push_back(key);
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  adj.faces.resize(keys.size());
  adj.face_index.reserve(keys.size() * 2);
  for (std::size_t f = 0; f < keys.size(); ++f) {
    adj.faces[f].key = keys[f];
    adj.face_index[keys[f]] = static_cast<int>(f);
  }
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int k = 0; k < 6; ++k) {
      std::array<int, 4> cyc = {cell[HEX_FACES[k][0]], cell[HEX_FACES[k][1]],
                                cell[HEX_FACES[k][2]], cell[HEX_FACES[k][3]]};
      int id = adj.face_id(cyc);
      adj.cell_faces[c][k] = id;
      QuadFace& qf = adj.faces[id];
      if (qf.cells[0] < 0) {
        qf.cells[0] = static_cast<int>(c);
        qf.cell_face[0] = k;
        qf.cycle = cyc;
      } else if (qf.cells[1] < 0) {
        qf.cells[1] = static_cast<int>(c);
        qf.cell_face[1] = k;
      } else {
        throw NonManifoldError("face shared by more than two cells");
      }
    }
  }

  adj.vertex_boundary.assign(mesh.vertices.size(), 0);
  for (std::size_t f = 0; f < adj.faces.size(); ++f) {
    if (adj.faces[f].boundary()) {
      adj.boundary_faces.push_back(static_cast<int>(f));
      for (int v : adj.faces[f].key) adj.vertex_boundary[v] = 1;
    }
  }
  return adj;
}

std::vector<BoundaryQuad> boundary_surface(const HexMesh&, const HexAdjacency& adj) {
  std::vector<BoundaryQuad> quads;
  quads.reserve(adj.boundary_faces.size());
  for (int f : adj.boundary_faces) {
    const QuadFace& qf = adj.faces[f];
    quads.push_back({qf.cycle, qf.cells[0], qf.cell_face[0]});
  }
  return quads;
}

std::vector<ElementClass> classify_elements(const HexMesh& mesh, const HexAdjacency& adj) {
  std::vector<ElementClass> cls(mesh.cells.size(), ElementClass::InteriorRegular);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    bool boundary = false;
    for (int v : mesh.cells[c])
      if (adj.vertex_boundary[v]) { boundary = true; break; }
    if (boundary) {
      cls[c] = ElementClass::Boundary;
      continue;
    }
    for (int e : adj.cell_edges[c]) {
      if (adj.edge_cells[e].size() != 4) {
        cls[c] = ElementClass::InteriorIrregular;
        break;
      }
    }
  }
  return cls;
}

} // namespace hexforge
