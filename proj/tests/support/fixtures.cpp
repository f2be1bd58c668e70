#include "fixtures.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <stdexcept>

namespace fixtures {

namespace hf = hexforge;

hf::TriMesh cube_surface(int n) {
  hf::TriMesh mesh;
  std::map<std::array<int, 3>, int> ids;
  auto vertex = [&](int i, int j, int k) {
    auto [it, fresh] = ids.try_emplace({i, j, k}, static_cast<int>(mesh.vertices.size()));
    if (fresh) {
      mesh.vertices.push_back(
          {double(i) / n, double(j) / n, double(k) / n});
    }
    return it->second;
  };
  // u cross v = outward normal for every (axis, side) pair.
  const int face_uv[3][2][2] = {{{2, 1}, {1, 2}},   // x = 0, x = n
                                {{0, 2}, {2, 0}},   // y = 0, y = n
                                {{1, 0}, {0, 1}}};  // z = 0, z = n
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const int ua = face_uv[axis][side][0];
      const int va = face_uv[axis][side][1];
      auto at = [&](int u, int v) {
        int c[3];
        c[axis] = side * n;
        c[ua] = u;
        c[va] = v;
        return vertex(c[0], c[1], c[2]);
      };
      for (int v = 0; v < n; ++v) {
        for (int u = 0; u < n; ++u) {
          const int p00 = at(u, v), p10 = at(u + 1, v);
          const int p11 = at(u + 1, v + 1), p01 = at(u, v + 1);
          mesh.triangles.push_back({p00, p10, p11});
          mesh.triangles.push_back({p00, p11, p01});
        }
      }
    }
  }
  mesh.finalize();
  return mesh;
}

std::vector<int> dominant_axis_labels(const hf::TriMesh& mesh) {
  std::vector<int> labels(mesh.num_triangles(), 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const hf::Vec3& nrm = mesh.tri_normal[t];
    int best = 0;
    double best_dot = -2.0;
    for (int axis = 0; axis < 3; ++axis) {
      for (int sign = 0; sign < 2; ++sign) {
        const double d = (sign == 0 ? 1.0 : -1.0) * nrm[axis];
        if (d > best_dot) {
          best_dot = d;
          best = 2 * axis + sign;
        }
      }
    }
    labels[t] = best;
  }
  return labels;
}

hf::TriMesh jittered(hf::TriMesh mesh, double amplitude, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> off(-amplitude, amplitude);
  for (auto& p : mesh.vertices) {
    p.x += off(rng);
    p.y += off(rng);
    p.z += off(rng);
  }
  mesh.finalize();
  return mesh;
}

int grid_vertex(int nx, int ny, int nz, int i, int j, int k) {
  (void)nz;
  return i + (nx + 1) * (j + (ny + 1) * k);
}

hf::HexMesh grid_hexes(int nx, int ny, int nz, double spacing) {
  hf::HexMesh mesh;
  for (int k = 0; k <= nz; ++k) {
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        mesh.vertices.push_back({i * spacing, j * spacing, k * spacing});
      }
    }
  }
  auto id = [&](int i, int j, int k) { return grid_vertex(nx, ny, nz, i, j, k); };
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        mesh.cells.push_back({id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k),
                              id(i, j, k + 1), id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1),
                              id(i, j + 1, k + 1)});
      }
    }
  }
  return mesh;
}

hf::HexMesh fan_hexes(int sectors, int layers) {
  hf::HexMesh mesh;
  const int ring = 2 * sectors;
  // Layers of vertices: center + 2N-gon per z slice.
  auto center = [&](int layer) { return layer * (ring + 1); };
  auto rim = [&](int layer, int k) { return layer * (ring + 1) + 1 + (k % ring); };
  for (int layer = 0; layer <= layers; ++layer) {
    const double z = double(layer);
    mesh.vertices.push_back({0.0, 0.0, z});
    for (int k = 0; k < ring; ++k) {
      const double a = 3.14159265358979323846 * k / sectors;
      mesh.vertices.push_back({std::cos(a), std::sin(a), z});
    }
  }
  for (int layer = 0; layer < layers; ++layer) {
    for (int s = 0; s < sectors; ++s) {
      const int q[4] = {center(layer), rim(layer, 2 * s), rim(layer, 2 * s + 1),
                        rim(layer, 2 * s + 2)};
      const int t[4] = {center(layer + 1), rim(layer + 1, 2 * s), rim(layer + 1, 2 * s + 1),
                        rim(layer + 1, 2 * s + 2)};
      mesh.cells.push_back({q[0], q[1], q[2], q[3], t[0], t[1], t[2], t[3]});
    }
  }
  return mesh;
}

hf::HexMesh l_block() {
  hf::HexMesh grid = grid_hexes(2, 2, 1);
  hf::HexMesh mesh;
  std::vector<int> remap(grid.num_vertices(), -1);
  // Keep cells (0,0), (1,0), (0,1): drop the (1,1) corner cell.
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (c == 3) continue;
    std::array<int, 8> cell{};
    for (int i = 0; i < 8; ++i) {
      int& slot = remap[grid.cells[c][i]];
      if (slot < 0) {
        slot = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(grid.vertices[grid.cells[c][i]]);
      }
      cell[i] = slot;
    }
    mesh.cells.push_back(cell);
  }
  return mesh;
}

hf::HexMesh split_linear(const hf::HexMesh& mesh) {
  hf::HexMesh out;
  std::map<std::array<long, 3>, int> ids;  // scaled-by-2 lattice key per corner
  auto corner_point = [&](const std::array<int, 8>& cell, int ox, int oy, int oz) {
    // Trilinear point at (ox, oy, oz) / 2 of the reference cube.
    hf::Point3 p{0, 0, 0};
    double wsum = 0.0;
    for (int c = 0; c < 8; ++c) {
      const double wx = hf::HEX_CORNER_XYZ[c][0] ? ox / 2.0 : 1.0 - ox / 2.0;
      const double wy = hf::HEX_CORNER_XYZ[c][1] ? oy / 2.0 : 1.0 - oy / 2.0;
      const double wz = hf::HEX_CORNER_XYZ[c][2] ? oz / 2.0 : 1.0 - oz / 2.0;
      p += mesh.vertices[cell[c]] * (wx * wy * wz);
      wsum += wx * wy * wz;
    }
    return p / wsum;
  };
  auto vid = [&](const hf::Point3& p) {
    const std::array<long, 3> key = {std::lround(p.x * 65536.0), std::lround(p.y * 65536.0),
                                     std::lround(p.z * 65536.0)};
    auto [it, fresh] = ids.try_emplace(key, static_cast<int>(out.vertices.size()));
    if (fresh) out.vertices.push_back(p);
    return it->second;
  };
  for (const auto& cell : mesh.cells) {
    for (int oz = 0; oz < 2; ++oz) {
      for (int oy = 0; oy < 2; ++oy) {
        for (int ox = 0; ox < 2; ++ox) {
          std::array<int, 8> child{};
          for (int c = 0; c < 8; ++c) {
            child[c] = vid(corner_point(cell, ox + hf::HEX_CORNER_XYZ[c][0],
                                        oy + hf::HEX_CORNER_XYZ[c][1],
                                        oz + hf::HEX_CORNER_XYZ[c][2]));
          }
          out.cells.push_back(child);
        }
      }
    }
  }
  return out;
}

TempDir::TempDir(const std::string& tag) {
  const auto base = std::filesystem::temp_directory_path();
  std::mt19937_64 rng(std::random_device{}());
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::filesystem::path p = base / (tag + "_" + std::to_string(rng()));
    std::error_code ec;
    if (std::filesystem::create_directory(p, ec)) {
      path_ = p;
      return;
    }
  }
  throw std::runtime_error("could not create scratch directory under " + base.string());
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

static std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v ? v : fallback;
}

#ifndef HEXFORGE_TEST_DATA_DEFAULT
#define HEXFORGE_TEST_DATA_DEFAULT "tests/data"
#endif
#ifndef HEXFORGE_CLI_PATH_DEFAULT
#define HEXFORGE_CLI_PATH_DEFAULT "hexforge"
#endif

std::string data_dir() { return env_or("HEXFORGE_TEST_DATA", HEXFORGE_TEST_DATA_DEFAULT); }

std::string cli_path() { return env_or("HEXFORGE_CLI_PATH", HEXFORGE_CLI_PATH_DEFAULT); }

int run_command(const std::string& command, std::string* output) {
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + command);
  std::string text;
  char buf[4096];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, got);
  const int status = ::pclose(pipe);
  if (output) *output = text;
  if (status < 0) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

}  // namespace fixtures
