#include <benchmark/benchmark.h>

#include "hexforge/bezier_extraction.hpp"
#include "hexforge/hex_mesh.hpp"
#include "hexforge/parammap.hpp"
#include "hexforge/quality.hpp"
#include "hexforge/subdivision.hpp"
#include "hexforge/tri_mesh.hpp"

namespace {

hexforge::HexMesh grid_mesh(int n) {
  hexforge::HexMesh m;
  const int s = n + 1;
  for (int k = 0; k < s; ++k) {
    for (int j = 0; j < s; ++j) {
      for (int i = 0; i < s; ++i) {
        m.vertices.push_back({double(i), double(j), double(k)});
      }
    }
  }
  auto id = [s](int i, int j, int k) { return i + s * (j + s * k); };
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        m.cells.push_back({id(i, j, k), id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k),
                           id(i, j, k + 1), id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1),
                           id(i, j + 1, k + 1)});
      }
    }
  }
  return m;
}

// Flat triangulated square patch for the harmonic solve.
struct FlatPatch {
  hexforge::TriMesh mesh;
  hexforge::TriAdjacency adj;
  std::vector<int> labels;
  hexforge::PatchQuad quad;
};

FlatPatch flat_patch(int n) {
  FlatPatch fp;
  const int s = n + 1;
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) {
      fp.mesh.vertices.push_back({double(i) / n, double(j) / n, 0.0});
    }
  }
  auto id = [s](int i, int j) { return i + s * j; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      fp.mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      fp.mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  fp.mesh.finalize();
  fp.adj = hexforge::build_tri_adjacency(fp.mesh);
  fp.labels.assign(fp.mesh.num_triangles(), 0);
  fp.quad.patch = 0;
  fp.quad.corners = {id(0, 0), id(n, 0), id(n, n), id(0, n)};
  for (int i = 0; i <= n; ++i) {
    fp.quad.side_paths[0].push_back(id(i, 0));
    fp.quad.side_paths[1].push_back(id(n, i));
    fp.quad.side_paths[2].push_back(id(n - i, n));
    fp.quad.side_paths[3].push_back(id(0, n - i));
  }
  return fp;
}

void BM_BezierExtraction(benchmark::State& state) {
  const hexforge::HexMesh mesh = grid_mesh(static_cast<int>(state.range(0)));
  const hexforge::HexAdjacency adj = hexforge::build_hex_adjacency(mesh);
  const hexforge::FeatureSet fs = hexforge::detect_features(mesh, adj);
  const hexforge::BezierExtractor ex(mesh, adj, fs);
  for (auto _ : state) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      benchmark::DoNotOptimize(ex.cell(c));
    }
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_BezierExtraction)->Arg(5)->Arg(10);

void BM_ScaledJacobian(benchmark::State& state) {
  const hexforge::HexMesh mesh = grid_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hexforge::mesh_quality(mesh));
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_ScaledJacobian)->Arg(10)->Arg(20);

void BM_Subdivision(benchmark::State& state) {
  const hexforge::HexMesh mesh = grid_mesh(static_cast<int>(state.range(0)));
  const hexforge::HexAdjacency adj = hexforge::build_hex_adjacency(mesh);
  const hexforge::FeatureSet fs = hexforge::detect_features(mesh, adj);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hexforge::subdivide(mesh, adj, fs));
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_Subdivision)->Arg(4)->Arg(8);

void BM_HarmonicSolve(benchmark::State& state) {
  const FlatPatch fp = flat_patch(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hexforge::harmonic_parameterize(fp.mesh, fp.adj, fp.labels, fp.quad));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HarmonicSolve)->Arg(16)->Arg(48);

}  // namespace

BENCHMARK_MAIN();
