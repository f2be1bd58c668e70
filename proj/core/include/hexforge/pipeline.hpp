#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hexforge/hex_mesh.hpp"
#include "hexforge/quality.hpp"

namespace hexforge {

// FNV-1a over the raw bytes of a file; every run logs these for its inputs.
std::uint64_t fnv1a_file(const std::string& path);

struct SharpOptions {
  int mode = 1;           // 0 none, 1 detect by normal angle, 2 marked vertex file
  double tolerance = 0.8; // mode 1: edge is sharp when the quad normals' dot falls below
  std::string file;       // mode 2: vertex index list
};

FeatureSet make_features(const HexMesh& mesh, const HexAdjacency& adj, const SharpOptions& sharp);

struct PipelineConfig {
  std::string config_path;  // set by read_pipeline_config, stales every stage
  std::string input;        // labeled triangle surface (.k)
  std::string output_dir;

  double omega = 0.0;       // segmentation enhancement weight
  std::string overrides;    // optional "element patch" reassignment rows

  std::string cells;        // interior cell rows (8 corner ids each)
  std::string corners;      // optional extra corner rows "id x y z"

  int subdivisions = 0;     // mapping: each polycube cell splits 8^s ways

  int pillow_layers = 0;
  int smooth_iterations = 50;
  int optimize_iterations = 15;
  double step = 0.001;
  SharpOptions sharp;       // shared by quality and spline stages

  int global_levels = 0;                   // spline: refine everything g times
  std::vector<std::string> refine_lists;   // spline: one cell list per level
};

// JSON file; relative paths resolve against the config file's directory.
PipelineConfig read_pipeline_config(const std::string& path);

struct StageStatus {
  std::string name;
  bool ran = false;  // false: outputs newer than inputs, stage skipped
  std::vector<std::string> outputs;
};

// segment -> polycube -> map -> quality -> spline, writing seg.k,
// structure.k, hex.vtk, quality.vtk, spline.bext and spline_bezier.vtk into
// the output directory. A stage re-executes only when an output is missing
// or older than some input, so editing a late-stage input reruns just the
// affected suffix. Failures carry the stage name in the log before the
// stage's error propagates.
std::vector<StageStatus> run_pipeline(const PipelineConfig& config, std::ostream& log);

}  // namespace hexforge
