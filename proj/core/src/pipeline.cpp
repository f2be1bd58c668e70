#include "hexforge/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <nlohmann/json.hpp>

#include "hexforge/errors.hpp"
#include "hexforge/hierarchy.hpp"
#include "hexforge/io/bext.hpp"
#include "hexforge/io/keyword.hpp"
#include "hexforge/io/text.hpp"
#include "hexforge/io/vtk.hpp"
#include "hexforge/parammap.hpp"
#include "hexforge/polycube.hpp"
#include "hexforge/segmentation.hpp"

namespace hexforge {

namespace fs = std::filesystem;

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

FeatureSet make_features(const HexMesh& mesh, const HexAdjacency& adj,
                         const SharpOptions& sharp) {
  switch (sharp.mode) {
    case 0:
      return detect_features(mesh, adj, -2.0);  // nothing bends past an impossible dot
    case 1:
      return detect_features(mesh, adj, sharp.tolerance);
    case 2:
      if (sharp.file.empty()) throw ValidationError("sharp mode 2 needs a vertex file");
      return features_from_marked(mesh, adj, read_sharp(sharp.file));
    default:
      throw ValidationError("sharp mode must be 0, 1 or 2");
  }
}

PipelineConfig read_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError("pipeline config " + path + ": " + e.what());
  }

  const fs::path base = fs::absolute(fs::path(path)).parent_path();
  auto resolve = [&](const std::string& p) -> std::string {
    if (p.empty()) return p;
    const fs::path q(p);
    return q.is_absolute() ? q.lexically_normal().string() : (base / q).lexically_normal().string();
  };

  PipelineConfig cfg;
  cfg.config_path = fs::absolute(fs::path(path)).lexically_normal().string();
  try {
    cfg.input = resolve(j.value("input", std::string()));
    cfg.output_dir = resolve(j.value("output_dir", std::string("out")));
    if (j.contains("segment")) {
      const auto& s = j.at("segment");
      cfg.omega = s.value("omega", 0.0);
      cfg.overrides = resolve(s.value("overrides", std::string()));
    }
    if (j.contains("polycube")) {
      const auto& s = j.at("polycube");
      cfg.cells = resolve(s.value("cells", std::string()));
      cfg.corners = resolve(s.value("corners", std::string()));
    }
    if (j.contains("map")) {
      cfg.subdivisions = j.at("map").value("subdivisions", 0);
    }
    if (j.contains("quality")) {
      const auto& s = j.at("quality");
      cfg.pillow_layers = s.value("pillow_layers", 0);
      cfg.smooth_iterations = s.value("smooth_iterations", 50);
      cfg.optimize_iterations = s.value("optimize_iterations", 15);
      cfg.step = s.value("step", 0.001);
    }
    if (j.contains("sharp")) {
      const auto& s = j.at("sharp");
      cfg.sharp.mode = s.value("mode", 1);
      cfg.sharp.tolerance = s.value("tolerance", 0.8);
      cfg.sharp.file = resolve(s.value("file", std::string()));
    }
    if (j.contains("spline")) {
      const auto& s = j.at("spline");
      cfg.global_levels = s.value("global_levels", 0);
      for (const auto& r : s.value("refine_lists", std::vector<std::string>())) {
        cfg.refine_lists.push_back(resolve(r));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("pipeline config " + path + ": " + e.what());
  }
  if (cfg.input.empty()) throw ParseError("pipeline config " + path + ": missing \"input\"");
  if (cfg.subdivisions < 0) throw ParseError("pipeline config: subdivisions must be >= 0");
  if (cfg.global_levels < 0) throw ParseError("pipeline config: global_levels must be >= 0");
  if (cfg.global_levels > 0 && !cfg.refine_lists.empty()) {
    throw ParseError("pipeline config: global_levels and refine_lists are exclusive");
  }
  return cfg;
}

namespace {

struct SurfaceInput {
  TriSurface surf;
  TriAdjacency adj;
};

SurfaceInput load_surface(const std::string& path) {
  SurfaceInput si;
  si.surf = read_keyword_tri(path);
  si.surf.mesh.finalize();
  si.adj = build_tri_adjacency(si.surf.mesh);
  if (!is_closed_surface(si.surf.mesh, si.adj)) {
    throw ValidationError(path + ": surface is not a closed 2-manifold");
  }
  orient_outward(si.surf.mesh);
  return si;
}

void stage_segment(const PipelineConfig& cfg, const std::string& seg_k, std::ostream& log) {
  SurfaceInput si = load_surface(cfg.input);
  CvtOptions opts;
  opts.omega = cfg.omega;
  Segmentation seg = segment_cvt(si.surf.mesh, si.adj, opts, &log);
  if (!cfg.overrides.empty()) apply_overrides(seg, read_override(cfg.overrides, &log));
  log << "[segment] iterations=" << seg.iterations << " converged=" << (seg.converged ? 1 : 0)
      << "\n";
  write_keyword_tri(seg_k, si.surf.mesh, seg.labels, &si.surf.node_ids);
}

void stage_polycube(const PipelineConfig& cfg, const std::string& seg_k,
                    const std::string& structure_k, std::ostream& log) {
  SurfaceInput si = load_surface(seg_k);
  const std::vector<int> corner_ids = detect_corners(si.surf.mesh, si.adj, si.surf.labels);
  const std::vector<PatchQuad> quads =
      build_boundary_quads(si.surf.mesh, si.adj, si.surf.labels, corner_ids);
  std::vector<std::pair<long, Point3>> corner_list;
  for (int id : corner_ids) corner_list.emplace_back(id, si.surf.mesh.vertices[id]);
  if (!cfg.corners.empty()) {
    for (const auto& c : read_corner_file(cfg.corners)) corner_list.push_back(c);
  }
  if (cfg.cells.empty()) {
    throw UncoveredBoundary(
        "no cell file in config: the boundary quads are not covered by any cell; author a "
        "cells file (8 corner ids per row) and list it under polycube.cells");
  }
  const std::vector<std::array<long, 8>> cell_rows = read_cells_file(cfg.cells);
  const PolycubeStructure pc = assemble_polycube(corner_list, quads, cell_rows);
  const PolycubeValidation val = validate_polycube(pc);
  log << "[polycube] corners=" << pc.corners.size() << " quads=" << pc.quads.size()
      << " cells=" << pc.cells.size() << " edges=" << pc.edges.size() << " valid=" << val.ok()
      << "\n";
  if (!val.ok()) throw ValidationError("polycube structure failed validation");
  write_structure_keyword(structure_k, pc);
}

void stage_map(const PipelineConfig& cfg, const std::string& seg_k,
               const std::string& structure_k, const std::string& hex_vtk, std::ostream& log) {
  SurfaceInput si = load_surface(seg_k);
  const std::vector<int> corner_ids = detect_corners(si.surf.mesh, si.adj, si.surf.labels);
  const std::vector<PatchQuad> quads =
      build_boundary_quads(si.surf.mesh, si.adj, si.surf.labels, corner_ids);
  const PolycubeStructure pc = read_structure_keyword(structure_k);
  const MapResult mr =
      map_polycube(si.surf.mesh, si.adj, si.surf.labels, quads, pc, cfg.subdivisions);
  log << "[map] vertices=" << mr.mesh.num_vertices() << " cells=" << mr.mesh.num_cells()
      << " segments=" << mr.segments << "\n";
  write_vtk_hex(hex_vtk, mr.mesh);
}

void stage_quality(const PipelineConfig& cfg, const std::string& hex_vtk,
                   const std::string& quality_vtk, std::ostream& log) {
  HexMesh mesh = read_vtk_hex(hex_vtk);
  for (int layer = 0; layer < cfg.pillow_layers; ++layer) {
    const HexAdjacency adj = build_hex_adjacency(mesh);
    mesh = pillow(mesh, adj);
  }
  const HexAdjacency adj = build_hex_adjacency(mesh);
  const FeatureSet features = make_features(mesh, adj, cfg.sharp);
  long moved = 0;
  if (cfg.smooth_iterations > 0) {
    SmoothOptions so;
    so.step = cfg.step;
    so.iterations = cfg.smooth_iterations;
    moved += smooth(mesh, adj, features, so);
  }
  if (cfg.optimize_iterations > 0) {
    OptimizeOptions oo;
    oo.step = cfg.step;
    oo.iterations = cfg.optimize_iterations;
    moved += optimize(mesh, adj, features, oo);
  }
  const QualityReport q = mesh_quality(mesh);
  log << "[quality] cells=" << mesh.num_cells() << " moves=" << moved << " min_sj=" << q.min_sj
      << " negative=" << q.negative << "\n";
  write_vtk_hex(quality_vtk, mesh, "scaled_jacobian", &q.cell_sj);
}

void stage_spline(const PipelineConfig& cfg, const std::string& quality_vtk,
                  const std::string& bext_path, const std::string& bezier_vtk,
                  std::ostream& log) {
  const HexMesh mesh = read_vtk_hex(quality_vtk);
  const HexAdjacency adj = build_hex_adjacency(mesh);
  const FeatureSet features = make_features(mesh, adj, cfg.sharp);
  std::vector<RefineList> refinements;
  if (cfg.global_levels > 0) {
    long cells = mesh.num_cells();
    for (int level = 0; level < cfg.global_levels; ++level) {
      RefineList rl;
      rl.level = level;
      rl.cells.resize(cells);
      for (long c = 0; c < cells; ++c) rl.cells[c] = static_cast<int>(c);
      refinements.push_back(std::move(rl));
      cells *= 8;
    }
  } else {
    for (std::size_t i = 0; i < cfg.refine_lists.size(); ++i) {
      refinements.push_back(read_refine(cfg.refine_lists[i], static_cast<int>(i), &log));
    }
  }
  const Hierarchy h = build_hierarchy(mesh, features, refinements);
  const BextDoc doc = extract_bext(h);
  log << "[spline] levels=" << h.levels.size() << " functions=" << h.num_functions
      << " elements=" << doc.elements.size() << "\n";
  write_bext(bext_path, doc);
  write_vtk_hex(bezier_vtk, bezier_lattice_mesh(doc));
}

// A stage re-runs when an output is missing or some input is newer.
bool needs_run(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
  fs::file_time_type newest_in = fs::file_time_type::min();
  for (const std::string& p : inputs) {
    if (p.empty()) continue;
    std::error_code ec;
    const auto t = fs::last_write_time(p, ec);
    if (ec) return true;  // let the stage surface the real error
    newest_in = std::max(newest_in, t);
  }
  fs::file_time_type oldest_out = fs::file_time_type::max();
  for (const std::string& p : outputs) {
    std::error_code ec;
    const auto t = fs::last_write_time(p, ec);
    if (ec) return true;
    oldest_out = std::min(oldest_out, t);
  }
  return newest_in > oldest_out;
}

void log_inputs(std::ostream& log, const std::string& stage,
                const std::vector<std::string>& inputs) {
  for (const std::string& p : inputs) {
    if (p.empty()) continue;
    std::error_code ec;
    if (!fs::exists(p, ec) || ec) continue;
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a_file(p)));
    log << "[" << stage << "] input " << p << " fnv1a=" << hex << "\n";
  }
}

}  // namespace

std::vector<StageStatus> run_pipeline(const PipelineConfig& cfg, std::ostream& log) {
  fs::create_directories(cfg.output_dir);
  const auto artifact = [&](const char* name) { return (fs::path(cfg.output_dir) / name).string(); };
  const std::string seg_k = artifact("seg.k");
  const std::string structure_k = artifact("structure.k");
  const std::string hex_vtk = artifact("hex.vtk");
  const std::string quality_vtk = artifact("quality.vtk");
  const std::string bext_path = artifact("spline.bext");
  const std::string bezier_vtk = artifact("spline_bezier.vtk");

  struct Stage {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::function<void()> run;
  };
  const std::vector<Stage> stages = {
      {"segment",
       {cfg.config_path, cfg.input, cfg.overrides},
       {seg_k},
       [&] { stage_segment(cfg, seg_k, log); }},
      {"polycube",
       {cfg.config_path, seg_k, cfg.cells, cfg.corners},
       {structure_k},
       [&] { stage_polycube(cfg, seg_k, structure_k, log); }},
      {"map",
       {cfg.config_path, seg_k, structure_k},
       {hex_vtk},
       [&] { stage_map(cfg, seg_k, structure_k, hex_vtk, log); }},
      {"quality",
       {cfg.config_path, hex_vtk, cfg.sharp.file},
       {quality_vtk},
       [&] { stage_quality(cfg, hex_vtk, quality_vtk, log); }},
      {"spline",
       [&] {
         std::vector<std::string> in = {cfg.config_path, quality_vtk, cfg.sharp.file};
         in.insert(in.end(), cfg.refine_lists.begin(), cfg.refine_lists.end());
         return in;
       }(),
       {bext_path, bezier_vtk},
       [&] { stage_spline(cfg, quality_vtk, bext_path, bezier_vtk, log); }},
  };

  std::vector<StageStatus> out;
  for (const Stage& st : stages) {
    StageStatus status;
    status.name = st.name;
    status.outputs = st.outputs;
    if (needs_run(st.inputs, st.outputs)) {
      log_inputs(log, st.name, st.inputs);
      log << "[" << st.name << "] running\n";
      try {
        st.run();
      } catch (const std::exception& e) {
        log << "[" << st.name << "] failed: " << e.what() << "\n";
        throw;
      }
      status.ran = true;
    } else {
      log << "[" << st.name << "] up to date, skipped\n";
    }
    out.push_back(std::move(status));
  }
  return out;
}

}  // namespace hexforge
