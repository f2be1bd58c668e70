// hexforge command line: segment | polycube | map | quality | spline | pipeline.
// Exit codes: 0 success, 1 processing error, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "hexforge/errors.hpp"
#include "hexforge/hierarchy.hpp"
#include "hexforge/io/bext.hpp"
#include "hexforge/io/keyword.hpp"
#include "hexforge/io/text.hpp"
#include "hexforge/io/vtk.hpp"
#include "hexforge/parammap.hpp"
#include "hexforge/pipeline.hpp"
#include "hexforge/polycube.hpp"
#include "hexforge/quality.hpp"
#include "hexforge/segmentation.hpp"

namespace hf = hexforge;
namespace fs = std::filesystem;

namespace {

void apply_thread_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("HEXFORGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

void log_input(const std::string& path) {
  if (path.empty() || !fs::exists(path)) return;
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(hf::fnv1a_file(path)));
  std::cerr << "input " << path << " fnv1a=" << hex << "\n";
}

struct LoadedSurface {
  hf::TriSurface surf;
  hf::TriAdjacency adj;
};

LoadedSurface load_surface(const std::string& path) {
  LoadedSurface ls;
  ls.surf = hf::read_keyword_tri(path);
  ls.surf.mesh.finalize();
  ls.adj = hf::build_tri_adjacency(ls.surf.mesh);
  if (!hf::is_closed_surface(ls.surf.mesh, ls.adj)) {
    throw hf::ValidationError(path + ": surface is not a closed 2-manifold");
  }
  hf::orient_outward(ls.surf.mesh);
  return ls;
}

void warn_constraints(const LoadedSurface& ls, const std::vector<int>& labels) {
  const hf::ConstraintReport rep =
      hf::validate_polycube_constraints(ls.surf.mesh, ls.adj, labels);
  if (rep.ok()) return;
  std::cerr << "warning: segmentation violates polycube constraints:";
  if (!rep.opposite_adjacent.empty()) {
    std::cerr << " opposite-patch adjacencies=" << rep.opposite_adjacent.size();
  }
  if (!rep.weak_corners.empty()) std::cerr << " weak-corners=" << rep.weak_corners.size();
  if (!rep.bad_boundary_patches.empty()) {
    std::cerr << " bad-boundary-patches=" << rep.bad_boundary_patches.size();
  }
  std::cerr << "\n";
}

struct SegmentArgs {
  std::string input, output, overrides;
  double omega = 0.0;
};

void run_segment(const SegmentArgs& a) {
  log_input(a.input);
  log_input(a.overrides);
  std::cerr << "segment omega=" << a.omega << "\n";
  LoadedSurface ls = load_surface(a.input);
  hf::CvtOptions opts;
  opts.omega = a.omega;
  hf::Segmentation seg = hf::segment_cvt(ls.surf.mesh, ls.adj, opts, &std::cerr);
  if (!a.overrides.empty()) {
    hf::apply_overrides(seg, hf::read_override(a.overrides, &std::cerr));
  }
  const hf::PatchReport rep = hf::patch_report(ls.surf.mesh, ls.adj, seg.labels);
  std::cerr << "segment iterations=" << seg.iterations << " converged=" << seg.converged
            << " patches=" << rep.patches.size()
            << " single_triangle_islands=" << rep.single_triangle_islands << "\n";
  for (const hf::PatchInfo& pi : rep.patches) {
    std::cerr << "patch " << pi.label << " triangles=" << pi.triangles << " area=" << pi.area
              << " boundary_length=" << pi.boundary_length << " islands=" << pi.islands;
    for (int seed : pi.island_seeds) std::cerr << " island_seed=" << seed;
    std::cerr << "\n";
  }
  warn_constraints(ls, seg.labels);
  hf::write_keyword_tri(a.output, ls.surf.mesh, seg.labels, &ls.surf.node_ids);
}

struct PolycubeArgs {
  std::string input, output, cells, corners;
  int write_aux = 0;
};

void run_polycube(const PolycubeArgs& a) {
  log_input(a.input);
  log_input(a.cells);
  log_input(a.corners);
  LoadedSurface ls = load_surface(a.input);
  warn_constraints(ls, ls.surf.labels);
  const std::vector<int> corner_ids = hf::detect_corners(ls.surf.mesh, ls.adj, ls.surf.labels);
  const std::vector<hf::PatchQuad> quads =
      hf::build_boundary_quads(ls.surf.mesh, ls.adj, ls.surf.labels, corner_ids);
  std::vector<std::pair<long, hf::Point3>> corner_list;
  for (int id : corner_ids) corner_list.emplace_back(id, ls.surf.mesh.vertices[id]);
  if (!a.corners.empty()) {
    for (const auto& c : hf::read_corner_file(a.corners)) corner_list.push_back(c);
  }
  std::vector<std::array<long, 8>> cell_rows;
  if (!a.cells.empty()) cell_rows = hf::read_cells_file(a.cells);
  const hf::PolycubeStructure pc = hf::assemble_polycube(corner_list, quads, cell_rows);
  const hf::PolycubeValidation val = hf::validate_polycube(pc);
  std::cerr << "polycube corners=" << pc.corners.size() << " quads=" << pc.quads.size()
            << " edges=" << pc.edges.size() << " cells=" << pc.cells.size()
            << " valid=" << val.ok() << "\n";
  if (!val.ok()) throw hf::ValidationError("polycube structure failed validation");
  hf::write_structure_keyword(a.output, pc);
  if (a.write_aux) {
    fs::path stem(a.output);
    stem.replace_extension("");
    std::vector<std::pair<long, hf::Point3>> corners;
    for (const auto& c : pc.corners) corners.emplace_back(c.id, c.pos);
    std::vector<std::array<long, 2>> edges;
    for (const auto& e : pc.edges) {
      edges.push_back({pc.corners[e[0]].id, pc.corners[e[1]].id});
    }
    std::vector<std::array<long, 4>> faces;
    for (const auto& q : pc.quads) {
      faces.push_back({pc.corners[q[0]].id, pc.corners[q[1]].id, pc.corners[q[2]].id,
                       pc.corners[q[3]].id});
    }
    hf::write_corner_file(stem.string() + "_corners.txt", corners);
    hf::write_edge_file(stem.string() + "_edges.txt", edges);
    hf::write_face_file(stem.string() + "_faces.txt", faces);
  }
}

struct MapArgs {
  std::string input, structure, output;
  int subdivisions = 0;
};

void run_map(const MapArgs& a) {
  log_input(a.input);
  log_input(a.structure);
  std::cerr << "map subdivisions=" << a.subdivisions << "\n";
  LoadedSurface ls = load_surface(a.input);
  const std::vector<int> corner_ids = hf::detect_corners(ls.surf.mesh, ls.adj, ls.surf.labels);
  const std::vector<hf::PatchQuad> quads =
      hf::build_boundary_quads(ls.surf.mesh, ls.adj, ls.surf.labels, corner_ids);
  const hf::PolycubeStructure pc = hf::read_structure_keyword(a.structure);
  const hf::MapResult mr =
      hf::map_polycube(ls.surf.mesh, ls.adj, ls.surf.labels, quads, pc, a.subdivisions);
  std::cerr << "map vertices=" << mr.mesh.num_vertices() << " cells=" << mr.mesh.num_cells()
            << "\n";
  hf::write_vtk_hex(a.output, mr.mesh);
}

struct QualityArgs {
  std::string input, output, sharp_file;
  int mode = 0;  // 0 report only, 1 pillow, 2 smooth, 3 optimize
  int count = -1;
  double step = 0.001;
  int sharp_mode = 1;
  double tolerance = 0.8;
  bool report = false;
};

void run_quality(const QualityArgs& a) {
  log_input(a.input);
  log_input(a.sharp_file);
  std::cerr << "quality mode=" << a.mode << " n=" << a.count << " step=" << a.step
            << " sharp=" << a.sharp_mode << " tol=" << a.tolerance << "\n";
  hf::HexMesh mesh = hf::read_vtk_hex(a.input);
  hf::SharpOptions sharp;
  sharp.mode = a.sharp_mode;
  sharp.tolerance = a.tolerance;
  sharp.file = a.sharp_file;
  if (a.mode == 1) {
    const int layers = a.count < 0 ? 1 : a.count;
    for (int i = 0; i < layers; ++i) {
      const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
      mesh = hf::pillow(mesh, adj);
    }
    std::cerr << "quality pillow layers=" << layers << "\n";
  } else if (a.mode == 2) {
    const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
    const hf::FeatureSet features = hf::make_features(mesh, adj, sharp);
    hf::SmoothOptions so;
    so.step = a.step;
    so.iterations = a.count < 0 ? 50 : a.count;
    const long moves = hf::smooth(mesh, adj, features, so);
    std::cerr << "quality smooth moves=" << moves << "\n";
  } else if (a.mode == 3) {
    const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
    const hf::FeatureSet features = hf::make_features(mesh, adj, sharp);
    hf::OptimizeOptions oo;
    oo.step = a.step;
    oo.iterations = a.count < 0 ? 15 : a.count;
    const long moves = hf::optimize(mesh, adj, features, oo);
    std::cerr << "quality optimize moves=" << moves << "\n";
  }
  const hf::QualityReport q = hf::mesh_quality(mesh);
  if (a.report) {
    std::cout << "cells " << mesh.num_cells() << "\n"
              << "min_sj " << q.min_sj << "\n"
              << "max_sj " << q.max_sj << "\n"
              << "mean_sj " << q.mean_sj << "\n"
              << "negative " << q.negative << "\n";
  }
  if (!a.output.empty()) hf::write_vtk_hex(a.output, mesh, "scaled_jacobian", &q.cell_sj);
}

struct SplineArgs {
  std::string input, output, sharp_file;
  int sharp_mode = 1;
  double tolerance = 0.8;
  int global_levels = 0;
  bool local = false;
  std::vector<std::string> rfid;
  bool construct = false;
};

void run_spline(const SplineArgs& a) {
  log_input(a.input);
  log_input(a.sharp_file);
  for (const auto& r : a.rfid) log_input(r);
  std::cerr << "spline sharp=" << a.sharp_mode << " tol=" << a.tolerance
            << " g=" << a.global_levels << " local=" << a.local << "\n";
  if (a.local && a.rfid.empty()) {
    throw hf::InvalidRefineList("local refinement requested without --rfid files");
  }
  const hf::HexMesh mesh = hf::read_vtk_hex(a.input);
  const hf::HexAdjacency adj = hf::build_hex_adjacency(mesh);
  hf::SharpOptions sharp;
  sharp.mode = a.sharp_mode;
  sharp.tolerance = a.tolerance;
  sharp.file = a.sharp_file;
  const hf::FeatureSet features = hf::make_features(mesh, adj, sharp);
  std::vector<hf::RefineList> refinements;
  if (a.global_levels > 0) {
    long cells = mesh.num_cells();
    for (int level = 0; level < a.global_levels; ++level) {
      hf::RefineList rl;
      rl.level = level;
      rl.cells.resize(cells);
      for (long c = 0; c < cells; ++c) rl.cells[c] = static_cast<int>(c);
      refinements.push_back(std::move(rl));
      cells *= 8;
    }
  } else if (a.local) {
    for (std::size_t i = 0; i < a.rfid.size(); ++i) {
      refinements.push_back(hf::read_refine(a.rfid[i], static_cast<int>(i), &std::cerr));
    }
  }
  const hf::Hierarchy h = hf::build_hierarchy(mesh, features, refinements);
  const hf::BextDoc doc = hf::extract_bext(h);
  std::cerr << "spline levels=" << h.levels.size() << " functions=" << h.num_functions
            << " elements=" << doc.elements.size() << "\n";
  hf::write_bext(a.output, doc);
  fs::path viz(a.output);
  viz.replace_extension("");
  hf::write_vtk_hex(viz.string() + "_bezier.vtk", hf::bezier_lattice_mesh(doc));
}

void run_pipeline_cmd(const std::string& config) {
  log_input(config);
  const hf::PipelineConfig cfg = hf::read_pipeline_config(config);
  const std::vector<hf::StageStatus> statuses = hf::run_pipeline(cfg, std::cerr);
  for (const auto& s : statuses) {
    std::cout << s.name << " " << (s.ran ? "ran" : "skipped") << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();

  CLI::App app{"hexforge: polycube hex meshing and hierarchical tricubic splines"};
  app.require_subcommand(1);

  SegmentArgs seg;
  CLI::App* c_seg = app.add_subcommand("segment", "Label a triangle surface by normal clustering");
  c_seg->add_option("-i,--input", seg.input, "triangle surface (.k)")->required();
  c_seg->add_option("-o,--output", seg.output, "labeled surface (.k)")->required();
  c_seg->add_option("-m,--overrides", seg.overrides, "manual 'element patch' rows");
  c_seg->add_option("-l,--omega", seg.omega, "boundary enhancement weight")
      ->check(CLI::NonNegativeNumber);

  PolycubeArgs pcb;
  CLI::App* c_pcb = app.add_subcommand("polycube", "Build the polycube structure from labels");
  c_pcb->add_option("-i,--input", pcb.input, "labeled surface (.k)")->required();
  c_pcb->add_option("-o,--output", pcb.output, "structure file (.k)")->required();
  c_pcb->add_option("-c", pcb.write_aux, "1: also write corner/edge/face files")
      ->check(CLI::Range(0, 1));
  c_pcb->add_option("--cells", pcb.cells, "interior cell rows (8 corner ids)");
  c_pcb->add_option("--corners", pcb.corners, "extra corner rows 'id x y z'");

  MapArgs map;
  CLI::App* c_map = app.add_subcommand("map", "Map the polycube onto the surface volume");
  c_map->add_option("-i,--input", map.input, "labeled surface (.k)")->required();
  c_map->add_option("-p,--structure", map.structure, "polycube structure (.k)")->required();
  c_map->add_option("-o,--output", map.output, "hex mesh (.vtk)")->required();
  c_map->add_option("-s,--subdivisions", map.subdivisions, "cell subdivision level")
      ->check(CLI::Range(0, 12));

  QualityArgs qa;
  CLI::App* c_q = app.add_subcommand("quality", "Pillow, smooth or optimize a hex mesh");
  c_q->add_option("-i,--input", qa.input, "hex mesh (.vtk)")->required();
  c_q->add_flag("-Q,--report", qa.report, "print scaled Jacobian statistics");
  c_q->add_option("-m,--mode", qa.mode, "1 pillow, 2 smooth, 3 optimize")->check(CLI::Range(1, 3));
  c_q->add_option("-n,--count", qa.count, "layers (pillow) or iterations");
  c_q->add_option("-p,--step", qa.step, "movement step fraction")
      ->check(CLI::Range(1e-12, 1.0));
  c_q->add_option("-s,--sharp-mode", qa.sharp_mode, "0 none, 1 detect, 2 marked file")
      ->check(CLI::Range(0, 2));
  c_q->add_option("-t,--tolerance", qa.tolerance, "sharp normal dot threshold");
  c_q->add_option("--sharp", qa.sharp_file, "marked vertex file for -s 2");
  c_q->add_option("-o,--output", qa.output, "improved mesh (.vtk)");

  SplineArgs sp;
  CLI::App* c_sp = app.add_subcommand("spline", "Build hierarchical splines and BEXT output");
  c_sp->add_option("-i,--input", sp.input, "hex mesh (.vtk)")->required();
  c_sp->add_flag("-S,--spline", sp.construct, "construct the spline (compatibility switch)");
  c_sp->add_option("-s,--sharp-mode", sp.sharp_mode, "0 none, 1 detect, 2 marked file")
      ->check(CLI::Range(0, 2));
  c_sp->add_option("-t,--tolerance", sp.tolerance, "sharp normal dot threshold");
  c_sp->add_option("--sharp", sp.sharp_file, "marked vertex file for -s 2");
  CLI::Option* opt_g =
      c_sp->add_option("-g,--global", sp.global_levels, "global refinement levels")
          ->check(CLI::Range(0, 8));
  CLI::Option* opt_l = c_sp->add_flag("-l,--local", sp.local, "local refinement via --rfid");
  opt_g->excludes(opt_l);
  c_sp->add_option("--rfid", sp.rfid, "refine list file, one per level in order");
  c_sp->add_option("-o,--output", sp.output, "BEXT file")->required();

  std::string config;
  CLI::App* c_pl = app.add_subcommand("pipeline", "Run all stages from a JSON config");
  c_pl->add_option("config", config, "pipeline configuration (.json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_seg->parsed()) run_segment(seg);
    if (c_pcb->parsed()) run_polycube(pcb);
    if (c_map->parsed()) run_map(map);
    if (c_q->parsed()) run_quality(qa);
    if (c_sp->parsed()) run_spline(sp);
    if (c_pl->parsed()) run_pipeline_cmd(config);
  } catch (const hf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
