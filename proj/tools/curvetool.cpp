// Command-line surface for the curve pipeline.
//
// Exit codes: 0 success, 2 input error, 3 non-generic geometry,
// 4 internal invariant violation. Never throws out of main.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "curves/geometry.hpp"
#include "curves/halving.hpp"
#include "curves/json_io.hpp"
#include "curves/oracle.hpp"
#include "curves/resolution_graph.hpp"
#include "curves/scriptgen.hpp"

namespace fs = std::filesystem;
using namespace curves;
using nlohmann::json;

namespace {

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::NonGenericFrame:
    case Errc::AmbiguousGap:
    case Errc::MatchFailure:
    case Errc::RadiusTooLarge:
    case Errc::MissingAnchors:
    case Errc::SimplicityViolated:
      return 3;
    case Errc::NoPathFound:
    case Errc::FanCountViolation:
    case Errc::DegreeViolation:
    case Errc::SideInconsistency:
    case Errc::NonTermination:
      return 4;
    default:
      return 2;
  }
}

json vertex_json(const ResolutionGraph& g, GammaVertexRef v) {
  json j;
  j["level"] = v.level;
  j["signs"] = g.vertices[v.level][v.index].key();
  return j;
}

json trace_to_json(const ResolutionGraph& g, const IsotopyTrace& t) {
  json j;
  j["final_orientation"] = std::string(1, t.final_orientation);
  j["steps"] = json::array();
  for (const auto& st : t.steps) {
    json sj;
    sj["from"] = vertex_json(g, st.from);
    sj["to"] = vertex_json(g, st.to);
    sj["label"] = edge_label_name(st.label);
    sj["direction"] = st.direction;
    j["steps"].push_back(sj);
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CurveError(Errc::SchemaError, "cannot write " + path);
  out << text;
}

int cmd_validate(const std::string& script_path) {
  HomotopyScript s = script_from_json(load_json_file(script_path));
  Levels lv = elaborate(s);
  std::string sep;
  for (const auto& d : lv.diagrams) {
    std::cout << sep << d.crossings.size();
    sep = " ";
  }
  std::cout << "\n";
  return 0;
}

int cmd_isotope(const std::string& script_path, const std::string& out_path) {
  HomotopyScript s = script_from_json(load_json_file(script_path));
  ResolutionGraph g = build_gamma(s);
  ParityReport parity = check_parity(g);
  if (!parity.ok()) throw CurveError(Errc::DegreeViolation, "odd interior vertex degree");
  IsotopyTrace trace = find_isotopy_path(g);
  TraceReport rep = verify_trace(g, trace);
  if (!rep.ok()) throw CurveError(Errc::SideInconsistency, rep.violations[0].what);
  if (!out_path.empty()) save_json_file(out_path, trace_to_json(g, trace));
  std::cout << trace.final_orientation << "\n";
  return 0;
}

int cmd_halve(const std::string& alpha_path, const std::string& script_path, uint32_t seed,
              const std::string& out_path) {
  CurveDiagram alpha = diagram_from_json(load_json_file(alpha_path));
  DoubledCurve dc = perturb_double(alpha);
  HomotopyScript s;
  if (!script_path.empty()) {
    s = script_from_json(load_json_file(script_path));
    // Rebase onto the computed doubled curve: the script must be written over
    // exactly its labels.
    if (canonical_signature(s.initial) != canonical_signature(dc.beta))
      throw CurveError(Errc::OperandMissing, "script initial is not the doubled curve");
    s.initial = dc.beta;
    Levels probe = elaborate(s);  // moves must still apply after the rebase
    (void)probe;
  } else {
    s = contraction_script(dc.beta, seed);
    s.terminal = Terminal::point;
  }
  CrossingTrackGraph g = build_tracking_graph(s, dc);
  HalvingWalk walk = walk_halving_path(g);
  SubcurveSelection sel = extract_subcurves(g, walk, dc);
  if (!out_path.empty()) save_json_file(out_path, halving_to_json(sel));
  std::cout << (sel.outcome == SubcurveSelection::Outcome::point
                    ? std::string("point")
                    : "resume_at_level " + std::to_string(sel.resume_level))
            << "\n";
  return 0;
}

int cmd_ingest(const std::string& frames_path, const std::string& out_path) {
  PolylineHomotopy h = homotopy_from_json(load_json_file(frames_path));
  auto [script, log] = detect_events(h);
  if (!out_path.empty()) save_json_file(out_path, script_to_json(script));
  std::string sep;
  for (const auto& e : log.events) {
    std::cout << sep << e;
    sep = " ";
  }
  std::cout << "\n";
  return 0;
}

int cmd_demo_schoenflies(const std::string& polygon_path, const std::string& out_dir, int samples,
                         double epsilon, double radius, uint32_t seed, bool svg) {
  PolylineHomotopy h = homotopy_from_json(load_json_file(polygon_path));
  if (h.frames.empty()) throw CurveError(Errc::SchemaError, "polygon file has no frames");
  SchoenfliesResult res = schoenflies_demo(h.frames[0], samples, epsilon, seed, radius);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    save_json_file((fs::path(out_dir) / "script.json").string(), script_to_json(res.script));
    save_json_file((fs::path(out_dir) / "trace.json").string(), trace_to_json(res.gamma, res.trace));
    if (svg) {
      SvgOptions opt;
      for (size_t i = 0; i < res.steps.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "step_%04zu.svg", i);
        write_text((fs::path(out_dir) / name).string(), render_svg(res.steps[i], opt));
      }
    }
  }
  std::cout << "steps " << res.steps.size() << " max_length " << res.max_frame_length << " rho "
            << res.rho << "\n";
  return 0;
}

// Input for the oracle commands: a bare diagram, or a script plus a level.
CurveDiagram oracle_input(const std::string& path, int level) {
  json j = load_json_file(path);
  if (j.is_object() && j.contains("initial")) {
    Levels lv = elaborate(script_from_json(j));
    if (level < 0) level = (int)lv.diagrams.size() - 1;
    if (level >= (int)lv.diagrams.size())
      throw CurveError(Errc::SchemaError, "level out of range");
    return lv.diagrams[level];
  }
  return diagram_from_json(j);
}

int cmd_oracle_resolutions(const std::string& path, int level, int cap) {
  CurveDiagram d = oracle_input(path, level);
  std::vector<Resolution> rs = oracle::brute_admissible(d, cap);
  json j;
  j["oracle"] = "resolutions";
  j["count"] = rs.size();
  j["keys"] = json::array();
  for (const auto& r : rs) j["keys"].push_back(r.key());
  std::cout << j.dump() << "\n" << rs.size() << "\n";
  return 0;
}

int cmd_oracle_paths(const std::string& path) {
  HomotopyScript s = script_from_json(load_json_file(path));
  ResolutionGraph g = build_gamma(s);
  std::vector<oracle::BruteEdge> edges;
  for (const auto& e : g.edges)
    edges.push_back({g.vertex_key(e.a), g.vertex_key(e.b), edge_label_name(e.label)});
  int last = (int)g.vertices.size() - 1;
  std::vector<std::string> targets;
  for (int i = 0; i < (int)g.vertices[last].size(); ++i) targets.push_back(g.vertex_key({last, i}));
  auto paths = oracle::brute_paths(edges, g.vertex_key({0, 0}), targets);
  size_t shortest = 0;
  for (const auto& p : paths)
    if (shortest == 0 || p.edges.size() < shortest) shortest = p.edges.size();
  json j;
  j["oracle"] = "paths";
  j["count"] = paths.size();
  j["shortest"] = shortest;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_oracle_r3(const std::string& path, int jobs) {
  HomotopyScript s = script_from_json(load_json_file(path));
  Levels lv = elaborate(s);
  struct Item {
    size_t gap;
    json report;
  };
  std::vector<std::pair<size_t, const Move*>> r3s;
  for (size_t i = 0; i < s.moves.size(); ++i)
    if (s.moves[i].type == MoveType::R3) r3s.push_back({i, &s.moves[i]});
  auto analyze = [&](size_t idx) {
    auto [gap, mv] = r3s[idx];
    std::vector<CrossingId> triple = mv->crossings;
    oracle::R3LocalSummary sum =
        oracle::brute_r3_local(lv.diagrams[gap], lv.diagrams[gap + 1], triple, mv->face);
    json j;
    j["oracle"] = "r3";
    j["gap"] = gap;
    j["before_only"] = sum.before_only_classes;
    j["after_only"] = sum.after_only_classes;
    j["plus_fan"] = sum.plus_fan;
    j["minus_fan"] = sum.minus_fan;
    j["ok_patterns"] = sum.ok_patterns;
    return j;
  };
  std::vector<json> reports(r3s.size());
  if (jobs > 1 && r3s.size() > 1) {
    std::vector<std::future<json>> futs;
    for (size_t i = 0; i < r3s.size(); ++i)
      futs.push_back(std::async(std::launch::async, analyze, i));
    for (size_t i = 0; i < r3s.size(); ++i) reports[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < r3s.size(); ++i) reports[i] = analyze(i);
  }
  for (const auto& j : reports) std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Immersed-curve homotopy-to-isotopy pipeline"};
  app.require_subcommand(1);

  std::string in_path, aux_path, out_path, svg_dir;
  double epsilon = 0.01, radius = 0.0;
  uint32_t seed = 0;
  int jobs = 1, cap = kDefaultEnumerationCap, level = -1, samples = 24;
  bool svg = false;

  auto* validate = app.add_subcommand("validate", "Parse and elaborate a move script");
  validate->add_option("script", in_path)->required();

  auto* isotope = app.add_subcommand("isotope", "Trace a script through its resolution graph");
  isotope->add_option("script", in_path)->required();
  isotope->add_option("--out", out_path, "Trace JSON output path");

  auto* halve = app.add_subcommand("halve", "Track crossings of a doubled curve contraction");
  halve->add_option("alpha", in_path)->required();
  halve->add_option("script", aux_path, "Contraction script over the doubled curve");
  halve->add_option("--out", out_path, "Halving JSON output path");
  halve->add_option("--seed", seed, "Seed for the generated contraction when no script is given");

  auto* ingest = app.add_subcommand("ingest", "Convert polyline keyframes to a move script");
  ingest->add_option("keyframes", in_path)->required();
  ingest->add_option("--out", out_path, "Script JSON output path");

  auto* demo = app.add_subcommand("demo", "Demos");
  auto* schoen = demo->add_subcommand("schoenflies", "Circle-to-polygon isotopy demo");
  schoen->add_option("polygon", in_path)->required();
  schoen->add_option("--out", out_path, "Output directory");
  schoen->add_option("--samples", samples, "Number of homotopy samples");
  schoen->add_option("--epsilon", epsilon, "Length budget");
  schoen->add_option("--radius", radius, "Disk radius override");
  schoen->add_option("--seed", seed, "Jitter seed");
  schoen->add_flag("--svg", svg, "Write one SVG per realized step");

  auto* orc = app.add_subcommand("oracle", "Brute-force cross-checks");
  auto* orc_res = orc->add_subcommand("resolutions", "Admissible resolutions of a diagram");
  orc_res->add_option("input", in_path, "Diagram JSON, or script JSON with --level")->required();
  orc_res->add_option("--level", level, "Script level (default: last)");
  orc_res->add_option("--cap", cap, "Crossing cap");
  auto* orc_paths = orc->add_subcommand("paths", "Exhaustive path search in the resolution graph");
  orc_paths->add_option("script", in_path)->required();
  auto* orc_r3 = orc->add_subcommand("r3", "Local tables across each R3 move of a script");
  orc_r3->add_option("script", in_path)->required();
  orc_r3->add_option("--jobs", jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(in_path);
    if (*isotope) return cmd_isotope(in_path, out_path);
    if (*halve) return cmd_halve(in_path, aux_path, seed, out_path);
    if (*ingest) return cmd_ingest(in_path, out_path);
    if (*schoen) return cmd_demo_schoenflies(in_path, out_path, samples, epsilon, radius, seed, svg);
    if (*orc_res) return cmd_oracle_resolutions(in_path, level, cap);
    if (*orc_paths) return cmd_oracle_paths(in_path);
    if (*orc_r3) return cmd_oracle_r3(in_path, jobs);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const CurveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
