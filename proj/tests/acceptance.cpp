// Acceptance gate: nine checks, one PASS/FAIL line each. Exits nonzero if
// any check fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "curves/geometry.hpp"
#include "curves/halving.hpp"
#include "curves/json_io.hpp"
#include "curves/oracle.hpp"
#include "curves/resolution_graph.hpp"
#include "curves/scriptgen.hpp"

using namespace curves;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " " << idx << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

HomotopyScript load_script(const std::string& name) {
  return script_from_json(load_json_file(std::string(FIXTURES_DIR) + "/" + name));
}

std::vector<oracle::BruteEdge> flatten(const ResolutionGraph& g) {
  std::vector<oracle::BruteEdge> out;
  for (const auto& e : g.edges)
    out.push_back({g.vertex_key(e.a), g.vertex_key(e.b), edge_label_name(e.label)});
  return out;
}

// 1. Admissible-resolution counts 5 and 3 at levels 2 and 3 of the shipped
// four-move example script, confirmed independently by the brute oracle.
void crit1() {
  std::string detail;
  bool ok = false;
  try {
    Levels lv = elaborate(load_script("fix_ex2.json"));
    size_t e2 = enumerate_admissible(lv.diagrams[2]).size();
    size_t e3 = enumerate_admissible(lv.diagrams[3]).size();
    size_t b2 = oracle::brute_admissible(lv.diagrams[2]).size();
    size_t b3 = oracle::brute_admissible(lv.diagrams[3]).size();
    ok = e2 == 5 && e3 == 3 && b2 == 5 && b3 == 3;
    detail = "levels 2,3: engine " + std::to_string(e2) + "," + std::to_string(e3) + " oracle " +
             std::to_string(b2) + "," + std::to_string(b3);
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(1, "example-script admissible counts are 5 and 3", ok, detail);
}

// 2. Every interior-level vertex of the resolution graph has even degree in
// {2,4,6} across 200 seeded random scripts.
void crit2() {
  std::string detail;
  int bad = 0, scripts = 0;
  try {
    for (uint32_t seed = 0; seed < 200; ++seed) {
      ResolutionGraph g = build_gamma(random_script(seed, 8, 6));
      ++scripts;
      if (!check_parity(g).ok()) ++bad;
      std::vector<int> deg = g.degrees();
      for (int i = 0; i < g.total_vertices(); ++i) {
        int lvl = g.from_flat(i).level;
        if (lvl == 0 || lvl == (int)g.vertices.size() - 1) continue;
        if (deg[i] != 2 && deg[i] != 4 && deg[i] != 6) ++bad;
      }
    }
    detail = std::to_string(scripts) + " scripts, " + std::to_string(bad) + " violations";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(2, "interior vertex degrees even and in {2,4,6} on 200 random scripts", bad == 0 && scripts == 200,
         detail);
}

// 3. find_isotopy_path succeeds on every corpus script and the brute path
// enumeration agrees that a path exists.
void crit3() {
  std::string detail;
  int bad = 0, scripts = 0;
  try {
    for (uint32_t seed = 0; seed < 200; ++seed) {
      HomotopyScript s = random_script(seed, 8, 6);
      ResolutionGraph g = build_gamma(s);
      ++scripts;
      bool engine_ok = false;
      try {
        IsotopyTrace t = find_isotopy_path(g);
        engine_ok = verify_trace(g, t).ok();
      } catch (const CurveError&) {
      }
      int last = (int)g.vertices.size() - 1;
      std::vector<std::string> targets;
      for (int i = 0; i < (int)g.vertices[last].size(); ++i) targets.push_back(g.vertex_key({last, i}));
      bool brute_ok = !oracle::brute_paths(flatten(g), g.vertex_key({0, 0}), targets).empty();
      if (!engine_ok || !brute_ok) ++bad;
    }
    detail = std::to_string(scripts) + " scripts, " + std::to_string(bad) + " disagreements";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(3, "path existence matches the brute oracle on 200 random scripts", bad == 0 && scripts == 200,
         detail);
}

// 4. The shipped two-bigon example script yields a verified trace, and the
// brute enumeration finds a path crossing exactly two horizontal bigon edges.
void crit4() {
  std::string detail;
  bool ok = false;
  try {
    ResolutionGraph g = build_gamma(load_script("fix_yang.json"));
    IsotopyTrace t = find_isotopy_path(g);
    bool verified = verify_trace(g, t).ok();
    int last = (int)g.vertices.size() - 1;
    std::vector<std::string> targets;
    for (int i = 0; i < (int)g.vertices[last].size(); ++i) targets.push_back(g.vertex_key({last, i}));
    std::vector<oracle::BruteEdge> edges = flatten(g);
    auto paths = oracle::brute_paths(edges, g.vertex_key({0, 0}), targets);
    bool two_m2b = false;
    for (const auto& p : paths) {
      size_t m2b = 0;
      for (size_t ei : p.edges)
        if (edges[ei].label == std::string(edge_label_name(EdgeLabel::M2b))) ++m2b;
      if (m2b == 2) two_m2b = true;
    }
    ok = verified && two_m2b;
    detail = std::string("trace ") + (verified ? "verified" : "broken") + ", " +
             std::to_string(paths.size()) + " brute paths";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(4, "two-bigon example: verified trace and a two-M2b brute path", ok, detail);
}

// 5. Doubling a k-crossing curve yields exactly 4k+1 crossings, 50 random
// curves per k in {0,1,2,3}.
void crit5() {
  std::string detail;
  int bad = 0, runs = 0;
  try {
    for (int k = 0; k <= 3; ++k)
      for (uint32_t seed = 0; seed < 50; ++seed) {
        CurveDiagram a = random_diagram(1000 * k + seed, k);
        DoubledCurve dc = perturb_double(a);
        ++runs;
        if ((int)dc.beta.crossings.size() != 4 * k + 1 || !validate_diagram(dc.beta).ok()) ++bad;
      }
    detail = std::to_string(runs) + " curves, " + std::to_string(bad) + " violations";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(5, "doubling gives 4k+1 crossings for k in {0..3}, 50 curves each", bad == 0 && runs == 200,
         detail);
}

// 6. On 200 seeded contractions of a doubled curve (k <= 2): every vertex
// outside the terminal set has degree exactly 2, the walk stops at a terminal
// vertex other than its start, and subcurve extraction re-verifies each step.
void crit6() {
  std::string detail;
  int bad = 0, runs = 0;
  try {
    for (uint32_t seed = 0; seed < 200; ++seed) {
      int k = seed % 3;
      CurveDiagram a = random_diagram(seed, k);
      DoubledCurve dc = perturb_double(a);
      HomotopyScript s = contraction_script(dc.beta, seed);
      s.terminal = Terminal::point;
      ++runs;
      try {
        CrossingTrackGraph g = build_tracking_graph(s, dc);  // enforces degree 2
        bool deg_ok = true;
        for (int lvl = 0; lvl < (int)g.levels.diagrams.size(); ++lvl)
          for (const Crossing& c : g.levels.diagrams[lvl].crossings) {
            TrackVertex v{lvl, c.id};
            if (!g.in_terminal_set(v) && g.degree(v) != 2) deg_ok = false;
          }
        HalvingWalk w = walk_halving_path(g);
        TrackVertex start{0, g.base};
        bool stop_ok = !w.vertices.empty() && g.in_terminal_set(w.vertices.back()) &&
                       !(w.vertices.back() == start);
        extract_subcurves(g, w, dc);  // throws on any per-step mismatch
        if (!deg_ok || !stop_ok) ++bad;
      } catch (const CurveError&) {
        ++bad;
      }
    }
    detail = std::to_string(runs) + " contractions, " + std::to_string(bad) + " failures";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(6, "crossing tracking terminates and verifies on 200 contractions", bad == 0 && runs == 200,
         detail);
}

// 7. Circle-to-polygon demo on a non-convex 12-gon, epsilon 0.01: every
// realized step is embedded and within the length budget.
void crit7() {
  std::string detail;
  bool ok = false;
  try {
    PolylineFrame poly;
    poly.points = {{0, 0},     {6, 0},   {6, 6},   {4.2, 6}, {4.2, 1}, {3.8, 1},
                   {3.8, 6},   {2.2, 6}, {2.2, 1}, {1.8, 1}, {1.8, 6}, {0, 6}};
    SchoenfliesResult res = schoenflies_demo(poly, 40, 1e-2, 1);
    bool lengths = true, embedded = true;
    for (const PolylineFrame& st : res.steps) {
      if (!(st.length() <= res.max_frame_length + 1e-2 + 1e-9)) lengths = false;
      if (!extract_diagram(st).diagram.crossings.empty()) embedded = false;
    }
    ok = lengths && embedded && !res.steps.empty() && !res.script.moves.empty();
    detail = std::to_string(res.steps.size()) + " steps, " + std::to_string(res.script.moves.size()) +
             " moves, max length " + std::to_string(res.max_frame_length);
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(7, "12-gon demo: all realized steps embedded and within the length budget", ok, detail);
}

// 8. Engine and oracle agree on admissible sets and on component counts of
// all 2^k smoothings, over 500 random diagrams with k <= 10.
void crit8() {
  std::string detail;
  int bad = 0, runs = 0;
  try {
    for (uint32_t seed = 0; seed < 500; ++seed) {
      int k = seed % 11;
      CurveDiagram d = random_diagram(seed, k);
      ++runs;
      std::vector<Resolution> eng = enumerate_admissible(d, 12);
      std::vector<Resolution> orc = oracle::brute_admissible(d, 12);
      if (eng.size() != orc.size() || !std::equal(eng.begin(), eng.end(), orc.begin())) ++bad;
      std::vector<CrossingId> ids;
      for (const Crossing& c : d.crossings) ids.push_back(c.id);
      for (uint32_t mask = 0; mask < (1u << ids.size()); ++mask) {
        Resolution r;
        for (size_t i = 0; i < ids.size(); ++i)
          r.signs[ids[i]] = (mask >> i) & 1 ? Sign::negative : Sign::positive;
        if (smooth_component_count(d, r) != oracle::brute_components(d, r)) {
          ++bad;
          break;
        }
      }
    }
    detail = std::to_string(runs) + " diagrams, " + std::to_string(bad) + " disagreements";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(8, "engine/oracle agreement on 500 random diagrams (k <= 10)", bad == 0 && runs == 500, detail);
}

// 9. Every triangle context in the corpora shows exactly one before-only
// class, one after-only class, and three-way fans both ways.
void crit9() {
  std::string detail;
  int bad = 0, triangles = 0;
  try {
    std::vector<HomotopyScript> corpus;
    corpus.push_back(load_script("fix_ex2.json"));
    for (uint32_t seed = 0; seed < 200; ++seed) corpus.push_back(random_script(seed, 8, 6));
    for (const HomotopyScript& s : corpus) {
      Levels lv = elaborate(s);
      for (size_t i = 0; i < s.moves.size(); ++i) {
        if (s.moves[i].type != MoveType::R3) continue;
        ++triangles;
        oracle::R3LocalSummary sum =
            oracle::brute_r3_local(lv.diagrams[i], lv.diagrams[i + 1], s.moves[i].crossings, s.moves[i].face);
        if (sum.before_only_classes != 1 || sum.after_only_classes != 1 || sum.plus_fan != 3 ||
            sum.minus_fan != 3 || !sum.ok_patterns)
          ++bad;
      }
    }
    detail = std::to_string(triangles) + " triangles, " + std::to_string(bad) + " violations";
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(9, "R3 local tables: one class each way and size-3 fans on all corpus triangles",
         bad == 0 && triangles > 0, detail);
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  crit1();
  crit2();
  crit3();
  crit4();
  crit5();
  crit6();
  crit7();
  crit8();
  crit9();
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILURES") << " in " << dt
            << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
