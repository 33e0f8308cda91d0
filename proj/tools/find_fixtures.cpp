// One-off search used to freeze the scripted fixtures under fixtures/.
// Deterministic: first hit in enumeration order wins.

#include <cstdio>
#include <optional>

#include "curves/json_io.hpp"
#include "curves/oracle.hpp"
#include "curves/resolution_graph.hpp"
#include "curves/scriptgen.hpp"

using namespace curves;

namespace {

CurveDiagram circle() {
  CurveDiagram d;
  d.arcs.push_back({0, {0, 1}});
  d.basepoint = 0;
  d.genus = 0;
  return d;
}

std::vector<Move> moves_of_type(const CurveDiagram& d, MoveType t, int cap) {
  std::vector<Move> out;
  for (auto& m : enumerate_moves(d, cap))
    if (m.type == t) out.push_back(m);
  return out;
}

// Script shape R2+, R2+, R3, R2-; admissible counts 5 at level 2 and 3 at
// level 3.
std::optional<HomotopyScript> find_ex2() {
  CurveDiagram d0 = circle();
  for (const Move& m1 : moves_of_type(d0, MoveType::R2plus, 4)) {
    CurveDiagram d1 = apply_move(d0, m1).after;
    for (const Move& m2 : moves_of_type(d1, MoveType::R2plus, 4)) {
      CurveDiagram d2 = apply_move(d1, m2).after;
      if (enumerate_admissible(d2).size() != 5) continue;
      for (const Move& m3 : moves_of_type(d2, MoveType::R3, 4)) {
        CurveDiagram d3 = apply_move(d2, m3).after;
        if (enumerate_admissible(d3).size() != 3) continue;
        for (const Move& m4 : moves_of_type(d3, MoveType::R2minus, 4)) {
          HomotopyScript s;
          s.initial = d0;
          s.moves = {m1, m2, m3, m4};
          s.terminal = Terminal::curve;
          ResolutionGraph g;
          try {
            g = build_gamma(s);
            find_isotopy_path(g);
          } catch (const CurveError&) {
            continue;
          }
          if (!check_parity(g).ok()) continue;
          return s;
        }
      }
    }
  }
  return std::nullopt;
}

// Script shape R2+, R2+, R2-, R2- whose resolution graph needs horizontal
// M2b edges: some start-to-end path has exactly two of them, and none has
// fewer.
std::optional<HomotopyScript> find_yang() {
  CurveDiagram d0 = circle();
  for (const Move& m1 : moves_of_type(d0, MoveType::R2plus, 4)) {
    CurveDiagram d1 = apply_move(d0, m1).after;
    for (const Move& m2 : moves_of_type(d1, MoveType::R2plus, 4)) {
      CurveDiagram d2 = apply_move(d1, m2).after;
      for (const Move& m3 : moves_of_type(d2, MoveType::R2minus, 4)) {
        CurveDiagram d3 = apply_move(d2, m3).after;
        for (const Move& m4 : moves_of_type(d3, MoveType::R2minus, 4)) {
          HomotopyScript s;
          s.initial = d0;
          s.moves = {m1, m2, m3, m4};
          s.terminal = Terminal::curve;
          ResolutionGraph g;
          IsotopyTrace trace;
          try {
            g = build_gamma(s);
            trace = find_isotopy_path(g);
          } catch (const CurveError&) {
            continue;
          }
          if (!check_parity(g).ok() || !verify_trace(g, trace).ok()) continue;

          std::vector<oracle::BruteEdge> edges;
          for (const auto& e : g.edges)
            edges.push_back({g.vertex_key(e.a), g.vertex_key(e.b), edge_label_name(e.label)});
          int last = (int)g.vertices.size() - 1;
          std::vector<std::string> targets;
          for (int i = 0; i < (int)g.vertices[last].size(); ++i) targets.push_back(g.vertex_key({last, i}));
          auto paths = oracle::brute_paths(edges, g.vertex_key({0, 0}), targets);
          if (paths.empty()) continue;
          size_t fewest = 99;
          bool two_exists = false;
          for (const auto& p : paths) {
            size_t m2b = 0;
            for (size_t ei : p.edges)
              if (edges[ei].label == std::string("M2b")) ++m2b;
            fewest = std::min(fewest, m2b);
            if (m2b == 2) two_exists = true;
          }
          if (two_exists && fewest == 2) return s;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

int main() {
  auto ex2 = find_ex2();
  if (!ex2) {
    std::fprintf(stderr, "no ex2-shaped script found\n");
    return 1;
  }
  save_json_file("fixtures/fix_ex2.json", script_to_json(*ex2));
  std::printf("fix_ex2: ");
  for (const auto& d : elaborate(*ex2).diagrams) std::printf("%zu ", d.crossings.size());
  std::printf("\n");

  auto yang = find_yang();
  if (!yang) {
    std::fprintf(stderr, "no yang-shaped script found\n");
    return 1;
  }
  save_json_file("fixtures/fix_yang.json", script_to_json(*yang));
  std::printf("fix_yang: ");
  for (const auto& d : elaborate(*yang).diagrams) std::printf("%zu ", d.crossings.size());
  std::printf("\n");
  return 0;
}
