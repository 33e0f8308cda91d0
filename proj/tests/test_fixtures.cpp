#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "curves/json_io.hpp"
#include "curves/oracle.hpp"
#include "curves/resolution_graph.hpp"

using namespace curves;

namespace {

HomotopyScript load_script(const std::string& name) {
  return script_from_json(load_json_file(std::string(FIXTURES_DIR) + "/" + name));
}

std::vector<oracle::BruteEdge> flatten(const ResolutionGraph& g) {
  std::vector<oracle::BruteEdge> out;
  for (const auto& e : g.edges)
    out.push_back({g.vertex_key(e.a), g.vertex_key(e.b), edge_label_name(e.label)});
  return out;
}

}  // namespace

TEST_CASE("frozen flip script: admissible counts, parity, path") {
  HomotopyScript s = load_script("fix_ex2.json");
  Levels lv = elaborate(s);
  REQUIRE(lv.diagrams.size() == 5);

  std::vector<int> xing;
  for (const auto& d : lv.diagrams) xing.push_back((int)d.crossings.size());
  CHECK(xing == std::vector<int>{0, 2, 4, 4, 2});

  CHECK(enumerate_admissible(lv.diagrams[2]).size() == 5);
  CHECK(enumerate_admissible(lv.diagrams[3]).size() == 3);
  CHECK(oracle::brute_admissible(lv.diagrams[2]).size() == 5);
  CHECK(oracle::brute_admissible(lv.diagrams[3]).size() == 3);

  ResolutionGraph g = build_gamma(s);
  CHECK(check_parity(g).ok());
  IsotopyTrace tr = find_isotopy_path(g);
  CHECK(verify_trace(g, tr).ok());
  CHECK(tr.steps.back().to.level == 4);
}

TEST_CASE("frozen push-push-pull-pull script: two horizontal edges required") {
  HomotopyScript s = load_script("fix_yang.json");
  Levels lv = elaborate(s);
  REQUIRE(lv.diagrams.size() == 5);

  std::vector<int> xing;
  for (const auto& d : lv.diagrams) xing.push_back((int)d.crossings.size());
  CHECK(xing == std::vector<int>{0, 2, 4, 2, 0});

  ResolutionGraph g = build_gamma(s);
  CHECK(check_parity(g).ok());
  auto deg = g.degrees();
  int top = (int)g.vertices.size() - 1;
  for (int i = 0; i < (int)deg.size(); ++i) {
    GammaVertexRef v = g.from_flat(i);
    if (v.level == 0 || v.level == top) continue;
    CHECK((deg[i] == 2 || deg[i] == 4 || deg[i] == 6));
  }

  IsotopyTrace tr = find_isotopy_path(g);
  CHECK(verify_trace(g, tr).ok());

  auto edges = flatten(g);
  int last = (int)g.vertices.size() - 1;
  std::vector<std::string> targets;
  for (int i = 0; i < (int)g.vertices[last].size(); ++i)
    targets.push_back(g.vertex_key({last, i}));
  auto paths = oracle::brute_paths(edges, g.vertex_key({0, 0}), targets);
  REQUIRE(!paths.empty());
  size_t fewest = 99;
  bool two_exists = false;
  for (const auto& p : paths) {
    size_t m2b = 0;
    for (size_t ei : p.edges)
      if (edges[ei].label == "M2b") ++m2b;
    fewest = std::min(fewest, m2b);
    if (m2b == 2) two_exists = true;
  }
  CHECK(two_exists);
  CHECK(fewest == 2);
}

TEST_CASE("frozen circle fixture round-trips") {
  CurveDiagram d = diagram_from_json(load_json_file(std::string(FIXTURES_DIR) + "/fix0.json"));
  CHECK(validate_diagram(d).ok());
  CHECK(d.crossings.empty());
  CHECK(d.arcs.size() == 1);
  CHECK(diagram_from_json(diagram_to_json(d)).arcs.size() == 1);
}
