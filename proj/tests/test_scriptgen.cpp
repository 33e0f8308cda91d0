#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "curves/oracle.hpp"
#include "curves/resolution_graph.hpp"
#include "curves/scriptgen.hpp"

using namespace curves;

namespace {

std::vector<oracle::BruteEdge> flatten_edges(const ResolutionGraph& g) {
  std::vector<oracle::BruteEdge> out;
  for (const auto& e : g.edges)
    out.push_back({g.vertex_key(e.a), g.vertex_key(e.b), edge_label_name(e.label)});
  return out;
}

}  // namespace

TEST_CASE("random scripts elaborate and respect the crossing cap") {
  for (uint32_t seed = 0; seed < 40; ++seed) {
    auto s = random_script(seed, 8, 6);
    auto lv = elaborate(s);
    for (const auto& d : lv.diagrams) CHECK(d.crossings.size() <= 6);
  }
}

TEST_CASE("random scripts are reproducible") {
  auto a = random_script(7, 8, 6);
  auto b = random_script(7, 8, 6);
  REQUIRE(a.moves.size() == b.moves.size());
  for (size_t i = 0; i < a.moves.size(); ++i) CHECK(a.moves[i].type == b.moves[i].type);
  CHECK(isomorphic(elaborate(a).diagrams.back(), elaborate(b).diagrams.back()));
}

TEST_CASE("random diagrams hit the requested crossing count") {
  for (int k : {0, 1, 2, 3, 5, 8}) {
    auto d = random_diagram(100 + k, k);
    CHECK((int)d.crossings.size() == k);
    CHECK(validate_diagram(d).ok());
  }
}

TEST_CASE("contraction scripts reach zero crossings") {
  for (uint32_t seed = 0; seed < 10; ++seed) {
    auto d = random_diagram(seed, 4);
    auto s = contraction_script(d, seed);
    auto lv = elaborate(s);
    CHECK(lv.diagrams.back().crossings.empty());
    CHECK(s.terminal == Terminal::point);
  }
}

TEST_CASE("parity and path existence over a random corpus, against the path oracle") {
  int with_m2b = 0;
  for (uint32_t seed = 0; seed < 60; ++seed) {
    auto s = random_script(seed, 8, 6);
    auto g = build_gamma(s);
    auto parity = check_parity(g);
    CHECK(parity.ok());
    auto deg = g.degrees();
    for (int j = 1; j + 1 < (int)g.vertices.size(); ++j)
      for (int i = 0; i < (int)g.vertices[j].size(); ++i) {
        int dg = deg[g.flat_id({j, i})];
        CHECK((dg == 2 || dg == 4 || dg == 6));
      }

    bool engine_found = true;
    IsotopyTrace trace;
    try {
      trace = find_isotopy_path(g);
    } catch (const CurveError& e) {
      CHECK(e.code() == Errc::NoPathFound);
      engine_found = false;
    }
    std::vector<std::string> targets;
    int last = (int)g.vertices.size() - 1;
    for (int i = 0; i < (int)g.vertices[last].size(); ++i) targets.push_back(g.vertex_key({last, i}));
    auto oracle_paths = oracle::brute_paths(flatten_edges(g), g.vertex_key({0, 0}), targets);
    CHECK(engine_found == !oracle_paths.empty());
    if (engine_found) CHECK(verify_trace(g, trace).ok());
    for (const auto& e : g.edges)
      if (e.label == EdgeLabel::M2b) ++with_m2b;
  }
  INFO("M2b edges seen across corpus: " << with_m2b);
}
