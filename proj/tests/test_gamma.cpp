#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "curves/oracle.hpp"
#include "curves/resolution_graph.hpp"
#include "fixtures.hpp"

using namespace curves;
using oracle::brute_admissible;
using oracle::brute_r3_local;
using fixtures::fix0;
using fixtures::fix_bigon;
using fixtures::fix_kink;

namespace {

Move r1plus(ArcId a, KinkSide s, CrossingId z) {
  Move m;
  m.type = MoveType::R1plus;
  m.arc = a;
  m.side = s;
  m.new_crossing = z;
  return m;
}
Move r2plus(ArcId a, ArcId b, RelOrientation o, CrossingId z1, CrossingId z2) {
  Move m;
  m.type = MoveType::R2plus;
  m.arcs = {a, b};
  m.orientation = o;
  m.new_crossings = {z1, z2};
  return m;
}
Move r2minus(CrossingId c1, CrossingId c2) {
  Move m;
  m.type = MoveType::R2minus;
  m.crossings = {c1, c2};
  return m;
}

}  // namespace

TEST_CASE("bigon classification census on the self-push curve") {
  auto d = fix_bigon();
  std::map<BigonClass, int> census;
  std::map<BigonClass, std::set<int>> comps;
  for (Sign s1 : {Sign::positive, Sign::negative})
    for (Sign s2 : {Sign::positive, Sign::negative}) {
      BigonClass c = classify_bigon(d, 0, 1, s1, s2);
      ++census[c];
      Resolution r;
      r.signs = {{0, s1}, {1, s2}};
      comps[c].insert(smooth_component_count(d, r));
    }
  CHECK(census[BigonClass::Mixed] == 1);
  CHECK(census[BigonClass::Separable] == 1);
  CHECK(census[BigonClass::Trapped] == 2);
  // the separable smoothing undoes the self push: one curve
  CHECK(comps[BigonClass::Separable] == std::set<int>{1});
  // closing the bigon always detaches a circle
  for (int n : comps[BigonClass::Mixed]) CHECK(n >= 2);
}

TEST_CASE("classify_bigon demands a bigon") {
  CHECK_THROWS_AS(classify_bigon(fix_kink(), 0, 0, Sign::positive, Sign::positive), CurveError);
  auto d = fix_bigon();
  CHECK_THROWS_AS(classify_bigon(d, 0, 7, Sign::positive, Sign::positive), CurveError);
}

TEST_CASE("gamma of a push-and-pull script, with path and verification") {
  HomotopyScript s;
  s.initial = fix0();
  s.moves = {r2plus(0, 0, RelOrientation::antiparallel, 0, 1), r2minus(0, 1)};
  auto g = build_gamma(s);
  REQUIRE(g.vertices.size() == 3);
  CHECK(g.vertices[0].size() == 1);
  CHECK(g.vertices[2].size() == 1);
  // level 1: admissible resolutions of the bigon curve
  CHECK(g.vertices[1].size() == brute_admissible(g.diagrams[1]).size());

  CHECK(check_parity(g).ok());
  auto trace = find_isotopy_path(g);
  CHECK(trace.steps.size() == 2);
  CHECK(verify_trace(g, trace).ok());

  // corrupting a step must be flagged
  auto bad = trace;
  bad.steps[1].label = EdgeLabel::M1minus;
  CHECK(!verify_trace(g, bad).ok());
  auto bad2 = trace;
  bad2.steps[0].to = bad2.steps[0].from;
  CHECK(!verify_trace(g, bad2).ok());
}

TEST_CASE("single-vertex gamma: no moves") {
  HomotopyScript s;
  s.initial = fix0();
  auto g = build_gamma(s);
  CHECK(g.total_vertices() == 1);
  CHECK(g.edges.empty());
  CHECK(check_parity(g).ok());
  auto trace = find_isotopy_path(g);
  CHECK(trace.steps.empty());
  CHECK(trace.final_orientation == '+');
  CHECK(verify_trace(g, trace).ok());
}

TEST_CASE("R1 levels thread through gamma one-to-one") {
  HomotopyScript s;
  s.initial = fix0();
  s.moves = {r1plus(0, KinkSide::left, 0)};
  auto g = build_gamma(s);
  CHECK(g.vertices[1].size() == 1);  // only the loop-preserving sign
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].label == EdgeLabel::M1plus);
  auto trace = find_isotopy_path(g);
  CHECK(verify_trace(g, trace).ok());
}

TEST_CASE("R3 local matchings agree with the brute-force census") {
  // find a triangle the same way the moves tests do
  auto k = apply_move(fix0(), r1plus(0, KinkSide::left, 0));
  CurveDiagram base = k.after;
  bool checked = false;
  for (const auto& a : base.arcs) {
    for (const auto& b : base.arcs) {
      for (auto o : {RelOrientation::parallel, RelOrientation::antiparallel}) {
        ApplyResult res;
        try {
          res = apply_move(base, r2plus(a.id, b.id, o, 10, 11));
        } catch (const CurveError&) {
          continue;
        }
        DiagramIndex ix = DiagramIndex::build(res.after);
        for (const auto& f : trace_faces(res.after)) {
          if (f.darts.size() != 3) continue;
          std::set<CrossingId> corners;
          std::set<ArcId> sides;
          for (const auto& dt : f.darts) {
            corners.insert(ix.slot_of.at(res.after.arc(dt.arc)->ends[dt.head_end]).crossing);
            sides.insert(dt.arc);
          }
          if (corners.size() != 3 || sides.size() != 3) continue;
          Move m;
          m.type = MoveType::R3;
          m.crossings.assign(corners.begin(), corners.end());
          auto it = sides.begin();
          m.face = {*it++, *it++, *it};
          auto flipped = apply_move(res.after, m);

          std::array<CrossingId, 3> triple{m.crossings[0], m.crossings[1], m.crossings[2]};
          auto mt = local_r3_matchings(res.after, flipped.after, triple, m.face);
          CHECK(mt.m3a_pairs.size() == 3);

          auto br = brute_r3_local(res.after, flipped.after, m.crossings, m.face);
          CHECK(br.ok_patterns);
          CHECK(br.before_only_classes == 1);
          CHECK(br.after_only_classes == 1);
          CHECK(br.plus_fan == 3);
          CHECK(br.minus_fan == 3);

          // both classifications must induce the same partitions of the 8
          // assignments on each side
          auto partition = [](const auto& cls) {
            std::map<std::string, std::set<int>> by;
            for (int mask = 0; mask < 8; ++mask) by[cls[mask]].insert(mask);
            std::set<std::set<int>> parts;
            for (auto& [key, group] : by) parts.insert(group);
            return parts;
          };
          CHECK(partition(mt.before_class) == partition(br.before_class));
          CHECK(partition(mt.after_class) == partition(br.after_class));
          checked = true;
        }
      }
    }
  }
  CHECK(checked);
}

TEST_CASE("gamma across an R3 gap keeps parity and a path") {
  auto k = apply_move(fix0(), r1plus(0, KinkSide::left, 0));
  CurveDiagram base = k.after;
  for (const auto& a : base.arcs) {
    for (const auto& b : base.arcs) {
      for (auto o : {RelOrientation::parallel, RelOrientation::antiparallel}) {
        ApplyResult res;
        try {
          res = apply_move(base, r2plus(a.id, b.id, o, 10, 11));
        } catch (const CurveError&) {
          continue;
        }
        DiagramIndex ix = DiagramIndex::build(res.after);
        for (const auto& f : trace_faces(res.after)) {
          if (f.darts.size() != 3) continue;
          std::set<CrossingId> corners;
          std::set<ArcId> sides;
          for (const auto& dt : f.darts) {
            corners.insert(ix.slot_of.at(res.after.arc(dt.arc)->ends[dt.head_end]).crossing);
            sides.insert(dt.arc);
          }
          if (corners.size() != 3 || sides.size() != 3) continue;
          Move m3;
          m3.type = MoveType::R3;
          m3.crossings.assign(corners.begin(), corners.end());
          auto it = sides.begin();
          m3.face = {*it++, *it++, *it};

          HomotopyScript s;
          s.initial = fix0();
          s.moves = {r1plus(0, KinkSide::left, 0), r2plus(a.id, b.id, o, 10, 11), m3};
          auto g = build_gamma(s);
          CHECK(check_parity(g).ok());
          auto trace = find_isotopy_path(g);
          CHECK(verify_trace(g, trace).ok());
          return;
        }
      }
    }
  }
  FAIL("no triangle found");
}

TEST_CASE("M2b edges connect double-flipped trapped partners") {
  // scan small two-push scripts for any M2b edges and check their shape
  auto probe = [](const HomotopyScript& s) {
    ResolutionGraph g;
    try {
      g = build_gamma(s);
    } catch (const CurveError&) {
      return 0;
    }
    int m2b = 0;
    for (const auto& e : g.edges) {
      if (e.label != EdgeLabel::M2b) continue;
      ++m2b;
      CHECK(e.a.level == e.b.level);
      const Resolution& ra = g.vertices[e.a.level][e.a.index];
      const Resolution& rb = g.vertices[e.b.level][e.b.index];
      int diff = 0;
      for (auto [c, sign] : ra.signs)
        if (rb.signs.at(c) != sign) ++diff;
      CHECK(diff == 2);
    }
    CHECK(check_parity(g).ok());
    return m2b;
  };
  auto base = apply_move(fix0(), r2plus(0, 0, RelOrientation::antiparallel, 0, 1)).after;
  for (const auto& a : base.arcs)
    for (const auto& b : base.arcs)
      for (auto o : {RelOrientation::parallel, RelOrientation::antiparallel}) {
        HomotopyScript s;
        s.initial = fix0();
        s.moves = {r2plus(0, 0, RelOrientation::antiparallel, 0, 1), r2plus(a.id, b.id, o, 2, 3)};
        probe(s);
      }
}
