#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "curves/moves.hpp"
#include "curves/oracle.hpp"
#include "fixtures.hpp"

using namespace curves;
using fixtures::fix0;
using fixtures::fix_bigon;
using fixtures::fix_kink;

static Move r1plus(ArcId a, KinkSide s, CrossingId z) {
  Move m;
  m.type = MoveType::R1plus;
  m.arc = a;
  m.side = s;
  m.new_crossing = z;
  return m;
}
static Move r1minus(CrossingId c) {
  Move m;
  m.type = MoveType::R1minus;
  m.crossing = c;
  return m;
}
static Move r2plus(ArcId a, ArcId b, RelOrientation o, CrossingId z1, CrossingId z2) {
  Move m;
  m.type = MoveType::R2plus;
  m.arcs = {a, b};
  m.orientation = o;
  m.new_crossings = {z1, z2};
  return m;
}
static Move r2minus(CrossingId c1, CrossingId c2) {
  Move m;
  m.type = MoveType::R2minus;
  m.crossings = {c1, c2};
  return m;
}

TEST_CASE("R1+ on the circle yields the kink; both sides are valid and mirror-isomorphic") {
  auto d = fix0();
  auto left = apply_move(d, r1plus(0, KinkSide::left, 0));
  auto right = apply_move(d, r1plus(0, KinkSide::right, 0));
  CHECK(left.after.crossings.size() == 1);
  CHECK(left.after.arcs.size() == 2);
  CHECK(validate_diagram(left.after).ok());
  CHECK(validate_diagram(right.after).ok());
  // one monogon each
  int mono_l = 0, mono_r = 0;
  for (const auto& f : trace_faces(left.after)) mono_l += f.darts.size() == 1;
  for (const auto& f : trace_faces(right.after)) mono_r += f.darts.size() == 1;
  // the big lobe side also traces a single-dart face on a one-crossing kink
  CHECK(mono_l == 2);
  CHECK(mono_r == 2);
  bool lk = isomorphic(left.after, fix_kink());
  bool rk = isomorphic(right.after, fix_kink());
  CHECK((lk || rk));
}

TEST_CASE("R1- undoes R1+") {
  auto d = fix0();
  auto kinked = apply_move(d, r1plus(0, KinkSide::left, 7));
  auto undone = apply_move(kinked.after, r1minus(7));
  CHECK(undone.after.crossings.empty());
  CHECK(undone.after.arcs.size() == 1);
  CHECK(isomorphic(undone.after, fix0()));
}

TEST_CASE("R1- at a bigon crossing removes the outer loop, giving the kink") {
  // Both crossings of the bigon curve bound a big outer loop, which is a
  // monogon face on the sphere; untwisting it leaves a single kink.
  auto d = fix_bigon();
  auto res = apply_move(d, r1minus(0));
  CHECK(res.after.crossings.size() == 1);
  CHECK(isomorphic(res.after, fix_kink()));
}

TEST_CASE("R1- rejects a crossing without a monogon") {
  // Push arc 0 over arc 1 of the bigon curve: the two fresh crossings split
  // previously-existing arcs only, so neither carries a loop arc.
  auto d = fix_bigon();
  ApplyResult res;
  bool applied = false;
  for (auto o : {RelOrientation::parallel, RelOrientation::antiparallel}) {
    try {
      res = apply_move(d, r2plus(0, 1, o, 8, 9));
      applied = true;
      break;
    } catch (const CurveError&) {
    }
  }
  REQUIRE(applied);
  CHECK_THROWS_AS(apply_move(res.after, r1minus(8)), CurveError);
  CHECK_THROWS_AS(apply_move(res.after, r1minus(9)), CurveError);
  CHECK_THROWS_AS(apply_move(res.after, r1minus(42)), CurveError);
}

TEST_CASE("self R2+ on the circle gives the bigon curve") {
  auto d = fix0();
  auto res = apply_move(d, r2plus(0, 0, RelOrientation::antiparallel, 0, 1));
  CHECK(res.after.crossings.size() == 2);
  CHECK(res.after.arcs.size() == 4);
  auto rep = validate_diagram(res.after);
  INFO(rep.summary());
  CHECK(rep.ok());
  CHECK(isomorphic(res.after, fix_bigon()));
}

TEST_CASE("R2- undoes the self push") {
  auto d = fix0();
  auto pushed = apply_move(d, r2plus(0, 0, RelOrientation::antiparallel, 4, 9));
  auto undone = apply_move(pushed.after, r2minus(4, 9));
  CHECK(isomorphic(undone.after, fix0()));
}

TEST_CASE("R2- requires a bigon between the operands") {
  // Three same-side kinks on a circle: the region bounded by the connecting
  // arcs is a triangle, so no two crossings cobound a bigon.
  auto d = fix0();
  auto s1 = apply_move(d, r1plus(0, KinkSide::left, 0));
  // the loop arc has both ends at crossing 0; pick the other arc
  ArcId big1 = -1;
  {
    DiagramIndex ix = DiagramIndex::build(s1.after);
    for (const auto& a : s1.after.arcs) {
      auto c0 = ix.slot_of.at(a.ends[0]).crossing;
      auto c1 = ix.slot_of.at(a.ends[1]).crossing;
      if (!(c0 == 0 && c1 == 0)) big1 = a.id;
    }
    if (big1 < 0) big1 = s1.after.arcs[0].id;  // one crossing: both arcs are loops
  }
  auto s2 = apply_move(s1.after, r1plus(big1, KinkSide::left, 1));
  ArcId conn = -1;
  {
    DiagramIndex ix = DiagramIndex::build(s2.after);
    for (const auto& a : s2.after.arcs) {
      auto c0 = ix.slot_of.at(a.ends[0]).crossing;
      auto c1 = ix.slot_of.at(a.ends[1]).crossing;
      if (c0 != c1) conn = a.id;
    }
  }
  REQUIRE(conn >= 0);
  auto s3 = apply_move(s2.after, r1plus(conn, KinkSide::left, 2));
  CHECK_THROWS_AS(apply_move(s3.after, r2minus(0, 1)), CurveError);
  CHECK_THROWS_AS(apply_move(s3.after, r2minus(0, 0)), CurveError);
  CHECK_THROWS_AS(apply_move(s3.after, r2minus(0, 77)), CurveError);
}

TEST_CASE("fresh id collisions are rejected") {
  auto d = fix_kink();
  CHECK_THROWS_AS(apply_move(d, r1plus(0, KinkSide::left, 0)), CurveError);
  auto e = fix0();
  CHECK_THROWS_AS(apply_move(e, r2plus(0, 0, RelOrientation::antiparallel, 3, 3)), CurveError);
}

TEST_CASE("R2+ between distinct arcs of the kink and reduction back") {
  auto d = fix_kink();
  // arcs 0 (big) and 1 (loop) cobound the lobe face
  ApplyResult res;
  bool applied = false;
  for (auto o : {RelOrientation::parallel, RelOrientation::antiparallel}) {
    try {
      res = apply_move(d, r2plus(0, 1, o, 5, 6));
      applied = true;
      break;
    } catch (const CurveError&) {
    }
  }
  REQUIRE(applied);
  CHECK(res.after.crossings.size() == 3);
  CHECK(validate_diagram(res.after).ok());
  auto undone = apply_move(res.after, r2minus(5, 6));
  CHECK(isomorphic(undone.after, d));
}

TEST_CASE("elaborate validates every level and checks the terminal flag") {
  HomotopyScript s;
  s.initial = fix0();
  s.moves = {r2plus(0, 0, RelOrientation::antiparallel, 0, 1), r2minus(0, 1)};
  s.terminal = Terminal::point;
  auto lv = elaborate(s);
  CHECK(lv.diagrams.size() == 3);
  CHECK(lv.diagrams[1].crossings.size() == 2);
  CHECK(lv.diagrams[2].crossings.empty());

  s.moves.pop_back();
  CHECK_THROWS_AS(elaborate(s), CurveError);
}

TEST_CASE("R3 flips a triangle and is an involution up to isomorphism") {
  // Build a curve with a triangle: circle, kink, then push the big arc across
  // the loop to form a triangle face. Search operands programmatically.
  auto d = fix0();
  auto k = apply_move(d, r1plus(0, KinkSide::left, 0));
  CurveDiagram base = k.after;
  // try all R2+ pairs to find a diagram with a triangle face of 3 distinct corners
  std::vector<CurveDiagram> with_triangle;
  std::vector<Move> r3s;
  for (const auto& a : base.arcs)
    for (const auto& b : base.arcs)
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
            HalfEdgeId h = res.after.arc(dt.arc)->ends[dt.head_end];
            corners.insert(ix.slot_of.at(h).crossing);
            sides.insert(dt.arc);
          }
          if (corners.size() == 3 && sides.size() == 3) {
            Move m;
            m.type = MoveType::R3;
            m.crossings.assign(corners.begin(), corners.end());
            auto it = sides.begin();
            m.face = {*it++, *it++, *it};
            with_triangle.push_back(res.after);
            r3s.push_back(m);
          }
        }
      }
  REQUIRE(!with_triangle.empty());
  int checked = 0;
  for (size_t i = 0; i < with_triangle.size(); ++i) {
    auto once = apply_move(with_triangle[i], r3s[i]);
    CHECK(validate_diagram(once.after).ok());
    CHECK(once.after.crossings.size() == with_triangle[i].crossings.size());
    // same triple flips back
    auto twice = apply_move(once.after, r3s[i]);
    CHECK(isomorphic(twice.after, with_triangle[i]));
    ++checked;
  }
  CHECK(checked > 0);
}
