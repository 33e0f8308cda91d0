#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curves/geometry.hpp"
#include "curves/oracle.hpp"

using namespace curves;

namespace {

PolylineFrame frame(std::vector<Point> pts, double t = 0.0) {
  PolylineFrame f;
  f.t = t;
  f.points = std::move(pts);
  return f;
}

PolylineFrame regular_polygon(int n, double r = 1.0, Point c = {0, 0}) {
  std::vector<Point> pts;
  for (int j = 0; j < n; ++j) {
    double th = 2 * std::numbers::pi * j / n;
    pts.push_back({c[0] + r * std::cos(th), c[1] + r * std::sin(th)});
  }
  return frame(pts);
}

// A figure eight: two lobes sharing one transverse self-intersection.
PolylineFrame figure_eight() {
  return frame({{-2, -1}, {2, 1}, {2, -1}, {-2, 1}});
}

// Non-convex 12-gon: a comb with two deep narrow slots whose straight-line
// homotopy from the round circle passes through self-intersecting frames.
PolylineFrame comb12() {
  return frame({{0, 0},
                {6, 0},
                {6, 6},
                {4.2, 6},
                {4.2, 1},
                {3.8, 1},
                {3.8, 6},
                {2.2, 6},
                {2.2, 1},
                {1.8, 1},
                {1.8, 6},
                {0, 6}});
}

}  // namespace

TEST_CASE("convex polygon extracts to a crossing-free diagram") {
  ExtractedDiagram e = extract_diagram(regular_polygon(7));
  CHECK(e.diagram.crossings.empty());
  CHECK(e.diagram.arcs.size() == 1);
  CHECK(e.anchors.arc_polyline.at(0).size() == 7);
  CHECK(validate_diagram(e.diagram).ok());
}

TEST_CASE("figure eight extracts to one crossing") {
  ExtractedDiagram e = extract_diagram(figure_eight());
  CHECK(e.diagram.crossings.size() == 1);
  CHECK(e.diagram.arcs.size() == 2);
  CHECK(validate_diagram(e.diagram).ok());
  CHECK(e.anchors.crossing_pos.count(0) == 1);
}

TEST_CASE("degenerate frames are rejected") {
  // Triple point: three segments through the origin.
  PolylineFrame triple = frame({{-2, 0}, {2, 0.0001}, {3, 2}, {0, -2}, {-0.0001, 2}, {-3, 2},
                                {0.0001, -2}, {2.5, -1}, {2, 1.5}, {-2, 1}});
  bool caught = false;
  try {
    // Vertex on a segment is the simplest degeneracy to pin down exactly.
    extract_diagram(frame({{0, 0}, {4, 0}, {4, 4}, {2, 0}}));
  } catch (const CurveError& e) {
    caught = e.code() == Errc::NonGenericFrame;
  }
  CHECK(caught);

  CHECK_THROWS_AS(extract_diagram(frame({{0, 0}, {2, 0}, {1, 0}})), CurveError);          // fold-back
  CHECK_THROWS_AS(extract_diagram(frame({{0, 0}, {1, 1}})), CurveError);                  // too short
  CHECK_THROWS_AS(extract_diagram(frame({{0, 0}, {0, 0}, {1, 1}, {0, 1}})), CurveError);  // repeat
}

TEST_CASE("extraction is invariant under translation and power-of-two scaling") {
  PolylineFrame f = figure_eight();
  PolylineFrame g = f;
  for (Point& p : g.points) p = {p[0] * 4 - 17, p[1] * 4 + 9};
  CHECK(canonical_signature(extract_diagram(f).diagram) ==
        canonical_signature(extract_diagram(g).diagram));
}

TEST_CASE("detect_events: identical frames give a none gap and no moves") {
  PolylineHomotopy h;
  h.frames = {regular_polygon(5), regular_polygon(5)};
  h.frames[1].t = 1.0;
  auto [script, log] = detect_events(h);
  CHECK(script.moves.empty());
  REQUIRE(log.events.size() == 1);
  CHECK(log.events[0] == "none");
}

TEST_CASE("detect_events: growing a kink is classified as R1+") {
  // A square, then the same square with a small kink folded into one side.
  PolylineFrame a = frame({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
  PolylineFrame b = frame({{0, 0}, {2, 0}, {2.6, 0.9}, {1.4, 0.7}, {2.2, -0.4}, {4, 0}, {4, 4}, {0, 4}},
                          1.0);
  // Matching the two frames needs no vertex correspondence, only diagrams.
  PolylineHomotopy h;
  h.frames = {a, b};
  auto [script, log] = detect_events(h);
  REQUIRE(log.events.size() == 1);
  CHECK(log.events[0] == "R1+");
  REQUIRE(script.moves.size() == 1);
  CHECK(script.moves[0].type == MoveType::R1plus);
  Levels lv = elaborate(script);
  CHECK(lv.diagrams.back().crossings.size() == 1);
}

TEST_CASE("detect_events rejects a jump of several crossings") {
  PolylineFrame a = regular_polygon(8);
  // Pentagram-style closed polyline with five crossings.
  PolylineFrame c = frame({{0, 2}, {1.8, -1.2}, {-2.1, 1.1}, {2.1, 1.1}, {-1.8, -1.2}}, 1.0);
  CHECK(extract_diagram(c).diagram.crossings.size() == 5);
  PolylineHomotopy h;
  h.frames = {a, c};
  bool caught = false;
  try {
    detect_events(h);
  } catch (const CurveError& e) {
    caught = e.code() == Errc::AmbiguousGap;
  }
  CHECK(caught);
}

TEST_CASE("realize_resolution: empty resolution returns the frame unchanged") {
  PolylineFrame f = figure_eight();
  PolylineFrame out = realize_resolution(f, Resolution{}, 0.1);
  CHECK(out.points == f.points);
}

TEST_CASE("realize_resolution on the figure eight matches the smoothing oracle") {
  PolylineFrame f = figure_eight();
  ExtractedDiagram e = extract_diagram(f);
  REQUIRE(e.diagram.crossings.size() == 1);
  for (Sign sg : {Sign::positive, Sign::negative}) {
    Resolution r;
    r.signs[0] = sg;
    int want = oracle::brute_components(e.diagram, r);
    if (want == 1) {
      double rho = auto_radius(f, r, 0.3, 0.5);
      PolylineFrame out = realize_resolution(f, r, rho);
      CHECK(extract_diagram(out).diagram.crossings.empty());
      CHECK(out.length() <= f.length() + 0.5);
    } else {
      CHECK_THROWS_AS(realize_resolution(f, r, 0.05), CurveError);
    }
  }
}

TEST_CASE("realize_resolution respects disk locality") {
  PolylineFrame f = figure_eight();
  Resolution r;
  r.signs[0] = Sign::positive;
  bool want1 = oracle::brute_components(extract_diagram(f).diagram, r) == 1;
  if (!want1) r.signs[0] = Sign::negative;
  CHECK_THROWS_AS(realize_resolution(f, r, 50.0), CurveError);  // disk swallows everything
}

TEST_CASE("schoenflies demo on a convex polygon is trivial") {
  SchoenfliesResult res = schoenflies_demo(regular_polygon(6), 4, 1e-2, 0);
  CHECK(res.script.moves.empty());
  CHECK(res.trace.steps.empty());
  REQUIRE(res.steps.size() == 1);
  CHECK(extract_diagram(res.steps[0]).diagram.crossings.empty());
}

TEST_CASE("schoenflies demo on a non-convex 12-gon") {
  PolylineFrame poly = comb12();
  REQUIRE(poly.points.size() == 12);
  REQUIRE(extract_diagram(poly).diagram.crossings.empty());
  SchoenfliesResult res = schoenflies_demo(poly, 40, 1e-2, 1);
  CHECK(res.steps.size() == res.trace.steps.size() + 1);
  CHECK(!res.script.moves.empty());  // the homotopy genuinely leaves the embedded world
  for (const PolylineFrame& st : res.steps) {
    CHECK(extract_diagram(st).diagram.crossings.empty());      // embedded at every step
    CHECK(st.length() <= res.max_frame_length + 1e-2 + 1e-9);  // length budget
  }
  // The SVG renderer stays deterministic over the run.
  SvgOptions opt;
  std::vector<std::string> svgs = render_svg(res.steps, opt);
  CHECK(svgs.size() == res.steps.size());
  CHECK(svgs[0] == render_svg(res.steps[0], opt));
}

TEST_CASE("homotopy JSON round trip and schema checks") {
  PolylineHomotopy h;
  h.frames = {regular_polygon(4), regular_polygon(5)};
  h.frames[1].t = 0.5;
  PolylineHomotopy back = homotopy_from_json(homotopy_to_json(h));
  REQUIRE(back.frames.size() == 2);
  CHECK(back.frames[1].points.size() == 5);
  CHECK(back.frames[1].t == 0.5);

  nlohmann::json bad = homotopy_to_json(h);
  bad["frames"][0]["extra"] = 1;
  CHECK_THROWS_AS(homotopy_from_json(bad), CurveError);
  nlohmann::json bad2 = homotopy_to_json(h);
  bad2["version"] = 2;
  CHECK_THROWS_AS(homotopy_from_json(bad2), CurveError);
}
