#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curves/moves.hpp"
#include "curves/resolution_graph.hpp"

namespace curves {

using Point = std::array<double, 2>;

// A closed polyline at homotopy time t. The last point connects back to the
// first; consecutive points must be distinct and there must be at least 3.
struct PolylineFrame {
  double t = 0.0;
  std::vector<Point> points;
  double length() const;
};

struct PolylineHomotopy {
  std::vector<PolylineFrame> frames;  // strictly increasing times
  double max_length() const;
};

// Coordinate anchors produced alongside an extracted diagram: crossing
// positions and, per arc, the polyline run from its start point to its end
// point (both of which are crossing points unless the curve is crossing-free).
struct DiagramAnchors {
  std::map<CrossingId, Point> crossing_pos;
  std::map<ArcId, std::vector<Point>> arc_polyline;
};

struct ExtractedDiagram {
  CurveDiagram diagram;
  DiagramAnchors anchors;
};

// Crossing detection with exact rational orientation predicates. Throws
// NonGenericFrame on tangency, collinear overlap, endpoint-on-segment
// contact, or coincident intersection points (triple points).
ExtractedDiagram extract_diagram(const PolylineFrame& f);

struct EventLog {
  // One entry per frame gap: "R1+", "R1-", "R2+", "R2-", "R3", or "none".
  std::vector<std::string> events;
};

// Classifies each frame gap by its crossing-count delta and finds a single
// move reproducing the next frame's diagram up to isomorphism. Throws
// AmbiguousGap when the delta cannot come from one move and MatchFailure when
// no move of the classified type reproduces the frame.
std::pair<HomotopyScript, EventLog> detect_events(const PolylineHomotopy& h);

// Reconnects the strands inside a radius-rho disk around each crossing named
// in `r` per its sign, leaving the polyline bit-identical outside the disks.
// Throws RadiusTooLarge if a disk touches a non-local strand, another disk,
// or a polyline vertex; SimplicityViolated if the reconnection disconnects
// the curve.
PolylineFrame realize_resolution(const PolylineFrame& f, const Resolution& r, double rho);

// Largest workable disk radius at or below `rho_max` such that the total
// added length is below epsilon: halves the radius until both hold.
double auto_radius(const PolylineFrame& f, const Resolution& r, double rho_max, double epsilon);

struct SchoenfliesResult {
  PolylineHomotopy frames;
  HomotopyScript script;
  EventLog log;
  ResolutionGraph gamma;
  IsotopyTrace trace;
  std::vector<PolylineFrame> steps;  // realized simple polyline per trace vertex
  double max_frame_length = 0.0;
  double rho = 0.0;
};

// Straight-line homotopy from a round circle (centroid-centered, mean-radius,
// one point per polygon vertex) to the polygon, sampled at `samples` frames.
// Non-generic sample times are jittered deterministically from `seed`;
// ambiguous gaps are refined by inserting midpoint frames. The resulting
// script is traced through the resolution graph and every trace vertex is
// realized as a simple polyline within the epsilon length budget.
// A positive radius_override skips the automatic radius search and uses the
// given disk radius for every realization.
SchoenfliesResult schoenflies_demo(const PolylineFrame& polygon, int samples, double epsilon,
                                   uint32_t seed, double radius_override = 0.0);

struct SvgOptions {
  double disk_radius = 0.0;            // draw resolution disks when > 0
  bool mark_crossings = false;         // requires anchors
  const DiagramAnchors* anchors = nullptr;
};

// One SVG 1.1 document per frame, deterministic output.
std::string render_svg(const PolylineFrame& f, const SvgOptions& opt = {});
std::vector<std::string> render_svg(const std::vector<PolylineFrame>& frames,
                                    const SvgOptions& opt = {});

// Keyframe JSON: {"version":1,"frames":[{"t":0.0,"points":[[x,y],...]}]}.
nlohmann::json homotopy_to_json(const PolylineHomotopy& h);
PolylineHomotopy homotopy_from_json(const nlohmann::json& j);

}  // namespace curves
