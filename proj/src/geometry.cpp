#include "curves/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "curves/scriptgen.hpp"

namespace curves {

namespace {

using Rat = boost::multiprecision::cpp_rational;

struct RPoint {
  Rat x, y;
};

RPoint rp(const Point& p) { return {Rat(p[0]), Rat(p[1])}; }
Point dp(const RPoint& p) { return {(double)p.x, (double)p.y}; }

Rat orient(const RPoint& a, const RPoint& b, const RPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(const RPoint& a, const RPoint& b, const RPoint& c) {
  // Collinearity assumed; is c within the closed box of [a,b]?
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

double dist(const Point& a, const Point& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

// One passage of the curve through a crossing, located on a polyline segment.
struct PassageGeo {
  int seg = -1;
  Rat param;      // position along the segment, in (0,1)
  int xing = -1;  // analysis-order crossing index
};

struct CrossingGeo {
  RPoint at;
  int seg[2] = {-1, -1};  // the two segments, in passage (curve) order
  Rat param[2];
};

struct FrameAnalysis {
  std::vector<CrossingGeo> xings;      // indexed by final crossing id (walk order)
  std::vector<PassageGeo> walk_order;  // 2m passages in curve order from vertex 0
};

void check_frame(const PolylineFrame& f) {
  if (f.points.size() < 3)
    throw CurveError(Errc::NonGenericFrame, "frame needs at least 3 points");
  int n = (int)f.points.size();
  for (int i = 0; i < n; ++i)
    if (f.points[i] == f.points[(i + 1) % n])
      throw CurveError(Errc::NonGenericFrame, "repeated consecutive point at index " + std::to_string(i));
}

FrameAnalysis analyze_frame(const PolylineFrame& f) {
  check_frame(f);
  int n = (int)f.points.size();
  auto P = [&](int i) { return rp(f.points[i % n]); };

  // Fold-back at shared vertices counts as a tangency.
  for (int i = 0; i < n; ++i) {
    RPoint u = P(i), v = P(i + 1), w = P(i + 2);
    if (orient(u, v, w) == 0 && ((u.x - v.x) * (w.x - v.x) + (u.y - v.y) * (w.y - v.y)) > 0)
      throw CurveError(Errc::NonGenericFrame, "fold-back at vertex " + std::to_string((i + 1) % n));
  }

  struct RawXing {
    RPoint at;
    int si, sj;
    Rat ti, tj;
  };
  std::vector<RawXing> raw;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      RPoint a = P(i), b = P(i + 1), c = P(j), d = P(j + 1);
      Rat o1 = orient(c, d, a), o2 = orient(c, d, b), o3 = orient(a, b, c), o4 = orient(a, b, d);
      if (adjacent) {
        // Sharing one endpoint; any further contact is degenerate.
        if ((o3 == 0 && o4 == 0) || (o1 == 0 && o2 == 0)) continue;  // handled by fold-back check
        continue;
      }
      bool deg = (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
                 (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
      if (deg)
        throw CurveError(Errc::NonGenericFrame, "segments " + std::to_string(i) + " and " +
                                                    std::to_string(j) + " touch degenerately");
      bool straddle1 = (o1 < 0 && o2 > 0) || (o1 > 0 && o2 < 0);
      bool straddle2 = (o3 < 0 && o4 > 0) || (o3 > 0 && o4 < 0);
      if (!(straddle1 && straddle2)) continue;
      Rat ti = o1 / (o1 - o2);  // along segment i
      Rat tj = o3 / (o3 - o4);  // along segment j
      RPoint at{a.x + ti * (b.x - a.x), a.y + ti * (b.y - a.y)};
      raw.push_back({at, i, j, ti, tj});
    }
  }
  for (size_t i = 0; i < raw.size(); ++i)
    for (size_t j = i + 1; j < raw.size(); ++j)
      if (raw[i].at.x == raw[j].at.x && raw[i].at.y == raw[j].at.y)
        throw CurveError(Errc::NonGenericFrame, "coincident intersection points (triple point)");

  // Order the 2m passages along the curve from vertex 0.
  std::vector<PassageGeo> order;
  for (int k = 0; k < (int)raw.size(); ++k) {
    order.push_back({raw[k].si, raw[k].ti, k});
    order.push_back({raw[k].sj, raw[k].tj, k});
  }
  std::sort(order.begin(), order.end(), [](const PassageGeo& a, const PassageGeo& b) {
    return a.seg != b.seg ? a.seg < b.seg : a.param < b.param;
  });

  // Crossing ids by first encounter; record the two segments in passage order.
  FrameAnalysis fa;
  std::vector<int> id_of(raw.size(), -1);
  for (const PassageGeo& p : order) {
    if (id_of[p.xing] < 0) {
      id_of[p.xing] = (int)fa.xings.size();
      fa.xings.push_back({raw[p.xing].at, {-1, -1}, {}});
    }
    CrossingGeo& cg = fa.xings[id_of[p.xing]];
    int slot = cg.seg[0] < 0 ? 0 : 1;
    cg.seg[slot] = p.seg;
    cg.param[slot] = p.param;
  }
  for (PassageGeo& p : order) p.xing = id_of[p.xing];
  fa.walk_order = order;
  return fa;
}

}  // namespace

double PolylineFrame::length() const {
  double len = 0;
  for (size_t i = 0; i < points.size(); ++i) len += dist(points[i], points[(i + 1) % points.size()]);
  return len;
}

double PolylineHomotopy::max_length() const {
  double m = 0;
  for (const auto& f : frames) m = std::max(m, f.length());
  return m;
}

ExtractedDiagram extract_diagram(const PolylineFrame& f) {
  FrameAnalysis fa = analyze_frame(f);
  ExtractedDiagram out;
  int m = (int)fa.xings.size();
  int n = (int)f.points.size();

  if (m == 0) {
    out.diagram.arcs.push_back({0, {0, 1}});
    out.diagram.basepoint = 0;
    out.anchors.arc_polyline[0] = f.points;
    require_valid(out.diagram, "extract_diagram");
    return out;
  }

  // Arc q runs from passage q to passage q+1; its half-edges are 2q (start,
  // outgoing at passage q) and 2q+1 (end, incoming at passage q+1).
  int tp = 2 * m;
  for (int q = 0; q < tp; ++q) out.diagram.arcs.push_back({q, {2 * q, (2 * ((q + 1) % tp)) + 1}});

  for (int c = 0; c < m; ++c) {
    // Walk positions of the two passages of crossing c, in curve order.
    int p1 = -1, p2 = -1;
    for (int q = 0; q < tp; ++q)
      if (fa.walk_order[q].xing == c) (p1 < 0 ? p1 : p2) = q;
    HalfEdgeId out1 = 2 * p1, out2 = 2 * p2;
    HalfEdgeId in1 = 2 * p1 + 1, in2 = 2 * p2 + 1;
    // Strand directions are the segment directions; the CCW slot order around
    // the crossing follows their exact cross product.
    auto seg_dir = [&](int s) {
      RPoint a = rp(f.points[s % n]), b = rp(f.points[(s + 1) % n]);
      return RPoint{b.x - a.x, b.y - a.y};
    };
    RPoint d1 = seg_dir(fa.walk_order[p1].seg), d2 = seg_dir(fa.walk_order[p2].seg);
    Rat cr = d1.x * d2.y - d1.y * d2.x;
    if (cr == 0) throw CurveError(Errc::NonGenericFrame, "tangential crossing");
    Crossing cx;
    cx.id = c;
    cx.slots = cr > 0 ? std::array<HalfEdgeId, 4>{out1, out2, in1, in2}
                      : std::array<HalfEdgeId, 4>{out1, in2, in1, out2};
    out.diagram.crossings.push_back(cx);
    out.anchors.crossing_pos[c] = dp(fa.xings[c].at);
  }
  // The walk begins at vertex 0, inside arc 2m-1 heading for passage 0.
  out.diagram.basepoint = 2 * (tp - 1);
  out.diagram.sort_by_id();

  for (int q = 0; q < tp; ++q) {
    const PassageGeo& from = fa.walk_order[q];
    const PassageGeo& to = fa.walk_order[(q + 1) % tp];
    std::vector<Point> pts;
    pts.push_back(dp(fa.xings[from.xing].at));
    int s = from.seg;
    bool wrapped = false;
    while (true) {
      // Advance vertex by vertex until reaching the segment holding `to`.
      if (s == to.seg && (s != from.seg || wrapped || from.param < to.param)) break;
      s = (s + 1) % n;
      if (s == 0) wrapped = true;
      pts.push_back(f.points[s]);
      if ((int)pts.size() > 2 * n + 2) throw CurveError(Errc::MatchFailure, "arc anchor walk overflow");
    }
    pts.push_back(dp(fa.xings[to.xing].at));
    out.anchors.arc_polyline[q] = pts;
  }

  require_valid(out.diagram, "extract_diagram");
  return out;
}

namespace {

// Orientation-preserving labelled matching of two diagrams describing the
// same curve: try each arc end of b as its basepoint and compare traversals.
std::optional<std::map<CrossingId, CrossingId>> match_diagrams(const CurveDiagram& a,
                                                               const CurveDiagram& b) {
  if (a.crossings.size() != b.crossings.size() || a.arcs.size() != b.arcs.size()) return std::nullopt;
  std::vector<TraversalStep> wa;
  try {
    wa = traverse(a);
  } catch (const CurveError&) {
    return std::nullopt;
  }
  for (const Arc& ar : b.arcs) {
    for (int e = 0; e < 2; ++e) {
      CurveDiagram b2 = b;
      b2.basepoint = ar.ends[e];
      std::vector<TraversalStep> wb;
      try {
        wb = traverse(b2);
      } catch (const CurveError&) {
        continue;
      }
      if (wa.size() != wb.size()) continue;
      std::map<CrossingId, CrossingId> fwd, rev;
      std::map<CrossingId, int> rot;  // slot rotation offset per matched pair
      bool ok = true;
      for (size_t i = 0; i < wa.size() && ok; ++i) {
        bool ha = wa[i].crossing.has_value(), hb = wb[i].crossing.has_value();
        if (ha != hb) {
          ok = false;
          break;
        }
        if (!ha) continue;
        CrossingId ca = *wa[i].crossing, cb = *wb[i].crossing;
        auto itf = fwd.find(ca);
        auto itr = rev.find(cb);
        if ((itf != fwd.end() && itf->second != cb) || (itr != rev.end() && itr->second != ca)) {
          ok = false;
          break;
        }
        fwd[ca] = cb;
        rev[cb] = ca;
        int off = ((wb[i].in_slot - wa[i].in_slot) % 4 + 4) % 4;
        auto itn = rot.find(ca);
        if (itn == rot.end())
          rot[ca] = off;
        else if (itn->second != off)
          ok = false;
      }
      if (ok && fwd.size() == a.crossings.size()) return fwd;
    }
  }
  return std::nullopt;
}

struct GapResult {
  std::optional<Move> move;                 // absent: frames agree, no event
  std::string event = "none";
  std::map<CrossingId, CrossingId> match;  // engine crossing -> next-frame crossing
};

// Classifies one frame gap against the current engine diagram and finds the
// single move reproducing the next frame's diagram.
GapResult classify_gap(const CurveDiagram& engine, const CurveDiagram& next) {
  int delta = (int)next.crossings.size() - (int)engine.crossings.size();
  if (delta == 0) {
    if (auto mm = match_diagrams(engine, next)) return {std::nullopt, "none", *mm};
  }
  MoveType want;
  switch (delta) {
    case 1: want = MoveType::R1plus; break;
    case -1: want = MoveType::R1minus; break;
    case 2: want = MoveType::R2plus; break;
    case -2: want = MoveType::R2minus; break;
    case 0: want = MoveType::R3; break;
    default:
      throw CurveError(Errc::AmbiguousGap,
                       "crossing delta " + std::to_string(delta) + " needs finer keyframes");
  }
  int cap = std::max((int)engine.crossings.size(), (int)next.crossings.size());
  for (const Move& m : enumerate_moves(engine, cap)) {
    if (m.type != want) continue;
    ApplyResult res;
    try {
      res = apply_move(engine, m);
    } catch (const CurveError&) {
      continue;
    }
    if (auto mm = match_diagrams(res.after, next)) return {m, move_type_name(m.type), *mm};
  }
  throw CurveError(Errc::MatchFailure, "no single move reproduces the next frame");
}

}  // namespace

std::pair<HomotopyScript, EventLog> detect_events(const PolylineHomotopy& h) {
  if (h.frames.empty()) throw CurveError(Errc::SchemaError, "no frames");
  for (size_t i = 0; i + 1 < h.frames.size(); ++i)
    if (!(h.frames[i].t < h.frames[i + 1].t))
      throw CurveError(Errc::SchemaError, "frame times must be strictly increasing");

  std::vector<CurveDiagram> extracted;
  for (const auto& f : h.frames) extracted.push_back(extract_diagram(f).diagram);

  HomotopyScript s;
  s.initial = extracted[0];
  s.terminal = Terminal::curve;
  EventLog log;
  CurveDiagram cur = extracted[0];
  for (size_t i = 0; i + 1 < h.frames.size(); ++i) {
    GapResult gr = classify_gap(cur, extracted[i + 1]);
    log.events.push_back(gr.event);
    if (gr.move) {
      s.moves.push_back(*gr.move);
      cur = apply_move(cur, *gr.move).after;
    }
  }
  return {s, log};
}

namespace {

struct DiskGeo {
  Point center;
  Point entry[2], exit[2];  // per passage, on the disk boundary
  double removed = 0, added = 0;
};

// Validates the disk preconditions for one resolved crossing and computes
// its boundary points.
DiskGeo disk_for(const PolylineFrame& f, const FrameAnalysis& fa, int xing, double rho) {
  int n = (int)f.points.size();
  const CrossingGeo& cg = fa.xings[xing];
  DiskGeo d;
  d.center = dp(cg.at);
  for (int k = 0; k < 2; ++k) {
    Point a = f.points[cg.seg[k] % n], b = f.points[(cg.seg[k] + 1) % n];
    double len = dist(a, b);
    Point dir{(b[0] - a[0]) / len, (b[1] - a[1]) / len};
    if (dist(d.center, a) <= rho || dist(d.center, b) <= rho)
      throw CurveError(Errc::RadiusTooLarge, "disk reaches a polyline vertex");
    d.entry[k] = {d.center[0] - rho * dir[0], d.center[1] - rho * dir[1]};
    d.exit[k] = {d.center[0] + rho * dir[0], d.center[1] + rho * dir[1]};
  }
  d.removed = 4 * rho;

  // Only the two local segments may come near the disk.
  for (int s = 0; s < n; ++s) {
    if (s == cg.seg[0] || s == cg.seg[1]) continue;
    Point a = f.points[s], b = f.points[(s + 1) % n];
    double vx = b[0] - a[0], vy = b[1] - a[1];
    double t = ((d.center[0] - a[0]) * vx + (d.center[1] - a[1]) * vy) / (vx * vx + vy * vy);
    t = std::clamp(t, 0.0, 1.0);
    Point q{a[0] + t * vx, a[1] + t * vy};
    if (dist(d.center, q) <= rho)
      throw CurveError(Errc::RadiusTooLarge, "disk touches a non-local strand");
  }
  return d;
}

}  // namespace

PolylineFrame realize_resolution(const PolylineFrame& f, const Resolution& r, double rho) {
  if (r.signs.empty()) return f;
  if (rho <= 0) throw CurveError(Errc::RadiusTooLarge, "radius must be positive");
  FrameAnalysis fa = analyze_frame(f);
  for (const auto& [cid, sg] : r.signs) {
    (void)sg;
    if (cid < 0 || cid >= (int)fa.xings.size())
      throw CurveError(Errc::OperandMissing, "resolution names unknown crossing " + std::to_string(cid));
  }
  for (size_t i = 0; i < fa.xings.size(); ++i)
    for (size_t j = i + 1; j < fa.xings.size(); ++j)
      if ((r.signs.count((int)i) || r.signs.count((int)j)) &&
          dist(dp(fa.xings[i].at), dp(fa.xings[j].at)) <= 2 * rho)
        throw CurveError(Errc::RadiusTooLarge, "crossing disks overlap");

  std::map<int, DiskGeo> disks;
  for (const auto& [cid, sg] : r.signs) {
    (void)sg;
    disks[cid] = disk_for(f, fa, cid, rho);
  }

  // Resolved passages in curve order; each contributes an in-boundary point
  // (entry) and an out-boundary point (exit).
  struct BPoint {
    Point at;
    int mate = -1;  // boundary point joined by the in-disk chord
  };
  std::vector<BPoint> bpts;
  std::vector<int> pass_entry, pass_exit;  // per resolved passage, bpts index
  std::vector<const PassageGeo*> resolved;
  std::map<int, std::array<int, 2>> passage_of;  // crossing -> resolved passage order slots
  for (const PassageGeo& p : fa.walk_order) {
    if (!r.signs.count(p.xing)) continue;
    int k = passage_of.count(p.xing) ? 1 : 0;
    if (!passage_of.count(p.xing)) passage_of[p.xing] = {-1, -1};
    passage_of[p.xing][k] = (int)resolved.size();
    // Boundary points for this passage: passage order within the crossing is
    // the same as in CrossingGeo::seg.
    const DiskGeo& d = disks[p.xing];
    pass_entry.push_back((int)bpts.size());
    bpts.push_back({d.entry[k], -1});
    pass_exit.push_back((int)bpts.size());
    bpts.push_back({d.exit[k], -1});
    resolved.push_back(&p);
  }

  // Chords per sign: positive joins each incoming strand to the other
  // strand's outgoing half; negative joins the two incoming and the two
  // outgoing halves (reversing one strand).
  double added = 0;
  for (const auto& [cid, slots] : passage_of) {
    Sign sg = r.signs.at(cid);
    int pa = slots[0], pb = slots[1];
    auto join = [&](int u, int v) {
      bpts[u].mate = v;
      bpts[v].mate = u;
      added += dist(bpts[u].at, bpts[v].at);
    };
    if (sg == Sign::positive) {
      join(pass_entry[pa], pass_exit[pb]);
      join(pass_entry[pb], pass_exit[pa]);
    } else {
      join(pass_entry[pa], pass_entry[pb]);
      join(pass_exit[pa], pass_exit[pb]);
    }
  }
  (void)added;

  // Outside pieces connect the exit of one resolved passage to the entry of
  // the next along the curve, carrying the intermediate polyline vertices.
  int np = (int)resolved.size();
  int n = (int)f.points.size();
  std::vector<std::vector<Point>> piece(np);  // piece[q]: exit of q .. entry of q+1
  std::vector<int> piece_from(np), piece_to(np);
  for (int q = 0; q < np; ++q) {
    int qn = (q + 1) % np;
    piece_from[q] = pass_exit[q];
    piece_to[q] = pass_entry[qn];
    std::vector<Point> pts;
    pts.push_back(bpts[pass_exit[q]].at);
    int s = resolved[q]->seg;
    bool wrapped = false;
    while (true) {
      bool same_seg = s == resolved[qn]->seg;
      bool ahead = s != resolved[q]->seg || wrapped || resolved[q]->param < resolved[qn]->param;
      if (same_seg && ahead) break;
      s = (s + 1) % n;
      if (s == 0) wrapped = true;
      pts.push_back(f.points[s]);
      if ((int)pts.size() > 2 * n + 2) throw CurveError(Errc::MatchFailure, "piece walk overflow");
    }
    pts.push_back(bpts[pass_entry[qn]].at);
    piece[q] = pts;
  }

  // Trace the reconnected curve: alternate outside pieces and chords.
  std::map<int, std::pair<int, bool>> piece_at;  // boundary point -> (piece, reversed)
  for (int q = 0; q < np; ++q) {
    piece_at[piece_from[q]] = {q, false};
    piece_at[piece_to[q]] = {q, true};
  }
  std::vector<Point> outpts;
  std::vector<char> used(np, 0);
  int start = piece_from[np - 1];  // the piece containing vertex 0 region
  int at = start;
  while (true) {
    auto [q, rev] = piece_at.at(at);
    if (used[q]) throw CurveError(Errc::SimplicityViolated, "reconnection revisits a piece");
    used[q] = 1;
    std::vector<Point> pts = piece[q];
    if (rev) std::reverse(pts.begin(), pts.end());
    for (const Point& p : pts)
      if (outpts.empty() || outpts.back() != p) outpts.push_back(p);
    int end = rev ? piece_from[q] : piece_to[q];
    int next = bpts[end].mate;  // cross the disk along the chord
    if (next == start) break;
    at = next;
  }
  for (int q = 0; q < np; ++q)
    if (!used[q])
      throw CurveError(Errc::SimplicityViolated, "resolution disconnects the curve");
  if (outpts.size() > 1 && outpts.front() == outpts.back()) outpts.pop_back();

  PolylineFrame out;
  out.t = f.t;
  out.points = outpts;
  return out;
}

double auto_radius(const PolylineFrame& f, const Resolution& r, double rho_max, double epsilon) {
  if (r.signs.empty()) return rho_max;
  double before = f.length();
  double rho = rho_max;
  for (int it = 0; it < 60; ++it, rho /= 2) {
    try {
      PolylineFrame out = realize_resolution(f, r, rho);
      if (out.length() <= before + epsilon) return rho;
    } catch (const CurveError& e) {
      if (e.code() != Errc::RadiusTooLarge) throw;
    }
  }
  throw CurveError(Errc::RadiusTooLarge, "no workable disk radius found");
}

SchoenfliesResult schoenflies_demo(const PolylineFrame& polygon, int samples, double epsilon,
                                   uint32_t seed, double radius_override) {
  if (samples < 2) throw CurveError(Errc::SchemaError, "need at least 2 samples");
  ExtractedDiagram pd = extract_diagram(polygon);
  if (!pd.diagram.crossings.empty())
    throw CurveError(Errc::SimplicityViolated, "input polygon self-intersects");

  int n = (int)polygon.points.size();
  Point centroid{0, 0};
  for (const Point& p : polygon.points) {
    centroid[0] += p[0] / n;
    centroid[1] += p[1] / n;
  }
  double radius = 0;
  for (const Point& p : polygon.points) radius += dist(p, centroid) / n;
  double phase = std::atan2(polygon.points[0][1] - centroid[1], polygon.points[0][0] - centroid[0]);
  std::vector<Point> circle(n);
  for (int j = 0; j < n; ++j) {
    double th = phase + 2 * std::numbers::pi * j / n;
    circle[j] = {centroid[0] + radius * std::cos(th), centroid[1] + radius * std::sin(th)};
  }

  std::mt19937 rng(seed);
  auto interp = [&](double t) {
    PolylineFrame fr;
    fr.t = t;
    fr.points.resize(n);
    for (int j = 0; j < n; ++j)
      fr.points[j] = {(1 - t) * circle[j][0] + t * polygon.points[j][0],
                      (1 - t) * circle[j][1] + t * polygon.points[j][1]};
    return fr;
  };
  // A non-generic sample time is nudged deterministically until the frame is
  // generic; the endpoints (round circle, input polygon) are never moved.
  auto generic_frame = [&](double t, double lo, double hi) {
    for (int tries = 0; tries < 32; ++tries) {
      try {
        PolylineFrame fr = interp(t);
        extract_diagram(fr);
        return fr;
      } catch (const CurveError& e) {
        if (e.code() != Errc::NonGenericFrame) throw;
        double span = hi - lo;
        t = lo + span * ((std::uint64_t)rng() % 100000 + 1) / 100001.0;
      }
    }
    throw CurveError(Errc::NonGenericFrame, "no generic sample time found");
  };

  SchoenfliesResult res;
  for (int i = 0; i < samples; ++i) {
    double t = (double)i / (samples - 1);
    if (i == 0 || i == samples - 1)
      res.frames.frames.push_back(interp(t));
    else
      res.frames.frames.push_back(generic_frame(t, (double)(i - 1) / (samples - 1), (double)(i + 1) / (samples - 1)));
  }

  // Detection with refinement: an ambiguous or unmatched gap gets a midpoint
  // frame inserted, up to a hard frame budget.
  const int kMaxFrames = 500;
  for (int guard = 0;; ++guard) {
    if (guard > 4 * kMaxFrames) throw CurveError(Errc::NonTermination, "gap refinement did not settle");
    try {
      auto [script, log] = detect_events(res.frames);
      res.script = script;
      res.log = log;
      break;
    } catch (const CurveError& e) {
      if (e.code() != Errc::AmbiguousGap && e.code() != Errc::MatchFailure) throw;
      if ((int)res.frames.frames.size() >= kMaxFrames) throw;
      // Find the first offending gap by rerunning gap by gap.
      std::vector<CurveDiagram> ex;
      for (const auto& fr : res.frames.frames) ex.push_back(extract_diagram(fr).diagram);
      CurveDiagram cur = ex[0];
      size_t bad = res.frames.frames.size() - 2;
      for (size_t i = 0; i + 1 < ex.size(); ++i) {
        try {
          GapResult gr = classify_gap(cur, ex[i + 1]);
          if (gr.move) cur = apply_move(cur, *gr.move).after;
        } catch (const CurveError&) {
          bad = i;
          break;
        }
      }
      double lo = res.frames.frames[bad].t, hi = res.frames.frames[bad + 1].t;
      PolylineFrame mid = generic_frame((lo + hi) / 2, lo, hi);
      res.frames.frames.insert(res.frames.frames.begin() + bad + 1, mid);
    }
  }

  res.gamma = build_gamma(res.script);
  res.trace = find_isotopy_path(res.gamma);
  TraceReport tr = verify_trace(res.gamma, res.trace);
  if (!tr.ok()) throw CurveError(Errc::SimplicityViolated, "trace verification failed");

  // Levels map to the frames whose gap produced them ("none" gaps collapse).
  std::vector<int> level_frame{0};
  for (size_t i = 0; i < res.log.events.size(); ++i)
    if (res.log.events[i] != "none") level_frame.push_back((int)i + 1);

  res.max_frame_length = res.frames.max_length();

  // Realize every trace vertex as a simple polyline within the length budget.
  std::vector<GammaVertexRef> verts;
  verts.push_back(res.trace.steps.empty() ? GammaVertexRef{0, 0} : res.trace.steps.front().from);
  for (const auto& st : res.trace.steps) verts.push_back(st.to);
  double rho_min = 0;
  for (const GammaVertexRef& v : verts) {
    const Resolution& rsl = res.gamma.vertices[v.level][v.index];
    const PolylineFrame& frame = res.frames.frames[level_frame[v.level]];
    // Translate engine crossing ids to this frame's extraction ids.
    ExtractedDiagram exd = extract_diagram(frame);
    auto mm = match_diagrams(res.gamma.diagrams[v.level], exd.diagram);
    if (!mm) throw CurveError(Errc::MatchFailure, "level diagram does not match its frame");
    Resolution geo;
    for (const auto& [cid, sg] : rsl.signs) geo.signs[mm->at(cid)] = sg;
    double budget = res.max_frame_length + epsilon - frame.length();
    double rho = radius_override > 0
                     ? radius_override
                     : auto_radius(frame, geo, 0.25 * radius, std::max(budget, epsilon / 2));
    PolylineFrame realized = realize_resolution(frame, geo, rho);
    if (!extract_diagram(realized).diagram.crossings.empty())
      throw CurveError(Errc::SimplicityViolated, "realized step is not simple");
    res.steps.push_back(realized);
    rho_min = rho_min == 0 ? rho : std::min(rho_min, rho);
  }
  res.rho = rho_min;
  return res;
}

std::string render_svg(const PolylineFrame& f, const SvgOptions& opt) {
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (const Point& p : f.points) {
    minx = std::min(minx, p[0]);
    maxx = std::max(maxx, p[0]);
    miny = std::min(miny, p[1]);
    maxy = std::max(maxy, p[1]);
  }
  if (f.points.empty()) minx = miny = 0, maxx = maxy = 1;
  double margin = 0.05 * std::max(maxx - minx, maxy - miny) + 1e-6;
  char buf[256];
  std::ostringstream svg;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6f %.6f %.6f %.6f\" "
                "width=\"512\" height=\"512\">\n",
                minx - margin, miny - margin, (maxx - minx) + 2 * margin, (maxy - miny) + 2 * margin);
  svg << buf;
  if (!f.points.empty()) {
    svg << "<path d=\"";
    for (size_t i = 0; i < f.points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%c%.6f %.6f ", i == 0 ? 'M' : 'L', f.points[i][0], f.points[i][1]);
      svg << buf;
    }
    svg << "Z\" fill=\"none\" stroke=\"black\" stroke-width=\"";
    std::snprintf(buf, sizeof buf, "%.6f", 0.004 * (maxx - minx + 2 * margin));
    svg << buf << "\"/>\n";
  }
  if (opt.anchors && opt.mark_crossings)
    for (const auto& [cid, p] : opt.anchors->crossing_pos) {
      (void)cid;
      std::snprintf(buf, sizeof buf,
                    "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"red\"/>\n", p[0], p[1],
                    0.008 * (maxx - minx + 2 * margin));
      svg << buf;
      if (opt.disk_radius > 0) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"%.6f\" fill=\"none\" stroke=\"blue\" "
                      "stroke-width=\"%.6f\"/>\n",
                      p[0], p[1], opt.disk_radius, 0.002 * (maxx - minx + 2 * margin));
        svg << buf;
      }
    }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> render_svg(const std::vector<PolylineFrame>& frames, const SvgOptions& opt) {
  std::vector<std::string> out;
  for (const auto& f : frames) out.push_back(render_svg(f, opt));
  return out;
}

nlohmann::json homotopy_to_json(const PolylineHomotopy& h) {
  nlohmann::json j;
  j["version"] = 1;
  j["frames"] = nlohmann::json::array();
  for (const auto& f : h.frames) {
    nlohmann::json fj;
    fj["t"] = f.t;
    fj["points"] = nlohmann::json::array();
    for (const Point& p : f.points) fj["points"].push_back({p[0], p[1]});
    j["frames"].push_back(fj);
  }
  return j;
}

PolylineHomotopy homotopy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("version") || !j.contains("frames"))
    throw CurveError(Errc::SchemaError, "keyframes: need version and frames");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "version" && it.key() != "frames")
      throw CurveError(Errc::SchemaError, "keyframes: unknown field " + it.key());
  if (!j.at("version").is_number_integer() || j.at("version").get<int>() != 1)
    throw CurveError(Errc::SchemaError, "keyframes: unsupported version");
  if (!j.at("frames").is_array()) throw CurveError(Errc::SchemaError, "keyframes: frames must be an array");
  PolylineHomotopy h;
  for (const auto& fj : j.at("frames")) {
    if (!fj.is_object() || !fj.contains("t") || !fj.contains("points"))
      throw CurveError(Errc::SchemaError, "frame: need t and points");
    for (auto it = fj.begin(); it != fj.end(); ++it)
      if (it.key() != "t" && it.key() != "points")
        throw CurveError(Errc::SchemaError, "frame: unknown field " + it.key());
    PolylineFrame f;
    if (!fj.at("t").is_number()) throw CurveError(Errc::SchemaError, "frame: t must be a number");
    f.t = fj.at("t").get<double>();
    if (!fj.at("points").is_array()) throw CurveError(Errc::SchemaError, "frame: points must be an array");
    for (const auto& pj : fj.at("points")) {
      if (!pj.is_array() || pj.size() != 2 || !pj[0].is_number() || !pj[1].is_number())
        throw CurveError(Errc::SchemaError, "frame: each point must be [x, y]");
      f.points.push_back({pj[0].get<double>(), pj[1].get<double>()});
    }
    if (f.points.size() < 3) throw CurveError(Errc::SchemaError, "frame: need at least 3 points");
    h.frames.push_back(f);
  }
  for (size_t i = 0; i + 1 < h.frames.size(); ++i)
    if (!(h.frames[i].t < h.frames[i + 1].t))
      throw CurveError(Errc::SchemaError, "keyframes: times must be strictly increasing");
  return h;
}

}  // namespace curves
