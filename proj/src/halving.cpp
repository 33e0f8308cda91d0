#include "curves/halving.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace curves {

namespace {

// Compass slot order at a doubled crossing: indices into the CCW slots array.
enum Dir { E = 0, N = 1, W = 2, S = 3 };

struct GridCell {
  CrossingId id = -1;
  std::array<HalfEdgeId, 4> he{};  // by Dir
};

}  // namespace

const char* track_edge_name(TrackEdgeType t) {
  switch (t) {
    case TrackEdgeType::continuation: return "continuation";
    case TrackEdgeType::r1_link: return "r1-link";
    case TrackEdgeType::r2_horizontal: return "r2-horizontal";
    case TrackEdgeType::beta_extra: return "beta-extra";
  }
  return "?";
}

DoubledCurve perturb_double(const CurveDiagram& alpha) {
  require_valid(alpha, "perturb_double");
  DoubledCurve dc;
  dc.alpha = alpha;

  CurveDiagram b;
  b.genus = alpha.genus;
  int next_he = 0;
  auto fresh = [&next_he] { return next_he++; };

  // Base crossing: both copies run side by side (offset copy to the left of
  // the traversal direction, drawn here as the upper strand of two eastward
  // strands) and are cut and re-joined, crossing once. CCW slots:
  // [E-high, W-high, W-low, E-low]; passages (W-low -> E-high) and
  // (W-high -> E-low) reconnect original tail to offset head and back.
  dc.base = 0;
  HalfEdgeId base_eh = fresh(), base_wh = fresh(), base_wl = fresh(), base_el = fresh();
  b.crossings.push_back({dc.base, {base_eh, base_wh, base_wl, base_el}});

  if (alpha.crossings.empty()) {
    // Two parallel circles joined at the base crossing.
    b.arcs.push_back({0, {base_el, base_wl}});  // original copy
    b.arcs.push_back({1, {base_eh, base_wh}});  // offset copy
    b.basepoint = base_el;
    b.sort_by_id();
    require_valid(b, "perturb_double result");
    dc.beta = b;
    return dc;
  }

  auto walk = traverse(alpha);
  auto passages = crossing_passages(alpha, walk);

  // Per alpha half-edge: the stub half-edges of the original and offset
  // strands leaving the cluster at that slot.
  std::map<HalfEdgeId, HalfEdgeId> stub_orig, stub_off;

  int cluster_index = 0;
  for (const Crossing& c : alpha.crossings) {
    const CrossingPassages& p = passages.at(c.id);
    int a = p.first.in_slot;            // strand 1 enters here, exits a+2
    int q = p.second.in_slot;           // strand 2 enters here, exits q+2
    bool case_a = q == (a + 1) % 4;     // strand 2 crosses left-to-right of strand 1

    Cluster cl;
    cl.i1 = 4 * cluster_index + 1;
    cl.i2 = 4 * cluster_index + 2;
    cl.i3 = 4 * cluster_index + 3;
    cl.i4 = 4 * cluster_index + 4;
    ++cluster_index;

    // Local picture: strand 1 eastward along y=0, its offset along y=1.
    // Case A: strand 2 northward, original at x=1, offset at x=0.
    // Case B: strand 2 southward, original at x=0, offset at x=1.
    // grid[x][y] is the crossing at that corner of the 2x2 intersection grid.
    GridCell grid[2][2];
    auto place = [&](int x, int y, CrossingId id) {
      grid[x][y].id = id;
      for (int d = 0; d < 4; ++d) grid[x][y].he[d] = fresh();
    };
    if (case_a) {
      place(1, 0, cl.i1);
      place(0, 1, cl.i2);
      place(0, 0, cl.i3);
      place(1, 1, cl.i4);
    } else {
      place(0, 0, cl.i1);
      place(1, 1, cl.i2);
      place(1, 0, cl.i3);
      place(0, 1, cl.i4);
    }
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        b.crossings.push_back(
            {grid[x][y].id, {grid[x][y].he[E], grid[x][y].he[N], grid[x][y].he[W], grid[x][y].he[S]}});

    // Intra-cluster arcs: the inner grid segments.
    auto add_internal = [&b](HalfEdgeId u, HalfEdgeId v) {
      b.arcs.push_back({(ArcId)b.arcs.size(), {u, v}});
    };
    add_internal(grid[0][0].he[E], grid[1][0].he[W]);
    add_internal(grid[0][1].he[E], grid[1][1].he[W]);
    add_internal(grid[0][0].he[N], grid[0][1].he[S]);
    add_internal(grid[1][0].he[N], grid[1][1].he[S]);

    // Stub assignment per alpha slot. Strand 1 always runs along y=0 with
    // its offset at y=1 (left of eastward). Strand 2's lines depend on case.
    HalfEdgeId he_in1 = c.slots[a], he_out1 = c.slots[(a + 2) % 4];
    HalfEdgeId he_in2 = c.slots[q], he_out2 = c.slots[(q + 2) % 4];
    stub_orig[he_in1] = grid[0][0].he[W];
    stub_off[he_in1] = grid[0][1].he[W];
    stub_orig[he_out1] = grid[1][0].he[E];
    stub_off[he_out1] = grid[1][1].he[E];
    if (case_a) {
      stub_orig[he_in2] = grid[1][0].he[S];
      stub_off[he_in2] = grid[0][0].he[S];
      stub_orig[he_out2] = grid[1][1].he[N];
      stub_off[he_out2] = grid[0][1].he[N];
    } else {
      stub_orig[he_in2] = grid[0][1].he[N];
      stub_off[he_in2] = grid[1][1].he[N];
      stub_orig[he_out2] = grid[0][0].he[S];
      stub_off[he_out2] = grid[1][0].he[S];
    }

    dc.clusters[c.id] = cl;
  }

  // Doubled copies of the alpha arcs. The copy pair of the basepoint arc is
  // cut at the base crossing, next to the slot the traversal departs from.
  DiagramIndex idx = DiagramIndex::build(alpha);
  for (const Arc& ar : alpha.arcs) {
    bool base_arc = ar.ends[0] == alpha.basepoint || ar.ends[1] == alpha.basepoint;
    if (!base_arc) {
      b.arcs.push_back({(ArcId)b.arcs.size(), {stub_orig.at(ar.ends[0]), stub_orig.at(ar.ends[1])}});
      b.arcs.push_back({(ArcId)b.arcs.size(), {stub_off.at(ar.ends[0]), stub_off.at(ar.ends[1])}});
      continue;
    }
    HalfEdgeId eb = alpha.basepoint;
    HalfEdgeId eo = ar.ends[0] == eb ? ar.ends[1] : ar.ends[0];
    b.arcs.push_back({(ArcId)b.arcs.size(), {stub_orig.at(eb), base_wl}});
    b.arcs.push_back({(ArcId)b.arcs.size(), {base_el, stub_orig.at(eo)}});
    b.arcs.push_back({(ArcId)b.arcs.size(), {stub_off.at(eb), base_wh}});
    b.arcs.push_back({(ArcId)b.arcs.size(), {base_eh, stub_off.at(eo)}});
    b.basepoint = base_el;
  }

  b.sort_by_id();
  require_valid(b, "perturb_double result");
  dc.beta = b;
  return dc;
}

namespace {

// The two traversal intervals cut out by a crossing, as arc-id sets. Labels
// are anchored to the crossing's own rotation, not the basepoint (moves may
// relocate the basepoint): side 1 starts at the exit of the passage running
// through slot 0, so the labels are stable as long as the crossing survives.
using Sides = std::array<std::set<ArcId>, 2>;

// Walk indices of the two passages through c: [0] is the passage through the
// slot pair {0, 2}.
std::array<int, 2> passage_indices(const std::vector<TraversalStep>& walk, CrossingId c) {
  std::array<int, 2> out{-1, -1};
  for (int i = 0; i < (int)walk.size(); ++i) {
    if (!walk[i].crossing || *walk[i].crossing != c) continue;
    int k = walk[i].in_slot % 2 == 0 ? 0 : 1;
    if (out[k] >= 0)
      throw CurveError(Errc::NonTransversalPassage, "slot pair passed twice at crossing " + std::to_string(c));
    out[k] = i;
  }
  if (out[0] < 0 || out[1] < 0)
    throw CurveError(Errc::OperandMissing, "crossing " + std::to_string(c) + " not passed twice");
  return out;
}

Sides sides_of(const CurveDiagram& d, CrossingId c) {
  auto walk = traverse(d);
  auto p = passage_indices(walk, c);
  Sides out;
  int n = (int)walk.size();
  for (int i = (p[0] + 1) % n;; i = (i + 1) % n) {
    out[0].insert(walk[i].arc);
    if (i == p[1]) break;
  }
  for (int i = (p[1] + 1) % n;; i = (i + 1) % n) {
    out[1].insert(walk[i].arc);
    if (i == p[0]) break;
  }
  return out;
}

int overlap(const std::set<ArcId>& x, const std::set<ArcId>& y) {
  int n = 0;
  for (ArcId a : x) n += y.count(a) ? 1 : 0;
  return n;
}

// A surviving crossing keeps its passage order: moves never carry the
// basepoint past a passage (merged arcs have no interior crossings), so the
// first/second labels and hence the sides match identically. Arc content is
// used as a cross-check only; `exclude` holds move-local arcs whose side can
// legitimately change (the flipped triangle arcs).
std::array<int, 2> continuation_bijection(const CurveDiagram& dj, const CurveDiagram& dj1,
                                          CrossingId c, const std::set<ArcId>& exclude,
                                          const std::string& what) {
  Sides va = sides_of(dj, c), vb = sides_of(dj1, c);
  for (auto& s : va)
    for (ArcId a : exclude) s.erase(a);
  for (auto& s : vb)
    for (ArcId a : exclude) s.erase(a);
  int straight = overlap(va[0], vb[0]) + overlap(va[1], vb[1]);
  int crossed = overlap(va[0], vb[1]) + overlap(va[1], vb[0]);
  if (crossed > straight)
    throw CurveError(Errc::SideInconsistency, "continuity contradicts passage order at " + what);
  return {1, 2};
}

// Side matching through the tangency of an R2 pair: each division point
// slides from one crossing to the other along its strand, i.e. across one of
// the two bigon arcs, pairing the passages strand by strand.
std::array<int, 2> r2_bijection(const CurveDiagram& d, CrossingId c, CrossingId e,
                                const std::string& what) {
  DiagramIndex idx = DiagramIndex::build(d);
  auto corner = [&](const Dart& dart) -> CrossingId {
    HalfEdgeId head = d.arc(dart.arc)->ends[dart.head_end];
    auto it = idx.slot_of.find(head);
    return it == idx.slot_of.end() ? -1 : it->second.crossing;
  };
  std::array<ArcId, 2> bigon{-1, -1};
  for (const Face& f : trace_faces(d)) {
    if (f.darts.size() != 2) continue;
    CrossingId u = corner(f.darts[0]), v = corner(f.darts[1]);
    if ((u == c && v == e) || (u == e && v == c)) {
      bigon = {f.darts[0].arc, f.darts[1].arc};
      break;
    }
  }
  if (bigon[0] < 0 || bigon[0] == bigon[1])
    throw CurveError(Errc::NotABigon, "no bigon between the pair at " + what);

  auto walk = traverse(d);
  int n = (int)walk.size();
  std::array<int, 2> pc = passage_indices(walk, c), pe = passage_indices(walk, e);

  // phi: walk index of a passage of c -> walk index of the paired passage of e.
  std::map<int, int> phi;
  for (ArcId t : bigon) {
    int i = -1;
    for (int k = 0; k < n; ++k)
      if (walk[k].arc == t) i = k;
    int tail = i == 0 ? n - 1 : i - 1;
    CrossingId tail_c = walk[tail].crossing.value_or(-1);
    CrossingId head_c = walk[i].crossing.value_or(-1);
    if (tail_c == c && head_c == e)
      phi[tail] = i;
    else if (tail_c == e && head_c == c)
      phi[i] = tail;
    else
      throw CurveError(Errc::SideInconsistency, "bigon arc does not join the pair at " + what);
  }
  if (phi.size() != 2 || !phi.count(pc[0]) || !phi.count(pc[1]) || phi[pc[0]] == phi[pc[1]])
    throw CurveError(Errc::SideInconsistency, "inconsistent strand pairing at " + what);
  return phi[pc[0]] == pe[0] ? std::array<int, 2>{1, 2} : std::array<int, 2>{2, 1};
}

// The kink side of an R1 crossing: the interval that is exactly the monogon
// loop. A one-crossing diagram has two such loops; the lower arc id is taken
// as the vanishing one (convention).
int small_side(const CurveDiagram& d, CrossingId c, const Sides& sd) {
  DiagramIndex idx = DiagramIndex::build(d);
  auto is_loop = [&](int k) {
    if (sd[k].size() != 1) return false;
    const Arc* ar = d.arc(*sd[k].begin());
    return idx.slot_of.count(ar->ends[0]) && idx.slot_of.count(ar->ends[1]) &&
           idx.slot_of.at(ar->ends[0]).crossing == c && idx.slot_of.at(ar->ends[1]).crossing == c;
  };
  bool l0 = is_loop(0), l1 = is_loop(1);
  if (l0 && l1) return *sd[0].begin() < *sd[1].begin() ? 0 : 1;
  if (l0) return 0;
  if (l1) return 1;
  throw CurveError(Errc::SideInconsistency, "no monogon side at crossing " + std::to_string(c));
}

std::array<int, 2> r1_bijection(const CurveDiagram& d, CrossingId c) {
  Sides sd = sides_of(d, c);
  int sm = small_side(d, c, sd);
  // Empty-vertex sides: 1 = the point, 2 = the entire curve.
  return sm == 0 ? std::array<int, 2>{1, 2} : std::array<int, 2>{2, 1};
}

}  // namespace

bool CrossingTrackGraph::in_terminal_set(TrackVertex v) const {
  if (v.crossing < 0) return true;
  if (v.level == (int)levels.diagrams.size() - 1) return true;
  return v.level == 0 && v.crossing == base;
}

std::vector<int> CrossingTrackGraph::edges_at(TrackVertex v) const {
  std::vector<int> out;
  for (int i = 0; i < (int)edges.size(); ++i)
    if (edges[i].a == v || edges[i].b == v) out.push_back(i);
  return out;
}

int CrossingTrackGraph::degree(TrackVertex v) const { return (int)edges_at(v).size(); }

CrossingTrackGraph build_tracking_graph(const HomotopyScript& s, const DoubledCurve& dc) {
  if (s.terminal != Terminal::point)
    throw CurveError(Errc::TerminalMismatch, "tracking graph needs a contraction to a point");
  if (canonical_signature(s.initial) != canonical_signature(dc.beta) ||
      s.initial.basepoint != dc.beta.basepoint)
    throw CurveError(Errc::OperandMissing, "script does not start at the doubled curve");

  CrossingTrackGraph g;
  g.levels = elaborate(s);
  g.moves = s.moves;
  g.base = dc.base;

  for (int j = 0; j < (int)g.levels.gaps.size(); ++j) {
    const ApplyResult& gap = g.levels.gaps[j];
    const Move& m = s.moves[j];
    std::set<CrossingId> destroyed(gap.destroyed_crossings.begin(), gap.destroyed_crossings.end());
    std::set<ArcId> exclude;
    if (m.type == MoveType::R3) exclude = {m.face[0], m.face[1], m.face[2]};
    for (const Crossing& c : g.levels.diagrams[j].crossings) {
      if (destroyed.count(c.id)) continue;
      std::string where = "level " + std::to_string(j) + " crossing " + std::to_string(c.id);
      g.edges.push_back({{j, c.id},
                         {j + 1, c.id},
                         TrackEdgeType::continuation,
                         continuation_bijection(g.levels.diagrams[j], g.levels.diagrams[j + 1],
                                                c.id, exclude, where)});
    }
    switch (m.type) {
      case MoveType::R1plus: {
        CrossingId c = gap.created_crossings.at(0);
        g.edges.push_back({{j + 1, c}, {j, -1}, TrackEdgeType::r1_link,
                           r1_bijection(g.levels.diagrams[j + 1], c)});
        break;
      }
      case MoveType::R1minus: {
        CrossingId c = gap.destroyed_crossings.at(0);
        g.edges.push_back(
            {{j, c}, {j + 1, -1}, TrackEdgeType::r1_link, r1_bijection(g.levels.diagrams[j], c)});
        break;
      }
      case MoveType::R2plus: {
        CrossingId c = gap.created_crossings.at(0), d = gap.created_crossings.at(1);
        std::string where = "level " + std::to_string(j + 1) + " pair " + std::to_string(c) + "," +
                            std::to_string(d);
        g.edges.push_back({{j + 1, c},
                           {j + 1, d},
                           TrackEdgeType::r2_horizontal,
                           r2_bijection(g.levels.diagrams[j + 1], c, d, where)});
        break;
      }
      case MoveType::R2minus: {
        CrossingId c = gap.destroyed_crossings.at(0), d = gap.destroyed_crossings.at(1);
        std::string where =
            "level " + std::to_string(j) + " pair " + std::to_string(c) + "," + std::to_string(d);
        g.edges.push_back({{j, c},
                           {j, d},
                           TrackEdgeType::r2_horizontal,
                           r2_bijection(g.levels.diagrams[j], c, d, where)});
        break;
      }
      case MoveType::R3:
        break;
    }
  }

  // The perturbation round trip carries the subcurve at one cluster crossing
  // of the doubled pair to the other, exchanging the two sides.
  for (const auto& [aid, cl] : dc.clusters) {
    (void)aid;
    g.edges.push_back({{0, cl.i1}, {0, cl.i2}, TrackEdgeType::beta_extra, {2, 1}});
    g.edges.push_back({{0, cl.i3}, {0, cl.i4}, TrackEdgeType::beta_extra, {2, 1}});
  }

  for (int j = 0; j < (int)g.levels.diagrams.size(); ++j)
    for (const Crossing& c : g.levels.diagrams[j].crossings) {
      TrackVertex v{j, c.id};
      if (g.in_terminal_set(v)) continue;
      if (g.degree(v) != 2)
        throw CurveError(Errc::DegreeViolation, "vertex level " + std::to_string(j) + " crossing " +
                                                    std::to_string(c.id) + " has degree " +
                                                    std::to_string(g.degree(v)));
    }
  return g;
}

HalvingWalk walk_halving_path(const CrossingTrackGraph& g) {
  TrackVertex start{0, g.base};
  std::map<TrackVertex, std::vector<int>> adj;
  for (int i = 0; i < (int)g.edges.size(); ++i) {
    adj[g.edges[i].a].push_back(i);
    adj[g.edges[i].b].push_back(i);
  }
  HalvingWalk w;
  w.vertices.push_back(start);
  std::vector<char> used(g.edges.size(), 0);
  TrackVertex cur = start;
  while (true) {
    if (w.edges.size() > g.edges.size())
      throw CurveError(Errc::NonTermination, "halving walk exceeded the edge count");
    int pick = -1;
    for (int ei : adj[cur])
      if (!used[ei]) {
        pick = ei;
        break;
      }
    if (pick < 0)
      throw CurveError(Errc::DegreeViolation, "halving walk stuck at level " +
                                                  std::to_string(cur.level));
    used[pick] = 1;
    cur = g.edges[pick].a == cur ? g.edges[pick].b : g.edges[pick].a;
    w.edges.push_back(pick);
    w.vertices.push_back(cur);
    if (g.in_terminal_set(cur)) break;
  }
  return w;
}

SubcurveSelection extract_subcurves(const CrossingTrackGraph& g, const HalvingWalk& path,
                                    const DoubledCurve& dc) {
  (void)dc;
  const CurveDiagram& b0 = g.levels.diagrams[0];
  ArcId bp_arc = -1;
  for (const Arc& a : b0.arcs)
    if (a.ends[0] == b0.basepoint || a.ends[1] == b0.basepoint) bp_arc = a.id;
  if (bp_arc < 0) throw CurveError(Errc::DanglingReference, "basepoint arc missing");

  Sides base_sides = sides_of(b0, g.base);
  int side = base_sides[0].count(bp_arc) ? 1 : 2;  // first half of the doubled traversal

  SubcurveSelection sel;
  sel.entries.push_back({0, g.base, side});
  for (int i = 0; i < (int)path.edges.size(); ++i) {
    const TrackEdge& e = g.edges[path.edges[i]];
    TrackVertex from = path.vertices[i], to = path.vertices[i + 1];
    if (!((e.a == from && e.b == to) || (e.a == to && e.b == from)))
      throw CurveError(Errc::SideInconsistency, "walk step does not follow its edge");
    // Re-derive the bijection from the level diagrams as a per-step check.
    std::array<int, 2> again = e.bij;
    if (e.type == TrackEdgeType::continuation) {
      int gap = std::min(e.a.level, e.b.level);
      std::set<ArcId> exclude;
      if (g.moves[gap].type == MoveType::R3)
        exclude = {g.moves[gap].face[0], g.moves[gap].face[1], g.moves[gap].face[2]};
      again = continuation_bijection(g.levels.diagrams[gap], g.levels.diagrams[gap + 1],
                                     e.a.crossing, exclude, "verification step " + std::to_string(i));
    } else if (e.type == TrackEdgeType::r2_horizontal) {
      again = r2_bijection(g.levels.diagrams[e.a.level], e.a.crossing, e.b.crossing,
                           "verification step " + std::to_string(i));
    } else if (e.type == TrackEdgeType::r1_link) {
      TrackVertex kink = e.a.crossing >= 0 ? e.a : e.b;
      again = r1_bijection(g.levels.diagrams[kink.level], kink.crossing);
    }
    if (again != e.bij)
      throw CurveError(Errc::SideInconsistency,
                       "recorded bijection disagrees at step " + std::to_string(i));
    side = e.bij[side - 1];
    sel.entries.push_back({to.level, to.crossing, side});
  }

  const TrackVertex& last = path.vertices.back();
  if (last.crossing < 0 && side == 1) {
    sel.outcome = SubcurveSelection::Outcome::point;
  } else {
    sel.outcome = SubcurveSelection::Outcome::resume;
    sel.resume_level = last.level;
  }
  return sel;
}

}  // namespace curves
