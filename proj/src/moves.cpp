#include "curves/moves.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace curves {

const char* move_type_name(MoveType t) {
  switch (t) {
    case MoveType::R1plus: return "R1+";
    case MoveType::R1minus: return "R1-";
    case MoveType::R2plus: return "R2+";
    case MoveType::R2minus: return "R2-";
    case MoveType::R3: return "R3";
  }
  return "?";
}

namespace {

struct Ctx {
  const CurveDiagram& d;
  DiagramIndex ix;
  std::vector<TraversalStep> walk;
  std::map<ArcId, std::pair<HalfEdgeId, HalfEdgeId>> dirs;
  HalfEdgeId next_half_edge;
  ArcId next_arc;

  explicit Ctx(const CurveDiagram& diagram)
      : d(diagram),
        ix(DiagramIndex::build(diagram)),
        walk(traverse(diagram)),
        dirs(arc_directions(walk)),
        next_half_edge(diagram.max_half_edge() + 1),
        next_arc(diagram.max_arc_id() + 1) {}

  HalfEdgeId fresh_half_edge() { return next_half_edge++; }
  ArcId fresh_arc() { return next_arc++; }
};

void check_fresh_crossing(const CurveDiagram& d, CrossingId id) {
  if (id < 0) throw CurveError(Errc::OperandMissing, "missing fresh crossing id");
  if (d.crossing(id))
    throw CurveError(Errc::IdentifierCollision, "crossing id " + std::to_string(id) + " already in use");
}

// After a move destroys the basepoint arc, reattach the basepoint to the
// lowest-id arc that survived the move intact, keeping the old traversal
// direction. With no intact survivor, fall back to the lowest-id arc.
void fix_basepoint(CurveDiagram& nd, const Ctx& ctx, const std::set<ArcId>& destroyed) {
  EndRef bp = ctx.ix.end_of.at(ctx.d.basepoint);
  if (!destroyed.count(bp.arc) && nd.arc(bp.arc)) return;  // basepoint arc intact
  for (const auto& a : nd.arcs) {
    const Arc* old = ctx.d.arc(a.id);
    if (!old) continue;
    if (destroyed.count(a.id)) continue;
    if (std::set<HalfEdgeId>{old->ends[0], old->ends[1]} != std::set<HalfEdgeId>{a.ends[0], a.ends[1]}) continue;
    nd.basepoint = ctx.dirs.at(a.id).first;
    return;
  }
  const Arc& a = nd.arcs.front();
  nd.basepoint = std::min(a.ends[0], a.ends[1]);
}

// Deletes crossings/arcs and merges the remaining arc stubs along `bonds`
// (pairs of half-edges that become joined). Chains of bonded arcs merge into
// one arc keeping the smallest participating id; a chain closing on itself
// becomes a free loop.
CurveDiagram splice_rebuild(const Ctx& ctx, const std::set<CrossingId>& dead_crossings,
                            const std::set<ArcId>& dead_arcs,
                            const std::vector<std::pair<HalfEdgeId, HalfEdgeId>>& bonds,
                            std::vector<ArcId>* destroyed_arcs, std::vector<ArcId>* created_arcs) {
  const CurveDiagram& d = ctx.d;
  CurveDiagram nd;
  nd.genus = d.genus;
  for (const auto& c : d.crossings)
    if (!dead_crossings.count(c.id)) nd.crossings.push_back(c);

  std::map<HalfEdgeId, HalfEdgeId> bond_of;
  for (auto [x, y] : bonds) {
    bond_of[x] = y;
    bond_of[y] = x;
  }

  std::set<ArcId> consumed;
  for (const auto& a0 : d.arcs) {
    if (dead_arcs.count(a0.id) || consumed.count(a0.id)) continue;
    bool touched = bond_of.count(a0.ends[0]) || bond_of.count(a0.ends[1]);
    if (!touched) {
      nd.arcs.push_back(a0);
      continue;
    }
    // Gather the whole chain of arcs connected to a0 through bonds.
    std::vector<ArcId> chain{a0.id};
    consumed.insert(a0.id);
    bool closed = false;
    auto extend = [&](HalfEdgeId start) {
      HalfEdgeId cur = start;
      while (bond_of.count(cur)) {
        HalfEdgeId other = bond_of.at(cur);
        EndRef er = ctx.ix.end_of.at(other);
        if (consumed.count(er.arc)) {
          closed = true;
          return cur;
        }
        consumed.insert(er.arc);
        chain.push_back(er.arc);
        cur = d.arc(er.arc)->ends[1 - er.end];
      }
      return cur;
    };
    HalfEdgeId end0 = extend(a0.ends[0]);
    HalfEdgeId end1 = closed ? -1 : extend(a0.ends[1]);
    Arc merged;
    merged.id = *std::min_element(chain.begin(), chain.end());
    // A closed chain becomes a free loop; keep a0's own ends as the residual pair.
    merged.ends = closed ? a0.ends : std::array<HalfEdgeId, 2>{end0, end1};
    nd.arcs.push_back(merged);
  }

  if (destroyed_arcs) {
    for (const auto& a : d.arcs)
      if (!nd.arc(a.id)) destroyed_arcs->push_back(a.id);
  }
  if (created_arcs) {
    for (const auto& a : nd.arcs) {
      const Arc* old = d.arc(a.id);
      if (!old || std::set<HalfEdgeId>{old->ends[0], old->ends[1]} != std::set<HalfEdgeId>{a.ends[0], a.ends[1]})
        created_arcs->push_back(a.id);
    }
  }
  nd.basepoint = d.basepoint;
  nd.sort_by_id();
  return nd;
}

bool dart_agrees_with_curve(const Ctx& ctx, const Dart& dt) {
  const Arc* a = ctx.d.arc(dt.arc);
  return ctx.dirs.at(dt.arc).second == a->ends[dt.head_end];
}

ApplyResult do_r1plus(const CurveDiagram& d, const Move& m) {
  Ctx ctx(d);
  const Arc* a = d.arc(m.arc);
  if (!a) throw CurveError(Errc::OperandMissing, "R1+ arc " + std::to_string(m.arc) + " not found");
  check_fresh_crossing(d, m.new_crossing);

  auto [tail, head] = ctx.dirs.at(a->id);
  HalfEdgeId x1 = ctx.fresh_half_edge();  // A1 cut end
  HalfEdgeId x2 = ctx.fresh_half_edge();  // A2 cut end
  HalfEdgeId x3 = ctx.fresh_half_edge();  // loop end a
  HalfEdgeId x4 = ctx.fresh_half_edge();  // loop end b

  ApplyResult res;
  CurveDiagram nd = d;
  // remove arc a, add A1 = [tail, x1], A2 = [x2, head], loop = [x3, x4]
  nd.arcs.erase(std::remove_if(nd.arcs.begin(), nd.arcs.end(), [&](const Arc& q) { return q.id == a->id; }),
                nd.arcs.end());
  Arc L{ctx.fresh_arc(), {x3, x4}};
  res.created_arcs.push_back(L.id);
  if (d.crossings.empty()) {
    // Kinking the free loop: the outer pieces close up into a single arc
    // running from the x2 side around to the x1 side.
    Arc B{ctx.fresh_arc(), {x2, x1}};
    nd.arcs.push_back(B);
    res.created_arcs.push_back(B.id);
  } else {
    Arc A1{ctx.fresh_arc(), {tail, x1}};
    Arc A2{ctx.fresh_arc(), {x2, head}};
    nd.arcs.push_back(A1);
    nd.arcs.push_back(A2);
    res.created_arcs.push_back(A1.id);
    res.created_arcs.push_back(A2.id);
  }
  nd.arcs.push_back(L);

  Crossing z;
  z.id = m.new_crossing;
  if (m.side == KinkSide::left)
    z.slots = {x1, x4, x3, x2};
  else
    z.slots = {x1, x2, x3, x4};
  nd.crossings.push_back(z);

  std::set<ArcId> destroyed{a->id};
  fix_basepoint(nd, ctx, destroyed);
  nd.sort_by_id();
  res.after = nd;
  res.created_crossings = {z.id};
  res.destroyed_arcs = {a->id};
  return res;
}

ApplyResult do_r1minus(const CurveDiagram& d, const Move& m) {
  Ctx ctx(d);
  const Crossing* c = d.crossing(m.crossing);
  if (!c) throw CurveError(Errc::OperandMissing, "R1- crossing " + std::to_string(m.crossing) + " not found");
  // Locate the monogon: a loop arc occupying two adjacent slots of c.
  int loop_slot = -1;
  ArcId loop_arc = -1;
  for (int j = 0; j < 4; ++j) {
    EndRef e0 = ctx.ix.end_of.at(c->slots[j]);
    EndRef e1 = ctx.ix.end_of.at(c->slots[(j + 1) % 4]);
    if (e0.arc == e1.arc) {
      const Arc* la = d.arc(e0.arc);
      if (std::set<HalfEdgeId>{la->ends[0], la->ends[1]} ==
          std::set<HalfEdgeId>{c->slots[j], c->slots[(j + 1) % 4]}) {
        loop_slot = j;
        loop_arc = e0.arc;
        break;
      }
    }
  }
  if (loop_slot < 0)
    throw CurveError(Errc::FacePreconditionFailed, "crossing " + std::to_string(m.crossing) + " bounds no monogon");

  HalfEdgeId hx = c->slots[(loop_slot + 2) % 4];
  HalfEdgeId hy = c->slots[(loop_slot + 3) % 4];
  ApplyResult res;
  std::set<CrossingId> dead_c{c->id};
  std::set<ArcId> dead_a{loop_arc};
  res.after = splice_rebuild(ctx, dead_c, dead_a, {{hx, hy}}, &res.destroyed_arcs, &res.created_arcs);
  res.destroyed_crossings = {c->id};
  std::set<ArcId> destroyed(res.destroyed_arcs.begin(), res.destroyed_arcs.end());
  fix_basepoint(res.after, ctx, destroyed);
  return res;
}

struct FaceOccurrence {
  size_t face;
  size_t pos;
};

ApplyResult do_r2plus(const CurveDiagram& d, const Move& m) {
  Ctx ctx(d);
  const Arc* aa = d.arc(m.arcs[0]);
  const Arc* ab = d.arc(m.arcs[1]);
  if (!aa || !ab) throw CurveError(Errc::OperandMissing, "R2+ arc operand not found");
  check_fresh_crossing(d, m.new_crossings[0]);
  check_fresh_crossing(d, m.new_crossings[1]);
  if (m.new_crossings[0] == m.new_crossings[1])
    throw CurveError(Errc::IdentifierCollision, "R2+ fresh ids coincide");

  auto faces = trace_faces(d);
  // Find the first occurrence pair matching the requested relative
  // orientation: the finger leaves arc a and crosses arc b inside one face.
  struct Pick {
    size_t face = 0;
    Dart da, db;
    bool same_occurrence = false;
    bool found = false;
  } pick;
  for (size_t fi = 0; fi < faces.size() && !pick.found; ++fi) {
    const auto& f = faces[fi];
    for (size_t i = 0; i < f.darts.size() && !pick.found; ++i) {
      if (f.darts[i].arc != aa->id) continue;
      for (size_t j = 0; j < f.darts.size() && !pick.found; ++j) {
        if (f.darts[j].arc != ab->id) continue;
        bool same_occ = (i == j);
        if (same_occ && aa->id != ab->id) continue;
        RelOrientation rel;
        if (same_occ) {
          rel = RelOrientation::antiparallel;
        } else {
          bool ga = dart_agrees_with_curve(ctx, f.darts[i]);
          bool gb = dart_agrees_with_curve(ctx, f.darts[j]);
          rel = (ga != gb) ? RelOrientation::parallel : RelOrientation::antiparallel;
        }
        if (rel != m.orientation) continue;
        pick = {fi, f.darts[i], f.darts[j], same_occ, true};
      }
    }
  }
  if (!pick.found)
    throw CurveError(Errc::FacePreconditionFailed, "arcs " + std::to_string(m.arcs[0]) + "," +
                                                       std::to_string(m.arcs[1]) +
                                                       " do not cobound a face with the requested orientation");

  CrossingId cp = m.new_crossings[0], cq = m.new_crossings[1];
  // Half-edges of the new local picture.
  HalfEdgeId am_p = -1, am_q = -1, bm_p = -1, bm_q = -1;
  HalfEdgeId alpha1 = -1, alpha2 = -1, beta1 = -1, beta2 = -1;

  CurveDiagram nd = d;
  nd.genus = d.genus;
  std::set<ArcId> destroyed;
  std::vector<ArcId> created;

  am_p = ctx.fresh_half_edge();
  am_q = ctx.fresh_half_edge();
  bm_p = ctx.fresh_half_edge();
  bm_q = ctx.fresh_half_edge();
  alpha1 = ctx.fresh_half_edge();
  alpha2 = ctx.fresh_half_edge();
  beta1 = ctx.fresh_half_edge();
  beta2 = ctx.fresh_half_edge();

  auto erase_arc = [&](ArcId id) {
    nd.arcs.erase(std::remove_if(nd.arcs.begin(), nd.arcs.end(), [&](const Arc& q) { return q.id == id; }),
                  nd.arcs.end());
  };
  auto add_arc = [&](HalfEdgeId e0, HalfEdgeId e1) {
    Arc na{ctx.fresh_arc(), {e0, e1}};
    nd.arcs.push_back(na);
    created.push_back(na.id);
    return na.id;
  };

  // Oriented ends of a dart: tail/head half-edges along the dart direction.
  auto dart_tail = [&](const Dart& dt) { return d.arc(dt.arc)->ends[1 - dt.head_end]; };
  auto dart_head = [&](const Dart& dt) { return d.arc(dt.arc)->ends[dt.head_end]; };

  if (aa->id != ab->id) {
    // Split a into A1 (tail side of the picked dart) + A2, b into B1 + B2.
    destroyed.insert(aa->id);
    destroyed.insert(ab->id);
    erase_arc(aa->id);
    erase_arc(ab->id);
    add_arc(dart_tail(pick.da), alpha1);
    add_arc(alpha2, dart_head(pick.da));
    add_arc(dart_tail(pick.db), beta1);
    add_arc(beta2, dart_head(pick.db));
  } else if (!pick.same_occurrence) {
    // Finger from one side of the arc across the other side: three pieces
    // along the finger-side dart; the middle one carries both inner stubs.
    destroyed.insert(aa->id);
    erase_arc(aa->id);
    add_arc(dart_tail(pick.da), alpha1);
    add_arc(alpha2, beta2);
    add_arc(beta1, dart_head(pick.da));
  } else {
    // Self-push along a single face side: cut twice along the dart.
    destroyed.insert(aa->id);
    erase_arc(aa->id);
    HalfEdgeId t = dart_tail(pick.da), h = dart_head(pick.da);
    bool free_loop = !ctx.ix.slot_of.count(t) && !ctx.ix.slot_of.count(h);
    if (free_loop) {
      add_arc(beta2, alpha1);  // omega: from the second cut back around to the first
    } else {
      add_arc(t, alpha1);
      add_arc(beta2, h);
    }
    add_arc(alpha2, beta1);  // middle piece
  }
  ArcId am_id = add_arc(am_p, am_q);
  ArcId bm_id = add_arc(bm_p, bm_q);
  (void)am_id;
  (void)bm_id;

  // Two distinct darts sit on the face boundary with the face on their right;
  // the finger from da then meets db's strand with the opposite local
  // handedness to the self-push picture, so the slot cycle mirrors.
  Crossing P = pick.same_occurrence ? Crossing{cp, {bm_p, am_p, beta2, alpha1}}
                                    : Crossing{cp, {bm_p, alpha1, beta2, am_p}};
  Crossing Q = pick.same_occurrence ? Crossing{cq, {beta1, am_q, bm_q, alpha2}}
                                    : Crossing{cq, {beta1, alpha2, bm_q, am_q}};
  nd.crossings.push_back(P);
  nd.crossings.push_back(Q);

  fix_basepoint(nd, ctx, destroyed);
  nd.sort_by_id();

  ApplyResult res;
  res.after = nd;
  res.created_crossings = {cp, cq};
  res.destroyed_arcs.assign(destroyed.begin(), destroyed.end());
  res.created_arcs = created;
  return res;
}

// Locates a bigon face whose corner crossings are exactly {c1, c2}; returns
// the two darts. Deterministic first match.
std::optional<std::pair<Dart, Dart>> find_bigon(const CurveDiagram& d, CrossingId c1, CrossingId c2) {
  DiagramIndex ix = DiagramIndex::build(d);
  auto head_crossing = [&](const Dart& dt) -> CrossingId {
    HalfEdgeId h = d.arc(dt.arc)->ends[dt.head_end];
    auto it = ix.slot_of.find(h);
    return it == ix.slot_of.end() ? -1 : it->second.crossing;
  };
  for (const auto& f : trace_faces(d)) {
    if (f.darts.size() != 2) continue;
    CrossingId h0 = head_crossing(f.darts[0]);
    CrossingId h1 = head_crossing(f.darts[1]);
    if (std::set<CrossingId>{h0, h1} == std::set<CrossingId>{c1, c2}) return std::pair(f.darts[0], f.darts[1]);
  }
  return std::nullopt;
}

ApplyResult do_r2minus(const CurveDiagram& d, const Move& m) {
  Ctx ctx(d);
  if (m.crossings.size() != 2) throw CurveError(Errc::OperandMissing, "R2- needs exactly two crossings");
  CrossingId c1 = m.crossings[0], c2 = m.crossings[1];
  if (c1 == c2) throw CurveError(Errc::OperandMissing, "R2- crossings must be distinct");
  if (!d.crossing(c1) || !d.crossing(c2)) throw CurveError(Errc::OperandMissing, "R2- crossing not found");
  auto big = find_bigon(d, c1, c2);
  if (!big) throw CurveError(Errc::NotABigon, "crossings " + std::to_string(c1) + "," + std::to_string(c2) +
                                                  " bound no bigon face");
  ArcId e1 = big->first.arc, e2 = big->second.arc;
  if (e1 == e2) throw CurveError(Errc::NotABigon, "degenerate bigon with a single arc");

  // Bond the outer stubs strand-wise: the outer leg opposite a bigon arc end
  // at one crossing joins the outer leg opposite the same arc's other end.
  std::vector<std::pair<HalfEdgeId, HalfEdgeId>> bonds;
  for (ArcId e : {e1, e2}) {
    const Arc* ea = d.arc(e);
    SlotRef s0 = ctx.ix.slot_of.at(ea->ends[0]);
    SlotRef s1 = ctx.ix.slot_of.at(ea->ends[1]);
    HalfEdgeId o0 = d.crossing(s0.crossing)->slots[(s0.slot + 2) % 4];
    HalfEdgeId o1 = d.crossing(s1.crossing)->slots[(s1.slot + 2) % 4];
    bonds.push_back({o0, o1});
  }
  ApplyResult res;
  std::set<CrossingId> dead_c{c1, c2};
  std::set<ArcId> dead_a{e1, e2};
  res.after = splice_rebuild(ctx, dead_c, dead_a, bonds, &res.destroyed_arcs, &res.created_arcs);
  res.destroyed_crossings = {c1, c2};
  std::set<ArcId> destroyed(res.destroyed_arcs.begin(), res.destroyed_arcs.end());
  fix_basepoint(res.after, ctx, destroyed);
  return res;
}

ApplyResult do_r3(const CurveDiagram& d, const Move& m) {
  Ctx ctx(d);
  if (m.crossings.size() != 3) throw CurveError(Errc::OperandMissing, "R3 needs exactly three crossings");
  std::set<CrossingId> triple(m.crossings.begin(), m.crossings.end());
  std::set<ArcId> witness(m.face.begin(), m.face.end());
  if (triple.size() != 3 || witness.size() != 3)
    throw CurveError(Errc::OperandMissing, "R3 operands must be distinct");
  for (CrossingId c : triple)
    if (!d.crossing(c)) throw CurveError(Errc::OperandMissing, "R3 crossing not found");
  for (ArcId a : witness)
    if (!d.arc(a)) throw CurveError(Errc::OperandMissing, "R3 witness arc not found");

  auto head_crossing = [&](const Dart& dt) -> CrossingId {
    HalfEdgeId h = d.arc(dt.arc)->ends[dt.head_end];
    auto it = ctx.ix.slot_of.find(h);
    return it == ctx.ix.slot_of.end() ? -1 : it->second.crossing;
  };

  std::optional<Face> tri;
  for (const auto& f : trace_faces(d)) {
    if (f.darts.size() != 3) continue;
    std::set<CrossingId> corners;
    std::set<ArcId> sides;
    for (const auto& dt : f.darts) {
      corners.insert(head_crossing(dt));
      sides.insert(dt.arc);
    }
    if (corners == triple && sides == witness) {
      tri = f;
      break;
    }
  }
  if (!tri)
    throw CurveError(Errc::NotATriangle, "no triangle face matches the witness");

  // Orbit darts D0,D1,D2: D_k arrives at corner H_k; arc of D_k is the
  // triangle edge from H_{k-1} to H_k.
  std::array<CrossingId, 3> H;
  std::array<int, 3> a_k;      // arrival slot at corner k
  std::array<ArcId, 3> e_in;   // triangle arc arriving at corner k
  std::array<ArcId, 3> e_out;  // triangle arc departing corner k
  for (int k = 0; k < 3; ++k) {
    const Dart& dt = tri->darts[k];
    HalfEdgeId h = d.arc(dt.arc)->ends[dt.head_end];
    SlotRef sr = ctx.ix.slot_of.at(h);
    H[k] = sr.crossing;
    a_k[k] = sr.slot;
    e_in[k] = dt.arc;
    e_out[k] = tri->darts[(k + 1) % 3].arc;
  }

  CurveDiagram nd = d;
  for (int k = 0; k < 3; ++k) {
    const Crossing* before = d.crossing(H[k]);
    Crossing* after = nd.crossing(H[k]);
    int a = a_k[k];
    int kprev = (k + 2) % 3;
    int knext = (k + 1) % 3;
    // u_{k-1}: outer half-edge at corner H_{k-1}, slot a_{k-1}+3.
    HalfEdgeId u_prev = d.crossing(H[kprev])->slots[(a_k[kprev] + 3) % 4];
    // v_k: outer half-edge at corner H_{k+1}, slot a_{k+1}+2.
    HalfEdgeId v_k = d.crossing(H[knext])->slots[(a_k[knext] + 2) % 4];
    after->slots[a] = u_prev;
    after->slots[(a + 1) % 4] = v_k;
    after->slots[(a + 2) % 4] = before->slots[a];            // e_{k-1}'s end
    after->slots[(a + 3) % 4] = before->slots[(a + 1) % 4];  // e_k's end
    (void)e_in;
    (void)e_out;
  }

  ApplyResult res;
  res.after = nd;
  return res;
}

}  // namespace

ApplyResult apply_move(const CurveDiagram& d, const Move& m) {
  ApplyResult res;
  switch (m.type) {
    case MoveType::R1plus: res = do_r1plus(d, m); break;
    case MoveType::R1minus: res = do_r1minus(d, m); break;
    case MoveType::R2plus: res = do_r2plus(d, m); break;
    case MoveType::R2minus: res = do_r2minus(d, m); break;
    case MoveType::R3: res = do_r3(d, m); break;
    default: throw CurveError(Errc::UnknownMoveVariant, "unhandled move type");
  }
  require_valid(res.after, std::string("after ") + move_type_name(m.type));
  if (res.after.genus != d.genus)
    throw CurveError(Errc::EulerMismatch, "move changed surface genus");
  return res;
}

Levels elaborate(const HomotopyScript& s) {
  require_valid(s.initial, "initial diagram");
  Levels lv;
  lv.diagrams.push_back(s.initial);
  for (const auto& m : s.moves) {
    lv.gaps.push_back(apply_move(lv.diagrams.back(), m));
    lv.diagrams.push_back(lv.gaps.back().after);
  }
  if (s.terminal == Terminal::point && !lv.diagrams.back().crossings.empty())
    throw CurveError(Errc::TerminalMismatch, "terminal flag is 'point' but the final level has crossings");
  return lv;
}

}  // namespace curves
