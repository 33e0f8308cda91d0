#include "curves/resolution_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace curves {

const char* bigon_class_name(BigonClass c) {
  switch (c) {
    case BigonClass::Separable: return "Separable";
    case BigonClass::Trapped: return "Trapped";
    case BigonClass::Mixed: return "Mixed";
  }
  return "?";
}

const char* edge_label_name(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::M1plus: return "M1+";
    case EdgeLabel::M1minus: return "M1-";
    case EdgeLabel::M2aPlus: return "M2a+";
    case EdgeLabel::M2aMinus: return "M2a-";
    case EdgeLabel::M2b: return "M2b";
    case EdgeLabel::M3a: return "M3a";
    case EdgeLabel::M3bPlus: return "M3b+";
    case EdgeLabel::M3bMinus: return "M3b-";
  }
  return "?";
}

namespace {

// Smoothing partner slot at one crossing: positive joins each incoming half
// to the other strand's outgoing half, negative joins the two incoming and
// the two outgoing halves.
std::array<int, 4> partner_slots(const CrossingPassages& p, Sign s) {
  std::array<int, 4> partner{};
  auto pair_up = [&](int x, int y) {
    partner[x] = y;
    partner[y] = x;
  };
  if (s == Sign::positive) {
    pair_up(p.first.in_slot, p.second.out_slot);
    pair_up(p.second.in_slot, p.first.out_slot);
  } else {
    pair_up(p.first.in_slot, p.second.in_slot);
    pair_up(p.first.out_slot, p.second.out_slot);
  }
  return partner;
}

CrossingId dart_head_crossing(const CurveDiagram& d, const DiagramIndex& ix, const Dart& dt) {
  HalfEdgeId h = d.arc(dt.arc)->ends[dt.head_end];
  auto it = ix.slot_of.find(h);
  return it == ix.slot_of.end() ? -1 : it->second.crossing;
}

}  // namespace

BigonClass classify_bigon(const CurveDiagram& d, CrossingId c1, CrossingId c2, Sign s1, Sign s2) {
  if (c1 == c2) throw CurveError(Errc::NotABigon, "bigon corners must be distinct");
  DiagramIndex ix = DiagramIndex::build(d);
  std::set<CrossingId> want{c1, c2};
  std::optional<Face> bigon;
  for (const auto& f : trace_faces(d)) {
    if (f.darts.size() != 2) continue;
    if (std::set<CrossingId>{dart_head_crossing(d, ix, f.darts[0]), dart_head_crossing(d, ix, f.darts[1])} == want &&
        f.darts[0].arc != f.darts[1].arc) {
      bigon = f;
      break;
    }
  }
  if (!bigon)
    throw CurveError(Errc::NotABigon,
                     "crossings " + std::to_string(c1) + "," + std::to_string(c2) + " cobound no bigon");

  auto walk = traverse(d);
  auto passages = crossing_passages(d, walk);
  ArcId e1 = bigon->darts[0].arc, e2 = bigon->darts[1].arc;
  int closed = 0;
  for (auto [c, s] : {std::pair(c1, s1), std::pair(c2, s2)}) {
    std::vector<int> side_slots;
    for (int j = 0; j < 4; ++j) {
      EndRef er = ix.end_of.at(d.crossing(c)->slots[j]);
      if (er.arc == e1 || er.arc == e2) side_slots.push_back(j);
    }
    if (side_slots.size() != 2)
      throw CurveError(Errc::NotABigon, "bigon side arcs do not meet crossing " + std::to_string(c) + " cleanly");
    auto partner = partner_slots(passages.at(c), s);
    if (partner[side_slots[0]] == side_slots[1]) ++closed;
  }
  if (closed == 2) return BigonClass::Mixed;
  if (closed == 0) return BigonClass::Separable;
  return BigonClass::Trapped;
}

namespace {

// Pairing of the six outer strand ends of a triangle disk under one sign
// assignment, plus closed circles of triangle sides, as a canonical string.
std::string local_r3_class(const CurveDiagram& d, const std::array<CrossingId, 3>& corners,
                           const std::array<ArcId, 3>& sides, int mask) {
  DiagramIndex ix = DiagramIndex::build(d);
  auto walk = traverse(d);
  auto passages = crossing_passages(d, walk);

  std::set<ArcId> side_set(sides.begin(), sides.end());
  std::map<CrossingId, std::array<int, 4>> partner;
  for (int i = 0; i < 3; ++i)
    partner[corners[i]] = partner_slots(passages.at(corners[i]), (mask >> i) & 1 ? Sign::negative : Sign::positive);

  auto is_stub = [&](HalfEdgeId h) { return !side_set.count(ix.end_of.at(h).arc); };

  std::vector<HalfEdgeId> stubs;
  for (CrossingId c : corners)
    for (HalfEdgeId h : d.crossing(c)->slots)
      if (is_stub(h)) stubs.push_back(h);

  std::set<ArcId> used_sides;
  std::vector<std::pair<HalfEdgeId, HalfEdgeId>> pairs;
  std::set<HalfEdgeId> seen;
  for (HalfEdgeId start : stubs) {
    if (seen.count(start)) continue;
    HalfEdgeId cur = start;
    for (;;) {
      SlotRef sr = ix.slot_of.at(cur);
      HalfEdgeId joined = d.crossing(sr.crossing)->slots[partner.at(sr.crossing)[sr.slot]];
      if (is_stub(joined)) {
        pairs.emplace_back(std::min(start, joined), std::max(start, joined));
        seen.insert(start);
        seen.insert(joined);
        break;
      }
      EndRef er = ix.end_of.at(joined);
      used_sides.insert(er.arc);
      cur = d.arc(er.arc)->ends[1 - er.end];
    }
  }
  std::vector<ArcId> circle;
  for (ArcId a : sides)
    if (!used_sides.count(a)) circle.push_back(a);
  std::sort(circle.begin(), circle.end());
  std::sort(pairs.begin(), pairs.end());

  std::string out;
  for (auto [x, y] : pairs) out += std::to_string(x) + "-" + std::to_string(y) + ";";
  if (!circle.empty()) {
    out += "O[";
    for (ArcId a : circle) out += std::to_string(a) + ",";
    out += "]";
  }
  return out;
}

void require_triangle(const CurveDiagram& d, const std::array<CrossingId, 3>& corners,
                      const std::array<ArcId, 3>& sides, const char* which) {
  DiagramIndex ix = DiagramIndex::build(d);
  std::set<CrossingId> corner_set(corners.begin(), corners.end());
  std::set<ArcId> side_set(sides.begin(), sides.end());
  if (corner_set.size() != 3 || side_set.size() != 3)
    throw CurveError(Errc::NotATriangle, std::string(which) + ": operands not distinct");
  for (const auto& f : trace_faces(d)) {
    if (f.darts.size() != 3) continue;
    std::set<CrossingId> fc;
    std::set<ArcId> fa;
    for (const auto& dt : f.darts) {
      fc.insert(dart_head_crossing(d, ix, dt));
      fa.insert(dt.arc);
    }
    if (fc == corner_set && fa == side_set) return;
  }
  throw CurveError(Errc::NotATriangle, std::string(which) + ": witness does not bound a triangle");
}

}  // namespace

R3Matchings local_r3_matchings(const CurveDiagram& d_before, const CurveDiagram& d_after,
                               const std::array<CrossingId, 3>& triple,
                               const std::array<ArcId, 3>& witness) {
  R3Matchings out;
  out.corners = triple;
  std::sort(out.corners.begin(), out.corners.end());
  require_triangle(d_before, out.corners, witness, "before");
  require_triangle(d_after, out.corners, witness, "after");

  for (int mask = 0; mask < 8; ++mask) {
    out.before_class[mask] = local_r3_class(d_before, out.corners, witness, mask);
    out.after_class[mask] = local_r3_class(d_after, out.corners, witness, mask);
  }

  std::map<std::string, std::vector<int>> before_by, after_by;
  for (int mask = 0; mask < 8; ++mask) {
    before_by[out.before_class[mask]].push_back(mask);
    after_by[out.after_class[mask]].push_back(mask);
  }

  int plus_fans = 0, minus_fans = 0, before_only = 0, after_only = 0;
  std::set<std::string> classes;
  for (auto& [k, v] : before_by) classes.insert(k);
  for (auto& [k, v] : after_by) classes.insert(k);
  for (const std::string& cls : classes) {
    size_t nb = before_by.count(cls) ? before_by[cls].size() : 0;
    size_t na = after_by.count(cls) ? after_by[cls].size() : 0;
    if (nb == 1 && na == 1) {
      out.m3a_pairs.emplace_back(before_by[cls][0], after_by[cls][0]);
    } else if (nb == 1 && na == 3) {
      ++plus_fans;
      out.m3b_plus = {before_by[cls][0], {after_by[cls][0], after_by[cls][1], after_by[cls][2]}};
    } else if (nb == 3 && na == 1) {
      ++minus_fans;
      out.m3b_minus = {{before_by[cls][0], before_by[cls][1], before_by[cls][2]}, after_by[cls][0]};
    } else if (nb == 1 && na == 0) {
      ++before_only;
      out.before_only_class = cls;
    } else if (nb == 0 && na == 1) {
      ++after_only;
      out.after_only_class = cls;
    } else {
      throw CurveError(Errc::FanCountViolation,
                       "unexpected class multiplicity " + std::to_string(nb) + "/" + std::to_string(na));
    }
  }
  if (plus_fans != 1 || minus_fans != 1 || before_only != 1 || after_only != 1 || out.m3a_pairs.size() != 3)
    throw CurveError(Errc::FanCountViolation, "triangle class table does not have the one-pair/one-fan shape");
  return out;
}

int ResolutionGraph::find_vertex(int level, const Resolution& r) const {
  const auto& vs = vertices[level];
  std::string key = r.key();
  for (size_t i = 0; i < vs.size(); ++i)
    if (vs[i].key() == key && vs[i].signs == r.signs) return (int)i;
  return -1;
}

int ResolutionGraph::flat_id(GammaVertexRef v) const {
  int id = v.index;
  for (int j = 0; j < v.level; ++j) id += (int)vertices[j].size();
  return id;
}

GammaVertexRef ResolutionGraph::from_flat(int id) const {
  for (int j = 0; j < (int)vertices.size(); ++j) {
    if (id < (int)vertices[j].size()) return {j, id};
    id -= (int)vertices[j].size();
  }
  return {-1, -1};
}

int ResolutionGraph::total_vertices() const {
  int n = 0;
  for (const auto& vs : vertices) n += (int)vs.size();
  return n;
}

std::string ResolutionGraph::vertex_key(GammaVertexRef v) const {
  return std::to_string(v.level) + ":" + vertices[v.level][v.index].key();
}

std::vector<int> ResolutionGraph::degrees() const {
  std::vector<int> deg(total_vertices(), 0);
  for (const auto& e : edges) {
    ++deg[flat_id(e.a)];
    ++deg[flat_id(e.b)];
  }
  return deg;
}

namespace {

Resolution without(const Resolution& r, std::initializer_list<CrossingId> drop) {
  Resolution out = r;
  for (CrossingId c : drop) out.signs.erase(c);
  return out;
}

std::string signs_outside(const Resolution& r, const std::set<CrossingId>& skip) {
  std::string out;
  for (auto [c, s] : r.signs)
    if (!skip.count(c)) out += std::to_string(c) + sign_char(s);
  return out;
}

}  // namespace

ResolutionGraph build_gamma(const HomotopyScript& s) {
  Levels lv = elaborate(s);
  ResolutionGraph g;
  g.diagrams = lv.diagrams;
  g.vertices.resize(lv.diagrams.size());
  for (size_t j = 0; j < lv.diagrams.size(); ++j) g.vertices[j] = enumerate_admissible(lv.diagrams[j]);

  auto add_edge = [&](int lj, int ui, int lk, int vi, EdgeLabel label) {
    g.edges.push_back({{lj, ui}, {lk, vi}, label, lk - lj});
  };

  for (size_t j = 0; j < s.moves.size(); ++j) {
    const Move& m = s.moves[j];
    int lj = (int)j, lk = (int)j + 1;
    switch (m.type) {
      case MoveType::R1plus: {
        CrossingId z = m.new_crossing;
        for (size_t vi = 0; vi < g.vertices[lk].size(); ++vi) {
          int ui = g.find_vertex(lj, without(g.vertices[lk][vi], {z}));
          if (ui >= 0) add_edge(lj, ui, lk, (int)vi, EdgeLabel::M1plus);
        }
        break;
      }
      case MoveType::R1minus: {
        CrossingId z = m.crossing;
        for (size_t ui = 0; ui < g.vertices[lj].size(); ++ui) {
          int vi = g.find_vertex(lk, without(g.vertices[lj][ui], {z}));
          if (vi >= 0) add_edge(lj, (int)ui, lk, vi, EdgeLabel::M1minus);
        }
        break;
      }
      case MoveType::R2plus:
      case MoveType::R2minus: {
        bool plus = m.type == MoveType::R2plus;
        CrossingId z1 = plus ? m.new_crossings[0] : m.crossings[0];
        CrossingId z2 = plus ? m.new_crossings[1] : m.crossings[1];
        // The bigon lives on the side of the gap where the pair exists.
        int lp = plus ? lk : lj;   // pair level
        int lo = plus ? lj : lk;   // other level
        const CurveDiagram& dp = g.diagrams[lp];
        for (size_t pi = 0; pi < g.vertices[lp].size(); ++pi) {
          const Resolution& rp = g.vertices[lp][pi];
          BigonClass cls = classify_bigon(dp, z1, z2, rp.signs.at(z1), rp.signs.at(z2));
          if (cls == BigonClass::Separable) {
            int oi = g.find_vertex(lo, without(rp, {z1, z2}));
            if (oi >= 0) {
              if (plus)
                add_edge(lj, oi, lk, (int)pi, EdgeLabel::M2aPlus);
              else
                add_edge(lj, (int)pi, lk, oi, EdgeLabel::M2aMinus);
            }
          } else if (cls == BigonClass::Trapped) {
            Resolution flipped = rp;
            flipped.signs[z1] = flip(flipped.signs[z1]);
            flipped.signs[z2] = flip(flipped.signs[z2]);
            int qi = g.find_vertex(lp, flipped);
            if (qi >= 0 && (int)pi < qi) add_edge(lp, (int)pi, lp, qi, EdgeLabel::M2b);
          }
        }
        break;
      }
      case MoveType::R3: {
        std::array<CrossingId, 3> triple{m.crossings[0], m.crossings[1], m.crossings[2]};
        R3Matchings mt = local_r3_matchings(g.diagrams[lj], g.diagrams[lk], triple, m.face);
        std::set<CrossingId> corner_set(mt.corners.begin(), mt.corners.end());
        auto mask_of = [&](const Resolution& r) {
          int mask = 0;
          for (int i = 0; i < 3; ++i)
            if (r.signs.at(mt.corners[i]) == Sign::negative) mask |= 1 << i;
          return mask;
        };
        // Class multiplicities decide the labels.
        std::map<std::string, int> before_count, after_count;
        for (int mask = 0; mask < 8; ++mask) {
          ++before_count[mt.before_class[mask]];
          ++after_count[mt.after_class[mask]];
        }
        std::map<std::pair<std::string, std::string>, std::vector<int>> after_lookup;
        for (size_t vi = 0; vi < g.vertices[lk].size(); ++vi) {
          const Resolution& rv = g.vertices[lk][vi];
          after_lookup[{signs_outside(rv, corner_set), mt.after_class[mask_of(rv)]}].push_back((int)vi);
        }
        for (size_t ui = 0; ui < g.vertices[lj].size(); ++ui) {
          const Resolution& ru = g.vertices[lj][ui];
          const std::string& cls = mt.before_class[mask_of(ru)];
          auto it = after_lookup.find({signs_outside(ru, corner_set), cls});
          if (it == after_lookup.end()) continue;
          EdgeLabel label = EdgeLabel::M3a;
          if (before_count[cls] == 3) label = EdgeLabel::M3bMinus;
          else if (after_count[cls] == 3) label = EdgeLabel::M3bPlus;
          for (int vi : it->second) add_edge(lj, (int)ui, lk, vi, label);
        }
        break;
      }
    }
  }
  return g;
}

ParityReport check_parity(const ResolutionGraph& g) {
  ParityReport rep;
  auto deg = g.degrees();
  int n = (int)g.vertices.size() - 1;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < (int)g.vertices[j].size(); ++i) {
      GammaVertexRef v{j, i};
      if (deg[g.flat_id(v)] % 2 != 0) rep.offenders.push_back({v, deg[g.flat_id(v)]});
    }
  return rep;
}

namespace {

// Orientation carried across one step: compare traversal flags of the lowest
// arc id common to both resolved curves; with no common arc the surgery
// preserves direction by construction.
bool step_flips(const ResolutionGraph& g, GammaVertexRef u, GammaVertexRef v) {
  auto cu = smooth(g.diagrams[u.level], g.vertices[u.level][u.index]).curve;
  auto cv = smooth(g.diagrams[v.level], g.vertices[v.level][v.index]).curve;
  if (!cu || !cv) return false;
  std::map<ArcId, bool> rev_u;
  for (auto [a, rev] : cu->cycle) rev_u[a] = rev;
  std::map<ArcId, bool> rev_v;
  for (auto [a, rev] : cv->cycle) rev_v[a] = rev;
  for (auto [a, rev] : rev_u) {
    auto it = rev_v.find(a);
    if (it != rev_v.end()) return rev != it->second;
  }
  return false;
}

}  // namespace

IsotopyTrace find_isotopy_path(const ResolutionGraph& g) {
  if (g.vertices.empty()) throw CurveError(Errc::NoPathFound, "empty graph");
  if (!g.diagrams[0].crossings.empty() || g.vertices[0].size() != 1)
    throw CurveError(Errc::SimplicityViolated, "initial curve is not simple");

  int n = g.total_vertices();
  std::vector<std::vector<std::pair<int, EdgeLabel>>> adj(n);
  for (const auto& e : g.edges) {
    adj[g.flat_id(e.a)].emplace_back(g.flat_id(e.b), e.label);
    adj[g.flat_id(e.b)].emplace_back(g.flat_id(e.a), e.label);
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());

  int start = g.flat_id({0, 0});
  std::vector<int> parent(n, -1);
  std::vector<EdgeLabel> via(n, EdgeLabel::M1plus);
  std::vector<char> seen(n, 0);
  std::deque<int> queue{start};
  seen[start] = 1;
  int goal = -1;
  int last_level = (int)g.vertices.size() - 1;
  while (!queue.empty() && goal < 0) {
    int cur = queue.front();
    queue.pop_front();
    if (g.from_flat(cur).level == last_level) {
      goal = cur;
      break;
    }
    for (auto [next, label] : adj[cur]) {
      if (seen[next]) continue;
      seen[next] = 1;
      parent[next] = cur;
      via[next] = label;
      queue.push_back(next);
    }
  }
  if (goal < 0) throw CurveError(Errc::NoPathFound, "no admissible route to the final level");

  std::vector<int> chain;
  for (int cur = goal; cur >= 0; cur = parent[cur]) chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());

  IsotopyTrace trace;
  bool flipped = false;
  for (size_t i = 1; i < chain.size(); ++i) {
    GammaVertexRef from = g.from_flat(chain[i - 1]);
    GammaVertexRef to = g.from_flat(chain[i]);
    trace.steps.push_back({from, to, via[chain[i]], to.level - from.level});
    flipped ^= step_flips(g, from, to);
  }
  trace.final_orientation = flipped ? '-' : '+';
  return trace;
}

TraceReport verify_trace(const ResolutionGraph& g, const IsotopyTrace& trace) {
  TraceReport rep;
  auto complain = [&](size_t i, std::string what) { rep.violations.push_back({i, std::move(what)}); };

  auto in_range = [&](GammaVertexRef v) {
    return v.level >= 0 && v.level < (int)g.vertices.size() && v.index >= 0 &&
           v.index < (int)g.vertices[v.level].size();
  };

  GammaVertexRef expect{0, 0};
  if (g.vertices.empty() || g.vertices[0].size() != 1 || !g.vertices[0][0].signs.empty())
    complain(0, "level 0 is not the single empty resolution");

  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& st = trace.steps[i];
    if (!in_range(st.from) || !in_range(st.to)) {
      complain(i, "IllegalStep: endpoint out of range");
      continue;
    }
    if (st.from != expect) complain(i, "IllegalStep: step does not continue the previous vertex");
    bool found = false;
    for (const auto& e : g.edges) {
      if (e.label != st.label) continue;
      if ((e.a == st.from && e.b == st.to) || (e.a == st.to && e.b == st.from)) {
        found = true;
        break;
      }
    }
    if (!found) complain(i, std::string("IllegalStep: no ") + edge_label_name(st.label) + " edge between endpoints");
    for (GammaVertexRef v : {st.from, st.to}) {
      auto sm = smooth(g.diagrams[v.level], g.vertices[v.level][v.index]);
      if (sm.components != 1) {
        complain(i, "resolution not admissible at " + g.vertex_key(v));
        continue;
      }
      auto walk = traverse(g.diagrams[v.level]);
      ResolvedCurve whole;
      for (const auto& stp : walk) whole.cycle.emplace_back(stp.arc, false);
      if (!check_image_equivalence(g.diagrams[v.level], *sm.curve, g.diagrams[v.level], whole))
        complain(i, "resolved curve not image-equivalent to its level at " + g.vertex_key(v));
    }
    expect = st.to;
  }
  if (!trace.steps.empty()) {
    if (trace.steps.back().to.level != (int)g.vertices.size() - 1)
      complain(trace.steps.size() - 1, "trace does not end at the final level");
  } else if (g.vertices.size() > 1) {
    complain(0, "empty trace on a multi-level graph");
  }
  return rep;
}

}  // namespace curves
