#include "curves/diagram.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace curves {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotFourValent: return "NotFourValent";
    case Errc::MultipleComponents: return "MultipleComponents";
    case Errc::NonTransversalPassage: return "NonTransversalPassage";
    case Errc::EulerMismatch: return "EulerMismatch";
    case Errc::ArcUniverseMismatch: return "ArcUniverseMismatch";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::OperandMissing: return "OperandMissing";
    case Errc::FacePreconditionFailed: return "FacePreconditionFailed";
    case Errc::IdentifierCollision: return "IdentifierCollision";
    case Errc::TerminalMismatch: return "TerminalMismatch";
    case Errc::SchemaError: return "SchemaError";
    case Errc::UnknownMoveVariant: return "UnknownMoveVariant";
    case Errc::DanglingReference: return "DanglingReference";
    case Errc::NotABigon: return "NotABigon";
    case Errc::NotATriangle: return "NotATriangle";
    case Errc::FanCountViolation: return "FanCountViolation";
    case Errc::NoPathFound: return "NoPathFound";
    case Errc::DegreeViolation: return "DegreeViolation";
    case Errc::SideInconsistency: return "SideInconsistency";
    case Errc::NonTermination: return "NonTermination";
    case Errc::NonGenericFrame: return "NonGenericFrame";
    case Errc::AmbiguousGap: return "AmbiguousGap";
    case Errc::MatchFailure: return "MatchFailure";
    case Errc::RadiusTooLarge: return "RadiusTooLarge";
    case Errc::MissingAnchors: return "MissingAnchors";
    case Errc::SimplicityViolated: return "SimplicityViolated";
    case Errc::BoundExceeded: return "BoundExceeded";
  }
  return "UnknownError";
}

const Crossing* CurveDiagram::crossing(CrossingId id) const {
  for (const auto& c : crossings)
    if (c.id == id) return &c;
  return nullptr;
}
const Arc* CurveDiagram::arc(ArcId id) const {
  for (const auto& a : arcs)
    if (a.id == id) return &a;
  return nullptr;
}
Crossing* CurveDiagram::crossing(CrossingId id) {
  for (auto& c : crossings)
    if (c.id == id) return &c;
  return nullptr;
}
Arc* CurveDiagram::arc(ArcId id) {
  for (auto& a : arcs)
    if (a.id == id) return &a;
  return nullptr;
}
void CurveDiagram::sort_by_id() {
  std::sort(crossings.begin(), crossings.end(), [](auto& a, auto& b) { return a.id < b.id; });
  std::sort(arcs.begin(), arcs.end(), [](auto& a, auto& b) { return a.id < b.id; });
}
HalfEdgeId CurveDiagram::max_half_edge() const {
  HalfEdgeId m = -1;
  for (const auto& a : arcs) m = std::max({m, a.ends[0], a.ends[1]});
  return m;
}
int CurveDiagram::max_crossing_id() const {
  int m = -1;
  for (const auto& c : crossings) m = std::max(m, c.id);
  return m;
}
int CurveDiagram::max_arc_id() const {
  int m = -1;
  for (const auto& a : arcs) m = std::max(m, a.id);
  return m;
}

DiagramIndex DiagramIndex::build(const CurveDiagram& d) {
  DiagramIndex ix;
  for (const auto& a : d.arcs) {
    for (int e = 0; e < 2; ++e) {
      HalfEdgeId h = a.ends[e];
      if (ix.end_of.count(h))
        throw CurveError(Errc::NotFourValent, "half-edge " + std::to_string(h) + " used by two arc ends");
      ix.end_of[h] = EndRef{a.id, e};
    }
  }
  for (const auto& c : d.crossings) {
    std::set<HalfEdgeId> seen;
    for (int s = 0; s < 4; ++s) {
      HalfEdgeId h = c.slots[s];
      if (!seen.insert(h).second)
        throw CurveError(Errc::NotFourValent, "crossing " + std::to_string(c.id) + " repeats half-edge");
      if (!ix.end_of.count(h))
        throw CurveError(Errc::DanglingReference,
                         "crossing " + std::to_string(c.id) + " slot refers to unknown half-edge " + std::to_string(h));
      if (ix.slot_of.count(h))
        throw CurveError(Errc::NotFourValent, "half-edge " + std::to_string(h) + " sits in two slots");
      ix.slot_of[h] = SlotRef{c.id, s};
    }
  }
  return ix;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& i : issues) os << errc_name(i.code) << ": " << i.detail << "\n";
  return os.str();
}

std::vector<TraversalStep> traverse(const CurveDiagram& d) {
  DiagramIndex ix = DiagramIndex::build(d);
  if (d.arcs.empty()) throw CurveError(Errc::MultipleComponents, "diagram has no arcs");
  if (!ix.end_of.count(d.basepoint))
    throw CurveError(Errc::DanglingReference, "basepoint half-edge " + std::to_string(d.basepoint) + " unknown");

  std::vector<TraversalStep> walk;
  std::set<ArcId> visited;
  HalfEdgeId from = d.basepoint;
  for (size_t guard = 0; guard <= d.arcs.size() + 1; ++guard) {
    EndRef er = ix.end_of.at(from);
    const Arc* a = d.arc(er.arc);
    HalfEdgeId to = a->ends[1 - er.end];
    TraversalStep step;
    step.arc = a->id;
    step.from = from;
    step.to = to;
    if (!visited.insert(a->id).second)
      throw CurveError(Errc::MultipleComponents, "traversal revisits arc " + std::to_string(a->id));
    auto sit = ix.slot_of.find(to);
    HalfEdgeId next;
    if (sit == ix.slot_of.end()) {
      // Free arc end: the arc closes up on itself (free loop).
      if (ix.slot_of.count(from) || to == from)
        throw CurveError(Errc::NotFourValent, "arc " + std::to_string(a->id) + " has one free end");
      step.crossing = std::nullopt;
      next = to;  // re-enter the same arc from its other end
      // but a free loop terminates the walk immediately below
      walk.push_back(step);
      if (visited.size() != d.arcs.size())
        throw CurveError(Errc::MultipleComponents, "free loop coexists with other arcs");
      if (next == d.basepoint) return walk;
      // The loop closes through its other end; the traversal is complete.
      return walk;
    }
    const Crossing* c = d.crossing(sit->second.crossing);
    step.crossing = c->id;
    step.in_slot = sit->second.slot;
    step.out_slot = (sit->second.slot + 2) % 4;
    next = c->slots[step.out_slot];
    walk.push_back(step);
    from = next;
    if (from == d.basepoint) break;
  }
  if (visited.size() != d.arcs.size())
    throw CurveError(Errc::MultipleComponents, "traversal covers " + std::to_string(visited.size()) + " of " +
                                                   std::to_string(d.arcs.size()) + " arcs");
  if (from != d.basepoint) throw CurveError(Errc::MultipleComponents, "traversal failed to close up");
  return walk;
}

std::map<CrossingId, CrossingPassages> crossing_passages(const CurveDiagram& d,
                                                         const std::vector<TraversalStep>& walk) {
  std::map<CrossingId, CrossingPassages> out;
  std::map<CrossingId, int> seen;
  DiagramIndex ix = DiagramIndex::build(d);
  for (const auto& step : walk) {
    if (!step.crossing) continue;
    const Crossing* c = d.crossing(*step.crossing);
    Passage p;
    p.in = c->slots[step.in_slot];
    p.out = c->slots[step.out_slot];
    p.in_slot = step.in_slot;
    p.out_slot = step.out_slot;
    int n = seen[c->id]++;
    if (n == 0)
      out[c->id].first = p;
    else if (n == 1)
      out[c->id].second = p;
    else
      throw CurveError(Errc::NonTransversalPassage, "crossing " + std::to_string(c->id) + " visited thrice");
  }
  for (const auto& [cid, n] : seen) {
    if (n != 2)
      throw CurveError(Errc::NonTransversalPassage,
                       "crossing " + std::to_string(cid) + " visited " + std::to_string(n) + " times");
    const auto& cp = out.at(cid);
    if (cp.first.in_slot % 2 == cp.second.in_slot % 2)
      throw CurveError(Errc::NonTransversalPassage,
                       "crossing " + std::to_string(cid) + " traversed twice along the same strand");
  }
  return out;
}

std::map<ArcId, std::pair<HalfEdgeId, HalfEdgeId>> arc_directions(const std::vector<TraversalStep>& walk) {
  std::map<ArcId, std::pair<HalfEdgeId, HalfEdgeId>> out;
  for (const auto& s : walk) out[s.arc] = {s.from, s.to};
  return out;
}

ValidationReport validate_diagram(const CurveDiagram& d) {
  ValidationReport rep;
  DiagramIndex ix;
  try {
    ix = DiagramIndex::build(d);
  } catch (const CurveError& e) {
    rep.issues.push_back({e.code(), e.what()});
    return rep;
  }
  // Every non-slotted arc end must belong to a free loop.
  for (const auto& a : d.arcs) {
    bool s0 = ix.slot_of.count(a.ends[0]) > 0, s1 = ix.slot_of.count(a.ends[1]) > 0;
    if (s0 != s1) rep.issues.push_back({Errc::NotFourValent, "arc " + std::to_string(a.id) + " has one free end"});
    if (!s0 && !s1 && !d.crossings.empty())
      rep.issues.push_back({Errc::MultipleComponents, "free loop arc " + std::to_string(a.id) + " beside crossings"});
  }
  if (!rep.ok()) return rep;
  if (!ix.end_of.count(d.basepoint)) {
    rep.issues.push_back({Errc::DanglingReference, "basepoint half-edge unknown"});
    return rep;
  }
  std::vector<TraversalStep> walk;
  try {
    walk = traverse(d);
    crossing_passages(d, walk);
  } catch (const CurveError& e) {
    rep.issues.push_back({e.code(), e.what()});
    return rep;
  }
  long V = (long)d.crossings.size();
  // A free loop has no vertices, so the circle contributes no edge cells
  // either; count it as V=0, E=0, F=2.
  long E = V == 0 ? 0 : (long)d.arcs.size();
  long F = (long)trace_faces(d).size();
  if (V - E + F != 2 - 2L * d.genus)
    rep.issues.push_back({Errc::EulerMismatch, "V-E+F = " + std::to_string(V - E + F) + " but genus " +
                                                   std::to_string(d.genus) + " needs " +
                                                   std::to_string(2 - 2L * d.genus)});
  return rep;
}

void require_valid(const CurveDiagram& d, const std::string& context) {
  auto rep = validate_diagram(d);
  if (!rep.ok()) throw CurveError(rep.issues[0].code, context + ": " + rep.issues[0].detail);
}

std::string Resolution::key() const {
  std::string k;
  for (const auto& [cid, s] : signs) k.push_back(sign_char(s));
  return k;
}

namespace {

struct SmoothTables {
  // pairing: reconnection partner of each slotted half-edge
  std::map<HalfEdgeId, HalfEdgeId> partner;
};

SmoothTables smoothing_pairing(const CurveDiagram& d, const Resolution& r,
                               const std::map<CrossingId, CrossingPassages>& passages) {
  SmoothTables t;
  for (const auto& c : d.crossings) {
    auto it = r.signs.find(c.id);
    if (it == r.signs.end())
      throw CurveError(Errc::OperandMissing, "resolution lacks sign for crossing " + std::to_string(c.id));
    const auto& cp = passages.at(c.id);
    HalfEdgeId in1 = cp.first.in, out1 = cp.first.out, in2 = cp.second.in, out2 = cp.second.out;
    if (it->second == Sign::positive) {
      t.partner[in1] = out2;
      t.partner[out2] = in1;
      t.partner[in2] = out1;
      t.partner[out1] = in2;
    } else {
      t.partner[in1] = in2;
      t.partner[in2] = in1;
      t.partner[out1] = out2;
      t.partner[out2] = out1;
    }
  }
  return t;
}

}  // namespace

SmoothResult smooth(const CurveDiagram& d, const Resolution& r) {
  auto walk = traverse(d);
  auto passages = crossing_passages(d, walk);
  auto dirs = arc_directions(walk);
  DiagramIndex ix = DiagramIndex::build(d);
  SmoothTables t = smoothing_pairing(d, r, passages);

  SmoothResult res;
  if (d.crossings.empty()) {
    res.components = 1;
    res.curve = ResolvedCurve{{{d.arcs[0].id, false}}};
    return res;
  }

  // Chase cycles over directed arcs. State: arc entered at end `from`.
  std::set<std::pair<ArcId, int>> used;  // (arc, entry end index)
  std::optional<ResolvedCurve> first_cycle;
  int components = 0;
  for (const auto& a0 : d.arcs) {
    for (int e0 = 0; e0 < 2; ++e0) {
      if (used.count({a0.id, e0})) continue;
      // Trace the cycle through this directed arc.
      ResolvedCurve cyc;
      ArcId arc = a0.id;
      int entry = e0;
      bool closed = false;
      while (!closed) {
        if (!used.insert({arc, entry}).second)
          throw CurveError(Errc::NonTransversalPassage, "smoothing trace re-entered a directed arc");
        const Arc* a = d.arc(arc);
        bool reversed = dirs.at(arc).first != a->ends[entry];
        cyc.cycle.push_back({arc, reversed});
        HalfEdgeId head = a->ends[1 - entry];
        HalfEdgeId nxt = t.partner.at(head);
        EndRef er = ix.end_of.at(nxt);
        arc = er.arc;
        entry = er.end;
        if (arc == a0.id && entry == e0) closed = true;
      }
      ++components;
      if (!first_cycle) first_cycle = cyc;
    }
  }
  // Each geometric component is traced twice (once per orientation).
  if (components % 2 != 0)
    throw CurveError(Errc::NonTransversalPassage, "odd directed cycle count in smoothing");
  res.components = components / 2;
  if (res.components == 1) {
    // Normalize so the cycle starts at the basepoint arc, unreversed if possible.
    ResolvedCurve& c = *first_cycle;
    EndRef bp = ix.end_of.at(d.basepoint);
    size_t best = 0;
    bool found = false;
    for (size_t i = 0; i < c.cycle.size() && !found; ++i)
      if (c.cycle[i].first == bp.arc && !c.cycle[i].second) {
        best = i;
        found = true;
      }
    if (!found) {
      // Use the reversed orientation of the traced cycle.
      ResolvedCurve rev;
      for (auto it = c.cycle.rbegin(); it != c.cycle.rend(); ++it) rev.cycle.push_back({it->first, !it->second});
      c = rev;
      for (size_t i = 0; i < c.cycle.size(); ++i)
        if (c.cycle[i].first == bp.arc && !c.cycle[i].second) {
          best = i;
          break;
        }
    }
    std::rotate(c.cycle.begin(), c.cycle.begin() + best, c.cycle.end());
    res.curve = c;
  }
  return res;
}

int smooth_component_count(const CurveDiagram& d, const Resolution& r) { return smooth(d, r).components; }

std::vector<Resolution> enumerate_admissible(const CurveDiagram& d, int cap) {
  int k = (int)d.crossings.size();
  if (k > cap)
    throw CurveError(Errc::CapExceeded,
                     std::to_string(k) + " crossings exceeds enumeration cap " + std::to_string(cap));
  std::vector<CrossingId> ids;
  for (const auto& c : d.crossings) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());
  std::vector<Resolution> out;
  for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
    Resolution r;
    for (int i = 0; i < k; ++i)
      r.signs[ids[i]] = (mask >> i) & 1 ? Sign::negative : Sign::positive;
    if (smooth_component_count(d, r) == 1) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Resolution& a, const Resolution& b) { return a.key() < b.key(); });
  return out;
}

bool check_image_equivalence(const CurveDiagram& da, const ResolvedCurve& a, const CurveDiagram& db,
                             const ResolvedCurve& b) {
  std::multiset<ArcId> ua, ub, universe_a, universe_b;
  for (const auto& [arc, rev] : a.cycle) ua.insert(arc);
  for (const auto& [arc, rev] : b.cycle) ub.insert(arc);
  for (const auto& arc : da.arcs) universe_a.insert(arc.id);
  for (const auto& arc : db.arcs) universe_b.insert(arc.id);
  if (universe_a != universe_b)
    throw CurveError(Errc::ArcUniverseMismatch, "resolved curves live over different diagrams");
  return ua == ub;
}

std::vector<Face> trace_faces(const CurveDiagram& d) {
  DiagramIndex ix = DiagramIndex::build(d);
  std::vector<Face> faces;
  std::set<Dart> used;
  auto dart_head = [&](const Dart& dt) { return d.arc(dt.arc)->ends[dt.head_end]; };
  for (const auto& a : d.arcs) {
    for (int he = 0; he < 2; ++he) {
      Dart start{a.id, he};
      if (used.count(start)) continue;
      Face f;
      Dart cur = start;
      do {
        used.insert(cur);
        f.darts.push_back(cur);
        HalfEdgeId h = dart_head(cur);
        auto sit = ix.slot_of.find(h);
        if (sit == ix.slot_of.end()) {
          // Free loop side: single-dart face.
          cur = start;
          break;
        }
        const Crossing* c = d.crossing(sit->second.crossing);
        HalfEdgeId h2 = c->slots[(sit->second.slot + 1) % 4];
        EndRef er = ix.end_of.at(h2);
        cur = Dart{er.arc, 1 - er.end};
      } while (!(cur == start));
      faces.push_back(std::move(f));
    }
  }
  return faces;
}

std::string canonical_signature(const CurveDiagram& d) {
  if (d.crossings.empty()) return "circle";
  DiagramIndex ix = DiagramIndex::build(d);
  // For each starting directed arc end, walk the curve, relabel crossings by
  // first visit, and record (label, rotational offset) per passage. The
  // lexicographic minimum over starts is canonical.
  std::string best;
  for (const auto& a0 : d.arcs) {
    for (int e0 = 0; e0 < 2; ++e0) {
      std::map<CrossingId, int> label;
      std::map<CrossingId, int> first_in_slot;
      std::string sig;
      HalfEdgeId from = a0.ends[e0];
      for (size_t step = 0; step < 2 * d.arcs.size(); ++step) {
        EndRef er = ix.end_of.at(from);
        const Arc* a = d.arc(er.arc);
        HalfEdgeId to = a->ends[1 - er.end];
        auto sit = ix.slot_of.find(to);
        if (sit == ix.slot_of.end()) break;
        const Crossing* c = d.crossing(sit->second.crossing);
        int lb;
        int off;
        auto lit = label.find(c->id);
        if (lit == label.end()) {
          lb = (int)label.size();
          label[c->id] = lb;
          first_in_slot[c->id] = sit->second.slot;
          off = 0;
        } else {
          lb = lit->second;
          off = (sit->second.slot - first_in_slot[c->id] + 4) % 4;
        }
        sig += std::to_string(lb) + "." + std::to_string(off) + ";";
        from = c->slots[(sit->second.slot + 2) % 4];
        if (from == a0.ends[e0]) break;
      }
      if (best.empty() || sig < best) best = sig;
    }
  }
  return best;
}

bool isomorphic(const CurveDiagram& a, const CurveDiagram& b) {
  if (a.crossings.size() != b.crossings.size() || a.arcs.size() != b.arcs.size()) return false;
  if (a.genus != b.genus) return false;
  return canonical_signature(a) == canonical_signature(b);
}

}  // namespace curves
