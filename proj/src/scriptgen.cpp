#include "curves/scriptgen.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace curves {

namespace {

CurveDiagram circle() {
  CurveDiagram d;
  d.arcs.push_back({0, {0, 1}});
  d.basepoint = 0;
  d.genus = 0;
  return d;
}

bool applies(const CurveDiagram& d, const Move& m) {
  try {
    apply_move(d, m);
    return true;
  } catch (const CurveError&) {
    return false;
  }
}

}  // namespace

std::vector<Move> enumerate_moves(const CurveDiagram& d, int max_crossings) {
  std::vector<Move> out;
  int k = (int)d.crossings.size();
  CrossingId f1 = d.max_crossing_id() + 1, f2 = f1 + 1;

  if (k + 1 <= max_crossings)
    for (const auto& a : d.arcs)
      for (KinkSide side : {KinkSide::left, KinkSide::right}) {
        Move m;
        m.type = MoveType::R1plus;
        m.arc = a.id;
        m.side = side;
        m.new_crossing = f1;
        out.push_back(m);
      }

  for (const auto& c : d.crossings) {
    Move m;
    m.type = MoveType::R1minus;
    m.crossing = c.id;
    if (applies(d, m)) out.push_back(m);
  }

  if (k + 2 <= max_crossings)
    for (const auto& a : d.arcs)
      for (const auto& b : d.arcs)
        for (RelOrientation o : {RelOrientation::parallel, RelOrientation::antiparallel}) {
          Move m;
          m.type = MoveType::R2plus;
          m.arcs = {a.id, b.id};
          m.orientation = o;
          m.new_crossings = {f1, f2};
          if (applies(d, m)) out.push_back(m);
        }

  std::set<std::pair<CrossingId, CrossingId>> bigons;
  std::set<std::vector<CrossingId>> triangles;
  DiagramIndex ix = DiagramIndex::build(d);
  auto head_crossing = [&](const Dart& dt) { return ix.slot_of.at(d.arc(dt.arc)->ends[dt.head_end]).crossing; };
  for (const auto& f : trace_faces(d)) {
    if (f.darts.size() == 2 && f.darts[0].arc != f.darts[1].arc) {
      CrossingId c1 = head_crossing(f.darts[0]), c2 = head_crossing(f.darts[1]);
      if (c1 != c2 && bigons.insert({std::min(c1, c2), std::max(c1, c2)}).second) {
        Move m;
        m.type = MoveType::R2minus;
        m.crossings = {std::min(c1, c2), std::max(c1, c2)};
        if (applies(d, m)) out.push_back(m);
      }
    }
    if (f.darts.size() == 3) {
      std::set<CrossingId> corners;
      std::set<ArcId> sides;
      for (const auto& dt : f.darts) {
        corners.insert(head_crossing(dt));
        sides.insert(dt.arc);
      }
      if (corners.size() != 3 || sides.size() != 3) continue;
      std::vector<CrossingId> key(corners.begin(), corners.end());
      if (!triangles.insert(key).second) continue;
      Move m;
      m.type = MoveType::R3;
      m.crossings = key;
      auto it = sides.begin();
      m.face = {*it++, *it++, *it};
      if (applies(d, m)) out.push_back(m);
    }
  }
  return out;
}

HomotopyScript random_script(uint32_t seed, int max_moves, int max_crossings) {
  std::mt19937 rng(seed);
  HomotopyScript s;
  s.initial = circle();
  s.terminal = Terminal::curve;
  CurveDiagram cur = s.initial;
  int n_moves = (int)(rng() % (max_moves + 1));
  for (int i = 0; i < n_moves; ++i) {
    auto cands = enumerate_moves(cur, max_crossings);
    if (cands.empty()) break;
    Move m = cands[rng() % cands.size()];
    cur = apply_move(cur, m).after;
    s.moves.push_back(m);
  }
  return s;
}

CurveDiagram random_diagram(uint32_t seed, int k) {
  std::mt19937 rng(seed);
  CurveDiagram cur = circle();
  int guard = 0;
  while ((int)cur.crossings.size() < k && ++guard < 200) {
    auto cands = enumerate_moves(cur, k);
    std::vector<Move> grow;
    for (const auto& m : cands) {
      int delta = m.type == MoveType::R1plus ? 1 : m.type == MoveType::R2plus ? 2 : 0;
      bool neutral_ok = m.type == MoveType::R3 && rng() % 4 == 0;  // occasional shuffle
      if ((delta > 0 && (int)cur.crossings.size() + delta <= k) || neutral_ok) grow.push_back(m);
    }
    if (grow.empty()) break;
    cur = apply_move(cur, grow[rng() % grow.size()]).after;
  }
  if ((int)cur.crossings.size() != k)
    throw CurveError(Errc::NonTermination, "could not grow a diagram to " + std::to_string(k) + " crossings");
  return cur;
}

HomotopyScript contraction_script(const CurveDiagram& start, uint32_t seed) {
  std::mt19937 rng(seed);
  int budget = 40 + 20 * (int)start.crossings.size();
  for (int attempt = 0; attempt < 8; ++attempt) {
    HomotopyScript s;
    s.initial = start;
    s.terminal = Terminal::point;
    CurveDiagram cur = start;
    int steps = 0;
    bool stuck = false;
    while (!cur.crossings.empty() && !stuck) {
      if (++steps > budget) {
        stuck = true;
        break;
      }
      auto cands = enumerate_moves(cur, (int)cur.crossings.size());
      std::vector<Move> shrink, flip;
      for (const auto& m : cands) {
        if (m.type == MoveType::R1minus || m.type == MoveType::R2minus) shrink.push_back(m);
        if (m.type == MoveType::R3) flip.push_back(m);
      }
      const std::vector<Move>& pool = !shrink.empty() ? shrink : flip;
      if (pool.empty()) {
        stuck = true;
        break;
      }
      Move m = pool[rng() % pool.size()];
      cur = apply_move(cur, m).after;
      s.moves.push_back(m);
    }
    if (cur.crossings.empty()) return s;
  }
  throw CurveError(Errc::NonTermination, "no contraction found within budget");
}

}  // namespace curves
