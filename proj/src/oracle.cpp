#include "curves/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace curves::oracle {

namespace {

// Minimal standalone union-find over half-edge ids.
struct UnionFind {
  std::map<int, int> parent;
  int find(int x) {
    if (!parent.count(x)) parent[x] = x;
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct NaiveVisit {
  HalfEdgeId in = -1, out = -1;
};

// Plain pointer-chasing walk from the basepoint; records the two visits of
// every crossing in encounter order. Deliberately separate from traverse().
std::map<CrossingId, std::vector<NaiveVisit>> naive_visits(const CurveDiagram& d) {
  auto arc_of_end = [&](HalfEdgeId h) -> const Arc* {
    for (const auto& a : d.arcs)
      if (a.ends[0] == h || a.ends[1] == h) return &a;
    return nullptr;
  };
  auto slot_of = [&](HalfEdgeId h, int* slot) -> const Crossing* {
    for (const auto& c : d.crossings)
      for (int s = 0; s < 4; ++s)
        if (c.slots[s] == h) {
          *slot = s;
          return &c;
        }
    return nullptr;
  };
  std::map<CrossingId, std::vector<NaiveVisit>> visits;
  HalfEdgeId cur = d.basepoint;
  size_t steps = 0;
  do {
    const Arc* a = arc_of_end(cur);
    if (!a) throw CurveError(Errc::DanglingReference, "oracle walk lost an arc end");
    HalfEdgeId far = a->ends[0] == cur ? a->ends[1] : a->ends[0];
    int slot = -1;
    const Crossing* c = slot_of(far, &slot);
    if (!c) return visits;  // free loop
    HalfEdgeId out = c->slots[(slot + 2) % 4];
    visits[c->id].push_back({far, out});
    cur = out;
    if (++steps > 4 * d.arcs.size() + 4) throw CurveError(Errc::MultipleComponents, "oracle walk does not close");
  } while (cur != d.basepoint);
  return visits;
}

}  // namespace

int brute_components(const CurveDiagram& d, const Resolution& r) {
  auto visits = naive_visits(d);
  UnionFind uf;
  for (const auto& a : d.arcs) uf.unite(a.ends[0], a.ends[1]);
  for (const auto& c : d.crossings) {
    auto it = visits.find(c.id);
    if (it == visits.end() || it->second.size() != 2)
      throw CurveError(Errc::NonTransversalPassage, "oracle: crossing not visited exactly twice");
    const NaiveVisit& v1 = it->second[0];
    const NaiveVisit& v2 = it->second[1];
    Sign s = r.signs.at(c.id);
    if (s == Sign::positive) {
      uf.unite(v1.in, v2.out);
      uf.unite(v2.in, v1.out);
    } else {
      uf.unite(v1.in, v2.in);
      uf.unite(v1.out, v2.out);
    }
  }
  std::set<int> roots;
  for (const auto& a : d.arcs) roots.insert(uf.find(a.ends[0]));
  return (int)roots.size();
}

std::vector<Resolution> brute_admissible(const CurveDiagram& d, int cap) {
  int k = (int)d.crossings.size();
  if (k > cap) throw CurveError(Errc::CapExceeded, "oracle: crossing count exceeds cap");
  std::vector<CrossingId> ids;
  for (const auto& c : d.crossings) ids.push_back(c.id);
  std::sort(ids.begin(), ids.end());
  std::vector<Resolution> out;
  for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
    Resolution r;
    for (int i = 0; i < k; ++i) r.signs[ids[i]] = (mask >> i) & 1 ? Sign::negative : Sign::positive;
    if (brute_components(d, r) == 1) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Resolution& a, const Resolution& b) { return a.key() < b.key(); });
  return out;
}

std::vector<BrutePath> brute_paths(const std::vector<BruteEdge>& edges, const std::string& start,
                                   const std::vector<std::string>& targets, size_t max_len) {
  std::set<std::string> target_set(targets.begin(), targets.end());
  std::vector<BrutePath> found;
  BrutePath cur;
  cur.vertices.push_back(start);
  std::set<std::string> on_path{start};

  std::function<void()> dfs = [&]() {
    // copy: push_back below may reallocate the vertex vector
    std::string v = cur.vertices.back();
    if (target_set.count(v) && cur.edges.size() > 0) {
      found.push_back(cur);
      // targets are terminal: the searched graphs have no edges beyond them,
      // but guard anyway by not extending past a target
      return;
    }
    if (cur.edges.size() >= max_len) return;
    for (size_t ei = 0; ei < edges.size(); ++ei) {
      const BruteEdge& e = edges[ei];
      std::string next;
      if (e.from == v)
        next = e.to;
      else if (e.to == v)
        next = e.from;
      else
        continue;
      if (on_path.count(next)) continue;
      on_path.insert(next);
      cur.vertices.push_back(next);
      cur.edges.push_back(ei);
      dfs();
      cur.vertices.pop_back();
      cur.edges.pop_back();
      on_path.erase(next);
    }
  };
  if (target_set.count(start)) found.push_back(cur);
  dfs();
  return found;
}

namespace {

struct LocalDisk {
  std::vector<CrossingId> corners;                  // sorted ids
  std::map<CrossingId, std::array<HalfEdgeId, 4>> slots;
  std::set<ArcId> tri_arcs;
  std::vector<HalfEdgeId> stubs;                    // the six boundary half-edges
};

// Signs per assignment are over sorted crossing ids: bit i set = negative.
std::string classify(const CurveDiagram& d, const LocalDisk& disk, unsigned mask) {
  // Recover passage direction (in/out half-edges) at the three corners from a
  // plain global walk.
  auto arc_of_end = [&](HalfEdgeId h) -> const Arc* {
    for (const auto& a : d.arcs)
      if (a.ends[0] == h || a.ends[1] == h) return &a;
    return nullptr;
  };
  auto find_slot = [&](HalfEdgeId h, CrossingId* cid) -> int {
    for (const auto& [c, sl] : disk.slots)
      for (int s = 0; s < 4; ++s)
        if (sl[s] == h) {
          *cid = c;
          return s;
        }
    return -1;
  };
  // in/out pairs per corner via a pointer walk over the whole diagram
  std::map<CrossingId, std::vector<std::pair<HalfEdgeId, HalfEdgeId>>> io;
  {
    HalfEdgeId cur = d.basepoint;
    size_t steps = 0;
    do {
      const Arc* a = arc_of_end(cur);
      HalfEdgeId far = a->ends[0] == cur ? a->ends[1] : a->ends[0];
      const Crossing* c = nullptr;
      int slot = -1;
      for (const auto& cc : d.crossings)
        for (int s = 0; s < 4; ++s)
          if (cc.slots[s] == far) {
            c = &cc;
            slot = s;
          }
      HalfEdgeId out = c->slots[(slot + 2) % 4];
      if (std::count(disk.corners.begin(), disk.corners.end(), c->id)) io[c->id].push_back({far, out});
      cur = out;
      if (++steps > 4 * d.arcs.size() + 4) throw CurveError(Errc::MultipleComponents, "oracle r3 walk stuck");
    } while (cur != d.basepoint);
  }
  // Reconnection partner of every disk half-edge under the assignment.
  std::map<HalfEdgeId, HalfEdgeId> partner;
  for (size_t i = 0; i < disk.corners.size(); ++i) {
    CrossingId cid = disk.corners[i];
    auto& v = io.at(cid);
    bool negative = (mask >> i) & 1;
    auto [in1, out1] = v[0];
    auto [in2, out2] = v[1];
    if (!negative) {
      partner[in1] = out2;
      partner[out2] = in1;
      partner[in2] = out1;
      partner[out1] = in2;
    } else {
      partner[in1] = in2;
      partner[in2] = in1;
      partner[out1] = out2;
      partner[out2] = out1;
    }
  }
  // Stub-to-stub chase through the triangle arcs.
  std::set<ArcId> used_tri;
  std::vector<std::pair<HalfEdgeId, HalfEdgeId>> matching;
  std::set<HalfEdgeId> done;
  for (HalfEdgeId s0 : disk.stubs) {
    if (done.count(s0)) continue;
    HalfEdgeId h = partner.at(s0);
    size_t guard = 0;
    while (true) {
      if (std::count(disk.stubs.begin(), disk.stubs.end(), h)) break;
      const Arc* a = arc_of_end(h);
      if (!disk.tri_arcs.count(a->id))
        throw CurveError(Errc::NotATriangle, "oracle r3: chase left the disk");
      used_tri.insert(a->id);
      HalfEdgeId far = a->ends[0] == h ? a->ends[1] : a->ends[0];
      h = partner.at(far);
      if (++guard > 16) throw CurveError(Errc::NonTermination, "oracle r3 chase stuck");
    }
    done.insert(s0);
    done.insert(h);
    matching.push_back({std::min(s0, h), std::max(s0, h)});
    (void)find_slot;
  }
  std::sort(matching.begin(), matching.end());
  std::ostringstream os;
  for (auto [x, y] : matching) os << x << "-" << y << ";";
  // Unused triangle arcs form a closed circle inside the disk.
  std::set<ArcId> circle;
  for (ArcId t : disk.tri_arcs)
    if (!used_tri.count(t)) circle.insert(t);
  if (!circle.empty()) {
    os << "O[";
    for (ArcId t : circle) os << t << ",";
    os << "]";
  }
  return os.str();
}

LocalDisk build_disk(const CurveDiagram& d, const std::vector<CrossingId>& triple,
                     const std::array<ArcId, 3>& witness) {
  LocalDisk disk;
  disk.corners.assign(triple.begin(), triple.end());
  std::sort(disk.corners.begin(), disk.corners.end());
  disk.tri_arcs.insert(witness.begin(), witness.end());
  for (CrossingId cid : disk.corners) {
    const Crossing* c = d.crossing(cid);
    if (!c) throw CurveError(Errc::OperandMissing, "oracle r3: crossing missing");
    disk.slots[cid] = c->slots;
    for (int s = 0; s < 4; ++s) {
      HalfEdgeId h = c->slots[s];
      bool is_tri = false;
      for (ArcId t : disk.tri_arcs) {
        const Arc* a = d.arc(t);
        if (a->ends[0] == h || a->ends[1] == h) is_tri = true;
      }
      if (!is_tri) disk.stubs.push_back(h);
    }
  }
  if (disk.stubs.size() != 6) throw CurveError(Errc::NotATriangle, "oracle r3: expected six boundary stubs");
  return disk;
}

}  // namespace

R3LocalSummary brute_r3_local(const CurveDiagram& before, const CurveDiagram& after,
                              const std::vector<CrossingId>& triple, const std::array<ArcId, 3>& witness) {
  LocalDisk disk_b = build_disk(before, triple, witness);
  LocalDisk disk_a = build_disk(after, triple, witness);
  R3LocalSummary sum;
  for (unsigned mask = 0; mask < 8; ++mask) {
    sum.before_class.push_back(classify(before, disk_b, mask));
    sum.after_class.push_back(classify(after, disk_a, mask));
  }
  for (const auto& c : sum.before_class) sum.census[c].first++;
  for (const auto& c : sum.after_class) sum.census[c].second++;
  for (const auto& [cls, cnt] : sum.census) {
    auto [nb, na] = cnt;
    if (nb > 0 && na == 0) sum.before_only_classes++;
    if (na > 0 && nb == 0) sum.after_only_classes++;
    if (nb > 0 && na > 0) {
      if (nb == 1 && na > 1)
        sum.plus_fan = na;
      else if (na == 1 && nb > 1)
        sum.minus_fan = nb;
      else if (!(nb == 1 && na == 1))
        sum.ok_patterns = false;
    }
  }
  return sum;
}

}  // namespace curves::oracle
