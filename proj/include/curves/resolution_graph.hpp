#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "curves/moves.hpp"

namespace curves {

enum class BigonClass { Separable, Trapped, Mixed };
const char* bigon_class_name(BigonClass c);

// How a resolution treats the bigon cobounded by c1 and c2: Separable keeps
// each strand on its own side, Trapped routes a single strand through the
// bigon region (blocking the crossing-free tangency pull-apart), Mixed closes
// the bigon boundary into a separate circle.
BigonClass classify_bigon(const CurveDiagram& d, CrossingId c1, CrossingId c2, Sign s1, Sign s2);

enum class EdgeLabel { M1plus, M1minus, M2aPlus, M2aMinus, M2b, M3a, M3bPlus, M3bMinus };
const char* edge_label_name(EdgeLabel l);

// Local reconnection classes of the disk around a triangle face: for each of
// the 8 sign assignments on the corner triple, the induced pairing of the six
// outer strand ends plus any closed circle of triangle sides. Assignment
// index: bit i set = negative sign on the i-th corner in sorted-id order.
struct R3Matchings {
  std::array<CrossingId, 3> corners{};  // sorted
  std::array<std::string, 8> before_class{};
  std::array<std::string, 8> after_class{};
  // masks grouped by shared class: M3a pairs, and the two fans
  std::vector<std::pair<int, int>> m3a_pairs;        // (before mask, after mask)
  std::pair<int, std::array<int, 3>> m3b_plus{-1, {-1, -1, -1}};   // 1 before -> 3 after
  std::pair<std::array<int, 3>, int> m3b_minus{{-1, -1, -1}, -1};  // 3 before -> 1 after
  std::string before_only_class, after_only_class;
};

// Exhaustive local analysis across one R3 flip. Throws NotATriangle when the
// witness does not bound a triangle in d_before, FanCountViolation when the
// class-matching pattern deviates from one-pair/one-fan-each-way.
R3Matchings local_r3_matchings(const CurveDiagram& d_before, const CurveDiagram& d_after,
                               const std::array<CrossingId, 3>& triple,
                               const std::array<ArcId, 3>& witness);

struct GammaVertexRef {
  int level = -1;
  int index = -1;  // into ResolutionGraph::vertices[level]
  auto operator<=>(const GammaVertexRef&) const = default;
};

struct GammaEdge {
  GammaVertexRef a, b;
  EdgeLabel label;
  int direction = 0;  // +1 up one level, -0 horizontal (a.level == b.level)
};

struct ResolutionGraph {
  std::vector<CurveDiagram> diagrams;                // per level
  std::vector<std::vector<Resolution>> vertices;     // per level, sorted by key
  std::vector<GammaEdge> edges;

  int find_vertex(int level, const Resolution& r) const;  // -1 if absent
  // Flat numbering across levels, for the path oracles.
  int flat_id(GammaVertexRef v) const;
  GammaVertexRef from_flat(int id) const;
  int total_vertices() const;
  std::string vertex_key(GammaVertexRef v) const;  // "level:signs"
  std::vector<int> degrees() const;                // by flat id
};

ResolutionGraph build_gamma(const HomotopyScript& s);

struct ParityReport {
  struct Offender {
    GammaVertexRef vertex;
    int degree;
  };
  std::vector<Offender> offenders;
  bool ok() const { return offenders.empty(); }
};

// Every vertex at an interior level must have even degree.
ParityReport check_parity(const ResolutionGraph& g);

struct IsotopyTrace {
  struct Step {
    GammaVertexRef from, to;
    EdgeLabel label;
    int direction = 0;  // +1 forward in time, -1 backward, 0 horizontal
  };
  std::vector<Step> steps;
  char final_orientation = '+';
};

// BFS from the unique level-0 vertex (empty resolution; the initial curve
// must be simple) to any final-level vertex, deterministic tie-breaking by
// vertex key. Throws NoPathFound if no final-level vertex is reachable.
IsotopyTrace find_isotopy_path(const ResolutionGraph& g);

struct TraceReport {
  struct Violation {
    size_t step;
    std::string what;
  };
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

TraceReport verify_trace(const ResolutionGraph& g, const IsotopyTrace& trace);

}  // namespace curves
