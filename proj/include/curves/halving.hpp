#pragma once

#include <array>
#include <map>
#include <vector>

#include "curves/moves.hpp"

namespace curves {

// The four crossings a doubled base crossing expands into: i1 = both original
// strands, i2 = both offset strands, i3/i4 = the mixed pairs.
struct Cluster {
  CrossingId i1 = -1, i2 = -1, i3 = -1, i4 = -1;
  std::array<CrossingId, 4> all() const { return {i1, i2, i3, i4}; }
};

struct DoubledCurve {
  CurveDiagram alpha;
  CurveDiagram beta;                     // 4k+1 crossings for a k-crossing alpha
  std::map<CrossingId, Cluster> clusters;  // keyed by alpha crossing id
  CrossingId base = -1;                  // the junction crossing of the two copies
};

// Combinatorial push-off doubling: traverse alpha, then a parallel copy offset
// to the left of the traversal direction, joined at one extra base crossing on
// the basepoint arc. Each alpha crossing becomes a 2x2 grid of four crossings.
DoubledCurve perturb_double(const CurveDiagram& alpha);

enum class TrackEdgeType { continuation, r1_link, r2_horizontal, beta_extra };
const char* track_edge_name(TrackEdgeType t);

// Vertex of the tracking graph: a crossing of one level, or (crossing == -1)
// the empty vertex of that level.
struct TrackVertex {
  int level = 0;
  CrossingId crossing = -1;
  auto operator<=>(const TrackVertex&) const = default;
};

// Every crossing divides the level's traversal circle into two intervals
// ("sides"); side 1 starts at the exit of the first passage in traversal
// order. Edges carry the induced side bijection, stored as the image of
// side s at `a` (all such bijections on two sides are involutions, so the
// same array serves both directions).
struct TrackEdge {
  TrackVertex a, b;
  TrackEdgeType type = TrackEdgeType::continuation;
  std::array<int, 2> bij{1, 2};
};

struct CrossingTrackGraph {
  Levels levels;
  std::vector<Move> moves;  // the script's moves, kept for per-step re-derivation
  std::vector<TrackEdge> edges;
  CrossingId base = -1;

  // Terminal set: every empty vertex, every final-level crossing, and the
  // level-0 base crossing the walk starts from.
  bool in_terminal_set(TrackVertex v) const;
  std::vector<int> edges_at(TrackVertex v) const;
  int degree(TrackVertex v) const;
};

// Builds the tracking graph of a contraction script over beta: one
// continuation edge per surviving crossing at each gap, links to the empty
// vertex for R1-created/destroyed crossings, horizontal edges for R2 pairs,
// and the two intra-cluster edges {i1,i2}, {i3,i4} at level 0. Throws
// DegreeViolation if any non-terminal vertex does not have degree exactly 2.
CrossingTrackGraph build_tracking_graph(const HomotopyScript& s, const DoubledCurve& dc);

struct HalvingWalk {
  std::vector<TrackVertex> vertices;
  std::vector<int> edges;  // indices into CrossingTrackGraph::edges
};

// The forced trail from the base-crossing vertex: leave it by its unique
// edge, then keep taking the single unused edge at each degree-2 vertex until
// the walk first arrives at another terminal vertex. Deterministic; throws
// NonTermination if more than |E| edges are consumed.
HalvingWalk walk_halving_path(const CrossingTrackGraph& g);

struct SubcurveEntry {
  int level = 0;
  CrossingId crossing = -1;  // -1: empty vertex (point or whole curve)
  int side = 1;
};

struct SubcurveSelection {
  enum class Outcome { point, resume };
  std::vector<SubcurveEntry> entries;
  Outcome outcome = Outcome::point;
  int resume_level = -1;  // set when outcome == resume
};

// Folds the walk's side bijections starting from the side holding the first
// half of the doubled traversal, re-deriving each bijection from the level
// diagrams as a per-step check. Throws SideInconsistency on disagreement.
SubcurveSelection extract_subcurves(const CrossingTrackGraph& g, const HalvingWalk& path,
                                    const DoubledCurve& dc);

}  // namespace curves
