#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curves {

using HalfEdgeId = int;
using CrossingId = int;
using ArcId = int;

enum class Errc {
  NotFourValent,
  MultipleComponents,
  NonTransversalPassage,
  EulerMismatch,
  ArcUniverseMismatch,
  CapExceeded,
  OperandMissing,
  FacePreconditionFailed,
  IdentifierCollision,
  TerminalMismatch,
  SchemaError,
  UnknownMoveVariant,
  DanglingReference,
  NotABigon,
  NotATriangle,
  FanCountViolation,
  NoPathFound,
  DegreeViolation,
  SideInconsistency,
  NonTermination,
  NonGenericFrame,
  AmbiguousGap,
  MatchFailure,
  RadiusTooLarge,
  MissingAnchors,
  SimplicityViolated,
  BoundExceeded,
};

const char* errc_name(Errc c);

class CurveError : public std::runtime_error {
public:
  CurveError(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

enum class Sign : uint8_t { positive, negative };

inline Sign flip(Sign s) { return s == Sign::positive ? Sign::negative : Sign::positive; }
inline char sign_char(Sign s) { return s == Sign::positive ? '+' : '-'; }

// A crossing is a 4-valent vertex; slots list half-edge ids in counterclockwise
// rotation order. Opposite slots (0,2) and (1,3) are the two strand passages.
struct Crossing {
  CrossingId id = -1;
  std::array<HalfEdgeId, 4> slots{};
};

// An arc joins two half-edges. An arc whose half-edges sit in no crossing slot
// is a free loop (only legal in the zero-crossing diagram).
struct Arc {
  ArcId id = -1;
  std::array<HalfEdgeId, 2> ends{};
};

struct CurveDiagram {
  std::vector<Crossing> crossings;  // kept sorted by id
  std::vector<Arc> arcs;            // kept sorted by id
  HalfEdgeId basepoint = -1;        // directed: traversal leaves this arc end
  int genus = 0;

  const Crossing* crossing(CrossingId id) const;
  const Arc* arc(ArcId id) const;
  Crossing* crossing(CrossingId id);
  Arc* arc(ArcId id);
  void sort_by_id();
  HalfEdgeId max_half_edge() const;
  int max_crossing_id() const;
  int max_arc_id() const;
};

struct SlotRef {
  CrossingId crossing = -1;
  int slot = -1;
};
struct EndRef {
  ArcId arc = -1;
  int end = -1;
};

// Lookup tables from half-edge ids to their crossing slot and arc end.
// Throws CurveError on structural inconsistencies (duplicate half-edges,
// slot without a matching arc end, ...).
struct DiagramIndex {
  std::map<HalfEdgeId, SlotRef> slot_of;  // absent key: free arc end
  std::map<HalfEdgeId, EndRef> end_of;
  static DiagramIndex build(const CurveDiagram& d);
};

struct ValidationIssue {
  Errc code;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

ValidationReport validate_diagram(const CurveDiagram& d);
void require_valid(const CurveDiagram& d, const std::string& context);

// One step of the directed traversal: travel `arc` from half-edge `from`
// to half-edge `to`, then pass through `crossing` (absent for a free loop).
struct TraversalStep {
  ArcId arc = -1;
  HalfEdgeId from = -1;
  HalfEdgeId to = -1;
  std::optional<CrossingId> crossing;
  int in_slot = -1;
  int out_slot = -1;
};

// Deterministic traversal from the basepoint. Requires a structurally sound
// diagram; throws MultipleComponents if the walk does not cover every arc.
std::vector<TraversalStep> traverse(const CurveDiagram& d);

struct Passage {
  HalfEdgeId in = -1;
  HalfEdgeId out = -1;
  int in_slot = -1;
  int out_slot = -1;
};
struct CrossingPassages {
  Passage first;   // in traversal order
  Passage second;
};

std::map<CrossingId, CrossingPassages> crossing_passages(const CurveDiagram& d,
                                                         const std::vector<TraversalStep>& walk);

// Directed arc directions induced by the traversal: arc id -> (tail, head).
std::map<ArcId, std::pair<HalfEdgeId, HalfEdgeId>> arc_directions(const std::vector<TraversalStep>& walk);

struct Resolution {
  std::map<CrossingId, Sign> signs;
  // Sign vector over sorted crossing ids, e.g. "+-+".
  std::string key() const;
  bool operator==(const Resolution&) const = default;
};

struct ResolvedCurve {
  // Cyclic arc sequence of the single smoothed curve; bool marks arcs
  // traversed against the diagram traversal direction.
  std::vector<std::pair<ArcId, bool>> cycle;
};

struct SmoothResult {
  int components = 0;
  std::optional<ResolvedCurve> curve;  // present iff components == 1
};

// Reconnects every crossing per the resolution sign. Positive joins the
// incoming half of one strand to the outgoing half of the other (orientation
// preserving); negative joins incoming to incoming (orientation reversing).
SmoothResult smooth(const CurveDiagram& d, const Resolution& r);
int smooth_component_count(const CurveDiagram& d, const Resolution& r);

constexpr int kDefaultEnumerationCap = 20;

// All sign vectors whose smoothing is a single closed curve, ordered by
// sign-vector key over sorted crossing ids.
std::vector<Resolution> enumerate_admissible(const CurveDiagram& d, int cap = kDefaultEnumerationCap);

// Combinatorial surrogate for epsilon-image equivalence: same arc multiset up
// to permutation and per-arc orientation flips. Throws ArcUniverseMismatch if
// the two curves do not range over the same arc ids.
bool check_image_equivalence(const CurveDiagram& da, const ResolvedCurve& a, const CurveDiagram& db,
                             const ResolvedCurve& b);

// Directed arc side: head = ends[head_end].
struct Dart {
  ArcId arc = -1;
  int head_end = 0;
  bool operator==(const Dart&) const = default;
  bool operator<(const Dart& o) const { return std::pair(arc, head_end) < std::pair(o.arc, o.head_end); }
};

struct Face {
  std::vector<Dart> darts;
};

// Faces of the rotation system. A dart arriving at slot i continues along the
// arc at slot (i+1) mod 4; a free loop contributes one single-dart face per side.
std::vector<Face> trace_faces(const CurveDiagram& d);

// Canonical label of the diagram up to id renaming preserving rotations
// (basepoint and genus ignored; genus compared separately by callers).
std::string canonical_signature(const CurveDiagram& d);
bool isomorphic(const CurveDiagram& a, const CurveDiagram& b);

}  // namespace curves
