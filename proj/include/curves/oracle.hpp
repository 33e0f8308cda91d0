#pragma once

#include <map>
#include <string>
#include <vector>

#include "curves/diagram.hpp"

namespace curves::oracle {

// Brute-force cross-checks, implemented independently of the engine paths
// they validate (naive pointer-chasing and exhaustive enumeration only).

// Component count of the smoothed diagram via union-find over half-edges.
int brute_components(const CurveDiagram& d, const Resolution& r);

// All admissible sign vectors by filtering all 2^k assignments.
std::vector<Resolution> brute_admissible(const CurveDiagram& d, int cap = kDefaultEnumerationCap);

// Exhaustive path search in a generic multigraph (vertex-simple paths, parallel
// edges distinguished). Vertices are opaque keys; edges carry labels.
struct BruteEdge {
  std::string from, to, label;
};
struct BrutePath {
  std::vector<std::string> vertices;
  std::vector<size_t> edges;  // indices into the edge list
};
std::vector<BrutePath> brute_paths(const std::vector<BruteEdge>& edges, const std::string& start,
                                   const std::vector<std::string>& targets, size_t max_len = 32);

// Local R3 disk analysis: all 8 sign assignments on each side of a triangle,
// classified by the induced matching of the six boundary stubs plus closed
// circle content (stub ids persist through the move, so classes compare
// directly across the two sides).
struct R3LocalSummary {
  // class string -> (count among the 8 before-assignments, count after)
  std::map<std::string, std::pair<int, int>> census;
  std::vector<std::string> before_class, after_class;  // per assignment index
  int before_only_classes = 0;  // classes absent on the after side
  int after_only_classes = 0;
  int plus_fan = 0;   // after-multiplicity of the class with before count 1, after count > 1
  int minus_fan = 0;  // before-multiplicity of the class with after count 1, before count > 1
  bool ok_patterns = true;  // every shared class has counts (1,1), (1,3) or (3,1)
};

// `before` and `after` are the diagrams on the two sides of an R3 move;
// `triple` its crossings, `witness` the triangle arcs (valid in `before`).
R3LocalSummary brute_r3_local(const CurveDiagram& before, const CurveDiagram& after,
                              const std::vector<CrossingId>& triple, const std::array<ArcId, 3>& witness);

}  // namespace curves::oracle
