#pragma once

#include <cstdint>
#include <vector>

#include "curves/moves.hpp"

namespace curves {

// Every legal move on d, with fresh identifiers starting above d's maxima.
// R2+ candidates are limited to operand pairs that actually apply.
std::vector<Move> enumerate_moves(const CurveDiagram& d, int max_crossings);

// Deterministic seeded random walk in move space starting from the
// zero-crossing circle. Scripts elaborate by construction.
HomotopyScript random_script(uint32_t seed, int max_moves = 8, int max_crossings = 6);

// A valid diagram with exactly k crossings, grown by seeded random moves.
CurveDiagram random_diagram(uint32_t seed, int k);

// Seeded reduction of `start` to a zero-crossing level (terminal point):
// greedy monogon/bigon removal with random R3 flips to escape stalls.
// Throws NonTermination if no reduction is found within the step budget.
HomotopyScript contraction_script(const CurveDiagram& start, uint32_t seed);

}  // namespace curves
