#pragma once

#include <array>
#include <optional>
#include <vector>

#include "curves/diagram.hpp"

namespace curves {

enum class MoveType { R1plus, R1minus, R2plus, R2minus, R3 };
enum class KinkSide { left, right };
enum class RelOrientation { parallel, antiparallel };

const char* move_type_name(MoveType t);

struct Move {
  MoveType type = MoveType::R1plus;

  // R1plus
  ArcId arc = -1;
  KinkSide side = KinkSide::left;
  CrossingId new_crossing = -1;

  // R1minus
  CrossingId crossing = -1;

  // R2plus
  std::array<ArcId, 2> arcs{-1, -1};
  RelOrientation orientation = RelOrientation::antiparallel;
  std::array<CrossingId, 2> new_crossings{-1, -1};

  // R2minus and R3
  std::vector<CrossingId> crossings;

  // R3 triangle witness: the three boundary arcs of the face.
  std::array<ArcId, 3> face{-1, -1, -1};
};

struct ApplyResult {
  CurveDiagram after;
  // Surviving crossings keep their ids; these record the difference.
  std::vector<CrossingId> created_crossings, destroyed_crossings;
  std::vector<ArcId> created_arcs, destroyed_arcs;
};

ApplyResult apply_move(const CurveDiagram& d, const Move& m);

enum class Terminal { curve, point };

struct HomotopyScript {
  CurveDiagram initial;
  std::vector<Move> moves;
  Terminal terminal = Terminal::curve;
};

struct Levels {
  std::vector<CurveDiagram> diagrams;  // size moves+1
  std::vector<ApplyResult> gaps;       // size moves
};

// Applies each move in order, validating every level. Throws TerminalMismatch
// if terminal == point but the final level still has crossings.
Levels elaborate(const HomotopyScript& s);

}  // namespace curves
