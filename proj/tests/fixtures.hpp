#pragma once

#include "curves/moves.hpp"

namespace curves::fixtures {

// Simple closed curve: one free-loop arc, no crossings.
inline CurveDiagram fix0() {
  CurveDiagram d;
  d.arcs = {Arc{0, {0, 1}}};
  d.basepoint = 0;
  d.genus = 0;
  return d;
}

// One-crossing kink: big arc 0 on slots 3,0 and small loop 1 on slots 1,2.
inline CurveDiagram fix_kink() {
  CurveDiagram d;
  d.crossings = {Crossing{0, {0, 1, 2, 3}}};
  d.arcs = {Arc{0, {3, 0}}, Arc{1, {2, 1}}};
  d.basepoint = 3;
  d.genus = 0;
  return d;
}

// Two crossings from a circle pushed across itself: arcs 0 (inner finger tip),
// 1 (bigon companion), 2 (outer loop), 3 (middle piece).
inline CurveDiagram fix_bigon() {
  CurveDiagram d;
  d.crossings = {Crossing{0, {2, 0, 4, 5}}, Crossing{1, {6, 1, 3, 7}}};
  d.arcs = {Arc{0, {0, 1}}, Arc{1, {2, 3}}, Arc{2, {4, 5}}, Arc{3, {6, 7}}};
  d.basepoint = 5;
  d.genus = 0;
  return d;
}

}  // namespace curves::fixtures
