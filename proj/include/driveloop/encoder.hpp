#pragma once

#include <array>
#include <string_view>

#include "driveloop/sim.hpp"

namespace driveloop {

inline constexpr int kEmbedDim = 64;

// Fixed-dimension, ego-frame featurization of the world; the cached state
// representation the policy and value nets consume. Pure and parameter-free.
struct StateEmbedding {
  std::array<double, kEmbedDim> values{};
  double frame_t = 0.0;
};

// Versioned layout descriptor embedded in dataset files.
std::string_view embedding_schema();

// Feature layout (scales are fixed, not learned):
//   [0]      ego speed / 10
//   [1]      heading error to the route tangent (rad)
//   [2]      signed lateral offset to the route / 50
//   [3..7]   signed route curvature at +2, +5, +10, +15, +20 m ahead (rad/m * 5)
//   [8..43]  6 nearest agents x (dx/50, dy/50, sin dh, cos dh, speed/10, present),
//            ego-frame, sorted by distance, zero-padded
//   [44..48] nearest active control ahead: (distance along route / 50, is_red,
//            is_stop, ego inside region, present)
//   [49]     remaining route fraction
//   [50]     remaining time fraction
//   [51..63] reserved, zero
StateEmbedding encode(const WorldState& world);

}  // namespace driveloop
