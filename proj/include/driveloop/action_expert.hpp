#pragma once

#include <functional>
#include <vector>

#include "driveloop/decoder.hpp"
#include "driveloop/encoder.hpp"
#include "driveloop/meta_action.hpp"
#include "driveloop/policy.hpp"
#include "driveloop/sim.hpp"
#include "driveloop/trajectory.hpp"

namespace driveloop {

// Procedural trajectory primitives; doubles as the expert oracle the learned
// decoder imitates. Paths are generated by exact chord stepping, so the 1 m
// spacing invariant holds to floating-point accuracy on curves too.
Trajectory oracle_trajectory(const WorldState& world, MetaAction meta);

// Speed targets of the longitudinal primitives (m/s).
inline constexpr double kSlowSpeed = 2.0;
inline constexpr double kModerateSpeed = 5.0;
inline constexpr double kFastSpeed = 8.0;
inline constexpr double kSpeedDelta = 2.0;
inline constexpr double kRapidDelta = 4.0;
inline constexpr double kNormalAccel = 2.0;
inline constexpr double kRapidAccel = 4.0;
inline constexpr double kTurnRadius = 8.0;
inline constexpr double kLaneChangeLength = 20.0;

struct CandidateEntry {
  MetaAction meta;
  Trajectory traj;
  bool feasible = true;
};

struct CandidateSet {
  std::vector<CandidateEntry> entries;  // always all 42, joint-index order
};

// Source of trajectories for the candidate set: the oracle, or the learned
// decoder in deterministic mode.
class TrajectorySource {
 public:
  virtual ~TrajectorySource() = default;
  virtual Trajectory generate(const WorldState& world, const StateEmbedding& emb,
                              MetaAction meta) const = 0;
};

class OracleSource final : public TrajectorySource {
 public:
  Trajectory generate(const WorldState& world, const StateEmbedding&,
                      MetaAction meta) const override {
    return oracle_trajectory(world, meta);
  }
};

class DecoderSource final : public TrajectorySource {
 public:
  explicit DecoderSource(const DecoderParams& params) : params_(&params) {}
  Trajectory generate(const WorldState&, const StateEmbedding& emb,
                      MetaAction meta) const override {
    return decode(*params_, emb.values, meta, {.deterministic = true});
  }

 private:
  const DecoderParams* params_;
};

CandidateSet candidate_set(const WorldState& world, const TrajectorySource& source,
                           const StateEmbedding& emb);

// Lane-change feasibility from the lane topology at the ego's lateral offset.
bool path_action_feasible(const WorldState& world, PathAction path);

// argmax over feasible entries of p(speed) * p(path); ties by joint index.
// Throws ArgumentError when no entry is feasible.
const CandidateEntry& select_optimal(const CandidateSet& cands,
                                     const ActionDistribution& dist);

}  // namespace driveloop
