#include "driveloop/rollout.hpp"

#include <atomic>
#include <cstring>
#include <fstream>
#include <thread>

#include "driveloop/episode.hpp"
#include "driveloop/error.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

namespace {

struct EpisodeTask {
  const ScenarioSpec* spec;
  int round;
  std::uint64_t seed;
  PenaltyMask mask = kAllPenalties;
};

Episode run_collection_episode(const PolicyParams& policy, const TrajectorySource& source,
                               const EpisodeTask& task) {
  Episode episode;
  episode.scenario_id = task.spec->id;
  episode.round = task.round;
  Rng rng(task.seed);

  auto decide = [&](const WorldState& world, const StateEmbedding& emb) {
    PolicyForward f = policy_forward(policy, emb.values);
    auto [action, logprob] = sample_action(f.dist, rng);
    // Infeasible draws fall back to the best feasible candidate; the stored
    // logprob stays the sampled one (that is what the policy chose).
    CandidateSet cands = candidate_set(world, source, emb);
    const CandidateEntry* entry = &cands.entries[action.joint_index()];
    if (!entry->feasible) {
      ActionDistribution masked = f.dist;
      entry = &select_optimal(cands, masked);
      action = entry->meta;
      logprob = f.dist.logprob(action);
    }
    Decision d;
    d.action = action;
    d.traj = entry->traj;
    d.logprob = logprob;
    d.value = f.value;
    return d;
  };
  auto on_tick = [&](const TickRecord& rec) {
    Transition tr;
    tr.emb = *rec.emb;
    tr.action = rec.decision->action;
    tr.logprob = rec.decision->logprob;
    tr.value = rec.decision->value;
    tr.reward = rec.result->reward;
    tr.done = rec.result->done;
    tr.scenario_id = task.spec->id;
    episode.transitions.push_back(std::move(tr));
  };

  EpisodeSummary summary =
      run_episode(*task.spec, task.seed, decide, {.penalty_mask = task.mask}, on_tick);
  episode.truncated_by_time = summary.timed_out;
  for (const PenaltyEvent& e : summary.events) episode.terminal_events.push_back(e.kind);
  if (summary.timed_out) {
    StateEmbedding final_emb = encode(summary.final_world);
    episode.bootstrap_value = policy_forward(policy, final_emb.values).value;
  }
  return episode;
}

// Fan out tasks over a fixed-size pool; results land in task order regardless
// of scheduling. The first worker exception wins and is rethrown.
template <typename Task, typename Fn, typename Result>
void run_pool(const std::vector<Task>& tasks, int workers, Fn&& fn,
              std::vector<Result>& results) {
  results.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;

  int n = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int w = 0; w < n; ++w) {
    pool.emplace_back([&]() {
      while (!failed.load(std::memory_order_relaxed)) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          results[i] = fn(tasks[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

RolloutBuffer collect(const PolicyParams& policy, const TrajectorySource& source,
                      const std::vector<ScenarioSpec>& scenarios,
                      const TrainerConfig& cfg, std::uint64_t seed,
                      PenaltyMask penalty_mask) {
  if (scenarios.empty()) throw ArgumentError("collect: empty scenario list");
  validate(cfg);

  std::vector<EpisodeTask> tasks;
  for (const ScenarioSpec& spec : scenarios) {
    for (int round = 0; round < cfg.rollout_rounds; ++round) {
      tasks.push_back({&spec, round,
                       derive_seed(seed, "collect", fnv1a64(spec.id), round),
                       penalty_mask});
    }
  }

  RolloutBuffer buffer;
  buffer.round_index = cfg.rollout_rounds;
  std::vector<Episode> episodes;
  try {
    run_pool(tasks, cfg.workers,
             [&](const EpisodeTask& t) { return run_collection_episode(policy, source, t); },
             episodes);
  } catch (const std::exception& e) {
    throw TrainingError(std::string("collect: worker failed, buffer rejected: ") +
                        e.what());
  }
  buffer.episodes = std::move(episodes);  // already in (scenario, round) order
  return buffer;
}

std::vector<std::string> failed_routes(const PolicyParams& policy,
                                       const TrajectorySource& source,
                                       const std::vector<ScenarioSpec>& scenarios,
                                       int attempts, int workers, std::uint64_t seed) {
  if (attempts <= 0) throw ArgumentError("failed_routes: attempts must be > 0");
  std::vector<EpisodeTask> tasks;
  for (const ScenarioSpec& spec : scenarios) {
    for (int k = 0; k < attempts; ++k) {
      tasks.push_back({&spec, k, derive_seed(seed, "prepass", fnv1a64(spec.id), k)});
    }
  }
  std::vector<char> succeeded;
  run_pool(tasks, workers,
           [&](const EpisodeTask& t) -> char {
             Episode e = run_collection_episode(policy, source, t);
             bool success = !e.transitions.empty() && e.transitions.back().reward == +1;
             return success ? 1 : 0;
           },
           succeeded);
  std::vector<std::string> failed;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    bool all_ok = true;
    for (int k = 0; k < attempts; ++k) {
      if (!succeeded[i * attempts + k]) all_ok = false;
    }
    if (!all_ok) failed.push_back(scenarios[i].id);
  }
  return failed;
}

namespace {

constexpr char kMagic[4] = {'D', 'L', 'R', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

void save_buffer(const RolloutBuffer& buffer, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("path", "cannot write buffer: " + path.string());
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(buffer.round_index));
  put(out, static_cast<std::uint64_t>(buffer.episodes.size()));
  for (const Episode& e : buffer.episodes) {
    put(out, static_cast<std::uint32_t>(e.scenario_id.size()));
    out.write(e.scenario_id.data(), static_cast<std::streamsize>(e.scenario_id.size()));
    put(out, static_cast<std::uint32_t>(e.round));
    put(out, static_cast<std::uint8_t>(e.truncated_by_time));
    put(out, e.bootstrap_value);
    put(out, static_cast<std::uint8_t>(e.terminal_events.size()));
    for (PenaltyKind k : e.terminal_events) put(out, static_cast<std::uint8_t>(k));
    put(out, static_cast<std::uint64_t>(e.transitions.size()));
    for (const Transition& t : e.transitions) {
      put(out, t.emb.frame_t);
      out.write(reinterpret_cast<const char*>(t.emb.values.data()),
                sizeof(double) * kEmbedDim);
      put(out, static_cast<std::uint8_t>(t.action.speed));
      put(out, static_cast<std::uint8_t>(t.action.path));
      put(out, t.logprob);
      put(out, t.value);
      put(out, static_cast<std::int8_t>(t.reward));
      put(out, static_cast<std::uint8_t>(t.done));
    }
  }
  if (!out) throw ValidationError("path", "buffer write failed: " + path.string());
}

RolloutBuffer load_buffer(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("path", "cannot open buffer: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ValidationError("magic", "not a driveloop rollout buffer: " + path.string());
  if (get<std::uint32_t>(in) != kVersion)
    throw ValidationError("version", "unsupported buffer version");
  RolloutBuffer buffer;
  buffer.round_index = static_cast<int>(get<std::uint32_t>(in));
  std::uint64_t n = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < n; ++i) {
    Episode e;
    std::uint32_t idlen = get<std::uint32_t>(in);
    if (idlen > (1u << 16)) throw ValidationError("scenario_id", "implausible id length");
    e.scenario_id.resize(idlen);
    in.read(e.scenario_id.data(), idlen);
    e.round = static_cast<int>(get<std::uint32_t>(in));
    e.truncated_by_time = get<std::uint8_t>(in) != 0;
    e.bootstrap_value = get<double>(in);
    std::uint8_t nevents = get<std::uint8_t>(in);
    for (std::uint8_t k = 0; k < nevents; ++k) {
      e.terminal_events.push_back(static_cast<PenaltyKind>(get<std::uint8_t>(in)));
    }
    std::uint64_t m = get<std::uint64_t>(in);
    for (std::uint64_t k = 0; k < m; ++k) {
      Transition t;
      t.emb.frame_t = get<double>(in);
      in.read(reinterpret_cast<char*>(t.emb.values.data()), sizeof(double) * kEmbedDim);
      t.action.speed = static_cast<SpeedAction>(get<std::uint8_t>(in));
      t.action.path = static_cast<PathAction>(get<std::uint8_t>(in));
      t.logprob = get<double>(in);
      t.value = get<double>(in);
      t.reward = static_cast<int>(get<std::int8_t>(in));
      t.done = get<std::uint8_t>(in) != 0;
      t.scenario_id = e.scenario_id;
      e.transitions.push_back(std::move(t));
    }
    buffer.episodes.push_back(std::move(e));
  }
  if (!in) throw ValidationError("data", "truncated buffer: " + path.string());
  return buffer;
}

}  // namespace driveloop
