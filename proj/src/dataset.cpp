#include "driveloop/dataset.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include "driveloop/action_expert.hpp"
#include "driveloop/episode.hpp"
#include "driveloop/error.hpp"
#include "driveloop/expert.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

std::vector<ExpertRecord> generate_dataset(const std::vector<ScenarioSpec>& scenarios,
                                           int steps_per_scenario, std::uint64_t seed) {
  if (scenarios.empty()) throw ArgumentError("generate_dataset: empty scenario list");
  std::vector<ExpertRecord> records;
  for (const ScenarioSpec& spec : scenarios) {
    std::uint64_t episode_seed = derive_seed(seed, "dataset", fnv1a64(spec.id));
    auto decide = [](const WorldState& w, const StateEmbedding&) {
      Decision d;
      d.action = expert_label(w);
      d.traj = oracle_trajectory(w, d.action);
      return d;
    };
    auto on_tick = [&](const TickRecord& rec) {
      ExpertRecord r;
      r.emb = *rec.emb;
      r.label = rec.decision->action;
      r.expert_traj = rec.decision->traj;
      r.scenario_id = spec.id;
      records.push_back(std::move(r));
    };
    run_episode(spec, episode_seed, decide, {}, on_tick, steps_per_scenario);
  }
  return records;
}

namespace {

constexpr char kMagic[4] = {'D', 'L', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void put_string(std::ofstream& out, const std::string& s) {
  put(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::ifstream& in) {
  std::uint32_t n = get<std::uint32_t>(in);
  if (n > (1u << 20)) throw ValidationError("string", "implausible string length");
  std::string s(n, '\0');
  in.read(s.data(), n);
  return s;
}

}  // namespace

void save_dataset(const std::vector<ExpertRecord>& records,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("path", "cannot write dataset: " + path.string());
  out.write(kMagic, 4);
  put(out, kVersion);
  put_string(out, std::string(embedding_schema()));

  std::map<std::string, std::uint16_t> id_index;
  std::vector<std::string> ids;
  for (const ExpertRecord& r : records) {
    if (!id_index.count(r.scenario_id)) {
      id_index[r.scenario_id] = static_cast<std::uint16_t>(ids.size());
      ids.push_back(r.scenario_id);
    }
  }
  put(out, static_cast<std::uint32_t>(ids.size()));
  for (const std::string& id : ids) put_string(out, id);
  put(out, static_cast<std::uint64_t>(records.size()));

  for (const ExpertRecord& r : records) {
    put(out, id_index.at(r.scenario_id));
    put(out, static_cast<std::uint8_t>(r.label.speed));
    put(out, static_cast<std::uint8_t>(r.label.path));
    put(out, r.emb.frame_t);
    out.write(reinterpret_cast<const char*>(r.emb.values.data()),
              sizeof(double) * kEmbedDim);
    out.write(reinterpret_cast<const char*>(r.expert_traj.path.data()),
              sizeof(Vec2) * kPathWaypoints);
    out.write(reinterpret_cast<const char*>(r.expert_traj.speed.data()),
              sizeof(Vec2) * kSpeedWaypoints);
  }
  if (!out) throw ValidationError("path", "write failed: " + path.string());
}

std::vector<ExpertRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("path", "cannot open dataset: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ValidationError("magic", "not a driveloop dataset: " + path.string());
  if (get<std::uint32_t>(in) != kVersion)
    throw ValidationError("version", "unsupported dataset version");
  std::string schema = get_string(in);
  if (schema != embedding_schema())
    throw ValidationError("schema", "dataset embedding schema mismatch: " + schema);
  std::uint32_t nids = get<std::uint32_t>(in);
  std::vector<std::string> ids;
  for (std::uint32_t i = 0; i < nids; ++i) ids.push_back(get_string(in));
  std::uint64_t count = get<std::uint64_t>(in);
  std::vector<ExpertRecord> records;
  records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    ExpertRecord r;
    std::uint16_t idx = get<std::uint16_t>(in);
    if (idx >= ids.size()) throw ValidationError("scenario_id", "bad id index");
    r.scenario_id = ids[idx];
    r.label.speed = static_cast<SpeedAction>(get<std::uint8_t>(in));
    r.label.path = static_cast<PathAction>(get<std::uint8_t>(in));
    r.emb.frame_t = get<double>(in);
    in.read(reinterpret_cast<char*>(r.emb.values.data()), sizeof(double) * kEmbedDim);
    in.read(reinterpret_cast<char*>(r.expert_traj.path.data()),
            sizeof(Vec2) * kPathWaypoints);
    in.read(reinterpret_cast<char*>(r.expert_traj.speed.data()),
            sizeof(Vec2) * kSpeedWaypoints);
    records.push_back(std::move(r));
  }
  if (!in) throw ValidationError("data", "truncated dataset: " + path.string());
  return records;
}

void export_dataset_csv(const std::vector<ExpertRecord>& records,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("path", "cannot write csv: " + path.string());
  out << "scenario_id,speed_label,path_label,frame_t";
  for (int i = 0; i < kEmbedDim; ++i) out << ",f" << i;
  for (int i = 0; i < kPathWaypoints; ++i) out << ",px" << i << ",py" << i;
  for (int i = 0; i < kSpeedWaypoints; ++i) out << ",sx" << i << ",sy" << i;
  out << "\n";
  out.precision(17);
  for (const ExpertRecord& r : records) {
    out << r.scenario_id << "," << to_string(r.label.speed) << ","
        << to_string(r.label.path) << "," << r.emb.frame_t;
    for (double v : r.emb.values) out << "," << v;
    for (const Vec2& p : r.expert_traj.path) out << "," << p.x << "," << p.y;
    for (const Vec2& p : r.expert_traj.speed) out << "," << p.x << "," << p.y;
    out << "\n";
  }
}

}  // namespace driveloop
