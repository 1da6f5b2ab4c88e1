#include <doctest.h>

#include <filesystem>

#include "driveloop/error.hpp"
#include "driveloop/scenario.hpp"

using namespace driveloop;

TEST_CASE("scenario JSON round trip") {
  auto pack = starter_pack();
  REQUIRE(pack.size() >= 10);
  const ScenarioSpec& s = pack.front();
  std::string text = scenario_to_json(s);
  ScenarioSpec parsed = scenario_from_json(text);
  CHECK(parsed.id == s.id);
  CHECK(parsed.category == s.category);
  CHECK(parsed.route.size() == s.route.size());
  CHECK(parsed.agents.size() == s.agents.size());
  CHECK(parsed.controls.size() == s.controls.size());
  CHECK(parsed.time_limit == s.time_limit);
  CHECK(scenario_to_json(parsed) == text);
}

TEST_CASE("loader rejects unknown fields") {
  std::string text = R"({
    "id": "x", "category": "Merging", "route": [[0,0],[30,0]],
    "lane_width": 3.5, "time_limit": 10.0,
    "ego_start": {"x":0,"y":0,"heading":0},
    "extra_field": 1
  })";
  CHECK_THROWS_AS(scenario_from_json(text), ValidationError);
}

TEST_CASE("validation names the offending field") {
  std::string text = R"({
    "id": "x", "category": "Merging", "route": [[0,0],[5,0]],
    "lane_width": 3.5, "time_limit": 10.0,
    "ego_start": {"x":0,"y":0,"heading":0}
  })";
  try {
    scenario_from_json(text);  // 5 m route, too short
    FAIL("expected validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "route");
  }
}

TEST_CASE("starter pack covers every category at least twice") {
  auto pack = starter_pack();
  std::map<ScenarioCategory, int> counts;
  for (const ScenarioSpec& s : pack) counts[s.category] += 1;
  for (auto cat : {ScenarioCategory::Merging, ScenarioCategory::Overtaking,
                   ScenarioCategory::EmergencyBrake, ScenarioCategory::GiveWay,
                   ScenarioCategory::TrafficSign}) {
    CHECK(counts[cat] >= 2);
  }
}

TEST_CASE("scenario dir save and reload") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "driveloop_scen_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto pack = starter_pack();
  for (int i = 0; i < 3; ++i) save_scenario_file(pack[i], dir / (pack[i].id + ".json"));
  auto loaded = load_scenario_dir(dir);
  CHECK(loaded.size() == 3);
  // Sorted by id.
  CHECK(std::is_sorted(loaded.begin(), loaded.end(),
                       [](const auto& a, const auto& b) { return a.id < b.id; }));
  fs::remove_all(dir);
}
