#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "flightrl/io/config.hpp"
#include "flightrl/io/csv.hpp"

using namespace flightrl;
namespace fs = std::filesystem;

namespace {

bool throws_mentioning(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("defaults mirror the experiment recipe") {
  const io::ExperimentConfig cfg = io::default_config();
  CHECK_NOTHROW(cfg.validate());

  CHECK(cfg.attitude_agent.state_dim == 9);
  CHECK(cfg.attitude_agent.action_dim == 3);
  CHECK(cfg.attitude_agent.hidden_width == 64);
  CHECK(cfg.attitude_agent.lr.initial == 4e-4);
  CHECK(cfg.attitude_agent.lr.final_value == 0.0);
  CHECK(cfg.attitude_agent.lr.decay_steps == 1'000'000);
  CHECK(cfg.attitude_agent.entropy_target == -3.0);
  CHECK(cfg.attitude_agent.discount == 0.99);
  CHECK(cfg.attitude_agent.smoothing == 0.995);
  CHECK(cfg.attitude_agent.batch_size == 256);
  CHECK(cfg.attitude_agent.buffer_capacity == 50'000);

  CHECK(cfg.altitude_agent.state_dim == 2);
  CHECK(cfg.altitude_agent.action_dim == 1);
  CHECK(cfg.altitude_agent.hidden_width == 32);
  CHECK(cfg.altitude_agent.entropy_target == -1.0);

  CHECK(cfg.train.attitude_steps == 1'000'000);
  CHECK(cfg.train.attitude_episode_s == 20.0);
  CHECK(cfg.train.altitude_episode_s == 120.0);

  const auto program = io::make_program(cfg.program);
  CHECK(program.kind == harness::ProgramKind::altitude_profile);
  CHECK(program.phi_amplitude_rad == doctest::Approx(deg2rad(50.0)));
  CHECK(program.theta_min_rad == doctest::Approx(deg2rad(-15.0)));

  const auto scenario = io::make_scenario(cfg.scenario);
  CHECK(scenario.altitude_m == 2000.0);
  CHECK(scenario.airspeed_mps == 90.0);
  CHECK(scenario.sim.failure.kind == fault::FailureKind::none);
  CHECK_FALSE(scenario.noise.enabled);
}

TEST_CASE("empty and {} inputs mean all defaults") {
  CHECK(io::config_from_json_text("") == io::default_config());
  CHECK(io::config_from_json_text("  \n\t ") == io::default_config());
  CHECK(io::config_from_json_text("{}") == io::default_config());
}

TEST_CASE("overrides apply and leave the rest at defaults") {
  const auto cfg = io::config_from_json_text(R"({
    "seed": 42,
    "scenario": {"airspeed_mps": 140.0, "failure": "rudder_jam", "sensor_noise": true},
    "attitude_agent": {"hidden_width": 16},
    "train": {"attitude_steps": 5000},
    "program": {"kind": "sinusoidal", "phi_amplitude_deg": 25.0}
  })");
  CHECK(cfg.seed == 42);
  CHECK(cfg.scenario.airspeed_mps == 140.0);
  CHECK(io::make_scenario(cfg.scenario).sim.failure.kind ==
        fault::FailureKind::rudder_jam);
  CHECK(io::make_scenario(cfg.scenario).noise.enabled);
  CHECK(cfg.attitude_agent.hidden_width == 16);
  CHECK(cfg.attitude_agent.lr.initial == 4e-4);  // untouched default
  CHECK(cfg.train.attitude_steps == 5000);
  CHECK(cfg.train.altitude_steps == 1'000'000);
  CHECK(io::make_program(cfg.program).kind == harness::ProgramKind::sinusoidal);
  CHECK(io::make_program(cfg.program).phi_amplitude_rad ==
        doctest::Approx(deg2rad(25.0)));
  CHECK(cfg != io::default_config());
}

TEST_CASE("unknown keys are rejected with their full path") {
  CHECK(throws_mentioning([] { io::config_from_json_text(R"({"sed": 1})"); },
                          "unknown key 'sed'"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"scenario": {"airspeedd": 1}})"); },
      "unknown key 'scenario.airspeedd'"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"program": {"h_period": 10}})"); },
      "unknown key 'program.h_period'"));
}

TEST_CASE("type and value errors cite the key") {
  CHECK(throws_mentioning([] { io::config_from_json_text(R"({"seed": "x"})"); },
                          "seed"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"seed": -3})"); }, "non-negative"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"train": {"attitude_steps": 1.5}})"); },
      "train.attitude_steps"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"scenario": {"sensor_noise": 1}})"); },
      "true or false"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"attitude_agent": {"discount": 1.2}})"); },
      "discount"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"attitude_agent": {"discount": 1.2}})"); },
      "attitude_agent"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"scenario": {"failure": "wing_gone"}})"); },
      "wing_gone"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"scenario": {"cost_clip": "both"}})"); },
      "cost_clip"));
  CHECK(throws_mentioning(
      [] { io::config_from_json_text(R"({"program": {"kind": "sawtooth"}})"); },
      "sawtooth"));
  CHECK(throws_mentioning([] { io::config_from_json_text("{ nope"); }, "parse"));
}

TEST_CASE("snapshot round trip is exact") {
  auto cfg = io::config_from_json_text(R"({
    "seed": 7,
    "out_dir": "runs/rt",
    "scenario": {"altitude_m": 5000, "gusts": true, "cost_clip": "one_sided"},
    "altitude_agent": {"lr_initial": 0.001, "entropy_target": -0.5},
    "program": {"phi_step_max_deg": 55.5, "step_min_s": 3.25}
  })");
  const std::string text = io::config_to_json_text(cfg);
  const auto again = io::config_from_json_text(text);
  CHECK(again == cfg);
  CHECK(io::config_to_json_text(again) == text);

  const fs::path path = fs::temp_directory_path() / "flightrl_cfg_rt.json";
  io::write_snapshot(cfg, path.string());
  CHECK(io::load_config(path.string()) == cfg);
  fs::remove(path);

  // The snapshot enumerates every configurable group.
  for (const char* key :
       {"seed", "out_dir", "scenario", "attitude_agent", "altitude_agent", "train",
        "program", "phi_amplitude_deg", "buffer_capacity", "heartbeat_every"})
    CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("missing config file is a config error") {
  CHECK_THROWS_AS((void)io::load_config("/nonexistent/flightrl.json"), ConfigError);
}

TEST_CASE("scenario presets") {
  const io::ExperimentConfig cfg = io::default_config();
  const auto nominal = io::scenario_preset(cfg, "nominal");
  CHECK(nominal.sim.failure.kind == fault::FailureKind::none);

  const auto jam = io::scenario_preset(cfg, "rudder_jam");
  CHECK(jam.sim.failure.kind == fault::FailureKind::rudder_jam);
  CHECK(jam.sim.failure.onset_s == 10.0);
  CHECK(jam.altitude_m == 2000.0);

  const auto icing = io::scenario_preset(cfg, "icing");
  CHECK(icing.sim.failure.kind == fault::FailureKind::icing);

  CHECK_THROWS_AS((void)io::scenario_preset(cfg, "flat_tire"), ConfigError);
}

TEST_CASE("csv writer schema discipline") {
  const fs::path path = fs::temp_directory_path() / "flightrl_csv_test.csv";
  {
    io::CsvWriter csv(path.string(), {"a", "b"});
    csv.row({1.5, -2.0});
    csv.raw_row({"x", "y"});
    CHECK_THROWS_AS(csv.row({1.0}), UsageError);
  }
  std::ifstream in(path);
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  CHECK(l1 == "a,b");
  CHECK(l2 == "1.5,-2");
  CHECK(l3 == "x,y");
  fs::remove(path);
  CHECK_THROWS_AS(io::CsvWriter("/nonexistent/dir/x.csv", {"a"}), IoError);
}
