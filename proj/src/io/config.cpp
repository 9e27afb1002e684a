#include "flightrl/io/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace flightrl::io {
namespace {

using nlohmann::json;

// Typed, default-preserving field access that tracks which keys were read so
// leftovers can be reported as unknown.
class Group {
 public:
  Group(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(label("") + ": expected an object");
  }

  void number(const char* key, double& out) {
    if (!mark(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(label(key) + ": expected a number");
    out = v.get<double>();
  }

  void integer(const char* key, std::int64_t& out) {
    if (!mark(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(label(key) + ": expected an integer");
    const double d = v.get<double>();
    if (std::floor(d) != d || std::abs(d) > 9.0e18)
      throw ConfigError(label(key) + ": expected an integer");
    out = static_cast<std::int64_t>(d);
  }

  void unsigned_integer(const char* key, std::uint64_t& out) {
    std::int64_t v = static_cast<std::int64_t>(out);
    integer(key, v);
    if (v < 0) throw ConfigError(label(key) + ": expected a non-negative integer");
    out = static_cast<std::uint64_t>(v);
  }

  void integer_int(const char* key, int& out) {
    std::int64_t v = out;
    integer(key, v);
    if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(label(key) + ": out of range");
    out = static_cast<int>(v);
  }

  void boolean(const char* key, bool& out) {
    if (!mark(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(label(key) + ": expected true or false");
    out = v.get<bool>();
  }

  void text(const char* key, std::string& out) {
    if (!mark(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(label(key) + ": expected a string");
    out = v.get<std::string>();
  }

  const json& object(const char* key) {
    static const json empty = json::object();
    if (!mark(key)) return empty;
    const json& v = j_.at(key);
    if (!v.is_object()) throw ConfigError(label(key) + ": expected an object");
    return v;
  }

  // Unknown-key sweep; call after all known fields were claimed.
  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key()))
        throw ConfigError("unknown key '" + label(item.key().c_str()) + "'");
  }

 private:
  bool mark(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  std::string label(const char* key) const {
    if (path_.empty()) return key;
    return *key ? path_ + "." + key : path_;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_agent(const json& j, const std::string& path, sac::AgentConfig& cfg) {
  Group g(j, path);
  g.integer_int("hidden_width", cfg.hidden_width);
  g.number("discount", cfg.discount);
  g.number("smoothing", cfg.smoothing);
  g.number("lr_initial", cfg.lr.initial);
  g.number("lr_final", cfg.lr.final_value);
  g.integer("lr_decay_steps", cfg.lr.decay_steps);
  g.integer_int("batch_size", cfg.batch_size);
  g.integer("buffer_capacity", cfg.buffer_capacity);
  g.number("entropy_target", cfg.entropy_target);
  g.number("log_sigma_min", cfg.log_sigma_min);
  g.number("log_sigma_max", cfg.log_sigma_max);
  g.number("eta_init", cfg.eta_init);
  g.finish();
}

json agent_json(const sac::AgentConfig& cfg) {
  return {{"hidden_width", cfg.hidden_width},
          {"discount", cfg.discount},
          {"smoothing", cfg.smoothing},
          {"lr_initial", cfg.lr.initial},
          {"lr_final", cfg.lr.final_value},
          {"lr_decay_steps", cfg.lr.decay_steps},
          {"batch_size", cfg.batch_size},
          {"buffer_capacity", cfg.buffer_capacity},
          {"entropy_target", cfg.entropy_target},
          {"log_sigma_min", cfg.log_sigma_min},
          {"log_sigma_max", cfg.log_sigma_max},
          {"eta_init", cfg.eta_init}};
}

bool agent_equal(const sac::AgentConfig& a, const sac::AgentConfig& b) {
  return agent_json(a) == agent_json(b) && a.state_dim == b.state_dim &&
         a.action_dim == b.action_dim;
}

template <typename T>
void rethrow_for(const char* group, T&& body) {
  try {
    body();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(group) + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.attitude_agent.state_dim = 9;
  cfg.attitude_agent.action_dim = 3;
  cfg.attitude_agent.hidden_width = 64;
  cfg.attitude_agent.lr = {4e-4, 0.0, 1'000'000};
  cfg.attitude_agent.entropy_target = -3.0;
  cfg.attitude_agent.entropy_target_set = true;

  cfg.altitude_agent.state_dim = 2;
  cfg.altitude_agent.action_dim = 1;
  cfg.altitude_agent.hidden_width = 32;
  cfg.altitude_agent.lr = {3e-4, 3e-4, 0};
  cfg.altitude_agent.entropy_target = -1.0;
  cfg.altitude_agent.entropy_target_set = true;
  return cfg;
}

env::ScenarioConfig make_scenario(const ScenarioSettings& s) {
  env::ScenarioConfig out;
  out.altitude_m = s.altitude_m;
  out.airspeed_mps = s.airspeed_mps;
  out.sim.failure.kind = fault::failure_kind_from_name(s.failure);
  out.sim.failure.onset_s = s.failure_onset_s;
  out.noise.enabled = s.sensor_noise;
  out.noise_seed = s.noise_seed;
  out.sim.gust.enabled = s.gusts;
  if (s.cost_clip == "absolute")
    out.clip_mode = env::CostClipMode::absolute;
  else if (s.cost_clip == "one_sided")
    out.clip_mode = env::CostClipMode::one_sided;
  else
    throw ConfigError("cost_clip must be 'absolute' or 'one_sided', got '" +
                      s.cost_clip + "'");
  return out;
}

harness::ReferenceProgram make_program(const ProgramSettings& p) {
  harness::ReferenceProgram out;
  out.kind = harness::program_kind_from_name(p.kind);
  out.h_period_s = p.h_period_s;
  out.h_amplitude_m = p.h_amplitude_m;
  out.phi_period_s = p.phi_period_s;
  out.phi_amplitude_rad = deg2rad(p.phi_amplitude_deg);
  out.theta_min_rad = deg2rad(p.theta_step_min_deg);
  out.theta_max_rad = deg2rad(p.theta_step_max_deg);
  out.phi_min_rad = deg2rad(p.phi_step_min_deg);
  out.phi_max_rad = deg2rad(p.phi_step_max_deg);
  out.step_min_s = p.step_min_s;
  out.step_max_s = p.step_max_s;
  out.profile_hold_s = p.profile_hold_s;
  out.profile_leg_s = p.profile_leg_s;
  out.profile_rate_mps = p.profile_rate_mps;
  out.profile_bank_rad = deg2rad(p.profile_bank_deg);
  out.bank1_on_s = p.bank1_on_s;
  out.bank1_off_s = p.bank1_off_s;
  out.bank2_on_s = p.bank2_on_s;
  out.bank2_off_s = p.bank2_off_s;
  out.leg_rate_min_mps = p.leg_rate_min_mps;
  out.leg_rate_max_mps = p.leg_rate_max_mps;
  out.leg_min_s = p.leg_min_s;
  out.leg_max_s = p.leg_max_s;
  return out;
}

void ExperimentConfig::validate() const {
  rethrow_for("scenario", [&] {
    const env::ScenarioConfig s = make_scenario(scenario);
    s.sim.validate();
    if (!(s.altitude_m > 0)) throw ConfigError("altitude_m must be positive");
    if (!(s.airspeed_mps > 1)) throw ConfigError("airspeed_mps must exceed 1 m/s");
  });
  rethrow_for("attitude_agent", [&] { attitude_agent.validate(); });
  rethrow_for("altitude_agent", [&] { altitude_agent.validate(); });
  rethrow_for("program", [&] { make_program(program).validate(); });
  rethrow_for("train", [&] {
    if (train.attitude_steps < 1) throw ConfigError("attitude_steps must be >= 1");
    if (train.altitude_steps < 1) throw ConfigError("altitude_steps must be >= 1");
    if (!(train.attitude_episode_s >= 0.01))
      throw ConfigError("attitude_episode_s must cover at least one tick");
    if (!(train.altitude_episode_s >= 0.01))
      throw ConfigError("altitude_episode_s must cover at least one tick");
    if (train.checkpoint_every < 0) throw ConfigError("checkpoint_every must be >= 0");
    if (train.heartbeat_every < 0) throw ConfigError("heartbeat_every must be >= 0");
  });
  if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  // All-whitespace input means "all defaults".
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    ExperimentConfig cfg = default_config();
    cfg.validate();
    return cfg;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }

  ExperimentConfig cfg = default_config();
  Group top(j, "");
  top.unsigned_integer("seed", cfg.seed);
  top.text("out_dir", cfg.out_dir);

  {
    Group g(top.object("scenario"), "scenario");
    g.number("altitude_m", cfg.scenario.altitude_m);
    g.number("airspeed_mps", cfg.scenario.airspeed_mps);
    g.text("failure", cfg.scenario.failure);
    g.number("failure_onset_s", cfg.scenario.failure_onset_s);
    g.boolean("sensor_noise", cfg.scenario.sensor_noise);
    g.unsigned_integer("noise_seed", cfg.scenario.noise_seed);
    g.boolean("gusts", cfg.scenario.gusts);
    g.text("cost_clip", cfg.scenario.cost_clip);
    g.finish();
  }
  read_agent(top.object("attitude_agent"), "attitude_agent", cfg.attitude_agent);
  read_agent(top.object("altitude_agent"), "altitude_agent", cfg.altitude_agent);
  {
    Group g(top.object("train"), "train");
    g.integer("attitude_steps", cfg.train.attitude_steps);
    g.integer("altitude_steps", cfg.train.altitude_steps);
    g.number("attitude_episode_s", cfg.train.attitude_episode_s);
    g.number("altitude_episode_s", cfg.train.altitude_episode_s);
    g.integer("checkpoint_every", cfg.train.checkpoint_every);
    g.integer("heartbeat_every", cfg.train.heartbeat_every);
    g.finish();
  }
  {
    Group g(top.object("program"), "program");
    ProgramSettings& p = cfg.program;
    g.text("kind", p.kind);
    g.number("h_period_s", p.h_period_s);
    g.number("h_amplitude_m", p.h_amplitude_m);
    g.number("phi_period_s", p.phi_period_s);
    g.number("phi_amplitude_deg", p.phi_amplitude_deg);
    g.number("theta_step_min_deg", p.theta_step_min_deg);
    g.number("theta_step_max_deg", p.theta_step_max_deg);
    g.number("phi_step_min_deg", p.phi_step_min_deg);
    g.number("phi_step_max_deg", p.phi_step_max_deg);
    g.number("step_min_s", p.step_min_s);
    g.number("step_max_s", p.step_max_s);
    g.number("profile_hold_s", p.profile_hold_s);
    g.number("profile_leg_s", p.profile_leg_s);
    g.number("profile_rate_mps", p.profile_rate_mps);
    g.number("profile_bank_deg", p.profile_bank_deg);
    g.number("bank1_on_s", p.bank1_on_s);
    g.number("bank1_off_s", p.bank1_off_s);
    g.number("bank2_on_s", p.bank2_on_s);
    g.number("bank2_off_s", p.bank2_off_s);
    g.number("leg_rate_min_mps", p.leg_rate_min_mps);
    g.number("leg_rate_max_mps", p.leg_rate_max_mps);
    g.number("leg_min_s", p.leg_min_s);
    g.number("leg_max_s", p.leg_max_s);
    g.finish();
  }
  top.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  const ScenarioSettings& s = cfg.scenario;
  const ProgramSettings& p = cfg.program;
  const TrainSettings& t = cfg.train;
  json j = {
      {"seed", cfg.seed},
      {"out_dir", cfg.out_dir},
      {"scenario",
       {{"altitude_m", s.altitude_m},
        {"airspeed_mps", s.airspeed_mps},
        {"failure", s.failure},
        {"failure_onset_s", s.failure_onset_s},
        {"sensor_noise", s.sensor_noise},
        {"noise_seed", s.noise_seed},
        {"gusts", s.gusts},
        {"cost_clip", s.cost_clip}}},
      {"attitude_agent", agent_json(cfg.attitude_agent)},
      {"altitude_agent", agent_json(cfg.altitude_agent)},
      {"train",
       {{"attitude_steps", t.attitude_steps},
        {"altitude_steps", t.altitude_steps},
        {"attitude_episode_s", t.attitude_episode_s},
        {"altitude_episode_s", t.altitude_episode_s},
        {"checkpoint_every", t.checkpoint_every},
        {"heartbeat_every", t.heartbeat_every}}},
      {"program",
       {{"kind", p.kind},
        {"h_period_s", p.h_period_s},
        {"h_amplitude_m", p.h_amplitude_m},
        {"phi_period_s", p.phi_period_s},
        {"phi_amplitude_deg", p.phi_amplitude_deg},
        {"theta_step_min_deg", p.theta_step_min_deg},
        {"theta_step_max_deg", p.theta_step_max_deg},
        {"phi_step_min_deg", p.phi_step_min_deg},
        {"phi_step_max_deg", p.phi_step_max_deg},
        {"step_min_s", p.step_min_s},
        {"step_max_s", p.step_max_s},
        {"profile_hold_s", p.profile_hold_s},
        {"profile_leg_s", p.profile_leg_s},
        {"profile_rate_mps", p.profile_rate_mps},
        {"profile_bank_deg", p.profile_bank_deg},
        {"bank1_on_s", p.bank1_on_s},
        {"bank1_off_s", p.bank1_off_s},
        {"bank2_on_s", p.bank2_on_s},
        {"bank2_off_s", p.bank2_off_s},
        {"leg_rate_min_mps", p.leg_rate_min_mps},
        {"leg_rate_max_mps", p.leg_rate_max_mps},
        {"leg_min_s", p.leg_min_s},
        {"leg_max_s", p.leg_max_s}}}};
  return j.dump(2) + "\n";
}

void write_snapshot(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write snapshot '" + path + "'");
  out << config_to_json_text(cfg);
  if (!out) throw IoError("write failed on '" + path + "'");
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return config_to_json_text(a) == config_to_json_text(b) &&
         agent_equal(a.attitude_agent, b.attitude_agent) &&
         agent_equal(a.altitude_agent, b.altitude_agent);
}

env::ScenarioConfig scenario_preset(const ExperimentConfig& cfg,
                                    const std::string& name) {
  env::ScenarioConfig out = make_scenario(cfg.scenario);
  if (name == "nominal") {
    out.sim.failure.kind = fault::FailureKind::none;
    return out;
  }
  out.sim.failure.kind = fault::failure_kind_from_name(name);
  out.sim.failure.onset_s = 10.0;
  return out;
}

}  // namespace flightrl::io
