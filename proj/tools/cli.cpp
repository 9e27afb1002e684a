#include "cli.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "flightrl/harness/evaluate.hpp"
#include "flightrl/harness/matrix.hpp"
#include "flightrl/harness/toy.hpp"
#include "flightrl/harness/train.hpp"
#include "flightrl/io/config.hpp"
#include "flightrl/nn/checkpoint.hpp"

namespace flightrl::cli {
namespace {

namespace fs = std::filesystem;

// Unknown --scenario names get their own exit code; everything else stays a
// plain ConfigError.
struct PresetError : std::runtime_error {
  explicit PresetError(const std::string& what) : std::runtime_error(what) {}
};

io::ExperimentConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) {
    io::ExperimentConfig cfg = io::default_config();
    cfg.validate();
    return cfg;
  }
  return io::load_config(config_path);
}

// Every experiment run records the fully resolved config (file + CLI
// overrides) before doing any work, so results stay reproducible.
void prepare_out_dir(const io::ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create out dir '" + cfg.out_dir + "': " + ec.message());
  io::write_snapshot(cfg, (fs::path(cfg.out_dir) / "config_snapshot.json").string());
}

env::ScenarioConfig resolve_preset(const io::ExperimentConfig& cfg,
                                   const std::string& name) {
  try {
    return io::scenario_preset(cfg, name);
  } catch (const ConfigError& e) {
    throw PresetError(e.what());
  }
}

sac::SacAgent load_agent_checked(const std::string& path, int state_dim,
                                 int action_dim, const char* role) {
  sac::SacAgent agent = sac::load_agent(path);
  if (agent.cfg.state_dim != state_dim || agent.cfg.action_dim != action_dim)
    throw CheckpointError(std::string(role) + " checkpoint '" + path + "' has " +
                          std::to_string(agent.cfg.state_dim) + "-state/" +
                          std::to_string(agent.cfg.action_dim) +
                          "-action networks; expected " + std::to_string(state_dim) +
                          "/" + std::to_string(action_dim));
  return agent;
}

double smoothed_tail(const harness::StageResult& result) {
  if (result.curve.empty()) return 0.0;
  std::vector<double> rewards;
  rewards.reserve(result.curve.size());
  for (const auto& ep : result.curve) rewards.push_back(ep.reward_sum);
  return harness::smoothed(rewards, 20).back();
}

int report_stage(const char* stage, const harness::StageResult& result) {
  if (result.diverged) {
    std::printf("[%s] FAILED: non-finite loss after %lld steps; post-mortem "
                "checkpoint: %s\n",
                stage, static_cast<long long>(result.steps_done),
                result.final_checkpoint.c_str());
    return kExitRuntime;
  }
  std::printf("[%s] done: %zu episodes, %lld steps, smoothed episode reward %.3f\n",
              stage, result.curve.size(), static_cast<long long>(result.steps_done),
              smoothed_tail(result));
  std::printf("[%s] final checkpoint: %s\n", stage, result.final_checkpoint.c_str());
  return kExitOk;
}

struct TrainArgs {
  std::string config, stage, out, attitude_checkpoint;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  bool seed_set = false, steps_set = false;
};

int run_train(const TrainArgs& args) {
  io::ExperimentConfig cfg = load_or_default(args.config);
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.out.empty()) cfg.out_dir = args.out;
  const bool attitude = args.stage == "attitude";
  if (args.steps_set) {
    (attitude ? cfg.train.attitude_steps : cfg.train.altitude_steps) = args.steps;
    cfg.validate();
  }
  if (!attitude && args.attitude_checkpoint.empty())
    throw ConfigError(
        "the altitude stage drives a trained inner loop: pass "
        "--attitude-checkpoint (train --stage attitude first)");

  prepare_out_dir(cfg);
  const env::ScenarioConfig scenario = io::make_scenario(cfg.scenario);
  const harness::ReferenceProgram program = io::make_program(cfg.program);
  harness::StageConfig run;
  run.total_steps = attitude ? cfg.train.attitude_steps : cfg.train.altitude_steps;
  run.episode_s = attitude ? cfg.train.attitude_episode_s : cfg.train.altitude_episode_s;
  run.checkpoint_every = cfg.train.checkpoint_every;
  run.heartbeat_every = cfg.train.heartbeat_every;
  run.out_dir = cfg.out_dir;
  run.stage_name = args.stage;

  Rng rng(cfg.seed);
  if (attitude) {
    sac::SacAgent agent = sac::make_agent(cfg.attitude_agent, rng);
    return report_stage("attitude", harness::train_attitude(agent, scenario, program,
                                                            run, rng));
  }
  const sac::SacAgent inner =
      load_agent_checked(args.attitude_checkpoint, 9, 3, "attitude");
  sac::SacAgent agent = sac::make_agent(cfg.altitude_agent, rng);
  return report_stage("altitude", harness::train_altitude(agent, inner, scenario,
                                                          program, run, rng));
}

struct EvalArgs {
  std::string config, scenario = "nominal", program, log;
  std::string attitude_checkpoint, altitude_checkpoint;
};

int run_eval(const EvalArgs& args) {
  const io::ExperimentConfig cfg = load_or_default(args.config);
  const env::ScenarioConfig scenario = resolve_preset(cfg, args.scenario);
  harness::ReferenceProgram program = io::make_program(cfg.program);
  if (!args.program.empty())
    program.kind = harness::program_kind_from_name(args.program);

  const sac::SacAgent attitude =
      load_agent_checked(args.attitude_checkpoint, 9, 3, "attitude");
  const sac::SacAgent altitude =
      load_agent_checked(args.altitude_checkpoint, 2, 1, "altitude");

  const harness::EvalReport r =
      harness::evaluate_cascade(attitude, altitude, scenario, program, args.log);
  std::printf("scenario '%s'  program '%s'  %.0f s  (%.0f m, %.0f m/s)\n",
              args.scenario.c_str(), harness::program_kind_name(program.kind).c_str(),
              r.duration_s, scenario.altitude_m, scenario.airspeed_mps);
  std::printf("  altitude  MAE %8.2f m    / range %7.1f m    -> nMAE %5.2f%%\n",
              r.mae_h, r.range_h, 100.0 * r.nmae_h);
  std::printf("  roll      MAE %8.2f deg  / range %7.1f deg  -> nMAE %5.2f%%\n",
              rad2deg(r.mae_phi), rad2deg(r.range_phi), 100.0 * r.nmae_phi);
  std::printf("  sideslip  MAE %8.2f deg  / band  %7.1f deg  -> nMAE %5.2f%%\n",
              rad2deg(r.mae_beta), rad2deg(r.range_beta), 100.0 * r.nmae_beta);
  std::printf("  aggregate nMAE %.2f%%  success %s  aborted %s\n", 100.0 * r.aggregate,
              r.success ? "yes" : "no", r.aborted ? "yes" : "no");
  if (!r.log_path.empty()) std::printf("  trajectory log: %s\n", r.log_path.c_str());
  return kExitOk;
}

struct MatrixArgs {
  std::string config, out, attitude_checkpoint, altitude_checkpoint;
};

int run_matrix(const MatrixArgs& args) {
  io::ExperimentConfig cfg = load_or_default(args.config);
  if (!args.out.empty()) cfg.out_dir = args.out;
  prepare_out_dir(cfg);

  const sac::SacAgent attitude =
      load_agent_checked(args.attitude_checkpoint, 9, 3, "attitude");
  const sac::SacAgent altitude =
      load_agent_checked(args.altitude_checkpoint, 2, 1, "altitude");
  const std::string csv = (fs::path(cfg.out_dir) / "matrix.csv").string();

  const auto rows = harness::robustness_matrix(
      attitude, altitude, io::make_scenario(cfg.scenario), io::make_program(cfg.program),
      csv);
  std::printf("%-16s %9s %9s %9s %9s %9s  %s\n", "row", "nMAE_h", "nMAE_phi",
              "nMAE_beta", "aggregate", "success", "program");
  for (const auto& row : rows)
    std::printf("%-16s %8.2f%% %8.2f%% %8.2f%% %8.2f%% %9s  %s%s\n", row.name.c_str(),
                100.0 * row.report.nmae_h, 100.0 * row.report.nmae_phi,
                100.0 * row.report.nmae_beta, 100.0 * row.report.aggregate,
                row.report.success ? "yes" : "no",
                harness::program_kind_name(row.kind).c_str(),
                row.high_frequency ? " (high)" : "");

  // Wave rows come in low/high pairs; record the frequency comparison.
  double low = 0.0, high = 0.0;
  int n_low = 0, n_high = 0;
  for (const auto& row : rows) {
    if (row.kind == harness::ProgramKind::altitude_profile) continue;
    (row.high_frequency ? high : low) += row.report.aggregate;
    (row.high_frequency ? n_high : n_low) += 1;
  }
  if (n_low > 0 && n_high > 0)
    std::printf("wave aggregate nMAE: low-frequency %.2f%%  high-frequency %.2f%%\n",
                100.0 * low / n_low, 100.0 * high / n_high);
  std::printf("matrix csv: %s\n", csv.c_str());
  return kExitOk;
}

struct SweepArgs {
  std::string config, out;
  int n = 5;
  int workers = 0;
  std::int64_t steps = 200'000;
  bool full = false;
};

int run_sweep(const SweepArgs& args) {
  io::ExperimentConfig cfg = load_or_default(args.config);
  if (!args.out.empty()) cfg.out_dir = args.out;
  prepare_out_dir(cfg);

  harness::SweepSettings s;
  s.n = args.n;
  s.base_seed = cfg.seed;
  s.scenario = io::make_scenario(cfg.scenario);
  s.program = io::make_program(cfg.program);
  s.attitude_agent = cfg.attitude_agent;
  s.altitude_agent = cfg.altitude_agent;
  s.steps_per_stage = args.full ? cfg.train.attitude_steps : args.steps;
  s.attitude_episode_s = cfg.train.attitude_episode_s;
  s.altitude_episode_s = cfg.train.altitude_episode_s;
  s.workers = args.workers;
  s.out_dir = cfg.out_dir;

  const harness::SweepResult r = harness::reliability_sweep(s);
  for (const auto& run : r.runs)
    std::printf("seed %llu: aggregate nMAE %.2f%%  %s%s\n",
                static_cast<unsigned long long>(run.seed),
                100.0 * run.report.aggregate,
                run.diverged ? "DIVERGED"
                             : (run.report.success ? "success" : "miss"),
                run.report.aborted ? " (aborted)" : "");
  std::printf("success rate %d/%d = %.0f%%  (95%% Wilson CI %.1f%%..%.1f%%)\n",
              r.successes, r.n, 100.0 * r.rate, 100.0 * r.ci.lo, 100.0 * r.ci.hi);
  return kExitOk;
}

struct ToyArgs {
  std::uint64_t seed = 1;
  int seeds = 1;
  std::int64_t steps = 50'000;
};

int run_toy(const ToyArgs& args) {
  bool any_pass = false;
  for (int i = 0; i < args.seeds; ++i) {
    const harness::ToyResult r = harness::toy_benchmark(args.seed + i, args.steps);
    if (i == 0)
      std::printf("oracle: saturated PD kp=%.1f kd=%.1f score %.2f (target %.2f)\n",
                  r.oracle.kp, r.oracle.kd, r.oracle.score, 0.9 * r.oracle.score);
    std::printf("seed %llu: untrained %.2f -> final %.2f  %s\n",
                static_cast<unsigned long long>(args.seed + i), r.first_score,
                r.final_score, r.pass ? "pass" : "miss");
    any_pass = any_pass || r.pass;
  }
  std::printf("toy benchmark: %s\n", any_pass ? "PASS" : "FAIL");
  return any_pass ? kExitOk : kExitRuntime;
}

int run_inspect(const std::string& path) {
  const nn::Checkpoint c = nn::Checkpoint::load(path);
  std::fputs(nn::describe_checkpoint(c).c_str(), stdout);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Cascaded reinforcement-learning flight control"};
  app.require_subcommand(1);

  TrainArgs train;
  CLI::App* cmd_train = app.add_subcommand(
      "train", "Train one stage of the cascade and write checkpoints");
  cmd_train->add_option("--config", train.config, "JSON config file");
  cmd_train->add_option("--stage", train.stage, "attitude | altitude")
      ->required()
      ->check(CLI::IsMember({"attitude", "altitude"}));
  CLI::Option* train_seed = cmd_train->add_option("--seed", train.seed, "RNG seed");
  CLI::Option* train_steps =
      cmd_train->add_option("--steps", train.steps, "environment steps for this stage")
          ->check(CLI::PositiveNumber);
  cmd_train->add_option("--out", train.out, "run directory");
  cmd_train->add_option("--attitude-checkpoint", train.attitude_checkpoint,
                        "trained inner loop (required for --stage altitude)");

  EvalArgs eval;
  CLI::App* cmd_eval = app.add_subcommand(
      "eval", "Fly a trained cascade once, deterministically, and report nMAE");
  cmd_eval->add_option("--config", eval.config, "JSON config file");
  cmd_eval->add_option("--scenario", eval.scenario,
                       "nominal or a failure preset (onset 10 s)");
  cmd_eval->add_option("--program", eval.program,
                       "reference program kind (default: config)");
  cmd_eval->add_option("--log", eval.log, "write the trajectory to this CSV");
  cmd_eval->add_option("--attitude-checkpoint", eval.attitude_checkpoint)->required();
  cmd_eval->add_option("--altitude-checkpoint", eval.altitude_checkpoint)->required();

  MatrixArgs matrix;
  CLI::App* cmd_matrix = app.add_subcommand(
      "matrix", "Run the eight-row robustness matrix concurrently");
  cmd_matrix->add_option("--config", matrix.config, "JSON config file");
  cmd_matrix->add_option("--out", matrix.out, "run directory");
  cmd_matrix->add_option("--attitude-checkpoint", matrix.attitude_checkpoint)
      ->required();
  cmd_matrix->add_option("--altitude-checkpoint", matrix.altitude_checkpoint)
      ->required();

  SweepArgs sweep;
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "Train n fresh cascades on consecutive seeds; report success rate");
  cmd_sweep->add_option("--config", sweep.config, "JSON config file");
  cmd_sweep->add_option("--n", sweep.n, "number of independent runs")
      ->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--steps", sweep.steps, "steps per stage (desk scale)")
      ->check(CLI::PositiveNumber);
  cmd_sweep->add_flag("--full", sweep.full,
                      "use the config's full training lengths instead of --steps");
  cmd_sweep->add_option("--workers", sweep.workers, "thread cap (0: one per run)");
  cmd_sweep->add_option("--out", sweep.out, "run directory");

  ToyArgs toy;
  CLI::App* cmd_toy = app.add_subcommand(
      "toy", "Double-integrator sanity benchmark against a tuned PD oracle");
  cmd_toy->add_option("--seed", toy.seed, "first seed");
  cmd_toy->add_option("--seeds", toy.seeds, "number of consecutive seeds")
      ->check(CLI::PositiveNumber);
  cmd_toy->add_option("--steps", toy.steps, "training steps per seed")
      ->check(CLI::PositiveNumber);

  std::string inspect_path;
  CLI::App* cmd_inspect =
      app.add_subcommand("inspect-checkpoint", "List the sections of a checkpoint");
  cmd_inspect->add_option("path", inspect_path, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
    train.seed_set = train_seed->count() > 0;
    train.steps_set = train_steps->count() > 0;
    if (app.got_subcommand(cmd_train)) return run_train(train);
    if (app.got_subcommand(cmd_eval)) return run_eval(eval);
    if (app.got_subcommand(cmd_matrix)) return run_matrix(matrix);
    if (app.got_subcommand(cmd_sweep)) return run_sweep(sweep);
    if (app.got_subcommand(cmd_toy)) return run_toy(toy);
    if (app.got_subcommand(cmd_inspect)) return run_inspect(inspect_path);
    return kExitUsage;  // unreachable: require_subcommand(1)
  } catch (const CLI::ParseError& e) {
    const int help = app.exit(e);  // prints help or the parse error
    return help == 0 ? kExitOk : kExitUsage;
  } catch (const PresetError& e) {
    std::fprintf(stderr, "unknown scenario: %s\n", e.what());
    return kExitUnknownPreset;
  } catch (const CheckpointError& e) {
    std::fprintf(stderr, "checkpoint error: %s\n", e.what());
    return kExitCheckpoint;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
}

}  // namespace flightrl::cli
