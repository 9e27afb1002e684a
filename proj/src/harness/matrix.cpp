#include "flightrl/harness/matrix.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <future>
#include <thread>

#include "flightrl/io/csv.hpp"

namespace flightrl::harness {
namespace {

ReferenceProgram row_program(const ReferenceProgram& nominal, ProgramKind kind,
                             bool high_frequency) {
  switch (kind) {
    case ProgramKind::sinusoidal: return sinusoidal_program(high_frequency);
    case ProgramKind::triangular: return triangular_program(high_frequency);
    default: return nominal;
  }
}

}  // namespace

std::vector<MatrixRow> robustness_matrix(const sac::SacAgent& attitude,
                                         const sac::SacAgent& altitude,
                                         const env::ScenarioConfig& base,
                                         const ReferenceProgram& nominal,
                                         const std::string& out_csv) {
  std::vector<MatrixRow> rows = {
      {"ifc_2000_90", 2000.0, 90.0, ProgramKind::altitude_profile, false, {}},
      {"ifc_2000_140", 2000.0, 140.0, ProgramKind::altitude_profile, false, {}},
      {"ifc_5000_90", 5000.0, 90.0, ProgramKind::altitude_profile, false, {}},
      {"ifc_5000_140", 5000.0, 140.0, ProgramKind::altitude_profile, false, {}},
      {"sinusoidal_low", 2000.0, 90.0, ProgramKind::sinusoidal, false, {}},
      {"sinusoidal_high", 2000.0, 90.0, ProgramKind::sinusoidal, true, {}},
      {"triangular_low", 2000.0, 90.0, ProgramKind::triangular, false, {}},
      {"triangular_high", 2000.0, 90.0, ProgramKind::triangular, true, {}},
  };

  std::vector<std::future<EvalReport>> pending;
  pending.reserve(rows.size());
  for (const MatrixRow& row : rows) {
    pending.push_back(std::async(std::launch::async, [&attitude, &altitude, &base,
                                                      &nominal, row]() {
      env::ScenarioConfig scenario = base;
      scenario.altitude_m = row.altitude_m;
      scenario.airspeed_mps = row.airspeed_mps;
      return evaluate_cascade(attitude, altitude, scenario,
                              row_program(nominal, row.kind, row.high_frequency));
    }));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].report = pending[i].get();

  if (!out_csv.empty()) {
    io::CsvWriter csv(out_csv,
                      {"row", "name", "altitude_m", "airspeed_mps", "program",
                       "nmae_h", "nmae_phi", "nmae_beta", "aggregate_nmae", "success",
                       "aborted"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const MatrixRow& r = rows[i];
      csv.raw_row({std::to_string(i), r.name, io::format_cell(r.altitude_m),
                   io::format_cell(r.airspeed_mps),
                   program_kind_name(r.kind) +
                       (r.kind == ProgramKind::altitude_profile
                            ? std::string()
                            : std::string(r.high_frequency ? "_high" : "_low")),
                   io::format_cell(r.report.nmae_h), io::format_cell(r.report.nmae_phi),
                   io::format_cell(r.report.nmae_beta),
                   io::format_cell(r.report.aggregate), r.report.success ? "1" : "0",
                   r.report.aborted ? "1" : "0"});
    }
  }
  return rows;
}

WilsonInterval wilson(int successes, int n, double z) {
  if (n <= 0) throw UsageError("wilson: n must be positive");
  if (successes < 0 || successes > n) throw UsageError("wilson: successes out of range");
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SweepResult reliability_sweep(const SweepSettings& settings) {
  if (settings.n < 1) throw UsageError("reliability_sweep: n must be >= 1");
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = settings.workers > 0
                          ? settings.workers
                          : static_cast<int>(std::min<unsigned>(
                                static_cast<unsigned>(settings.n), hw));

  SweepResult out;
  out.n = settings.n;
  out.runs.resize(static_cast<std::size_t>(settings.n));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < settings.n; i = next.fetch_add(1)) {
      SweepRun& run = out.runs[static_cast<std::size_t>(i)];
      run.seed = settings.base_seed + static_cast<std::uint64_t>(i);
      Rng rng(run.seed);

      StageConfig att_run;
      att_run.total_steps = settings.steps_per_stage;
      att_run.episode_s = settings.attitude_episode_s;
      att_run.stage_name = "attitude";
      if (!settings.out_dir.empty())
        att_run.out_dir = settings.out_dir + "/run_" + std::to_string(i);

      sac::SacAgent attitude = sac::make_agent(settings.attitude_agent, rng);
      const StageResult att = train_attitude(attitude, settings.scenario,
                                             settings.program, att_run, rng);

      StageConfig alt_run = att_run;
      alt_run.episode_s = settings.altitude_episode_s;
      alt_run.stage_name = "altitude";
      sac::SacAgent altitude = sac::make_agent(settings.altitude_agent, rng);
      const StageResult alt = train_altitude(altitude, attitude, settings.scenario,
                                             settings.program, alt_run, rng);

      run.diverged = att.diverged || alt.diverged;
      if (!run.diverged)
        run.report =
            evaluate_cascade(attitude, altitude, settings.scenario, settings.program);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (const SweepRun& run : out.runs) {
    const bool ok = !run.diverged && !run.report.aborted &&
                    run.report.aggregate < settings.threshold;
    out.successes += ok ? 1 : 0;
  }
  out.rate = static_cast<double>(out.successes) / settings.n;
  out.ci = wilson(out.successes, settings.n);

  if (!settings.out_dir.empty()) {
    std::filesystem::create_directories(settings.out_dir);
    io::CsvWriter csv(settings.out_dir + "/sweep.csv",
                      {"run", "seed", "aggregate_nmae", "success", "diverged",
                       "aborted"});
    for (std::size_t i = 0; i < out.runs.size(); ++i) {
      const SweepRun& r = out.runs[i];
      const bool ok =
          !r.diverged && !r.report.aborted && r.report.aggregate < settings.threshold;
      csv.raw_row({std::to_string(i), std::to_string(r.seed),
                   io::format_cell(r.report.aggregate), ok ? "1" : "0",
                   r.diverged ? "1" : "0", r.report.aborted ? "1" : "0"});
    }
  }
  return out;
}

}  // namespace flightrl::harness
