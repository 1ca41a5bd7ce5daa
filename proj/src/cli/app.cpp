#include "app.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hosim/charts.hpp"
#include "hosim/engine.hpp"
#include "hosim/metrics.hpp"
#include "hosim/mobility.hpp"
#include "hosim/scenario.hpp"

namespace hosim::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct RunArgs {
  std::string scenario_path;
  std::string policy = "auto";
  std::optional<uint64_t> seed;
  std::string out_dir = "out";
  std::optional<double> warmup_frac;
  std::optional<double> snapshot_dt;
  bool event_log = false;
  bool hm_dump = false;
};

struct SweepArgs {
  std::string scenario_path;
  std::vector<double> lambdas;
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string out_dir = "out";
  std::optional<double> warmup_frac;
  std::optional<double> snapshot_dt;
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct ValidateArgs {
  double f0 = 6.0;
  double hm_min = 0.0;
  double hm_max = 12.0;
  int order = 1;
  int samples = 10000;
};

Policy parse_policy(const std::string& name) {
  if (name == "auto") return Policy::kAutoTuned;
  if (name == "fixed") return Policy::kFixedMargin;
  throw ValidationError("policy: must be 'auto' or 'fixed'");
}

Scenario load_with_overrides(const std::string& path, const std::optional<double>& warmup_frac,
                             const std::optional<double>& snapshot_dt) {
  Scenario sc = load_scenario(path);
  if (warmup_frac || snapshot_dt) {
    if (warmup_frac) sc.policy.warmup_fraction = *warmup_frac;
    if (snapshot_dt) sc.snapshot_duration_s = *snapshot_dt;
    sc.validate_and_resolve();
  }
  return sc;
}

int cmd_run(const RunArgs& args) {
  const Scenario scenario =
      load_with_overrides(args.scenario_path, args.warmup_frac, args.snapshot_dt);
  const Policy policy = parse_policy(args.policy);
  fs::create_directories(args.out_dir);

  std::ofstream hm_dump_stream;
  RunOptions options;
  options.seed_override = args.seed;
  options.keep_event_log = args.event_log;
  if (args.hm_dump) {
    hm_dump_stream.open(fs::path(args.out_dir) / "hm_margins.csv");
    hm_dump_stream << "time,e,k,margin_db\n";
    options.hm_dump = &hm_dump_stream;
  }

  const RunResult result = run(scenario, policy, options);
  const uint64_t seed = args.seed.value_or(scenario.rng_seed);

  const auto out = fs::path(args.out_dir);
  write_summary_csv(
      {make_summary(scenario.traffic.arrival_rate, policy_name(policy), seed, result.report)},
      (out / "summary.csv").string());
  write_sinr_cdf_csv(result.report.sinr_cdf, (out / "sinr_cdf.csv").string());
  write_cell_loads_csv(result.report.per_cell_mean_load, (out / "cell_loads.csv").string());
  export_layout_csv(scenario.sites, (out / "layout.csv").string());
  if (args.event_log) {
    std::ofstream events(out / "events.csv");
    write_event_log_csv(result.event_log, scenario.snapshot_duration_s, events);
  }

  std::cout << "run complete: policy=" << policy_name(policy) << " seed=" << seed
            << " attempts=" << result.report.attempts
            << " access=" << (result.report.access_probability
                                  ? format_double(*result.report.access_probability)
                                  : "n/a")
            << " event_hash=" << std::hex << result.report.event_hash << std::dec << "\n";
  std::cout << "outputs in " << out.string() << "\n";
  return kExitOk;
}

struct SweepJob {
  double lambda = 0.0;
  Policy policy = Policy::kFixedMargin;
  uint64_t seed = 0;
};

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double sum = 0.0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

// Charts are regenerated from the summary CSV alone, so the CSV stays the
// single source of truth.
void write_charts_from_csv(const std::string& csv_path, const fs::path& out_dir) {
  const auto rows = read_summary_csv(csv_path);
  struct Key {
    std::string policy;
    double lambda;
    bool operator<(const Key& o) const {
      return policy != o.policy ? policy < o.policy : lambda < o.lambda;
    }
  };
  std::map<Key, std::vector<double>> access, holding, throughput;
  for (const auto& r : rows) {
    const Key key{r.policy, r.lambda};
    if (r.access_prob) access[key].push_back(*r.access_prob);
    if (r.holding_prob) holding[key].push_back(*r.holding_prob);
    if (r.mean_throughput) throughput[key].push_back(*r.mean_throughput);
  }
  const auto build = [](const std::map<Key, std::vector<double>>& data) {
    std::map<std::string, ChartSeries> by_policy;
    for (const auto& [key, values] : data) {
      const auto m = mean_of(values);
      if (!m) continue;
      auto& series = by_policy[key.policy];
      series.label = key.policy;
      series.points.emplace_back(key.lambda, *m);
    }
    std::vector<ChartSeries> out;
    for (auto& [_, series] : by_policy) out.push_back(std::move(series));
    return out;
  };
  write_line_chart((out_dir / "access_probability.svg").string(), "Access probability vs traffic",
                   "arrival rate (users/s)", "access probability", build(access));
  write_line_chart((out_dir / "holding_probability.svg").string(),
                   "Holding probability vs traffic", "arrival rate (users/s)",
                   "holding probability", build(holding));
  write_line_chart((out_dir / "mean_throughput.svg").string(), "Mean user throughput vs traffic",
                   "arrival rate (users/s)", "throughput (bytes/s)", build(throughput));
}

int cmd_sweep(const SweepArgs& args) {
  if (args.lambdas.empty()) throw ValidationError("lambdas: list must be non-empty");
  const Scenario base =
      load_with_overrides(args.scenario_path, args.warmup_frac, args.snapshot_dt);
  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);

  std::vector<SweepJob> jobs;
  for (const double lambda : args.lambdas) {
    for (const Policy policy : {Policy::kFixedMargin, Policy::kAutoTuned}) {
      for (const uint64_t seed : args.seeds) {
        jobs.push_back({lambda, policy, seed});
      }
    }
  }

  struct JobOutcome {
    RunSummary summary;
    std::vector<std::pair<double, double>> sinr_cdf;
    std::string error;
  };
  std::vector<JobOutcome> outcomes(jobs.size());

  const unsigned n_threads =
      std::max(1u, args.jobs ? args.jobs : std::thread::hardware_concurrency());
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
      const SweepJob& job = jobs[i];
      try {
        Scenario sc = base;
        sc.traffic.arrival_rate = job.lambda;
        RunOptions options;
        options.seed_override = job.seed;
        const RunResult result = run(sc, job.policy, options);
        outcomes[i].summary =
            make_summary(job.lambda, policy_name(job.policy), job.seed, result.report);
        outcomes[i].sinr_cdf = result.report.sinr_cdf;
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<RunSummary> rows;
  int failures = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      ++failures;
      std::cerr << "run failed (lambda=" << jobs[i].lambda << " policy="
                << policy_name(jobs[i].policy) << " seed=" << jobs[i].seed
                << "): " << outcomes[i].error << "\n";
      continue;
    }
    rows.push_back(outcomes[i].summary);
    std::ostringstream name;
    name << "sinr_cdf_l" << format_double(jobs[i].lambda) << "_s" << jobs[i].seed << "_"
         << policy_name(jobs[i].policy) << ".csv";
    write_sinr_cdf_csv(outcomes[i].sinr_cdf, (out / name.str()).string());
  }

  const std::string summary_path = (out / "sweep_summary.csv").string();
  write_summary_csv(rows, summary_path);
  write_charts_from_csv(summary_path, out);

  std::cout << "sweep complete: " << rows.size() << " runs ok, " << failures << " failed; "
            << "summary in " << summary_path << "\n";
  return failures == 0 ? kExitOk : kExitRuntime;
}

int cmd_validate(const ValidateArgs& args) {
  const BalancingFunction bf(args.f0, args.hm_min, args.hm_max, args.order);
  const BalancingReport report = validate_balancing(bf, args.samples);
  std::cout << format_report(report);
  return report.passed() ? kExitOk : kExitValidation;
}

void build_app(CLI::App& app, RunArgs& run_args, SweepArgs& sweep_args,
               ValidateArgs& validate_args) {
  app.description("Snapshot-driven OFDMA downlink simulator with load-adaptive "
                  "handover-margin tuning");
  app.require_subcommand(0, 1);
  app.set_help_all_flag("--help-all", "Print help for all subcommands");

  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and export KPI CSVs");
  run_cmd->add_option("--scenario", run_args.scenario_path, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--policy", run_args.policy, "Margin policy: auto or fixed")
      ->check(CLI::IsMember({"auto", "fixed"}))
      ->capture_default_str();
  run_cmd->add_option("--seed", run_args.seed, "Override the scenario rng_seed");
  run_cmd->add_option("--out", run_args.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--warmup-frac", run_args.warmup_frac,
                      "Override warm-up fraction excluded from metrics");
  run_cmd->add_option("--snapshot-dt", run_args.snapshot_dt,
                      "Override snapshot duration in seconds");
  run_cmd->add_flag("--event-log", run_args.event_log, "Write the per-event CSV log");
  run_cmd->add_flag("--hm-dump", run_args.hm_dump, "Write per-snapshot margins CSV");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run lambda x seed x {fixed,auto} and export summary + charts");
  sweep_cmd->add_option("--scenario", sweep_args.scenario_path, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--lambdas", sweep_args.lambdas, "Arrival rates to sweep (users/s)")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Seeds for paired runs")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out_dir, "Output directory")->capture_default_str();
  sweep_cmd->add_option("--warmup-frac", sweep_args.warmup_frac,
                        "Override warm-up fraction excluded from metrics");
  sweep_cmd->add_option("--snapshot-dt", sweep_args.snapshot_dt,
                        "Override snapshot duration in seconds");
  sweep_cmd->add_option("--jobs", sweep_args.jobs,
                        "Max concurrent runs (0 = hardware concurrency)")
      ->capture_default_str();

  auto* validate_cmd =
      app.add_subcommand("validate", "Check a balancing function against the margin constraints");
  validate_cmd->add_option("--f0", validate_args.f0, "Planned margin f(0) in dB")
      ->capture_default_str();
  validate_cmd->add_option("--hm-min", validate_args.hm_min, "Minimum margin in dB")
      ->capture_default_str();
  validate_cmd->add_option("--hm-max", validate_args.hm_max, "Maximum margin in dB")
      ->capture_default_str();
  validate_cmd->add_option("--order", validate_args.order, "Development order (0 or 1)")
      ->check(CLI::Range(0, 1))
      ->capture_default_str();
  validate_cmd->add_option("--samples", validate_args.samples, "Grid points over [-1,1]")
      ->capture_default_str();
}

}  // namespace

std::string help_text() {
  CLI::App app{"", "hosim"};
  RunArgs run_args;
  SweepArgs sweep_args;
  ValidateArgs validate_args;
  build_app(app, run_args, sweep_args, validate_args);
  return app.help("", CLI::AppFormatMode::All);
}

int run_cli(std::vector<std::string> args) {
  CLI::App app{"", "hosim"};
  RunArgs run_args;
  SweepArgs sweep_args;
  ValidateArgs validate_args;
  build_app(app, run_args, sweep_args, validate_args);

  // CLI11 parses reversed argv
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand("run")) return cmd_run(run_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args);
    if (app.got_subcommand("validate")) return cmd_validate(validate_args);
    std::cout << app.help();
    return kExitOk;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args));
}

}  // namespace hosim::cli
