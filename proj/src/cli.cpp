#include "rwr/cli.hpp"

#include <signal.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwr/agents.hpp"
#include "rwr/analysis.hpp"
#include "rwr/error.hpp"
#include "rwr/http_server.hpp"
#include "rwr/log.hpp"
#include "rwr/report.hpp"
#include "rwr/rng.hpp"
#include "rwr/service.hpp"

namespace rwr::cli {

namespace {

namespace fs = std::filesystem;

struct ServeOptions {
  std::string data_dir = "data";
  std::string host = "127.0.0.1";
  int port = 8080;
  int idle_timeout_min = 60;
  std::string rule = "designated_successor:1";
};

struct SimulateOptions {
  std::string preset = "solver";
  std::uint64_t runs = 100;
  std::uint64_t seed = 1;
  std::string out_dir = "simulations";
  std::string rule = "designated_successor:1";
  std::optional<int> max_clicks;
};

struct BaselineOptions {
  std::string rule = "designated_successor:1";
  std::uint64_t sets = 1'000'000;
  std::uint64_t seed = 1;
};

struct AnalyzeOptions {
  std::vector<std::string> logs;
  std::optional<double> closing_fraction;
  std::optional<int> window;
  std::optional<double> reference;
  std::string format = "json";
  std::string out;
  std::string table;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::IoError:
    case ErrorCode::BindFailure:
    case ErrorCode::DataDirUnwritable: return kExitIo;
    case ErrorCode::InvalidRule:
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::EvenWindow: return kExitUsage;
    default: return kExitAnalysis;
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  ServiceConfig config;
  config.data_dir = options.data_dir;
  config.idle_timeout = std::chrono::minutes(options.idle_timeout_min);
  config.default_rule = parse_rule(options.rule);
  SessionService service(config);
  HttpServer server(service);

  // SIGINT/SIGTERM go to a watcher thread that stops the server.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = server.bind(options.host, options.port);
  out << fmt::format("rwr serve listening on {}:{} data_dir={} rule={}\n", options.host, port,
                     options.data_dir, to_string(config.default_rule))
      << std::flush;

  std::thread watcher([&] {
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
  });
  server.serve();
  // Wake the watcher if serve() returned by itself.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  (void)err;
  return kExitOk;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out) {
  const RightnessRule rule = parse_rule(options.rule);
  const fs::path dir = options.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string());

  const Rng root(options.seed);
  int solved = 0;
  std::vector<std::optional<double>> increments;
  for (std::uint64_t i = 0; i < options.runs; ++i) {
    AgentConfig config = preset_by_name(options.preset, root.split(i).seed());
    if (options.max_clicks) config.max_clicks = *options.max_clicks;
    const AgentRun run = run_agent(rule, config);
    write_file(dir / fmt::format("run-{:04d}.rwrlog", i), format_log(run.log()));
    solved += run.solved ? 1 : 0;

    const ErrorRunSeries series = extract_runs(run.events);
    if (series.runs.size() >= 2) {
      increments.push_back(
          mean_increment(phase_portrait(series, default_smoothing_window(series.runs.size()))));
    } else {
      increments.push_back(std::nullopt);
    }
  }

  nlohmann::ordered_json summary;
  summary["preset"] = options.preset;
  summary["rule"] = to_string(rule);
  summary["seed"] = options.seed;
  summary["runs"] = options.runs;
  summary["solved"] = solved;
  const double solve_rate = options.runs == 0 ? 0.0 : static_cast<double>(solved) / static_cast<double>(options.runs);
  summary["solve_rate"] = options.runs == 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(solve_rate);
  nlohmann::ordered_json inc;
  std::vector<double> values;
  nlohmann::ordered_json per_run = nlohmann::ordered_json::array();
  for (const auto& v : increments) {
    per_run.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
    if (v) values.push_back(*v);
  }
  if (values.empty()) {
    inc["mean"] = nullptr;
    inc["min"] = nullptr;
    inc["max"] = nullptr;
  } else {
    double sum = 0.0;
    for (const double v : values) sum += v;
    inc["mean"] = sum / static_cast<double>(values.size());
    inc["min"] = *std::min_element(values.begin(), values.end());
    inc["max"] = *std::max_element(values.begin(), values.end());
  }
  inc["count"] = values.size();
  inc["per_run"] = std::move(per_run);
  summary["mean_increment"] = std::move(inc);
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  out << fmt::format("simulate preset={} runs={} seed={} solved={} solve_rate={}\n", options.preset,
                     options.runs, options.seed, solved,
                     options.runs == 0 ? std::string("n/a") : fmt::format("{:.6f}", solve_rate));
  return kExitOk;
}

int cmd_baseline(const BaselineOptions& options, std::ostream& out) {
  if (options.sets < 1) throw Error(ErrorCode::InvalidConfig, "--sets must be >= 1");
  const RightnessRule rule = parse_rule(options.rule);
  Rng rng(options.seed);
  const BaselineStats stats = baseline_monte_carlo(rule, options.sets, rng);
  out << format_baseline_table(rule, options.sets, options.seed, stats);
  return kExitOk;
}

std::string batch_table(const std::vector<SessionAnalysis>& analyses) {
  std::string table = fmt::format("{:<20} {:>8} {:>7} {:>7}\n", "ID", "minutes", "clicks", "solved");
  for (const auto& a : analyses) {
    table += fmt::format("{:<20} {:>8.1f} {:>7} {:>7}\n", a.header.session_id, a.elapsed_minutes,
                         a.total_clicks, a.series.solved ? "yes" : "no");
  }
  return table;
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  const ReportFormat format = parse_report_format(options.format);
  AnalysisOptions analysis_options;
  analysis_options.closing_fraction = options.closing_fraction;
  analysis_options.smoothing_window = options.window;
  if (options.reference) analysis_options.reference_errors = *options.reference;

  std::vector<SessionAnalysis> analyses;
  int status = kExitOk;
  for (const auto& path : options.logs) {
    try {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error(ErrorCode::IoError, "cannot open file");
      analyses.push_back(analyze_session(parse_log(in), analysis_options));
    } catch (const Error& e) {
      err << fmt::format("{}: {}: {}\n", path, to_string(e.code()), e.what());
      status = std::max(status, exit_code_for(e) == kExitIo ? kExitIo : kExitAnalysis);
    }
  }
  if (analyses.empty()) return status == kExitOk ? kExitAnalysis : status;

  const std::string report = emit_report(analyses, format);
  const std::string table = batch_table(analyses);
  if (options.out.empty()) {
    out << report;
  } else {
    write_file(options.out, report);
    out << table;
  }
  if (!options.table.empty()) write_file(options.table, table);
  return status;
}

}  // namespace

std::string format_baseline_table(const RightnessRule& rule, std::uint64_t n_sets,
                                  std::uint64_t seed, const BaselineStats& mc) {
  std::optional<BaselineStats> analytic;
  if (rule.kind == RuleKind::DesignatedSuccessor) analytic = baseline_analytic(rule);

  const auto tail = [](const BaselineStats& s) {
    double sum = 0.0;
    for (int k = 4; k < kSetSize; ++k) sum += s.p_right_count[k];
    return sum;
  };
  const auto row = [&](std::string_view name, double monte_carlo, std::optional<double> exact,
                       double reported) {
    return fmt::format("{:<20} {:>12.6f} {:>12} {:>8}\n", name, monte_carlo,
                       exact ? fmt::format("{:.6f}", *exact) : std::string("n/a"), reported);
  };

  std::string text = fmt::format("baseline rule={} sets={} seed={}\n", to_string(rule), n_sets, seed);
  text += fmt::format("{:<20} {:>12} {:>12} {:>8}\n", "quantity", "monte_carlo", "analytic", "reported");
  for (int k = 0; k < 4; ++k) {
    text += row(fmt::format("p_{}", k + 1), mc.p_right_count[k],
                analytic ? std::optional<double>(analytic->p_right_count[k]) : std::nullopt,
                ReportedBaseline::p[k]);
  }
  text += row("p_5+", tail(mc), analytic ? std::optional<double>(tail(*analytic)) : std::nullopt,
              ReportedBaseline::p[4]);
  text += row("mean_right", mc.mean_right,
              analytic ? std::optional<double>(analytic->mean_right) : std::nullopt,
              ReportedBaseline::mean_right);
  text += row("mean_errors_random", mc.mean_errors_random,
              analytic ? std::optional<double>(analytic->mean_errors_random) : std::nullopt,
              ReportedBaseline::mean_errors_random);
  return text;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Right-Wrong Responder task host and analysis tools", "rwr"};
  app.require_subcommand(1);

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Host the dialogue over HTTP");
  serve_cmd->add_option("--data-dir", serve.data_dir, "Directory for per-session logs")->capture_default_str();
  serve_cmd->add_option("--host", serve.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Bind port")->capture_default_str()->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--idle-timeout-min", serve.idle_timeout_min, "Minutes of inactivity before a session is abandoned")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  serve_cmd->add_option("--rule", serve.rule, "Default rightness rule")->capture_default_str();

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run simulated participants");
  simulate_cmd->add_option("--preset", simulate.preset, "random | solver | non-solver")
      ->capture_default_str()
      ->check(CLI::IsMember({"random", "solver", "non-solver"}));
  simulate_cmd->add_option("--runs", simulate.runs, "Number of runs")->capture_default_str();
  simulate_cmd->add_option("--seed", simulate.seed, "Ensemble seed")->capture_default_str();
  simulate_cmd->add_option("--out-dir", simulate.out_dir, "Output directory")->capture_default_str();
  simulate_cmd->add_option("--rule", simulate.rule, "Rightness rule")->capture_default_str();
  simulate_cmd->add_option("--max-clicks", simulate.max_clicks, "Override the preset click budget");

  BaselineOptions baseline;
  auto* baseline_cmd = app.add_subcommand("baseline", "Generator statistics and random-clicking baseline");
  baseline_cmd->add_option("--rule", baseline.rule, "Rightness rule")->capture_default_str();
  baseline_cmd->add_option("--sets", baseline.sets, "Monte Carlo sample size")->capture_default_str();
  baseline_cmd->add_option("--seed", baseline.seed, "Monte Carlo seed")->capture_default_str();

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze RWRLOG files into reports");
  analyze_cmd->add_option("logs", analyze.logs, "RWRLOG files")->required();
  analyze_cmd->add_option("--closing-fraction", analyze.closing_fraction, "Share of clicks in the closing phase");
  analyze_cmd->add_option("--window", analyze.window, "Smoothing window (odd, 1 = none)");
  analyze_cmd->add_option("--reference", analyze.reference, "Reference error level for the CI check");
  analyze_cmd->add_option("--format", analyze.format, "csv | svg | json")->capture_default_str();
  analyze_cmd->add_option("--out", analyze.out, "Report file (default stdout)");
  analyze_cmd->add_option("--table", analyze.table, "Write the batch table to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*serve_cmd) return cmd_serve(serve, out, err);
    if (*simulate_cmd) return cmd_simulate(simulate, out);
    if (*baseline_cmd) return cmd_baseline(baseline, out);
    if (*analyze_cmd) return cmd_analyze(analyze, out, err);
  } catch (const Error& e) {
    err << fmt::format("error: {}: {}\n", to_string(e.code()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace rwr::cli
