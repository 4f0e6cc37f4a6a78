#include "stoplab/commands.hpp"

#include <chrono>
#include <csignal>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "stoplab/asymptotics.hpp"
#include "stoplab/diagnostics.hpp"
#include "stoplab/error.hpp"
#include "stoplab/monte_carlo.hpp"
#include "stoplab/service/http_api.hpp"
#include "stoplab/service/session_service.hpp"
#include "stoplab/session_log.hpp"
#include "stoplab/solve_report.hpp"
#include "stoplab/solver.hpp"

namespace stoplab::cli {
namespace {

int exit_code_for(ErrorCode code) { return code == ErrorCode::kIo ? kExitIo : kExitValidation; }

/// Writes to --output when given, else to `out`.
template <typename F>
int with_output(const CommandConfig& config, std::ostream& out, std::ostream& err, F render) {
  if (config.output.empty()) {
    render(out);
    return kExitOk;
  }
  std::ofstream file(config.output);
  if (!file) {
    err << "error: cannot open " << config.output.string() << " for writing\n";
    return kExitIo;
  }
  render(file);
  file.flush();
  if (!file) {
    err << "error: failed writing " << config.output.string() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

template <typename F>
int guarded(std::ostream& err, F body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

double z_score(double estimate, double predicted, double se) {
  if (se > 0.0) return (estimate - predicted) / se;
  return estimate == predicted ? 0.0 : std::copysign(INFINITY, estimate - predicted);
}

struct Prediction {
  std::string name;
  double estimate;
  double standard_error;
  double predicted;
};

std::vector<Prediction> predictions(const MonteCarloReport& r) {
  const auto exact = evaluate_threshold(r.params, r.n, r.threshold);
  const auto limits = asymptotics(r.params);
  return {
      {"p_win_vs_exact", r.win.estimate, r.win.standard_error, exact.p_win},
      {"p_win_vs_asymptotic", r.win.estimate, r.win.standard_error, limits.p_win},
      {"p_wrong_vs_exact", r.wrong.estimate, r.wrong.standard_error, exact.p_wrong},
      {"p_nopick_vs_exact", r.nopick.estimate, r.nopick.standard_error, exact.p_nopick},
      {"duration_vs_exact", r.duration.mean, r.duration.standard_error, exact.expected_duration},
      {"payoff_vs_exact", r.payoff.mean, r.payoff.standard_error, exact.expected_payoff},
  };
}

void render_simulate_table(std::ostream& out, const MonteCarloReport& r) {
  out << std::setprecision(6);
  out << "n " << r.n << "  threshold " << r.threshold << "  trials " << r.trials << "  seed "
      << r.seed << "\n";
  out << "alpha " << r.params.alpha << "  beta " << r.params.beta << "  gamma " << r.params.gamma
      << "\n\n";
  out << std::left << std::setw(22) << "quantity" << std::right << std::setw(14) << "estimate"
      << std::setw(14) << "std_error" << std::setw(14) << "predicted" << std::setw(10) << "z"
      << "\n";
  for (const auto& p : predictions(r)) {
    out << std::left << std::setw(22) << p.name << std::right << std::setw(14) << p.estimate
        << std::setw(14) << p.standard_error << std::setw(14) << p.predicted << std::setw(10)
        << std::fixed << std::setprecision(3) << z_score(p.estimate, p.predicted, p.standard_error)
        << std::defaultfloat << std::setprecision(6) << "\n";
  }
}

Json simulate_json(const MonteCarloReport& r) {
  Json j = report_to_json(r);
  Json preds = Json::array();
  for (const auto& p : predictions(r)) {
    Json item;
    item["quantity"] = p.name;
    item["estimate"] = p.estimate;
    item["standard_error"] = p.standard_error;
    item["predicted"] = p.predicted;
    item["z"] = z_score(p.estimate, p.predicted, p.standard_error);
    preds.push_back(std::move(item));
  }
  j["predictions"] = std::move(preds);
  return j;
}

void render_simulate_csv(std::ostream& out, const MonteCarloReport& r) {
  out << "quantity,estimate,standard_error,predicted,z\n" << std::setprecision(17);
  for (const auto& p : predictions(r)) {
    out << p.name << ',' << p.estimate << ',' << p.standard_error << ',' << p.predicted << ','
        << z_score(p.estimate, p.predicted, p.standard_error) << '\n';
  }
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

}  // namespace

std::atomic<bool>& interrupt_flag() { return g_interrupted; }

void install_signal_handlers() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
}

int solve_command(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.params.validate();
    if (config.n < 1) fail(ErrorCode::kInvalidArgument, "--n must be >= 1");
    const auto report = make_solve_report(config.params, config.n);
    return with_output(config, out, err, [&](std::ostream& o) {
      switch (config.format) {
        case Format::kTable: render_solve_table(o, report); break;
        case Format::kJson: o << solve_report_to_json(report, true).dump(2) << "\n"; break;
        case Format::kCsv: render_solve_csv(o, report); break;
      }
    });
  });
}

int simulate_command(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.params.validate();
    if (config.n < 1) fail(ErrorCode::kInvalidArgument, "--n must be >= 1");
    if (config.trials < 1) fail(ErrorCode::kInvalidArgument, "--trials must be >= 1");
    MonteCarloOptions options;
    options.threshold = config.threshold;
    options.threads = config.threads;
    const auto report = monte_carlo(config.params, config.n, config.trials, config.seed, options);
    return with_output(config, out, err, [&](std::ostream& o) {
      switch (config.format) {
        case Format::kTable: render_simulate_table(o, report); break;
        case Format::kJson: o << simulate_json(report).dump(2) << "\n"; break;
        case Format::kCsv: render_simulate_csv(o, report); break;
      }
    });
  });
}

int analyze_command(const CommandConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.format == Format::kCsv) fail(ErrorCode::kInvalidArgument, "analyze supports table or json");
    std::ifstream in(config.input);
    if (!in) fail(ErrorCode::kIo, "cannot open " + config.input.string());
    const auto log = read_session_log(in);
    for (const auto& e : log.errors) {
      err << config.input.string() << ":" << e.line << ": " << e.message << "\n";
    }

    std::vector<SessionRecord> finalized;
    for (const auto& r : log.records) {
      if (r.state == SessionState::kFinalized) finalized.push_back(r);
    }
    if (config.n > 0) {
      std::erase_if(finalized, [&](const SessionRecord& r) { return r.config.n != config.n; });
    }

    const auto stats = summarize(finalized);
    std::optional<DiagnosticReport> report;
    if (!finalized.empty()) {
      const PayoffParams params = config.params_given ? config.params : finalized.front().config.params;
      report = deviation_report(finalized, params, finalized.front().config.n);
    }

    const int written = with_output(config, out, err, [&](std::ostream& o) {
      if (config.format == Format::kJson) {
        o << (report ? report_to_json(*report) : Json{{"stats", stats_to_json(stats)}}).dump(2)
          << "\n";
      } else if (report) {
        render_report_table(o, *report);
      } else {
        render_stats_table(o, stats);
      }
    });
    if (written != kExitOk) return written;
    if (!log.errors.empty()) {
      err << log.errors.size() << " malformed line(s) in " << config.input.string() << "\n";
      return kExitValidation;
    }
    return kExitOk;
  });
}

int serve_command(const CommandConfig& config, std::ostream& out, std::ostream& err,
                  const std::atomic<bool>& stop, void (*on_ready)(int)) {
  return guarded(err, [&] {
    if (config.port < 0 || config.port > 65535) {
      fail(ErrorCode::kInvalidArgument, "port must be in 0..65535");
    }
    service::SessionService sessions({config.log_dir, config.horizon_cap});
    service::HttpApi api(sessions, {config.host, config.port});
    const int port = api.bind();
    api.start();
    out << "listening on " << config.host << ":" << port << " (log " << config.log_dir.string()
        << ")\n"
        << std::flush;
    if (on_ready) on_ready(port);
    while (!stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    api.stop();
    sessions.shutdown();
    out << "shut down; journal flushed\n" << std::flush;
    return kExitOk;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"stoplab: penalized secretary problem lab"};
  app.require_subcommand(1);
  CommandConfig config;

  const std::map<std::string, Format> formats{
      {"table", Format::kTable}, {"json", Format::kJson}, {"csv", Format::kCsv}};

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--alpha", config.params.alpha, "Reward for picking the best (> 0)");
    sub->add_option("--beta", config.params.beta, "Penalty for a wrong pick (>= 0)");
    sub->add_option("--gamma", config.params.gamma, "Cost per observation (>= 0)");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", config.format, "table | json | csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("-o,--output", config.output, "Write to this file instead of stdout");
  };

  auto* solve = app.add_subcommand("solve", "Threshold, value tables and asymptotics");
  add_params(solve);
  solve->add_option("--n", config.n, "Horizon")->required();
  add_format(solve);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo of a threshold rule");
  add_params(simulate);
  simulate->add_option("--n", config.n, "Horizon")->required();
  simulate->add_option("--trials", config.trials, "Number of trials");
  simulate->add_option("--seed", config.seed, "Master seed");
  simulate->add_option("--threshold", config.threshold, "Threshold r (default: optimal k*)");
  simulate->add_option("--threads", config.threads, "Worker threads (0: all cores)");
  add_format(simulate);

  auto* analyze = app.add_subcommand("analyze", "Statistics and threshold fit from a session log");
  add_params(analyze);
  analyze->add_option("input", config.input, "JSONL log (journal or exported records)")->required();
  analyze->add_option("--n", config.n, "Only sessions with this horizon");
  add_format(analyze);

  auto* serve = app.add_subcommand("serve", "Run the experiment HTTP API");
  serve->add_option("--host", config.host, "Bind address")->envname("STOPLAB_HOST");
  serve->add_option("--port", config.port, "Port (0: ephemeral)")->envname("STOPLAB_PORT");
  serve->add_option("--log-dir", config.log_dir, "Journal directory")->envname("STOPLAB_LOG_DIR");
  serve->add_option("--horizon-cap", config.horizon_cap, "Largest n a session may use")
      ->envname("STOPLAB_HORIZON_CAP");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  for (const char* name : {"--alpha", "--beta", "--gamma"}) {
    for (auto* sub : {solve, simulate, analyze}) {
      if (sub->parsed() && sub->count(name) > 0) config.params_given = true;
    }
  }

  if (solve->parsed()) return solve_command(config, out, err);
  if (simulate->parsed()) return simulate_command(config, out, err);
  if (analyze->parsed()) return analyze_command(config, out, err);
  g_interrupted.store(false);
  return serve_command(config, out, err, g_interrupted);
}

}  // namespace stoplab::cli
