#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stoplab/payoff.hpp"

namespace stoplab::cli {

enum class Format { kTable, kJson, kCsv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

struct CommandConfig {
  std::string subcommand;
  PayoffParams params;
  /// Set when any of --alpha/--beta/--gamma was given.
  bool params_given = false;
  int n = 0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::optional<int> threshold;
  unsigned threads = 0;
  std::filesystem::path input;
  std::filesystem::path output;
  Format format = Format::kTable;

  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path log_dir = "stoplab-logs";
  int horizon_cap = 500;
};

int solve_command(const CommandConfig& config, std::ostream& out, std::ostream& err);
int simulate_command(const CommandConfig& config, std::ostream& out, std::ostream& err);
int analyze_command(const CommandConfig& config, std::ostream& out, std::ostream& err);

/// Serves until `stop` becomes true, then flushes the journal. `on_ready`, if
/// set, receives the bound port.
int serve_command(const CommandConfig& config, std::ostream& out, std::ostream& err,
                  const std::atomic<bool>& stop, void (*on_ready)(int port) = nullptr);

/// Parses arguments and dispatches. argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Set by SIGINT/SIGTERM while serve is running.
std::atomic<bool>& interrupt_flag();
void install_signal_handlers();

}  // namespace stoplab::cli
