#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tllsta/config.hpp"

namespace tll {

// Process exit codes shared by the CLI and the C API.
enum class ExitCode : int {
  ok = 0,
  config = 2,
  numeric = 3,
  stability = 4,
};

struct RunOptions {
  std::string out_dir;                  // empty: config.output.path
  std::optional<OutputFormat> format;   // overrides config.output.format
  std::optional<int> threads;           // overrides config.numerics.threads
  std::optional<double> tol;            // overrides config.numerics.tol
  bool emit_trajectories = false;
};

struct RunResult {
  ExitCode exit_code = ExitCode::ok;
  std::string summary;              // human-readable lines, also printed by the CLI
  std::vector<std::string> files;   // written paths, in write order
};

// Each command writes its files under the output directory (created when
// missing) and never throws for numeric or stability failures: those are
// reported through exit_code and summary. Config and I/O errors propagate
// as Error(config) / Error(io).
RunResult cmd_solve(const RunConfig& config, const RunOptions& options = {});
RunResult cmd_sweep(const RunConfig& config, const RunOptions& options = {});
RunResult cmd_sta_design(const RunConfig& config, const RunOptions& options = {});
RunResult cmd_accidental(const RunConfig& config, const RunOptions& options = {});

// Dispatches on config.command.
RunResult run_command(const RunConfig& config, const RunOptions& options = {});

// Runs every configuration of a preset; the output directory defaults to the
// preset id, with one subdirectory per labelled run. Trajectories are always
// emitted. The exit code is the largest of the runs.
RunResult cmd_figure(const std::string& id, const RunOptions& options = {});

}  // namespace tll
