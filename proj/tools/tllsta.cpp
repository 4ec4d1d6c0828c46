#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "tllsta/tllsta.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int report_status(tll_status status) {
  std::fprintf(stderr, "tllsta: %s: %s\n", tll_status_string(status), tll_last_error());
  return status == TLL_E_CONFIG || status == TLL_E_IO ? kExitConfig : kExitNumeric;
}

int finish(tll_status status, tll_result* result) {
  if (status != TLL_OK) return report_status(status);
  std::fputs(tll_result_summary(result), stdout);
  for (size_t i = 0; i < tll_result_file_count(result); ++i) {
    std::printf("wrote %s\n", tll_result_file(result, i));
  }
  const int code = tll_result_exit_code(result);
  tll_result_free(result);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-time dynamics and shortcuts to adiabaticity in driven Luttinger liquids"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string format;
  int threads = 0;
  double tol = 0.0;
  bool emit_trajectories = false;
  app.add_option("--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--tol", tol, "Integrator tolerance")->check(CLI::Range(1e-12, 1e-4));
  app.add_flag("--emit-trajectories", emit_trajectories, "Write per-mode trajectories");

  const char* commands[] = {"solve", "sweep", "sta-design", "accidental"};
  const char* help[] = {"Solve every mode of one protocol and report energies",
                        "Residual energy over a list of quench times and/or couplings",
                        "Sample a sine-Gordon assisted schedule and certify it",
                        "Find accidental shortcut times for a lattice potential"};
  for (int i = 0; i < 4; ++i) app.add_subcommand(commands[i], help[i]);

  std::string figure_id;
  bool list = false;
  CLI::App* figure = app.add_subcommand("figure", "Reproduce the data of a stored figure preset");
  figure->add_option("id", figure_id, "Preset id");
  figure->add_flag("--list", list, "List preset ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  tll_run_options options;
  tll_run_options_init(&options);
  if (!out_dir.empty()) options.out_dir = out_dir.c_str();
  if (format == "csv") options.format = TLL_FORMAT_CSV;
  if (format == "json") options.format = TLL_FORMAT_JSON;
  options.threads = threads;
  options.tol = tol;
  options.emit_trajectories = emit_trajectories ? 1 : 0;

  tll_result* result = nullptr;
  if (figure->parsed()) {
    if (list || figure_id.empty()) {
      for (size_t i = 0; i < tll_preset_count(); ++i) {
        std::printf("%-16s %s\n", tll_preset_id(i), tll_preset_description(tll_preset_id(i)));
      }
      return list ? 0 : kExitConfig;
    }
    if (!config_path.empty()) {
      std::fprintf(stderr, "tllsta: figure presets carry their own configuration; --config is ignored\n");
    }
    const tll_status figure_status = tll_run_figure(figure_id.c_str(), &options, &result);
    return finish(figure_status, result);
  }

  tll_config* config = nullptr;
  tll_status status = config_path.empty() ? tll_config_default(&config)
                                          : tll_config_load(config_path.c_str(), &config);
  if (status != TLL_OK) return report_status(status);
  const std::string command = app.get_subcommands().front()->get_name();
  status = tll_run(config, command.c_str(), &options, &result);
  tll_config_free(config);
  return finish(status, result);
}
