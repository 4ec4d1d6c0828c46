#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tllsta/observables.hpp"
#include "tllsta/protocols.hpp"

namespace tll {

enum class ProtocolFamily { coupling, gamma };
enum class SigmaKind { equal, p5 };
enum class MethodPreference { automatic, numeric, airy, both };
enum class OutputFormat { csv, json };

struct ProtocolConfig {
  ProtocolFamily family = ProtocolFamily::coupling;
  CouplingKind coupling_kind = CouplingKind::linear;
  GammaKind gamma_kind = GammaKind::p4;
  double alpha = 0.5;        // coupling ramps: final g/2pi
  double tau_q = 10.0;
  double gamma0 = 1.0;
  double gamma_f = 1.0;
  SigmaKind sigma_kind = SigmaKind::equal;
  double sigma0 = 1.0;
  double sigma_f = 1.0;
  double v0 = 5.0;           // constant potential amplitude
  double alpha_ramp = 3.0;   // linear potential slope
  double gamma_dot0 = 0.0;
  int n_index = 0;           // accidental constant: which t_n ends the protocol
};

struct GridConfig {
  double length = 100.0;
  double r0 = 1.0;
  double nu = 1.0;
  std::size_t n_max = 0;     // 0 = automatic
  std::vector<int> modes;    // modes whose trajectories are emitted; empty = all
};

struct PhysicsConfig {
  double v_f = 1.0;
  double rho0 = 0.31830988618379067;  // 1/pi, i.e. k_F = 1
  double beta0 = kPureState;
};

struct NumericsConfig {
  double tol = kDefaultTolerance;
  std::size_t samples = 201;
  MethodPreference method = MethodPreference::automatic;
  int threads = 1;
  bool wkb = false;
};

struct SweepConfig {
  std::vector<double> tau_q;
  std::vector<double> alpha;
  bool tau_in_tau0 = false;  // tau_q values are multiples of r0/(2 v_f)
  double alpha_ref = 0.0;    // normalizer alpha; 0 = first alpha
};

struct OutputConfig {
  OutputFormat format = OutputFormat::csv;
  std::string path = "out";
  int precision = 17;
};

struct RunConfig {
  std::string command = "solve";
  ProtocolConfig protocol;
  GridConfig grid;
  PhysicsConfig physics;
  NumericsConfig numerics;
  SweepConfig sweep;
  OutputConfig output;
};

// Parses the TOML-style key-value format. Unknown sections or keys, malformed
// values and invariant violations throw Error(config) whose message starts
// with the field path (e.g. "grid.r0: must be positive").
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Checks every embedded invariant; parse_config already calls it.
void validate_config(const RunConfig& config);

// Normalized form with unit comments; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

const char* to_string(MethodPreference m) noexcept;
const char* to_string(OutputFormat f) noexcept;
const char* to_string(SigmaKind s) noexcept;
const char* to_string(ProtocolFamily f) noexcept;

// Builders from a validated config.
ModeGrid grid_from(const RunConfig& config);
CouplingSchedule coupling_from(const RunConfig& config);
GammaSchedule gamma_schedule_from(const RunConfig& config);

// Figure presets stored in the library as configuration text. A preset may
// hold several runs (e.g. one per quench time); each has its own command.
struct PresetRun {
  std::string label;  // subdirectory name, empty for single-run presets
  RunConfig config;
};

std::vector<std::string> preset_ids();
std::string preset_description(const std::string& id);
std::vector<PresetRun> preset_runs(const std::string& id);

}  // namespace tll
