#include <array>
#include <string>
#include <vector>

#include "tllsta/config.hpp"
#include "tllsta/error.hpp"

namespace tll {

namespace {

struct PresetText {
  const char* label;
  const char* text;
};

struct Preset {
  const char* id;
  const char* description;
  std::vector<PresetText> runs;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig2",
       "sine-Gordon assisted drive with a suddenly opened gap: gamma P4 from 1/sqrt2 to 1, "
       "sigma P5 from sqrt2 to 2/sqrt3",
       {{"", R"(
[run]
command = "sta-design"
[protocol]
family = "gamma"
kind = "p4"
tau_q = 1
gamma0 = 0.70710678118654757
gamma_f = 1
sigma = "p5"
sigma0 = 1.4142135623730951
sigma_f = 1.1547005383792515
[numerics]
samples = 1001
)"}}},
      {"fig3",
       "accidental STA under a constant potential V0 = 10 E_F, gamma_dot0 = 10, K(0) = 1/4; "
       "time column also given in units of 1/(4 pi v_f V0 rho0)",
       {{"", R"(
[run]
command = "accidental"
[protocol]
family = "gamma"
kind = "constant_potential"
v0 = 5
gamma0 = 0.5
gamma_dot0 = 10
n_index = 0
[numerics]
samples = 1001
)"}}},
      {"fig4",
       "linear interaction ramp alpha = 0.5, tau_q = 10: Airy solution against numeric "
       "integration for modes n = 1, 10, 100, 1000",
       {{"", R"(
[run]
command = "solve"
[protocol]
family = "coupling"
kind = "linear"
alpha = 0.5
tau_q = 10
[grid]
modes = [1, 10, 100, 1000]
[numerics]
samples = 1001
method = "both"
)"}}},
      {"fig4-accidental",
       "accidental STA under a linear potential ramp alpha = 3, K(0) = 1/4",
       {{"", R"(
[run]
command = "accidental"
[protocol]
family = "gamma"
kind = "linear_potential"
alpha_ramp = 3
gamma0 = 0.5
[numerics]
samples = 1001
)"}}},
      {"fig5",
       "sine-Gordon assisted drive between gapless phases: gamma P4 from 1 to sqrt10, sigma = gamma",
       {{"", R"(
[run]
command = "sta-design"
[protocol]
family = "gamma"
kind = "p4"
tau_q = 1
gamma0 = 1
gamma_f = 3.1622776601683795
sigma = "equal"
[numerics]
samples = 1001
)"}}},
      {"fig6",
       "residual energy after a linear ramp against tau_q for alpha = 0.1, 0.25, 0.5, 1, "
       "normalized by E_gs1 of alpha = 0.1",
       {{"", R"(
[run]
command = "sweep"
[protocol]
family = "coupling"
kind = "linear"
[sweep]
alpha = [0.1, 0.25, 0.5, 1]
tau_q = [0.01, 0.021544346900318832, 0.046415888336127774, 0.1, 0.21544346900318834, 0.46415888336127775, 1, 2.1544346900318834, 4.6415888336127775, 10, 21.544346900318832, 46.415888336127772, 100]
)"}}},
      {"fig7",
       "fifth-order polynomial interaction ramp alpha = 10 for tau_q = 0.1, 1, 10",
       {{"tau0.1", R"(
[run]
command = "solve"
[protocol]
family = "coupling"
kind = "poly5"
alpha = 10
tau_q = 0.1
[grid]
modes = [1, 10, 100, 1000]
[numerics]
samples = 501
)"},
        {"tau1", R"(
[run]
command = "solve"
[protocol]
family = "coupling"
kind = "poly5"
alpha = 10
tau_q = 1
[grid]
modes = [1, 10, 100, 1000]
[numerics]
samples = 501
)"},
        {"tau10", R"(
[run]
command = "solve"
[protocol]
family = "coupling"
kind = "poly5"
alpha = 10
tau_q = 10
[grid]
modes = [1, 10, 100, 1000]
[numerics]
samples = 501
)"}}},
      {"fig8",
       "residual energy after a fifth-order polynomial ramp against tau_q for alpha = 0.1, 0.5, "
       "1, 10, normalized by the sudden-minus-adiabatic gap of alpha = 0.1",
       {{"", R"(
[run]
command = "sweep"
[protocol]
family = "coupling"
kind = "poly5"
[sweep]
alpha = [0.1, 0.5, 1, 10]
tau_q = [0.01, 0.021544346900318832, 0.046415888336127774, 0.1, 0.21544346900318834, 0.46415888336127775, 1, 2.1544346900318834, 4.6415888336127775, 10, 21.544346900318832, 46.415888336127772, 100]
)"}}},
  };
  return table;
}

const Preset& find_preset(const std::string& id) {
  for (const Preset& p : presets()) {
    if (id == p.id) return p;
  }
  std::string known;
  for (const Preset& p : presets()) known += std::string(known.empty() ? "" : ", ") + p.id;
  fail(ErrorCode::config, "figure: unknown preset '" + id + "' (known: " + known + ")");
}

}  // namespace

std::vector<std::string> preset_ids() {
  std::vector<std::string> ids;
  for (const Preset& p : presets()) ids.emplace_back(p.id);
  return ids;
}

std::string preset_description(const std::string& id) { return find_preset(id).description; }

std::vector<PresetRun> preset_runs(const std::string& id) {
  const Preset& preset = find_preset(id);
  std::vector<PresetRun> runs;
  for (const PresetText& run : preset.runs) {
    RunConfig config = parse_config(run.text);
    config.output.path = run.label[0] == '\0' ? id : id + "/" + run.label;
    runs.push_back({run.label, std::move(config)});
  }
  return runs;
}

}  // namespace tll
