#include "tllsta/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "tllsta/error.hpp"

namespace tll {

namespace {

using Array = std::vector<double>;
using Value = std::variant<double, std::string, bool, Array>;

struct Entry {
  Value value;
  int line = 0;
  bool used = false;
};

using Table = std::map<std::string, std::map<std::string, Entry>>;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::config, path + ": " + what);
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& text, double& out) {
  if (text == "inf" || text == "+inf") {
    out = INFINITY;
    return true;
  }
  if (text.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && errno != ERANGE && std::isfinite(out);
}

Value parse_value(const std::string& text, const std::string& path, int line) {
  auto where = [&] { return " (line " + std::to_string(line) + ")"; };
  if (text.empty()) config_error(path, "missing value" + where());
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') config_error(path, "unterminated string" + where());
    return text.substr(1, text.size() - 2);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '[') {
    if (text.back() != ']') config_error(path, "unterminated array" + where());
    Array values;
    const std::string body = trim(std::string_view(text).substr(1, text.size() - 2));
    if (body.empty()) return values;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      const std::string t = trim(item);
      if (!parse_number(t, v)) config_error(path, "array element '" + t + "' is not a number" + where());
      values.push_back(v);
    }
    return values;
  }
  double v = 0.0;
  if (!parse_number(text, v)) config_error(path, "'" + text + "' is not a number, string, bool or array" + where());
  return v;
}

Table parse_table(std::string_view text) {
  Table table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(strip_comment(raw));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') {
        fail(ErrorCode::config, "line " + std::to_string(line) + ": malformed section header");
      }
      section = trim(std::string_view(content).substr(1, content.size() - 2));
      table[section];
      continue;
    }
    const std::size_t eq = content.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::config, "line " + std::to_string(line) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string path = section.empty() ? key : section + "." + key;
    if (key.empty()) fail(ErrorCode::config, "line " + std::to_string(line) + ": empty key");
    auto& slot = table[section];
    if (slot.count(key)) config_error(path, "duplicate key (line " + std::to_string(line) + ")");
    slot[key] = Entry{parse_value(trim(std::string_view(content).substr(eq + 1)), path, line), line,
                      false};
  }
  return table;
}

class Reader {
 public:
  explicit Reader(Table table) : table_(std::move(table)) {}

  Entry* find(const std::string& section, const std::string& key) {
    auto s = table_.find(section);
    if (s == table_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  void number(const std::string& section, const std::string& key, double& out) {
    if (Entry* e = find(section, key)) {
      if (auto* v = std::get_if<double>(&e->value)) {
        out = *v;
      } else {
        config_error(section + "." + key, "expected a number");
      }
    }
  }

  void integer(const std::string& section, const std::string& key, long long& out) {
    double v = static_cast<double>(out);
    number(section, key, v);
    if (v != std::floor(v) || std::fabs(v) > 1e15) {
      config_error(section + "." + key, "expected an integer");
    }
    out = static_cast<long long>(v);
  }

  void string(const std::string& section, const std::string& key, std::string& out) {
    if (Entry* e = find(section, key)) {
      if (auto* v = std::get_if<std::string>(&e->value)) {
        out = *v;
      } else {
        config_error(section + "." + key, "expected a string");
      }
    }
  }

  void boolean(const std::string& section, const std::string& key, bool& out) {
    if (Entry* e = find(section, key)) {
      if (auto* v = std::get_if<bool>(&e->value)) {
        out = *v;
      } else {
        config_error(section + "." + key, "expected true or false");
      }
    }
  }

  void array(const std::string& section, const std::string& key, Array& out) {
    if (Entry* e = find(section, key)) {
      if (auto* v = std::get_if<Array>(&e->value)) {
        out = *v;
      } else if (auto* d = std::get_if<double>(&e->value)) {
        out = {*d};
      } else {
        config_error(section + "." + key, "expected an array of numbers");
      }
    }
  }

  void check_unused() const {
    static const char* known[] = {"run", "protocol", "grid", "physics", "numerics", "sweep", "output"};
    for (const auto& [section, keys] : table_) {
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) fail(ErrorCode::config, "[" + section + "]: unknown section");
      for (const auto& [key, entry] : keys) {
        if (!entry.used) {
          config_error(section + "." + key, "unknown key (line " + std::to_string(entry.line) + ")");
        }
      }
    }
  }

 private:
  Table table_;
};

template <typename Fn>
auto as_config_error(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    const std::string what = e.what();
    if (e.code() == ErrorCode::config && what.rfind(path + ":", 0) == 0) throw;
    config_error(path, what);
  }
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string format_array(const Array& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out + "]";
}

}  // namespace

const char* to_string(MethodPreference m) noexcept {
  switch (m) {
    case MethodPreference::automatic: return "auto";
    case MethodPreference::numeric: return "numeric";
    case MethodPreference::airy: return "airy";
    case MethodPreference::both: return "both";
  }
  return "auto";
}

const char* to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

const char* to_string(SigmaKind s) noexcept { return s == SigmaKind::equal ? "equal" : "p5"; }

const char* to_string(ProtocolFamily f) noexcept {
  return f == ProtocolFamily::coupling ? "coupling" : "gamma";
}

RunConfig parse_config(std::string_view text) {
  Reader r(parse_table(text));
  RunConfig c;

  r.string("run", "command", c.command);

  std::string family = to_string(c.protocol.family);
  r.string("protocol", "family", family);
  if (family == "coupling") {
    c.protocol.family = ProtocolFamily::coupling;
  } else if (family == "gamma") {
    c.protocol.family = ProtocolFamily::gamma;
  } else {
    config_error("protocol.family", "expected \"coupling\" or \"gamma\"");
  }
  std::string kind = c.protocol.family == ProtocolFamily::coupling
                         ? to_string(c.protocol.coupling_kind)
                         : to_string(c.protocol.gamma_kind);
  r.string("protocol", "kind", kind);
  as_config_error("protocol.kind", [&] {
    if (c.protocol.family == ProtocolFamily::coupling) {
      c.protocol.coupling_kind = coupling_kind_from_string(kind);
    } else {
      c.protocol.gamma_kind = gamma_kind_from_string(kind);
    }
  });
  r.number("protocol", "alpha", c.protocol.alpha);
  r.number("protocol", "tau_q", c.protocol.tau_q);
  r.number("protocol", "gamma0", c.protocol.gamma0);
  r.number("protocol", "gamma_f", c.protocol.gamma_f);
  std::string sigma = to_string(c.protocol.sigma_kind);
  r.string("protocol", "sigma", sigma);
  if (sigma == "equal") {
    c.protocol.sigma_kind = SigmaKind::equal;
  } else if (sigma == "p5") {
    c.protocol.sigma_kind = SigmaKind::p5;
  } else {
    config_error("protocol.sigma", "expected \"equal\" or \"p5\"");
  }
  r.number("protocol", "sigma0", c.protocol.sigma0);
  r.number("protocol", "sigma_f", c.protocol.sigma_f);
  r.number("protocol", "v0", c.protocol.v0);
  r.number("protocol", "alpha_ramp", c.protocol.alpha_ramp);
  r.number("protocol", "gamma_dot0", c.protocol.gamma_dot0);
  long long n_index = c.protocol.n_index;
  r.integer("protocol", "n_index", n_index);
  c.protocol.n_index = static_cast<int>(n_index);

  r.number("grid", "length", c.grid.length);
  r.number("grid", "r0", c.grid.r0);
  r.number("grid", "nu", c.grid.nu);
  long long n_max = static_cast<long long>(c.grid.n_max);
  r.integer("grid", "n_max", n_max);
  if (n_max < 0) config_error("grid.n_max", "must be >= 0");
  c.grid.n_max = static_cast<std::size_t>(n_max);
  Array modes;
  r.array("grid", "modes", modes);
  for (double m : modes) {
    if (m != std::floor(m) || m < 1 || m > 1e9) config_error("grid.modes", "entries must be integers >= 1");
    c.grid.modes.push_back(static_cast<int>(m));
  }

  r.number("physics", "v_f", c.physics.v_f);
  r.number("physics", "rho0", c.physics.rho0);
  r.number("physics", "beta0", c.physics.beta0);

  r.number("numerics", "tol", c.numerics.tol);
  long long samples = static_cast<long long>(c.numerics.samples);
  r.integer("numerics", "samples", samples);
  if (samples < 2) config_error("numerics.samples", "must be >= 2");
  c.numerics.samples = static_cast<std::size_t>(samples);
  std::string method = to_string(c.numerics.method);
  r.string("numerics", "method", method);
  if (method == "auto") {
    c.numerics.method = MethodPreference::automatic;
  } else if (method == "numeric") {
    c.numerics.method = MethodPreference::numeric;
  } else if (method == "airy") {
    c.numerics.method = MethodPreference::airy;
  } else if (method == "both") {
    c.numerics.method = MethodPreference::both;
  } else {
    config_error("numerics.method", "expected auto, numeric, airy or both");
  }
  long long threads = c.numerics.threads;
  r.integer("numerics", "threads", threads);
  if (threads < 1 || threads > 1024) config_error("numerics.threads", "must lie in [1, 1024]");
  c.numerics.threads = static_cast<int>(threads);
  r.boolean("numerics", "wkb", c.numerics.wkb);

  r.array("sweep", "tau_q", c.sweep.tau_q);
  r.array("sweep", "alpha", c.sweep.alpha);
  std::string unit = c.sweep.tau_in_tau0 ? "tau0" : "time";
  r.string("sweep", "tau_unit", unit);
  if (unit == "tau0") {
    c.sweep.tau_in_tau0 = true;
  } else if (unit == "time") {
    c.sweep.tau_in_tau0 = false;
  } else {
    config_error("sweep.tau_unit", "expected \"time\" or \"tau0\"");
  }
  r.number("sweep", "alpha_ref", c.sweep.alpha_ref);

  std::string format = to_string(c.output.format);
  r.string("output", "format", format);
  if (format == "csv") {
    c.output.format = OutputFormat::csv;
  } else if (format == "json") {
    c.output.format = OutputFormat::json;
  } else {
    config_error("output.format", "expected \"csv\" or \"json\"");
  }
  r.string("output", "path", c.output.path);
  long long precision = c.output.precision;
  r.integer("output", "precision", precision);
  if (precision < 1 || precision > 17) config_error("output.precision", "must lie in [1, 17]");
  c.output.precision = static_cast<int>(precision);

  r.check_unused();
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::config, path + ": cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  if (c.command != "solve" && c.command != "sweep" && c.command != "sta-design" &&
      c.command != "accidental") {
    config_error("run.command", "expected solve, sweep, sta-design or accidental");
  }
  const PhysicsConfig& ph = c.physics;
  if (!(std::isfinite(ph.v_f) && ph.v_f > 0.0)) config_error("physics.v_f", "must be positive");
  if (!(std::isfinite(ph.rho0) && ph.rho0 > 0.0)) config_error("physics.rho0", "must be positive");
  if (!(ph.beta0 > 0.0)) config_error("physics.beta0", "must be positive (inf for a pure state)");

  if (!(std::isfinite(c.grid.length) && c.grid.length > 0.0)) config_error("grid.length", "must be positive");
  if (!(std::isfinite(c.grid.r0) && c.grid.r0 > 0.0)) config_error("grid.r0", "must be positive");
  if (!(c.grid.nu > 0.0)) config_error("grid.nu", "must be positive");
  if (c.grid.n_max != 0) {
    const std::size_t minimum = default_n_max(c.grid.length, c.grid.r0);
    if (c.grid.n_max < minimum) {
      config_error("grid.n_max", "regulator tail above 1e-12; need 0 (automatic) or >= " +
                                     std::to_string(minimum));
    }
  }

  const NumericsConfig& nu = c.numerics;
  if (!(nu.tol >= 1.0e-12 && nu.tol <= 1.0e-4)) config_error("numerics.tol", "must lie in [1e-12, 1e-4]");

  const ProtocolConfig& p = c.protocol;
  if (!(std::isfinite(p.tau_q) && p.tau_q > 0.0)) config_error("protocol.tau_q", "must be positive");
  if (p.family == ProtocolFamily::coupling) {
    as_config_error("protocol.alpha", [&] {
      make_coupling_schedule(p.coupling_kind, p.alpha, p.tau_q, ph.v_f);
    });
    if (!(std::isfinite(p.gamma0) && p.gamma0 > 0.0)) config_error("protocol.gamma0", "must be positive");
    if (nu.method == MethodPreference::airy || nu.method == MethodPreference::both) {
      if (p.coupling_kind != CouplingKind::linear) {
        config_error("numerics.method", "the Airy solution exists only for the linear ramp");
      }
      if (p.alpha == 0.0) config_error("numerics.method", "the Airy solution needs alpha != 0");
    }
  } else {
    switch (p.gamma_kind) {
      case GammaKind::p4:
      case GammaKind::p5:
        if (!(p.gamma0 > 0.0)) config_error("protocol.gamma0", "must be positive");
        if (!(p.gamma_f > 0.0)) config_error("protocol.gamma_f", "must be positive");
        if (p.sigma_kind == SigmaKind::p5) {
          if (!(p.sigma0 > 0.0)) config_error("protocol.sigma0", "must be positive");
          if (!(p.sigma_f > 0.0)) config_error("protocol.sigma_f", "must be positive");
        }
        as_config_error("protocol.gamma_f", [&] {
          make_polynomial_schedule(p.gamma_kind, p.gamma0, p.gamma_f, p.tau_q, ph.v_f);
        });
        break;
      case GammaKind::constant_potential:
        if (!(std::isfinite(p.v0) && p.v0 > 0.0)) config_error("protocol.v0", "must be positive");
        if (!(p.gamma0 > 0.0)) config_error("protocol.gamma0", "must be positive");
        if (!std::isfinite(p.gamma_dot0)) config_error("protocol.gamma_dot0", "must be finite");
        if (p.n_index < 0) config_error("protocol.n_index", "must be >= 0");
        break;
      case GammaKind::linear_potential:
        if (!(std::isfinite(p.alpha_ramp) && p.alpha_ramp > 0.0)) {
          config_error("protocol.alpha_ramp", "must be positive");
        }
        if (!(p.gamma0 > 0.0)) config_error("protocol.gamma0", "must be positive");
        if (p.gamma_dot0 != 0.0) config_error("protocol.gamma_dot0", "the Airy solution assumes 0");
        break;
    }
  }
  if ((c.command == "solve" || c.command == "sweep") && p.family != ProtocolFamily::coupling) {
    config_error("protocol.family", "'" + c.command + "' needs a coupling protocol");
  }
  if (c.command == "sta-design" &&
      (p.family != ProtocolFamily::gamma ||
       (p.gamma_kind != GammaKind::p4 && p.gamma_kind != GammaKind::p5))) {
    config_error("protocol.kind", "'sta-design' needs a gamma protocol of kind p4 or p5");
  }
  if (c.command == "accidental" &&
      (p.family != ProtocolFamily::gamma || (p.gamma_kind != GammaKind::constant_potential &&
                                             p.gamma_kind != GammaKind::linear_potential))) {
    config_error("protocol.kind",
                 "'accidental' needs a gamma protocol of kind constant_potential or linear_potential");
  }

  for (double t : c.sweep.tau_q) {
    if (!(std::isfinite(t) && t > 0.0)) config_error("sweep.tau_q", "entries must be positive");
  }
  for (double a : c.sweep.alpha) {
    if (!(std::isfinite(a) && ph.v_f + 2.0 * std::min(a, 0.0) > 0.0)) {
      config_error("sweep.alpha", "entries must keep v_f + 2 alpha > 0");
    }
  }
  if (c.command == "sweep" && c.sweep.tau_q.empty() && c.sweep.alpha.empty()) {
    config_error("sweep", "empty sweep: give sweep.tau_q and/or sweep.alpha");
  }
  if (!std::isfinite(c.sweep.alpha_ref)) config_error("sweep.alpha_ref", "must be finite");
  if (c.output.path.empty()) config_error("output.path", "must not be empty");
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream o;
  auto line = [&o](const std::string& key, const std::string& value, const std::string& note) {
    std::string text = key + " = " + value;
    if (!note.empty()) {
      if (text.size() < 28) text.append(28 - text.size(), ' ');
      text += " # " + note;
    }
    o << text << '\n';
  };
  auto str = [](const std::string& s) { return "\"" + s + "\""; };
  const ProtocolConfig& p = c.protocol;
  o << "# tllsta run configuration (normalized)\n\n[run]\n";
  line("command", str(c.command), "solve | sweep | sta-design | accidental");
  o << "\n[protocol]\n";
  line("family", str(to_string(p.family)), "coupling | gamma");
  line("kind",
       str(p.family == ProtocolFamily::coupling ? to_string(p.coupling_kind) : to_string(p.gamma_kind)),
       p.family == ProtocolFamily::coupling ? "linear | poly5 | inverse_poly | constant"
                                            : "p4 | p5 | constant_potential | linear_potential");
  line("alpha", format_number(p.alpha), "velocity; final coupling g/2pi");
  line("tau_q", format_number(p.tau_q), "time");
  line("gamma0", format_number(p.gamma0), "dimensionless");
  line("gamma_f", format_number(p.gamma_f), "dimensionless");
  line("sigma", str(to_string(p.sigma_kind)), "equal | p5");
  line("sigma0", format_number(p.sigma0), "dimensionless");
  line("sigma_f", format_number(p.sigma_f), "dimensionless");
  line("v0", format_number(p.v0), "energy; constant lattice potential");
  line("alpha_ramp", format_number(p.alpha_ramp), "energy/time; linear lattice potential slope");
  line("gamma_dot0", format_number(p.gamma_dot0), "1/time");
  line("n_index", std::to_string(p.n_index), "index of the t_n ending a constant-potential run");
  o << "\n[grid]\n";
  line("length", format_number(c.grid.length), "length L");
  line("r0", format_number(c.grid.r0), "length; regulator R0");
  line("nu", format_number(c.grid.nu), "length; short-distance cutoff");
  line("n_max", std::to_string(c.grid.n_max), "0 = automatic");
  Array modes(c.grid.modes.begin(), c.grid.modes.end());
  line("modes", format_array(modes), "mode indices n with emitted trajectories; [] = all");
  o << "\n[physics]\n";
  line("v_f", format_number(c.physics.v_f), "velocity");
  line("rho0", format_number(c.physics.rho0), "1/length");
  line("beta0", format_number(c.physics.beta0), "1/energy; inf = pure state");
  o << "\n[numerics]\n";
  line("tol", format_number(c.numerics.tol), "dimensionless");
  line("samples", std::to_string(c.numerics.samples), "time samples on [0, tau_q]");
  line("method", str(to_string(c.numerics.method)), "auto | numeric | airy | both");
  line("threads", std::to_string(c.numerics.threads), "");
  line("wkb", c.numerics.wkb ? "true" : "false", "");
  o << "\n[sweep]\n";
  line("tau_q", format_array(c.sweep.tau_q), c.sweep.tau_in_tau0 ? "units of tau0" : "time");
  line("alpha", format_array(c.sweep.alpha), "velocity");
  line("tau_unit", str(c.sweep.tau_in_tau0 ? "tau0" : "time"), "time | tau0");
  line("alpha_ref", format_number(c.sweep.alpha_ref), "velocity; 0 = first alpha");
  o << "\n[output]\n";
  line("format", str(to_string(c.output.format)), "csv | json");
  line("path", str(c.output.path), "");
  line("precision", std::to_string(c.output.precision), "significant digits");
  return o.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  // The emitted form is canonical, so equality of emissions is equality of configs.
  return emit_config(a) == emit_config(b);
}

ModeGrid grid_from(const RunConfig& c) {
  return make_mode_grid(c.grid.length, c.grid.r0, c.grid.n_max, c.grid.nu);
}

CouplingSchedule coupling_from(const RunConfig& c) {
  return make_coupling_schedule(c.protocol.coupling_kind, c.protocol.alpha, c.protocol.tau_q,
                                c.physics.v_f);
}

GammaSchedule gamma_schedule_from(const RunConfig& c) {
  const ProtocolConfig& p = c.protocol;
  switch (p.gamma_kind) {
    case GammaKind::p4:
    case GammaKind::p5:
      return make_polynomial_schedule(p.gamma_kind, p.gamma0, p.gamma_f, p.tau_q, c.physics.v_f);
    case GammaKind::constant_potential:
      return make_constant_potential_schedule(p.v0, c.physics.rho0, c.physics.v_f, p.gamma0,
                                              p.gamma_dot0, p.n_index);
    case GammaKind::linear_potential:
      return make_linear_potential_schedule(p.alpha_ramp, c.physics.rho0, c.physics.v_f, p.gamma0);
  }
  fail(ErrorCode::config, "protocol.kind: unsupported gamma schedule");
}

}  // namespace tll
