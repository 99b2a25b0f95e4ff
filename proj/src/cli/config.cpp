#include "prbox/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "prbox/angle.hpp"

namespace prbox::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Location {
  std::string_view source;
  int line;
  std::string key;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << source << ":" << line << ": key '" << key << "': " << what;
    throw ConfigError(msg.str());
  }
};

double parse_real(const Location& at, const std::string& v) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(out))
    at.fail("expected a finite number, got '" + v + "'");
  return out;
}

double parse_width(const Location& at, const std::string& v) {
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  return parse_real(at, v);
}

double parse_angle_at(const Location& at, const std::string& v) {
  try {
    return parse_angle(v);
  } catch (const InvalidArgument& e) {
    at.fail(e.what());
  }
}

std::uint64_t parse_count(const Location& at, const std::string& v) {
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size())
    at.fail("expected a non-negative integer, got '" + v + "'");
  return out;
}

int parse_int(const Location& at, const std::string& v) {
  int out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size())
    at.fail("expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const Location& at, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  at.fail("expected true or false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const Location&, const std::string&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"delta", [](RunConfig& c, const Location& at, const std::string& v) { c.delta = parse_width(at, v); }},
      {"gamma", [](RunConfig& c, const Location& at, const std::string& v) { c.gamma = parse_width(at, v); }},
      {"scale_s_mm", [](RunConfig& c, const Location& at, const std::string& v) { c.scale_s_mm = parse_real(at, v); }},
      {"swap_widths", [](RunConfig& c, const Location& at, const std::string& v) { c.swap_widths = parse_bool(at, v); }},
      {"alpha", [](RunConfig& c, const Location& at, const std::string& v) { c.alpha = parse_angle_at(at, v); }},
      {"alpha_prime", [](RunConfig& c, const Location& at, const std::string& v) { c.alpha_prime = parse_angle_at(at, v); }},
      {"beta", [](RunConfig& c, const Location& at, const std::string& v) { c.beta = parse_angle_at(at, v); }},
      {"beta_prime", [](RunConfig& c, const Location& at, const std::string& v) { c.beta_prime = parse_angle_at(at, v); }},
      {"r",
       [](RunConfig& c, const Location& at, const std::string& v) {
         c.r.clear();
         for (const auto& item : split_list(v)) c.r.push_back(parse_real(at, item));
       }},
      {"r_unit",
       [](RunConfig& c, const Location& at, const std::string& v) {
         if (v == "mm") c.r_unit = RUnit::mm;
         else if (v == "dimensionless") c.r_unit = RUnit::dimensionless;
         else at.fail("expected 'mm' or 'dimensionless', got '" + v + "'");
       }},
      {"n", [](RunConfig& c, const Location& at, const std::string& v) { c.n = parse_count(at, v); }},
      {"seed", [](RunConfig& c, const Location& at, const std::string& v) { c.seed = parse_count(at, v); }},
      {"beta_min", [](RunConfig& c, const Location& at, const std::string& v) { c.beta_min = parse_angle_at(at, v); }},
      {"beta_max", [](RunConfig& c, const Location& at, const std::string& v) { c.beta_max = parse_angle_at(at, v); }},
      {"steps", [](RunConfig& c, const Location& at, const std::string& v) { c.steps = parse_int(at, v); }},
      {"reference_curve", [](RunConfig& c, const Location& at, const std::string& v) { c.reference_curve = parse_bool(at, v); }},
      {"reference_phase", [](RunConfig& c, const Location& at, const std::string& v) { c.reference_phase = parse_angle_at(at, v); }},
      {"format",
       [](RunConfig& c, const Location& at, const std::string& v) {
         if (v == "csv") c.format = OutputFormat::csv;
         else if (v == "json") c.format = OutputFormat::json;
         else at.fail("expected 'csv' or 'json', got '" + v + "'");
       }},
      {"path", [](RunConfig& c, const Location&, const std::string& v) { c.path = v; }},
      {"precision", [](RunConfig& c, const Location& at, const std::string& v) { c.precision = parse_int(at, v); }},
      {"target", [](RunConfig& c, const Location& at, const std::string& v) { c.target = parse_angle_at(at, v); }},
      {"inventory",
       [](RunConfig& c, const Location& at, const std::string& v) {
         c.inventory.clear();
         if (v.empty()) return;
         for (const auto& item : split_list(v)) c.inventory.push_back(parse_real(at, item));
       }},
      {"max_stages", [](RunConfig& c, const Location& at, const std::string& v) { c.max_stages = parse_int(at, v); }},
      {"angle_tol", [](RunConfig& c, const Location& at, const std::string& v) { c.angle_tol = parse_real(at, v); }},
      {"stages",
       [](RunConfig& c, const Location& at, const std::string& v) {
         c.stages.clear();
         for (const auto& item : split_list(v)) {
           const auto colon = item.find(':');
           if (colon == std::string::npos) at.fail("stage '" + item + "' is not of the form order:focal_cm");
           c.stages.emplace_back(parse_angle_at(at, trim(item.substr(0, colon))),
                                 parse_real(at, trim(item.substr(colon + 1))));
         }
       }},
      {"grid_step", [](RunConfig& c, const Location& at, const std::string& v) { c.grid_step = parse_angle_at(at, v); }},
      {"refine_tol", [](RunConfig& c, const Location& at, const std::string& v) { c.refine_tol = parse_real(at, v); }},
      {"target_fidelity", [](RunConfig& c, const Location& at, const std::string& v) { c.target_fidelity = parse_real(at, v); }},
      {"r_max", [](RunConfig& c, const Location& at, const std::string& v) { c.r_max = parse_real(at, v); }},
  };
  return table;
}

[[noreturn]] void missing(const RunConfig& c, std::string_view key, Command cmd) {
  std::ostringstream msg;
  msg << c.source << ": key '" << key << "' is required by '" << command_name(cmd) << "'";
  throw ConfigError(msg.str());
}

[[noreturn]] void invalid(const RunConfig& c, std::string_view key, std::string_view what) {
  std::ostringstream msg;
  msg << c.source << ": key '" << key << "': " << what;
  throw ConfigError(msg.str());
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "sweep") return Command::sweep;
  if (name == "chsh") return Command::chsh;
  if (name == "mc") return Command::mc;
  if (name == "plan-frft") return Command::plan_frft;
  if (name == "optimize") return Command::optimize;
  return std::nullopt;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::sweep: return "sweep";
    case Command::chsh: return "chsh";
    case Command::mc: return "mc";
    case Command::plan_frft: return "plan-frft";
    case Command::optimize: return "optimize";
  }
  return "?";
}

RunConfig parse_config(std::istream& in, std::string_view source_name) {
  RunConfig config;
  config.source = std::string(source_name);
  std::set<std::string, std::less<>> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": expected 'key = value', got '" << line << "'";
      throw ConfigError(msg.str());
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const Location at{source_name, line_no, key};
    const auto it = setters().find(key);
    if (it == setters().end()) at.fail("unknown key");
    if (!seen.insert(key).second) at.fail("duplicate key");
    it->second(config, at, value);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

GaussianTwoModeState RunConfig::state() const {
  double d = delta.value_or(0.0), g = gamma.value_or(0.0);
  if (swap_widths) std::swap(d, g);
  return {d, g, scale_s_mm};
}

std::vector<double> RunConfig::r_dimensionless() const {
  std::vector<double> out;
  out.reserve(r.size());
  for (double v : r) out.push_back(r_unit == RUnit::mm ? v / scale_s_mm : v);
  return out;
}

MeasurementSettings RunConfig::settings(double r_dimless) const {
  return {alpha.value_or(0.0), alpha_prime.value_or(0.0), beta.value_or(0.0),
          beta_prime.value_or(0.0), r_dimless};
}

std::string_view RunConfig::r_unit_name() const {
  return r_unit == RUnit::mm ? "mm" : "dimensionless";
}

void validate_for(const RunConfig& c, Command cmd) {
  if (!(c.precision >= 1 && c.precision <= 17)) invalid(c, "precision", "must lie in [1, 17]");

  if (cmd == Command::plan_frft) {
    if (!c.target && c.stages.empty()) missing(c, "target", cmd);
    if (c.target && c.inventory.empty()) invalid(c, "inventory", "lens inventory is empty");
    for (double f : c.inventory)
      if (!(f > 0.0)) invalid(c, "inventory", "focal lengths must be positive");
    if (c.max_stages < 1) invalid(c, "max_stages", "must be >= 1");
    if (!(c.angle_tol >= 0.0)) invalid(c, "angle_tol", "must be >= 0");
    for (const auto& [order, f] : c.stages) {
      if (!(f > 0.0)) invalid(c, "stages", "focal lengths must be positive");
      if (!(order > 0.0 && order < 2.0 * std::numbers::pi))
        invalid(c, "stages", "orders must lie in (0, 2 pi)");
    }
    return;
  }

  if (!c.delta) missing(c, "delta", cmd);
  if (!c.gamma) missing(c, "gamma", cmd);
  if (!(*c.delta > 0.0) || !std::isfinite(*c.delta)) invalid(c, "delta", "must be a finite positive number");
  if (!(*c.gamma > 0.0)) invalid(c, "gamma", "must be positive");
  if (!(c.scale_s_mm > 0.0)) invalid(c, "scale_s_mm", "must be positive");
  if (c.r.empty()) missing(c, "r", cmd);
  if (!c.r_unit) missing(c, "r_unit", cmd);
  for (double v : c.r)
    if (!(v >= 0.0)) invalid(c, "r", "dark-region half-widths must be >= 0");

  if (cmd == Command::sweep) {
    if (!c.alpha) missing(c, "alpha", cmd);
    if (c.steps < 1) invalid(c, "steps", "must be >= 1");
    if (c.beta_min && c.beta_max && *c.beta_max < *c.beta_min)
      invalid(c, "beta_max", "must be >= beta_min");
  } else if (cmd == Command::optimize) {
    if (!(c.grid_step > 0.0 && c.grid_step <= std::numbers::pi))
      invalid(c, "grid_step", "must lie in (0, pi]");
    if (!(c.refine_tol > 0.0)) invalid(c, "refine_tol", "must be positive");
    if (c.target_fidelity) {
      if (!(*c.target_fidelity > 0.75 && *c.target_fidelity < 1.0))
        invalid(c, "target_fidelity", "must lie in (0.75, 1)");
      if (!(c.r_max > 0.0)) invalid(c, "r_max", "must be positive");
    }
  } else {
    for (auto [key, value] : {std::pair{"alpha", c.alpha}, std::pair{"alpha_prime", c.alpha_prime},
                              std::pair{"beta", c.beta}, std::pair{"beta_prime", c.beta_prime}})
      if (!value) missing(c, key, cmd);
    if (cmd == Command::mc && c.n < 1) invalid(c, "n", "must be >= 1");
  }

  // Last: a non-normalizable state is a numerical failure, not a config one.
  (void)c.state();
}

}  // namespace prbox::cli
