#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prbox/chsh.hpp"
#include "prbox/core_state.hpp"
#include "prbox/error.hpp"

namespace prbox::cli {

/// Malformed or inconsistent configuration. Exit code 2.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Unreadable config or unwritable output. Exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class RUnit { dimensionless, mm };
enum class OutputFormat { csv, json };

enum class Command { sweep, chsh, mc, plan_frft, optimize };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

/// Flat key = value run description. Angles accept "5pi/4" notation; list
/// valued keys (r, inventory, stages) are comma separated; `stages` entries
/// are "order:focal_cm".
struct RunConfig {
  std::optional<double> delta;
  std::optional<double> gamma;
  double scale_s_mm = 1.0;
  bool swap_widths = false;

  std::optional<double> alpha;
  std::optional<double> alpha_prime;
  std::optional<double> beta;
  std::optional<double> beta_prime;
  std::vector<double> r;
  std::optional<RUnit> r_unit;

  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 1;

  std::optional<double> beta_min;
  std::optional<double> beta_max;
  int steps = 181;
  bool reference_curve = false;
  double reference_phase = 0.0;

  OutputFormat format = OutputFormat::csv;
  std::string path;
  int precision = 6;

  std::optional<double> target;
  std::vector<double> inventory;
  int max_stages = 2;
  double angle_tol = 1e-6;
  std::vector<std::pair<double, double>> stages;

  double grid_step = 0.39269908169872414;  // pi/8
  double refine_tol = 1e-4;
  std::optional<double> target_fidelity;
  double r_max = 3.0;

  std::string source;  // config path, for diagnostics and reproduction lines

  /// State with the optional width swap applied. Throws NumericalError for
  /// non-normalizable widths.
  GaussianTwoModeState state() const;
  /// r converted to dimensionless units (r_mm / scale_s_mm when tagged mm).
  std::vector<double> r_dimensionless() const;
  /// Angles of the four settings at the given dimensionless r.
  MeasurementSettings settings(double r_dimless) const;
  std::string_view r_unit_name() const;
};

RunConfig parse_config(std::istream& in, std::string_view source_name);
RunConfig load_config(const std::filesystem::path& path);

/// Re-checks every precondition the command relies on. Throws ConfigError
/// naming the offending key, or NumericalError for a non-normalizable state.
void validate_for(const RunConfig& config, Command command);

}  // namespace prbox::cli
