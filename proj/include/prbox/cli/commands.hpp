#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prbox/chsh.hpp"
#include "prbox/cli/config.hpp"
#include "prbox/frft_optics.hpp"
#include "prbox/montecarlo.hpp"
#include "prbox/optimizer.hpp"

namespace prbox::cli {

/// printf("%.{precision}g"). Re-formatting a parsed output is a fixed point.
std::string format_number(double value, int precision);
/// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

// --- sweep -----------------------------------------------------------------

struct SweepCurve {
  std::string label;  // "alpha" or "alpha_prime"
  std::size_t r_index = 0;
  double alpha = 0.0;
  double r = 0.0;  // as given in the config, in r_unit
  double r_dimensionless = 0.0;
  std::vector<CurvePoint> points;
};

struct SweepReport {
  std::vector<SweepCurve> curves;  // alpha-major, then r
  std::optional<std::vector<CurvePoint>> reference;
};

std::vector<double> beta_grid(const RunConfig& config);
SweepReport run_sweep(const RunConfig& config);
/// Header `beta_rad,E,alpha_rad,r`.
void write_sweep_curve_csv(std::ostream& out, const SweepCurve& curve, int precision);
void write_reference_csv(std::ostream& out, const std::vector<CurvePoint>& curve, int precision);
void write_sweep_json(std::ostream& out, const SweepReport& report, const RunConfig& config);
/// File name of curve `index` inside the sweep output directory.
std::string sweep_file_name(const SweepReport& report, std::size_t index);

// --- chsh ------------------------------------------------------------------

struct ChshRow {
  double r = 0.0;
  double r_dimensionless = 0.0;
  ChshTables tables;
  std::array<double, 4> E{};
  double S = 0.0;
  double fidelity = 0.0;
  double p_and = 0.0;
  double h_ave_pct = 0.0;
  NoSignalingReport marginals;
};

/// One row per configured r. Throws NumericalError if a row breaks
/// P_AND = (4 + S) / 8 by more than 1e-9.
std::vector<ChshRow> run_chsh(const RunConfig& config);
void write_chsh_csv(std::ostream& out, const std::vector<ChshRow>& rows, const RunConfig& config);
void write_chsh_json(std::ostream& out, const std::vector<ChshRow>& rows, const RunConfig& config);

// --- mc --------------------------------------------------------------------

struct McRow {
  double r = 0.0;
  double r_dimensionless = 0.0;
  std::array<double, 4> alpha{};
  std::array<double, 4> beta{};
  McBellEstimate estimate;
};

std::vector<McRow> run_mc(const RunConfig& config);
void write_mc_csv(std::ostream& out, const std::vector<McRow>& rows, const RunConfig& config);
void write_mc_json(std::ostream& out, const std::vector<McRow>& rows, const RunConfig& config);

// --- plan-frft -------------------------------------------------------------

struct PlanReport {
  std::optional<FrftPlan> plan;      // from target + inventory
  std::vector<FrftStage> explicit_stages;  // from `stages`
};

PlanReport run_plan_frft(const RunConfig& config);
/// Columns angle,f_cm,z_cm (one row per stage; explicit stages first).
void write_plan_csv(std::ostream& out, const PlanReport& report, int precision);
void write_plan_json(std::ostream& out, const PlanReport& report, const RunConfig& config);

// --- optimize --------------------------------------------------------------

struct OptimizeReport {
  double r = 0.0;
  double r_dimensionless = 0.0;
  SearchResult search;
  std::optional<TuneResult> tune;
  MeasurementSettings tune_settings;
  std::string reproduce;
};

OptimizeReport run_optimize(const RunConfig& config);
void write_optimize_csv(std::ostream& out, const OptimizeReport& report, const RunConfig& config);
void write_optimize_json(std::ostream& out, const OptimizeReport& report, const RunConfig& config);

// --- entry point -----------------------------------------------------------

struct Invocation {
  Command command = Command::chsh;
  std::filesystem::path config_path;
  std::optional<std::string> out;
  std::optional<OutputFormat> format;
  std::optional<std::uint64_t> seed;
  bool swap_widths = false;
};

/// Loads the config, applies command-line overrides, validates, runs and
/// writes the output (stdout when no path is configured, except for sweep,
/// which needs a directory). Returns the process exit code:
/// 0 success, 2 config error, 3 numerical failure, 4 I/O failure.
int run(const Invocation& invocation, std::ostream& stdout_stream, std::ostream& stderr_stream);

}  // namespace prbox::cli
