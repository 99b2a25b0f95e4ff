#include "prbox/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace prbox::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1";
constexpr int kEDecimals = 3;
constexpr std::array<const char*, 4> kSettingNames{"ab", "apb", "abp", "apbp"};

double rounded(double v, int precision) { return std::stod(format_number(v, precision)); }

ordered_json json_header(std::string_view command, const RunConfig& c) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

ordered_json state_json(const RunConfig& c) {
  const GaussianTwoModeState s = c.state();
  ordered_json j;
  j["delta"] = rounded(s.delta(), c.precision);
  j["gamma"] = std::isfinite(s.gamma()) ? ordered_json(rounded(s.gamma(), c.precision))
                                        : ordered_json("inf");
  j["scale_s_mm"] = rounded(s.scale_s_mm(), c.precision);
  j["swap_widths"] = c.swap_widths;
  return j;
}

template <typename Row>
std::vector<Row> rows_per_r(const RunConfig& c, const std::function<Row(double, double)>& make) {
  const std::vector<double> dimless = c.r_dimensionless();
  std::vector<Row> rows;
  for (std::size_t i = 0; i < c.r.size(); ++i) rows.push_back(make(c.r[i], dimless[i]));
  return rows;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ostream& out, const std::string& what) {
  out.flush();
  if (!out) throw IoError("write failed for " + what);
}

}  // namespace

std::string format_number(double value, int precision) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  return buf;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  // "-0.000" -> "0.000"
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

// --- sweep -----------------------------------------------------------------

std::vector<double> beta_grid(const RunConfig& c) {
  const double lo = c.beta_min.value_or(0.0);
  const double hi = c.beta_max.value_or(2.0 * std::numbers::pi);
  std::vector<double> grid(static_cast<std::size_t>(c.steps));
  for (int i = 0; i < c.steps; ++i)
    grid[i] = c.steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (c.steps - 1);
  return grid;
}

SweepReport run_sweep(const RunConfig& c) {
  validate_for(c, Command::sweep);
  const GaussianTwoModeState state = c.state();
  const std::vector<double> grid = beta_grid(c);
  const std::vector<double> dimless = c.r_dimensionless();
  SweepReport report;
  std::vector<std::pair<std::string, double>> alphas{{"alpha", *c.alpha}};
  if (c.alpha_prime) alphas.emplace_back("alpha_prime", *c.alpha_prime);
  for (const auto& [label, alpha] : alphas)
    for (std::size_t i = 0; i < c.r.size(); ++i)
      report.curves.push_back(
          {label, i, alpha, c.r[i], dimless[i], sweep_beta(state, alpha, dimless[i], grid)});
  if (c.reference_curve) report.reference = quantum_reference_curve(grid, c.reference_phase);
  return report;
}

std::string sweep_file_name(const SweepReport& report, std::size_t index) {
  const SweepCurve& curve = report.curves.at(index);
  std::ostringstream name;
  name << "sweep_" << curve.label << "_r" << curve.r_index << ".csv";
  return name.str();
}

void write_sweep_curve_csv(std::ostream& out, const SweepCurve& curve, int precision) {
  out << "beta_rad,E,alpha_rad,r\n";
  for (const auto& p : curve.points)
    out << format_number(p.beta, precision) << ',' << format_number(p.value, precision) << ','
        << format_number(curve.alpha, precision) << ',' << format_number(curve.r, precision)
        << '\n';
}

void write_reference_csv(std::ostream& out, const std::vector<CurvePoint>& curve, int precision) {
  out << "beta_rad,reference\n";
  for (const auto& p : curve)
    out << format_number(p.beta, precision) << ',' << format_number(p.value, precision) << '\n';
}

void write_sweep_json(std::ostream& out, const SweepReport& report, const RunConfig& c) {
  ordered_json j = json_header("sweep", c);
  j["state"] = state_json(c);
  j["r_unit"] = c.r_unit_name();
  j["curves"] = ordered_json::array();
  for (const auto& curve : report.curves) {
    ordered_json jc;
    jc["setting"] = curve.label;
    jc["alpha_rad"] = rounded(curve.alpha, c.precision);
    jc["r"] = rounded(curve.r, c.precision);
    jc["r_dimensionless"] = rounded(curve.r_dimensionless, c.precision);
    jc["beta_rad"] = ordered_json::array();
    jc["E"] = ordered_json::array();
    for (const auto& p : curve.points) {
      jc["beta_rad"].push_back(rounded(p.beta, c.precision));
      jc["E"].push_back(rounded(p.value, c.precision));
    }
    j["curves"].push_back(std::move(jc));
  }
  if (report.reference) {
    ordered_json ref;
    ref["phase_rad"] = rounded(c.reference_phase, c.precision);
    ref["beta_rad"] = ordered_json::array();
    ref["value"] = ordered_json::array();
    for (const auto& p : *report.reference) {
      ref["beta_rad"].push_back(rounded(p.beta, c.precision));
      ref["value"].push_back(rounded(p.value, c.precision));
    }
    j["reference"] = std::move(ref);
  }
  out << j.dump(2) << '\n';
}

// --- chsh ------------------------------------------------------------------

std::vector<ChshRow> run_chsh(const RunConfig& c) {
  validate_for(c, Command::chsh);
  const GaussianTwoModeState state = c.state();
  return rows_per_r<ChshRow>(c, [&](double r, double r_dimless) {
    ChshRow row;
    row.r = r;
    row.r_dimensionless = r_dimless;
    row.tables = chsh_tables(state, c.settings(r_dimless));
    const auto all = row.tables.all();
    for (std::size_t i = 0; i < 4; ++i) row.E[i] = correlation_E(*all[i]);
    row.S = bell_S(row.tables);
    row.fidelity = pr_fidelity(row.S);
    row.p_and = and_gate_success(row.tables);
    row.h_ave_pct = 100.0 * row.tables.mean_kept_fraction();
    row.marginals = no_signaling_report(row.tables);
    if (std::abs(row.p_and - (4.0 + row.S) / 8.0) > 1e-9)
      throw NumericalError("chsh report: P_AND deviates from (4 + S) / 8 at r = " +
                           format_number(r, 6));
    return row;
  });
}

void write_chsh_csv(std::ostream& out, const std::vector<ChshRow>& rows, const RunConfig& c) {
  const int p = c.precision;
  out << "r,H_ave_pct,E_ab,E_apb,E_abp,E_apbp,S,P_AND,fidelity";
  for (const char* who : {"alice", "bob"})
    for (const char* s : kSettingNames) out << ',' << who << "_plus_" << s;
  out << ",max_marginal_deviation,r_unit,r_dimensionless\n";
  for (const auto& row : rows) {
    out << format_number(row.r, p) << ',' << format_number(row.h_ave_pct, p);
    for (double e : row.E) out << ',' << format_fixed(e, kEDecimals);
    out << ',' << format_number(row.S, p) << ',' << format_number(row.p_and, p) << ','
        << format_number(row.fidelity, p);
    for (double v : row.marginals.alice_plus) out << ',' << format_number(v, p);
    for (double v : row.marginals.bob_plus) out << ',' << format_number(v, p);
    out << ',' << format_number(row.marginals.max_deviation, p) << ',' << c.r_unit_name() << ','
        << format_number(row.r_dimensionless, p) << '\n';
  }
}

void write_chsh_json(std::ostream& out, const std::vector<ChshRow>& rows, const RunConfig& c) {
  const int p = c.precision;
  ordered_json j = json_header("chsh", c);
  j["state"] = state_json(c);
  j["settings"] = {{"alpha", rounded(*c.alpha, p)},
                   {"alpha_prime", rounded(*c.alpha_prime, p)},
                   {"beta", rounded(*c.beta, p)},
                   {"beta_prime", rounded(*c.beta_prime, p)}};
  j["r_unit"] = c.r_unit_name();
  j["rows"] = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json jr;
    jr["r"] = rounded(row.r, p);
    jr["r_dimensionless"] = rounded(row.r_dimensionless, p);
    jr["H_ave_pct"] = rounded(row.h_ave_pct, p);
    for (std::size_t i = 0; i < 4; ++i)
      jr[std::string("E_") + kSettingNames[i]] = std::stod(format_fixed(row.E[i], kEDecimals));
    jr["S"] = rounded(row.S, p);
    jr["P_AND"] = rounded(row.p_and, p);
    jr["fidelity"] = rounded(row.fidelity, p);
    ordered_json tables = ordered_json::object();
    const auto all = row.tables.all();
    for (std::size_t i = 0; i < 4; ++i)
      tables[kSettingNames[i]] = {{"p_pp", rounded(all[i]->p_pp, p)},
                                  {"p_pm", rounded(all[i]->p_pm, p)},
                                  {"p_mp", rounded(all[i]->p_mp, p)},
                                  {"p_mm", rounded(all[i]->p_mm, p)},
                                  {"kept_fraction", rounded(all[i]->kept_fraction, p)}};
    jr["tables"] = std::move(tables);
    ordered_json marg;
    for (std::size_t i = 0; i < 4; ++i) {
      marg[std::string("alice_plus_") + kSettingNames[i]] = rounded(row.marginals.alice_plus[i], p);
      marg[std::string("bob_plus_") + kSettingNames[i]] = rounded(row.marginals.bob_plus[i], p);
    }
    marg["max_deviation"] = rounded(row.marginals.max_deviation, p);
    jr["marginals"] = std::move(marg);
    j["rows"].push_back(std::move(jr));
  }
  out << j.dump(2) << '\n';
}

// --- mc --------------------------------------------------------------------

std::vector<McRow> run_mc(const RunConfig& c) {
  validate_for(c, Command::mc);
  const GaussianTwoModeState state = c.state();
  return rows_per_r<McRow>(c, [&](double r, double r_dimless) {
    McRow row;
    row.r = r;
    row.r_dimensionless = r_dimless;
    const MeasurementSettings s = c.settings(r_dimless);
    row.alpha = {s.alpha, s.alpha_prime, s.alpha, s.alpha_prime};
    row.beta = {s.beta, s.beta, s.beta_prime, s.beta_prime};
    row.estimate = mc_bell_S(state, s, c.n, c.seed);
    return row;
  });
}

void write_mc_csv(std::ostream& out, const std::vector<McRow>& rows, const RunConfig& c) {
  const int p = c.precision;
  out << "r,setting,alpha_rad,beta_rad,seed,n_total,n_discarded,n_pp,n_pm,n_mp,n_mm,"
         "p_pp,p_pm,p_mp,p_mm,se_pp,se_pm,se_mp,se_mm,kept_fraction,kept_fraction_se,"
         "E,E_se,S,S_se\n";
  for (const auto& row : rows)
    for (std::size_t i = 0; i < 4; ++i) {
      const CountTable& n = row.estimate.counts[i];
      const ProbabilityEstimate& e = row.estimate.estimates[i];
      out << format_number(row.r, p) << ',' << kSettingNames[i] << ','
          << format_number(row.alpha[i], p) << ',' << format_number(row.beta[i], p) << ','
          << n.seed << ',' << n.n_total << ',' << n.n_discarded << ',' << n.n_pp << ','
          << n.n_pm << ',' << n.n_mp << ',' << n.n_mm << ',' << format_number(e.table.p_pp, p)
          << ',' << format_number(e.table.p_pm, p) << ',' << format_number(e.table.p_mp, p)
          << ',' << format_number(e.table.p_mm, p) << ',' << format_number(e.se_pp, p) << ','
          << format_number(e.se_pm, p) << ',' << format_number(e.se_mp, p) << ','
          << format_number(e.se_mm, p) << ',' << format_number(e.table.kept_fraction, p) << ','
          << format_number(e.se_kept_fraction, p) << ',' << format_number(e.correlation(), p)
          << ',' << format_number(e.correlation_se(), p) << ','
          << format_number(row.estimate.S, p) << ',' << format_number(row.estimate.se, p)
          << '\n';
    }
}

void write_mc_json(std::ostream& out, const std::vector<McRow>& rows, const RunConfig& c) {
  const int p = c.precision;
  ordered_json j = json_header("mc", c);
  j["state"] = state_json(c);
  j["n_per_setting"] = c.n;
  j["seed"] = c.seed;
  j["r_unit"] = c.r_unit_name();
  j["rows"] = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json jr;
    jr["r"] = rounded(row.r, p);
    jr["r_dimensionless"] = rounded(row.r_dimensionless, p);
    jr["S"] = rounded(row.estimate.S, p);
    jr["S_se"] = rounded(row.estimate.se, p);
    ordered_json settings = ordered_json::object();
    for (std::size_t i = 0; i < 4; ++i) {
      const CountTable& n = row.estimate.counts[i];
      const ProbabilityEstimate& e = row.estimate.estimates[i];
      settings[kSettingNames[i]] = {
          {"alpha_rad", rounded(row.alpha[i], p)},
          {"beta_rad", rounded(row.beta[i], p)},
          {"seed", n.seed},
          {"counts", {{"pp", n.n_pp}, {"pm", n.n_pm}, {"mp", n.n_mp}, {"mm", n.n_mm},
                      {"discarded", n.n_discarded}, {"total", n.n_total}}},
          {"matrix", {{rounded(e.table.p_pp, p), rounded(e.table.p_pm, p)},
                      {rounded(e.table.p_mp, p), rounded(e.table.p_mm, p)}}},
          {"matrix_se", {{rounded(e.se_pp, p), rounded(e.se_pm, p)},
                         {rounded(e.se_mp, p), rounded(e.se_mm, p)}}},
          {"kept_fraction", rounded(e.table.kept_fraction, p)},
          {"kept_fraction_se", rounded(e.se_kept_fraction, p)},
          {"E", rounded(e.correlation(), p)},
          {"E_se", rounded(e.correlation_se(), p)}};
    }
    jr["settings"] = std::move(settings);
    j["rows"].push_back(std::move(jr));
  }
  out << j.dump(2) << '\n';
}

// --- plan-frft -------------------------------------------------------------

PlanReport run_plan_frft(const RunConfig& c) {
  validate_for(c, Command::plan_frft);
  PlanReport report;
  for (const auto& [order, f] : c.stages)
    report.explicit_stages.push_back({order, f, frft_distance(order, f)});
  if (c.target) report.plan = plan_lens_system(*c.target, c.inventory, c.max_stages, c.angle_tol);
  return report;
}

void write_plan_csv(std::ostream& out, const PlanReport& report, int precision) {
  out << "angle,f_cm,z_cm\n";
  auto row = [&](const FrftStage& s) {
    out << format_number(s.order, precision) << ',' << format_fixed(s.focal_cm, 1) << ','
        << format_fixed(s.z_cm, 1) << '\n';
  };
  for (const auto& s : report.explicit_stages) row(s);
  if (report.plan)
    for (const auto& s : report.plan->stages) row(s);
}

void write_plan_json(std::ostream& out, const PlanReport& report, const RunConfig& c) {
  const int p = c.precision;
  auto stage_json = [&](const FrftStage& s) {
    return ordered_json{{"angle", rounded(s.order, p)},
                        {"f_cm", std::stod(format_fixed(s.focal_cm, 1))},
                        {"z_cm", std::stod(format_fixed(s.z_cm, 1))}};
  };
  ordered_json j = json_header("plan-frft", c);
  j["stages"] = ordered_json::array();
  for (const auto& s : report.explicit_stages) j["stages"].push_back(stage_json(s));
  if (report.plan) {
    ordered_json plan;
    plan["target_order"] = rounded(report.plan->target_order, p);
    plan["composed_order"] = rounded(report.plan->composed_order(), p);
    plan["deviation"] = rounded(report.plan->deviation(), p);
    plan["stages"] = ordered_json::array();
    for (const auto& s : report.plan->stages) plan["stages"].push_back(stage_json(s));
    j["plan"] = std::move(plan);
  }
  out << j.dump(2) << '\n';
}

// --- optimize --------------------------------------------------------------

OptimizeReport run_optimize(const RunConfig& c) {
  validate_for(c, Command::optimize);
  const GaussianTwoModeState state = c.state();
  OptimizeReport report;
  report.r = c.r.front();
  report.r_dimensionless = c.r_dimensionless().front();
  report.search = maximize_S(state, report.r_dimensionless, c.grid_step, c.refine_tol);
  if (c.target_fidelity) {
    const bool have_angles = c.alpha && c.alpha_prime && c.beta && c.beta_prime;
    report.tune_settings = have_angles ? c.settings(0.0) : report.search.settings;
    report.tune = tune_r(state, report.tune_settings, *c.target_fidelity, c.r_max);
  }
  std::ostringstream cmd;
  cmd << "prbox-sim optimize --config " << c.source;
  if (c.swap_widths) cmd << " --swap-widths";
  report.reproduce = cmd.str();
  return report;
}

void write_optimize_csv(std::ostream& out, const OptimizeReport& rep, const RunConfig& c) {
  const int p = c.precision;
  const auto& s = rep.search.settings;
  out << "r,r_unit,alpha,alpha_prime,beta,beta_prime,S,fidelity,iterations,converged,"
         "target_fidelity,tuned_r,tuned_fidelity,reproduce\n";
  out << format_number(rep.r, p) << ',' << c.r_unit_name() << ',' << format_number(s.alpha, p)
      << ',' << format_number(s.alpha_prime, p) << ',' << format_number(s.beta, p) << ','
      << format_number(s.beta_prime, p) << ',' << format_number(rep.search.objective, p) << ','
      << format_number(pr_fidelity(rep.search.objective), p) << ',' << rep.search.iterations
      << ',' << (rep.search.converged ? "true" : "false") << ',';
  if (rep.tune)
    out << format_number(*c.target_fidelity, p) << ',' << format_number(rep.tune->r, p) << ','
        << format_number(rep.tune->fidelity, p);
  else
    out << ",,";
  out << ",\"" << rep.reproduce << "\"\n";
}

void write_optimize_json(std::ostream& out, const OptimizeReport& rep, const RunConfig& c) {
  const int p = c.precision;
  const auto& s = rep.search.settings;
  ordered_json j = json_header("optimize", c);
  j["state"] = state_json(c);
  j["r"] = rounded(rep.r, p);
  j["r_unit"] = c.r_unit_name();
  j["r_dimensionless"] = rounded(rep.r_dimensionless, p);
  j["search"] = {{"settings",
                  {{"alpha", rounded(s.alpha, p)},
                   {"alpha_prime", rounded(s.alpha_prime, p)},
                   {"beta", rounded(s.beta, p)},
                   {"beta_prime", rounded(s.beta_prime, p)}}},
                 {"S", rounded(rep.search.objective, p)},
                 {"fidelity", rounded(pr_fidelity(rep.search.objective), p)},
                 {"iterations", rep.search.iterations},
                 {"converged", rep.search.converged}};
  if (rep.tune) {
    const auto& t = rep.tune_settings;
    j["tune"] = {{"target_fidelity", rounded(*c.target_fidelity, p)},
                 {"r_dimensionless", rounded(rep.tune->r, p)},
                 {"fidelity", rounded(rep.tune->fidelity, p)},
                 {"settings",
                  {{"alpha", rounded(t.alpha, p)},
                   {"alpha_prime", rounded(t.alpha_prime, p)},
                   {"beta", rounded(t.beta, p)},
                   {"beta_prime", rounded(t.beta_prime, p)}}}};
  }
  j["reproduce"] = rep.reproduce;
  out << j.dump(2) << '\n';
}

// --- entry point -----------------------------------------------------------

namespace {

template <typename Writer>
void emit(const RunConfig& c, std::ostream& stdout_stream, Writer&& write) {
  if (c.path.empty()) {
    write(stdout_stream);
    finish(stdout_stream, "standard output");
    return;
  }
  std::ofstream file = open_output(c.path);
  write(file);
  finish(file, "'" + c.path + "'");
}

void execute(const RunConfig& c, Command command, std::ostream& stdout_stream) {
  const bool json = c.format == OutputFormat::json;
  switch (command) {
    case Command::sweep: {
      if (c.path.empty())
        throw ConfigError(c.source + ": key 'path': sweep needs an output directory (or --out)");
      const SweepReport report = run_sweep(c);
      const std::filesystem::path dir(c.path);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw IoError("cannot create output directory '" + c.path + "': " + ec.message());
      if (json) {
        std::ofstream f = open_output(dir / "sweep.json");
        write_sweep_json(f, report, c);
        finish(f, "sweep.json");
        return;
      }
      for (std::size_t i = 0; i < report.curves.size(); ++i) {
        const auto name = sweep_file_name(report, i);
        std::ofstream f = open_output(dir / name);
        write_sweep_curve_csv(f, report.curves[i], c.precision);
        finish(f, name);
      }
      if (report.reference) {
        std::ofstream f = open_output(dir / "reference.csv");
        write_reference_csv(f, *report.reference, c.precision);
        finish(f, "reference.csv");
      }
      return;
    }
    case Command::chsh: {
      const auto rows = run_chsh(c);
      emit(c, stdout_stream, [&](std::ostream& o) {
        json ? write_chsh_json(o, rows, c) : write_chsh_csv(o, rows, c);
      });
      return;
    }
    case Command::mc: {
      const auto rows = run_mc(c);
      emit(c, stdout_stream, [&](std::ostream& o) {
        json ? write_mc_json(o, rows, c) : write_mc_csv(o, rows, c);
      });
      return;
    }
    case Command::plan_frft: {
      const auto report = run_plan_frft(c);
      emit(c, stdout_stream, [&](std::ostream& o) {
        json ? write_plan_json(o, report, c) : write_plan_csv(o, report, c.precision);
      });
      return;
    }
    case Command::optimize: {
      const auto report = run_optimize(c);
      emit(c, stdout_stream, [&](std::ostream& o) {
        json ? write_optimize_json(o, report, c) : write_optimize_csv(o, report, c);
      });
      return;
    }
  }
}

}  // namespace

int run(const Invocation& inv, std::ostream& stdout_stream, std::ostream& stderr_stream) {
  try {
    RunConfig config = load_config(inv.config_path);
    if (inv.out) config.path = *inv.out;
    if (inv.format) config.format = *inv.format;
    if (inv.seed) config.seed = *inv.seed;
    if (inv.swap_widths) config.swap_widths = true;
    validate_for(config, inv.command);
    execute(config, inv.command, stdout_stream);
    return 0;
  } catch (const IoError& e) {
    stderr_stream << "error: " << e.what() << '\n';
    return 4;
  } catch (const InvalidArgument& e) {
    stderr_stream << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    stderr_stream << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace prbox::cli
