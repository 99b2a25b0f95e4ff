#include "prbox/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "prbox/error.hpp"
#include "prbox/parallel.hpp"

namespace prbox {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
// phi(u) is below the smallest subnormal beyond this many units past h.
constexpr double kUpperSpan = 40.0;
constexpr double kRelTol = 1e-13;
constexpr unsigned kMaxDepth = 20;

double upper_tail(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

double sign_of(Outcome o) { return o == Outcome::plus ? 1.0 : -1.0; }

double integrate(const auto& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth,
                                                                        kRelTol);
}

}  // namespace

void MeasurementSettings::validate() const {
  for (double angle : {alpha, alpha_prime, beta, beta_prime})
    if (!std::isfinite(angle)) throw InvalidArgument("settings: angles must be finite");
  if (!(r >= 0.0) || !std::isfinite(r))
    throw InvalidArgument("settings: dark-region half-width r must be finite and >= 0");
}

double quadrant_probability(const BivariateGaussian& bg, Outcome first, Outcome second,
                            double r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw InvalidArgument("quadrant_probability: r must be finite and >= 0");
  const double h = r / std::sqrt(bg.var1());
  const double k = r / std::sqrt(bg.var2());
  const double rho = sign_of(first) * sign_of(second) * bg.corr();

  if (rho >= 1.0) return upper_tail(std::max(h, k));
  if (rho <= -1.0) return std::max(0.0, upper_tail(k) - upper_tail(-h));  // P(h < u < -k)

  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  auto integrand = [=](double u) {
    return kInvSqrt2Pi * std::exp(-0.5 * u * u) * upper_tail((k - rho * u) / s);
  };

  const double upper = h + kUpperSpan;
  double split = h;
  if (rho != 0.0) split = std::clamp(k / rho, h, upper);
  return integrate(integrand, h, split) + integrate(integrand, split, upper);
}

JointProbTable postselected_probs(const BivariateGaussian& bg, double r) {
  const double pp = quadrant_probability(bg, Outcome::plus, Outcome::plus, r);
  const double pm = quadrant_probability(bg, Outcome::plus, Outcome::minus, r);
  const double mp = quadrant_probability(bg, Outcome::minus, Outcome::plus, r);
  const double mm = quadrant_probability(bg, Outcome::minus, Outcome::minus, r);
  const double kept = pp + pm + mp + mm;
  if (!(kept >= kMinKeptFraction)) {
    std::ostringstream msg;
    msg << "post-selection keeps a fraction " << kept << " < " << kMinKeptFraction
        << " of pairs at r = " << r << "; the dark region swallows the distribution";
    throw NumericalError(msg.str());
  }
  return {pp / kept, pm / kept, mp / kept, mm / kept, std::min(kept, 1.0)};
}

JointProbTable postselected_probs(const GaussianTwoModeState& state, double alpha, double beta,
                                  double r) {
  return postselected_probs(position_joint_density(state, alpha, beta), r);
}

double correlation_E(const JointProbTable& t) { return (t.p_pp + t.p_mm) - (t.p_pm + t.p_mp); }

double sign_expectation(const GaussianTwoModeState& state, double alpha, double beta) {
  return 2.0 / std::numbers::pi * std::asin(position_joint_density(state, alpha, beta).corr());
}

double ChshTables::mean_kept_fraction() const {
  return 0.25 * (ab.kept_fraction + apb.kept_fraction + abp.kept_fraction + apbp.kept_fraction);
}

ChshTables chsh_tables(const GaussianTwoModeState& state, const MeasurementSettings& st) {
  st.validate();
  return {postselected_probs(state, st.alpha, st.beta, st.r),
          postselected_probs(state, st.alpha_prime, st.beta, st.r),
          postselected_probs(state, st.alpha, st.beta_prime, st.r),
          postselected_probs(state, st.alpha_prime, st.beta_prime, st.r)};
}

double bell_S(const ChshTables& t) {
  return correlation_E(t.ab) + correlation_E(t.apb) + correlation_E(t.abp) -
         correlation_E(t.apbp);
}

double bell_S(const GaussianTwoModeState& state, const MeasurementSettings& settings) {
  return bell_S(chsh_tables(state, settings));
}

double pr_fidelity(double S) { return (S + 4.0) / 8.0; }

double and_gate_success(const ChshTables& t) {
  return 0.25 * (t.ab.p_pp + t.ab.p_mm + t.apb.p_pp + t.apb.p_mm + t.abp.p_pp + t.abp.p_mm +
                 t.apbp.p_pm + t.apbp.p_mp);
}

double and_gate_success(const GaussianTwoModeState& state, const MeasurementSettings& settings) {
  return and_gate_success(chsh_tables(state, settings));
}

NoSignalingReport no_signaling_report(const ChshTables& tables) {
  NoSignalingReport report;
  const auto all = tables.all();
  for (std::size_t i = 0; i < all.size(); ++i) {
    report.alice_plus[i] = all[i]->alice_plus();
    report.bob_plus[i] = all[i]->bob_plus();
    report.max_deviation = std::max({report.max_deviation, std::abs(report.alice_plus[i] - 0.5),
                                     std::abs(report.bob_plus[i] - 0.5)});
  }
  return report;
}

NoSignalingReport no_signaling_report(const GaussianTwoModeState& state,
                                      const MeasurementSettings& settings) {
  return no_signaling_report(chsh_tables(state, settings));
}

std::vector<CurvePoint> sweep_beta(const GaussianTwoModeState& state, double alpha, double r,
                                   std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("sweep_beta: empty beta grid");
  std::vector<CurvePoint> curve(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    curve[i] = {grid[i], correlation_E(postselected_probs(state, alpha, grid[i], r))};
  });
  return curve;
}

std::vector<CurvePoint> quantum_reference_curve(std::span<const double> grid, double phase) {
  if (grid.empty()) throw InvalidArgument("quantum_reference_curve: empty beta grid");
  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  for (double b : grid) curve.push_back({b, std::sin(b + phase)});
  return curve;
}

}  // namespace prbox
