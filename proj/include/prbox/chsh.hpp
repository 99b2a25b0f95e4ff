#pragma once

#include <array>
#include <span>
#include <vector>

#include "prbox/core_state.hpp"

namespace prbox {

enum class Outcome { plus, minus };

/// Alice's two rotation angles, Bob's two, and the dark-region half-width r
/// (dimensionless: detector coordinate divided by the state's scale s).
struct MeasurementSettings {
  double alpha = 0.0;
  double alpha_prime = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;
  double r = 0.0;

  /// Throws InvalidArgument on negative r or non-finite angles.
  void validate() const;
};

/// Post-selected, renormalized outcome probabilities for one pair of
/// settings plus the fraction of pairs that survived the dark region.
struct JointProbTable {
  double p_pp = 0.25;
  double p_pm = 0.25;
  double p_mp = 0.25;
  double p_mm = 0.25;
  double kept_fraction = 1.0;

  double alice_plus() const { return p_pp + p_pm; }
  double bob_plus() const { return p_pp + p_mp; }
};

/// Un-normalized mass of bg over {s1 x1 > r} x {s2 x2 > r}.
///
/// The rectangle is reduced to one dimension by conditioning on x1:
///   P = int_h^inf phi(u) Q((k - rho' u) / sqrt(1 - rho'^2)) du,
/// h = r / sd1, k = r / sd2, rho' = s1 s2 rho, and integrated adaptively
/// (Gauss-Kronrod) with a breakpoint where the Q argument changes sign.
/// |rho| = 1 uses the degenerate one-dimensional limit.
double quadrant_probability(const BivariateGaussian& bg, Outcome first, Outcome second, double r);

/// Tables for an already-marginalized position density.
JointProbTable postselected_probs(const BivariateGaussian& bg, double r);

/// Throws NumericalError if the kept mass drops below kMinKeptFraction.
JointProbTable postselected_probs(const GaussianTwoModeState& state, double alpha, double beta,
                                  double r);

inline constexpr double kMinKeptFraction = 1e-12;

double correlation_E(const JointProbTable& table);

/// <sgn(x1^alpha) sgn(x2^beta)> without post-selection: (2/pi) asin(rho).
double sign_expectation(const GaussianTwoModeState& state, double alpha, double beta);

/// The four tables entering the Bell parameter, in the order
/// (alpha, beta), (alpha', beta), (alpha, beta'), (alpha', beta').
struct ChshTables {
  JointProbTable ab;
  JointProbTable apb;
  JointProbTable abp;
  JointProbTable apbp;

  std::array<const JointProbTable*, 4> all() const { return {&ab, &apb, &abp, &apbp}; }
  /// Mean kept fraction over the four settings (H_ave as a fraction).
  double mean_kept_fraction() const;
};

ChshTables chsh_tables(const GaussianTwoModeState& state, const MeasurementSettings& settings);

/// S = E(a,b) + E(a',b) + E(a,b') - E(a',b').
double bell_S(const ChshTables& tables);
double bell_S(const GaussianTwoModeState& state, const MeasurementSettings& settings);

/// Success probability of the probabilistic PR box with Bell value S: (S + 4) / 8.
double pr_fidelity(double S);

/// Probability that a XOR b = A AND B, averaged over the four input pairs,
/// with (alpha, beta) -> bit 0 and (alpha', beta') -> bit 1.
double and_gate_success(const ChshTables& tables);
double and_gate_success(const GaussianTwoModeState& state, const MeasurementSettings& settings);

/// P(+) for Alice and Bob under each of the four setting pairs.
struct NoSignalingReport {
  std::array<double, 4> alice_plus{};  // same order as ChshTables
  std::array<double, 4> bob_plus{};
  double max_deviation = 0.0;  // max |P(+) - 1/2|
};

NoSignalingReport no_signaling_report(const ChshTables& tables);
NoSignalingReport no_signaling_report(const GaussianTwoModeState& state,
                                      const MeasurementSettings& settings);

struct CurvePoint {
  double beta = 0.0;
  double value = 0.0;
};

/// E(alpha, beta) at fixed r for every beta in grid. Evaluated in parallel;
/// the result follows grid order.
std::vector<CurvePoint> sweep_beta(const GaussianTwoModeState& state, double alpha, double r,
                                   std::span<const double> grid);

/// Unit-amplitude overlay sin(beta + phase).
std::vector<CurvePoint> quantum_reference_curve(std::span<const double> grid, double phase);

}  // namespace prbox
