#pragma once

#include <cstddef>
#include <functional>

#include "prbox/chsh.hpp"

namespace prbox {

struct SearchResult {
  MeasurementSettings settings;
  double objective = 0.0;
  std::size_t iterations = 0;  // refinement sweeps
  bool converged = false;
};

/// Maximizes bell_S over (alpha, alpha', beta, beta') at fixed r.
///
/// Stage 1 evaluates E on the grid {k * grid_step} x {k * grid_step} in
/// [0, 2 pi) and scans every quadruple; the first maximum in lexicographic
/// (alpha, alpha', beta, beta') order wins. Stage 2 runs coordinate-wise
/// golden-section sweeps over +-grid_step around the incumbent until no
/// angle moves by refine_tol or more. Local optimum only.
SearchResult maximize_S(const GaussianTwoModeState& state, double r, double grid_step,
                        double refine_tol);

/// Golden-section search for a maximum of f on [lo, hi]; stops when the
/// bracket is narrower than tol. Returns the abscissa.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tol);

struct TuneResult {
  double r = 0.0;
  double fidelity = 0.0;
  std::size_t iterations = 0;
};

/// Smallest dark-region half-width r in [0, r_max] at which the PR fidelity
/// reaches target_fidelity, holding the angles of `settings` fixed (its r is
/// ignored). Fidelity must be non-decreasing on kMonotoneSamples points of
/// the bracket; bisection to kTuneRTolerance.
TuneResult tune_r(const GaussianTwoModeState& state, const MeasurementSettings& settings,
                  double target_fidelity, double r_max);

inline constexpr double kTuneRTolerance = 1e-4;
inline constexpr std::size_t kMonotoneSamples = 32;

}  // namespace prbox
