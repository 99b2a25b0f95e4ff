#include "prbox/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "prbox/angle.hpp"
#include "prbox/error.hpp"
#include "prbox/parallel.hpp"

namespace prbox {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxSweeps = 100;

double& coordinate(MeasurementSettings& s, int i) {
  switch (i) {
    case 0: return s.alpha;
    case 1: return s.alpha_prime;
    case 2: return s.beta;
    default: return s.beta_prime;
  }
}

double coordinate(const MeasurementSettings& s, int i) {
  return coordinate(const_cast<MeasurementSettings&>(s), i);
}

}  // namespace

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

SearchResult maximize_S(const GaussianTwoModeState& state, double r, double grid_step,
                        double refine_tol) {
  if (!(grid_step > 0.0) || grid_step > std::numbers::pi)
    throw InvalidArgument("maximize_S: grid step must lie in (0, pi]");
  if (!(refine_tol > 0.0)) throw InvalidArgument("maximize_S: refine_tol must be positive");
  if (!(r >= 0.0) || !std::isfinite(r))
    throw InvalidArgument("maximize_S: r must be finite and >= 0");

  const auto n = static_cast<std::size_t>(std::ceil(kTwoPi / grid_step - 1e-9));
  std::vector<double> angles(n);
  for (std::size_t i = 0; i < n; ++i) angles[i] = static_cast<double>(i) * grid_step;

  // E(angles[i], angles[j]) for Alice angle i, Bob angle j.
  std::vector<double> e(n * n);
  parallel_for(n * n, [&](std::size_t k) {
    e[k] = correlation_E(postselected_probs(state, angles[k / n], angles[k % n], r));
  });

  double best = -std::numeric_limits<double>::infinity();
  std::array<std::size_t, 4> arg{};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t ap = 0; ap < n; ++ap)
      for (std::size_t b = 0; b < n; ++b) {
        const double partial = e[a * n + b] + e[ap * n + b];
        for (std::size_t bp = 0; bp < n; ++bp) {
          const double s = partial + e[a * n + bp] - e[ap * n + bp];
          if (s > best) {
            best = s;
            arg = {a, ap, b, bp};
          }
        }
      }

  SearchResult result;
  result.settings = {angles[arg[0]], angles[arg[1]], angles[arg[2]], angles[arg[3]], r};
  double incumbent = bell_S(state, result.settings);

  for (std::size_t sweep = 0; sweep < kMaxSweeps && !result.converged; ++sweep) {
    ++result.iterations;
    const MeasurementSettings start = result.settings;
    double largest_move = 0.0;
    for (int c = 0; c < 4; ++c) {
      MeasurementSettings trial = result.settings;
      const double centre = coordinate(trial, c);
      auto objective = [&](double x) {
        coordinate(trial, c) = x;
        return bell_S(state, trial);
      };
      const double x = golden_section_maximize(objective, centre - grid_step,
                                               centre + grid_step, 0.25 * refine_tol);
      coordinate(trial, c) = x;
      const double value = bell_S(state, trial);
      if (value > incumbent) {
        largest_move = std::max(largest_move, std::abs(x - centre));
        incumbent = value;
        result.settings = trial;
      }
    }
    result.converged = largest_move < refine_tol;
    if (result.converged) break;

    // pattern move along the sweep displacement, to follow diagonal ridges
    MeasurementSettings trial = result.settings;
    double step = 0.0;
    for (int c = 0; c < 4; ++c)
      step = std::max(step, std::abs(coordinate(result.settings, c) - coordinate(start, c)));
    auto along = [&](double t) {
      for (int c = 0; c < 4; ++c)
        coordinate(trial, c) =
            coordinate(start, c) + t * (coordinate(result.settings, c) - coordinate(start, c));
      return bell_S(state, trial);
    };
    const double t = golden_section_maximize(along, 1.0, 1.0 + grid_step / step, 0.25 * refine_tol / step);
    const double value = along(t);
    if (value > incumbent) {
      incumbent = value;
      result.settings = trial;
    }
  }

  for (int c = 0; c < 4; ++c) coordinate(result.settings, c) = wrap_angle(coordinate(result.settings, c));
  result.objective = bell_S(state, result.settings);
  return result;
}

TuneResult tune_r(const GaussianTwoModeState& state, const MeasurementSettings& settings,
                  double target_fidelity, double r_max) {
  if (!(target_fidelity > 0.75 && target_fidelity < 1.0))
    throw InvalidArgument("tune_r: target fidelity must lie in (0.75, 1)");
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw InvalidArgument("tune_r: r_max must be finite and positive");

  auto fidelity_at = [&](double r) {
    MeasurementSettings s = settings;
    s.r = r;
    return pr_fidelity(bell_S(state, s));
  };

  TuneResult out;
  const double at_zero = fidelity_at(0.0);
  if (at_zero >= target_fidelity) {
    out.fidelity = at_zero;
    return out;
  }
  const double at_max = fidelity_at(r_max);
  if (at_max < target_fidelity) {
    std::ostringstream msg;
    msg << "tune_r: target fidelity " << target_fidelity << " is unreachable for r <= " << r_max
        << "; the maximum achievable there is " << at_max;
    throw NumericalError(msg.str());
  }

  std::vector<double> samples(kMonotoneSamples + 1);
  parallel_for(samples.size(), [&](std::size_t i) {
    samples[i] = fidelity_at(r_max * static_cast<double>(i) / kMonotoneSamples);
  });
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i] < samples[i - 1] - 1e-12) {
      std::ostringstream msg;
      msg << "tune_r: fidelity is not monotone in r on [0, " << r_max << "] (drops from "
          << samples[i - 1] << " to " << samples[i] << " near r = "
          << r_max * static_cast<double>(i) / kMonotoneSamples << ")";
      throw NumericalError(msg.str());
    }

  double lo = 0.0, hi = r_max, f_hi = at_max;
  while (hi - lo > kTuneRTolerance) {
    ++out.iterations;
    const double mid = 0.5 * (lo + hi);
    const double f = fidelity_at(mid);
    if (f >= target_fidelity) {
      hi = mid;
      f_hi = f;
    } else {
      lo = mid;
    }
  }
  out.r = hi;
  out.fidelity = f_hi;
  return out;
}

}  // namespace prbox
