#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "prbox/chsh.hpp"
#include "prbox/core_state.hpp"

namespace prbox {

/// Coincidence counts for one pair of settings. Merging is a plain sum.
struct CountTable {
  std::uint64_t n_pp = 0;
  std::uint64_t n_pm = 0;
  std::uint64_t n_mp = 0;
  std::uint64_t n_mm = 0;
  std::uint64_t n_discarded = 0;
  std::uint64_t seed = 0;
  std::uint64_t n_total = 0;

  std::uint64_t n_kept() const { return n_pp + n_pm + n_mp + n_mm; }
  CountTable& operator+=(const CountTable& other);
  friend bool operator==(const CountTable&, const CountTable&) = default;
};

/// Samples are generated in fixed-size chunks, each with its own generator
/// seeded from (seed, chunk index). Results therefore do not depend on how
/// many workers process the chunks.
inline constexpr std::uint64_t kSamplesPerChunk = 1u << 16;

/// Deterministic seed of chunk `index` under master seed `seed` (splitmix64).
std::uint64_t derive_chunk_seed(std::uint64_t seed, std::uint64_t index);

/// n i.i.d. draws from bg via its Cholesky factor, concatenated over chunks
/// in chunk order. Rejects |corr| > 1 - 1e-12.
std::vector<std::pair<double, double>> sample_pairs(const BivariateGaussian& bg, std::uint64_t n,
                                                    std::uint64_t seed);

/// Bins sampled pairs by sign; pairs with |x1| <= r or |x2| <= r are
/// discarded.
CountTable simulate_counts(const BivariateGaussian& bg, double r, std::uint64_t n,
                           std::uint64_t seed, std::size_t workers);
CountTable simulate_counts(const GaussianTwoModeState& state, double alpha, double beta, double r,
                           std::uint64_t n, std::uint64_t seed);
CountTable simulate_counts(const GaussianTwoModeState& state, double alpha, double beta, double r,
                           std::uint64_t n, std::uint64_t seed, std::size_t workers);

struct ProbabilityEstimate {
  JointProbTable table;
  // binomial standard errors, same layout as the table
  double se_pp = 0.0;
  double se_pm = 0.0;
  double se_mp = 0.0;
  double se_mm = 0.0;
  double se_kept_fraction = 0.0;
  std::uint64_t n_kept = 0;

  double correlation() const { return correlation_E(table); }
  /// E is the mean of a +-1 variable: sqrt((1 - E^2) / n_kept).
  double correlation_se() const;
};

inline constexpr std::uint64_t kMinKeptCounts = 100;

/// Throws NumericalError when fewer than kMinKeptCounts pairs survived.
ProbabilityEstimate estimate_probabilities(const CountTable& counts);

struct McBellEstimate {
  double S = 0.0;
  double se = 0.0;
  std::array<CountTable, 4> counts;  // ChshTables order
  std::array<ProbabilityEstimate, 4> estimates;
};

/// Simulates the four setting pairs with seeds derived from `seed` and
/// combines their correlations; errors added in quadrature.
McBellEstimate mc_bell_S(const GaussianTwoModeState& state, const MeasurementSettings& settings,
                         std::uint64_t n_per_setting, std::uint64_t seed);

/// Seed used for setting pair `index` (0..3) of mc_bell_S.
std::uint64_t setting_seed(std::uint64_t seed, std::size_t index);

}  // namespace prbox
