#include "prbox/montecarlo.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "prbox/error.hpp"
#include "prbox/parallel.hpp"

namespace prbox {

namespace {

constexpr double kMaxSampledCorr = 1.0 - 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct CholeskyFactor {
  double l11, l21, l22;
};

CholeskyFactor factor(const BivariateGaussian& bg) {
  if (std::abs(bg.corr()) > kMaxSampledCorr)
    throw NumericalError("sampling: |corr| exceeds 1 - 1e-12, Cholesky factor is degenerate");
  const double s1 = std::sqrt(bg.var1());
  const double s2 = std::sqrt(bg.var2());
  return {s1, bg.corr() * s2, s2 * std::sqrt(1.0 - bg.corr() * bg.corr())};
}

std::uint64_t chunk_count(std::uint64_t n) { return (n + kSamplesPerChunk - 1) / kSamplesPerChunk; }

std::uint64_t chunk_size(std::uint64_t n, std::uint64_t chunk) {
  const std::uint64_t begin = chunk * kSamplesPerChunk;
  return std::min(kSamplesPerChunk, n - begin);
}

// Draws one chunk and hands each pair to `sink`.
template <typename Sink>
void draw_chunk(const CholeskyFactor& l, std::uint64_t seed, std::uint64_t chunk,
                std::uint64_t count, Sink&& sink) {
  std::mt19937_64 engine(derive_chunk_seed(seed, chunk));
  std::normal_distribution<double> normal;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double z1 = normal(engine);
    const double z2 = normal(engine);
    sink(l.l11 * z1, l.l21 * z1 + l.l22 * z2);
  }
}

}  // namespace

CountTable& CountTable::operator+=(const CountTable& o) {
  n_pp += o.n_pp;
  n_pm += o.n_pm;
  n_mp += o.n_mp;
  n_mm += o.n_mm;
  n_discarded += o.n_discarded;
  n_total += o.n_total;
  return *this;
}

std::uint64_t derive_chunk_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::uint64_t setting_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(seed + 0x2545f4914f6cdd1dULL * (index + 1));
}

std::vector<std::pair<double, double>> sample_pairs(const BivariateGaussian& bg, std::uint64_t n,
                                                    std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample_pairs: n must be >= 1");
  const CholeskyFactor l = factor(bg);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (std::uint64_t c = 0; c < chunk_count(n); ++c)
    draw_chunk(l, seed, c, chunk_size(n, c), [&](double x1, double x2) { out.emplace_back(x1, x2); });
  return out;
}

CountTable simulate_counts(const BivariateGaussian& bg, double r, std::uint64_t n,
                           std::uint64_t seed, std::size_t workers) {
  if (n < 1) throw InvalidArgument("simulate_counts: n must be >= 1");
  if (!(r >= 0.0) || !std::isfinite(r))
    throw InvalidArgument("simulate_counts: r must be finite and >= 0");
  const CholeskyFactor l = factor(bg);
  const std::uint64_t chunks = chunk_count(n);
  std::vector<CountTable> partial(chunks);
  parallel_for(
      chunks,
      [&](std::size_t c) {
        CountTable t;
        t.n_total = chunk_size(n, c);
        draw_chunk(l, seed, c, t.n_total, [&](double x1, double x2) {
          if (std::abs(x1) <= r || std::abs(x2) <= r) {
            ++t.n_discarded;
          } else if (x1 > 0.0) {
            ++(x2 > 0.0 ? t.n_pp : t.n_pm);
          } else {
            ++(x2 > 0.0 ? t.n_mp : t.n_mm);
          }
        });
        partial[c] = t;
      },
      workers);

  CountTable total;
  for (const auto& p : partial) total += p;
  total.seed = seed;
  return total;
}

CountTable simulate_counts(const GaussianTwoModeState& state, double alpha, double beta, double r,
                           std::uint64_t n, std::uint64_t seed, std::size_t workers) {
  return simulate_counts(position_joint_density(state, alpha, beta), r, n, seed, workers);
}

CountTable simulate_counts(const GaussianTwoModeState& state, double alpha, double beta, double r,
                           std::uint64_t n, std::uint64_t seed) {
  return simulate_counts(state, alpha, beta, r, n, seed, default_worker_count());
}

double ProbabilityEstimate::correlation_se() const {
  const double e = correlation();
  return std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(n_kept));
}

ProbabilityEstimate estimate_probabilities(const CountTable& counts) {
  const std::uint64_t kept = counts.n_kept();
  if (kept < kMinKeptCounts) {
    std::ostringstream msg;
    msg << "estimate_probabilities: only " << kept << " pairs survived post-selection; at least "
        << kMinKeptCounts << " are required";
    throw NumericalError(msg.str());
  }
  const double nk = static_cast<double>(kept);
  const double nt = static_cast<double>(counts.n_total);
  auto se = [nk](double p) { return std::sqrt(p * (1.0 - p) / nk); };

  ProbabilityEstimate est;
  est.n_kept = kept;
  est.table.p_pp = static_cast<double>(counts.n_pp) / nk;
  est.table.p_pm = static_cast<double>(counts.n_pm) / nk;
  est.table.p_mp = static_cast<double>(counts.n_mp) / nk;
  est.table.p_mm = static_cast<double>(counts.n_mm) / nk;
  est.table.kept_fraction = nk / nt;
  est.se_pp = se(est.table.p_pp);
  est.se_pm = se(est.table.p_pm);
  est.se_mp = se(est.table.p_mp);
  est.se_mm = se(est.table.p_mm);
  est.se_kept_fraction =
      std::sqrt(est.table.kept_fraction * (1.0 - est.table.kept_fraction) / nt);
  return est;
}

McBellEstimate mc_bell_S(const GaussianTwoModeState& state, const MeasurementSettings& st,
                         std::uint64_t n_per_setting, std::uint64_t seed) {
  st.validate();
  const std::array<std::pair<double, double>, 4> angles{{{st.alpha, st.beta},
                                                         {st.alpha_prime, st.beta},
                                                         {st.alpha, st.beta_prime},
                                                         {st.alpha_prime, st.beta_prime}}};
  McBellEstimate out;
  double var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    out.counts[i] = simulate_counts(state, angles[i].first, angles[i].second, st.r, n_per_setting,
                                    setting_seed(seed, i));
    out.estimates[i] = estimate_probabilities(out.counts[i]);
    const double e = out.estimates[i].correlation();
    out.S += (i == 3 ? -e : e);
    var += std::pow(out.estimates[i].correlation_se(), 2);
  }
  out.se = std::sqrt(var);
  return out;
}

}  // namespace prbox
