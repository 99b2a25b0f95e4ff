#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "prbox/chsh.hpp"
#include "prbox/error.hpp"
#include "prbox/montecarlo.hpp"

using namespace prbox;
using std::numbers::pi;

namespace {

const GaussianTwoModeState kState{0.75, 1.25};

}  // namespace

TEST_CASE("sample_pairs") {
  const BivariateGaussian bg(0.8, 1.9, -0.6);
  const std::uint64_t n = 400'000;
  const auto pairs = sample_pairs(bg, n, 42);
  REQUIRE(pairs.size() == n);

  double m1 = 0, m2 = 0;
  for (const auto& [x1, x2] : pairs) {
    m1 += x1;
    m2 += x2;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 4 * std::sqrt(bg.var1() / n));
  CHECK(std::abs(m2) < 4 * std::sqrt(bg.var2() / n));

  double s11 = 0, s22 = 0, s12 = 0;
  for (const auto& [x1, x2] : pairs) {
    s11 += (x1 - m1) * (x1 - m1);
    s22 += (x2 - m2) * (x2 - m2);
    s12 += (x1 - m1) * (x2 - m2);
  }
  const double rho_hat = s12 / std::sqrt(s11 * s22);
  // Fisher z is approximately normal with standard error 1 / sqrt(n - 3)
  CHECK(std::abs(std::atanh(rho_hat) - std::atanh(bg.corr())) < 4 / std::sqrt(n - 3.0));

  SUBCASE("same seed, same stream; other seed, other stream") {
    const auto again = sample_pairs(bg, 100, 42);
    for (std::size_t i = 0; i < 100; ++i) CHECK(again[i] == pairs[i]);
    CHECK(sample_pairs(bg, 100, 43)[0] != pairs[0]);
  }

  CHECK_THROWS_AS(sample_pairs(BivariateGaussian(1.0, 1.0, 1.0), 10, 1), NumericalError);
}

TEST_CASE("derive_chunk_seed") {
  CHECK(derive_chunk_seed(1, 0) == derive_chunk_seed(1, 0));
  CHECK(derive_chunk_seed(1, 0) != derive_chunk_seed(1, 1));
  CHECK(derive_chunk_seed(1, 0) != derive_chunk_seed(2, 0));
  CHECK(setting_seed(7, 0) != setting_seed(7, 1));
}

TEST_CASE("simulate_counts") {
  SUBCASE("no discards without a dark region") {
    const auto c = simulate_counts(kState, pi, 5 * pi / 4, 0.0, 200'000, 1);
    CHECK(c.n_discarded == 0);
    CHECK(c.n_kept() == 200'000);
    CHECK(c.n_total == 200'000);
    CHECK(c.seed == 1);
  }

  SUBCASE("separable quadrants are equally likely") {
    const std::uint64_t n = 1'000'000;
    const auto c = simulate_counts(GaussianTwoModeState::separable(1.0), 0.3, 1.2, 0.0, n, 5);
    for (auto k : {c.n_pp, c.n_pm, c.n_mp, c.n_mm})
      CHECK(std::abs(static_cast<double>(k) - n / 4.0) < 4 * std::sqrt(static_cast<double>(n)));
  }

  SUBCASE("kept fraction matches the analytic mass") {
    const std::uint64_t n = 1'000'000;
    for (double r : {0.25, 0.5, 1.0, 1.5}) {
      const auto c = simulate_counts(kState, pi / 2, 3 * pi / 4, r, n, 11);
      CHECK(c.n_kept() + c.n_discarded == c.n_total);
      const double kept = postselected_probs(kState, pi / 2, 3 * pi / 4, r).kept_fraction;
      const double observed = static_cast<double>(c.n_kept()) / n;
      CHECK(std::abs(observed - kept) < 4 * std::sqrt(kept * (1 - kept) / n));
    }
  }

  SUBCASE("estimated kept fraction decreases in steps of 0.25") {
    std::uint64_t previous = ~0ull;
    for (double r = 0.0; r <= 2.0; r += 0.25) {
      const auto c = simulate_counts(kState, pi, 5 * pi / 4, r, 1'000'000, 3);
      CHECK(c.n_kept() < previous);
      previous = c.n_kept();
    }
  }

  SUBCASE("bit-identical across repeats and worker counts") {
    const BivariateGaussian bg = position_joint_density(kState, pi, 3 * pi / 4);
    const std::uint64_t n = 3 * kSamplesPerChunk + 123;
    const auto one = simulate_counts(bg, 0.4, n, 77, 1);
    CHECK(one == simulate_counts(bg, 0.4, n, 77, 1));
    CHECK(one == simulate_counts(bg, 0.4, n, 77, 3));
    CHECK(one == simulate_counts(bg, 0.4, n, 77, 8));
  }

  SUBCASE("merging is a plain sum") {
    CountTable a{1, 2, 3, 4, 5, 9, 15}, b{10, 20, 30, 40, 50, 9, 150};
    a += b;
    CHECK(a == CountTable{11, 22, 33, 44, 55, 9, 165});
  }
}

TEST_CASE("estimate_probabilities") {
  const auto e = estimate_probabilities(CountTable{250, 250, 250, 250, 0, 0, 1000});
  for (double p : {e.table.p_pp, e.table.p_pm, e.table.p_mp, e.table.p_mm}) CHECK(p == 0.25);
  for (double se : {e.se_pp, e.se_pm, e.se_mp, e.se_mm}) CHECK(se == doctest::Approx(0.0137).epsilon(1e-2));
  CHECK(e.table.kept_fraction == 1.0);
  CHECK(e.n_kept == 1000);
  CHECK(e.correlation() == 0.0);
  CHECK(e.correlation_se() == doctest::Approx(std::sqrt(1.0 / 1000)));

  const auto half = estimate_probabilities(CountTable{100, 0, 0, 100, 200, 0, 400});
  CHECK(half.table.kept_fraction == 0.5);
  CHECK(half.se_kept_fraction == doctest::Approx(0.025));

  CHECK_THROWS_WITH_AS(estimate_probabilities(CountTable{20, 20, 20, 20, 0, 0, 80}),
                       doctest::Contains("100"), NumericalError);

  SUBCASE("marginals near one half at r = 0.5") {
    for (double beta : {5 * pi / 4, 3 * pi / 4}) {
      const auto est = estimate_probabilities(simulate_counts(kState, pi, beta, 0.5, 1'000'000, 21));
      const double alice = est.table.alice_plus();
      const double se = std::sqrt(0.25 / est.n_kept);
      CHECK(std::abs(alice - 0.5) < 4 * se);
      CHECK(std::abs(est.table.bob_plus() - 0.5) < 4 * se);
    }
  }
}

TEST_CASE("mc_bell_S") {
  const MeasurementSettings experiment{pi, pi / 2, 5 * pi / 4, 3 * pi / 4, 0.0};

  SUBCASE("separable state has no correlation") {
    const auto est = mc_bell_S(GaussianTwoModeState::separable(1.0), experiment, 200'000, 9);
    CHECK(std::abs(est.S) < 4 * est.se);
  }

  SUBCASE("agrees with the analytic value for random cases") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> width(0.4, 1.5), ratio(1.1, 2.5), angle(0, 2 * pi), rr(0, 1.2);
    for (int i = 0; i < 8; ++i) {
      const double d = width(rng);
      const GaussianTwoModeState s(d, d * ratio(rng));
      const MeasurementSettings m{angle(rng), angle(rng), angle(rng), angle(rng), rr(rng)};
      const auto est = mc_bell_S(s, m, 1'000'000, 100 + i);
      CHECK(std::abs(est.S - bell_S(s, m)) < 4 * est.se);
    }
  }

  SUBCASE("deterministic per seed") {
    auto m = experiment;
    m.r = 1.0;
    const auto a = mc_bell_S(kState, m, 100'000, 4);
    const auto b = mc_bell_S(kState, m, 100'000, 4);
    CHECK(a.S == b.S);
    for (int i = 0; i < 4; ++i) CHECK(a.counts[i] == b.counts[i]);
  }
}

TEST_CASE("statistical consistency over many configurations") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> width(0.4, 1.8), ratio(1.1, 3.0), angle(0, 2 * pi), rr(0, 1.5);
  int outliers = 0;
  for (int i = 0; i < 50; ++i) {
    const double d = width(rng);
    const GaussianTwoModeState s(d, d * ratio(rng));
    const double a = angle(rng), b = angle(rng);
    const auto bg = position_joint_density(s, a, b);
    const double r = rr(rng) * std::sqrt(std::min(bg.var1(), bg.var2()));
    const auto est = estimate_probabilities(simulate_counts(s, a, b, r, 200'000, 500 + i));
    const double exact = correlation_E(postselected_probs(s, a, b, r));
    if (std::abs(est.correlation() - exact) > 4 * est.correlation_se()) ++outliers;
  }
  CHECK(outliers <= 2);
}
