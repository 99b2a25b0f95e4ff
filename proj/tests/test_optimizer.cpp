#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "prbox/chsh.hpp"
#include "prbox/error.hpp"
#include "prbox/optimizer.hpp"

using namespace prbox;
using std::numbers::pi;

namespace {

const GaussianTwoModeState kState{0.75, 1.25};
const MeasurementSettings kExperiment{pi, pi / 2, 5 * pi / 4, 3 * pi / 4, 0.0};
constexpr double kTsirelson = 2 * std::numbers::sqrt2;

}  // namespace

TEST_CASE("golden_section_maximize") {
  const double x = golden_section_maximize([](double t) { return -(t - 0.3) * (t - 0.3); }, -1, 2, 1e-9);
  CHECK(std::abs(x - 0.3) < 1e-8);
  const double y = golden_section_maximize([](double t) { return std::sin(t); }, 0, pi, 1e-9);
  CHECK(std::abs(y - pi / 2) < 1e-7);  // flat top: limited by sqrt(eps)
  // monotone objective: the maximum sits on the bracket edge
  const double z = golden_section_maximize([](double t) { return t; }, 0, 1, 1e-9);
  CHECK(std::abs(z - 1.0) < 1e-8);
}

TEST_CASE("maximize_S") {
  SUBCASE("separable state") {
    const auto res = maximize_S(GaussianTwoModeState::separable(1.0), 0.5, pi / 4, 1e-3);
    CHECK(std::abs(res.objective) < 1e-9);
  }

  SUBCASE("never beyond Tsirelson without post-selection") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> width(0.3, 2.0), ratio(1.05, 4.0);
    for (int i = 0; i < 10; ++i) {
      const double d = width(rng);
      const auto res = maximize_S({d, d * ratio(rng)}, 0.0, pi / 8, 1e-4);
      CHECK(res.objective <= kTsirelson + 1e-6);
      CHECK(res.objective > 0.0);
    }
  }

  SUBCASE("beyond Tsirelson with a wide dark region, reproducible and bounded") {
    const auto res = maximize_S(kState, 2.0, pi / 8, 1e-4);
    CHECK(res.objective > kTsirelson);
    CHECK(res.objective <= 4.0);
    CHECK(res.converged);
    CHECK(res.settings.r == 2.0);
    CHECK(std::abs(bell_S(kState, res.settings) - res.objective) < 1e-8);
    for (double a : {res.settings.alpha, res.settings.alpha_prime, res.settings.beta, res.settings.beta_prime}) {
      CHECK(a >= 0.0);
      CHECK(a < 2 * pi);
    }

    const auto again = maximize_S(kState, 2.0, pi / 8, 1e-4);
    CHECK(again.objective == res.objective);
    CHECK(again.settings.alpha == res.settings.alpha);
    CHECK(again.settings.beta_prime == res.settings.beta_prime);
    CHECK(again.iterations == res.iterations);
  }

  SUBCASE("refinement never loses to the coarse grid") {
    const auto coarse = maximize_S(kState, 1.0, pi / 4, 10.0);
    const auto fine = maximize_S(kState, 1.0, pi / 4, 1e-5);
    CHECK(fine.objective >= coarse.objective - 1e-12);
  }

  CHECK_THROWS_AS(maximize_S(kState, 1.0, 0.0, 1e-3), InvalidArgument);
  CHECK_THROWS_AS(maximize_S(kState, -1.0, pi / 4, 1e-3), InvalidArgument);
}

TEST_CASE("tune_r") {
  SUBCASE("communication-complexity threshold") {
    const auto res = tune_r(kState, kExperiment, 0.908, 3.0);
    auto s = kExperiment;
    s.r = res.r;
    CHECK(res.r > 0.0);
    CHECK(std::abs(pr_fidelity(bell_S(kState, s)) - 0.908) < 1e-3);
    CHECK(res.fidelity >= 0.908);
    s.r = res.r - 2 * kTuneRTolerance;
    CHECK(pr_fidelity(bell_S(kState, s)) < 0.908);
  }

  SUBCASE("0.93 is reachable below r = 3") {
    auto s = kExperiment;
    s.r = 3.0;
    REQUIRE(pr_fidelity(bell_S(kState, s)) >= 0.93);
    const auto res = tune_r(kState, kExperiment, 0.93, 3.0);
    CHECK(res.r <= 3.0);
    s.r = res.r;
    CHECK(std::abs(pr_fidelity(bell_S(kState, s)) - 0.93) < 1e-3);
  }

  SUBCASE("unreachable target names the best fidelity") {
    CHECK_THROWS_WITH_AS(tune_r(kState, kExperiment, 0.99, 0.5), doctest::Contains("maximum achievable"),
                         NumericalError);
  }

  SUBCASE("targets at or below the classical bound are outside the domain") {
    // the r = 0 fidelity never exceeds 3/4, so it can never be a valid target
    auto s = kExperiment;
    s.r = 0.0;
    const double at_zero = pr_fidelity(bell_S(kState, s));
    CHECK(at_zero <= 0.75);
    CHECK_THROWS_AS(tune_r(kState, kExperiment, at_zero, 3.0), InvalidArgument);
    CHECK_THROWS_AS(tune_r(kState, kExperiment, 0.75, 3.0), InvalidArgument);
    CHECK_THROWS_AS(tune_r(kState, kExperiment, 1.0, 3.0), InvalidArgument);
    CHECK_THROWS_AS(tune_r(kState, kExperiment, 0.9, -1.0), InvalidArgument);
  }
}
