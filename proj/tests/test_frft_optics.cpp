#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "prbox/error.hpp"
#include "prbox/frft_optics.hpp"

using namespace prbox;
using std::numbers::pi;

namespace {

constexpr double kTolCm = FrftStage::kLengthTolCm;

double circular_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2 * pi);
  return std::min(d, 2 * pi - d);
}

}  // namespace

TEST_CASE("frft_distance") {
  CHECK(std::abs(frft_distance(pi / 2, 25.0) - 25.0) < 1e-12);
  CHECK(std::abs(frft_distance(3 * pi / 4, 15.0) - 25.6) < kTolCm);
  CHECK(std::abs(frft_distance(29 * pi / 50, 20.0) - 25.0) < kTolCm);
  CHECK(std::abs(frft_distance(pi / 2, 50.0) - 50.0) < 1e-12);
  CHECK(std::abs(frft_distance(pi, 10.0) - 20.0) < 1e-12);
  // f (1 - cos theta) is the same relation written without the square
  CHECK(std::abs(frft_distance(37 * pi / 50, 30.0) - 30.0 * (1 - std::cos(37 * pi / 50))) < 1e-12);

  CHECK_THROWS_AS(frft_distance(0.0, 10.0), InvalidArgument);
  CHECK_THROWS_AS(frft_distance(2 * pi, 10.0), InvalidArgument);
  CHECK_THROWS_AS(frft_distance(1.0, -1.0), InvalidArgument);
}

TEST_CASE("frft_distance is increasing on (0, pi]") {
  for (double f : {5.0, 25.0, 80.0}) {
    double previous = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      const double z = frft_distance(pi * i / 1000.0, f);
      CHECK(z > previous);
      previous = z;
    }
  }
}

TEST_CASE("frft_order_from_distance inverts frft_distance") {
  for (double f : {15.0, 30.0})
    for (int i = 1; i <= 50; ++i) {
      const double theta = pi * i / 50.0;
      CHECK(std::abs(frft_order_from_distance(frft_distance(theta, f), f) - theta) < 1e-9);
    }
  CHECK_THROWS_AS(frft_order_from_distance(61.0, 30.0), InvalidArgument);
  CHECK_THROWS_AS(frft_order_from_distance(0.0, 30.0), InvalidArgument);
}

TEST_CASE("FrftStage::is_consistent") {
  CHECK(FrftStage{3 * pi / 4, 15.0, 25.6}.is_consistent());
  CHECK_FALSE(FrftStage{3 * pi / 4, 15.0, 25.7}.is_consistent());
  CHECK_FALSE(FrftStage{0.0, 15.0, 0.0}.is_consistent());
}

TEST_CASE("compose_orders") {
  const std::vector<double> alpha{pi / 2, 29 * pi / 50};
  CHECK(std::abs(compose_orders(alpha) - 27 * pi / 25) < 1e-12);
  const std::vector<double> beta{pi / 2, 3 * pi / 4};
  CHECK(std::abs(compose_orders(beta) - 5 * pi / 4) < 1e-12);
  const std::vector<double> single{1.3};
  CHECK(compose_orders(single) == 1.3);
  const std::vector<double> wrap{3 * pi / 2, pi};
  CHECK(std::abs(compose_orders(wrap) - pi / 2) < 1e-12);
  CHECK_THROWS_AS(compose_orders(std::vector<double>{}), InvalidArgument);

  SUBCASE("associative and order independent") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(0, 2 * pi);
    for (int i = 0; i < 100; ++i) {
      const double a = angle(rng), b = angle(rng), c = angle(rng);
      const std::vector<double> ab{a, b}, bc{b, c}, cba{c, b, a}, abc{a, b, c};
      const std::vector<double> left{compose_orders(ab), c}, right{a, compose_orders(bc)};
      CHECK(circular_gap(compose_orders(left), compose_orders(right)) < 1e-12);
      CHECK(circular_gap(compose_orders(abc), compose_orders(cba)) < 1e-12);
    }
  }
}

TEST_CASE("plan_lens_system") {
  SUBCASE("two-lens composition for 5 pi / 4") {
    const std::vector<double> inventory{25.0, 15.0};
    const auto plan = plan_lens_system(5 * pi / 4, inventory, 2, 1e-6);
    REQUIRE(plan.stages.size() == 2);
    CHECK(std::abs(plan.stages[0].order - pi / 2) < 1e-12);
    CHECK(plan.stages[0].focal_cm == 25.0);
    CHECK(std::abs(plan.stages[0].z_cm - 25.0) < kTolCm);
    CHECK(std::abs(plan.stages[1].order - 3 * pi / 4) < 1e-12);
    CHECK(plan.stages[1].focal_cm == 15.0);
    CHECK(std::abs(plan.stages[1].z_cm - 25.6) < kTolCm);
    CHECK(plan.deviation() < 1e-12);
  }

  SUBCASE("single Fourier stage") {
    const std::vector<double> inventory{50.0};
    const auto plan = plan_lens_system(pi / 2, inventory, 1, 1e-6);
    REQUIRE(plan.stages.size() == 1);
    CHECK(plan.stages[0].focal_cm == 50.0);
    CHECK(std::abs(plan.stages[0].z_cm - 50.0) < kTolCm);
  }

  SUBCASE("identity target") {
    const std::vector<double> inventory{50.0};
    CHECK(plan_lens_system(0.0, inventory, 3, 1e-6).stages.empty());
    CHECK(plan_lens_system(2 * pi, inventory, 3, 1e-6).stages.empty());
  }

  SUBCASE("fewer stages win a tie") {
    const std::vector<double> inventory{25.0, 15.0, 40.0};
    const auto plan = plan_lens_system(3 * pi / 4, inventory, 3, 1e-9);
    CHECK(plan.stages.size() == 1);
  }

  SUBCASE("errors") {
    const std::vector<double> none;
    CHECK_THROWS_AS(plan_lens_system(pi, none, 2, 1e-6), InvalidArgument);
    const std::vector<double> one{25.0};
    CHECK_THROWS_AS(plan_lens_system(pi, one, 0, 1e-6), InvalidArgument);
    // a single lens reaches at most pi
    CHECK_THROWS_WITH_AS(plan_lens_system(3 * pi / 2, one, 1, 1e-6), doctest::Contains("deviation"),
                         NumericalError);
  }

  SUBCASE("returned plans are self-consistent; a superset inventory never does worse") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> angle(0.05, 2 * pi - 0.05), focal(5.0, 60.0);
    for (int i = 0; i < 60; ++i) {
      const double target = angle(rng);
      std::vector<double> small{focal(rng)};
      std::vector<double> large = small;
      large.push_back(focal(rng));
      large.push_back(focal(rng));
      const auto a = plan_lens_system(target, small, 3, 10.0);
      const auto b = plan_lens_system(target, large, 3, 10.0);
      CHECK(b.deviation() <= a.deviation() + 1e-12);
      for (const auto* plan : {&a, &b}) {
        CHECK(std::abs(plan->deviation() - circular_gap(plan->composed_order(), target)) < 1e-12);
        for (const auto& s : plan->stages) {
          CHECK(s.is_consistent());
          CHECK(s.order > 0.0);
          CHECK(s.order <= pi + 1e-12);
        }
      }
    }
  }
}
