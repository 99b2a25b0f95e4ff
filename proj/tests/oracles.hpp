#pragma once

// Reference computations for the tests. Each one takes a route that does
// not go through the library code it is used to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/owens_t.hpp>

#include "prbox/small_matrix.hpp"

namespace oracle {

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

/// P(X > h, Y > k) for standard normals with correlation rho, h, k > 0,
/// from Owen's T function.
inline double upper_orthant_owens_t(double h, double k, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  return 0.5 * normal_sf(h) + 0.5 * normal_sf(k) -
         boost::math::owens_t(h, (k - rho * h) / (h * s)) -
         boost::math::owens_t(k, (h - rho * k) / (k * s));
}

/// Sheppard's formula: P(X > 0, Y > 0) = 1/4 + asin(rho) / (2 pi).
inline double orthant_at_zero(double rho) {
  return 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
}

struct McEstimate {
  double p = 0.0;
  double se = 0.0;
};

/// Brute-force estimate of P(s1 x1 > r, s2 x2 > r), single generator,
/// correlated pair built as x2 = rho z1 + sqrt(1 - rho^2) z2.
inline McEstimate quadrant_mc(double var1, double var2, double rho, int s1, int s2, double r,
                              std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double sd1 = std::sqrt(var1), sd2 = std::sqrt(var2);
  const double c = std::sqrt(1.0 - rho * rho);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double x1 = sd1 * z1;
    const double x2 = sd2 * (rho * z1 + c * z2);
    if (s1 * x1 > r && s2 * x2 > r) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

/// Composite Gauss-Legendre rule on [a, b] with `panels` panels of 20 nodes.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

inline Rule gauss_legendre(double a, double b, int panels) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const auto& abscissa = G::abscissa();
  const auto& weights = G::weights();
  Rule rule;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      rule.x.push_back(mid + half * abscissa[i]);
      rule.w.push_back(half * weights[i]);
      if (abscissa[i] != 0.0) {
        rule.x.push_back(mid - half * abscissa[i]);
        rule.w.push_back(half * weights[i]);
      }
    }
  }
  return rule;
}

/// Gaussian density on R^4 written out from its covariance, without the
/// library's Wigner evaluator.
struct Gaussian4 {
  prbox::Matrix4 precision;
  double norm;

  explicit Gaussian4(const prbox::Matrix4& sigma)
      : precision(prbox::inverse(sigma)),
        norm(1.0 / (4.0 * std::numbers::pi * std::numbers::pi *
                    std::sqrt(prbox::determinant(sigma)))) {}

  double operator()(const std::array<double, 4>& v) const {
    double q = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) q += v[i] * precision(i, j) * v[j];
    return norm * std::exp(-0.5 * q);
  }
};

/// Maps rotated phase-space coordinates back to the unrotated frame,
/// xi = R^T xi', for local rotations (alpha on mode 1, beta on mode 2).
inline std::array<double, 4> unrotate(const std::array<double, 4>& v, double alpha, double beta) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  return {ca * v[0] - sa * v[1], sa * v[0] + ca * v[1], cb * v[2] - sb * v[3],
          sb * v[2] + cb * v[3]};
}

/// Unrotated covariance straight from the wave-vector quadratic form,
/// A = [[1/d^2, 1/g^2], [1/g^2, 1/d^2]]: Sigma_xx = A / 2, Sigma_pp = A^-1 / 2.
inline prbox::Matrix4 state_covariance(double delta, double gamma) {
  const double a = 1.0 / (delta * delta);
  const double b = 1.0 / (gamma * gamma);
  const double det = a * a - b * b;
  prbox::Matrix4 s;
  s(0, 0) = 0.5 * a;
  s(2, 2) = 0.5 * a;
  s(0, 2) = s(2, 0) = 0.5 * b;
  s(1, 1) = 0.5 * a / det;
  s(3, 3) = 0.5 * a / det;
  s(1, 3) = s(3, 1) = -0.5 * b / det;
  return s;
}

/// <sgn(x1^alpha) sgn(x2^beta)> by direct 4D quadrature of the unrotated
/// Wigner function over the rotated coordinates. Each sign half-line gets
/// its own Gauss-Legendre rule so the integrand is smooth on every panel.
inline double sign_correlation_4d(double delta, double gamma, double alpha, double beta,
                                  int panels = 2) {
  const prbox::Matrix4 sigma = state_covariance(delta, gamma);
  const Gaussian4 w(sigma);
  double max_var = 0.0;
  for (int i = 0; i < 4; ++i) max_var = std::max(max_var, sigma(i, i));
  const double span = 9.0 * std::sqrt(max_var);

  const Rule pos = gauss_legendre(0.0, span, panels);
  const Rule full = gauss_legendre(-span, span, 2 * panels);

  double total = 0.0;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1})
      for (std::size_t i = 0; i < pos.x.size(); ++i)
        for (std::size_t j = 0; j < full.x.size(); ++j)
          for (std::size_t k = 0; k < pos.x.size(); ++k) {
            double inner = 0.0;
            for (std::size_t l = 0; l < full.x.size(); ++l) {
              const auto xi = unrotate({s1 * pos.x[i], full.x[j], s2 * pos.x[k], full.x[l]},
                                       alpha, beta);
              inner += full.w[l] * w(xi);
            }
            total += s1 * s2 * pos.w[i] * full.w[j] * pos.w[k] * inner;
          }
  return total;
}

}  // namespace oracle
