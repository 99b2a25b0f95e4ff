#pragma once

#include <array>
#include <limits>

#include "prbox/small_matrix.hpp"

namespace prbox {

/// Transverse state of a down-converted photon pair, written in the
/// dimensionless wave-vector representation
///
///   psi(q1, q2) ~ exp(-(q1^2 + q2^2) / (2 delta^2) - q1 q2 / gamma^2).
///
/// The quadratic form is positive definite only for gamma > delta; the
/// constructor rejects anything else. gamma = +inf is the separable state.
class GaussianTwoModeState {
 public:
  GaussianTwoModeState(double delta, double gamma, double scale_s_mm = 1.0);

  static GaussianTwoModeState separable(double delta, double scale_s_mm = 1.0) {
    return {delta, std::numeric_limits<double>::infinity(), scale_s_mm};
  }

  double delta() const { return delta_; }
  double gamma() const { return gamma_; }
  /// Millimetres per dimensionless unit of transverse position.
  double scale_s_mm() const { return scale_s_mm_; }
  /// 1/gamma^2, exactly zero for the separable state.
  double inv_gamma_sq() const { return 1.0 / (gamma_ * gamma_); }

 private:
  double delta_;
  double gamma_;
  double scale_s_mm_;
};

/// Phase-space covariance over (x1, p1, x2, p2) with [x, p] = i, so the
/// vacuum quadrature variance is 1/2. Construction checks symmetry,
/// positive definiteness and purity (both symplectic eigenvalues 1/2).
class CovarianceMatrix4 {
 public:
  static constexpr double kPurityTolerance = 1e-10;

  explicit CovarianceMatrix4(const Matrix4& sigma);

  const Matrix4& matrix() const { return sigma_; }
  double operator()(int i, int j) const { return sigma_(i, j); }

 private:
  Matrix4 sigma_;
};

/// Zero-mean bivariate normal of the detected positions (x1^alpha, x2^beta).
class BivariateGaussian {
 public:
  BivariateGaussian(double var1, double var2, double corr);

  double var1() const { return var1_; }
  double var2() const { return var2_; }
  double corr() const { return corr_; }
  double covariance() const;
  /// Probability density at (x1, x2); requires |corr| < 1.
  double density(double x1, double x2) const;

 private:
  double var1_;
  double var2_;
  double corr_;
};

using PhasePoint = std::array<double, 4>;

/// A with psi(q) ~ exp(-q^T A q / 2).
Matrix2 quad_form_matrix(const GaussianTwoModeState& state);

/// Sigma_pp = A^{-1}/2, Sigma_xx = A/2, no x-p cross terms.
CovarianceMatrix4 covariance_from_state(const GaussianTwoModeState& state);

/// Symplectic eigenvalues (nu_-, nu_+) of a two-mode covariance, ascending.
std::array<double, 2> symplectic_eigenvalues(const Matrix4& sigma);

/// Normalized Wigner function exp(-xi^T Sigma^-1 xi / 2) / (4 pi^2 sqrt(det Sigma)).
double wigner_value(const CovarianceMatrix4& cov, const PhasePoint& point);

/// wigner_value with the inverse and normalization precomputed, for
/// evaluating the same state at many points.
class WignerFunction {
 public:
  explicit WignerFunction(const CovarianceMatrix4& cov);
  double operator()(const PhasePoint& point) const;

 private:
  Matrix4 precision_;
  double norm_;
};

/// blockdiag(R(alpha), R(beta)) with R(t) sending x -> cos t x + sin t p,
/// p -> cos t p - sin t x.
Matrix4 phase_space_rotation(double alpha, double beta);

CovarianceMatrix4 rotate_covariance(const CovarianceMatrix4& cov, double alpha, double beta);

/// Marginal of the rotated state over (p1, p2): the joint density of the
/// detection positions behind FRFT systems of orders alpha and beta.
BivariateGaussian position_joint_density(const GaussianTwoModeState& state, double alpha,
                                         double beta);

// Closed forms of the coincidence density for the imaging (alpha = pi) and
// Fourier (alpha = pi/2) configurations, written as marginal(x1) times
// conditional(x2 | x1). With K = (gamma^4 - delta^4) / (delta^2 gamma^4):
//
//   alpha = pi:   x1 ~ N(0, 1/(2 delta^2)),
//                 x2 | x1 ~ N(-(delta/gamma)^2 cos(beta) x1, D/2),
//                 D = K cos^2(beta) + sin^2(beta) / K
//   alpha = pi/2: x1 ~ N(0, 1/(2K)),
//                 x2 | x1 ~ N(-(delta/gamma)^2 sin(beta) x1, D/2),
//                 D = cos^2(beta) / delta^2 + delta^2 sin^2(beta)
//
// They exist to cross-check position_joint_density.
double closed_form_R_pi(const GaussianTwoModeState& state, double beta, double x1, double x2);
double closed_form_R_half_pi(const GaussianTwoModeState& state, double beta, double x1,
                             double x2);

}  // namespace prbox
