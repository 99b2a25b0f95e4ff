#include "prbox/core_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "prbox/error.hpp"

namespace prbox {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_positive_definite(const Matrix4& m) {
  // Cholesky without storing the factor.
  std::array<double, 16> l{};
  for (int j = 0; j < 4; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l[j * 4 + k] * l[j * 4 + k];
    if (!(d > 0.0)) return false;
    l[j * 4 + j] = std::sqrt(d);
    for (int i = j + 1; i < 4; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l[i * 4 + k] * l[j * 4 + k];
      l[i * 4 + j] = s / l[j * 4 + j];
    }
  }
  return true;
}

}  // namespace

GaussianTwoModeState::GaussianTwoModeState(double delta, double gamma, double scale_s_mm)
    : delta_(delta), gamma_(gamma), scale_s_mm_(scale_s_mm) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidArgument("state: delta must be a finite positive number");
  if (!(gamma > 0.0))
    throw InvalidArgument("state: gamma must be positive (use +inf for a separable state)");
  if (!(scale_s_mm > 0.0) || !std::isfinite(scale_s_mm))
    throw InvalidArgument("state: scale_s must be a finite positive length");
  if (!(gamma > delta)) {
    std::ostringstream msg;
    msg << "state is not normalizable: the wave-vector quadratic form is positive definite "
           "only for gamma > delta (got delta = "
        << delta << ", gamma = " << gamma << ")";
    throw NumericalError(msg.str());
  }
}

CovarianceMatrix4::CovarianceMatrix4(const Matrix4& sigma) : sigma_(sigma) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double scale = std::max(std::abs(sigma(i, j)), 1.0);
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-12 * scale)
        throw InvalidArgument("covariance matrix is not symmetric");
    }
  if (!is_positive_definite(sigma))
    throw InvalidArgument("covariance matrix is not positive definite");
  const auto nu = symplectic_eigenvalues(sigma);
  if (std::abs(nu[0] - 0.5) > kPurityTolerance || std::abs(nu[1] - 0.5) > kPurityTolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "covariance matrix is not a pure state: symplectic eigenvalues " << nu[0] << ", "
        << nu[1] << " (expected 1/2)";
    throw InvalidArgument(msg.str());
  }
}

BivariateGaussian::BivariateGaussian(double var1, double var2, double corr)
    : var1_(var1), var2_(var2), corr_(corr) {
  if (!(var1 > 0.0) || !(var2 > 0.0) || !std::isfinite(var1) || !std::isfinite(var2))
    throw InvalidArgument("bivariate gaussian: variances must be finite and positive");
  if (!(std::abs(corr) <= 1.0))
    throw InvalidArgument("bivariate gaussian: correlation must lie in [-1, 1]");
}

double BivariateGaussian::covariance() const { return corr_ * std::sqrt(var1_ * var2_); }

double BivariateGaussian::density(double x1, double x2) const {
  const double one_minus = 1.0 - corr_ * corr_;
  if (!(one_minus > 0.0))
    throw NumericalError("bivariate gaussian: density undefined for |corr| = 1");
  const double u = x1 / std::sqrt(var1_);
  const double v = x2 / std::sqrt(var2_);
  const double q = (u * u - 2.0 * corr_ * u * v + v * v) / one_minus;
  return std::exp(-0.5 * q) / (2.0 * kPi * std::sqrt(var1_ * var2_ * one_minus));
}

Matrix2 quad_form_matrix(const GaussianTwoModeState& state) {
  const double diag = 1.0 / (state.delta() * state.delta());
  const double off = state.inv_gamma_sq();
  Matrix2 a;
  a(0, 0) = diag;
  a(0, 1) = off;
  a(1, 0) = off;
  a(1, 1) = diag;
  return a;
}

CovarianceMatrix4 covariance_from_state(const GaussianTwoModeState& state) {
  const Matrix2 a = quad_form_matrix(state);
  const Matrix2 a_inv = inverse(a);
  Matrix4 sigma;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      sigma(2 * i, 2 * j) = 0.5 * a(i, j);
      sigma(2 * i + 1, 2 * j + 1) = 0.5 * a_inv(i, j);
    }
  return CovarianceMatrix4(sigma);
}

std::array<double, 2> symplectic_eigenvalues(const Matrix4& sigma) {
  // nu^2 are the eigenvalues of K^T K with K = L^T Omega L, Sigma = L L^T;
  // a symmetric problem, so degenerate (pure-state) pairs stay accurate.
  Eigen::Matrix4d s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(i, j) = sigma(i, j);
  const Eigen::LLT<Eigen::Matrix4d> llt(s);
  if (llt.info() != Eigen::Success)
    throw InvalidArgument("symplectic_eigenvalues: covariance is not positive definite");
  const Eigen::Matrix4d l = llt.matrixL();
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  const Eigen::Matrix4d k = l.transpose() * omega * l;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(k.transpose() * k,
                                                           Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return {std::sqrt(std::max(ev(0), 0.0)), std::sqrt(std::max(ev(3), 0.0))};
}

WignerFunction::WignerFunction(const CovarianceMatrix4& cov)
    : precision_(inverse(cov.matrix())),
      norm_(1.0 / (4.0 * kPi * kPi * std::sqrt(determinant(cov.matrix())))) {}

double WignerFunction::operator()(const PhasePoint& point) const {
  double q = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += precision_(i, j) * point[j];
    q += point[i] * row;
  }
  return norm_ * std::exp(-0.5 * q);
}

double wigner_value(const CovarianceMatrix4& cov, const PhasePoint& point) {
  return WignerFunction(cov)(point);
}

Matrix4 phase_space_rotation(double alpha, double beta) {
  Matrix4 r;
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cb = std::cos(beta), sb = std::sin(beta);
  r(0, 0) = ca;
  r(0, 1) = sa;
  r(1, 0) = -sa;
  r(1, 1) = ca;
  r(2, 2) = cb;
  r(2, 3) = sb;
  r(3, 2) = -sb;
  r(3, 3) = cb;
  return r;
}

CovarianceMatrix4 rotate_covariance(const CovarianceMatrix4& cov, double alpha, double beta) {
  const Matrix4 r = phase_space_rotation(alpha, beta);
  Matrix4 out = r * cov.matrix() * transpose(r);
  // Symmetrize away rounding so the symmetry check is exact.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double m = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = m;
      out(j, i) = m;
    }
  return CovarianceMatrix4(out);
}

BivariateGaussian position_joint_density(const GaussianTwoModeState& state, double alpha,
                                         double beta) {
  const CovarianceMatrix4 rotated = rotate_covariance(covariance_from_state(state), alpha, beta);
  const double v1 = rotated(0, 0);
  const double v2 = rotated(2, 2);
  double corr = rotated(0, 2) / std::sqrt(v1 * v2);
  corr = std::clamp(corr, -1.0, 1.0);
  return {v1, v2, corr};
}

namespace {

double marginal_times_conditional(double two_var1, double mean_slope, double two_var_cond,
                                  double x1, double x2) {
  const double shifted = x2 - mean_slope * x1;
  return std::exp(-x1 * x1 / two_var1) * std::exp(-shifted * shifted / two_var_cond) /
         (kPi * std::sqrt(two_var1 * two_var_cond));
}

}  // namespace

double closed_form_R_pi(const GaussianTwoModeState& state, double beta, double x1, double x2) {
  const double d2 = state.delta() * state.delta();
  const double ig2 = state.inv_gamma_sq();
  // K = (gamma^4 - delta^4) / (delta^2 gamma^4), written to stay finite for gamma = inf.
  const double k = 1.0 / d2 - d2 * ig2 * ig2;
  const double c = std::cos(beta), s = std::sin(beta);
  const double denom = k * c * c + s * s / k;
  return marginal_times_conditional(1.0 / d2, -d2 * ig2 * c, denom, x1, x2);
}

double closed_form_R_half_pi(const GaussianTwoModeState& state, double beta, double x1,
                             double x2) {
  const double d2 = state.delta() * state.delta();
  const double ig2 = state.inv_gamma_sq();
  const double k = 1.0 / d2 - d2 * ig2 * ig2;
  const double c = std::cos(beta), s = std::sin(beta);
  const double denom = c * c / d2 + d2 * s * s;
  return marginal_times_conditional(1.0 / k, -d2 * ig2 * s, denom, x1, x2);
}

}  // namespace prbox
