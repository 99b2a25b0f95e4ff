#pragma once

#include <array>
#include <cstddef>

namespace prbox {

/// Row-major fixed-size square matrix. Only what the two-mode Gaussian
/// algebra needs: products, transpose, closed-form det and inverse.
template <std::size_t N>
struct SquareMatrix {
  std::array<double, N * N> a{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

  static constexpr SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  friend constexpr bool operator==(const SquareMatrix&, const SquareMatrix&) = default;
};

using Matrix2 = SquareMatrix<2>;
using Matrix4 = SquareMatrix<4>;

template <std::size_t N>
constexpr SquareMatrix<N> operator*(const SquareMatrix<N>& x, const SquareMatrix<N>& y) {
  SquareMatrix<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const double xik = x(i, k);
      for (std::size_t j = 0; j < N; ++j) out(i, j) += xik * y(k, j);
    }
  return out;
}

template <std::size_t N>
constexpr SquareMatrix<N> operator*(double s, SquareMatrix<N> m) {
  for (auto& v : m.a) v *= s;
  return m;
}

template <std::size_t N>
constexpr SquareMatrix<N> transpose(const SquareMatrix<N>& m) {
  SquareMatrix<N> t;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) t(j, i) = m(i, j);
  return t;
}

/// Largest absolute element-wise difference.
template <std::size_t N>
double max_abs_diff(const SquareMatrix<N>& x, const SquareMatrix<N>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < N * N; ++i) {
    const double e = x.a[i] > y.a[i] ? x.a[i] - y.a[i] : y.a[i] - x.a[i];
    if (e > d) d = e;
  }
  return d;
}

double determinant(const Matrix2& m);
double determinant(const Matrix4& m);

/// Closed-form inverses. Throw NumericalError when |det| < kSingularDetThreshold.
Matrix2 inverse(const Matrix2& m);
Matrix4 inverse(const Matrix4& m);

inline constexpr double kSingularDetThreshold = 1e-14;

}  // namespace prbox
