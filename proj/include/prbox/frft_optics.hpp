#pragma once

#include <span>
#include <vector>

#include "prbox/angle.hpp"

namespace prbox {

/// One single-lens fractional Fourier transformer: a lens of focal length f
/// placed at z from both the input and the output plane realizes a
/// phase-space rotation of order theta when z = 2 f sin^2(theta / 2).
struct FrftStage {
  double order = 0.0;     // radians
  double focal_cm = 0.0;
  double z_cm = 0.0;

  static constexpr double kLengthTolCm = 0.05;
  /// Geometry relation within kLengthTolCm and 0 < order < 2 pi.
  bool is_consistent() const;
};

struct FrftPlan {
  std::vector<FrftStage> stages;
  double target_order = 0.0;

  double composed_order() const;
  /// Circular distance between the composed order and the target.
  double deviation() const;
  double total_z_cm() const;
};

double frft_distance(double order, double focal_cm);

/// Inverse of frft_distance on (0, pi]: the order realized by a lens of
/// focal length f at distance z (requires 0 < z <= 2 f).
double frft_order_from_distance(double z_cm, double focal_cm);

/// Additivity of fractional transforms: sum of orders reduced to [0, 2 pi).
double compose_orders(std::span<const double> orders);

/// Exhaustive search over stage counts 1..max_stages and ordered
/// assignments of distinct inventory lenses. Every stage order lies in
/// (0, pi]; the leading stages are pi/2 Fourier stages and the last stage
/// carries the remainder (clamped into (0, pi] when the remainder does not
/// fit, which is what produces a non-zero deviation).
///
/// Picks the smallest deviation, then fewer stages, then smaller total z.
/// A target of 0 (mod 2 pi) yields the empty plan. Throws InvalidArgument
/// for an empty inventory or bad focal lengths, NumericalError when the best
/// deviation exceeds angle_tol.
FrftPlan plan_lens_system(double target, std::span<const double> inventory_focal_cm,
                          int max_stages, double angle_tol);

}  // namespace prbox
