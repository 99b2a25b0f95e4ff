#include "prbox/frft_optics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "prbox/error.hpp"

namespace prbox {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourierOrder = kPi / 2.0;
// Orders this close to zero are treated as "no transform needed".
constexpr double kZeroOrder = 1e-12;

struct Candidate {
  FrftPlan plan;
  double deviation = 0.0;
};

bool better(const Candidate& a, const Candidate& b) {
  constexpr double kTie = 1e-12;
  if (a.deviation < b.deviation - kTie) return true;
  if (a.deviation > b.deviation + kTie) return false;
  if (a.plan.stages.size() != b.plan.stages.size())
    return a.plan.stages.size() < b.plan.stages.size();
  return a.plan.total_z_cm() < b.plan.total_z_cm() - kTie;
}

// Orders for k stages: (k - 1) Fourier stages followed by the remainder.
std::vector<double> split_orders(double target, std::size_t k) {
  std::vector<double> orders(k, kFourierOrder);
  const double remainder = target - kFourierOrder * static_cast<double>(k - 1);
  orders.back() = std::clamp(remainder, kZeroOrder, kPi);
  return orders;
}

void enumerate(std::span<const double> inventory, std::vector<bool>& used,
               std::vector<double>& chosen, std::size_t k,
               const std::function<void(const std::vector<double>&)>& visit) {
  if (chosen.size() == k) {
    visit(chosen);
    return;
  }
  for (std::size_t i = 0; i < inventory.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    chosen.push_back(inventory[i]);
    enumerate(inventory, used, chosen, k, visit);
    chosen.pop_back();
    used[i] = false;
  }
}

}  // namespace

bool FrftStage::is_consistent() const {
  if (!(order > 0.0 && order < kTwoPi) || !(focal_cm > 0.0)) return false;
  return std::abs(z_cm - frft_distance(order, focal_cm)) <= kLengthTolCm;
}

double FrftPlan::composed_order() const {
  std::vector<double> orders;
  orders.reserve(stages.size());
  for (const auto& s : stages) orders.push_back(s.order);
  return orders.empty() ? 0.0 : compose_orders(orders);
}

double FrftPlan::deviation() const { return angular_distance(composed_order(), target_order); }

double FrftPlan::total_z_cm() const {
  double z = 0.0;
  for (const auto& s : stages) z += s.z_cm;
  return z;
}

double frft_distance(double order, double focal_cm) {
  if (!(order > 0.0 && order < kTwoPi))
    throw InvalidArgument("frft_distance: order must lie in (0, 2 pi)");
  if (!(focal_cm > 0.0) || !std::isfinite(focal_cm))
    throw InvalidArgument("frft_distance: focal length must be positive");
  const double s = std::sin(0.5 * order);
  return 2.0 * focal_cm * s * s;
}

double frft_order_from_distance(double z_cm, double focal_cm) {
  if (!(focal_cm > 0.0) || !std::isfinite(focal_cm))
    throw InvalidArgument("frft_order_from_distance: focal length must be positive");
  if (!(z_cm > 0.0 && z_cm <= 2.0 * focal_cm))
    throw InvalidArgument("frft_order_from_distance: distance must lie in (0, 2 f]");
  return 2.0 * std::asin(std::sqrt(z_cm / (2.0 * focal_cm)));
}

double compose_orders(std::span<const double> orders) {
  if (orders.empty()) throw InvalidArgument("compose_orders: no orders given");
  double sum = 0.0;
  for (double o : orders) sum += o;
  return wrap_angle(sum);
}

FrftPlan plan_lens_system(double target, std::span<const double> inventory, int max_stages,
                          double angle_tol) {
  if (inventory.empty()) throw InvalidArgument("plan_lens_system: lens inventory is empty");
  for (double f : inventory)
    if (!(f > 0.0) || !std::isfinite(f))
      throw InvalidArgument("plan_lens_system: focal lengths must be positive");
  if (max_stages < 1) throw InvalidArgument("plan_lens_system: max_stages must be >= 1");
  if (!(angle_tol >= 0.0)) throw InvalidArgument("plan_lens_system: angle_tol must be >= 0");

  const double wrapped = wrap_angle(target);
  if (angular_distance(wrapped, 0.0) <= kZeroOrder) return {{}, target};

  const std::size_t max_k = std::min<std::size_t>(max_stages, inventory.size());
  std::optional<Candidate> best;
  std::vector<bool> used(inventory.size(), false);
  std::vector<double> chosen;
  for (std::size_t k = 1; k <= max_k; ++k) {
    const std::vector<double> orders = split_orders(wrapped, k);
    enumerate(inventory, used, chosen, k, [&](const std::vector<double>& focals) {
      Candidate c;
      c.plan.target_order = target;
      for (std::size_t i = 0; i < k; ++i)
        c.plan.stages.push_back({orders[i], focals[i], frft_distance(orders[i], focals[i])});
      c.deviation = c.plan.deviation();
      if (!best || better(c, *best)) best = std::move(c);
    });
  }

  if (best->deviation > angle_tol) {
    std::ostringstream msg;
    msg << "plan_lens_system: no plan within " << angle_tol << " rad of the target; best "
        << "achievable deviation is " << best->deviation << " rad with "
        << best->plan.stages.size() << " stage(s)";
    throw NumericalError(msg.str());
  }
  return std::move(best->plan);
}

}  // namespace prbox
