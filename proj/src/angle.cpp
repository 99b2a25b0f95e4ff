#include "prbox/angle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "prbox/error.hpp"

namespace prbox {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size() && std::isfinite(out);
}

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

double wrap_angle(double radians) {
  double w = std::fmod(radians, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w >= kTwoPi ? 0.0 : w;
}

double angular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

double parse_angle(std::string_view text) {
  const std::string s = strip(text);
  const auto bad = [&] {
    return InvalidArgument("cannot parse angle '" + std::string(text) +
                           "' (expected e.g. 0.785, pi/2, 5pi/4)");
  };

  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    double v = 0.0;
    if (!parse_number(s, v)) throw bad();
    return v;
  }

  std::string_view coeff(s.data(), pi_pos);
  std::string_view rest(s.data() + pi_pos + 2, s.size() - pi_pos - 2);
  if (!coeff.empty() && coeff.back() == '*') coeff.remove_suffix(1);

  double numerator = 1.0;
  if (coeff == "-") {
    numerator = -1.0;
  } else if (!coeff.empty() && coeff != "+") {
    if (!parse_number(coeff, numerator)) throw bad();
  }

  double denominator = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw bad();
    rest.remove_prefix(1);
    if (!parse_number(rest, denominator) || denominator == 0.0) throw bad();
  }
  return numerator * std::numbers::pi / denominator;
}

}  // namespace prbox
