#pragma once

#include <string>
#include <string_view>

namespace prbox {

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double radians);

/// Smallest |a - b| modulo 2 pi.
double angular_distance(double a, double b);

/// Parses an angle in radians. Accepts plain decimals ("0.785") and
/// multiples of pi written as "pi", "-pi", "5pi/4", "5*pi/4", "pi/2",
/// "0.5pi". Throws InvalidArgument on anything else.
double parse_angle(std::string_view text);

}  // namespace prbox
