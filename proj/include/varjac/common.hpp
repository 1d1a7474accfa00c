#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace varjac {

using Complex = std::complex<double>;
using Polyline = std::vector<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace varjac
