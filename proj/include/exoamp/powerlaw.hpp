#pragma once

#include "exoamp/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace exoamp {

/// Ordinary least squares on (log10 K, log10 H).  All inputs must be > 0;
/// callers are expected to filter flagged (negative-damping) fits first.
PowerLaw fit_power_law(std::span<const std::pair<double, double>> points_K_H);

/// 10^(mean of log10 values).
double geometric_average(std::span<const double> values);

/// H = 10^beta0 * K^beta1.
double predict_H(const PowerLaw& law, double K_h);

} // namespace exoamp
