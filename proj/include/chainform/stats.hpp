#pragma once

#include <span>
#include <utility>
#include <vector>

namespace chainform {

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = slope x + intercept. Needs two distinct x values.
Fit fit_affine(std::span<const double> x, std::span<const double> y);

// OLS on (log x, log y). Throws std::invalid_argument for fewer than three
// points or any non-positive coordinate.
Fit fit_power_law(std::span<const std::pair<double, double>> points);

double median(std::vector<double> v);

}  // namespace chainform
