#pragma once

#include <span>

#include "chainform/configuration.hpp"

namespace chainform {

// Sum over edges of (1 - |w_i|)^2.
double phi1(std::span<const Vec2> p);
double phi1(const Configuration& c);

// Sum over robots of |p_i(t+1) - p_i(t)|^2.
double phi2(std::span<const Vec2> a, std::span<const Vec2> b);
double phi2(const Configuration& a, const Configuration& b);

struct Phi2Diff {
  double diff = 0.0;   // phi2(t) - phi2(t+1)
  double bound = 0.0;  // 1/4 sum |z_{i-1} - z_{i+1}|^2 with z_0 = z_1, z_{n+1} = z_n
};

// Three consecutive states of the same chain.
Phi2Diff phi2_diff_lower_bound(std::span<const Vec2> p0, std::span<const Vec2> p1, std::span<const Vec2> p2);
Phi2Diff phi2_diff_lower_bound(const Configuration& c0, const Configuration& c1, const Configuration& c2);

}  // namespace chainform
