#include "chainform/potentials.hpp"

#include <stdexcept>
#include <vector>

namespace chainform {

double phi1(std::span<const Vec2> p) {
  double s = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    double m = 1.0 - norm(p[i] - p[i - 1]);
    s += m * m;
  }
  return s;
}

double phi1(const Configuration& c) { return phi1(c.positions()); }

double phi2(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.size() != b.size()) throw std::invalid_argument("phi2: robot counts differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += norm2(b[i] - a[i]);
  return s;
}

double phi2(const Configuration& a, const Configuration& b) { return phi2(a.positions(), b.positions()); }

Phi2Diff phi2_diff_lower_bound(std::span<const Vec2> p0, std::span<const Vec2> p1, std::span<const Vec2> p2) {
  if (p0.size() != p1.size() || p1.size() != p2.size())
    throw std::invalid_argument("phi2_diff_lower_bound: robot counts differ");
  const std::size_t n = p0.size();
  std::vector<Vec2> z(n + 2);
  for (std::size_t i = 0; i < n; ++i) z[i + 1] = p1[i] - p0[i];
  z[0] = z[1];
  z[n + 1] = z[n];
  Phi2Diff r;
  r.diff = phi2(p0, p1) - phi2(p1, p2);
  for (std::size_t i = 1; i <= n; ++i) r.bound += norm2(z[i - 1] - z[i + 1]);
  r.bound *= 0.25;
  return r;
}

Phi2Diff phi2_diff_lower_bound(const Configuration& c0, const Configuration& c1, const Configuration& c2) {
  return phi2_diff_lower_bound(c0.positions(), c1.positions(), c2.positions());
}

}  // namespace chainform
