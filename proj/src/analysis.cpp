#include "chainform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chainform {

std::string to_string(ChainTag t) {
  switch (t) {
    case ChainTag::Opposed: return "Opposed";
    case ChainTag::Marching: return "Marching";
    case ChainTag::CollinearDegenerate: return "CollinearDegenerate";
    case ChainTag::TwoDimensional: return "TwoDimensional";
  }
  return "?";
}

LineFit fit_line(std::span<const Vec2> p) {
  LineFit f;
  if (p.empty()) return f;
  Vec2 c;
  for (const Vec2& q : p) c += q;
  c = c / static_cast<double>(p.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (const Vec2& q : p) {
    Vec2 d = q - c;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  f.centroid = c;
  f.direction = {std::cos(phi), std::sin(phi)};
  for (const Vec2& q : p) f.max_distance = std::max(f.max_distance, std::abs(cross(f.direction, q - c)));
  return f;
}

ChainClass classify(const Configuration& c, double eta_ang, double eta_col) {
  ChainClass out;
  LineFit f = fit_line(c.positions());
  out.collinear = f.max_distance <= eta_col;
  if (!out.collinear) {
    out.tag = ChainTag::TwoDimensional;
    return out;
  }
  Vec2 w2 = c[1] - c[0];
  Vec2 wn = c[c.n() - 1] - c[c.n() - 2];
  double l2 = norm(w2), ln = norm(wn);
  // An outer edge that is (numerically) zero or not aligned with the line has
  // no usable orientation.
  double s2 = dot(w2, f.direction), sn = dot(wn, f.direction);
  double sin_tol = std::sin(eta_ang);
  if (l2 <= kEtaZero || ln <= kEtaZero || std::abs(s2) <= l2 * sin_tol || std::abs(sn) <= ln * sin_tol) {
    out.tag = ChainTag::CollinearDegenerate;
    return out;
  }
  out.tag = (s2 > 0) == (sn > 0) ? ChainTag::Opposed : ChainTag::Marching;
  return out;
}

bool is_eps_maxchain(std::span<const Vec2> p, double eps) {
  const std::size_t n = p.size();
  if (norm(p[n - 1] - p[0]) < (1.0 - eps) * static_cast<double>(n - 1)) return false;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(norm(p[i] - p[i - 1]) > 1.0 - eps)) return false;
  }
  return true;
}

bool is_eps_maxchain(const Configuration& c, double eps) { return is_eps_maxchain(c.positions(), eps); }

std::vector<double> marching_vector(std::size_t n) {
  std::vector<double> w;
  w.reserve(n - 1);
  for (std::size_t i = 2; i <= n; ++i) w.push_back(1.0 - 2.0 * static_cast<double>(i - 1) / static_cast<double>(n));
  return w;
}

bool is_eps_marching(std::span<const Vec2> p, double eps, double eta_col) {
  LineFit f = fit_line(p);
  if (f.max_distance > eta_col) return false;
  const std::vector<double> wm = marching_vector(p.size());
  VectorChain w = chain_vectors(p);
  for (double sgn : {1.0, -1.0}) {
    Vec2 d = f.direction * sgn;
    double worst = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) worst = std::max(worst, std::abs(dot(w[k], d) - wm[k]));
    if (worst <= eps) return true;
  }
  return false;
}

bool is_eps_marching(const Configuration& c, double eps, double eta_col) {
  return is_eps_marching(c.positions(), eps, eta_col);
}

InnerCluster inner_cluster(std::span<const Vec2> p, std::size_t k, double radius) {
  const std::size_t n = p.size();
  InnerCluster c{k, k, p[k]};
  if (k == 0 || k + 1 >= n) return c;
  while (c.first > 1 && norm(p[c.first] - p[c.first - 1]) <= radius) --c.first;
  while (c.last + 2 < n && norm(p[c.last + 1] - p[c.last]) <= radius) ++c.last;
  Vec2 sum{0.0, 0.0};
  for (std::size_t i = c.first; i <= c.last; ++i) sum = sum + p[i];
  c.centroid = sum / static_cast<double>(c.last - c.first + 1);
  return c;
}

double interior_angle(std::span<const Vec2> p, std::size_t k, double eta_zero) {
  const std::size_t n = p.size();
  if (k == 0 || k + 1 >= n) return std::numbers::pi;
  const InnerCluster c = inner_cluster(p, k, eta_zero);
  const Vec2 u = p[c.first - 1] - c.centroid;
  const Vec2 v = p[c.last + 1] - c.centroid;
  if (norm(u) <= kEtaZero || norm(v) <= kEtaZero) return std::numbers::pi;
  return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

namespace {

bool same_direction(const Vec2& a, const Vec2& ref, double eta) { return norm(unit(a) - ref) <= eta; }

}  // namespace

SegmentIndices segment_indices(std::span<const Vec2> p, double eta_col, double eta_zero, double eta_ang) {
  SegmentIndices s;
  const std::size_t n = p.size();
  if (n < 3) return s;
  VectorChain w = chain_vectors(p);
  auto edge = [&](std::size_t i) -> const Vec2& { return w.w[i - 2]; };  // 1-based edge index i = 2..n
  auto zero = [&](std::size_t i) { return norm(edge(i)) <= eta_zero; };

  // Left: reference is w_2, or the first non-zero edge if w_2 vanishes.
  std::size_t i0 = 2;
  while (i0 <= n && zero(i0)) ++i0;
  if (i0 > n) return s;  // every robot on one point
  Vec2 ref = unit(edge(i0));
  std::size_t ell = 0;
  for (std::size_t j = i0 + 1; j <= n; ++j) {
    if (zero(j) || same_direction(edge(j), ref, eta_col)) continue;
    ell = j - 1;
    break;
  }
  if (ell == 0) return s;

  std::size_t k0 = n;
  while (k0 >= 2 && zero(k0)) --k0;
  Vec2 refr = unit(edge(k0));
  std::size_t r = 0;
  for (std::size_t j = k0 - 1; j >= 2; --j) {
    if (zero(j) || same_direction(edge(j), refr, eta_col)) continue;
    r = j;
    break;
  }
  if (r == 0) return s;

  s.defined = true;
  // With zero edges skipped from both sides the two scans can cross inside a
  // cluster of coincident robots; that is a single bend.
  s.ell = std::min(ell, r);
  s.r = s.ell;
  if (ell < r) s.r = r;
  if (s.ell == s.r) {
    s.ell_plus = n;
    s.r_plus = 1;
    return s;
  }
  const double straight = std::numbers::pi - eta_ang;
  s.ell_plus = r;
  for (std::size_t j = ell + 1; j < r; ++j) {
    if (interior_angle(p, j - 1, eta_zero) <= straight) {
      s.ell_plus = j;
      break;
    }
  }
  s.r_plus = ell;
  for (std::size_t j = r - 1; j > ell; --j) {
    if (interior_angle(p, j - 1, eta_zero) <= straight) {
      s.r_plus = j;
      break;
    }
  }
  return s;
}

SegmentIndices segment_indices(const Configuration& c, double eta_col, double eta_zero, double eta_ang) {
  return segment_indices(c.positions(), eta_col, eta_zero, eta_ang);
}

ChainMetrics metrics(std::span<const Vec2> p, const SegmentIndices& seg, double eta_zero) {
  ChainMetrics m;
  const std::size_t n = p.size();
  std::vector<double> len(n + 1, 0.0);  // len[i] = |w_i|, i = 2..n
  for (std::size_t i = 2; i <= n; ++i) {
    len[i] = norm(p[i - 1] - p[i - 2]);
    m.L += len[i];
  }
  m.delta_1n = norm(p[n - 1] - p[0]);
  if (!seg.defined) {
    m.O_ell = m.O_r = m.L;
    for (std::size_t i = 2; i <= n; ++i) m.gamma_ell += len[i] > eta_zero ? 1.0 : 0.0;
    m.gamma_r = m.gamma_ell;
    m.alpha_ell = m.alpha_r = std::numbers::pi;
    return m;
  }
  for (std::size_t i = 2; i <= seg.ell; ++i) m.O_ell += len[i];
  for (std::size_t i = seg.r + 1; i <= n; ++i) m.O_r += len[i];
  for (std::size_t i = seg.ell + 1; i <= seg.r; ++i) m.I += len[i];
  // Coincident robots count once, so gamma is the number of non-zero edges.
  for (std::size_t i = 2; i <= seg.ell; ++i) m.gamma_ell += len[i] > eta_zero ? 1.0 : 0.0;
  for (std::size_t i = seg.r + 1; i <= n; ++i) m.gamma_r += len[i] > eta_zero ? 1.0 : 0.0;
  m.alpha_ell = interior_angle(p, seg.ell - 1, eta_zero);
  m.alpha_r = interior_angle(p, seg.r - 1, eta_zero);
  m.H_ell = point_segment_distance(p[seg.ell - 1], p[0], p[seg.ell_plus - 1]);
  m.H_r = point_segment_distance(p[seg.r - 1], p[seg.r_plus - 1], p[n - 1]);
  return m;
}

ChainMetrics metrics(const Configuration& c, const SegmentIndices& seg, double eta_zero) {
  return metrics(c.positions(), seg, eta_zero);
}

}  // namespace chainform
