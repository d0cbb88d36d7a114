#include "chainform/continuous.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "chainform/errors.hpp"

namespace chainform {

double MobParams::psi() const { return 2.0 * std::acos(1.0 - tau); }
double MobParams::outer_cap() const { return naive ? 1.0 : 1.0 - tau; }

MobParams make_mob_params(double tau, bool naive, double dt) {
  if (!(tau >= 0.0 && tau <= 0.5)) throw std::invalid_argument("tau must lie in [0, 1/2]");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  MobParams p;
  p.tau = tau;
  p.naive = naive;
  p.dt = dt;
  return p;
}

std::string to_string(ContinuousOutcome o) {
  switch (o) {
    case ContinuousOutcome::EpsMaxChain: return "EpsMaxChain";
    case ContinuousOutcome::Collapsed: return "Collapsed";
    case ContinuousOutcome::TimeBudgetExceeded: return "TimeBudgetExceeded";
  }
  return "?";
}

double distance_rate(const Vec2& pi, const Vec2& vi, const Vec2& pj, const Vec2& vj) {
  const Vec2 d = pj - pi;
  if (norm(d) == 0.0) throw std::invalid_argument("distance_rate: coincident robots");
  auto term = [](const Vec2& v, const Vec2& to) {
    const double s = norm(v);
    if (s == 0.0) return 0.0;
    const double beta = std::atan2(cross(v, to), dot(v, to));
    return s * std::cos(beta);
  };
  return -(term(vi, d) + term(vj, -d));
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Neighbours {
  std::ptrdiff_t a = -1;
  std::ptrdiff_t b = -1;
};

// Nearest robots on each side that do not sit on top of robot k. Robots closer
// than one step length count as coincident; otherwise a vertex split over a
// sub-step edge only creeps along at the chord cap.
Neighbours effective(std::span<const Vec2> p, std::size_t k, double radius) {
  Neighbours nb;
  for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k) - 1; j >= 0; --j) {
    if (norm(p[j] - p[k]) > radius) {
      nb.a = j;
      break;
    }
  }
  for (std::size_t j = k + 1; j < p.size(); ++j) {
    if (norm(p[j] - p[k]) > radius) {
      nb.b = static_cast<std::ptrdiff_t>(j);
      break;
    }
  }
  return nb;
}

// A maximal block of straight robots L+1..R-1 between two boundary robots.
struct Run {
  std::size_t L = 0, R = 0;
  Vec2 e{1.0, 0.0}, nrm{0.0, 1.0};
  std::vector<double> f;       // fraction along L -> R
  std::vector<double> off;     // along-line offset to the neighbour midpoint
  std::vector<bool> chaser;
  std::vector<double> vperp;
  std::vector<double> chase;   // along-line speed of chasers

  std::size_t m() const { return R - L - 1; }
};

Run make_run(std::span<const Vec2> p, std::size_t L, std::size_t R, double dt) {
  Run r;
  r.L = L;
  r.R = R;
  const Vec2 span = p[R] - p[L];
  const double len = norm(span);
  if (len > kEtaZero) {
    r.e = span / len;
    r.nrm = perp(r.e);
  }
  for (std::size_t i = L + 1; i < R; ++i) {
    double f = len > kEtaZero ? dot(p[i] - p[L], r.e) / len
                              : static_cast<double>(i - L) / static_cast<double>(R - L);
    r.f.push_back(std::clamp(f, 0.0, 1.0));
    const Vec2 mid = (p[i - 1] + p[i + 1]) * 0.5;
    const double o = dot(mid - p[i], r.e);
    r.off.push_back(o);
    r.chaser.push_back(std::abs(o) > dt);
  }
  return r;
}

void set_perp(Run& r, const Vec2& vL, const Vec2& vR) {
  const double a = dot(vL, r.nrm), b = dot(vR, r.nrm);
  r.vperp.clear();
  r.chase.clear();
  for (std::size_t j = 0; j < r.m(); ++j) {
    const double vp = (1.0 - r.f[j]) * a + r.f[j] * b;
    r.vperp.push_back(vp);
    const double along = std::sqrt(std::max(0.0, 1.0 - vp * vp));
    r.chase.push_back(r.off[j] > 0 ? along : -along);
  }
}

// Along-line speeds of the interior given the boundary ones. Chasers move at
// speed 1 toward their midpoint; the others track it exactly, which couples
// them into a tridiagonal system.
std::vector<double> solve_run(const Run& r, double uL, double uR, double dt) {
  const std::size_t m = r.m();
  std::vector<double> a(m, 0.0), b(m, 1.0), c(m, 0.0), d(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (r.chaser[j]) {
      d[j] = r.chase[j];
      continue;
    }
    d[j] = r.off[j] / dt;
    if (j > 0) a[j] = -0.5; else d[j] += 0.5 * uL;
    if (j + 1 < m) c[j] = -0.5; else d[j] += 0.5 * uR;
  }
  for (std::size_t j = 1; j < m; ++j) {
    const double w = a[j] / b[j - 1];
    b[j] -= w * c[j - 1];
    d[j] -= w * d[j - 1];
  }
  std::vector<double> u(m);
  u[m - 1] = d[m - 1] / b[m - 1];
  for (std::size_t j = m - 1; j-- > 0;) u[j] = (d[j] - c[j] * u[j + 1]) / b[j];
  return u;
}

// Response of the robot next to a boundary: u = gL uL + gR uR + h.
struct Response {
  double gL = 0.0, gR = 0.0, h = 0.0;
};

Response response(const Run& r, std::size_t j, double dt) {
  Response s;
  s.h = solve_run(r, 0.0, 0.0, dt)[j];
  s.gL = solve_run(r, 1.0, 0.0, dt)[j] - s.h;
  s.gR = solve_run(r, 0.0, 1.0, dt)[j] - s.h;
  return s;
}

// Both outer robots bound the same straight run. Maximise uR - uL subject to
// the two outer edges not outgrowing unit length and the speed box; among
// optimal points take the one with the least common translation.
std::array<double, 2> outer_lp(const Response& left, const Response& right, double c1, double cn, double cap) {
  // a x + b y <= c with x = uL, y = uR.
  const std::array<double, 3> k1{left.gL - 1.0, left.gR, c1 - left.h};
  const std::array<double, 3> k2{-right.gL, 1.0 - right.gR, cn + right.h};
  for (double slack = 0.0;; slack = slack == 0.0 ? 1e-9 : slack * 4.0) {
    std::vector<std::array<double, 3>> lines{{1, 0, cap}, {1, 0, -cap}, {0, 1, cap}, {0, 1, -cap}, {1, 1, 0}};
    std::array<double, 3> q1 = k1, q2 = k2;
    q1[2] += slack;
    q2[2] += slack;
    lines.push_back(q1);
    lines.push_back(q2);
    auto feasible = [&](double x, double y) {
      const double tol = 1e-12;
      return std::abs(x) <= cap + tol && std::abs(y) <= cap + tol && q1[0] * x + q1[1] * y <= q1[2] + tol &&
             q2[0] * x + q2[1] * y <= q2[2] + tol;
    };
    bool found = false;
    double bx = 0, by = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const auto& L1 = lines[i];
        const auto& L2 = lines[j];
        const double det = L1[0] * L2[1] - L1[1] * L2[0];
        if (std::abs(det) < 1e-14) continue;
        const double x = (L1[2] * L2[1] - L1[1] * L2[2]) / det;
        const double y = (L1[0] * L2[2] - L1[2] * L2[0]) / det;
        if (!feasible(x, y)) continue;
        const double obj = y - x;
        const double best = by - bx;
        if (!found || obj > best + 1e-12 || (obj > best - 1e-12 && std::abs(x + y) < std::abs(bx + by))) {
          found = true;
          bx = x;
          by = y;
        }
      }
    }
    if (found) return {std::clamp(bx, -cap, cap), std::clamp(by, -cap, cap)};
    if (slack > 1e6) return {0.0, 0.0};
  }
}

double bounded(double x, double cap) { return std::clamp(x, -cap, cap); }

}  // namespace

VelocityField velocity_field(std::span<const Vec2> p, const MobParams& params, double dt) {
  if (dt <= 0.0) dt = params.dt;
  const std::size_t n = p.size();
  const double cap = params.outer_cap();
  const double merge = std::max(kEtaZero, dt);
  VelocityField fld;
  fld.v.assign(n, {0.0, 0.0});
  fld.mode.assign(n, RobotMode::Straight);
  fld.alpha.assign(n, kPi);
  fld.degenerate.assign(n, false);
  fld.head.resize(n);
  for (std::size_t k = 0; k < n; ++k) fld.head[k] = k;
  fld.mode[0] = fld.mode[n - 1] = RobotMode::Outer;
  if (n == 2) {
    const Vec2 w = p[1] - p[0];
    if (norm(w) <= kEtaZero) return fld;
    const double s = bounded(std::min(2.0 * cap, (1.0 - norm(w)) / dt), 2.0 * cap);
    fld.v[0] = unit(w) * (-0.5 * s);
    fld.v[1] = unit(w) * (0.5 * s);
    return fld;
  }

  // Consecutive inner robots closer than one step length form a cluster that
  // is classified and moved as a single robot sitting at the centroid.
  // Otherwise a vertex split over a sub-step edge only creeps along at the
  // chord cap, or its members drift apart.
  const double taut = 1.0 - params.eta_taut;
  const double psi = params.psi();
  for (std::size_t f = 1; f + 1 < n;) {
    const InnerCluster cl = inner_cluster(p, f, merge);
    const std::size_t first = cl.first, last = cl.last;
    const Vec2 c = cl.centroid;
    f = last + 1;
    for (std::size_t k = first; k <= last; ++k) fld.head[k] = first;
    const Vec2 pa = p[first - 1], pb = p[last + 1];
    const Vec2 u = pa - c, w = pb - c;
    if (norm(u) <= kEtaZero || norm(w) <= kEtaZero) {
      for (std::size_t k = first; k <= last; ++k) fld.degenerate[k] = true;
      continue;
    }
    const double alpha = interior_angle(p, first, merge);
    const bool solo = first == last;
    for (std::size_t k = first; k <= last; ++k) {
      fld.alpha[k] = alpha;
      if (alpha < kPi - params.eta_ang) fld.mode[k] = RobotMode::Bent;
      else fld.degenerate[k] = !solo;
    }
    if (alpha >= kPi - params.eta_ang) continue;

    // Bent: speed 1 along the bisector when a move condition holds, capped so
    // that one step does not carry the cluster past its neighbours' chord.
    bool moves = norm(u) >= taut || norm(w) >= taut || (!params.naive && alpha < psi);
    for (std::size_t k = first; k <= last + 1 && !moves; ++k) moves = norm(p[k] - p[k - 1]) >= taut;
    if (!moves) continue;
    const Vec2 bis = unit(u) + unit(w);
    if (norm(bis) < 1e-15) continue;
    const Vec2 d = unit(bis);
    const Vec2 chord = pb - pa;
    const double den = cross(d, chord);
    // A fold (both neighbours on one ray) has no chord to stop at; passing a
    // neighbour is dealt with after the step.
    double speed = 1.0;
    if (std::abs(den) > 1e-12 * norm(chord)) speed = std::min(1.0, std::max(0.0, cross(pa - c, chord) / den) / dt);
    for (std::size_t k = first; k <= last; ++k) fld.v[k] = d * speed;
  }

  std::vector<std::size_t> bounds;
  for (std::size_t k = 0; k < n; ++k)
    if (fld.mode[k] != RobotMode::Straight) bounds.push_back(k);
  std::vector<Run> runs;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (bounds[i + 1] - bounds[i] >= 2) runs.push_back(make_run(p, bounds[i], bounds[i + 1], dt));
  }

  const double c1 = (1.0 - norm(p[1] - p[0])) / dt;
  const double cn = (1.0 - norm(p[n - 1] - p[n - 2])) / dt;
  Run* first = !runs.empty() && runs.front().L == 0 ? &runs.front() : nullptr;
  Run* last = !runs.empty() && runs.back().R == n - 1 ? &runs.back() : nullptr;
  for (Run& r : runs) {
    // Outer boundaries move along the run line, so only bent ones carry a
    // perpendicular component.
    set_perp(r, r.L == 0 ? Vec2{} : fld.v[r.L], r.R == n - 1 ? Vec2{} : fld.v[r.R]);
  }

  // Outer robot whose neighbour is bent: recede along the edge at the capped
  // speed unless that would stretch the edge past unit length.
  auto outer_next_to_bent = [&](std::size_t o, std::size_t nbr, double c) {
    Neighbours nb = effective(p, o, merge);
    const std::ptrdiff_t t = o == 0 ? nb.b : nb.a;
    if (t < 0) return;
    if (o == 0) {
      const Vec2 dir = unit(p[t] - p[0]);
      fld.v[0] = dir * -bounded(std::min(cap, c - dot(dir, fld.v[nbr])), cap);
    } else {
      const Vec2 dir = unit(p[n - 1] - p[t]);
      fld.v[n - 1] = dir * bounded(std::min(cap, c + dot(dir, fld.v[nbr])), cap);
    }
  };

  if (first && first == last) {
    const Response left = response(*first, 0, dt);
    const Response right = response(*first, first->m() - 1, dt);
    auto [uL, uR] = outer_lp(left, right, c1, cn, cap);
    fld.v[0] = first->e * uL;
    fld.v[n - 1] = first->e * uR;
  } else {
    if (first) {
      const Response left = response(*first, 0, dt);
      const double uR = dot(fld.v[first->R], first->e);
      double lo;
      if (1.0 - left.gL > 1e-12)
        lo = (left.gR * uR + left.h - c1) / (1.0 - left.gL);
      else
        lo = left.gR * uR + left.h - c1 <= 0.0 ? -cap : cap;
      fld.v[0] = first->e * bounded(std::max(lo, -cap), cap);
    } else {
      outer_next_to_bent(0, 1, c1);
    }
    if (last) {
      const Response right = response(*last, last->m() - 1, dt);
      const double uL = dot(fld.v[last->L], last->e);
      double hi;
      if (1.0 - right.gR > 1e-12)
        hi = (cn + right.h + right.gL * uL) / (1.0 - right.gR);
      else
        hi = cn + right.h + right.gL * uL >= 0.0 ? cap : -cap;
      fld.v[n - 1] = last->e * bounded(std::min(hi, cap), cap);
    } else {
      outer_next_to_bent(n - 1, n - 2, cn);
    }
  }

  for (Run& r : runs) {
    const double uL = dot(fld.v[r.L], r.e), uR = dot(fld.v[r.R], r.e);
    const std::vector<double> u = solve_run(r, uL, uR, dt);
    for (std::size_t j = 0; j < r.m(); ++j) fld.v[r.L + 1 + j] = r.e * u[j] + r.nrm * r.vperp[j];
  }

  for (std::size_t k = 0; k < n; ++k) {
    const double lim = (k == 0 || k == n - 1) ? cap : 1.0;
    const double s = norm(fld.v[k]);
    if (s > lim) fld.v[k] *= lim / s;
  }
  return fld;
}

VelocityField velocity_field(const Configuration& c, const MobParams& params) {
  return velocity_field(c.positions(), params, params.dt);
}

namespace {

Vec2 project_on_line(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double l2 = norm2(d);
  if (l2 <= kEtaZero * kEtaZero) return x;
  return a + d * (dot(x - a, d) / l2);
}

// Keeps the geometric structure that the velocity field assumes: bent robots
// that reached (or crossed) their neighbours' chord become straight, straight
// runs stay exactly collinear and a taut outer edge stays at unit length.
void settle(std::span<const Vec2> p, std::vector<Vec2>& q, const VelocityField& f, const MobParams& params,
            double dt) {
  const std::size_t n = p.size();
  for (std::size_t first = 1; first + 1 < n;) {
    std::size_t last = first;
    while (last + 2 < n && f.head[last + 1] == first) ++last;
    const std::size_t k = first;
    first = last + 1;
    if (f.mode[k] != RobotMode::Bent || norm(f.v[k]) == 0.0) continue;
    const std::size_t a = k - 1, b = last + 1;
    Vec2 c0{0.0, 0.0}, c1{0.0, 0.0};
    for (std::size_t i = k; i <= last; ++i) {
      c0 = c0 + p[i];
      c1 = c1 + q[i];
    }
    c0 = c0 / static_cast<double>(last - k + 1);
    c1 = c1 / static_cast<double>(last - k + 1);
    const Vec2 a0 = p[a], b0 = p[b], a1 = q[a], b1 = q[b];
    if (f.alpha[k] < params.eta_ang) {
      // Fold tip: it may not run past the nearer neighbour, and lands on it.
      const Vec2 d = unit(f.v[k]);
      const double ta = dot(a1 - c1, d), tb = dot(b1 - c1, d);
      if (ta < 0.0 || tb < 0.0)
        for (std::size_t i = k; i <= last; ++i) q[i] = ta < tb ? a1 : b1;
      continue;
    }
    const double s0 = cross(b0 - a0, c0 - a0);
    const double s1 = cross(b1 - a1, c1 - a1);
    const Vec2 u = a1 - c1, w = b1 - c1;
    const double alpha = std::atan2(std::abs(cross(u, w)), dot(u, w));
    const bool crossed = s0 != 0.0 && (s0 > 0) != (s1 > 0);
    if (!crossed && alpha < kPi - params.eta_ang) continue;
    const Vec2 d = b1 - a1;
    const double l2 = norm2(d);
    if (l2 == 0.0) continue;
    const double s = dot(c1 - a1, d) / l2;
    if (s < 0.0 || s > 1.0) continue;
    for (std::size_t i = k; i <= last; ++i) q[i] = a1 + d * dot(q[i] - a1, d) / l2;
  }
  std::size_t L = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (f.mode[k] == RobotMode::Straight) continue;
    for (std::size_t i = L + 1; i < k; ++i) q[i] = project_on_line(q[i], q[L], q[k]);
    L = k;
  }
  auto hold = [&](std::size_t o, std::size_t nbr) {
    const Vec2 w = q[o] - q[nbr];
    const double l = norm(w);
    if (l > 1.0 && l <= 1.0 + dt) q[o] = q[nbr] + w / l;
  };
  hold(0, 1);
  hold(n - 1, n - 2);
}

}  // namespace

std::vector<Vec2> mob_step(std::span<const Vec2> p, const MobParams& params, StepStats* stats) {
  const std::size_t n = p.size();
  double dt = params.dt;
  StepStats st;
  std::vector<Vec2> q(n);
  for (int attempt = 0; attempt <= 10; ++attempt) {
    VelocityField f = velocity_field(p, params, dt);
    for (std::size_t k = 0; k < n; ++k) q[k] = p[k] + f.v[k] * dt;
    settle(p, q, f, params, dt);
    st.dt_used = dt;
    if (first_long_edge(q, params.eta_taut) == 0) {
      if (stats) *stats = st;
      return q;
    }
    if (attempt < 10) {
      dt *= 0.5;
      ++st.halvings;
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    const Vec2 w = q[i] - q[i - 1];
    const double l = norm(w);
    if (l > 1.0) q[i] = q[i - 1] + w / l;
  }
  st.projected = true;
  if (stats) *stats = st;
  return q;
}

double max_pairwise_distance(std::span<const Vec2> p) {
  double best = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) best = std::max(best, norm(p[j] - p[i]));
  return best;
}

namespace {

bool collapsed(std::span<const Vec2> p, double eps) {
  double x0 = p[0].x, x1 = p[0].x, y0 = p[0].y, y1 = p[0].y;
  for (const Vec2& q : p) {
    x0 = std::min(x0, q.x);
    x1 = std::max(x1, q.x);
    y0 = std::min(y0, q.y);
    y1 = std::max(y1, q.y);
  }
  if (std::max(x1 - x0, y1 - y0) > eps) return false;
  if (std::hypot(x1 - x0, y1 - y0) <= eps) return true;
  return max_pairwise_distance(p) <= eps;
}

}  // namespace

ContinuousRunResult integrate(const Configuration& start, const MobParams& params, double eps, double eps_collapse,
                              double t_max, const Sampler& sampler) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  std::vector<Vec2> p(start.positions().begin(), start.positions().end());
  ContinuousRunResult res{start, 0.0, ContinuousOutcome::TimeBudgetExceeded, {}, 0, 0, 0};
  double t = 0.0;
  double next_sample = 0.0;
  auto record = [&](bool force) {
    if (!sampler.enabled) return;
    if (force || t >= next_sample - 1e-12) {
      if (res.trace.empty() || res.trace.back().t != t) res.trace.push_back({t, p});
      if (sampler.sample_dt > 0.0) {
        while (next_sample <= t + 1e-12) next_sample += sampler.sample_dt;
      }
    }
  };
  record(true);
  for (;;) {
    if (is_eps_maxchain(p, eps)) {
      res.outcome = ContinuousOutcome::EpsMaxChain;
      break;
    }
    if (collapsed(p, eps_collapse)) {
      res.outcome = ContinuousOutcome::Collapsed;
      break;
    }
    if (t >= t_max) break;
    StepStats st;
    p = mob_step(p, params, &st);
    for (const Vec2& q : p) {
      if (!std::isfinite(q.x) || !std::isfinite(q.y)) throw ChainError(fmt::format("non-finite state at t = {}", t));
    }
    t += st.dt_used;
    ++res.steps;
    res.halvings += st.halvings;
    if (st.projected) ++res.projection_fallbacks;
    record(false);
  }
  record(true);
  res.elapsed = t;
  res.final = Configuration(std::move(p), params.eta_taut);
  return res;
}

std::vector<WatchSample> outer_angle_watch(std::span<const ContinuousSample> trace, double eta_zero) {
  std::vector<WatchSample> out;
  out.reserve(trace.size());
  for (const ContinuousSample& s : trace) {
    SegmentIndices seg = segment_indices(s.positions, kEtaCol, eta_zero);
    out.push_back({s.t, seg, metrics(s.positions, seg, eta_zero)});
  }
  return out;
}

}  // namespace chainform
