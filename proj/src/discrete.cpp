#include "chainform/discrete.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "chainform/analysis.hpp"
#include "chainform/errors.hpp"
#include "chainform/generators.hpp"
#include "chainform/potentials.hpp"

namespace chainform {

DiscreteStrategy DiscreteStrategy::tau_gtm(double tau) {
  if (!(tau > 0.0 && tau <= 0.5)) throw std::invalid_argument("tau must lie in (0, 1/2]");
  return {Kind::TauMaxGtM, End::First, tau};
}

std::string to_string(const DiscreteStrategy& s) {
  switch (s.kind) {
    case DiscreteStrategy::Kind::MaxGtM: return "max-gtm";
    case DiscreteStrategy::Kind::OneFixedMaxGtM: return s.fixed_end == End::First ? "one-fixed-gtm(first)" : "one-fixed-gtm(last)";
    case DiscreteStrategy::Kind::TauMaxGtM: return fmt::format("tau-gtm({})", s.tau);
  }
  return "?";
}

std::string to_string(DiscreteOutcome o) {
  switch (o) {
    case DiscreteOutcome::EpsMaxChain: return "EpsMaxChain";
    case DiscreteOutcome::EpsMarching: return "EpsMarching";
    case DiscreteOutcome::MaxRoundsExceeded: return "MaxRoundsExceeded";
  }
  return "?";
}

namespace {

// Unit direction of an outer edge, or a random one when allowed.
Vec2 outer_dir(const Vec2& w, SplitMix64* rng, const char* which) {
  if (norm(w) > kEtaZero) return unit(w);
  if (!rng) throw ZeroOuterEdge(fmt::format("outer edge {} has zero length", which));
  double a = 2.0 * std::numbers::pi * rng->uniform();
  return {std::cos(a), std::sin(a)};
}

std::vector<Vec2> step_impl(std::span<const Vec2> p, double a1, double an, SplitMix64* rng) {
  const std::size_t n = p.size();
  std::vector<Vec2> q(n);
  for (std::size_t i = 1; i + 1 < n; ++i) q[i] = (p[i - 1] + p[i + 1]) * 0.5;
  if (a1 == 0.0) {
    q[0] = p[0];
  } else {
    Vec2 u = outer_dir(p[1] - p[0], rng, "w_2");
    Vec2 target = (p[0] + p[1] - u) * 0.5;
    q[0] = p[0] + (target - p[0]) * a1;
  }
  if (an == 0.0) {
    q[n - 1] = p[n - 1];
  } else {
    Vec2 u = outer_dir(p[n - 1] - p[n - 2], rng, "w_n");
    Vec2 target = (p[n - 2] + p[n - 1] + u) * 0.5;
    q[n - 1] = p[n - 1] + (target - p[n - 1]) * an;
  }
  return q;
}

void outer_factors(const DiscreteStrategy& s, double& a1, double& an) {
  a1 = an = 1.0;
  if (s.kind == DiscreteStrategy::Kind::TauMaxGtM) {
    a1 = an = 1.0 - s.tau;
  } else if (s.kind == DiscreteStrategy::Kind::OneFixedMaxGtM) {
    (s.fixed_end == End::First ? a1 : an) = 0.0;
  }
}

}  // namespace

std::vector<Vec2> step_positions(std::span<const Vec2> p, double outer_first, double outer_last) {
  return step_impl(p, outer_first, outer_last, nullptr);
}

Configuration step(const Configuration& c, const DiscreteStrategy& s) {
  double a1, an;
  outer_factors(s, a1, an);
  return Configuration(step_impl(c.positions(), a1, an, nullptr));
}

Configuration step_max_gtm(const Configuration& c) { return step(c, DiscreteStrategy::max_gtm()); }
Configuration step_one_fixed(const Configuration& c, End e) { return step(c, DiscreteStrategy::one_fixed(e)); }
Configuration step_tau_gtm(const Configuration& c, double tau) {
  // tau = 0 is allowed here and reduces to Max-GtM.
  if (!(tau >= 0.0 && tau <= 0.5)) throw std::invalid_argument("tau must lie in [0, 1/2]");
  return Configuration(step_impl(c.positions(), 1.0 - tau, 1.0 - tau, nullptr));
}

MatrixSpec strategy_matrix(const Configuration& c) {
  const std::size_t n = c.n();
  const double l2 = norm(c[1] - c[0]);
  const double ln = norm(c[n - 1] - c[n - 2]);
  if (l2 <= kEtaZero || ln <= kEtaZero) throw ZeroOuterEdge("strategy matrix needs non-zero outer edges");
  const auto d = static_cast<Eigen::Index>(n - 1);
  MatrixSpec s{MatrixKind::Strategy, n, Eigen::MatrixXd::Zero(d, d)};
  for (Eigen::Index k = 0; k + 1 < d; ++k) s.m(k, k + 1) = s.m(k + 1, k) = 0.5;
  s.m(0, 0) += 0.5 / l2;
  s.m(d - 1, d - 1) += 0.5 / ln;
  return s;
}

bool TraceMode::records(std::size_t t) const {
  switch (kind) {
    case Kind::None: return false;
    case Kind::Full: return true;
    case Kind::EveryK: return k == 0 ? t == 0 : t % k == 0;
  }
  return false;
}

DiscreteRunResult run_discrete(const DiscreteStrategy& s, const Configuration& start, double eps,
                               std::size_t max_rounds, const DiscreteRunOptions& opts) {
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  double a1, an;
  outer_factors(s, a1, an);
  std::optional<SplitMix64> rng;
  if (opts.symmetry_break_seed) rng.emplace(*opts.symmetry_break_seed);
  SplitMix64* rp = rng ? &*rng : nullptr;

  std::vector<Vec2> p(start.positions().begin(), start.positions().end());
  DiscreteRunResult res{start, 0, DiscreteOutcome::MaxRoundsExceeded, {}};
  for (std::size_t t = 0;; ++t) {
    DiscreteOutcome done = DiscreteOutcome::MaxRoundsExceeded;
    bool stop = false;
    if (is_eps_maxchain(p, eps)) {
      done = DiscreteOutcome::EpsMaxChain;
      stop = true;
    } else if (is_eps_marching(p, eps)) {
      done = DiscreteOutcome::EpsMarching;
      stop = true;
    } else if (t == max_rounds) {
      stop = true;
    }

    std::vector<Vec2> q;
    bool stepped = false;
    if (!stop || opts.record.records(t)) {
      try {
        q = step_impl(p, a1, an, rp);
        stepped = true;
      } catch (const ZeroOuterEdge& e) {
        if (!stop) throw ZeroOuterEdge(fmt::format("round {}: {}", t, e.what()), static_cast<long>(t));
      }
    }
    if (opts.record.records(t) || (stop && opts.record.kind != TraceMode::Kind::None)) {
      double f2 = stepped ? phi2(p, q) : std::numeric_limits<double>::quiet_NaN();
      if (res.trace.empty() || res.trace.back().round != t) res.trace.push_back({t, p, phi1(p), f2});
    }
    if (stop) {
      res.rounds = t;
      res.outcome = done;
      res.final = Configuration(std::move(p));
      return res;
    }
    if (std::size_t bad = first_long_edge(q)) {
      throw ConnectivityError(fmt::format("round {}: edge w_{} stretched past 1", t + 1, bad), static_cast<int>(bad));
    }
    p = std::move(q);
  }
}

}  // namespace chainform
