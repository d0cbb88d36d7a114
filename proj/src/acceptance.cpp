#include "chainform/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "chainform/analysis.hpp"
#include "chainform/continuous.hpp"
#include "chainform/discrete.hpp"
#include "chainform/errors.hpp"
#include "chainform/generators.hpp"
#include "chainform/potentials.hpp"
#include "chainform/spectral.hpp"
#include "chainform/stats.hpp"
#include "chainform/sweep.hpp"

namespace chainform {
namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kFixedPointTol = 1e-12;
constexpr double kEigTol = 1e-8;
constexpr double kRayleighTol = 1e-10;
constexpr double kPhi2MonoTol = 1e-12;
constexpr double kPhi2DiffTol = 1e-9;
constexpr double kX2Tol = 1e-12;
constexpr double kIntegrationSlack = 0.05;  // on continuous time bounds
constexpr double kRateSlack = 0.02;         // relative, on the continuous rate laws
constexpr double kDeltaSpread = 0.25;       // max-min over min of the Max-MoB delta-V times
constexpr double kTautGap = 1e-5;           // O >= gamma - gap counts as a taut outer segment
constexpr double kRegimeMargin = 0.01;      // angle and slack margins around regime borders
constexpr double kMonoTol = 1e-9;           // I non-increasing between samples

struct Checks {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!cond) {
      ok = false;
      detail += " [x]";
    }
  }
};

std::size_t workers_or_default(std::size_t w) { return w ? w : default_workers(); }

template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& fn) {
  workers = std::min(workers_or_default(workers), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (workers <= 1) {
    body();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(body);
}

std::vector<double> logs_inv(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(std::log(1.0 / x));
  return out;
}

double max_abs_diff_sorted(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return INFINITY;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// 1. One Max-GtM step on the marching chain.
void c01(Checks& c, std::size_t) {
  for (std::size_t n : {4u, 10u, 50u}) {
    const Configuration m = gen_marching_chain(n);
    const Configuration m1 = step_max_gtm(m);
    const VectorChain w0 = chain_vectors(m), w1 = chain_vectors(m1);
    double dw = 0.0, dstep = 0.0, ddir = 0.0;
    for (std::size_t k = 0; k < w0.size(); ++k) dw = std::max(dw, norm(w1[k] - w0[k]));
    const Vec2 d0 = m1[0] - m[0];
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 d = m1[i] - m[i];
      dstep = std::max(dstep, std::abs(norm(d) - 1.0 / static_cast<double>(n)));
      ddir = std::max(ddir, norm(d - d0));
    }
    c.require(dw <= kFixedPointTol && dstep <= kFixedPointTol && ddir <= kFixedPointTol,
              fmt::format("n={}: |dw|={:.1e} |step-1/n|={:.1e}", n, dw, dstep));
  }
}

// 2. Random opposed starts: quadratic scaling and the n^2 ln(n/eps) cap.
void c02(Checks& c, std::size_t workers) {
  ExperimentSpec spec;
  spec.engine = Engine::Discrete;
  spec.strategy = StrategyName::MaxGtM;
  spec.family = Family::OpposedRandom;
  spec.ns = {8, 16, 32, 64};
  spec.epss = {1e-4};
  spec.seeds.clear();
  for (std::uint64_t s = 1; s <= 20; ++s) spec.seeds.push_back(s);
  auto bound = [](double n) { return 20.0 * n * n * std::log(n / 1e-4); };
  spec.max_rounds = static_cast<std::size_t>(std::ceil(bound(64)));
  const SweepResult r = run_sweep(spec, workers);
  std::size_t over = 0;
  for (const SweepRow& row : r.rows)
    if (row.outcome != "EpsMaxChain" || row.runtime > bound(static_cast<double>(row.n))) ++over;
  c.require(over == 0, fmt::format("{} of {} runs missed EpsMaxChain within 20 n^2 ln(n/eps)", over, r.rows.size()));
  const bool have = r.fit.has_value();
  const double slope = have ? r.fit->slope : NAN;
  c.require(have && slope >= 1.8 && slope <= 2.3,
            fmt::format("median slope={:.3f} (r2={:.3f})", slope, have ? r.fit->r_squared : NAN));
}

// 3. Lower-bound start: rounds affine in log(1/eps).
void c03(Checks& c, std::size_t workers) {
  const std::vector<double> epss{1e-2, 1e-4, 1e-6};
  std::vector<double> rounds(epss.size());
  std::vector<std::string> outcome(epss.size());
  parallel_for(epss.size(), workers, [&](std::size_t k) {
    const DiscreteRunResult r =
        run_discrete(DiscreteStrategy::max_gtm(), gen_lower_bound_opposed(32, epss[k]), epss[k], 10'000'000);
    rounds[k] = static_cast<double>(r.rounds);
    outcome[k] = to_string(r.outcome);
  });
  const Fit f = fit_affine(logs_inv(epss), rounds);
  c.require(std::all_of(outcome.begin(), outcome.end(), [](auto& o) { return o == "EpsMaxChain"; }),
            fmt::format("rounds {}/{}/{}", rounds[0], rounds[1], rounds[2]));
  c.require(f.slope > 0.0 && f.r_squared >= 0.98, fmt::format("slope={:.2f} r2={:.4f}", f.slope, f.r_squared));
}

// 4. Discrete delta-V: log(1/delta) dependence and the x_2 growth cap.
void c04(Checks& c, std::size_t workers) {
  const std::size_t n = 16;
  const std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> rounds(deltas.size());
  std::vector<double> worst(deltas.size(), -INFINITY);
  std::vector<std::string> outcome(deltas.size());
  const double grow = 1.0 + 1.0 / static_cast<double>(n - 2);
  parallel_for(deltas.size(), workers, [&](std::size_t k) {
    DiscreteRunOptions opt;
    opt.record = TraceMode::full();
    const DiscreteRunResult r =
        run_discrete(DiscreteStrategy::max_gtm(), gen_discrete_delta_v(n, deltas[k]), 1e-3, 10'000'000, opt);
    rounds[k] = static_cast<double>(r.rounds);
    outcome[k] = to_string(r.outcome);
    for (std::size_t t = 0; t + 1 < r.trace.size(); ++t) {
      const double x0 = r.trace[t].positions[1].x - r.trace[t].positions[0].x;
      const double x1 = r.trace[t + 1].positions[1].x - r.trace[t + 1].positions[0].x;
      worst[k] = std::max(worst[k], x1 - (grow * x0 + kX2Tol));
    }
  });
  bool increasing = true;
  for (std::size_t k = 1; k < rounds.size(); ++k) increasing = increasing && rounds[k] > rounds[k - 1];
  const Fit f = fit_affine(logs_inv(deltas), rounds);
  c.require(std::all_of(outcome.begin(), outcome.end(), [](auto& o) { return o == "EpsMaxChain"; }) && increasing,
            fmt::format("rounds {}/{}/{}/{}", rounds[0], rounds[1], rounds[2], rounds[3]));
  c.require(f.r_squared >= 0.95, fmt::format("affine r2={:.4f}", f.r_squared));
  const double w = *std::max_element(worst.begin(), worst.end());
  c.require(w <= 0.0, fmt::format("max x2(t+1)-(1+1/(n-2))x2(t)={:.2e}", w + kX2Tol));
}

// 5. One frozen end and the A3 contraction rate.
void c05(Checks& c, std::size_t workers) {
  const std::vector<std::size_t> ns{8, 16, 32};
  const double eps = 1e-3;
  const std::size_t seeds = 10;
  std::vector<int> bad(ns.size() * seeds, 0);
  std::vector<double> ratio(ns.size() * seeds, 0.0);
  parallel_for(bad.size(), workers, [&](std::size_t idx) {
    const std::size_t n = ns[idx / seeds];
    const double nn = static_cast<double>(n);
    const double bound = 20.0 * (2 * nn - 1) * (2 * nn - 1) * std::log(nn * nn / eps);
    const DiscreteRunResult r = run_discrete(DiscreteStrategy::one_fixed(End::First),
                                             gen_random(Family::Random2D, n, idx % seeds + 1), eps,
                                             static_cast<std::size_t>(std::ceil(bound)));
    bad[idx] = r.outcome != DiscreteOutcome::EpsMaxChain;
    ratio[idx] = static_cast<double>(r.rounds) / bound;
  });
  const int nbad = std::count(bad.begin(), bad.end(), 1);
  c.require(nbad == 0, fmt::format("{} of {} runs over 20(2n-1)^2 ln(n^2/eps) (max rounds/bound={:.4f})", nbad,
                                   bad.size(), *std::max_element(ratio.begin(), ratio.end())));
  double dr = 0.0;
  for (std::size_t n : ns)
    dr = std::max(dr, std::abs(spectral_radius(build_a3(n)) - std::cos(kPi / (2.0 * static_cast<double>(n) - 1))));
  c.require(dr <= kEigTol, fmt::format("|rho(A3)-cos(pi/(2n-1))|={:.1e}", dr));
}

// 6. Closed-form spectra and the marching-chain instability.
void c06(Checks& c, std::size_t) {
  double e1 = 0.0, e3 = 0.0;
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    e1 = std::max(e1, max_abs_diff_sorted(eigenvalues(build_a1(n)).eigenvalues, a1_eigenvalues_closed(n)));
    e3 = std::max(e3, max_abs_diff_sorted(eigenvalues(build_a3(n)).eigenvalues, a3_eigenvalues_closed(n)));
  }
  c.require(e1 <= kEigTol, fmt::format("A1 max err={:.1e}", e1));
  c.require(e3 <= kEigTol, fmt::format("A3 max err={:.1e}", e3));
  for (std::size_t n : {6u, 10u, 20u}) {
    const double nn = static_cast<double>(n);
    const double rho = spectral_radius(build_jacobian_marching(n));
    const double floor = 1.0 + 1.0 / ((nn - 1) * (nn - 2));
    c.require(rho > 1.0 && rho >= floor - kRayleighTol, fmt::format("n={}: rho(J)={:.6f} >= {:.6f}", n, rho, floor));
  }
}

std::size_t trajectory_n(std::size_t s) { return 4 + s % 29; }

// 7. Displacement potential over 500 rounds of 200 random chains.
void c07(Checks& c, std::size_t workers) {
  const std::size_t count = 200, rounds = 500;
  std::vector<double> mono(count, -INFINITY), diff(count, -INFINITY);
  std::vector<std::string> err(count);
  parallel_for(count, workers, [&](std::size_t k) {
    std::vector<std::vector<Vec2>> p;
    Configuration cur = gen_random(Family::Random2D, trajectory_n(k + 1), k + 1);
    p.emplace_back(cur.positions().begin(), cur.positions().end());
    try {
      for (std::size_t t = 0; t < rounds + 1; ++t) {
        cur = step_max_gtm(cur);
        p.emplace_back(cur.positions().begin(), cur.positions().end());
      }
    } catch (const ChainError& e) {
      err[k] = e.what();
    }
    for (std::size_t t = 0; t + 2 < p.size(); ++t) {
      const Phi2Diff d = phi2_diff_lower_bound(p[t], p[t + 1], p[t + 2]);
      mono[k] = std::max(mono[k], -d.diff);
      diff[k] = std::max(diff[k], d.bound - d.diff);
    }
  });
  const std::size_t errs = std::count_if(err.begin(), err.end(), [](auto& e) { return !e.empty(); });
  const double m = *std::max_element(mono.begin(), mono.end());
  const double d = *std::max_element(diff.begin(), diff.end());
  c.require(errs == 0, fmt::format("{} step errors", errs));
  c.require(m <= kPhi2MonoTol, fmt::format("max phi2 increase={:.1e}", m));
  c.require(d <= kPhi2DiffTol, fmt::format("max (bound - decrease)={:.1e}", d));
}

// 8. The same chains run to 50 n^2 rounds end near a max-chain or marching chain.
void c08(Checks& c, std::size_t workers) {
  const std::size_t count = 200;
  std::vector<DiscreteOutcome> out(count, DiscreteOutcome::MaxRoundsExceeded);
  parallel_for(count, workers, [&](std::size_t k) {
    const std::size_t n = trajectory_n(k + 1);
    try {
      out[k] = run_discrete(DiscreteStrategy::max_gtm(), gen_random(Family::Random2D, n, k + 1), 1e-3, 50 * n * n)
                   .outcome;
    } catch (const ChainError&) {
    }
  });
  const auto maxc = std::count(out.begin(), out.end(), DiscreteOutcome::EpsMaxChain);
  const auto march = std::count(out.begin(), out.end(), DiscreteOutcome::EpsMarching);
  c.require(maxc + march == static_cast<long>(count),
            fmt::format("{} max-chain, {} marching, {} neither", maxc, march, count - maxc - march));
}

double main_bound(double n, double tau) {
  return 2 * (n - 3) * (1 / (1 - tau) + 1 / std::sqrt(2 - std::sqrt(2.0)) + 10) + 3 * n * (1 / tau + 1 / (1 - tau));
}

// 9. Continuous Max-MoB on random starts: closed-form time bound, linear scaling.
void c09(Checks& c, std::size_t workers) {
  const double tau = 0.25;
  ExperimentSpec spec;
  spec.engine = Engine::Continuous;
  spec.strategy = StrategyName::MaxMoB;
  spec.family = Family::Random2D;
  spec.ns = {9, 17, 33};
  spec.taus = {tau};
  spec.epss = {1e-3};
  spec.dt = 1e-3;
  spec.seeds.clear();
  for (std::uint64_t s = 1; s <= 40; ++s) spec.seeds.push_back(s);
  spec.t_max = main_bound(33, tau) * (1 + kIntegrationSlack);
  const SweepResult r = run_sweep(spec, workers);
  std::size_t over = 0;
  double worst = 0.0;
  for (const SweepRow& row : r.rows) {
    const double b = main_bound(static_cast<double>(row.n), tau) * (1 + kIntegrationSlack);
    if ((row.outcome != "EpsMaxChain" && row.outcome != "Collapsed") || row.runtime > b) ++over;
    worst = std::max(worst, row.runtime / b);
  }
  c.require(over == 0, fmt::format("{} of {} runs over the bound (max elapsed/bound={:.3f})", over, r.rows.size(), worst));
  const bool have = r.fit.has_value();
  const double slope = have ? r.fit->slope : NAN;
  c.require(have && slope >= 0.8 && slope <= 1.2, fmt::format("median slope={:.3f}", slope));
}

// 10. Continuous delta-V: Max-MoB against the naive variant.
void c10(Checks& c, std::size_t workers) {
  const std::size_t n = 9;
  const double tau = 0.25;
  const std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  std::vector<double> smart(3), naive(3);
  std::vector<bool> smart_ok(3), naive_ok(3);
  std::vector<double> rate_err(3, 0.0);
  std::vector<std::size_t> rate_pairs(3, 0);
  parallel_for(6, workers, [&](std::size_t job) {
    const std::size_t k = job % 3;
    const bool is_naive = job >= 3;
    const MobParams mp = make_mob_params(tau, is_naive);
    const Configuration start = gen_continuous_delta_v(n, deltas[k]);
    const ContinuousRunResult r =
        integrate(start, mp, 1e-3, 1e-3, 400.0, is_naive ? Sampler::every(10 * mp.dt) : Sampler::none());
    (is_naive ? naive : smart)[k] = r.elapsed;
    (is_naive ? naive_ok : smart_ok)[k] = r.outcome == ContinuousOutcome::EpsMaxChain;
    if (!is_naive) return;
    const std::size_t h = n / 2;
    for (std::size_t s = 0; s + 1 < r.trace.size(); ++s) {
      const auto& p = r.trace[s].positions;
      const auto& q = r.trace[s + 1].positions;
      const VelocityField f0 = velocity_field(p, mp), f1 = velocity_field(q, mp);
      auto triangle = [&](const VelocityField& f) {
        for (std::size_t i = 1; i + 1 < n; ++i)
          if ((f.mode[i] == RobotMode::Bent) != (i == h)) return false;
        return true;
      };
      if (!triangle(f0) || !triangle(f1)) continue;
      const double d0 = norm(p[n - 1] - p[0]), d1 = norm(q[n - 1] - q[0]);
      // The measured rate is a secant over one sample interval, so the law is
      // averaged over both ends of it.
      const double pred = (d0 * std::cos(interior_angle(p, h) / 2) + d1 * std::cos(interior_angle(q, h) / 2)) /
                          (2.0 * static_cast<double>(h));
      const double meas = (d1 - d0) / (r.trace[s + 1].t - r.trace[s].t);
      rate_err[k] = std::max(rate_err[k], std::abs(meas / pred - 1));
      ++rate_pairs[k];
    }
  });
  const double bound = static_cast<double>(n) * (1 / tau + 1 / (1 - tau)) * (1 + kIntegrationSlack);
  const double lo = *std::min_element(smart.begin(), smart.end());
  const double hi = *std::max_element(smart.begin(), smart.end());
  const bool all_smart = std::all_of(smart_ok.begin(), smart_ok.end(), [](bool b) { return b; });
  c.require(all_smart && hi <= bound,
            fmt::format("Max-MoB times {:.2f}/{:.2f}/{:.2f} <= {:.1f}", smart[0], smart[1], smart[2], bound));
  c.require((hi - lo) / lo < kDeltaSpread, fmt::format("Max-MoB spread={:.1f}% (< 25%)", 100 * (hi - lo) / lo));
  const Fit f = fit_affine(logs_inv(deltas), naive);
  const bool all_naive = std::all_of(naive_ok.begin(), naive_ok.end(), [](bool b) { return b; });
  c.require(all_naive && f.slope > 0 && f.r_squared >= 0.95,
            fmt::format("naive times {:.2f}/{:.2f}/{:.2f} slope={:.3f} r2={:.4f}", naive[0], naive[1], naive[2],
                        f.slope, f.r_squared));
  const double e = *std::max_element(rate_err.begin(), rate_err.end());
  const bool sampled = std::all_of(rate_pairs.begin(), rate_pairs.end(), [](std::size_t m) { return m > 0; });
  c.require(sampled && e <= kRateSlack, fmt::format("naive rate law max rel err={:.2e} over {}+{}+{} samples", e,
                                                    rate_pairs[0], rate_pairs[1], rate_pairs[2]));
}

// 11. Slowed outer robots in the discrete model keep the delta dependence.
void c11(Checks& c, std::size_t workers) {
  const std::size_t n = 16;
  const double tau = 0.2;
  const std::vector<double> deltas{1e-1, 1e-2, 1e-3};
  std::vector<double> rounds(3);
  std::vector<bool> ok(3);
  parallel_for(3, workers, [&](std::size_t k) {
    const DiscreteRunResult r =
        run_discrete(DiscreteStrategy::tau_gtm(tau), gen_tau_delta_v(n, deltas[k], tau), 1e-3, 10'000'000);
    rounds[k] = static_cast<double>(r.rounds);
    ok[k] = r.outcome == DiscreteOutcome::EpsMaxChain;
  });
  const Fit f = fit_affine(logs_inv(deltas), rounds);
  c.require(ok[0] && ok[1] && ok[2] && f.slope > 0,
            fmt::format("rounds {}/{}/{} slope={:.2f} r2={:.4f}", rounds[0], rounds[1], rounds[2], f.slope,
                        f.r_squared));
}

// 12. Invariants along continuous traces, checked on both outer segments.
struct SideView {
  std::size_t idx, plus, other;
  double alpha, O, gamma, H;
};

SideView side(const WatchSample& w, bool left) {
  if (left) return {w.seg.ell, w.seg.ell_plus, w.seg.r, w.m.alpha_ell, w.m.O_ell, w.m.gamma_ell, w.m.H_ell};
  return {w.seg.r, w.seg.r_plus, w.seg.ell, w.m.alpha_r, w.m.O_r, w.m.gamma_r, w.m.H_r};
}

struct InvariantTally {
  std::size_t lr_bad = 0, i_bad = 0;
  std::size_t inner_n = 0, inner_bad = 0;
  std::size_t omv_runs = 0, omv_bad = 0;
  std::size_t om_n = 0, om_bad = 0;
  std::size_t h_n = 0, h_bad = 0;
  double inner_min = INFINITY, omv_lo = INFINITY, omv_hi = -INFINITY, om_max = -INFINITY, h_max = -INFINITY;

  void merge(const InvariantTally& o) {
    lr_bad += o.lr_bad;
    i_bad += o.i_bad;
    inner_n += o.inner_n;
    inner_bad += o.inner_bad;
    omv_runs += o.omv_runs;
    omv_bad += o.omv_bad;
    om_n += o.om_n;
    om_bad += o.om_bad;
    h_n += o.h_n;
    h_bad += o.h_bad;
    inner_min = std::min(inner_min, o.inner_min);
    omv_lo = std::min(omv_lo, o.omv_lo);
    omv_hi = std::max(omv_hi, o.omv_hi);
    om_max = std::max(om_max, o.om_max);
    h_max = std::max(h_max, o.h_max);
  }
};

InvariantTally check_watch(const std::vector<WatchSample>& w, const MobParams& mp) {
  const double one_tau = 1 - mp.tau, psi = mp.psi();
  const double om_rate = -std::sqrt(2 - std::sqrt(2.0)) / 2;
  InvariantTally t;
  auto same = [&](std::size_t i) {
    const auto &a = w[i].seg, &b = w[i + 1].seg;
    return a.defined == b.defined && a.ell == b.ell && a.r == b.r && a.ell_plus == b.ell_plus && a.r_plus == b.r_plus;
  };
  // Same (ell, r, ell+, r+) at both ends, the two bends still apart, and no
  // index change in the neighbouring intervals either: events are only
  // located to within one sample interval.
  auto stable = [&](std::size_t i) {
    return w[i].seg.defined && same(i) && w[i].seg.ell < w[i].seg.r && (i == 0 || same(i - 1)) &&
           (i + 2 >= w.size() || same(i + 1));
  };
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const auto &a = w[i], &b = w[i + 1];
    if (a.seg.defined && b.seg.defined && a.seg.ell < a.seg.r && b.seg.ell < b.seg.r &&
        (b.seg.ell < a.seg.ell || b.seg.r > a.seg.r))
      ++t.lr_bad;
    if (b.m.I > a.m.I + kMonoTol) ++t.i_bad;
  }
  for (bool left : {true, false}) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (!stable(i)) continue;
      const WatchSample &a = w[i], &b = w[i + 1];
      const SideView sa = side(a, left), sb = side(b, left);
      const double dt = b.t - a.t;
      const bool taut = sa.O >= sa.gamma - kTautGap && sb.O >= sb.gamma - kTautGap;
      if (sa.alpha < psi && sb.alpha < psi) {
        const double rate = -(b.m.I - a.m.I) / dt;
        ++t.inner_n;
        t.inner_min = std::min(t.inner_min, rate);
        if (rate < one_tau * (1 - kRateSlack)) ++t.inner_bad;
      }
      if (taut && sa.alpha >= psi && sb.alpha >= psi && sa.alpha <= 3 * kPi / 4 && sb.alpha <= 3 * kPi / 4) {
        const double rate = (b.m.I - a.m.I) / dt;
        ++t.om_n;
        t.om_max = std::max(t.om_max, rate);
        if (rate > om_rate * (1 - kRateSlack)) ++t.om_bad;
      }
      // The bend's partner across the chain must not be the far bend itself,
      // and the height must be resolvable at the step size.
      if (taut && sa.alpha >= 3 * kPi / 4 && sb.alpha >= 3 * kPi / 4 && sa.plus != sa.other &&
          sa.H >= 2 * mp.dt && sb.H >= 2 * mp.dt) {
        const double rate = (sb.H - sa.H) / dt;
        ++t.h_n;
        t.h_max = std::max(t.h_max, rate);
        if (rate > -(1.0 / 20) * (1 - kRateSlack)) ++t.h_bad;
      }
    }
    // Slack outer segment behind a wide angle: average over each maximal run.
    auto slack = [&](std::size_t i) {
      if (!stable(i)) return false;
      const SideView sa = side(w[i], left), sb = side(w[i + 1], left);
      return sa.alpha >= psi + kRegimeMargin && sb.alpha >= psi + kRegimeMargin &&
             sa.O <= sa.gamma - kRegimeMargin && sb.O <= sb.gamma - kRegimeMargin;
    };
    for (std::size_t i = 0; i + 1 < w.size();) {
      if (!slack(i)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < w.size() && slack(j)) ++j;
      const double rate = (side(w[j], left).O - side(w[i], left).O) / (w[j].t - w[i].t);
      ++t.omv_runs;
      t.omv_lo = std::min(t.omv_lo, rate);
      t.omv_hi = std::max(t.omv_hi, rate);
      if (std::abs(rate - one_tau) > kRateSlack * one_tau) ++t.omv_bad;
      i = j;
    }
  }
  return t;
}

void c12(Checks& c, std::size_t workers) {
  const std::size_t count = 50;
  const MobParams mp = make_mob_params(0.25);
  std::vector<InvariantTally> tallies(count);
  std::vector<bool> finished(count);
  parallel_for(count, workers, [&](std::size_t k) {
    const std::size_t s = k + 1, n = 9 + s % 9;
    const ContinuousRunResult r =
        integrate(gen_random(Family::Random2D, n, s), mp, 1e-3, 1e-3, 500.0, Sampler::every(10 * mp.dt));
    finished[k] = r.outcome != ContinuousOutcome::TimeBudgetExceeded;
    tallies[k] = check_watch(outer_angle_watch(r.trace, mp.dt), mp);
  });
  InvariantTally t;
  for (const InvariantTally& x : tallies) t.merge(x);
  const auto done = std::count(finished.begin(), finished.end(), true);
  c.require(done == static_cast<long>(count), fmt::format("{} of {} traces terminated", done, count));
  c.require(t.lr_bad == 0 && t.i_bad == 0, fmt::format("ell/r reversals={} I increases={}", t.lr_bad, t.i_bad));
  c.require(t.inner_n > 0 && t.inner_bad == 0,
            fmt::format("inner: {} pairs, min -dI/dt={:.4f}", t.inner_n, t.inner_min));
  c.require(t.omv_runs > 0 && t.omv_bad == 0,
            fmt::format("slack outer: {} runs, dO/dt in [{:.4f}, {:.4f}]", t.omv_runs, t.omv_lo, t.omv_hi));
  c.require(t.om_n > 0 && t.om_bad == 0, fmt::format("medium angle: {} pairs, max dI/dt={:.4f}", t.om_n, t.om_max));
  c.require(t.h_n > 0 && t.h_bad == 0, fmt::format("wide angle: {} pairs, max dH/dt={:.4f}", t.h_n, t.h_max));
}

struct Entry {
  const char* title;
  double limit;
  void (*fn)(Checks&, std::size_t);
};

const Entry kEntries[kCriterionCount] = {
    {"marching-chain fixed point", 1, c01},
    {"discrete upper-bound shape", 120, c02},
    {"lower-bound construction", 60, c03},
    {"delta dependence, discrete", 120, c04},
    {"one stationary endpoint", 60, c05},
    {"spectral closed forms", 30, c06},
    {"displacement potential laws", 60, c07},
    {"convergence dichotomy", 300, c08},
    {"continuous main bound", 600, c09},
    {"continuous delta-V contrast", 300, c10},
    {"slowed outer robots, discrete", 120, c11},
    {"continuous invariant suite", 600, c12},
};

}  // namespace

CriterionResult run_criterion(int id, std::size_t workers) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range(fmt::format("no criterion {}", id));
  const Entry& e = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  r.limit_seconds = e.limit;
  Checks c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    e.fn(c, workers);
  } catch (const std::exception& ex) {
    c.require(false, std::string("exception: ") + ex.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.checks_ok = c.ok;
  r.passed = c.ok && r.seconds < r.limit_seconds;
  r.detail = c.detail;
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::size_t workers,
                                            const std::function<void(const CriterionResult&)>& on_done) {
  std::vector<CriterionResult> out;
  for (int id : ids) {
    out.push_back(run_criterion(id, workers));
    if (on_done) on_done(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::string why;
  if (r.checks_ok && !r.passed) why = " [over time limit]";
  return fmt::format("[{}] C{:02d} {} ({:.1f} s / {:.0f} s){}: {}", r.passed ? "PASS" : "FAIL", r.id, r.title,
                     r.seconds, r.limit_seconds, why, r.detail);
}

}  // namespace chainform
