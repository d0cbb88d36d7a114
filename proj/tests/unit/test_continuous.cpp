#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "chainform/analysis.hpp"
#include "chainform/continuous.hpp"
#include "chainform/generators.hpp"

using namespace chainform;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Configuration fold(std::size_t n) {
  std::vector<Vec2> p;
  const std::size_t h = n / 2;
  for (std::size_t i = 0; i < n; ++i) p.push_back({static_cast<double>(i <= h ? i : n - 1 - i), 0.0});
  return Configuration(p);
}

}  // namespace

TEST_CASE("psi and caps") {
  CHECK(make_mob_params(0.5).psi() == Approx(2 * kPi / 3).epsilon(1e-15));
  CHECK(make_mob_params(0.1).psi() == Approx(2 * std::acos(0.9)));
  CHECK(make_mob_params(0.25).outer_cap() == 0.75);
  CHECK(make_mob_params(0.25, true).outer_cap() == 1.0);
}

TEST_CASE("velocity field on the continuous delta-V") {
  const Configuration c = gen_continuous_delta_v(9, 0.5);
  const MobParams mp = make_mob_params(0.1);
  const VelocityField f = velocity_field(c, mp);
  CHECK(f.alpha[4] == Approx(0.2506557).epsilon(1e-6));
  CHECK(f.alpha[4] < mp.psi());
  CHECK(f.mode[4] == RobotMode::Bent);
  CHECK(f.v[4].x == Approx(0.0).scale(1.0));
  CHECK(f.v[4].y == Approx(1.0));
  CHECK(f.mode[0] == RobotMode::Outer);
  CHECK(f.mode[8] == RobotMode::Outer);
  for (std::size_t k : {1u, 2u, 3u, 5u, 6u, 7u}) CHECK(f.mode[k] == RobotMode::Straight);
  CHECK(norm(f.v[0]) <= 0.9 + 1e-12);
  CHECK(norm(f.v[0]) > 0.0);
  // The outer robots may not stretch their taut edge.
  CHECK(dot(f.v[0] - f.v[1], c[0] - c[1]) <= 1e-9);
  // Mirror symmetry about the y axis.
  CHECK(f.v[0].x == Approx(-f.v[8].x));
  CHECK(f.v[0].y == Approx(f.v[8].y));
}

TEST_CASE("max-chain is at rest") {
  const Configuration c({{0, 0}, {0.6, 0.8}, {1.2, 1.6}, {1.8, 2.4}, {2.4, 3.2}});
  for (bool naive : {false, true}) {
    const VelocityField f = velocity_field(c, make_mob_params(0.25, naive));
    for (const Vec2& v : f.v) CHECK(norm(v) <= 1e-9);
  }
}

TEST_CASE("1-D fold closes at rate tau per side") {
  const MobParams mp = make_mob_params(0.25);
  const Configuration c = fold(9);
  const VelocityField f = velocity_field(c, mp);
  CHECK(f.mode[4] == RobotMode::Bent);
  CHECK(f.alpha[4] == Approx(0.0).scale(1.0));
  CHECK(norm(f.v[4]) == Approx(1.0));
  CHECK(f.v[4].x < 0.0);  // towards the outer robots at x = 0
  const double rate_l = distance_rate(c[0], f.v[0], c[4], f.v[4]);
  const double rate_r = distance_rate(c[8], f.v[8], c[4], f.v[4]);
  CHECK(rate_l == Approx(-0.25));
  CHECK(rate_r == Approx(-0.25));
}

TEST_CASE("distance_rate") {
  CHECK(distance_rate({0, 0}, {1, 0}, {2, 0}, {0, 0}) == Approx(-1));
  CHECK(distance_rate({0, 0}, {0, 1}, {2, 0}, {0, -1}) == Approx(0.0).scale(1.0));
  CHECK(distance_rate({0, 0}, {-0.5, 0}, {2, 0}, {0.25, 0}) == Approx(0.75));
  CHECK_THROWS_AS(distance_rate({1, 1}, {1, 0}, {1, 1}, {0, 1}), std::invalid_argument);
  // Against a finite difference.
  const Vec2 pi{0.3, -0.2}, vi{0.1, 0.7}, pj{1.1, 0.4}, vj{-0.6, 0.2};
  const double h = 1e-7;
  const double fd = (norm((pj + vj * h) - (pi + vi * h)) - norm((pj - vj * h) - (pi - vi * h))) / (2 * h);
  CHECK(distance_rate(pi, vi, pj, vj) == Approx(fd).epsilon(1e-7));
}

TEST_CASE("integrate: trivial, delta-V and fold") {
  const MobParams mp = make_mob_params(0.25);
  const Configuration straight({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  ContinuousRunResult r = integrate(straight, mp, 1e-3, 1e-3, 10);
  CHECK(r.outcome == ContinuousOutcome::EpsMaxChain);
  CHECK(r.elapsed == 0.0);

  r = integrate(gen_continuous_delta_v(9, 0.5), mp, 1e-3, 1e-3, 200);
  CHECK(r.outcome == ContinuousOutcome::EpsMaxChain);
  CHECK(r.elapsed <= 9 * (4 + 4.0 / 3) * 1.05);
  CHECK(r.projection_fallbacks == 0);

  r = integrate(fold(9), mp, 1e-3, 1e-3, 200);
  CHECK(r.outcome == ContinuousOutcome::Collapsed);
  CHECK(r.elapsed <= 8 / (2 * 0.25) * 1.05);
  CHECK(max_pairwise_distance(r.final.positions()) <= 1e-3);

  r = integrate(gen_continuous_delta_v(9, 0.5), mp, 1e-3, 1e-3, 0.5);
  CHECK(r.outcome == ContinuousOutcome::TimeBudgetExceeded);
  CHECK(r.elapsed == Approx(0.5).epsilon(1e-3));
  CHECK_THROWS(integrate(straight, mp, 1e-3, 1e-3, 0.0));
}

TEST_CASE("speed caps and edge lengths along random runs") {
  for (bool naive : {false, true}) {
    const MobParams mp = make_mob_params(0.25, naive);
    for (std::uint64_t s = 1; s <= 6; ++s) {
      const ContinuousRunResult r =
          integrate(gen_random(Family::Random2D, 9 + s, s), mp, 1e-3, 1e-3, 100, Sampler::every(0.0));
      bool caps = true, edges = true;
      for (std::size_t k = 0; k < r.trace.size(); k += 7) {
        const auto& p = r.trace[k].positions;
        const VelocityField f = velocity_field(p, mp);
        for (std::size_t i = 0; i < p.size(); ++i) {
          const bool outer = i == 0 || i + 1 == p.size();
          caps = caps && norm(f.v[i]) <= (outer ? mp.outer_cap() : 1.0) + 1e-12;
        }
        edges = edges && first_long_edge(p, mp.eta_taut) == 0;
      }
      CHECK(caps);
      CHECK(edges);
      CHECK(r.projection_fallbacks == 0);
      CHECK(r.outcome != ContinuousOutcome::TimeBudgetExceeded);
    }
  }
}

TEST_CASE("mob_step reports its step") {
  const MobParams mp = make_mob_params(0.25);
  const Configuration c = gen_continuous_delta_v(9, 0.5);
  StepStats st;
  const auto q = mob_step(c.positions(), mp, &st);
  CHECK(st.dt_used == Approx(mp.dt));
  CHECK(q.size() == 9);
  CHECK(norm(q[4] - c[4]) == Approx(mp.dt).epsilon(1e-9));
}

TEST_CASE("sampler spacing") {
  const MobParams mp = make_mob_params(0.25);
  const ContinuousRunResult r = integrate(gen_continuous_delta_v(9, 0.5), mp, 1e-3, 1e-3, 3, Sampler::every(0.1));
  REQUIRE(r.trace.size() > 20);
  CHECK(r.trace.front().t == 0.0);
  for (std::size_t k = 1; k + 1 < r.trace.size(); ++k)
    CHECK(r.trace[k].t - r.trace[k - 1].t == Approx(0.1).epsilon(0.02));
  CHECK(integrate(gen_continuous_delta_v(9, 0.5), mp, 1e-3, 1e-3, 3).trace.empty());
}

TEST_CASE("watch: inner length and segment indices along a delta-V run") {
  const MobParams mp = make_mob_params(0.25);
  const ContinuousRunResult r =
      integrate(gen_continuous_delta_v(11, 0.3), mp, 1e-3, 1e-3, 200, Sampler::every(10 * mp.dt));
  const auto w = outer_angle_watch(r.trace, mp.dt);
  REQUIRE(w.size() == r.trace.size());
  bool mono = true, lr = true;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    mono = mono && w[k + 1].m.I <= w[k].m.I + 1e-9;
    if (w[k].seg.defined && w[k + 1].seg.defined && w[k].seg.ell < w[k].seg.r && w[k + 1].seg.ell < w[k + 1].seg.r)
      lr = lr && w[k + 1].seg.ell >= w[k].seg.ell && w[k + 1].seg.r <= w[k].seg.r;
  }
  CHECK(mono);
  CHECK(lr);
  CHECK(w.front().m.alpha_ell == Approx(continuous_delta_v_theta(11, 0.3)).epsilon(1e-9));
}

TEST_CASE("wide outer angles keep opening while the outer segment is taut") {
  const MobParams mp = make_mob_params(0.25);
  std::size_t pairs = 0;
  bool ok = true;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const ContinuousRunResult r =
        integrate(gen_random(Family::Random2D, 9 + s % 9, s), mp, 1e-3, 1e-3, 300, Sampler::every(10 * mp.dt));
    const auto w = outer_angle_watch(r.trace, mp.dt);
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      const auto &a = w[k], &b = w[k + 1];
      if (!a.seg.defined || a.seg.ell >= a.seg.r || a.seg.ell != b.seg.ell || a.seg.ell_plus != b.seg.ell_plus ||
          a.seg.r != b.seg.r)
        continue;
      if (a.m.alpha_ell < 3 * kPi / 4 || a.m.O_ell < a.m.gamma_ell - 1e-5 || b.m.O_ell < b.m.gamma_ell - 1e-5)
        continue;
      if (a.seg.ell_plus == a.seg.r) continue;
      // Below two steps of height the bend is resolved by the step cap, not the angle law.
      if (a.m.H_ell < 2 * mp.dt || b.m.H_ell < 2 * mp.dt) continue;
      ++pairs;
      ok = ok && b.m.alpha_ell >= a.m.alpha_ell - 1e-4;
    }
  }
  CHECK(pairs > 0);
  CHECK(ok);
}

TEST_CASE("naive rate law on the delta-V triangle") {
  const MobParams mp = make_mob_params(0.25, true);
  const Configuration c = gen_continuous_delta_v(9, 0.1);
  const VelocityField f = velocity_field(c, mp);
  const double theta = continuous_delta_v_theta(9, 0.1);
  const double d = norm(c[8] - c[0]);
  const double rate = distance_rate(c[0], f.v[0], c[8], f.v[8]);
  CHECK(rate == Approx(d * std::cos(theta / 2) / 4).epsilon(0.02));
}
