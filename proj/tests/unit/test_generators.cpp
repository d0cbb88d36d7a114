#include <cmath>

#include "doctest.h"

#include "chainform/analysis.hpp"
#include "chainform/discrete.hpp"
#include "chainform/generators.hpp"

using namespace chainform;
using doctest::Approx;

TEST_CASE("marching chain vectors") {
  auto w = chain_vectors(gen_marching_chain(10));
  const double want[] = {0.8, 0.6, 0.4, 0.2, 0, -0.2, -0.4, -0.6, -0.8};
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(w[k].x == Approx(want[k]).epsilon(1e-15));
    CHECK(w[k].y == 0.0);
  }
  w = chain_vectors(gen_marching_chain(4));
  CHECK(w[0].x == 0.5);
  CHECK(w[1].x == 0.0);
  CHECK(w[2].x == -0.5);
  for (std::size_t n : {4u, 6u, 10u, 50u}) {
    const Configuration m = gen_marching_chain(n);
    CHECK(norm(m[n - 1] - m[0]) <= 1e-12);
  }
  CHECK_THROWS(gen_marching_chain(7));
}

TEST_CASE("discrete delta-V") {
  const auto w = chain_vectors(gen_discrete_delta_v(10, 0.9));
  CHECK(w[0].x == Approx(0.1));
  CHECK(w[0].y == Approx(0.8));
  CHECK(w[4].x == Approx(0.1));
  CHECK(w[4].y == Approx(0.0).scale(1.0));
  CHECK(w[8].y == Approx(-0.8));
  const Configuration c = gen_discrete_delta_v(10, 0.9);
  CHECK(c[9].x - c[0].x == Approx(0.9));
  CHECK_THROWS(gen_discrete_delta_v(9, 0.1));
  CHECK_THROWS(gen_discrete_delta_v(4, 10.0));

  // delta -> 0 gives the marching chain turned onto the y axis.
  const auto z = chain_vectors(gen_discrete_delta_v(10, 1e-14));
  const auto m = marching_vector(10);
  for (std::size_t k = 0; k < 9; ++k) CHECK(z[k].y == Approx(m[k]).epsilon(1e-12));
}

TEST_CASE("continuous delta-V") {
  const Configuration c = gen_continuous_delta_v(9, 0.5);
  const double theta = 2 * std::asin(0.125);
  CHECK(continuous_delta_v_theta(9, 0.5) == Approx(0.2506557).epsilon(1e-7));
  CHECK(theta == Approx(continuous_delta_v_theta(9, 0.5)));
  for (const Vec2& w : chain_vectors(c).w) CHECK(norm(w) == Approx(1.0).epsilon(1e-14));
  CHECK(c[4] == Vec2{0, 0});
  CHECK(interior_angle(c.positions(), 4) == Approx(theta).epsilon(1e-12));
  for (std::size_t k = 1; k < 8; ++k)
    if (k != 4) CHECK(interior_angle(c.positions(), k) == Approx(M_PI).epsilon(1e-12));
  CHECK(norm(c[8] - c[0]) == Approx(2 * 4 * std::sin(theta / 2)).epsilon(1e-12));
  CHECK(norm(c[8] - c[0]) == Approx(1.0).epsilon(1e-12));  // 2 delta
  CHECK_THROWS(gen_continuous_delta_v(9, 4.0));
  CHECK_THROWS(gen_continuous_delta_v(8, 0.5));
}

TEST_CASE("tau delta-V") {
  const auto w = chain_vectors(gen_tau_delta_v(10, 0.9, 0.2));
  CHECK(w[0].x == Approx(0.1));
  CHECK(w[0].y == Approx(0.8 / 1.05).epsilon(1e-12));
  const double factor[] = {1, 0.75, 0.5, 0.25, 0, -0.25, -0.5, -0.75, -1};
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(w[k].x == Approx(0.1));
    CHECK(w[k].y == Approx(factor[k] * w[0].y).scale(1.0));
  }
  // At tau -> 0 the x components agree with the discrete delta-V.
  const auto d = chain_vectors(gen_discrete_delta_v(10, 0.9));
  const auto t = chain_vectors(gen_tau_delta_v(10, 0.9, 1e-12));
  for (std::size_t k = 0; k < 9; ++k) CHECK(t[k].x == d[k].x);
}

TEST_CASE("lower-bound start") {
  const auto s = lower_bound_signed_edges(4, 0.01);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == -0.313);
  CHECK(s[1] == -0.313);
  CHECK(s[2] == 0.01);
  for (std::size_t n : {3u, 8u, 32u}) {
    const Configuration c = gen_lower_bound_opposed(n, 1e-4);
    CHECK(first_long_edge(c.positions()) == 0);
    CHECK(classify(c).tag == ChainTag::Opposed);
  }
}

TEST_CASE("random families") {
  for (std::uint64_t s = 1; s <= 50; ++s) {
    const Configuration a = gen_random(Family::OpposedRandom, 9, s), b = gen_random(Family::OpposedRandom, 9, s);
    for (std::size_t i = 0; i < 9; ++i) CHECK(a[i] == b[i]);
    CHECK(classify(a).tag == ChainTag::Opposed);
    CHECK(classify(gen_random(Family::MarchingRandom, 9, s)).tag == ChainTag::Marching);
    const Configuration r = gen_random(Family::Random2D, 16, s);
    CHECK(first_long_edge(r.positions()) == 0);
    for (const Vec2& w : chain_vectors(r).w) {
      CHECK(norm(w) >= 0.1 - 1e-12);
      CHECK(norm(w) <= 1.0 + 1e-12);
    }
  }
  CHECK(gen_random(Family::Random2D, 8, 1)[3] != gen_random(Family::Random2D, 8, 2)[3]);
}

TEST_CASE("splitmix64 reference stream") {
  // First outputs for seed 0 of the published splitmix64 reference.
  SplitMix64 g(0);
  CHECK(g.next() == 0xe220a8397b1dcdafULL);
  CHECK(g.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(g.next() == 0x06c45d188009454fULL);
  SplitMix64 u(123);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("generate dispatches on the family name") {
  for (const char* name : {"opposed", "marching", "marching-chain", "delta-v", "cont-delta-v", "tau-delta-v",
                           "random2d", "lower-bound"}) {
    const Family f = parse_family(name);
    CHECK(to_string(f) == name);
    GeneratorSpec g{f, f == Family::ContinuousDeltaV ? 9u : 10u, 0.1, 0.25, 3, 1e-3};
    CHECK(generate(g).n() == g.n);
  }
  CHECK_THROWS(parse_family("spiral"));
}

// The outer robot's virtual neighbour is the unit vector along its edge, whose
// x component is x/|w| rather than x. Edge norms therefore dip by a second
// order amount in x = delta/(n-1) before growing; inner edges inherit the dip.
TEST_CASE("edge norms from delta-V starts never fall below (1 - x^2) of their start") {
  for (std::size_t n : {8u, 16u}) {
    for (double delta : {0.1, 1e-3}) {
      const double x = delta / static_cast<double>(n - 1);
      Configuration c = gen_discrete_delta_v(n, delta);
      Configuration t = gen_tau_delta_v(n, delta, 0.2);
      const VectorChain w0 = chain_vectors(c), t0 = chain_vectors(t);
      double worst = 0.0, tworst = 0.0;
      for (int round = 0; round < 5000; ++round) {
        c = step_max_gtm(c);
        t = step_tau_gtm(t, 0.2);
        const VectorChain w = chain_vectors(c), tw = chain_vectors(t);
        for (std::size_t k = 0; k < w.size(); ++k) {
          worst = std::max(worst, 1.0 - norm(w[k]) / norm(w0[k]));
          tworst = std::max(tworst, 1.0 - norm(tw[k]) / norm(t0[k]));
        }
      }
      CHECK(worst <= x * x);
      CHECK(tworst <= x * x);
    }
  }
}
