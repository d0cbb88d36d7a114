#include "chainform/generators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "chainform/analysis.hpp"
#include "chainform/errors.hpp"

namespace chainform {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::string to_string(Family f) {
  switch (f) {
    case Family::OpposedRandom: return "opposed";
    case Family::MarchingRandom: return "marching";
    case Family::MarchingChain: return "marching-chain";
    case Family::DiscreteDeltaV: return "delta-v";
    case Family::ContinuousDeltaV: return "cont-delta-v";
    case Family::TauDeltaV: return "tau-delta-v";
    case Family::Random2D: return "random2d";
    case Family::LowerBoundOpposed: return "lower-bound";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::OpposedRandom, Family::MarchingRandom, Family::MarchingChain, Family::DiscreteDeltaV,
                   Family::ContinuousDeltaV, Family::TauDeltaV, Family::Random2D, Family::LowerBoundOpposed}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown family '" + s + "'");
}

namespace {

Configuration from_edges(const std::vector<Vec2>& w) { return Configuration::from_vectors({0.0, 0.0}, VectorChain{w}); }

void require_even(std::size_t n, std::size_t min, const char* what) {
  if (n % 2 != 0 || n < min) throw std::invalid_argument(fmt::format("{} needs even n >= {}, got {}", what, min, n));
}

}  // namespace

Configuration gen_marching_chain(std::size_t n) {
  require_even(n, 4, "marching chain");
  std::vector<Vec2> w;
  for (double v : marching_vector(n)) w.push_back({v, 0.0});
  return from_edges(w);
}

Configuration gen_discrete_delta_v(std::size_t n, double delta) {
  require_even(n, 4, "discrete delta-V");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double x = delta / static_cast<double>(n - 1);
  std::vector<Vec2> w;
  for (std::size_t i = 2; i <= n; ++i) w.push_back({x, 1.0 - 2.0 * static_cast<double>(i - 1) / static_cast<double>(n)});
  return from_edges(w);
}

double continuous_delta_v_theta(std::size_t n, double delta) {
  const double k = static_cast<double>(n / 2);
  return 2.0 * std::asin(delta / k);
}

Configuration gen_continuous_delta_v(std::size_t n, double delta) {
  if (n % 2 == 0 || n < 5) throw std::invalid_argument(fmt::format("continuous delta-V needs odd n >= 5, got {}", n));
  const std::size_t k = n / 2;
  if (!(delta > 0.0) || delta >= static_cast<double>(k))
    throw std::invalid_argument(fmt::format("continuous delta-V needs 0 < delta < {}", k));
  const double half = 0.5 * continuous_delta_v_theta(n, delta);
  const Vec2 left{-std::sin(half), std::cos(half)};
  const Vec2 right{std::sin(half), std::cos(half)};
  std::vector<Vec2> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i <= k)
      p[i] = left * static_cast<double>(k - i);
    else
      p[i] = right * static_cast<double>(i - k);
  }
  return Configuration(std::move(p));
}

Configuration gen_tau_delta_v(std::size_t n, double delta, double tau) {
  require_even(n, 6, "tau delta-V");
  if (!(tau > 0.0 && tau <= 0.5)) throw std::invalid_argument("tau must lie in (0, 1/2]");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const double nd = static_cast<double>(n);
  const double x = delta / (nd - 1.0);
  const double y2 = (1.0 - tau) / (1.0 - tau + 2.0 / (nd - 2.0));
  std::vector<Vec2> w;
  for (std::size_t i = 2; i <= n; ++i) {
    const double f = (nd / 2.0 - static_cast<double>(i) + 1.0) / (nd / 2.0 - 1.0);
    w.push_back({x, f * y2});
  }
  return from_edges(w);
}

std::vector<double> lower_bound_signed_edges(std::size_t n, double eps) {
  if (n < 3) throw std::invalid_argument("lower-bound start needs n >= 3");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  std::vector<double> w(n - 1, -0.313);
  w.back() = eps;
  return w;
}

Configuration gen_lower_bound_opposed(std::size_t n, double eps) {
  std::vector<double> s = lower_bound_signed_edges(n, eps);
  s.front() = -s.front();
  std::vector<Vec2> w;
  for (double v : s) w.push_back({v, 0.0});
  return from_edges(w);
}

Configuration gen_random(Family family, std::size_t n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("random chains need n >= 3");
  SplitMix64 rng(seed);
  std::vector<Vec2> w;
  w.reserve(n - 1);
  switch (family) {
    case Family::Random2D:
      for (std::size_t i = 0; i + 1 < n; ++i) {
        double len = 0.1 + 0.9 * rng.uniform();
        double ang = 2.0 * std::numbers::pi * rng.uniform();
        w.push_back({len * std::cos(ang), len * std::sin(ang)});
      }
      break;
    case Family::OpposedRandom:
    case Family::MarchingRandom:
      for (std::size_t i = 0; i + 1 < n; ++i) {
        double len = 0.1 + 0.9 * rng.uniform();
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        if (i == 0) sign = 1.0;
        if (i + 2 == n) sign = family == Family::OpposedRandom ? 1.0 : -1.0;
        w.push_back({sign * len, 0.0});
      }
      break;
    default:
      throw std::invalid_argument("gen_random: family " + to_string(family) + " is not random");
  }
  return from_edges(w);
}

Configuration generate(const GeneratorSpec& s) {
  switch (s.family) {
    case Family::MarchingChain: return gen_marching_chain(s.n);
    case Family::DiscreteDeltaV: return gen_discrete_delta_v(s.n, s.delta);
    case Family::ContinuousDeltaV: return gen_continuous_delta_v(s.n, s.delta);
    case Family::TauDeltaV: return gen_tau_delta_v(s.n, s.delta, s.tau);
    case Family::LowerBoundOpposed: return gen_lower_bound_opposed(s.n, s.epsilon);
    default: return gen_random(s.family, s.n, s.seed);
  }
}

}  // namespace chainform
