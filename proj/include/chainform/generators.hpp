#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainform/configuration.hpp"

namespace chainform {

enum class Family {
  OpposedRandom,
  MarchingRandom,
  MarchingChain,
  DiscreteDeltaV,
  ContinuousDeltaV,
  TauDeltaV,
  Random2D,
  LowerBoundOpposed,
};

std::string to_string(Family f);
// Accepts the CLI spellings (opposed, marching, marching-chain, delta-v,
// cont-delta-v, tau-delta-v, random2d, lower-bound).
Family parse_family(const std::string& s);

struct GeneratorSpec {
  Family family = Family::Random2D;
  std::size_t n = 8;
  double delta = 0.1;
  double tau = 0.25;
  std::uint64_t seed = 1;
  double epsilon = 1e-3;
};

Configuration generate(const GeneratorSpec& spec);

// Laid along +x from the origin.
Configuration gen_marching_chain(std::size_t n);
// w_i = (delta/(n-1), 1 - 2(i-1)/n).
Configuration gen_discrete_delta_v(std::size_t n, double delta);
// Apex at the origin, legs of floor(n/2) unit edges opening upward, apex
// angle theta = 2 asin(delta / floor(n/2)).
Configuration gen_continuous_delta_v(std::size_t n, double delta);
double continuous_delta_v_theta(std::size_t n, double delta);
// The slowed-outer variant: same x component, y component of w_2 is
// (1-tau)/(1-tau+2/(n-2)) and falls off linearly to its negative at w_n.
Configuration gen_tau_delta_v(std::size_t n, double delta, double tau);

// Signed edge list (-0.313, ..., -0.313, eps) of the slow opposed start.
std::vector<double> lower_bound_signed_edges(std::size_t n, double eps);
// Collinear chain on the x axis realizing that list with the first entry's sign
// flipped, so both outer edges point the same way. One Max-GtM round maps it
// onto the same state as the signed list evolved with the absorbing-chain
// matrix, since the new w_2 does not depend on the old one.
Configuration gen_lower_bound_opposed(std::size_t n, double eps);

Configuration gen_random(Family family, std::size_t n, std::uint64_t seed);

// splitmix64; uniform doubles are the top 53 bits scaled by 2^-53.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t s_;
};

}  // namespace chainform
