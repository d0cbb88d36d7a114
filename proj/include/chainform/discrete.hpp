#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chainform/configuration.hpp"
#include "chainform/matrix_spec.hpp"

namespace chainform {

enum class End { First, Last };

struct DiscreteStrategy {
  enum class Kind { MaxGtM, OneFixedMaxGtM, TauMaxGtM };
  Kind kind = Kind::MaxGtM;
  End fixed_end = End::First;  // OneFixedMaxGtM only
  double tau = 0.0;            // TauMaxGtM only

  static DiscreteStrategy max_gtm() { return {}; }
  static DiscreteStrategy one_fixed(End e) { return {Kind::OneFixedMaxGtM, e, 0.0}; }
  static DiscreteStrategy tau_gtm(double tau);
};

std::string to_string(const DiscreteStrategy& s);

// Positions after one synchronous round. outer_first/outer_last scale the
// outer robots' Max-GtM displacement (1 = Max-GtM, 1-tau, 0 = frozen).
// A zero outer edge throws ZeroOuterEdge unless that end is frozen or a
// fallback direction generator is supplied.
std::vector<Vec2> step_positions(std::span<const Vec2> p, double outer_first, double outer_last);

Configuration step_max_gtm(const Configuration& c);
Configuration step_one_fixed(const Configuration& c, End fixed_end);
Configuration step_tau_gtm(const Configuration& c, double tau);
Configuration step(const Configuration& c, const DiscreteStrategy& s);

// (n-1)x(n-1) matrix mapping the stacked edge vectors (coordinate-wise) to
// their Max-GtM successors.
MatrixSpec strategy_matrix(const Configuration& c);

struct TraceMode {
  enum class Kind { None, EveryK, Full };
  Kind kind = Kind::None;
  std::size_t k = 1;

  static TraceMode none() { return {}; }
  static TraceMode full() { return {Kind::Full, 1}; }
  static TraceMode every(std::size_t k) { return {Kind::EveryK, k}; }
  bool records(std::size_t t) const;
};

struct DiscreteTraceEntry {
  std::size_t round = 0;
  std::vector<Vec2> positions;
  double phi1 = 0.0;
  double phi2 = 0.0;  // displacement of the round starting here; NaN if the step is undefined
};

enum class DiscreteOutcome { EpsMaxChain, EpsMarching, MaxRoundsExceeded };
std::string to_string(DiscreteOutcome o);

struct DiscreteRunResult {
  Configuration final;
  std::size_t rounds = 0;
  DiscreteOutcome outcome = DiscreteOutcome::MaxRoundsExceeded;
  std::vector<DiscreteTraceEntry> trace;
};

struct DiscreteRunOptions {
  TraceMode record;
  // When set, a zero outer edge takes a seeded random unit direction instead of
  // aborting the run.
  std::optional<std::uint64_t> symmetry_break_seed;
};

DiscreteRunResult run_discrete(const DiscreteStrategy& s, const Configuration& start, double eps,
                               std::size_t max_rounds, const DiscreteRunOptions& opts = {});

}  // namespace chainform
