#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chainform/analysis.hpp"
#include "chainform/configuration.hpp"

namespace chainform {

struct MobParams {
  double tau = 0.25;
  bool naive = false;      // outer speed 1 and no sharp-angle move condition
  double dt = 1e-3;
  double eta_taut = 1e-6;  // |w| >= 1 - eta_taut counts as a unit edge
  double eta_col = kEtaCol;
  double eta_ang = kEtaAng;  // alpha >= pi - eta_ang counts as straight

  double psi() const;        // 2 acos(1 - tau)
  double outer_cap() const;  // 1 - tau, or 1 when naive
};

MobParams make_mob_params(double tau, bool naive = false, double dt = 1e-3);

enum class RobotMode { Outer, Bent, Straight };

struct VelocityField {
  std::vector<Vec2> v;
  std::vector<RobotMode> mode;
  std::vector<double> alpha;  // interior angle per robot (pi for outer robots)
  std::vector<bool> degenerate;  // straight only because a neighbour coincides with it
  // First robot of the cluster robot k moves with. Inner robots closer than one
  // step length to each other share one classification and one velocity.
  std::vector<std::size_t> head;
};

// Velocities of all robots. The step size enters through the stiffness of the
// midpoint trackers and the caps that stop robots from overshooting a target
// within one step; pass dt <= 0 to use params.dt.
VelocityField velocity_field(std::span<const Vec2> p, const MobParams& params, double dt = 0.0);
VelocityField velocity_field(const Configuration& c, const MobParams& params);

// d|p_j - p_i|/dt written through the angles between each velocity and the
// connecting segment. Throws std::invalid_argument when p_i == p_j.
double distance_rate(const Vec2& pi, const Vec2& vi, const Vec2& pj, const Vec2& vj);

struct Sampler {
  bool enabled = false;
  double sample_dt = 0.0;  // 0 records every accepted step

  static Sampler none() { return {}; }
  static Sampler every(double sample_dt) { return {true, sample_dt}; }
};

struct ContinuousSample {
  double t = 0.0;
  std::vector<Vec2> positions;
};

enum class ContinuousOutcome { EpsMaxChain, Collapsed, TimeBudgetExceeded };
std::string to_string(ContinuousOutcome o);

struct ContinuousRunResult {
  Configuration final;
  double elapsed = 0.0;
  ContinuousOutcome outcome = ContinuousOutcome::TimeBudgetExceeded;
  std::vector<ContinuousSample> trace;
  std::size_t steps = 0;
  std::size_t halvings = 0;
  std::size_t projection_fallbacks = 0;
};

// One accepted forward step from p; returns the step size actually used.
struct StepStats {
  double dt_used = 0.0;
  std::size_t halvings = 0;
  bool projected = false;
};
std::vector<Vec2> mob_step(std::span<const Vec2> p, const MobParams& params, StepStats* stats = nullptr);

ContinuousRunResult integrate(const Configuration& start, const MobParams& params, double eps, double eps_collapse,
                              double t_max, const Sampler& sampler = {});

double max_pairwise_distance(std::span<const Vec2> p);

struct WatchSample {
  double t = 0.0;
  SegmentIndices seg;
  ChainMetrics m;
};

// Edges no longer than eta_zero count as coincident robots. Passing the step
// size matches the resolution at which the engine merges robots.
std::vector<WatchSample> outer_angle_watch(std::span<const ContinuousSample> trace, double eta_zero = kEtaZero);

}  // namespace chainform
