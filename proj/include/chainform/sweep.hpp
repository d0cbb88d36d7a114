#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chainform/generators.hpp"
#include "chainform/stats.hpp"

namespace chainform {

enum class Engine { Discrete, Continuous };
std::string to_string(Engine e);
Engine parse_engine(const std::string& s);

// CLI spellings: max-gtm, one-fixed-gtm, tau-gtm (discrete); max-mob,
// naive-max-mob (continuous).
enum class StrategyName { MaxGtM, OneFixedGtM, TauGtM, MaxMoB, NaiveMaxMoB };
std::string to_string(StrategyName s);
StrategyName parse_strategy(const std::string& s);
Engine engine_of(StrategyName s);

struct ExperimentSpec {
  Engine engine = Engine::Discrete;
  StrategyName strategy = StrategyName::MaxGtM;
  Family family = Family::Random2D;
  std::vector<std::size_t> ns{8};
  std::vector<double> deltas{0.1};
  std::vector<double> taus{0.25};
  std::vector<double> epss{1e-3};
  std::vector<std::uint64_t> seeds{1};
  std::size_t max_rounds = 1000000;
  double t_max = 1000.0;
  double dt = 1e-3;
  std::optional<double> eps_collapse;  // defaults to eps
  std::string out_dir;

  // Throws std::invalid_argument on an empty grid, a non-positive budget or a
  // strategy that belongs to the other engine.
  void validate() const;
};

struct SweepRow {
  std::size_t n = 0;
  double delta = 0.0;
  double tau = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string outcome;  // engine outcome, or "Error"
  double runtime = 0.0;  // rounds (discrete) or simulated time (continuous)
  double phi1 = 0.0;
  double L = 0.0;
  double delta_1n = 0.0;
  std::string error;
};

struct SweepResult {
  ExperimentSpec spec;
  std::vector<SweepRow> rows;  // sorted by (n, delta, tau, eps, seed)
  std::optional<Fit> fit;      // power law of median runtime against n
};

// Worker count from CHAINFORM_WORKERS, else the hardware concurrency.
std::size_t default_workers();

SweepRow run_point(const ExperimentSpec& spec, std::size_t n, double delta, double tau, double eps,
                   std::uint64_t seed);
SweepResult run_sweep(const ExperimentSpec& spec, std::size_t workers = 0);

// Fit of median runtime vs n over the largest (up to four) n values with a
// positive median. Empty when fewer than three such values exist.
std::optional<Fit> scaling_fit(const std::vector<SweepRow>& rows);

inline constexpr const char* kSweepCsvHeader =
    "engine,strategy,family,n,delta,tau,eps,seed,outcome,runtime,phi1,L,delta_1n,error";
void write_sweep_csv(std::ostream& out, const SweepResult& r);
std::string sweep_json(const SweepResult& r, double wall_seconds);

}  // namespace chainform
