#include "chainform/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "chainform/analysis.hpp"
#include "chainform/continuous.hpp"
#include "chainform/discrete.hpp"
#include "chainform/potentials.hpp"
#include "json.hpp"

namespace chainform {

std::string to_string(Engine e) { return e == Engine::Discrete ? "discrete" : "continuous"; }

Engine parse_engine(const std::string& s) {
  if (s == "discrete") return Engine::Discrete;
  if (s == "continuous") return Engine::Continuous;
  throw std::invalid_argument("unknown engine: " + s);
}

std::string to_string(StrategyName s) {
  switch (s) {
    case StrategyName::MaxGtM: return "max-gtm";
    case StrategyName::OneFixedGtM: return "one-fixed-gtm";
    case StrategyName::TauGtM: return "tau-gtm";
    case StrategyName::MaxMoB: return "max-mob";
    case StrategyName::NaiveMaxMoB: return "naive-max-mob";
  }
  return "?";
}

StrategyName parse_strategy(const std::string& s) {
  for (StrategyName k : {StrategyName::MaxGtM, StrategyName::OneFixedGtM, StrategyName::TauGtM, StrategyName::MaxMoB,
                         StrategyName::NaiveMaxMoB})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown strategy: " + s);
}

Engine engine_of(StrategyName s) {
  return s == StrategyName::MaxMoB || s == StrategyName::NaiveMaxMoB ? Engine::Continuous : Engine::Discrete;
}

void ExperimentSpec::validate() const {
  if (ns.empty() || deltas.empty() || taus.empty() || epss.empty() || seeds.empty())
    throw std::invalid_argument("sweep grid has an empty axis");
  if (engine_of(strategy) != engine)
    throw std::invalid_argument("strategy " + to_string(strategy) + " does not run on the " + to_string(engine) +
                                " engine");
  if (engine == Engine::Discrete && max_rounds == 0) throw std::invalid_argument("max_rounds must be positive");
  if (engine == Engine::Continuous && !(t_max > 0.0 && dt > 0.0))
    throw std::invalid_argument("t_max and dt must be positive");
}

std::size_t default_workers() {
  if (const char* env = std::getenv("CHAINFORM_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepRow run_point(const ExperimentSpec& spec, std::size_t n, double delta, double tau, double eps,
                   std::uint64_t seed) {
  SweepRow row{n, delta, tau, eps, seed, "", 0.0, 0.0, 0.0, 0.0, ""};
  try {
    GeneratorSpec g{spec.family, n, delta, tau, seed, eps};
    const Configuration start = generate(g);
    Configuration final = start;
    if (spec.engine == Engine::Discrete) {
      DiscreteStrategy s = DiscreteStrategy::max_gtm();
      if (spec.strategy == StrategyName::OneFixedGtM) s = DiscreteStrategy::one_fixed(End::First);
      if (spec.strategy == StrategyName::TauGtM) s = DiscreteStrategy::tau_gtm(tau);
      DiscreteRunResult r = run_discrete(s, start, eps, spec.max_rounds);
      row.outcome = to_string(r.outcome);
      row.runtime = static_cast<double>(r.rounds);
      final = r.final;
    } else {
      MobParams mp = make_mob_params(tau, spec.strategy == StrategyName::NaiveMaxMoB, spec.dt);
      ContinuousRunResult r = integrate(start, mp, eps, spec.eps_collapse.value_or(eps), spec.t_max);
      row.outcome = to_string(r.outcome);
      row.runtime = r.elapsed;
      final = r.final;
    }
    row.phi1 = phi1(final);
    const SegmentIndices seg = segment_indices(final);
    const ChainMetrics m = metrics(final, seg);
    row.L = m.L;
    row.delta_1n = m.delta_1n;
  } catch (const std::exception& e) {
    row.outcome = "Error";
    row.error = e.what();
  }
  return row;
}

SweepResult run_sweep(const ExperimentSpec& spec, std::size_t workers) {
  spec.validate();
  struct Point {
    std::size_t n;
    double delta, tau, eps;
    std::uint64_t seed;
  };
  std::vector<Point> grid;
  for (std::size_t n : spec.ns)
    for (double d : spec.deltas)
      for (double t : spec.taus)
        for (double e : spec.epss)
          for (std::uint64_t s : spec.seeds) grid.push_back({n, d, t, e, s});
  auto key = [](const auto& a) { return std::tie(a.n, a.delta, a.tau, a.eps, a.seed); };
  std::sort(grid.begin(), grid.end(), [&](const Point& a, const Point& b) { return key(a) < key(b); });
  grid.erase(std::unique(grid.begin(), grid.end(), [&](const Point& a, const Point& b) { return key(a) == key(b); }),
             grid.end());

  SweepResult res;
  res.spec = spec;
  res.rows.resize(grid.size());
  if (workers == 0) workers = default_workers();
  workers = std::min(workers, grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      const Point& g = grid[i];
      res.rows[i] = run_point(spec, g.n, g.delta, g.tau, g.eps, g.seed);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  res.fit = scaling_fit(res.rows);
  return res;
}

std::optional<Fit> scaling_fit(const std::vector<SweepRow>& rows) {
  std::map<std::size_t, std::vector<double>> by_n;
  for (const SweepRow& r : rows)
    if (r.error.empty()) by_n[r.n].push_back(r.runtime);
  std::vector<std::pair<double, double>> pts;
  for (auto& [n, v] : by_n) {
    const double m = median(v);
    if (m > 0.0) pts.emplace_back(static_cast<double>(n), m);
  }
  if (pts.size() > 4) pts.erase(pts.begin(), pts.end() - 4);
  if (pts.size() < 3) return std::nullopt;
  return fit_power_law(pts);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << kSweepCsvHeader << '\n';
  const std::string head = to_string(r.spec.engine) + "," + to_string(r.spec.strategy) + "," + to_string(r.spec.family);
  for (const SweepRow& w : r.rows) {
    out << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", head, w.n, w.delta,
                       w.tau, w.eps, w.seed, w.outcome, w.runtime, w.phi1, w.L, w.delta_1n, csv_field(w.error));
  }
}

std::string sweep_json(const SweepResult& r, double wall_seconds) {
  using nlohmann::json;
  const ExperimentSpec& s = r.spec;
  json spec = {{"engine", to_string(s.engine)},
               {"strategy", to_string(s.strategy)},
               {"family", to_string(s.family)},
               {"n", s.ns},
               {"delta", s.deltas},
               {"tau", s.taus},
               {"eps", s.epss},
               {"seed", s.seeds},
               {"max_rounds", s.max_rounds},
               {"t_max", s.t_max},
               {"dt", s.dt}};
  if (s.eps_collapse) spec["eps_collapse"] = *s.eps_collapse;
  json j = {{"spec", spec},
            {"versions", {{"chainform", CHAINFORM_VERSION}, {"compiler", __VERSION__}}},
            {"rows", r.rows.size()},
            {"wall_seconds", wall_seconds}};
  if (r.fit) j["fit"] = {{"slope", r.fit->slope}, {"intercept", r.fit->intercept}, {"r_squared", r.fit->r_squared}};
  return j.dump(2) + "\n";
}

}  // namespace chainform
