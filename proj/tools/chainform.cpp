// chainform: generate chains, run the discrete and continuous engines, sweep
// parameter grids, print spectra and run the acceptance criteria.
//
// Exit status: 0 success, 1 usage error, 2 run failure.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "chainform/acceptance.hpp"
#include "chainform/analysis.hpp"
#include "chainform/continuous.hpp"
#include "chainform/discrete.hpp"
#include "chainform/generators.hpp"
#include "chainform/potentials.hpp"
#include "chainform/spectral.hpp"
#include "chainform/sweep.hpp"
#include "chainform/traces.hpp"

namespace fs = std::filesystem;
using namespace chainform;

namespace {

constexpr int kUsage = 1;
constexpr int kRunFailure = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kFamilies{"opposed",     "marching",    "marching-chain", "delta-v",
                                         "cont-delta-v", "tau-delta-v", "random2d",       "lower-bound"};
const std::vector<std::string> kStrategies{"max-gtm", "one-fixed-gtm", "tau-gtm", "max-mob", "naive-max-mob"};

struct Common {
  std::string engine;
  std::string strategy = "max-gtm";
  std::string family = "random2d";
  std::string config;
  std::string fixed_end = "first";
  std::vector<std::size_t> n{8};
  std::vector<double> delta{0.1};
  std::vector<double> tau{0.25};
  std::vector<double> eps{1e-3};
  std::vector<std::uint64_t> seed{1};
  std::optional<double> eps_collapse;
  double dt = 1e-3;
  std::optional<double> sample_dt;
  std::size_t max_rounds = 1000000;
  double t_max = 1000.0;
  std::string out;
  std::string trace = "none";
  std::size_t every = 10;
};

template <class T>
void list_option(CLI::App* app, const std::string& name, std::vector<T>& v, const std::string& help) {
  app->add_option(name, v, help + " (comma separated list in sweep)")->delimiter(',')->capture_default_str();
}

void engine_flags(CLI::App* app, Common& o, bool lists) {
  app->add_option("--engine", o.engine, "discrete or continuous (default: from the strategy)")
      ->check(CLI::IsMember({"discrete", "continuous"}));
  app->add_option("--strategy", o.strategy)->check(CLI::IsMember(kStrategies))->capture_default_str();
  app->add_option("--family", o.family)->check(CLI::IsMember(kFamilies))->capture_default_str();
  if (lists) {
    list_option(app, "--n", o.n, "robot count");
    list_option(app, "--delta", o.delta, "delta-V opening");
    list_option(app, "--tau", o.tau, "tau");
    list_option(app, "--eps", o.eps, "termination epsilon");
    list_option(app, "--seed", o.seed, "random seed");
  } else {
    auto one = [&](const std::string& name, auto& v, const std::string& help) {
      app->add_option(name, v[0], help)->capture_default_str();
    };
    one("--n", o.n, "robot count");
    one("--delta", o.delta, "delta-V opening");
    one("--tau", o.tau, "tau");
    one("--eps", o.eps, "termination epsilon");
    one("--seed", o.seed, "random seed");
  }
  app->add_option("--eps-collapse", o.eps_collapse, "collapse threshold (default: eps)");
  app->add_option("--dt", o.dt, "continuous step")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--max-rounds", o.max_rounds)->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--t-max", o.t_max)->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--fixed-end", o.fixed_end, "frozen end for one-fixed-gtm")
      ->check(CLI::IsMember({"first", "last"}))
      ->capture_default_str();
}

StrategyName strategy_of(const Common& o) {
  const StrategyName s = parse_strategy(o.strategy);
  if (!o.engine.empty() && parse_engine(o.engine) != engine_of(s))
    throw UsageError(fmt::format("strategy {} does not run on the {} engine", o.strategy, o.engine));
  return s;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

int cmd_gen(const Common& o) {
  GeneratorSpec g{parse_family(o.family), o.n[0], o.delta[0], o.tau[0], o.seed[0], o.eps[0]};
  const Configuration c = generate(g);
  if (o.out.empty() || o.out == "-")
    write_config_csv(std::cout, c);
  else
    write_config_csv(o.out, c);
  return 0;
}

int cmd_simulate(const Common& o) {
  const StrategyName s = strategy_of(o);
  const Configuration start =
      o.config.empty() ? generate({parse_family(o.family), o.n[0], o.delta[0], o.tau[0], o.seed[0], o.eps[0]})
                       : read_config_csv(o.config);
  const double eps = o.eps[0], tau = o.tau[0];
  const fs::path dir = o.out;
  ensure_dir(o.out);

  if (engine_of(s) == Engine::Discrete) {
    DiscreteStrategy st = DiscreteStrategy::max_gtm();
    if (s == StrategyName::OneFixedGtM) st = DiscreteStrategy::one_fixed(o.fixed_end == "last" ? End::Last : End::First);
    if (s == StrategyName::TauGtM) st = DiscreteStrategy::tau_gtm(tau);
    DiscreteRunOptions opt;
    if (o.trace == "full") opt.record = TraceMode::full();
    if (o.trace == "every-k") opt.record = TraceMode::every(o.every);
    const DiscreteRunResult r = run_discrete(st, start, eps, o.max_rounds, opt);
    std::printf("engine=discrete strategy=%s n=%zu outcome=%s rounds=%zu phi1=%.6g\n", o.strategy.c_str(), start.n(),
                to_string(r.outcome).c_str(), r.rounds, phi1(r.final));
    if (!o.out.empty()) {
      write_config_csv((dir / "final.csv").string(), r.final);
      if (!r.trace.empty()) {
        auto t = open_out(dir / "trace.csv");
        write_trace_csv(t, r.trace);
        auto m = open_out(dir / "metrics.csv");
        write_discrete_metrics_csv(m, r.trace);
      }
    }
    return 0;
  }

  const MobParams mp = make_mob_params(tau, s == StrategyName::NaiveMaxMoB, o.dt);
  Sampler sampler = Sampler::none();
  if (o.trace == "full") sampler = Sampler::every(0.0);
  if (o.trace == "every-k") sampler = Sampler::every(o.sample_dt.value_or(o.every * o.dt));
  const ContinuousRunResult r = integrate(start, mp, eps, o.eps_collapse.value_or(eps), o.t_max, sampler);
  std::printf("engine=continuous strategy=%s n=%zu outcome=%s elapsed=%.6f steps=%zu halvings=%zu projections=%zu\n",
              o.strategy.c_str(), start.n(), to_string(r.outcome).c_str(), r.elapsed, r.steps, r.halvings,
              r.projection_fallbacks);
  if (!o.out.empty()) {
    write_config_csv((dir / "final.csv").string(), r.final);
    if (!r.trace.empty()) {
      auto t = open_out(dir / "trace.csv");
      write_trace_csv(t, r.trace);
      auto m = open_out(dir / "metrics.csv");
      write_continuous_metrics_csv(m, outer_angle_watch(r.trace, mp.dt));
    }
  }
  return 0;
}

int cmd_sweep(const Common& o, std::size_t workers) {
  ExperimentSpec spec;
  spec.strategy = strategy_of(o);
  spec.engine = engine_of(spec.strategy);
  spec.family = parse_family(o.family);
  spec.ns = o.n;
  spec.deltas = o.delta;
  spec.taus = o.tau;
  spec.epss = o.eps;
  spec.seeds = o.seed;
  spec.max_rounds = o.max_rounds;
  spec.t_max = o.t_max;
  spec.dt = o.dt;
  spec.eps_collapse = o.eps_collapse;
  spec.out_dir = o.out;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult r = run_sweep(spec, workers ? workers : default_workers());
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.out.empty()) {
    write_sweep_csv(std::cout, r);
  } else {
    ensure_dir(o.out);
    auto csv = open_out(fs::path(o.out) / "results.csv");
    write_sweep_csv(csv, r);
    auto meta = open_out(fs::path(o.out) / "run.json");
    meta << sweep_json(r, wall);
  }
  std::size_t errors = 0;
  for (const SweepRow& row : r.rows) errors += row.outcome == "Error";
  std::fprintf(stderr, "rows=%zu errors=%zu", r.rows.size(), errors);
  if (r.fit) std::fprintf(stderr, " fit_slope=%.4f fit_intercept=%.4f fit_r2=%.4f", r.fit->slope, r.fit->intercept,
                          r.fit->r_squared);
  std::fprintf(stderr, " wall=%.2fs\n", wall);
  return 0;
}

int cmd_spectrum(const std::string& kind, std::size_t n, const std::string& config, double eps,
                 const std::string& out) {
  MatrixSpec m;
  if (kind == "a1") m = build_a1(n);
  if (kind == "a2") m = build_a2(n);
  if (kind == "a3") m = build_a3(n);
  if (kind == "jacobian-marching") m = build_jacobian_marching(n);
  if (kind == "strategy" || kind == "jacobian-at") {
    if (config.empty()) throw UsageError(kind + " needs --config");
    const Configuration c = read_config_csv(config);
    m = kind == "strategy" ? strategy_matrix(c) : build_jacobian_at(c);
  }
  const SpectrumResult s = eigenvalues(m);
  std::ofstream file;
  if (!out.empty()) file = open_out(out);
  std::ostream& os = out.empty() ? std::cout : file;
  os << "k,lambda,residual\n";
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
    os << fmt::format("{},{:.17g},{:.3g}\n", k + 1, s.eigenvalues[k], s.residuals[k]);
  std::string summary = fmt::format("matrix={} dim={} method={} spectral_radius={:.12g}", kind, m.dim(), s.method,
                                    spectral_radius(m));
  summary += is_symmetric(m.m) ? fmt::format(" rayleigh={:.12g}", rayleigh_bound(m)) : " rayleigh=n/a";
  if (kind == "a1" || kind == "a2") {
    const MixingBounds b = mixing_time_bounds(m, eps);
    summary += fmt::format(" lambda2={:.12g} mix_lower={:.6g} mix_upper={:.6g}", b.lambda2, b.lower, b.upper);
  }
  if (!s.accepted) summary += " residuals_above_tolerance";
  std::fprintf(out.empty() ? stderr : stdout, "%s\n", summary.c_str());
  return s.accepted ? 0 : kRunFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-chain formation simulator"};
  app.set_version_flag("--version", std::string("chainform ") + CHAINFORM_VERSION);
  app.require_subcommand(1);
  Common o;
  std::size_t workers = 0;

  auto* gen = app.add_subcommand("gen", "write a generated configuration as CSV");
  engine_flags(gen, o, false);
  gen->add_option("--out", o.out, "output CSV file (default: stdout)");

  auto* sim = app.add_subcommand("simulate", "run one simulation");
  engine_flags(sim, o, false);
  sim->add_option("--config", o.config, "start configuration CSV (default: generate from --family)");
  sim->add_option("--out", o.out, "directory for final.csv, trace.csv, metrics.csv");
  sim->add_option("--trace", o.trace)->check(CLI::IsMember({"none", "every-k", "full"}))->capture_default_str();
  sim->add_option("--every", o.every, "rounds between discrete trace entries for every-k")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim->add_option("--sample-dt", o.sample_dt, "continuous trace interval for every-k (default: every * dt)")
      ->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid");
  engine_flags(sweep, o, true);
  sweep->add_option("--out", o.out, "directory for results.csv and run.json (default: CSV on stdout)");
  sweep->add_option("--workers", workers, "threads (default: CHAINFORM_WORKERS or all cores)");

  std::string kind = "a1", config;
  std::size_t sn = 8;
  double seps = 1e-3;
  std::string sout;
  auto* spec = app.add_subcommand("spectrum", "eigenvalues of the model matrices");
  spec->add_option("--matrix", kind)
      ->check(CLI::IsMember({"a1", "a2", "a3", "jacobian-marching", "jacobian-at", "strategy"}))
      ->capture_default_str();
  spec->add_option("--n", sn)->capture_default_str()->check(CLI::Range(3, 512));
  spec->add_option("--config", config, "chain CSV for jacobian-at and strategy");
  spec->add_option("--eps", seps, "epsilon for the mixing-time bounds of a1/a2")->capture_default_str();
  spec->add_option("--out", sout, "CSV file (default: stdout)");

  std::string suite = "acceptance";
  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--suite", suite)->check(CLI::IsMember({"acceptance"}))->capture_default_str();
  verify->add_option("--only", only, "criterion ids")->delimiter(',')->check(CLI::Range(1, kCriterionCount));
  verify->add_option("--workers", workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*sim) return cmd_simulate(o);
    if (*sweep) return cmd_sweep(o, workers);
    if (*spec) return cmd_spectrum(kind, sn, config, seps, sout);
    if (*verify) {
      if (only.empty())
        for (int i = 1; i <= kCriterionCount; ++i) only.push_back(i);
      bool all = true;
      run_acceptance(only, workers, [&](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
        all = all && r.passed;
      });
      return all ? 0 : kRunFailure;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRunFailure;
  }
  return kUsage;
}
