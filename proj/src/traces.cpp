#include "chainform/traces.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "chainform/analysis.hpp"

namespace chainform {

namespace {

void rows(std::ostream& out, double t, std::span<const Vec2> p) {
  for (std::size_t i = 0; i < p.size(); ++i) out << fmt::format("{:.17g},{},{:.17g},{:.17g}\n", t, i + 1, p[i].x, p[i].y);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> f;
  std::size_t start = 0;
  for (;;) {
    const std::size_t c = line.find(',', start);
    f.push_back(line.substr(start, c - start));
    if (c == std::string::npos) return f;
    start = c + 1;
  }
}

bool parses(const std::string& s) {
  if (s == "nan" || s == "-nan" || s == "inf" || s == "-inf") return true;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const DiscreteTraceEntry> trace) {
  out << kTraceCsvHeader << '\n';
  for (const DiscreteTraceEntry& e : trace) rows(out, static_cast<double>(e.round), e.positions);
}

void write_trace_csv(std::ostream& out, std::span<const ContinuousSample> trace) {
  out << kTraceCsvHeader << '\n';
  for (const ContinuousSample& s : trace) rows(out, s.t, s.positions);
}

void write_discrete_metrics_csv(std::ostream& out, std::span<const DiscreteTraceEntry> trace) {
  out << kDiscreteMetricsHeader << '\n';
  for (const DiscreteTraceEntry& e : trace) {
    const ChainMetrics m = metrics(e.positions, segment_indices(e.positions));
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", e.round, e.phi1, e.phi2, m.L, m.delta_1n);
  }
}

void write_continuous_metrics_csv(std::ostream& out, std::span<const WatchSample> watch) {
  out << kContinuousMetricsHeader << '\n';
  for (const WatchSample& w : watch) {
    const ChainMetrics& m = w.m;
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", w.t,
                       m.alpha_ell, m.alpha_r, m.O_ell, m.O_r, m.I, m.H_ell, m.H_r, m.L, m.delta_1n);
  }
}

std::size_t validate_csv(std::istream& in, const std::string& header, bool numeric) {
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(fmt::format("line 1: expected header '{}', got '{}'", header, line));
  const std::size_t width = split(header).size();
  std::size_t count = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != width)
      throw std::runtime_error(fmt::format("line {}: {} fields, expected {}", lineno, f.size(), width));
    if (numeric)
      for (const std::string& s : f)
        if (!parses(s)) throw std::runtime_error(fmt::format("line {}: '{}' is not a number", lineno, s));
    ++count;
  }
  return count;
}

}  // namespace chainform
