#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

#include "chainform/continuous.hpp"
#include "chainform/discrete.hpp"

namespace chainform {

// Long format, one row per robot and recorded time; i is 1-based. Discrete
// traces use the round number as t.
inline constexpr const char* kTraceCsvHeader = "t,i,x,y";
inline constexpr const char* kDiscreteMetricsHeader = "t,phi1,phi2,L,delta_1n";
inline constexpr const char* kContinuousMetricsHeader = "t,alpha_ell,alpha_r,O_ell,O_r,I,H_ell,H_r,L,delta_1n";

void write_trace_csv(std::ostream& out, std::span<const DiscreteTraceEntry> trace);
void write_trace_csv(std::ostream& out, std::span<const ContinuousSample> trace);
void write_discrete_metrics_csv(std::ostream& out, std::span<const DiscreteTraceEntry> trace);
void write_continuous_metrics_csv(std::ostream& out, std::span<const WatchSample> watch);

// Checks the header line and that every row has as many fields as the header.
// With numeric set, each field must parse completely as a double (nan and inf
// included). Returns the number of data rows; throws std::runtime_error with
// the offending line number otherwise.
std::size_t validate_csv(std::istream& in, const std::string& header, bool numeric = true);

}  // namespace chainform
