#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace chainform {

inline constexpr int kCriterionCount = 12;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;      // checks and runtime limit both met
  bool checks_ok = false;   // the numerical checks alone
  double seconds = 0.0;
  double limit_seconds = 0.0;
  std::string detail;
};

// Runs one criterion (1..12). Independent simulations inside a criterion are
// spread over `workers` threads (0 picks default_workers()).
CriterionResult run_criterion(int id, std::size_t workers = 0);

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::size_t workers = 0,
                                            const std::function<void(const CriterionResult&)>& on_done = {});

// "[PASS] C03 lower-bound construction (12.3 s / 60 s): slope=..., r2=..."
std::string format_result(const CriterionResult& r);

}  // namespace chainform
