#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ucq/operator_core.h"

namespace ucq {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Smallest slack seen (rhs - lhs, or -residue); negative on failure.
  double worst_slack = 0;
  int cases = 0;
  std::string detail;
};

struct BatteryOptions {
  int d = 2;
  int n_max = 4;
  std::uint64_t seed = 1;
  /// Restricts the run to the named checks (empty: all).
  std::vector<std::string> only;
  /// Test hook: corrupts one decoder projector before the projector checks.
  bool inject_fault = false;
  NumericConfig numeric;
};

/// Names accepted by BatteryOptions::only, in run order.
const std::vector<std::string>& battery_check_names();

std::vector<CheckResult> run_battery(const BatteryOptions& opts);

}  // namespace ucq
