#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace thermoporo::cli {

enum class CheckStatus { Pass, Warn, Fail };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

/// Quadrature exactness, assembly oracles, SPD and symmetry checks, patch
/// tests, decoupling equivalence, lag instrumentation and the assumption
/// status of the configured parameters.
std::vector<CheckResult> run_validation(const RunConfig& config);

std::string_view status_label(CheckStatus s);

}  // namespace thermoporo::cli
