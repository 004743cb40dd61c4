#pragma once

// Self-contained invariant battery behind `bellproc verify`.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bellproc::verify {

/// How a check's statistic is compared with its threshold.
enum class Comparison {
  at_most,       // statistic <= threshold
  greater_than,  // statistic > threshold
};

struct Check {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  Comparison comparison = Comparison::at_most;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool overall = false;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  /// (quantity, factor) pairs applied to the closed-form side of the checks
  /// that use it. Known quantities: mean, variance, pgf.
  std::vector<std::pair<std::string, double>> perturb;
};

/// Throws Error(parse) on an unknown perturbation name.
VerifyReport run_verify(const VerifyOptions& options = {});

nlohmann::json to_json(const VerifyReport& report);
VerifyReport report_from_json(const nlohmann::json& j);

}  // namespace bellproc::verify
