#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "canonsys/monodromy.hpp"

namespace canonsys {

inline constexpr std::uint64_t kDefaultSeed = 1234;

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  IntegratorOptions integrator;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  /// Deterministic measurements written as the criterion's artifact.
  nlohmann::json artifact;
};

/// Ids of the criteria that run in-process (1 through 10).
std::vector<int> numeric_criteria();

/// Runs one numeric criterion. Domain errors are caught and reported as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// Criterion 11: runs `selftest` twice into fresh subdirectories of `work_dir`
/// and compares every artifact byte for byte.
CriterionResult run_determinism(const AcceptanceOptions& options, const std::filesystem::path& work_dir,
                                const std::vector<int>& only = {});

/// "[PASS] 3 title: detail"
std::string format_result(const CriterionResult& r);

}  // namespace canonsys
