// Named, seeded experiments that regenerate each figure/table as CSV.
//
// Every experiment writes a '#'-prefixed header (name, version, seed,
// policy, effective parameters) followed by long-format rows
// `series,x,metric,value`. Output contains no timestamps, so reruns with the
// same spec are byte-identical.
#pragma once

#include "hokalman/rank.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hokalman {

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::map<std::string, std::string> defaults;
  std::uint64_t default_seed = 0;
};

struct ExperimentSpec {
  std::string name;
  /// Overrides of the registered defaults; unknown keys are rejected.
  std::map<std::string, std::string> parameters;
  std::optional<std::uint64_t> seed;
  /// Policy for noise-free rank decisions. Noisy panels derive their own
  /// thresholds from the injected noise level.
  RankPolicy policy = RankPolicy::default_policy();
};

struct ExperimentSummary {
  std::string name;
  std::string headline;
  std::string status;
  /// Numeric results keyed by name (NaN where undefined).
  std::map<std::string, double> metrics;

  /// "name,headline,status".
  std::string line() const;
};

/// All registered experiments in a stable order.
const std::vector<ExperimentInfo>& list_experiments();

/// Throws std::invalid_argument for an unknown name.
const ExperimentInfo& find_experiment(const std::string& name);

ExperimentSummary run_experiment(const ExperimentSpec& spec, std::ostream& out);

/// Writes to a file; throws std::runtime_error if it cannot be written.
ExperimentSummary run_experiment(const ExperimentSpec& spec, const std::filesystem::path& output_path);

}  // namespace hokalman
