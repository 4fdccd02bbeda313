#pragma once

#include <json.hpp>

#include <cstdint>

#include "tvlab/instance.hpp"
#include "tvlab/transversal.hpp"

namespace tvlab {

inline constexpr const char* kVersion = "0.1.0";

struct EquivalenceConfig {
  std::size_t trials = 0;
  std::size_t d = 2;
  std::uint64_t seed = 0;
  std::size_t min_sets = 3;
  std::size_t max_sets = 6;
  std::size_t vertices_per_set = 4;
  std::size_t samples = 64;
  SearchConfig search;
  /// Branch A: planted complex instances of dimension d.
  bool planted = true;
  /// Branch B: unplanted segment families in C^1 against the exact LP decision.
  bool unplanted = true;
  std::size_t unplanted_min_sets = 3;
  std::size_t unplanted_max_sets = 4;
  /// Branch B draws uniform and concurrent segment layouts; this adds the
  /// near-miss layout, whose failing dependences are thin and easy to miss.
  bool near_miss = false;
  /// Branch A also runs the zero search of the odd map.
  bool borsuk = true;
  std::size_t threads = 1;
  /// Wall times make the report differ between runs; off by default.
  bool timing = false;

  /// Throws MalformedInput on an inconsistent configuration.
  void validate() const;
};

/// Instance of branch A or B for one trial; regenerated identically from the
/// trial index and the configuration.
Instance planted_trial_instance(const EquivalenceConfig& config, std::size_t trial);
Instance unplanted_trial_instance(const EquivalenceConfig& config, std::size_t trial);

/// Runs every trial and returns the report; failed expectations are recorded
/// under "assertion_failures" instead of being thrown.
nlohmann::json run_equivalence(const EquivalenceConfig& config);

/// Re-derives every stored certificate of a report in rational arithmetic:
/// NoLift verdicts, common-point decisions and their witness points, and the
/// recovered hyperplanes. Returns {"checked": n, "discrepancies": [...]}.
nlohmann::json recheck_report(const nlohmann::json& report);

nlohmann::json to_json(const EquivalenceConfig& config);
EquivalenceConfig equivalence_config_from_json(const nlohmann::json& j);

}  // namespace tvlab
