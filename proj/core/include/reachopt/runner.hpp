#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "reachopt/metrics.hpp"
#include "reachopt/scenario.hpp"

namespace reachopt {

/// Exit codes shared by the runner and the CLI.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitThresholdFail = 2;

struct RunOutcome {
  int exit_code{kExitSuccess};
  OptimizationReport report;
  MetricsReport metrics;
  std::filesystem::path out_dir;
};

/// Execute a scenario end to end: synthesize or load demonstrations, learn
/// and condition the primitive, run the recipe (an empty recipe means
/// initialization only), evaluate metrics, and write trajectory.csv,
/// costs.csv and metrics.csv into the output directory. Deterministic per
/// seed. Returns exit code 0, or 2 when a metric threshold fails.
RunOutcome run_scenario(const Scenario& scenario,
                        std::optional<std::uint32_t> seed_override = std::nullopt,
                        std::optional<std::filesystem::path> out_override = std::nullopt,
                        const IterationObserver& observer = {});

/// Human-readable metric summary (one row per measure).
std::string metrics_summary(const MetricsReport& metrics);

}  // namespace reachopt
