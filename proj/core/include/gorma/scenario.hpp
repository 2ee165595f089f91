// Experiment runner: turns a validated ScenarioConfig into a result table and
// a JSON summary.

#pragma once

#include <cstddef>
#include <functional>

#include <nlohmann/json.hpp>

#include "gorma/config.hpp"
#include "gorma/csv.hpp"
#include "gorma/simulator.hpp"

namespace gorma {

struct ScenarioOutcome {
  CsvTable table;
  nlohmann::ordered_json summary;
};

/// Called before each sweep point with (index, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Runs every sweep point of `config` in order. Infeasible optimizations are
/// reported in the table and summary, not thrown. Throws ConfigError when the
/// config does not validate.
ScenarioOutcome run_scenario(const ScenarioConfig& config, const ProgressFn& progress = {});

/// Single evaluation of the configured point (copies for one-hop, retrans
/// per group otherwise) without a sweep.
ScenarioOutcome run_single_point(const ScenarioConfig& config);

/// JSON view of a plan.
nlohmann::ordered_json to_json(const RetransmissionPlan& plan);

}  // namespace gorma
