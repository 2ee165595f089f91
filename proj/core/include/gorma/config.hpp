// Scenario configuration: a sectioned key = value text format.
//
//   # comment
//   [scenario]
//   mode = one-hop-sweep        # one-hop-sweep | two-group-sweep | optimize | capacity | energy
//   periods = 100000
//   seed = 42
//   output = results/one_hop.csv
//
//   [system]
//   n_nodes = 100
//   period_ms = 1
//   packet_time_ms = 0.00064
//
//   [group.1]
//   m = 30
//   q_min = 0.95
//   t_ms = 1
//
//   [sweep]
//   variable = copies
//   from = 1
//   to = 10                     # or: values = 1, 2, 4, 8
//
// Every key carries its unit in its name. Errors report the offending line
// and key.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gorma/analytic_model.hpp"

namespace gorma {

enum class Mode { OneHopSweep, TwoGroupSweep, Optimize, Capacity, Energy };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string variable;
  std::vector<double> values;
  int line = 0;
};

struct ScenarioConfig {
  Mode mode = Mode::OneHopSweep;
  SystemParams params{100, 1.0, 6.4e-4};
  std::int64_t copies = 1;              // one-hop evaluation point when not swept
  std::vector<QoSGroupSpec> groups;     // zero or two
  std::vector<std::int64_t> retrans;    // per group, for fixed-plan evaluation
  std::optional<SweepSpec> sweep;

  std::int64_t periods = 100'000;
  std::uint64_t seed = 42;
  std::string output_path = "gorma.csv";
  unsigned threads = 0;
  bool simulate = true;
  bool sibling_collisions = true;
  std::optional<double> horizon_ms;
  std::int64_t m_ceiling = 1'000'000;

  std::string source = "<config>";
};

/// Inputs of one sweep point after substituting the swept value.
struct SweepPoint {
  SystemParams params;
  std::int64_t copies;
  std::vector<QoSGroupSpec> groups;
  std::vector<std::int64_t> retrans;
};

/// Applies one sweep value. Throws std::invalid_argument when the value is
/// outside the model's domain.
SweepPoint point_at(const ScenarioConfig& config, double value);

/// Parses configuration text and range-checks every field. Cross-field and
/// per-mode checks live in validate(). Throws ConfigError.
ScenarioConfig parse_config(std::string_view text, std::string source = "<config>");

/// Reads a file and parses it. Throws IoError when the file cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Checks the sweep against the mode and every sweep point against the model
/// preconditions. Throws ConfigError.
void validate(const ScenarioConfig& config);

/// Names the sweep variables accepted by a mode (two-group variants when the
/// config defines groups).
std::vector<std::string_view> sweep_variables(Mode mode, bool has_groups);

}  // namespace gorma
