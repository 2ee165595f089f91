// Result table written by every experiment.
//
// Columns, in order (the _g2 columns only for two-group tables, max_m1 only
// for capacity tables):
//
//   sweep_var, sweep_value, analytic_delivery, analytic_delivery_g2,
//   sim_delivery, sim_delivery_g2, ci_half, ci_half_g2, copies_sent,
//   energy_j, energy_per_delivered_j, feasible, max_m1
//
// Reals are printed with 6 significant digits; a value that does not apply
// to a row is left empty; an infinite value is printed as "inf".

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gorma {

struct CsvRow {
  std::string sweep_var;
  double sweep_value = 0.0;
  std::vector<std::optional<double>> analytic;  // one entry per group
  std::vector<std::optional<double>> sim;
  std::vector<std::optional<double>> ci;
  std::optional<std::int64_t> copies_sent;
  std::optional<double> energy_j;
  std::optional<double> energy_per_delivered_j;
  bool feasible = true;
  std::optional<std::int64_t> max_m1;
};

struct CsvTable {
  std::size_t groups = 1;  // 1 or 2
  bool capacity_column = false;
  std::vector<CsvRow> rows;
};

std::vector<std::string> csv_header(const CsvTable& table);

/// The file contents; identical inputs give identical bytes.
std::string format_csv(const CsvTable& table);

/// Writes format_csv(table) to `path`, creating parent directories. Throws
/// IoError when the file cannot be written.
void emit_csv(const CsvTable& table, const std::filesystem::path& path);

/// Formats a real with 6 significant digits.
std::string format_real(double value);

}  // namespace gorma
