#include "gorma/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gorma/config.hpp"

namespace gorma {

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::optional<double> at(const std::vector<std::optional<double>>& values, std::size_t i) {
  return i < values.size() ? values[i] : std::nullopt;
}

}  // namespace

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::vector<std::string> csv_header(const CsvTable& table) {
  const bool two = table.groups > 1;
  std::vector<std::string> h{"sweep_var", "sweep_value", "analytic_delivery"};
  if (two) h.emplace_back("analytic_delivery_g2");
  h.emplace_back("sim_delivery");
  if (two) h.emplace_back("sim_delivery_g2");
  h.emplace_back("ci_half");
  if (two) h.emplace_back("ci_half_g2");
  for (const char* c : {"copies_sent", "energy_j", "energy_per_delivered_j", "feasible"}) h.emplace_back(c);
  if (table.capacity_column) h.emplace_back("max_m1");
  return h;
}

std::string format_csv(const CsvTable& table) {
  if (table.groups < 1 || table.groups > 2) throw std::invalid_argument("csv tables hold one or two groups");
  std::string out;
  auto emit_line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };

  emit_line(csv_header(table));
  for (const auto& row : table.rows) {
    std::vector<std::string> cells{row.sweep_var, format_real(row.sweep_value)};
    for (const auto* series : {&row.analytic, &row.sim, &row.ci}) {
      for (std::size_t g = 0; g < table.groups; ++g) cells.push_back(cell(at(*series, g)));
    }
    cells.push_back(row.copies_sent ? std::to_string(*row.copies_sent) : std::string());
    cells.push_back(cell(row.energy_j));
    cells.push_back(cell(row.energy_per_delivered_j));
    cells.emplace_back(row.feasible ? "true" : "false");
    if (table.capacity_column) cells.push_back(row.max_m1 ? std::to_string(*row.max_m1) : std::string());
    emit_line(cells);
  }
  return out;
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
  const std::string text = format_csv(table);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gorma
