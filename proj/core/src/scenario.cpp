#include "gorma/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "gorma/optimizer.hpp"

namespace gorma {

namespace {

using Json = nlohmann::ordered_json;

SimOptions sim_options(const ScenarioConfig& c) {
  SimOptions o;
  o.periods = c.periods;
  o.seed = c.seed;
  o.threads = c.threads;
  o.sibling_collisions = c.sibling_collisions;
  o.horizon_ms = c.horizon_ms;
  return o;
}

void fill_simulation(CsvRow& row, const SimResult& r) {
  std::int64_t copies = 0;
  std::int64_t delivered = 0;
  double energy = 0.0;
  for (const auto& g : r.groups) {
    row.sim.emplace_back(g.delivery_estimate);
    row.ci.emplace_back(g.ci_half_width);
    copies += g.copies_sent;
    delivered += g.packets_delivered;
    energy += g.energy_spent_j;
  }
  row.copies_sent = copies;
  row.energy_j = energy;
  row.energy_per_delivered_j =
      delivered > 0 ? energy / static_cast<double>(delivered) : std::numeric_limits<double>::infinity();
}

CsvRow one_hop_row(const ScenarioConfig& c, double value, const SystemParams& params, std::int64_t copies) {
  CsvRow row;
  row.sweep_var = c.sweep ? c.sweep->variable : "copies";
  row.sweep_value = value;
  row.analytic = {delivery_probability_one_hop(params, copies)};
  if (c.simulate) fill_simulation(row, simulate_one_hop(params, copies, sim_options(c)));
  return row;
}

std::vector<GroupLoad> loads_of(const std::vector<QoSGroupSpec>& groups, const std::vector<std::int64_t>& retrans) {
  std::vector<GroupLoad> loads;
  for (std::size_t k = 0; k < groups.size(); ++k) loads.push_back({groups[k], retrans[k]});
  return loads;
}

bool can_simulate_groups(const ScenarioConfig& c, std::span<const GroupLoad> loads) {
  return c.simulate && (c.horizon_ms || common_horizon(loads));
}

CsvRow group_row(const ScenarioConfig& c, double value, const SystemParams& params,
                 const std::vector<GroupLoad>& loads) {
  CsvRow row;
  row.sweep_var = c.sweep ? c.sweep->variable : "retrans";
  row.sweep_value = value;
  for (std::size_t k = 0; k < loads.size(); ++k) row.analytic.emplace_back(delivery_probability_group(params, loads, k));
  row.feasible = true;
  for (std::size_t k = 0; k < loads.size(); ++k) row.feasible = row.feasible && group_constraint_satisfied(params, loads, k);
  if (can_simulate_groups(c, loads)) fill_simulation(row, simulate_two_groups(params, loads, sim_options(c)));
  return row;
}

// optimize_two_groups needs q_1 >= q_2; swap when the caller's order differs
// and map the plan back.
TwoGroupOutcome optimize_in_caller_order(const SystemParams& params, const QoSGroupSpec& a, const QoSGroupSpec& b) {
  const bool swapped = a.q_min() < b.q_min();
  const std::array<QoSGroupSpec, 2> ordered = swapped ? std::array{b, a} : std::array{a, b};
  auto outcome = optimize_two_groups(params, ordered);
  if (swapped) {
    if (auto* plan = std::get_if<RetransmissionPlan>(&outcome)) {
      std::swap(plan->copies[0], plan->copies[1]);
      std::swap(plan->predicted_delivery[0], plan->predicted_delivery[1]);
    }
  }
  return outcome;
}

std::vector<GroupLoad> loads_from_plan(const std::vector<QoSGroupSpec>& groups, const RetransmissionPlan& plan) {
  std::vector<GroupLoad> loads;
  for (std::size_t k = 0; k < groups.size(); ++k) loads.push_back({groups[k], plan.retransmissions(k)});
  return loads;
}

Json base_summary(const ScenarioConfig& c) {
  Json s;
  s["mode"] = to_string(c.mode);
  s["config"] = c.source;
  s["output"] = c.output_path;
  s["seed"] = c.seed;
  s["periods"] = c.periods;
  s["simulated"] = c.simulate && c.mode != Mode::Capacity;
  return s;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const RetransmissionPlan& plan) {
  Json j;
  j["copies"] = plan.copies;
  j["predicted_delivery"] = plan.predicted_delivery;
  j["feasible"] = plan.feasible;
  j["aggregate_traffic_per_ms"] = plan.aggregate_traffic;
  return j;
}

ScenarioOutcome run_scenario(const ScenarioConfig& config, const ProgressFn& progress) {
  validate(config);
  ScenarioOutcome out;
  out.summary = base_summary(config);
  CsvTable& table = out.table;
  const bool has_groups = !config.groups.empty();

  std::vector<double> values = config.sweep->values;
  if (config.mode == Mode::Energy && std::find(values.begin(), values.end(), 1.0) == values.end()) {
    values.insert(values.begin(), 1.0);  // single-transmission baseline
  }

  table.groups = (config.mode == Mode::TwoGroupSweep && config.groups.size() == 1) ? 1 : (has_groups ? 2 : 1);
  if (config.mode == Mode::OneHopSweep || config.mode == Mode::Energy) table.groups = 1;
  table.capacity_column = config.mode == Mode::Capacity;

  Json plans = Json::array();
  bool all_feasible = true;

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (progress) progress(i, values.size());
    const double v = values[i];
    const SweepPoint p = point_at(config, v);

    switch (config.mode) {
      case Mode::OneHopSweep:
      case Mode::Energy:
        table.rows.push_back(one_hop_row(config, v, p.params, p.copies));
        break;

      case Mode::TwoGroupSweep:
        table.rows.push_back(group_row(config, v, p.params, loads_of(p.groups, p.retrans)));
        break;

      case Mode::Optimize: {
        if (!has_groups) {
          const RetransmissionPlan plan = optimize_one_hop(p.params);
          CsvRow row = one_hop_row(config, v, p.params, plan.copies[0]);
          table.rows.push_back(row);
          plans.push_back(to_json(plan));
          break;
        }
        const TwoGroupOutcome outcome = optimize_two_groups(p.params, p.groups);
        if (const auto* plan = std::get_if<RetransmissionPlan>(&outcome)) {
          table.rows.push_back(group_row(config, v, p.params, loads_from_plan(p.groups, *plan)));
          plans.push_back(to_json(*plan));
        } else {
          CsvRow row;
          row.sweep_var = config.sweep->variable;
          row.sweep_value = v;
          row.feasible = false;
          table.rows.push_back(row);
          Json j;
          j["feasible"] = false;
          j["y_high"] = std::get<Infeasible>(outcome).searched.y_high;
          plans.push_back(j);
        }
        break;
      }

      case Mode::Capacity: {
        CapacityOptions opts;
        opts.m_ceiling = config.m_ceiling;
        const std::int64_t m1 = max_group_size(p.params, p.groups[0].q_min(), p.groups[1], p.groups[0].t_ms(), opts);
        CsvRow row;
        row.sweep_var = config.sweep->variable;
        row.sweep_value = v;
        row.max_m1 = m1;
        row.feasible = m1 >= 1;
        Json j;
        j["q_1"] = p.groups[0].q_min();
        j["max_m1"] = m1;
        if (m1 >= 1) {
          const auto outcome = optimize_in_caller_order(p.params, p.groups[0].with_m(m1), p.groups[1]);
          const auto& plan = std::get<RetransmissionPlan>(outcome);
          row.analytic = {plan.predicted_delivery[0], plan.predicted_delivery[1]};
          j["plan"] = to_json(plan);
        }
        table.rows.push_back(row);
        plans.push_back(j);
        break;
      }
    }
    all_feasible = all_feasible && table.rows.back().feasible;
  }

  out.summary["rows"] = table.rows.size();
  out.summary["feasible"] = all_feasible;

  switch (config.mode) {
    case Mode::OneHopSweep:
    case Mode::Energy: {
      out.summary["optimal_plan"] = to_json(optimize_one_hop(config.params));
      if (config.mode == Mode::Energy && config.simulate) {
        const auto baseline = std::find_if(table.rows.begin(), table.rows.end(),
                                           [](const CsvRow& r) { return r.sweep_value == 1.0; });
        const auto cheapest = std::min_element(table.rows.begin(), table.rows.end(), [](const CsvRow& a, const CsvRow& b) {
          return *a.energy_per_delivered_j < *b.energy_per_delivered_j;
        });
        out.summary["baseline_energy_per_delivered_j"] = number_or_null(*baseline->energy_per_delivered_j);
        out.summary["min_energy_per_delivered_j"] = number_or_null(*cheapest->energy_per_delivered_j);
        out.summary["min_energy_copies"] = cheapest->sweep_value;
      }
      break;
    }
    case Mode::TwoGroupSweep:
      if (config.groups.size() == 2 && config.groups[0].q_min() >= config.groups[1].q_min()) {
        const auto outcome = optimize_two_groups(config.params, config.groups);
        out.summary["optimal_plan"] =
            is_feasible(outcome) ? to_json(std::get<RetransmissionPlan>(outcome)) : Json{{"feasible", false}};
      }
      break;
    case Mode::Optimize:
      out.summary["plans"] = plans;
      break;
    case Mode::Capacity:
      out.summary["capacity"] = plans;
      break;
  }
  return out;
}

ScenarioOutcome run_single_point(const ScenarioConfig& config) {
  ScenarioOutcome out;
  out.summary = base_summary(config);
  out.summary["mode"] = "single-point";
  if (config.groups.empty()) {
    out.table.groups = 1;
    CsvRow row = one_hop_row(config, static_cast<double>(config.copies), config.params, config.copies);
    row.sweep_var = "copies";
    out.table.rows.push_back(row);
    RetransmissionPlan plan;
    plan.copies = {config.copies};
    plan.predicted_delivery = {*row.analytic[0]};
    plan.feasible = true;
    plan.aggregate_traffic = traffic_rate(config.params, config.copies);
    out.summary["plan"] = to_json(plan);
  } else {
    const auto loads = loads_of(config.groups, config.retrans);
    out.table.groups = loads.size();
    for (const auto& l : loads) {
      if (l.retrans > retrans_cap(config.params, l.group)) {
        throw ConfigError(config.source, 0, "retrans", "retrans exceeds floor(t_ms / packet_time_ms)");
      }
    }
    if (config.simulate && !can_simulate_groups(config, loads)) {
      throw ConfigError(config.source, 0, "scenario.horizon_ms", "group periods have no small common multiple");
    }
    CsvRow row = group_row(config, static_cast<double>(config.retrans[0]), config.params, loads);
    row.sweep_var = "retrans";
    out.table.rows.push_back(row);
    RetransmissionPlan plan;
    for (std::size_t k = 0; k < loads.size(); ++k) {
      plan.copies.push_back(copies_from_retrans(loads[k].retrans));
      plan.predicted_delivery.push_back(*row.analytic[k]);
    }
    plan.feasible = row.feasible;
    plan.aggregate_traffic = aggregate_group_traffic(loads);
    out.summary["plan"] = to_json(plan);
  }
  out.summary["rows"] = 1;
  out.summary["feasible"] = out.table.rows.front().feasible;
  if (config.simulate) {
    Json sim = Json::array();
    const auto& row = out.table.rows.front();
    for (std::size_t k = 0; k < row.sim.size(); ++k) {
      sim.push_back({{"delivery_estimate", *row.sim[k]}, {"ci_half_width", *row.ci[k]}});
    }
    out.summary["simulation"] = sim;
    out.summary["energy_per_delivered_j"] = number_or_null(*row.energy_per_delivered_j);
  }
  return out;
}

}  // namespace gorma
