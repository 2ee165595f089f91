#include "gorma/analytic_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gorma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Floor of a ratio of positive reals, nudged so that exact multiples that
// round just below an integer (1 / 0.5, 1 / 0.00064, ...) are not lost.
std::int64_t floor_ratio(double num, double den) {
  const double r = num / den;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::floor(r));
}

double clean_copy_probability(double channel_error, double rate, double window) {
  return (1.0 - channel_error) * prob_no_collision(rate, window);
}

}  // namespace

SystemParams::SystemParams(std::int64_t n_nodes, double period_ms, double packet_time_ms,
                           double carrier_sense_ms, double channel_error, double energy_per_copy_j)
    : n_nodes_(n_nodes),
      period_ms_(period_ms),
      packet_time_ms_(packet_time_ms),
      carrier_sense_ms_(carrier_sense_ms),
      channel_error_(channel_error),
      energy_per_copy_j_(energy_per_copy_j) {
  require(n_nodes >= 1, "n_nodes must be >= 1");
  require(std::isfinite(period_ms) && period_ms > 0, "period_ms must be finite and > 0");
  require(std::isfinite(packet_time_ms) && packet_time_ms > 0, "packet_time_ms must be finite and > 0");
  require(packet_time_ms < period_ms, "packet_time_ms must be smaller than period_ms");
  require(std::isfinite(carrier_sense_ms) && carrier_sense_ms >= 0, "carrier_sense_ms must be finite and >= 0");
  require(channel_error >= 0 && channel_error <= 1, "channel_error must lie in [0, 1]");
  require(std::isfinite(energy_per_copy_j) && energy_per_copy_j > 0, "energy_per_copy_j must be finite and > 0");
}

std::int64_t SystemParams::max_copies() const { return floor_ratio(period_ms_, packet_time_ms_); }

SystemParams SystemParams::with_n_nodes(std::int64_t n) const {
  return {n, period_ms_, packet_time_ms_, carrier_sense_ms_, channel_error_, energy_per_copy_j_};
}

SystemParams SystemParams::with_channel_error(double p) const {
  return {n_nodes_, period_ms_, packet_time_ms_, carrier_sense_ms_, p, energy_per_copy_j_};
}

SystemParams SystemParams::with_carrier_sense(double tau_ms) const {
  return {n_nodes_, period_ms_, packet_time_ms_, tau_ms, channel_error_, energy_per_copy_j_};
}

SystemParams SystemParams::with_energy_per_copy(double joules) const {
  return {n_nodes_, period_ms_, packet_time_ms_, carrier_sense_ms_, channel_error_, joules};
}

QoSGroupSpec::QoSGroupSpec(std::int64_t m, double q_min, double t_ms) : m_(m), q_min_(q_min), t_ms_(t_ms) {
  require(m >= 1, "group size m must be >= 1");
  require(q_min > 0 && q_min < 1, "q_min must lie in (0, 1)");
  require(std::isfinite(t_ms) && t_ms > 0, "group period t_ms must be finite and > 0");
}

std::int64_t retrans_cap(const SystemParams& params, const QoSGroupSpec& group) {
  return floor_ratio(group.t_ms(), params.packet_time_ms());
}

double one_minus_pow_complement(double x, double y) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return y > 0 ? 1.0 : 0.0;
  return -std::expm1(y * std::log1p(-x));
}

double poisson_pmf(double rate, double window, std::int64_t count) {
  require(rate >= 0 && window >= 0 && count >= 0, "poisson_pmf arguments must be non-negative");
  const double mean = rate * window;
  require(std::isfinite(mean), "poisson_pmf: rate * window must be finite");
  if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
  const double k = static_cast<double>(count);
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

double traffic_rate(const SystemParams& params, std::int64_t copies) {
  require(copies >= 1, "copies must be >= 1");
  return static_cast<double>(params.n_nodes() - 1) * static_cast<double>(copies) / params.period_ms();
}

double prob_no_collision(double rate, double packet_time) { return std::exp(-2.0 * rate * packet_time); }

double delivery_probability_one_hop(const SystemParams& params, std::int64_t copies) {
  require(copies >= 1, "copies must be >= 1");
  require(copies <= params.max_copies(), "copies exceeds floor(period / packet_time)");
  const double clean =
      clean_copy_probability(params.channel_error(), traffic_rate(params, copies), params.packet_time_ms());
  if (copies == 1) return clean;
  return one_minus_pow_complement(clean, static_cast<double>(copies));
}

double aggregate_group_traffic(std::span<const GroupLoad> groups) {
  require(!groups.empty(), "at least one group is required");
  double beta = 0.0;
  for (const auto& g : groups) {
    beta += static_cast<double>(g.group.m()) * static_cast<double>(g.retrans) / g.group.t_ms();
  }
  return beta;
}

namespace {

void check_group_loads(const SystemParams& params, std::span<const GroupLoad> groups, std::size_t k) {
  require(k < groups.size(), "group index out of range");
  for (const auto& g : groups) {
    if (g.retrans < 1 || g.retrans > retrans_cap(params, g.group)) {
      throw std::invalid_argument("retrans " + std::to_string(g.retrans) + " outside [1, floor(t/T_p)]");
    }
  }
}

double group_clean_probability(const SystemParams& params, std::span<const GroupLoad> groups) {
  return clean_copy_probability(params.channel_error(), aggregate_group_traffic(groups),
                                params.carrier_sense_ms() + params.packet_time_ms());
}

}  // namespace

double delivery_probability_group(const SystemParams& params, std::span<const GroupLoad> groups, std::size_t k) {
  check_group_loads(params, groups, k);
  const double clean = group_clean_probability(params, groups);
  return one_minus_pow_complement(clean, static_cast<double>(groups[k].retrans + 1));
}

bool group_constraint_satisfied(const SystemParams& params, std::span<const GroupLoad> groups, std::size_t k) {
  require(k < groups.size(), "group index out of range");
  for (const auto& g : groups) {
    if (g.retrans < 1 || g.retrans > retrans_cap(params, g.group)) return false;
  }
  // (1 - clean) <= (1 - q_k)^(1 / (y_k + 1))  <=>  Q_suc(k) >= q_k
  const double collide = 1.0 - group_clean_probability(params, groups);
  const double exponent = 1.0 / static_cast<double>(groups[k].retrans + 1);
  const double limit = std::exp(exponent * std::log1p(-groups[k].group.q_min()));
  return collide <= limit;
}

std::vector<bool> group_constraint_satisfied(const SystemParams& params, std::span<const QoSGroupSpec> groups,
                                             const RetransmissionPlan& plan) {
  require(plan.copies.size() == groups.size(), "plan and group list differ in length");
  std::vector<GroupLoad> loads;
  loads.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) loads.push_back({groups[i], plan.retransmissions(i)});
  std::vector<bool> ok(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) ok[i] = group_constraint_satisfied(params, loads, i);
  return ok;
}

}  // namespace gorma
