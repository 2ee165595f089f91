// Closed-form delivery-probability model for transmit-only sensor nodes that
// repeat each packet a fixed number of times inside its generation period.
//
// Two families of formulas live here:
//   - one-hop: every node sends `copies` copies per period T; the rate seen by
//     a tagged copy comes from the other N-1 nodes.
//   - QoS groups: group k has m_k nodes that each send `retrans` extra copies
//     per period t_k; the aggregate rate sums over every group member.
//
// All functions are pure and thread-safe.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gorma {

inline constexpr double kDefaultEnergyPerCopyJ = 1e-6;

/// Global one-hop scenario parameters. Times are in milliseconds.
class SystemParams {
 public:
  SystemParams(std::int64_t n_nodes, double period_ms, double packet_time_ms,
               double carrier_sense_ms = 0.0, double channel_error = 0.0,
               double energy_per_copy_j = kDefaultEnergyPerCopyJ);

  std::int64_t n_nodes() const { return n_nodes_; }
  double period_ms() const { return period_ms_; }
  double packet_time_ms() const { return packet_time_ms_; }
  double carrier_sense_ms() const { return carrier_sense_ms_; }
  double channel_error() const { return channel_error_; }
  double energy_per_copy_j() const { return energy_per_copy_j_; }

  /// floor(T / T_p): the largest copy count that fits in one period.
  std::int64_t max_copies() const;

  SystemParams with_n_nodes(std::int64_t n) const;
  SystemParams with_channel_error(double p) const;
  SystemParams with_carrier_sense(double tau_ms) const;
  SystemParams with_energy_per_copy(double joules) const;

 private:
  std::int64_t n_nodes_;
  double period_ms_;
  double packet_time_ms_;
  double carrier_sense_ms_;
  double channel_error_;
  double energy_per_copy_j_;
};

/// One QoS group: m nodes, each needing delivery probability >= q_min, each
/// generating one packet every t milliseconds.
class QoSGroupSpec {
 public:
  QoSGroupSpec(std::int64_t m, double q_min, double t_ms);

  std::int64_t m() const { return m_; }
  double q_min() const { return q_min_; }
  double t_ms() const { return t_ms_; }

  QoSGroupSpec with_m(std::int64_t m) const { return {m, q_min_, t_ms_}; }
  QoSGroupSpec with_q_min(double q) const { return {m_, q, t_ms_}; }

 private:
  std::int64_t m_;
  double q_min_;
  double t_ms_;
};

/// A group together with the number of retransmissions (copies beyond the
/// original) each of its nodes performs.
struct GroupLoad {
  QoSGroupSpec group;
  std::int64_t retrans;
};

/// Chosen retransmission counts with the model's predictions.
///
/// `copies` always holds total on-air copies per packet. For group plans that
/// is retrans + 1; see retransmissions().
struct RetransmissionPlan {
  std::vector<std::int64_t> copies;
  std::vector<double> predicted_delivery;
  bool feasible = false;
  double aggregate_traffic = 0.0;  // copies per ms (beta or beta_tg)

  std::int64_t retransmissions(std::size_t group) const { return copies.at(group) - 1; }
};

inline std::int64_t copies_from_retrans(std::int64_t retrans) { return retrans + 1; }
inline std::int64_t retrans_from_copies(std::int64_t copies) { return copies - 1; }

/// floor(t / T_p), the per-group retransmission cap.
std::int64_t retrans_cap(const SystemParams& params, const QoSGroupSpec& group);

/// 1 - (1 - x)^y evaluated as -expm1(y * log1p(-x)).
double one_minus_pow_complement(double x, double y);

/// Probability of exactly `count` Poisson arrivals at `rate` (per ms) in a
/// window of `window` ms.
double poisson_pmf(double rate, double window, std::int64_t count);

/// beta = (N - 1) * copies / T.
double traffic_rate(const SystemParams& params, std::int64_t copies);

/// exp(-2 * rate * packet_time).
double prob_no_collision(double rate, double packet_time);

/// Q(y) = 1 - (1 - (1 - e) * exp(-2 beta T_p))^y with e the channel error.
double delivery_probability_one_hop(const SystemParams& params, std::int64_t copies);

/// beta_tg = sum over groups of m_k * retrans_k / t_k.
double aggregate_group_traffic(std::span<const GroupLoad> groups);

/// Q_suc(k) = 1 - (1 - (1 - e) * exp(-2 beta_tg (tau_cs + T_p)))^(retrans_k + 1).
double delivery_probability_group(const SystemParams& params, std::span<const GroupLoad> groups,
                                  std::size_t k);

/// Per-group check of the delivery requirement and the retransmission cap.
/// `plan.copies[k] - 1` is taken as group k's retransmission count.
std::vector<bool> group_constraint_satisfied(const SystemParams& params,
                                             std::span<const QoSGroupSpec> groups,
                                             const RetransmissionPlan& plan);

/// Same check for a single group given every group's load.
bool group_constraint_satisfied(const SystemParams& params, std::span<const GroupLoad> groups,
                                std::size_t k);

}  // namespace gorma
