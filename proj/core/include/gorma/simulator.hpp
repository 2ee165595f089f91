// Monte Carlo collision channel for transmit-only nodes.
//
// Each simulated frame, every node places its copies at i.i.d. uniform start
// times inside each of its generation periods. Two copies collide when their
// on-air intervals overlap; a collided copy is lost, and a clean copy is still
// erased with probability channel_error. A packet is delivered when at least
// one of its copies is clean and not erased. Frames are independent.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gorma/analytic_model.hpp"

namespace gorma {

/// One copy on the channel.
struct TransmissionEvent {
  std::uint64_t node_id = 0;
  std::uint32_t group_id = 0;
  double start = 0.0;     // ms from frame start
  double duration = 0.0;  // ms of channel occupancy
  std::uint64_t packet = 0;  // packet this copy belongs to, unique within a frame
};

/// Marks the copies whose on-air interval overlaps no other copy's interval.
/// With `sibling_collisions` off, copies of the same packet ignore each other.
std::vector<bool> find_clean_copies(std::span<const TransmissionEvent> events, bool sibling_collisions = true);

struct SimOptions {
  std::int64_t periods = 100'000;
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0 = std::thread::hardware_concurrency()
  bool sibling_collisions = true;
  // Frame length for groups with different periods; must be a common multiple
  // of every t_k. Derived automatically when unset.
  std::optional<double> horizon_ms;
};

struct GroupTally {
  std::int64_t packets_offered = 0;
  std::int64_t packets_delivered = 0;
  std::int64_t copies_sent = 0;
  double delivery_estimate = 0.0;
  double ci_half_width = 0.0;  // 95% normal approximation
  double energy_spent_j = 0.0;
  double energy_per_delivered_j = 0.0;  // +inf when nothing was delivered
};

struct SimResult {
  std::int64_t periods_simulated = 0;
  std::uint64_t seed = 0;
  double energy_per_copy_j = 0.0;
  std::vector<GroupTally> groups;
};

/// N nodes, `copies` copies per period T, copy duration T_p.
SimResult simulate_one_hop(const SystemParams& params, std::int64_t copies, const SimOptions& options);

inline SimResult simulate_one_hop(const SystemParams& params, std::int64_t copies, std::int64_t periods,
                                  std::uint64_t seed) {
  SimOptions o;
  o.periods = periods;
  o.seed = seed;
  return simulate_one_hop(params, copies, o);
}

/// Group k sends retrans_k + 1 copies per period t_k; copy duration is
/// tau_cs + T_p. `options.periods` counts frames of the common horizon.
SimResult simulate_two_groups(const SystemParams& params, std::span<const GroupLoad> groups,
                              const SimOptions& options);

/// Smallest common multiple of the group periods (to 1e-9 relative), if one
/// exists with at most `max_multiple` repetitions of any period.
std::optional<double> common_horizon(std::span<const GroupLoad> groups, std::int64_t max_multiple = 10'000);

struct EnergyRow {
  std::size_t group = 0;
  std::int64_t copies_per_packet = 0;
  std::int64_t copies_sent = 0;
  double energy_j = 0.0;
  double joules_per_offered = 0.0;
  double joules_per_delivered = 0.0;  // +inf when nothing was delivered
};

/// Energy bookkeeping per group. The plan must describe the run: one entry
/// per group and copies_sent == offered * plan.copies.
std::vector<EnergyRow> energy_report(const SimResult& result, const RetransmissionPlan& plan);

}  // namespace gorma
