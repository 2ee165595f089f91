// Retransmission-count search: the one-hop delivery maximizer, the two-group
// minimum-traffic search under per-group delivery floors, and the inverse
// capacity query (largest first group that still admits a feasible plan).

#pragma once

#include <cstdint>
#include <span>
#include <variant>

#include "gorma/analytic_model.hpp"

namespace gorma {

/// Retransmission search range for the two-group problem.
struct SearchBounds {
  std::int64_t y_low = 1;
  std::int64_t y_int = 1;
  std::int64_t y_high = 1;
};

/// Returned by optimize_two_groups when no pair satisfies both groups.
struct Infeasible {
  SearchBounds searched;
};

using TwoGroupOutcome = std::variant<RetransmissionPlan, Infeasible>;

inline bool is_feasible(const TwoGroupOutcome& outcome) {
  return std::holds_alternative<RetransmissionPlan>(outcome);
}

/// Scans copies = 1..floor(T/T_p) and keeps the first copy count reaching the
/// maximal delivery probability.
RetransmissionPlan optimize_one_hop(const SystemParams& params);

/// Search range for exactly two groups ordered so that q_1 >= q_2.
///
/// The widening step y_high + m_2 (y_high - y_int) / m_1 is floored and then
/// clamped back to min_k floor(t_k / T_p), so y_high never exceeds the
/// per-group retransmission cap.
SearchBounds compute_bounds(const SystemParams& params, std::span<const QoSGroupSpec> groups);

struct TwoGroupSearchOptions {
  // Refuse searches whose (y_high - y_low + 1)^2 exceeds this many pairs.
  std::int64_t max_pairs = 16'000'000;
};

/// Minimum-traffic pair (y_1, y_2) with both groups meeting q_min; ties in
/// beta_tg go to the lexicographically smallest pair.
TwoGroupOutcome optimize_two_groups(const SystemParams& params, std::span<const QoSGroupSpec> groups,
                                    const TwoGroupSearchOptions& options = {});

struct CapacityOptions {
  std::int64_t m_ceiling = 1'000'000;
  TwoGroupSearchOptions search{};
};

/// Largest m_1 for which ({m_1, q_1, t_1}, group2) is feasible; 0 if m_1 = 1
/// already fails. Capped at options.m_ceiling.
std::int64_t max_group_size(const SystemParams& params, double q_1, const QoSGroupSpec& group2, double t_1,
                            const CapacityOptions& options = {});

}  // namespace gorma
