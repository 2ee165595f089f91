#include "gorma/optimizer.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <utility>

namespace gorma {

RetransmissionPlan optimize_one_hop(const SystemParams& params) {
  const std::int64_t top = params.max_copies();
  if (top < 1) throw std::invalid_argument("empty copy search range");

  std::int64_t best_copies = 1;
  double best_q = delivery_probability_one_hop(params, 1);
  for (std::int64_t y = 2; y <= top; ++y) {
    const double q = delivery_probability_one_hop(params, y);
    if (q > best_q) {
      best_q = q;
      best_copies = y;
    }
  }
  RetransmissionPlan plan;
  plan.copies = {best_copies};
  plan.predicted_delivery = {best_q};
  plan.feasible = true;
  plan.aggregate_traffic = traffic_rate(params, best_copies);
  return plan;
}

SearchBounds compute_bounds(const SystemParams& params, std::span<const QoSGroupSpec> groups) {
  if (groups.size() != 2) throw std::invalid_argument("two-group search needs exactly two groups");
  if (groups[0].q_min() < groups[1].q_min()) {
    throw std::invalid_argument("groups must be ordered so that q_1 >= q_2");
  }
  const std::int64_t cap = std::min(retrans_cap(params, groups[0]), retrans_cap(params, groups[1]));
  if (cap < 1) throw std::invalid_argument("packet_time exceeds a group period; no retransmission fits");

  SearchBounds b;
  b.y_low = 1;
  b.y_int = b.y_low;
  const std::int64_t widened = cap + (groups[1].m() * (cap - b.y_int)) / groups[0].m();
  b.y_high = std::min(widened, cap);
  return b;
}

TwoGroupOutcome optimize_two_groups(const SystemParams& params, std::span<const QoSGroupSpec> groups,
                                    const TwoGroupSearchOptions& options) {
  const SearchBounds bounds = compute_bounds(params, groups);
  const std::int64_t width = bounds.y_high - bounds.y_int + 1;
  if (width > 0 && width > options.max_pairs / width) {
    throw std::invalid_argument("two-group search range exceeds max_pairs");
  }

  const auto& g1 = groups[0];
  const auto& g2 = groups[1];
  const double w1 = static_cast<double>(g1.m()) / g1.t_ms();
  const double w2 = static_cast<double>(g2.m()) / g2.t_ms();

  struct Best {
    std::int64_t y1, y2;
    double beta;
  };
  std::optional<Best> best;

  std::array<GroupLoad, 2> loads{GroupLoad{g1, 0}, GroupLoad{g2, 0}};
  for (std::int64_t y1 = bounds.y_int; y1 <= bounds.y_high; ++y1) {
    loads[0].retrans = y1;
    // beta_tg grows with y2, so for a fixed y1 the first passing y2 is the
    // cheapest, and once group 1 fails it keeps failing.
    for (std::int64_t y2 = bounds.y_int; y2 <= bounds.y_high; ++y2) {
      const double beta = w1 * static_cast<double>(y1) + w2 * static_cast<double>(y2);
      if (best && beta >= best->beta) break;
      loads[1].retrans = y2;
      if (!group_constraint_satisfied(params, loads, 0)) break;
      if (group_constraint_satisfied(params, loads, 1)) {
        best = Best{y1, y2, beta};
        break;
      }
    }
  }

  if (!best) return Infeasible{bounds};

  loads[0].retrans = best->y1;
  loads[1].retrans = best->y2;
  RetransmissionPlan plan;
  plan.copies = {copies_from_retrans(best->y1), copies_from_retrans(best->y2)};
  plan.predicted_delivery = {delivery_probability_group(params, loads, 0),
                             delivery_probability_group(params, loads, 1)};
  plan.feasible = true;
  plan.aggregate_traffic = aggregate_group_traffic(loads);
  return plan;
}

std::int64_t max_group_size(const SystemParams& params, double q_1, const QoSGroupSpec& group2, double t_1,
                            const CapacityOptions& options) {
  if (options.m_ceiling < 1) throw std::invalid_argument("m_ceiling must be >= 1");
  // Validates q_1 and t_1 up front.
  (void)QoSGroupSpec(1, q_1, t_1);

  auto feasible = [&](std::int64_t m1) {
    std::array<QoSGroupSpec, 2> groups{QoSGroupSpec(m1, q_1, t_1), group2};
    if (groups[0].q_min() < groups[1].q_min()) std::swap(groups[0], groups[1]);
    return is_feasible(optimize_two_groups(params, groups, options.search));
  };

  if (!feasible(1)) return 0;

  // Feasibility is non-increasing in m_1: any plan that works for m_1 + 1
  // also works for m_1.
  std::int64_t lo = 1;
  std::int64_t hi = 0;
  for (std::int64_t probe = 2;; probe *= 2) {
    probe = std::min(probe, options.m_ceiling);
    if (!feasible(probe)) {
      hi = probe;
      break;
    }
    lo = probe;
    if (probe == options.m_ceiling) return options.m_ceiling;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (feasible(mid) ? lo : hi) = mid;
  }
  if (!feasible(lo) || feasible(lo + 1)) {
    throw std::logic_error("capacity search lost monotonicity at the boundary");
  }
  return lo;
}

}  // namespace gorma
