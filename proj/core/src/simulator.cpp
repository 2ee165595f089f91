#include "gorma/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "gorma/rng.hpp"

namespace gorma {

namespace {

struct Emitter {
  std::uint32_t group_id;
  std::uint64_t first_node_id;
  std::int64_t nodes;
  double sub_period;
  std::int64_t subs_per_frame;
  std::int64_t copies;
};

struct Layout {
  std::vector<Emitter> emitters;
  double duration;
  double channel_error;
  double horizon;  // frame length in ms
};

struct Counts {
  std::int64_t offered = 0;
  std::int64_t delivered = 0;
  std::int64_t copies = 0;
};

// One copy in the collision sweep.
struct Slot {
  double start;
  double end;
  std::uint64_t packet;
  std::uint32_t index;  // position in generation order
};

bool slot_before(const Slot& a, const Slot& b) {
  return a.start != b.start ? a.start < b.start : a.index < b.index;
}

class CollisionSweep {
 public:
  // Orders slots by (start, index). Starts spread over [0, horizon) are
  // bucketed first; otherwise a comparison sort is used.
  void sort(std::vector<Slot>& slots, double horizon) {
    const std::size_t n = slots.size();
    if (!(horizon > 0) || n < 64) {
      std::sort(slots.begin(), slots.end(), slot_before);
      return;
    }
    const double scale = static_cast<double>(n) / horizon;
    offsets_.assign(n + 1, 0);
    for (const auto& s : slots) ++offsets_[bucket(s.start, scale, n) + 1];
    for (std::size_t b = 1; b <= n; ++b) offsets_[b] += offsets_[b - 1];
    scratch_.resize(n);
    for (const auto& s : slots) scratch_[offsets_[bucket(s.start, scale, n)]++] = s;
    // Scatter keeps generation order inside a bucket; an insertion sort by
    // start finishes the job since buckets hold O(1) slots on average.
    for (std::size_t i = 1; i < n; ++i) {
      Slot x = scratch_[i];
      std::size_t j = i;
      while (j > 0 && slot_before(x, scratch_[j - 1])) {
        scratch_[j] = scratch_[j - 1];
        --j;
      }
      scratch_[j] = x;
    }
    slots.swap(scratch_);
  }

  // `sorted` must be ordered by sort(). Every overlapping pair (p, q) with
  // p before q has start_q < end_p, so a forward scan finds all of them.
  void mark(const std::vector<Slot>& sorted, bool sibling_collisions) {
    const std::size_t n = sorted.size();
    clean_.assign(n, 1);
    for (std::size_t p = 0; p < n; ++p) {
      const Slot& a = sorted[p];
      for (std::size_t q = p + 1; q < n && sorted[q].start < a.end; ++q) {
        const Slot& b = sorted[q];
        if (!sibling_collisions && a.packet == b.packet) continue;
        clean_[a.index] = 0;
        clean_[b.index] = 0;
      }
    }
  }

  const std::vector<char>& clean() const { return clean_; }

 private:
  static std::size_t bucket(double start, double scale, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(start * scale));
  }

  std::vector<std::size_t> offsets_;
  std::vector<Slot> scratch_;
  std::vector<char> clean_;
};

void simulate_frames(const Layout& layout, const SimOptions& options, std::int64_t first_frame,
                     std::int64_t end_frame, std::vector<Counts>& counts) {
  CollisionSweep sweep;
  std::vector<Slot> slots;
  std::vector<char> erased;
  std::vector<std::uint32_t> packet_group;
  std::vector<char> delivered;

  for (std::int64_t frame = first_frame; frame < end_frame; ++frame) {
    slots.clear();
    erased.clear();
    packet_group.clear();
    std::uint64_t packet = 0;
    std::uint32_t index = 0;

    for (const auto& em : layout.emitters) {
      const double span = em.sub_period - layout.duration;
      for (std::int64_t i = 0; i < em.nodes; ++i) {
        const std::uint64_t node = em.first_node_id + static_cast<std::uint64_t>(i);
        for (std::int64_t j = 0; j < em.subs_per_frame; ++j, ++packet) {
          auto gen = rng::substream(options.seed, node, static_cast<std::uint64_t>(frame * em.subs_per_frame + j));
          const double base = static_cast<double>(j) * em.sub_period;
          for (std::int64_t c = 0; c < em.copies; ++c) {
            const double start = base + gen.uniform01() * span;
            slots.push_back({start, start + layout.duration, packet, index++});
          }
          for (std::int64_t c = 0; c < em.copies; ++c) erased.push_back(gen.uniform01() < layout.channel_error);
          packet_group.push_back(em.group_id);
        }
      }
    }
    for (std::uint64_t p = 0; p < packet; ++p) {
      counts[packet_group[p]].offered += 1;
    }

    sweep.sort(slots, layout.horizon);
    sweep.mark(slots, options.sibling_collisions);
    delivered.assign(packet, 0);
    const auto& clean = sweep.clean();
    for (const auto& s : slots) {
      if (clean[s.index] && !erased[s.index]) delivered[s.packet] = 1;
    }
    for (std::uint64_t p = 0; p < packet; ++p) counts[packet_group[p]].delivered += delivered[p];
    for (const auto& em : layout.emitters) {
      counts[em.group_id].copies += em.nodes * em.subs_per_frame * em.copies;
    }
  }
}

unsigned resolve_threads(unsigned requested, std::int64_t periods) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::int64_t>(n, std::max<std::int64_t>(periods, 1)));
}

SimResult run(const Layout& layout, const SimOptions& options, double energy_per_copy) {
  if (options.periods < 1) throw std::invalid_argument("periods must be >= 1");
  const std::size_t n_groups = layout.emitters.size();
  const unsigned n_threads = resolve_threads(options.threads, options.periods);

  std::vector<std::vector<Counts>> partial(n_threads, std::vector<Counts>(n_groups));
  if (n_threads == 1) {
    simulate_frames(layout, options, 0, options.periods, partial[0]);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      const std::int64_t begin = options.periods * t / n_threads;
      const std::int64_t end = options.periods * (t + 1) / n_threads;
      workers.emplace_back([&, t, begin, end] { simulate_frames(layout, options, begin, end, partial[t]); });
    }
  }

  SimResult result;
  result.periods_simulated = options.periods;
  result.seed = options.seed;
  result.energy_per_copy_j = energy_per_copy;
  result.groups.resize(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    auto& tally = result.groups[g];
    for (const auto& part : partial) {
      tally.packets_offered += part[g].offered;
      tally.packets_delivered += part[g].delivered;
      tally.copies_sent += part[g].copies;
    }
    const double n = static_cast<double>(tally.packets_offered);
    const double p = static_cast<double>(tally.packets_delivered) / n;
    tally.delivery_estimate = p;
    tally.ci_half_width = 1.96 * std::sqrt(p * (1.0 - p) / n);
    tally.energy_spent_j = static_cast<double>(tally.copies_sent) * energy_per_copy;
    tally.energy_per_delivered_j = tally.packets_delivered > 0
                                       ? tally.energy_spent_j / static_cast<double>(tally.packets_delivered)
                                       : std::numeric_limits<double>::infinity();
  }
  return result;
}

bool near_integer(double r) {
  const double k = std::round(r);
  return k >= 1 && std::abs(r - k) <= 1e-9 * k;
}

}  // namespace

std::vector<bool> find_clean_copies(std::span<const TransmissionEvent> events, bool sibling_collisions) {
  std::vector<Slot> slots;
  slots.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (!(e.start >= 0) || !(e.duration > 0)) throw std::invalid_argument("event needs start >= 0 and duration > 0");
    slots.push_back({e.start, e.start + e.duration, e.packet, static_cast<std::uint32_t>(i)});
  }
  CollisionSweep sweep;
  sweep.sort(slots, 0.0);
  sweep.mark(slots, sibling_collisions);
  std::vector<bool> clean(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) clean[i] = sweep.clean()[i] != 0;
  return clean;
}

SimResult simulate_one_hop(const SystemParams& params, std::int64_t copies, const SimOptions& options) {
  if (copies < 1) throw std::invalid_argument("copies must be >= 1");
  if (copies > params.max_copies()) throw std::invalid_argument("copies * packet_time exceeds the period");

  Layout layout;
  layout.duration = params.packet_time_ms();
  layout.channel_error = params.channel_error();
  layout.horizon = params.period_ms();
  layout.emitters.push_back({0, 0, params.n_nodes(), params.period_ms(), 1, copies});
  return run(layout, options, params.energy_per_copy_j());
}

std::optional<double> common_horizon(std::span<const GroupLoad> groups, std::int64_t max_multiple) {
  if (groups.empty()) return std::nullopt;
  const double t0 = groups.front().group.t_ms();
  for (std::int64_t a = 1; a <= max_multiple; ++a) {
    const double h = static_cast<double>(a) * t0;
    const bool fits = std::all_of(groups.begin(), groups.end(), [&](const GroupLoad& g) {
      const double r = h / g.group.t_ms();
      return near_integer(r) && std::round(r) <= static_cast<double>(max_multiple);
    });
    if (fits) return h;
  }
  return std::nullopt;
}

SimResult simulate_two_groups(const SystemParams& params, std::span<const GroupLoad> groups,
                              const SimOptions& options) {
  if (groups.empty()) throw std::invalid_argument("at least one group is required");
  const double duration = params.carrier_sense_ms() + params.packet_time_ms();
  for (const auto& g : groups) {
    if (g.retrans < 1 || g.retrans > retrans_cap(params, g.group)) {
      throw std::invalid_argument("retrans " + std::to_string(g.retrans) + " outside [1, floor(t/T_p)]");
    }
    if (duration > g.group.t_ms()) throw std::invalid_argument("carrier_sense + packet_time exceeds a group period");
  }

  double horizon = 0.0;
  if (options.horizon_ms) {
    horizon = *options.horizon_ms;
    for (const auto& g : groups) {
      if (!near_integer(horizon / g.group.t_ms())) {
        throw std::invalid_argument("horizon_ms must be a multiple of every group period");
      }
    }
  } else {
    const auto h = common_horizon(groups);
    if (!h) throw std::invalid_argument("group periods have no small common multiple; set horizon_ms");
    horizon = *h;
  }

  Layout layout;
  layout.duration = duration;
  layout.channel_error = params.channel_error();
  layout.horizon = horizon;
  std::uint64_t next_node = 0;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& g = groups[k];
    const auto subs = static_cast<std::int64_t>(std::round(horizon / g.group.t_ms()));
    layout.emitters.push_back({static_cast<std::uint32_t>(k), next_node, g.group.m(), g.group.t_ms(), subs,
                               copies_from_retrans(g.retrans)});
    next_node += static_cast<std::uint64_t>(g.group.m());
  }
  return run(layout, options, params.energy_per_copy_j());
}

std::vector<EnergyRow> energy_report(const SimResult& result, const RetransmissionPlan& plan) {
  if (plan.copies.size() != result.groups.size()) {
    throw std::invalid_argument("plan and simulation result differ in group count");
  }
  std::vector<EnergyRow> rows;
  rows.reserve(result.groups.size());
  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    const auto& tally = result.groups[g];
    if (tally.copies_sent != tally.packets_offered * plan.copies[g]) {
      throw std::invalid_argument("plan copies do not match the simulated copy count");
    }
    EnergyRow row;
    row.group = g;
    row.copies_per_packet = plan.copies[g];
    row.copies_sent = tally.copies_sent;
    row.energy_j = static_cast<double>(tally.copies_sent) * result.energy_per_copy_j;
    row.joules_per_offered = static_cast<double>(plan.copies[g]) * result.energy_per_copy_j;
    row.joules_per_delivered = tally.packets_delivered > 0
                                   ? row.energy_j / static_cast<double>(tally.packets_delivered)
                                   : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gorma
