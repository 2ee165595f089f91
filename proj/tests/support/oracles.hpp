// Independent reference computations for tests. Nothing here calls into the
// library's probability or search code; formulas are written out directly
// with std::pow, brute-force loops, and plain numeric integration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace gorma::oracle {

/// (mean^k / k!) e^-mean accumulated as a running product in long double.
inline double poisson_pmf(double rate, double window, std::int64_t k) {
  const long double mean = static_cast<long double>(rate) * window;
  long double term = std::exp(-mean);
  for (std::int64_t i = 1; i <= k; ++i) term *= mean / static_cast<long double>(i);
  return static_cast<double>(term);
}

/// 1 - (1 - (1 - err) e^(-2 (N-1) y / T * Tp))^y with std::pow.
inline double one_hop_delivery(std::int64_t n, double period, double tp, std::int64_t y, double err = 0.0) {
  const double beta = static_cast<double>(n - 1) * static_cast<double>(y) / period;
  const double clean = (1.0 - err) * std::exp(-2.0 * beta * tp);
  return 1.0 - std::pow(1.0 - clean, static_cast<double>(y));
}

/// Argmax over 1..floor(T/Tp), smallest y on ties.
inline std::pair<std::int64_t, double> one_hop_argmax(std::int64_t n, double period, double tp, std::int64_t top,
                                                      double err = 0.0) {
  std::int64_t best = 1;
  double best_q = one_hop_delivery(n, period, tp, 1, err);
  for (std::int64_t y = 2; y <= top; ++y) {
    const double q = one_hop_delivery(n, period, tp, y, err);
    if (q > best_q) {
      best = y;
      best_q = q;
    }
  }
  return {best, best_q};
}

struct Group {
  std::int64_t m;
  double q;
  double t;
};

/// Q_suc for group k with std::pow.
inline double group_delivery(const Group (&g)[2], const std::int64_t (&y)[2], int k, double tau, double tp,
                             double err = 0.0) {
  const double beta = static_cast<double>(g[0].m) * y[0] / g[0].t + static_cast<double>(g[1].m) * y[1] / g[1].t;
  const double clean = (1.0 - err) * std::exp(-2.0 * beta * (tau + tp));
  return 1.0 - std::pow(1.0 - clean, static_cast<double>(y[k] + 1));
}

struct PairResult {
  std::int64_t y1, y2;
  double beta;
};

/// Every (y1, y2) in [1, cap]^2, constraint written as the delivery floor
/// (1 - clean)^(y+1) <= 1 - q, minimum beta then lexicographic.
inline std::optional<PairResult> min_traffic_pair(const Group (&g)[2], std::int64_t cap, double tau, double tp,
                                                  double err = 0.0) {
  std::optional<PairResult> best;
  for (std::int64_t y1 = 1; y1 <= cap; ++y1) {
    for (std::int64_t y2 = 1; y2 <= cap; ++y2) {
      const std::int64_t y[2] = {y1, y2};
      const double beta = static_cast<double>(g[0].m) * y1 / g[0].t + static_cast<double>(g[1].m) * y2 / g[1].t;
      const double clean = (1.0 - err) * std::exp(-2.0 * beta * (tau + tp));
      bool ok = true;
      for (int k = 0; k < 2; ++k) {
        ok = ok && std::pow(1.0 - clean, static_cast<double>(y[k] + 1)) <= 1.0 - g[k].q;
      }
      if (!ok) continue;
      if (!best || beta < best->beta) best = PairResult{y1, y2, beta};
    }
  }
  return best;
}

/// P(|U - V| < a) for U, V i.i.d. uniform on [0, L]: midpoint rule over u,
/// inner integral over v taken exactly.
inline double uniform_overlap_probability(double a, double length, int cells = 2000) {
  const double h = length / cells;
  double hits = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double u = (i + 0.5) * h;
    const double lo = std::max(0.0, u - a);
    const double hi = std::min(length, u + a);
    hits += (hi - lo) / length;
  }
  return hits / cells;
}

/// O(n^2) overlap test: copy i is clean iff no other interval intersects it.
template <typename Event>
std::vector<bool> brute_clean(const std::vector<Event>& events, bool sibling_collisions = true) {
  std::vector<bool> clean(events.size(), true);
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = 0; j < events.size(); ++j) {
      if (i == j) continue;
      if (!sibling_collisions && events[i].packet == events[j].packet) continue;
      const bool overlap = events[j].start < events[i].start + events[i].duration &&
                           events[i].start < events[j].start + events[j].duration;
      if (overlap) clean[i] = false;
    }
  }
  return clean;
}

}  // namespace gorma::oracle
