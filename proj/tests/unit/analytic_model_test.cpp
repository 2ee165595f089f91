#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <doctest.h>

#include "gorma/analytic_model.hpp"
#include "support/oracles.hpp"

using namespace gorma;

namespace {

const SystemParams kReference{100, 1.0, 6.4e-4};

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("constructor rejects invalid values") {
    CHECK_THROWS_AS(SystemParams(0, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams(10, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams(10, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams(10, NAN, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams(10, 1.0, 0.1, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams(10, 1.0, 0.1, 0.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(QoSGroupSpec(0, 0.9, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QoSGroupSpec(1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QoSGroupSpec(1, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QoSGroupSpec(1, 0.5, 0.0), std::invalid_argument);
  }

  TEST_CASE("copy cap is floor(T / Tp)") {
    CHECK(kReference.max_copies() == 1562);
    CHECK(SystemParams(2, 1.0, 0.5).max_copies() == 2);
    CHECK(SystemParams(2, 0.3, 0.1).max_copies() == 3);
    CHECK(retrans_cap(kReference, QoSGroupSpec(30, 0.9, 1.0)) == 1562);
  }
}

TEST_SUITE("poisson_pmf") {
  TEST_CASE("empty traffic") {
    CHECK(poisson_pmf(0.0, 5.0, 0) == 1.0);
    CHECK(poisson_pmf(0.0, 5.0, 3) == 0.0);
  }

  TEST_CASE("matches direct evaluation") {
    // 2^2 / 2! e^-2
    CHECK(poisson_pmf(2.0, 1.0, 2) == doctest::Approx(0.2706705664732254).epsilon(1e-13));
    for (double mean : {0.3, 1.0, 7.5, 40.0}) {
      for (std::int64_t k : {0, 1, 5, 20, 60}) {
        CHECK(poisson_pmf(mean, 1.0, k) == doctest::Approx(oracle::poisson_pmf(mean, 1.0, k)).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("sums to one") {
    for (double mean : {0.01, 1.0, 10.0, 25.0, 50.0}) {
      double total = 0.0;
      for (std::int64_t k = 0; k <= 200; ++k) total += poisson_pmf(mean, 1.0, k);
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("rejects negative inputs") {
    CHECK_THROWS_AS(poisson_pmf(-1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(poisson_pmf(1.0, -1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(poisson_pmf(1.0, 1.0, -1), std::invalid_argument);
  }
}

TEST_SUITE("traffic_rate") {
  TEST_CASE("examples") {
    CHECK(traffic_rate(SystemParams(1, 1.0, 0.1), 7) == 0.0);
    CHECK(traffic_rate(kReference, 4) == 396.0);
    CHECK(traffic_rate(SystemParams(2, 2.0, 0.1), 1) == 0.5);
    CHECK_THROWS_AS(traffic_rate(kReference, 0), std::invalid_argument);
  }
}

TEST_SUITE("prob_no_collision") {
  TEST_CASE("examples") {
    CHECK(prob_no_collision(0.0, 0.1) == 1.0);
    CHECK(prob_no_collision(std::log(2.0) / 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(prob_no_collision(396.0, 6.4e-4) == doctest::Approx(0.6023720507922552).epsilon(1e-13));
  }

  TEST_CASE("strictly decreasing in rate and packet time") {
    double prev = 1.0;
    for (double rate = 1.0; rate < 500.0; rate *= 1.5) {
      const double q = prob_no_collision(rate, 1e-3);
      CHECK(q < prev);
      CHECK(q > 0.0);
      prev = q;
    }
    prev = 1.0;
    for (double tp = 1e-5; tp < 1e-2; tp *= 2.0) {
      const double q = prob_no_collision(50.0, tp);
      CHECK(q < prev);
      prev = q;
    }
  }
}

TEST_SUITE("delivery_probability_one_hop") {
  TEST_CASE("single copy is the clean-copy probability") {
    for (double err : {0.0, 0.1, 0.5}) {
      const SystemParams p = kReference.with_channel_error(err);
      CHECK(delivery_probability_one_hop(p, 1) == (1.0 - err) * prob_no_collision(traffic_rate(p, 1), 6.4e-4));
    }
  }

  TEST_CASE("no contention with one node") {
    const SystemParams lone(1, 1.0, 6.4e-4);
    for (std::int64_t y : {1, 2, 5, 100, 1562}) CHECK(delivery_probability_one_hop(lone, y) == 1.0);
  }

  TEST_CASE("reference parameters at four copies") {
    CHECK(delivery_probability_one_hop(kReference, 4) == doctest::Approx(0.9750018647658202).epsilon(1e-12));
    for (std::int64_t y = 1; y <= 40; ++y) {
      CHECK(delivery_probability_one_hop(kReference, y) ==
            doctest::Approx(oracle::one_hop_delivery(100, 1.0, 6.4e-4, y)).epsilon(1e-12));
    }
  }

  TEST_CASE("rejects out-of-range copies") {
    CHECK_THROWS_AS(delivery_probability_one_hop(kReference, 0), std::invalid_argument);
    CHECK_THROWS_AS(delivery_probability_one_hop(kReference, 1563), std::invalid_argument);
  }

  TEST_CASE("unimodal over the whole copy range") {
    for (std::int64_t n : {2, 10, 50, 100, 400}) {
      const SystemParams p = kReference.with_n_nodes(n);
      std::vector<double> q;
      for (std::int64_t y = 1; y <= p.max_copies(); ++y) q.push_back(delivery_probability_one_hop(p, y));
      // Once the sequence has dropped it never rises again. Subnormal tails
      // carry too few bits to order, so the check stops there.
      bool dropped = false;
      bool ok = true;
      for (std::size_t i = 1; i < q.size() && q[i] >= std::numeric_limits<double>::min(); ++i) {
        if (q[i] < q[i - 1]) dropped = true;
        if (dropped && q[i] > q[i - 1]) ok = false;
      }
      CHECK_MESSAGE(ok, "n = " << n);
    }
  }

  TEST_CASE("channel error never helps") {
    for (std::int64_t y : {1, 3, 6, 12}) {
      double prev = 2.0;
      for (double err = 0.0; err <= 1.0; err += 0.05) {
        const double q = delivery_probability_one_hop(kReference.with_channel_error(err), y);
        CHECK(q <= prev);
        prev = q;
      }
    }
  }
}

TEST_SUITE("group model") {
  const QoSGroupSpec g30(30, 0.99, 1.0);

  TEST_CASE("aggregate traffic") {
    const GroupLoad one[] = {{QoSGroupSpec(1, 0.5, 1.0), 1}};
    CHECK(aggregate_group_traffic(one) == 1.0);
    const GroupLoad two[] = {{g30, 2}, {g30, 2}};
    CHECK(aggregate_group_traffic(two) == 120.0);
    const GroupLoad single[] = {{QoSGroupSpec(7, 0.5, 2.0), 3}};
    CHECK(aggregate_group_traffic(single) == 7.0 * 3.0 / 2.0);
    CHECK_THROWS_AS(aggregate_group_traffic(std::span<const GroupLoad>{}), std::invalid_argument);
  }

  TEST_CASE("two groups of thirty with three retransmissions") {
    const GroupLoad loads[] = {{g30, 3}, {g30, 3}};
    CHECK(aggregate_group_traffic(loads) == 180.0);
    CHECK(delivery_probability_group(kReference, loads, 0) == doctest::Approx(0.9982067218245544).epsilon(1e-12));
    CHECK(delivery_probability_group(kReference, loads, 1) == delivery_probability_group(kReference, loads, 0));
  }

  TEST_CASE("single group reduces to the one-hop formula with beta = m (y - 1) / t") {
    for (std::int64_t m : {1, 10, 40}) {
      for (std::int64_t y : {2, 3, 6}) {
        const QoSGroupSpec g(m, 0.5, 1.0);
        const GroupLoad loads[] = {{g, y - 1}};
        const double beta = static_cast<double>(m * (y - 1));
        const double expected = 1.0 - std::pow(1.0 - std::exp(-2.0 * beta * 6.4e-4), static_cast<double>(y));
        CHECK(delivery_probability_group(kReference, loads, 0) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("vanishing vulnerable window gives certain delivery") {
    const SystemParams tiny(100, 1.0, 1e-12);
    const GroupLoad loads[] = {{g30, 3}, {g30, 3}};
    CHECK(delivery_probability_group(tiny, loads, 0) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("errors") {
    const GroupLoad loads[] = {{g30, 3}, {g30, 3}};
    CHECK_THROWS_AS(delivery_probability_group(kReference, loads, 2), std::invalid_argument);
    const GroupLoad too_many[] = {{g30, 1563}, {g30, 3}};
    CHECK_THROWS_AS(delivery_probability_group(kReference, too_many, 1), std::invalid_argument);
    const GroupLoad zero[] = {{g30, 0}, {g30, 3}};
    CHECK_THROWS_AS(delivery_probability_group(kReference, zero, 1), std::invalid_argument);
  }

  TEST_CASE("strictly decreasing in the other group's size and retransmissions") {
    const QoSGroupSpec own(20, 0.9, 1.0);
    for (std::int64_t own_y : {1, 4}) {
      double prev = 2.0;
      for (std::int64_t m = 1; m <= 200; m += 7) {
        const GroupLoad loads[] = {{own, own_y}, {QoSGroupSpec(m, 0.9, 1.0), 2}};
        const double q = delivery_probability_group(kReference, loads, 0);
        CHECK(q < prev);
        prev = q;
      }
      prev = 2.0;
      for (std::int64_t y = 1; y <= 30; ++y) {
        const GroupLoad loads[] = {{own, own_y}, {QoSGroupSpec(40, 0.9, 1.0), y}};
        const double q = delivery_probability_group(kReference, loads, 0);
        CHECK(q < prev);
        prev = q;
      }
    }
  }

  TEST_CASE("matches the oracle formula with carrier sense") {
    const SystemParams p = kReference.with_carrier_sense(2e-4);
    const oracle::Group og[2] = {{30, 0.9, 1.0}, {80, 0.9, 2.0}};
    for (std::int64_t y1 = 1; y1 <= 6; ++y1) {
      for (std::int64_t y2 = 1; y2 <= 6; ++y2) {
        const GroupLoad loads[] = {{QoSGroupSpec(30, 0.9, 1.0), y1}, {QoSGroupSpec(80, 0.9, 2.0), y2}};
        const std::int64_t y[2] = {y1, y2};
        for (int k = 0; k < 2; ++k) {
          CHECK(delivery_probability_group(p, loads, static_cast<std::size_t>(k)) ==
                doctest::Approx(oracle::group_delivery(og, y, k, 2e-4, 6.4e-4)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_SUITE("group_constraint_satisfied") {
  TEST_CASE("vacuous requirement") {
    const QoSGroupSpec g(30, 1e-12, 1.0);
    const GroupLoad loads[] = {{g, 50}, {g, 50}};
    CHECK(group_constraint_satisfied(kReference, loads, 0));
  }

  TEST_CASE("retransmission cap") {
    const QoSGroupSpec g(1, 1e-12, 1.0);
    const GroupLoad loads[] = {{g, 1563}, {g, 1}};
    CHECK_FALSE(group_constraint_satisfied(kReference, loads, 0));
    CHECK_FALSE(group_constraint_satisfied(kReference, loads, 1));
  }

  TEST_CASE("plan form: two groups of thirty at q = 0.99") {
    const QoSGroupSpec g(30, 0.99, 1.0);
    const QoSGroupSpec groups[] = {g, g};
    RetransmissionPlan plan;
    plan.copies = {4, 4};
    const auto ok = group_constraint_satisfied(kReference, groups, plan);
    CHECK(ok == std::vector<bool>{true, true});

    plan.copies = {4};
    CHECK_THROWS_AS(group_constraint_satisfied(kReference, groups, plan), std::invalid_argument);
  }

  TEST_CASE("agrees with Q_suc >= q away from the boundary") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> m_dist(1, 200);
    std::uniform_int_distribution<std::int64_t> y_dist(1, 20);
    std::uniform_real_distribution<double> q_dist(0.5, 0.99999);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
      const GroupLoad loads[] = {{QoSGroupSpec(m_dist(rng), q_dist(rng), 1.0), y_dist(rng)},
                                 {QoSGroupSpec(m_dist(rng), q_dist(rng), 1.0), y_dist(rng)}};
      for (std::size_t k = 0; k < 2; ++k) {
        const double q = delivery_probability_group(kReference, loads, k);
        if (std::abs(q - loads[k].group.q_min()) < 1e-12) continue;
        CHECK(group_constraint_satisfied(kReference, loads, k) == (q >= loads[k].group.q_min()));
        ++checked;
      }
    }
    CHECK(checked > 3900);
  }
}

TEST_CASE("probabilities stay in [0, 1] across the valid domain") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> n_dist(1, 5000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 3000; ++trial) {
    const double period = 0.1 + 10.0 * unit(rng);
    const double tp = period * (1e-6 + 0.5 * unit(rng));
    const SystemParams p(n_dist(rng), period, tp, unit(rng) * tp, unit(rng));
    std::uniform_int_distribution<std::int64_t> y_dist(1, p.max_copies());
    const double q = delivery_probability_one_hop(p, y_dist(rng));
    CHECK(q >= 0.0);
    CHECK(q <= 1.0);

    const QoSGroupSpec g(n_dist(rng), 0.5, period);
    const std::int64_t cap = retrans_cap(p, g);
    if (cap >= 1) {
      std::uniform_int_distribution<std::int64_t> r_dist(1, cap);
      const GroupLoad loads[] = {{g, r_dist(rng)}, {g.with_m(n_dist(rng)), r_dist(rng)}};
      const double qg = delivery_probability_group(p, loads, 0);
      CHECK(qg >= 0.0);
      CHECK(qg <= 1.0);
    }
  }
}
