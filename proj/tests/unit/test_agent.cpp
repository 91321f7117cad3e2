#include <doctest.h>

#include <cmath>
#include <random>

#include "ucbvi/agent.hpp"
#include "ucbvi/exact.hpp"
#include "ucbvi/harness.hpp"
#include "ucbvi/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace ucbvi;
using namespace ucbvi::testing;

namespace {

BonusConfig make_config(BonusVariant variant, std::uint64_t T) {
  BonusConfig c;
  c.variant = variant;
  c.total_steps = T;
  return c;
}

}  // namespace

TEST_SUITE("agent") {
  TEST_CASE("empty model gives Q = H everywhere") {
    std::mt19937_64 engine(1);
    auto mdp = random_mdp(engine, 3, 2, 4);
    EmpiricalModel model(3, 2, 4);
    for (auto variant : {BonusVariant::chernoff_hoeffding, BonusVariant::bernstein_freedman}) {
      auto q = ucb_q_values(model, QTables::initial(3, 2, 4), mdp.rewards(), make_config(variant, 40));
      auto star = optimal_values(mdp);
      for (std::size_t t = 0; t < 4; ++t) {
        for (std::size_t x = 0; x < 3; ++x) {
          CHECK(q.v(t, x) == 4.0);
          CHECK(q.v(t, x) >= star.values(t, x));
          for (std::size_t a = 0; a < 2; ++a) CHECK(q.q(t, x, a) == 4.0);
        }
      }
    }
  }

  TEST_CASE("heavily observed model approaches Q*") {
    std::mt19937_64 engine(2);
    const std::size_t S = 2, A = 2, H = 3;
    auto mdp = random_mdp(engine, S, A, H);
    auto star = optimal_values(mdp);
    EmpiricalModel model(S, A, H);
    Rng rng(7);
    for (int k = 0; k < 100'000; ++k) {
      std::vector<std::size_t> actions(S * H);
      for (auto& a : actions) a = rng.uniform_index(A);
      model.ingest(simulate_episode(mdp, Policy(S, A, H, actions), 0, rng));
    }
    double l1_error = 0.0;
    for (std::size_t x = 0; x < S; ++x) {
      for (std::size_t a = 0; a < A; ++a) {
        auto row = model.transition_row(x, a);
        double e = 0.0;
        for (std::size_t y = 0; y < S; ++y) e += std::abs(row[y] - mdp.transition(x, a, y));
        l1_error = std::max(l1_error, e);
      }
    }
    for (auto variant : {BonusVariant::chernoff_hoeffding, BonusVariant::bernstein_freedman}) {
      auto q = ucb_q_values(model, QTables::initial(S, A, H), mdp.rewards(),
                            make_config(variant, 100'000 * H));
      double allowance = 0.0;
      for (std::size_t t = H; t-- > 0;) {
        double b_max = 0.0;
        for (std::size_t x = 0; x < S; ++x)
          for (std::size_t a = 0; a < A; ++a) b_max = std::max(b_max, q.bonus(t, x, a));
        allowance += b_max + l1_error * static_cast<double>(H);
        for (std::size_t x = 0; x < S; ++x)
          for (std::size_t a = 0; a < A; ++a)
            CHECK(std::abs(q.q(t, x, a) - star.q(t, x, a)) <= allowance + 1e-12);
      }
      if (variant == BonusVariant::bernstein_freedman) CHECK(allowance < 1.0);
    }
  }

  TEST_CASE("greedy action") {
    QTables tables(1, 3, 1);
    tables.q(0, 0, 0) = 2;
    tables.q(0, 0, 1) = 2;
    tables.q(0, 0, 2) = 1;
    CHECK(tables.greedy_action(0, 0) == 0);
    QTables two(1, 2, 1);
    two.q(0, 0, 0) = 0;
    two.q(0, 0, 1) = 5;
    CHECK(two.greedy_action(0, 0) == 1);

    std::mt19937_64 engine(3);
    std::uniform_int_distribution<int> small(0, 3);
    QTables random(4, 5, 3);
    for (int round = 0; round < 50; ++round) {
      for (std::size_t t = 0; t < 3; ++t)
        for (std::size_t x = 0; x < 4; ++x)
          for (std::size_t a = 0; a < 5; ++a) random.q(t, x, a) = small(engine);
      auto policy = random.greedy_policy();
      for (std::size_t t = 0; t < 3; ++t) {
        for (std::size_t x = 0; x < 4; ++x) {
          auto row = random.q.row(t, x);
          const std::size_t expected = scan_argmax(std::vector<double>(row.begin(), row.end()));
          CHECK(random.greedy_action(t, x) == expected);
          CHECK(policy.action(t, x) == expected);
        }
      }
    }
  }

  TEST_CASE("single episode under the initial tables") {
    std::mt19937_64 engine(4);
    auto mdp = random_mdp(engine, 3, 3, 5);
    auto run = run_learner(mdp, 1, BonusConfig{}, 9);
    REQUIRE(run.traces.size() == 1);
    REQUIRE(run.summaries.size() == 1);
    CHECK(run.traces[0].steps.size() == 5);
    CHECK(run.summaries[0].start_value == 5.0);
    CHECK(run.summaries[0].mean_visited_bonus == 0.0);
    for (const auto& step : run.traces[0].steps) CHECK(step.action == 0);
    CHECK(run.model.episodes_seen() == 1);
  }

  TEST_CASE("locks onto the optimal policy in a deterministic MDP") {
    auto mdp = identity_bandit(1, {0.0, 1.0}, 2);
    auto star = optimal_values(mdp);
    const std::size_t K = 3000;
    std::vector<double> regret;
    run_learner(mdp, K, BonusConfig{}, 5, [&](const QTables& tables, const EpisodeTrace&) {
      regret.push_back(episode_regret(mdp, star.values, tables.greedy_policy(), 0).increment);
    });
    REQUIRE(regret.size() == K);
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < K; ++k)
      if (regret[k] > 1e-12) last_positive = k + 1;
    CHECK(last_positive > 0);
    CHECK(last_positive < K * 4 / 5);
  }

  TEST_CASE("identical seeds give identical runs") {
    std::mt19937_64 engine(5);
    auto mdp = random_mdp(engine, 4, 2, 5);
    for (auto variant : {BonusVariant::chernoff_hoeffding, BonusVariant::bernstein_freedman}) {
      std::vector<std::vector<double>> qa, qb;
      auto ra = run_learner(mdp, 200, make_config(variant, 0), 77, [&](const QTables& t, const EpisodeTrace&) {
        qa.emplace_back(t.q.data().begin(), t.q.data().end());
      });
      auto rb = run_learner(mdp, 200, make_config(variant, 0), 77, [&](const QTables& t, const EpisodeTrace&) {
        qb.emplace_back(t.q.data().begin(), t.q.data().end());
      });
      CHECK(ra.traces == rb.traces);
      CHECK(qa == qb);
      CHECK(ra.model == rb.model);
      auto rc = run_learner(mdp, 200, make_config(variant, 0), 78);
      CHECK_FALSE(ra.traces == rc.traces);
    }
  }

  TEST_CASE("per-episode invariants over random MDPs") {
    std::mt19937_64 engine(6);
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t S = 1 + trial % 4, A = 1 + trial % 3, H = 2 + trial % 4;
      auto mdp = random_mdp(engine, S, A, H);
      const auto variant =
          trial % 2 ? BonusVariant::chernoff_hoeffding : BonusVariant::bernstein_freedman;
      EmpiricalModel mirror(S, A, H);
      std::optional<QTables> previous;
      std::size_t failures = 0;
      const double Hd = static_cast<double>(H);
      run_learner(mdp, 300, make_config(variant, 0), 100 + trial,
                  [&](const QTables& tables, const EpisodeTrace& trace) {
                    for (std::size_t t = 0; t < H; ++t) {
                      for (std::size_t x = 0; x < S; ++x) {
                        double best = -1.0;
                        for (std::size_t a = 0; a < A; ++a) {
                          const double q = tables.q(t, x, a);
                          best = std::max(best, q);
                          failures += !(q >= 0.0 && q <= Hd);
                          if (!mirror.known(x, a)) failures += q != Hd;
                          if (previous) failures += q > previous->q(t, x, a);
                        }
                        failures += tables.v(t, x) != best;
                      }
                    }
                    previous = tables;
                    mirror.ingest(trace);
                  });
      CHECK(failures == 0);
    }
  }

  TEST_CASE("optimism holds in most seeded runs") {
    std::mt19937_64 engine(7);
    auto mdp = random_mdp(engine, 3, 2, 3);
    auto star = optimal_values(mdp);
    for (auto algo : {Algorithm::ucbvi_ch, Algorithm::ucbvi_bf}) {
      AlgoConfig config;
      config.algorithm = algo;
      std::vector<RegretTrace> traces;
      for (std::uint64_t seed = 0; seed < 50; ++seed)
        traces.push_back(run_regret_trace(mdp, star, config, 200, seed));
      auto report = optimism_report(traces, 0.1);
      CHECK(report.total_runs == 50);
      CHECK(report.passed);
    }
  }
}
