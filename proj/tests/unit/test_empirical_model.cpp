#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ucbvi/empirical_model.hpp"
#include "ucbvi/exact.hpp"
#include "ucbvi/rng.hpp"
#include "support/fixtures.hpp"

using namespace ucbvi;
using namespace ucbvi::testing;

namespace {

EpisodeTrace random_trace(std::mt19937_64& engine, std::size_t S, std::size_t A, std::size_t H) {
  std::uniform_int_distribution<std::size_t> sx(0, S - 1), ax(0, A - 1);
  EpisodeTrace trace;
  std::size_t x = sx(engine);
  for (std::size_t t = 0; t < H; ++t) {
    const std::size_t a = ax(engine), y = sx(engine);
    trace.steps.push_back({x, a, 0.0, y});
    x = y;
  }
  return trace;
}

}  // namespace

TEST_SUITE("empirical_model") {
  TEST_CASE("one trace") {
    EmpiricalModel model(3, 2, 3);
    EpisodeTrace trace{1, {{0, 1, 0.0, 2}, {2, 0, 0.0, 2}, {2, 0, 0.0, 1}}};
    model.ingest(trace);
    CHECK(model.check_consistency().empty());
    CHECK(model.episodes_seen() == 1);
    CHECK(model.count(0, 1, 2) == 1);
    CHECK(model.count(2, 0, 2) == 1);
    CHECK(model.count(2, 0, 1) == 1);
    CHECK(model.count(2, 0) == 2);
    CHECK(model.step_count(1, 2, 0) == 1);
    CHECK(model.state_step_count(0, 0) == 1);
    CHECK(model.state_step_count(2, 2) == 1);

    model.ingest(trace);
    CHECK(model.count(0, 1, 2) == 2);
    CHECK(model.count(2, 0) == 4);
    CHECK(model.step_count(2, 2, 0) == 2);
    CHECK(model.check_consistency().empty());
  }

  TEST_CASE("bad traces are rejected without side effects") {
    EmpiricalModel model(2, 2, 2);
    auto before = model;
    CHECK_THROWS_AS(model.ingest({1, {{0, 0, 0.0, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(model.ingest({1, {{0, 0, 0.0, 1}, {1, 2, 0.0, 0}}}), std::out_of_range);
    CHECK_THROWS_AS(model.ingest({1, {{0, 0, 0.0, 1}, {1, 1, 0.0, 5}}}), std::out_of_range);
    CHECK_THROWS_AS(model.ingest({1, {{3, 0, 0.0, 1}, {1, 1, 0.0, 0}}}), std::out_of_range);
    CHECK(model == before);
  }

  TEST_CASE("empirical rows") {
    EmpiricalModel model(2, 1, 1);
    for (int i = 0; i < 3; ++i) model.ingest({1, {{0, 0, 0.0, 0}}});
    model.ingest({1, {{0, 0, 0.0, 1}}});
    auto row = model.transition_row(0, 0);
    CHECK(row[0] == 0.75);
    CHECK(row[1] == 0.25);
    CHECK_THROWS_AS(model.transition_row(1, 0), UnknownPairError);
    CHECK_FALSE(model.known(1, 0));

    EmpiricalModel single(3, 1, 1);
    single.ingest({1, {{1, 0, 0.0, 2}}});
    auto mass = single.transition_row(1, 0);
    CHECK(mass == std::vector<double>{0.0, 0.0, 1.0});
  }

  TEST_CASE("state-step counts") {
    EmpiricalModel model(3, 2, 4);
    for (std::size_t t = 0; t <= 4; ++t)
      for (std::size_t y = 0; y < 3; ++y) CHECK(model.state_step_count(t, y) == 0);
    CHECK_THROWS_AS(model.state_step_count(5, 0), std::out_of_range);

    std::mt19937_64 engine(3);
    std::vector<EpisodeTrace> stored;
    for (int i = 0; i < 50; ++i) {
      stored.push_back(random_trace(engine, 3, 2, 4));
      model.ingest(stored.back());
    }
    for (std::size_t t = 0; t < 4; ++t) {
      for (std::size_t y = 0; y < 3; ++y) {
        std::uint64_t recount = 0;
        for (const auto& trace : stored) recount += trace.steps[t].state == y;
        CHECK(model.state_step_count(t, y) == recount);
      }
    }
    for (std::size_t y = 0; y < 3; ++y) CHECK(model.state_step_count(4, y) == 0);
  }

  TEST_CASE("invariants over random streams") {
    std::mt19937_64 engine(4);
    for (int run = 0; run < 10; ++run) {
      const std::size_t S = 1 + run % 4, A = 1 + run % 3, H = 1 + run % 5;
      EmpiricalModel model(S, A, H);
      EmpiricalModel previous = model;
      for (int k = 0; k < 100; ++k) {
        model.ingest(random_trace(engine, S, A, H));
        REQUIRE(model.check_consistency().empty());
        for (std::size_t x = 0; x < S; ++x) {
          for (std::size_t a = 0; a < A; ++a) {
            CHECK(model.count(x, a) >= previous.count(x, a));
            if (!model.known(x, a)) continue;
            auto row = model.transition_row(x, a);
            double sum = 0.0;
            for (double p : row) {
              CHECK(p >= 0.0);
              sum += p;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
          }
        }
        previous = model;
      }
      std::uint64_t total = 0;
      for (std::size_t x = 0; x < S; ++x)
        for (std::size_t a = 0; a < A; ++a) total += model.count(x, a);
      CHECK(total == 100 * H);
    }
  }

  TEST_CASE("JSON snapshot round trip") {
    std::mt19937_64 engine(5);
    EmpiricalModel model(3, 2, 3);
    for (int i = 0; i < 20; ++i) model.ingest(random_trace(engine, 3, 2, 3));
    auto back = EmpiricalModel::from_json(model.to_json());
    CHECK(back == model);
    CHECK_THROWS(EmpiricalModel::from_json("{}"));
  }
}
