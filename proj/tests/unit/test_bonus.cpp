#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ucbvi/bonus.hpp"
#include "support/oracles.hpp"

using namespace ucbvi;
using namespace ucbvi::testing;

namespace {

BonusConfig config_with(double delta, std::uint64_t T) {
  BonusConfig c;
  c.delta = delta;
  c.total_steps = T;
  return c;
}

}  // namespace

TEST_SUITE("bonus") {
  TEST_CASE("config validation") {
    CHECK_THROWS_AS(config_with(0.0, 10).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(config_with(1.0, 10).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(config_with(0.1, 1).validate(2), std::invalid_argument);
    CHECK_NOTHROW(config_with(0.1, 2).validate(2));
  }

  TEST_CASE("log factor") {
    const double L = log_factor(config_with(0.1, 20), 2, 2, 5);
    CHECK(std::abs(L - std::log(4000.0)) <= 1e-12);
    CHECK(L == doctest::Approx(8.29405).epsilon(1e-6));
    const double halved = log_factor(config_with(0.05, 20), 2, 2, 5);
    CHECK(std::abs(halved - L - std::log(2.0)) <= 1e-12);
    auto theorem = config_with(0.1, 20);
    theorem.log_convention = LogConvention::theorem;
    CHECK(std::abs(log_factor(theorem, 2, 2, 5) - std::log(5.0 * 5 * 2 * 2 * 20 / 0.1)) <= 1e-12);
  }

  TEST_CASE("empirical variance") {
    const double p1[] = {0.5, 0.5}, v1[] = {0.0, 1.0};
    CHECK(empirical_variance(p1, v1) == doctest::Approx(0.25));
    const double p2[] = {0.0, 1.0, 0.0}, v2[] = {3.0, -7.0, 11.0};
    CHECK(empirical_variance(p2, v2) == 0.0);
    const double p3[] = {0.2, 0.3, 0.5}, v3[] = {1.0, 2.0, 3.0};
    CHECK(std::abs(empirical_variance(p3, v3) - 0.61) <= 1e-12);

    std::mt19937_64 engine(1);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
      auto p = random_row(engine, 1 + i % 9);
      std::vector<double> v(p.size());
      for (auto& x : v) x = u(engine);
      const double got = empirical_variance(p, v);
      CHECK(got >= 0.0);
      CHECK(std::abs(got - two_pass_variance(p, v)) <= 1e-12);
    }
  }

  TEST_CASE("Chernoff-Hoeffding bonus") {
    const double L = std::log(4000.0);
    CHECK(bonus_ch(3, 4, L) == doctest::Approx(87.0875).epsilon(1e-6));
    CHECK(std::abs(bonus_ch(3, 4, L) - 7.0 * 3.0 * L / 2.0) <= 1e-12);
    CHECK(std::abs(bonus_ch(3, 16, L) - bonus_ch(3, 4, L) / 2.0) <= 1e-12);
    CHECK(bonus_ch(1, 1, 1.0) == 7.0);
    CHECK_THROWS_AS(bonus_ch(3, 0, L), std::domain_error);
  }

  TEST_CASE("Bernstein-Freedman bonus") {
    const double L = std::log(4000.0);
    SUBCASE("last step with the cap active") {
      const double p[] = {0.5, 0.5}, v[] = {0.0, 0.0};
      const std::uint64_t n[] = {0, 0};
      auto terms = bonus_bf_terms(2, 2, 2, L, p, v, 2, n);
      CHECK(terms.variance == 0.0);
      CHECK(std::abs(terms.range - 14.0 * 2.0 * L / 6.0) <= 1e-12);
      CHECK(terms.range == doctest::Approx(38.7056).epsilon(1e-6));
      CHECK(std::abs(terms.correction - 4.0) <= 1e-12);
      CHECK(terms.total() == doctest::Approx(42.7056).epsilon(1e-6));
      CHECK(bonus_bf(2, 2, 2, L, p, v, 2, n) == terms.total());
    }
    SUBCASE("constant next values have no variance term") {
      const double p[] = {0.2, 0.3, 0.5}, v[] = {1.5, 1.5, 1.5};
      const std::uint64_t n[] = {3, 4, 5};
      CHECK(bonus_bf_terms(4, 3, 2, L, p, v, 10, n).variance == 0.0);
    }
    SUBCASE("large next-state counts remove the correction") {
      const double p[] = {0.2, 0.8}, v[] = {0.0, 3.0};
      const std::uint64_t huge = std::numeric_limits<std::uint64_t>::max() / 2;
      const std::uint64_t n[] = {huge, huge};
      auto terms = bonus_bf_terms(4, 2, 2, L, p, v, 10, n);
      CHECK(terms.correction < 1e-4);
      CHECK(std::abs(terms.variance - std::sqrt(8.0 * L * 0.2 * 0.8 * 9.0 / 10.0)) <= 1e-12);
    }
    SUBCASE("hand formula on a mid-range input") {
      const std::size_t H = 3, S = 2, A = 2;
      const double p[] = {0.25, 0.75}, v[] = {1.0, 2.0};
      const std::uint64_t n[] = {1'000'000'000ULL, 7};
      const std::uint64_t N = 12;
      const double var = 0.25 * 0.75;
      const double c = 1e4 * 27.0 * 4.0 * 2.0 * L * L;
      const double inner = 0.25 * std::min(c / 1e9, 9.0) + 0.75 * std::min(c / 7.0, 9.0);
      const double expected = std::sqrt(8.0 * L * var / N) + 14.0 * H * L / (3.0 * N) +
                              std::sqrt(8.0 * inner / N);
      CHECK(std::abs(bonus_bf(H, S, A, L, p, v, N, n) - expected) <= 1e-12 * expected);
    }
    CHECK_THROWS_AS(bonus_bf(2, 1, 1, L, std::vector<double>{1.0}, std::vector<double>{0.0}, 0,
                             std::vector<std::uint64_t>{0}),
                    std::domain_error);
  }

  TEST_CASE("bonus properties over random inputs") {
    std::mt19937_64 engine(2);
    std::uniform_int_distribution<int> HS(1, 8), counts(0, 50);
    std::uniform_real_distribution<double> Ld(1.0, 12.0);
    for (int i = 0; i < 2000; ++i) {
      const std::size_t H = HS(engine), S = 1 + HS(engine) % 5, A = 1 + HS(engine) % 4;
      const double L = Ld(engine);
      auto p = random_row(engine, S);
      std::vector<double> v(S);
      std::uniform_real_distribution<double> vd(0.0, static_cast<double>(H));
      for (auto& x : v) x = vd(engine);
      std::vector<std::uint64_t> n(S);
      for (auto& c : n) c = counts(engine);
      const std::uint64_t N = 1 + counts(engine) * 3;

      const double ch = bonus_ch(H, N, L);
      const auto bf = bonus_bf_terms(H, S, A, L, p, v, N, n);
      CHECK(ch >= 0.0);
      CHECK(std::isfinite(bf.total()));
      CHECK(bf.variance >= 0.0);
      CHECK(bf.range >= 0.0);
      CHECK(bf.correction >= 0.0);
      CHECK(bf.correction <= std::sqrt(8.0 * H * H / static_cast<double>(N)) + 1e-12);
      CHECK(bonus_ch(H, N + 1, L) <= ch);
      CHECK(bonus_bf(H, S, A, L, p, v, N + 1, n) <= bf.total());

      const auto big_N = static_cast<std::uint64_t>(std::ceil(8.0 * L)) + counts(engine) * 20;
      CHECK(bonus_bf(H, S, A, L, p, v, big_N, n) <= bonus_ch(H, big_N, L));
    }
  }
}
