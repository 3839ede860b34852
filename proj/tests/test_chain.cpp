#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "support/stat_tests.hpp"
#include "tempermc/chain.hpp"

using namespace tempermc;

namespace {

double block_dx_variance(const ChainParams& p) {
  const double diff = p.a() - p.b();
  return 2.0 * diff * diff / (p.c() * p.c()) + 2.0 * (1.0 - p.c()) / p.c();
}

}  // namespace

TEST_CASE("ChainParams validation") {
  CHECK_THROWS_AS(ChainParams(-0.1, 0.6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ChainParams(0.5, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ChainParams(0.3, 0.3, 0.5), std::invalid_argument);
  CHECK_NOTHROW(ChainParams(0.3, 0.3, 0.4 + 5e-13));
  CHECK_NOTHROW(ChainParams(0.0, 0.0, 1.0));
}

TEST_CASE("ChainParams conserves probability exactly after renormalization") {
  const double triples[][3] = {{0.25, 0.25, 0.5},  {0.5, 0.0, 0.5},  {0.45, 0.05, 0.5},
                               {0.3, 0.2, 0.5},    {0.05, 0.15, 0.8}, {1e-6, 0.7, 0.299999},
                               {0.3, 0.3, 0.4 + 5e-13}};
  for (const auto& t : triples) {
    const ChainParams p(t[0], t[1], t[2]);
    CHECK((p.a() + p.b()) + p.c() == 1.0);
  }
}

TEST_CASE("step follows the transition law from the + row") {
  const ChainParams p(0.98, 0.0, 0.02);
  std::mt19937_64 rng = make_stream(42, 0);
  const std::int64_t n = 1'000'000;
  std::int64_t right = 0, flips = 0, left = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const LiftedWalkerState next = step(LiftedWalkerState{0, Dir::up}, p, rng);
    if (next.x == 1) ++right;
    if (next.x == -1) ++left;
    if (next.dir == Dir::down) ++flips;
  }
  CHECK(left == 0);  // B = 0
  CHECK(stat_tests::binomial_z(right, n, 0.98) < 4.0);
  CHECK(stat_tests::binomial_z(flips, n, 0.02) < 4.0);
}

TEST_CASE("step follows the mirrored law from the - row") {
  const ChainParams p(0.3, 0.2, 0.5);
  std::mt19937_64 rng = make_stream(43, 0);
  const std::int64_t n = 1'000'000;
  std::int64_t down = 0, up = 0, stay = 0, bad_flips = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const LiftedWalkerState next = step(LiftedWalkerState{5, Dir::down}, p, rng);
    if (next.x == 4) ++down;
    if (next.x == 6) ++up;
    if (next.x == 5) {
      ++stay;
      if (next.dir != Dir::up) ++bad_flips;
    }
  }
  CHECK(bad_flips == 0);
  CHECK(stat_tests::binomial_z(down, n, 0.3) < 4.0);
  CHECK(stat_tests::binomial_z(up, n, 0.2) < 4.0);
  CHECK(stat_tests::binomial_z(stay, n, 0.5) < 4.0);
}

TEST_CASE("with B=0 the + row never moves left") {
  const ChainParams p(0.6, 0.0, 0.4);
  std::mt19937_64 rng = make_stream(44, 0);
  LiftedWalkerState state;
  int violations = 0;
  for (int i = 0; i < 200'000; ++i) {
    const LiftedWalkerState next = step(state, p, rng);
    if (state.dir == Dir::up && next.x < state.x) ++violations;
    if (state.dir == Dir::down && next.x > state.x) ++violations;
    state = next;
  }
  CHECK(violations == 0);
}

TEST_CASE("theoretical_volatility closed forms") {
  CHECK(theoretical_volatility(ChainParams(0.25, 0.25, 0.5)) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(theoretical_volatility(ChainParams(0.5, 0.0, 0.5)) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(theoretical_volatility(ChainParams(0.45, 0.05, 0.5)) == Catch::Approx(0.82).epsilon(1e-12));
  CHECK(theoretical_volatility(ChainParams(0.0, 0.0, 1.0)) == 0.0);
}

TEST_CASE("theoretical_volatility is symmetric in A and B") {
  std::mt19937_64 rng = make_stream(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = uniform01(rng) * 0.6;
    const double b = uniform01(rng) * (0.98 - a);
    const ChainParams p(a, b, 1.0 - a - b), q(b, a, 1.0 - a - b);
    CHECK(theoretical_volatility(p) == Catch::Approx(theoretical_volatility(q)).margin(1e-13));
  }
}

TEST_CASE("sample_block moments match the regeneration lemma") {
  const std::int64_t n = 1'000'000;
  const double triples[][3] = {{0.25, 0.25, 0.5}, {0.5, 0.0, 0.5}, {0.45, 0.05, 0.5},
                               {0.3, 0.2, 0.5},   {0.05, 0.15, 0.8}};
  int stream = 0;
  for (const auto& t : triples) {
    const ChainParams p(t[0], t[1], t[2]);
    std::mt19937_64 rng = make_stream(100, static_cast<std::uint64_t>(stream++));
    std::vector<double> dts, dxs;
    dts.reserve(n);
    dxs.reserve(n);
    std::int64_t short_blocks = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      const RegenerativeBlock block = sample_block(p, rng);
      if (block.dt < 2) ++short_blocks;
      dts.push_back(static_cast<double>(block.dt));
      dxs.push_back(static_cast<double>(block.dx));
    }
    CHECK(short_blocks == 0);
    const auto dt_stats = stat_tests::mean_var(dts);
    const auto dx_stats = stat_tests::mean_var(dxs);

    const double dt_mean_expected = 2.0 / p.c();
    const double dt_mean_se = std::sqrt(2.0 * (1.0 - p.c())) / p.c() / std::sqrt(double(n));
    CHECK(std::abs(dt_stats.mean - dt_mean_expected) <= std::max(4.0 * dt_mean_se, 1e-12));

    const double dx_var_expected = block_dx_variance(p);
    const double dx_mean_se = std::sqrt(dx_var_expected / double(n));
    CHECK(std::abs(dx_stats.mean) <= std::max(4.0 * dx_mean_se, 1e-12));
    CHECK(std::abs(dx_stats.var - dx_var_expected) <=
          std::max(4.0 * stat_tests::variance_std_err(dx_stats), 1e-12));
  }
}

TEST_CASE("block sampler matches stepped regeneration displacements") {
  // Displacement between consecutive completed +/- row cycles of a stepped
  // path versus direct block draws; equality in distribution at KS level 1e-3.
  const ChainParams p(0.45, 0.05, 0.5);
  const std::size_t n = 100'000;

  std::mt19937_64 rng_path = make_stream(200, 0);
  std::vector<double> stepped;
  stepped.reserve(n);
  LiftedWalkerState state;
  std::int64_t block_start_x = 0;
  int flips_seen = 0;
  while (stepped.size() < n) {
    const Dir before = state.dir;
    state = step(state, p, rng_path);
    if (state.dir != before) ++flips_seen;
    if (flips_seen == 2) {
      stepped.push_back(static_cast<double>(state.x - block_start_x));
      block_start_x = state.x;
      flips_seen = 0;
    }
  }

  std::mt19937_64 rng_block = make_stream(200, 1);
  std::vector<double> sampled;
  sampled.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    sampled.push_back(static_cast<double>(sample_block(p, rng_block).dx));
  }
  CHECK(stat_tests::ks_two_sample_pvalue(stepped, sampled) > 1e-3);

  // Chained blocks versus the stepped path at the tenth regeneration time.
  const std::size_t m = n / 10;
  std::vector<double> stepped10(m), chained10(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0, c = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      s += stepped[10 * i + j];
      c += sampled[10 * i + j];
    }
    stepped10[i] = s;
    chained10[i] = c;
  }
  CHECK(stat_tests::ks_two_sample_pvalue(stepped10, chained10) > 1e-3);
}

TEST_CASE("estimate_volatility agrees with the formula") {
  const ChainParams sym(0.25, 0.25, 0.5);
  const VolatilityEstimate est = estimate_volatility(sym, 100'000, 60, 500);
  CHECK(est.replicates == 60);
  CHECK(est.steps_per_replicate == 100'000);
  CHECK(est.std_err > 0.0);
  CHECK(std::abs(est.v_hat - 0.5) <= 4.0 * est.std_err);
  // chi-squared spread of endpoint-squared values: std_err ~ v*sqrt(2/R)
  CHECK(est.std_err == Catch::Approx(0.5 * std::sqrt(2.0 / 60.0)).epsilon(0.5));

  const ChainParams momentum(0.5, 0.0, 0.5);
  const VolatilityEstimate est2 = estimate_volatility(momentum, 100'000, 60, 501);
  CHECK(std::abs(est2.v_hat - 1.0) <= 4.0 * est2.std_err);
}

TEST_CASE("estimate_volatility rejects undersized runs") {
  const ChainParams p(0.25, 0.25, 0.5);
  CHECK_THROWS_AS(estimate_volatility(p, 9'999, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate_volatility(p, 10'000, 9, 1), std::invalid_argument);
}

TEST_CASE("degenerate flip-only chain has zero volatility") {
  const ChainParams p(0.0, 0.0, 1.0);
  CHECK(theoretical_volatility(p) == 0.0);
  const VolatilityEstimate est = estimate_volatility(p, 10'000, 10, 3);
  CHECK(est.v_hat == 0.0);
  CHECK(est.std_err == 0.0);
}

TEST_CASE("estimate_volatility is deterministic in the seed") {
  const ChainParams p(0.45, 0.05, 0.5);
  const VolatilityEstimate x = estimate_volatility(p, 10'000, 10, 77);
  const VolatilityEstimate y = estimate_volatility(p, 10'000, 10, 77);
  const VolatilityEstimate z = estimate_volatility(p, 10'000, 10, 78);
  CHECK(x.v_hat == y.v_hat);
  CHECK(x.std_err == y.std_err);
  CHECK(x.v_hat != z.v_hat);
}

TEST_CASE("merged chain has the symmetric increment law") {
  const ChainParams p(0.45, 0.05, 0.5);
  std::mt19937_64 rng = make_stream(300, 0);
  const std::int64_t n = 1'000'000;
  std::int64_t plus = 0, minus = 0, zero = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    LiftedWalkerState state{0, uniform01(rng) < 0.5 ? Dir::up : Dir::down};
    const std::int64_t dx = step(state, p, rng).x;
    if (dx == 1) ++plus;
    else if (dx == -1) ++minus;
    else ++zero;
  }
  const double half_move = 0.5 * (p.a() + p.b());
  CHECK(stat_tests::binomial_z(plus, n, half_move) < 4.0);
  CHECK(stat_tests::binomial_z(minus, n, half_move) < 4.0);
  CHECK(stat_tests::binomial_z(zero, n, p.c()) < 4.0);
}

TEST_CASE("rescaled endpoint passes Anderson-Darling normality", "[slow]") {
  const ChainParams p(0.45, 0.05, 0.5);
  const double v = theoretical_volatility(p);
  const std::int64_t steps = 1'000'000;
  const int replicates = 1000;
  std::vector<double> standardized(replicates);
  parallel_for(static_cast<std::size_t>(replicates), [&](std::size_t i) {
    std::mt19937_64 rng = make_stream(400, i);
    LiftedWalkerState state;
    for (std::int64_t s = 0; s < steps; ++s) state = step(state, p, rng);
    standardized[i] =
        static_cast<double>(state.x) / std::sqrt(v * static_cast<double>(steps));
  });
  CHECK(stat_tests::anderson_darling_normal_pvalue(standardized) > 1e-3);
}
