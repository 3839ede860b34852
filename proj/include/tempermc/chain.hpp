#pragma once

// Lifted double-birth-death walk on Z x {+,-}.
//
// From (x,+): x+1 w.p. A, x-1 w.p. B, row flip w.p. C; from (x,-) the
// mirror image. The walk rescales to Brownian motion with volatility
//   v = (A-B)^2/C + (A+B),
// and the i.i.d. regenerative blocks between completed +/- row cycles
// give an exact O(1) sampler for the displacement law at regeneration
// times: dx = sum of G signs minus sum of H signs with G,H ~ Geom(C) on
// {0,1,2,...} and sign law P(+1) = A/(1-C).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tempermc/parallel.hpp"
#include "tempermc/rng.hpp"

namespace tempermc {

class ChainParams {
 public:
  static constexpr double sum_tolerance = 1e-12;

  // Validates A,B >= 0, C > 0, A+B+C = 1 within tolerance; renormalizes so
  // that a() + b() + c() == 1 holds exactly in double arithmetic.
  ChainParams(double a, double b, double c) {
    if (!(a >= 0.0) || !(b >= 0.0) || !(c > 0.0)) {
      throw std::invalid_argument("ChainParams: need A >= 0, B >= 0, C > 0");
    }
    const double sum = a + b + c;
    if (std::abs(sum - 1.0) > sum_tolerance) {
      throw std::invalid_argument("ChainParams: A + B + C must equal 1 within 1e-12");
    }
    a_ = a / sum;
    b_ = b / sum;
    c_ = 1.0 - (a_ + b_);
    if (!(c_ > 0.0)) {
      throw std::invalid_argument("ChainParams: C vanished after renormalization");
    }
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

 private:
  double a_, b_, c_;
};

enum class Dir : int { up = +1, down = -1 };

inline Dir flip(Dir d) { return d == Dir::up ? Dir::down : Dir::up; }

struct LiftedWalkerState {
  std::int64_t x = 0;
  Dir dir = Dir::up;
};

// One transition of the Figure-style lifted walk. Consumes one uniform.
inline LiftedWalkerState step(LiftedWalkerState state, const ChainParams& params,
                              std::mt19937_64& rng) {
  const double u = uniform01(rng);
  const int sign = static_cast<int>(state.dir);
  if (u < params.a()) {
    state.x += sign;
  } else if (u < params.a() + params.b()) {
    state.x -= sign;
  } else {
    state.dir = flip(state.dir);
  }
  return state;
}

// v = (A-B)^2/C + (A+B).
inline double theoretical_volatility(const ChainParams& params) {
  const double diff = params.a() - params.b();
  return diff * diff / params.c() + (params.a() + params.b());
}

struct RegenerativeBlock {
  std::int64_t dx = 0;  // displacement over one full +/- row cycle
  std::int64_t dt = 2;  // duration; at least the two row-flip steps
};

namespace detail {

// Geom(p) on {0,1,2,...} with P(k) = (1-p)^k p, by inversion.
inline std::int64_t geometric(double p, std::mt19937_64& rng) {
  if (p >= 1.0) return 0;
  const double u = uniform01(rng);
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

}  // namespace detail

// Samples one regenerative block directly from its distribution:
// G,H ~ Geom(C), signs E_i,F_i = +1 w.p. A/(1-C) and -1 w.p. B/(1-C),
// dx = sum E - sum F, dt = G + H + 2.
inline RegenerativeBlock sample_block(const ChainParams& params, std::mt19937_64& rng) {
  const double c = params.c();
  const std::int64_t g = detail::geometric(c, rng);
  const std::int64_t h = detail::geometric(c, rng);
  std::int64_t dx = 0;
  if (g + h > 0) {
    const double p_plus = params.a() / (params.a() + params.b());
    for (std::int64_t i = 0; i < g; ++i) dx += uniform01(rng) < p_plus ? 1 : -1;
    for (std::int64_t i = 0; i < h; ++i) dx -= uniform01(rng) < p_plus ? 1 : -1;
  }
  return RegenerativeBlock{dx, g + h + 2};
}

struct VolatilityEstimate {
  double v_hat = 0.0;
  double std_err = 0.0;
  int replicates = 0;
  std::int64_t steps_per_replicate = 0;
};

// Monte Carlo estimate of v: replicate chains from (0,+), v_hat is the mean
// of X_steps^2/steps across replicates, std_err the standard error of that
// mean. Replicates run on independent streams derived from (seed, index).
inline VolatilityEstimate estimate_volatility(const ChainParams& params, std::int64_t steps,
                                              int replicates, std::uint64_t seed) {
  if (steps < 10'000) throw std::invalid_argument("estimate_volatility: steps must be >= 1e4");
  if (replicates < 10) throw std::invalid_argument("estimate_volatility: replicates must be >= 10");

  std::vector<double> values(static_cast<std::size_t>(replicates));
  parallel_for(values.size(), [&](std::size_t i) {
    std::mt19937_64 rng = make_stream(seed, i);
    LiftedWalkerState state;
    for (std::int64_t n = 0; n < steps; ++n) state = step(state, params, rng);
    const double x = static_cast<double>(state.x);
    values[i] = x * x / static_cast<double>(steps);
  });

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(replicates);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sample_var = replicates > 1 ? ss / static_cast<double>(replicates - 1) : 0.0;
  return VolatilityEstimate{mean, std::sqrt(sample_var / static_cast<double>(replicates)),
                            replicates, steps};
}

}  // namespace tempermc
