#pragma once

// Simulated tempering on the d-dimensional standard normal product target
// under instant within-level mixing: the spatial state enters the swap
// ratio only through S = |x|^2, and S is resampled exactly each iteration
// as chi^2_d / beta. Level moves are Metropolis with the exact-K ratio;
// the non-reversible mode lifts the level chain with a direction bit that
// flips on every rejection and boundary auto-rejection.
//
// Round trips are counted 0 -> N -> 0 with a three-state flag. A completed
// round trip restarts the excursion at direction "+", which makes the
// long-run rate equal exactly 1/(E[(0,+)->N] + 1 + E[(N,-)->0]), the
// quantity the hitting-time oracle computes.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "tempermc/ladder.hpp"
#include "tempermc/rng.hpp"
#include "tempermc/scaling.hpp"

namespace tempermc {

struct TemperConfig {
  int d = 100;
  Ladder ladder;
  Mode mode = Mode::reversible;
  std::int64_t iterations = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (d < 1) throw std::invalid_argument("TemperConfig: d must be >= 1");
    if (iterations < 1) throw std::invalid_argument("TemperConfig: iterations must be >= 1");
  }
};

struct TemperState {
  std::size_t level = 0;
  int dir = +1;      // +1 means "toward hotter" (increasing level index)
  double s = 0.0;    // current squared norm, the sufficient statistic
};

struct RoundTripStats {
  std::int64_t round_trips = 0;
  std::int64_t iterations = 0;
  double rate_per_million = 0.0;
  std::int64_t proposals = 0;
  std::int64_t acceptances = 0;
  double empirical_acc = 0.0;
  std::vector<std::int64_t> level_occupancy;    // end-of-iteration level counts
  std::vector<std::int64_t> edge_up_accepts;    // accepted k -> k+1 moves per edge
  std::vector<std::int64_t> edge_down_accepts;  // accepted k+1 -> k moves per edge
};

namespace detail {

enum class TripPhase { seeking_hot, seeking_cold };

inline RoundTripStats simulate(const TemperConfig& config, std::int64_t iterations,
                               bool count_round_trips) {
  config.validate();
  if (iterations < 1) throw std::invalid_argument("simulate: iterations must be >= 1");

  const std::vector<double>& betas = config.ladder.betas();
  const std::size_t top = config.ladder.hottest();
  const bool lifted = config.mode == Mode::nonreversible;

  std::mt19937_64 rng = make_stream(config.seed, 0);
  std::gamma_distribution<double> chi_squared(0.5 * static_cast<double>(config.d), 2.0);

  TemperState state;
  TripPhase phase = TripPhase::seeking_hot;  // the walk starts at level 0
  RoundTripStats stats;
  stats.iterations = iterations;
  stats.level_occupancy.assign(betas.size(), 0);
  stats.edge_up_accepts.assign(top, 0);
  stats.edge_down_accepts.assign(top, 0);

  for (std::int64_t it = 0; it < iterations; ++it) {
    state.s = chi_squared(rng) / betas[state.level];

    ++stats.proposals;
    const int delta = config.mode == Mode::reversible ? (uniform01(rng) < 0.5 ? +1 : -1)
                                                      : state.dir;
    const std::int64_t next = static_cast<std::int64_t>(state.level) + delta;
    if (next < 0 || next > static_cast<std::int64_t>(top)) {
      if (lifted) state.dir = -state.dir;  // boundary auto-rejection
    } else {
      const double log_ratio =
          swap_log_ratio(betas[state.level], betas[static_cast<std::size_t>(next)], state.s, config.d);
      if (log_ratio >= 0.0 || uniform01(rng) < std::exp(log_ratio)) {
        if (delta > 0) {
          ++stats.edge_up_accepts[state.level];
        } else {
          ++stats.edge_down_accepts[static_cast<std::size_t>(next)];
        }
        state.level = static_cast<std::size_t>(next);
        ++stats.acceptances;
      } else if (lifted) {
        state.dir = -state.dir;
      }
    }

    ++stats.level_occupancy[state.level];
    if (count_round_trips) {
      if (state.level == top && phase == TripPhase::seeking_hot) {
        phase = TripPhase::seeking_cold;
      } else if (state.level == 0 && phase == TripPhase::seeking_cold) {
        ++stats.round_trips;
        phase = TripPhase::seeking_hot;
        if (lifted) state.dir = +1;  // excursions restart at (0,+)
      }
    }
  }

  stats.rate_per_million =
      static_cast<double>(stats.round_trips) / (static_cast<double>(iterations) / 1e6);
  stats.empirical_acc =
      static_cast<double>(stats.acceptances) / static_cast<double>(stats.proposals);
  return stats;
}

}  // namespace detail

inline RoundTripStats run(const TemperConfig& config) {
  return detail::simulate(config, config.iterations, /*count_round_trips=*/true);
}

// Short calibration run: empirical acceptance only, round-trip counting off.
inline double measure_acceptance(const TemperConfig& config, std::int64_t iterations) {
  return detail::simulate(config, iterations, /*count_round_trips=*/false).empirical_acc;
}

}  // namespace tempermc
