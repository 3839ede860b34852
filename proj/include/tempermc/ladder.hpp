#pragma once

// Inverse-temperature ladders for simulated tempering on the product
// Gaussian target, and the exact-K swap acceptance ratio.
//
// For a geometric ladder beta_k = r^k the swap log-ratio depends on the
// betas only through the ratio r, so every edge of the ladder has the
// same acceptance distribution. The spacing is tied to the asymptotic
// acceptance law 2*Phi(-u/(2*sqrt(2))) through r = 1 - u/sqrt(d).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tempermc/normal.hpp"

namespace tempermc {

class Ladder {
 public:
  // Strictly decreasing, first entry exactly 1, all entries in (0,1].
  explicit Ladder(std::vector<double> betas) : betas_(std::move(betas)) {
    if (betas_.size() < 2) throw std::invalid_argument("Ladder: need at least 2 levels");
    if (betas_.front() != 1.0) throw std::invalid_argument("Ladder: beta_0 must be exactly 1");
    for (std::size_t k = 0; k + 1 < betas_.size(); ++k) {
      if (!(betas_[k + 1] < betas_[k])) {
        throw std::invalid_argument("Ladder: betas must be strictly decreasing");
      }
    }
    if (!(betas_.back() > 0.0)) throw std::invalid_argument("Ladder: betas must stay positive");
  }

  const std::vector<double>& betas() const { return betas_; }
  double beta(std::size_t k) const { return betas_[k]; }
  std::size_t levels() const { return betas_.size(); }          // N + 1
  std::size_t hottest() const { return betas_.size() - 1; }     // N

 private:
  std::vector<double> betas_;
};

// Spacing parameter u with asymptotic adjacent-swap acceptance
// 2*Phi(-u/(2*sqrt(2))) = target_acc.
inline double spacing_parameter(double target_acc) {
  if (!(target_acc > 0.0 && target_acc < 1.0)) {
    throw std::invalid_argument("spacing_parameter: target_acc must lie in (0,1)");
  }
  return -2.0 * std::sqrt(2.0) * normal_quantile(0.5 * target_acc);
}

inline double asymptotic_edge_acceptance(double u) {
  return 2.0 * normal_cdf(-u / (2.0 * std::sqrt(2.0)));
}

// Per-dimension problem constant of the Gaussian target at inverse
// temperature beta: c(beta) = 1/(beta*sqrt(2)).
inline double gaussian_problem_constant(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("gaussian_problem_constant: beta must be > 0");
  return 1.0 / (beta * std::sqrt(2.0));
}

// Geometric ladder from 1 down to beta_min whose ratio approximates the
// asymptotic-acceptance spacing r = 1 - u/sqrt(d). The level count is
// N = ceil(ln beta_min / ln r), and the ratio is snapped to
// beta_min^(1/N) so that every ratio is identical and the last level is
// exactly beta_min; the snapped ladder is never coarser than the target
// spacing.
inline Ladder build_ladder(double beta_min, double target_acc, int d) {
  if (!(beta_min > 0.0 && beta_min < 1.0)) {
    throw std::invalid_argument("build_ladder: beta_min must lie in (0,1)");
  }
  if (d < 1) throw std::invalid_argument("build_ladder: d must be >= 1");
  const double u = spacing_parameter(target_acc);
  const double r_raw = 1.0 - u / std::sqrt(static_cast<double>(d));
  if (r_raw >= 1.0 - 1e-12) {
    throw std::invalid_argument("build_ladder: target_acc too close to 1, ladder would not terminate");
  }
  if (!(r_raw > 0.0)) {
    throw std::invalid_argument("build_ladder: spacing exceeds the temperature range at this d");
  }
  const double n_raw = std::log(beta_min) / std::log(r_raw);
  const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(n_raw - 1e-9)));
  if (n > 1'000'000) throw std::invalid_argument("build_ladder: ladder would exceed 1e6 levels");
  const double r = std::exp(std::log(beta_min) / static_cast<double>(n));
  std::vector<double> betas(static_cast<std::size_t>(n) + 1);
  betas[0] = 1.0;
  for (std::int64_t k = 1; k < n; ++k) betas[static_cast<std::size_t>(k)] = std::pow(r, static_cast<double>(k));
  betas.back() = beta_min;
  return Ladder(std::move(betas));
}

// Log of the simulated-tempering acceptance ratio for moving the inverse
// temperature from beta_from to beta_to at fixed squared norm s, for the
// d-dimensional standard normal product target with exact normalizing
// constants:  -(beta_to - beta_from) * s / 2 + (d/2) * log(beta_to/beta_from).
inline double swap_log_ratio(double beta_from, double beta_to, double s, int d) {
  if (!(beta_from > 0.0 && beta_from <= 1.0) || !(beta_to > 0.0 && beta_to <= 1.0)) {
    throw std::invalid_argument("swap_log_ratio: betas must lie in (0,1]");
  }
  if (!(s > 0.0)) throw std::invalid_argument("swap_log_ratio: s must be > 0");
  if (d < 1) throw std::invalid_argument("swap_log_ratio: d must be >= 1");
  return -0.5 * (beta_to - beta_from) * s +
         0.5 * static_cast<double>(d) * std::log(beta_to / beta_from);
}

}  // namespace tempermc
