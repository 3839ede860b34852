#pragma once

// Exact (non-Monte-Carlo) round-trip rates for finite ladders.
//
// Per-edge expected acceptances come from adaptive quadrature of
// E[min(1, exp(swap log ratio))] against the chi-squared law of S; the
// integrand's kink at the indifference point is split explicitly, and the
// integration runs in u = sqrt(t) so small-d densities stay smooth.
// Expected cycle lengths come from dense first-passage linear systems on
// the level chain (reversible) or its lifted double cover (non-reversible).
// Boundary conventions match the simulator exactly; the N=1 hand values
// (8 reversible, 7 non-reversible at a=1/2) pin them down.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tempermc/ladder.hpp"
#include "tempermc/scaling.hpp"

namespace tempermc {

struct EdgeAcceptances {
  std::vector<double> up;    // a_k: accept prob of beta_k -> beta_{k+1}
  std::vector<double> down;  // b_k: accept prob of beta_{k+1} -> beta_k

  void validate() const {
    if (up.empty() || up.size() != down.size()) {
      throw std::invalid_argument("EdgeAcceptances: need equal, nonempty up/down sequences");
    }
    for (std::size_t k = 0; k < up.size(); ++k) {
      if (!(up[k] > 0.0 && up[k] <= 1.0) || !(down[k] > 0.0 && down[k] <= 1.0)) {
        throw std::invalid_argument("EdgeAcceptances: entries must lie in (0,1]");
      }
    }
  }

  static EdgeAcceptances uniform(std::size_t n_edges, double a) {
    EdgeAcceptances e{std::vector<double>(n_edges, a), std::vector<double>(n_edges, a)};
    e.validate();
    return e;
  }
};

struct RoundTripRate {
  double expected_cycle_steps = 0.0;
  double rate_per_step = 0.0;
};

namespace detail {

// Adaptive Simpson on [lo,hi] to absolute tolerance tol.
template <typename Fn>
double adaptive_simpson(const Fn& f, double lo, double hi, double f_lo, double f_mid, double f_hi,
                        double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid), mh = 0.5 * (mid + hi);
  const double f_lm = f(lm), f_mh = f(mh);
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_mh + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, lo, mid, f_lo, f_lm, f_mid, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, mid, hi, f_mid, f_mh, f_hi, 0.5 * tol, depth - 1);
}

template <typename Fn>
double integrate(const Fn& f, double lo, double hi, double tol) {
  if (!(hi > lo)) return 0.0;
  const double mid = 0.5 * (lo + hi);
  return adaptive_simpson(f, lo, hi, f(lo), f(mid), f(hi), tol, 48);
}

// Solves E[steps to hit the target set] on an absorbing-complement chain:
// (I - Q) h = 1, where Q is the transition matrix restricted to the kept
// states. Throws if the restricted system is numerically singular.
inline Eigen::VectorXd hitting_times(const Eigen::MatrixXd& restricted) {
  const Eigen::Index n = restricted.rows();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - restricted;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd h = lu.solve(Eigen::VectorXd::Ones(n));
  const double residual = (system * h - Eigen::VectorXd::Ones(n)).norm();
  if (!h.allFinite() || residual > 1e-6 * std::max(1.0, h.norm())) {
    throw std::runtime_error("hitting_times: singular first-passage system");
  }
  return h;
}

}  // namespace detail

// E[min(1, exp(-(beta_to-beta_from) S/2 + (d/2) log(beta_to/beta_from)))]
// with S ~ chi^2_d / beta_from, by adaptive quadrature to abs error 1e-8.
inline double edge_acceptance(double beta_from, double beta_to, int d) {
  if (!(beta_from > 0.0 && beta_from <= 1.0) || !(beta_to > 0.0 && beta_to <= 1.0)) {
    throw std::invalid_argument("edge_acceptance: betas must lie in (0,1]");
  }
  if (beta_from == beta_to) throw std::invalid_argument("edge_acceptance: betas must be distinct");
  if (d < 1) throw std::invalid_argument("edge_acceptance: d must be >= 1");

  // With t = beta_from * S ~ chi^2_d and rho = beta_to/beta_from the log
  // ratio is L(t) = -(rho-1) t/2 + (d/2) log(rho); substituting t = u^2
  // removes the d=1 density singularity. The kink sits at t0 where L = 0.
  const double rho = beta_to / beta_from;
  const double dd = static_cast<double>(d);
  const double t0 = dd * std::log(rho) / (rho - 1.0);
  const double log_norm = std::log(2.0) - 0.5 * dd * std::log(2.0) - std::lgamma(0.5 * dd);

  const auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double t = u * u;
    const double log_weight = log_norm + (dd - 1.0) * std::log(u) - 0.5 * t;
    const double log_ratio = -0.5 * (rho - 1.0) * t + 0.5 * dd * std::log(rho);
    const double log_f = log_weight + std::min(0.0, log_ratio);
    return log_f < -745.0 ? 0.0 : std::exp(log_f);
  };

  const double center = std::sqrt(dd);
  const double lo = std::max(0.0, center - 10.0);
  const double hi = center + 10.0;
  const double kink = std::sqrt(t0);

  constexpr double tol = 1e-8;
  double total = 0.0;
  if (kink > lo && kink < hi) {
    total = detail::integrate(integrand, lo, kink, 0.5 * tol) +
            detail::integrate(integrand, kink, hi, 0.5 * tol);
  } else {
    total = detail::integrate(integrand, lo, hi, tol);
  }
  return std::min(total, 1.0);
}

inline EdgeAcceptances ladder_edge_acceptances(const Ladder& ladder, int d) {
  const std::size_t n_edges = ladder.hottest();
  EdgeAcceptances edges;
  edges.up.resize(n_edges);
  edges.down.resize(n_edges);
  for (std::size_t k = 0; k < n_edges; ++k) {
    edges.up[k] = edge_acceptance(ladder.beta(k), ladder.beta(k + 1), d);
    edges.down[k] = edge_acceptance(ladder.beta(k + 1), ladder.beta(k), d);
  }
  edges.validate();
  return edges;
}

// Long-run proposal acceptance under uniform level occupancy, counting
// boundary auto-rejections as proposals; comparable to the simulator's
// empirical_acc.
inline double mean_proposal_acceptance(const EdgeAcceptances& edges) {
  edges.validate();
  double sum = 0.0;
  for (std::size_t k = 0; k < edges.up.size(); ++k) sum += 0.5 * (edges.up[k] + edges.down[k]);
  return sum / static_cast<double>(edges.up.size() + 1);
}

// Level chain: propose +-1 w.p. 1/2, accept per edges, out-of-range
// proposals auto-rejected (the chain holds). Cycle = E_0[hit N] + E_N[hit 0].
inline RoundTripRate round_trip_rate_reversible(const EdgeAcceptances& edges) {
  edges.validate();
  const std::size_t n_edges = edges.up.size();
  const Eigen::Index levels = static_cast<Eigen::Index>(n_edges) + 1;

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(levels, levels);
  for (Eigen::Index k = 0; k < levels; ++k) {
    const double up = k + 1 < levels ? 0.5 * edges.up[static_cast<std::size_t>(k)] : 0.0;
    const double down = k > 0 ? 0.5 * edges.down[static_cast<std::size_t>(k - 1)] : 0.0;
    if (k + 1 < levels) p(k, k + 1) = up;
    if (k > 0) p(k, k - 1) = down;
    p(k, k) = 1.0 - up - down;
  }

  const auto expected_hit = [&](Eigen::Index target, Eigen::Index start) {
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<std::size_t>(levels) - 1);
    for (Eigen::Index k = 0; k < levels; ++k) {
      if (k != target) keep.push_back(k);
    }
    Eigen::MatrixXd q(levels - 1, levels - 1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      for (std::size_t j = 0; j < keep.size(); ++j) {
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p(keep[i], keep[j]);
      }
    }
    const Eigen::VectorXd h = detail::hitting_times(q);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i] == start) return h(static_cast<Eigen::Index>(i));
    }
    return 0.0;
  };

  const double cycle = expected_hit(levels - 1, 0) + expected_hit(0, levels - 1);
  return RoundTripRate{cycle, 1.0 / cycle};
}

// Lifted chain on (level, dir): move in dir, accept per edges; rejections and
// boundary auto-rejections flip dir. Cycle = E[(0,+) hits N] + 1 + E[(N,-) hits 0]
// (arrival at N is always at (N,+) and the top flip costs one step; completed
// excursions restart at (0,+), matching the simulator).
inline RoundTripRate round_trip_rate_nonreversible(const EdgeAcceptances& edges) {
  edges.validate();
  const std::size_t n_edges = edges.up.size();
  const std::size_t levels = n_edges + 1;
  const Eigen::Index n_states = static_cast<Eigen::Index>(2 * levels);
  const auto sid = [](std::size_t level, int dir) {
    return static_cast<Eigen::Index>(2 * level + (dir > 0 ? 0 : 1));
  };

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_states, n_states);
  for (std::size_t k = 0; k < levels; ++k) {
    if (k + 1 < levels) {
      p(sid(k, +1), sid(k + 1, +1)) = edges.up[k];
      p(sid(k, +1), sid(k, -1)) = 1.0 - edges.up[k];
    } else {
      p(sid(k, +1), sid(k, -1)) = 1.0;
    }
    if (k > 0) {
      p(sid(k, -1), sid(k - 1, -1)) = edges.down[k - 1];
      p(sid(k, -1), sid(k, +1)) = 1.0 - edges.down[k - 1];
    } else {
      p(sid(k, -1), sid(k, +1)) = 1.0;
    }
  }

  const auto expected_hit = [&](std::size_t target_level, Eigen::Index start) {
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<std::size_t>(n_states) - 2);
    for (Eigen::Index s = 0; s < n_states; ++s) {
      if (static_cast<std::size_t>(s / 2) != target_level) keep.push_back(s);
    }
    Eigen::MatrixXd q(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      for (std::size_t j = 0; j < keep.size(); ++j) {
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p(keep[i], keep[j]);
      }
    }
    const Eigen::VectorXd h = detail::hitting_times(q);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i] == start) return h(static_cast<Eigen::Index>(i));
    }
    return 0.0;
  };

  const double ascent = expected_hit(levels - 1, sid(0, +1));
  const double descent = expected_hit(0, sid(levels - 1, -1));
  const double cycle = ascent + 1.0 + descent;
  return RoundTripRate{cycle, 1.0 / cycle};
}

inline RoundTripRate round_trip_rate(Mode mode, const EdgeAcceptances& edges) {
  return mode == Mode::reversible ? round_trip_rate_reversible(edges)
                                  : round_trip_rate_nonreversible(edges);
}

}  // namespace tempermc
