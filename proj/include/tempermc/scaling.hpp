#pragma once

// Optimal-scaling theory for tempering moves accepted with asymptotic
// probability 2*Phi(-c*l/2).
//
// Reversible dynamics (propose +-1 with prob 1/2): A(l) = B(l) = Phi(-c*l/2),
// so v(l) = 2*A(l) = acc(l) and eff(l) = l^2 * acc(l).
// Non-reversible (momentum) dynamics: A(l) = 2*Phi(-c*l/2), B = 0, so
// v(l) = A/(1-A) and eff(l) = l^2 * acc(l)/(1-acc(l)).
// Everything reduces to one-dimensional curves in s = c*l/2; the optimum
// constants are re-derived numerically, never hard-coded.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "tempermc/normal.hpp"

namespace tempermc {

enum class Mode { reversible, nonreversible };

inline const char* mode_name(Mode m) {
  return m == Mode::reversible ? "reversible" : "nonreversible";
}

struct ScalingProblem {
  double c = 1.0;
  Mode mode = Mode::reversible;
};

struct OptimalScaling {
  double ell_opt = 0.0;
  double acc_opt = 0.0;
  double eff_opt = 0.0;
};

struct EfficiencyPoint {
  double ell = 0.0;
  double acc = 0.0;
  double eff = 0.0;
};

inline void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be > 0");
}

// acc(l) = 2*Phi(-c*l/2).
inline double acceptance_rate(double ell, double c) {
  require_positive(ell, "acceptance_rate: ell");
  require_positive(c, "acceptance_rate: c");
  return 2.0 * normal_cdf(-0.5 * c * ell);
}

inline double efficiency(Mode mode, double ell, double c) {
  require_positive(ell, "efficiency: ell");
  require_positive(c, "efficiency: c");
  const double acc = 2.0 * normal_cdf(-0.5 * c * ell);
  if (mode == Mode::reversible) return ell * ell * acc;
  return ell * ell * acc / (1.0 - acc);
}

// Theorem-style curves as functions of the acceptance rate a:
// reversible   a * (4/c^2) * [Phi^-1(a/2)]^2
// nonreversible [a/(1-a)] * (4/c^2) * [Phi^-1(a/2)]^2
inline double efficiency_from_acceptance(Mode mode, double a, double c) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("efficiency_from_acceptance: a must lie in (0,1)");
  }
  require_positive(c, "efficiency_from_acceptance: c");
  const double q = normal_quantile(0.5 * a);
  const double base = a * (4.0 / (c * c)) * q * q;
  if (mode == Mode::reversible) return base;
  return base / (1.0 - a);
}

// One point of a problem's efficiency curve.
inline EfficiencyPoint efficiency_point(const ScalingProblem& problem, double ell) {
  return EfficiencyPoint{ell, acceptance_rate(ell, problem.c),
                         efficiency(problem.mode, ell, problem.c)};
}

// Non-reversible : reversible efficiency ratio at equal acceptance.
inline double efficiency_ratio_at_acceptance(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("efficiency_ratio_at_acceptance: a must lie in (0,1)");
  }
  return 1.0 / (1.0 - a);
}

namespace detail {

// Brent maximization (golden section with parabolic refinement) on [lo,hi].
// tol is the absolute x-tolerance at which the bracket stops shrinking.
template <typename Fn>
double brent_maximize(Fn&& f, double lo, double hi, double tol, int max_iter = 200) {
  constexpr double golden = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + golden * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-300;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // Parabola through x, v, w.
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
    const double fu = f(u);
    if (fu >= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu >= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu >= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

}  // namespace detail

// Maximizes efficiency(mode, ., c) over ell in (1e-6, 20)/c. Both s-curves
// peak near s = 1, so the bracket is generous; tolerance 1e-8 in s = c*l/2.
inline OptimalScaling optimize(Mode mode, double c) {
  require_positive(c, "optimize: c");
  const auto s_curve = [mode](double s) {
    const double phi = normal_cdf(-s);
    const double val = s * s * phi;
    return mode == Mode::reversible ? 2.0 * val : 2.0 * val / (1.0 - 2.0 * phi);
  };
  const double s_lo = 0.5e-6, s_hi = 10.0;
  const double s_opt = detail::brent_maximize(s_curve, s_lo, s_hi, 1e-8);
  const double ell = 2.0 * s_opt / c;
  return OptimalScaling{ell, acceptance_rate(ell, c), efficiency(mode, ell, c)};
}

// Generic maximizer for user-supplied acceptance profiles A(l):
// reversible form  l^2 * A(l),  non-reversible form  l^2 * A(l)/(1-A(l)).
// A coarse 1024-point scan guards against non-unimodal objectives before
// the Brent search runs (relative tolerance 1e-8).
inline OptimalScaling maximize_generic(const std::function<double(double)>& accept_fn, Mode mode,
                                       double ell_lo, double ell_hi) {
  if (!(ell_lo > 0.0) || !(ell_hi > ell_lo)) {
    throw std::invalid_argument("maximize_generic: need 0 < ell_lo < ell_hi");
  }
  const auto objective = [&](double ell) {
    const double a = accept_fn(ell);
    if (!(a > 0.0 && a < 1.0)) {
      throw std::invalid_argument("maximize_generic: accept_fn must map the bracket into (0,1)");
    }
    return mode == Mode::reversible ? ell * ell * a : ell * ell * a / (1.0 - a);
  };

  constexpr int scan_points = 1024;
  double prev = objective(ell_lo);
  int sign_changes = 0;
  int last_sign = 0;
  for (int i = 1; i < scan_points; ++i) {
    const double ell = ell_lo + (ell_hi - ell_lo) * static_cast<double>(i) /
                                    static_cast<double>(scan_points - 1);
    const double cur = objective(ell);
    const double grad = cur - prev;
    const int sign = (grad > 0.0) - (grad < 0.0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++sign_changes;
      last_sign = sign;
    }
    prev = cur;
  }
  if (sign_changes > 1) {
    throw std::runtime_error("maximize_generic: objective is not unimodal on the bracket");
  }

  const double ell = detail::brent_maximize(objective, ell_lo, ell_hi, 1e-8);
  return OptimalScaling{ell, accept_fn(ell), objective(ell)};
}

}  // namespace tempermc
