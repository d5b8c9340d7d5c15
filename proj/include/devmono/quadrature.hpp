// Copyright 2026 The devmono Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEVMONO_QUADRATURE_HPP
#define DEVMONO_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "devmono/error.hpp"
#include "devmono/trajectory.hpp"

namespace devmono {

namespace detail {

inline std::size_t round_up_even(std::size_t n) { return n + (n % 2); }

template <class F>
double checked_sample(F& f, double t, const char* name) {
  const double v = f(t);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << name << "(" << t << ") is not finite";
    throw EvaluationError(os.str(), t);
  }
  return v;
}

}  // namespace detail

/// Composite Simpson rule with n (even, >= 2) subintervals. Exact for cubics.
template <class F>
double integrate(F&& f, double a, double b, std::size_t n) {
  if (n < 2 || n % 2 != 0)
    throw PreconditionError("Simpson rule needs an even number of subintervals >= 2");
  if (a > b) throw PreconditionError("integrate needs a <= b");
  if (a == b) return 0.0;
  const double h = (b - a) / static_cast<double>(n);
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double t = a + h * static_cast<double>(i);
    (i % 2 ? odd : even) += detail::checked_sample(f, t, "f");
  }
  const double ends = detail::checked_sample(f, a, "f") + detail::checked_sample(f, b, "f");
  return h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
}

/// Left-hand side of a maximum-principle condition, compared against 1.
struct ConditionReport {
  double value = 0.0;
  double threshold = 1.0;
  bool satisfied = true;
  /// value lies within estimated_error of the threshold.
  bool marginal = false;
  std::size_t mesh_size = 0;
  double estimated_error = 0.0;
};

namespace detail {

// Outer Simpson integral of L(t) * exp(int_{lo(t)}^{hi(t)} K) on n cells.
template <class KF, class LF>
double condition_value(KF& K, LF& L, const Deviation& tau, double a, double b,
                       std::size_t n, bool delay) {
  const std::size_t inner = round_up_even(std::max<std::size_t>(16, n / 16));
  auto integrand = [&](double t) {
    const double l = checked_sample(L, t, "L");
    if (l < 0.0) {
      std::ostringstream os;
      os << "L must be nonnegative, but L(" << t << ") = " << l;
      throw PreconditionError(os.str());
    }
    if (l == 0.0) return 0.0;
    const double s = std::clamp(tau(t), a, b);
    const double lo = delay ? std::min(s, t) : t;
    const double hi = delay ? t : std::max(s, t);
    return l * std::exp(integrate(K, lo, hi, inner));
  };
  return integrate(integrand, a, b, n);
}

template <class KF, class LF>
ConditionReport condition_report(KF& K, LF& L, const Deviation& tau, double a,
                                 double b, std::size_t n, bool delay) {
  if (n < 2 || n % 2 != 0)
    throw PreconditionError("condition quadrature needs an even n >= 2");
  ConditionReport r;
  r.mesh_size = n;
  r.value = condition_value(K, L, tau, a, b, n, delay);
  const std::size_t coarse = round_up_even(std::max<std::size_t>(2, n / 2));
  if (coarse < n) {
    const double v2 = condition_value(K, L, tau, a, b, coarse, delay);
    r.estimated_error = std::abs(r.value - v2) / 15.0;
  }
  r.satisfied = r.value <= r.threshold;
  r.marginal = std::abs(r.value - r.threshold) <= r.estimated_error;
  return r;
}

}  // namespace detail

/// int_a^b L(t) exp(int_{tau(t)}^t K) dt, the smallness condition of the
/// maximum principle for delayed problems.
template <class KF, class LF>
ConditionReport delay_condition(KF&& K, LF&& L, const Deviation& tau, double a,
                                double b, std::size_t n) {
  if (tau.kind != DeviationKind::delay)
    throw PreconditionError("delay_condition needs a delay deviation");
  return detail::condition_report(K, L, tau, a, b, n, true);
}

/// int_a^b L(t) exp(int_t^{tau(t)} K) dt, the advanced counterpart.
template <class KF, class LF>
ConditionReport advance_condition(KF&& K, LF&& L, const Deviation& tau, double a,
                                  double b, std::size_t n) {
  if (tau.kind != DeviationKind::advance)
    throw PreconditionError("advance_condition needs an advance deviation");
  return detail::condition_report(K, L, tau, a, b, n, false);
}

/// q = 1 - exp(-||L1 + L2||_1), the Picard contraction constant in the
/// weighted norm.
template <class F1, class F2>
double contraction_constant(F1&& l1, F2&& l2, double a, double b, std::size_t n) {
  auto sum = [&](double t) {
    const double u = detail::checked_sample(l1, t, "L1");
    const double v = detail::checked_sample(l2, t, "L2");
    if (u < 0.0 || v < 0.0) {
      std::ostringstream os;
      os << "Lipschitz weights must be nonnegative at t=" << t;
      throw PreconditionError(os.str());
    }
    return u + v;
  };
  const double norm = integrate(sum, a, b, n);
  return -std::expm1(-norm);
}

}  // namespace devmono

#endif  // DEVMONO_QUADRATURE_HPP
