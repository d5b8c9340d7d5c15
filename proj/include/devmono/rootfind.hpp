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

#ifndef DEVMONO_ROOTFIND_HPP
#define DEVMONO_ROOTFIND_HPP

#include <cmath>
#include <cstddef>
#include <sstream>

#include "devmono/error.hpp"

namespace devmono {

/// Bracket with h(lo) <= 0 <= h(hi).
struct ZeroBracket {
  double lo = 0.0;
  double hi = 0.0;
  double h_lo = 0.0;
  double h_hi = 0.0;
  std::size_t refinements = 0;
};

inline double default_root_tol(double a, double b) {
  return 1e-12 * (1.0 + std::abs(a) + std::abs(b));
}

namespace detail {

template <class H>
double root_sample(H& h, double x) {
  const double v = h(x);
  if (std::isnan(v)) {
    std::ostringstream os;
    os << "root target is NaN at " << x;
    throw EvaluationError(os.str(), x);
  }
  return v;
}

template <class H>
void check_sign_configuration(H& h, double a, double b, double& ha, double& hb) {
  if (a > b) throw PreconditionError("root bracket needs a <= b");
  ha = root_sample(h, a);
  hb = root_sample(h, b);
  if (!(ha <= 0.0 && hb >= 0.0)) {
    std::ostringstream os;
    os << "root bracket needs h(a) <= 0 <= h(b), got h(" << a << ") = " << ha
       << ", h(" << b << ") = " << hb;
    throw PreconditionError(os.str());
  }
}

inline double scan_point(double a, double b, std::size_t k, std::size_t n) {
  if (k == n) return b;
  return a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
}

}  // namespace detail

/// Bracket of width <= tol around c2 = sup{x in [a, b] : h(x) <= 0}.
///
/// h may jump (downward jumps only, as allowed by the Bolzano-type condition
/// liminf_{z->x-} h(z) >= h(x) >= limsup_{z->x+} h(z)). A uniform scan of
/// scan_n cells from b leftward finds the last cell where h goes from <= 0 to
/// > 0, and bisection refines inside it keeping h(lo) <= 0 < h(hi). Sign changes
/// narrower than one scan cell can be missed.
template <class H>
ZeroBracket bracket_greatest_zero(H&& h, double a, double b, std::size_t scan_n,
                                  double tol) {
  double ha, hb;
  detail::check_sign_configuration(h, a, b, ha, hb);
  if (hb == 0.0 || a == b) return {b, b, hb, hb, 0};
  if (scan_n < 1) throw PreconditionError("scan_n must be >= 1");

  ZeroBracket br{a, b, ha, hb, 0};
  double right = b, h_right = hb;
  for (std::size_t k = scan_n; k-- > 0;) {
    const double x = detail::scan_point(a, b, k, scan_n);
    const double hx = k == 0 ? ha : detail::root_sample(h, x);
    if (hx <= 0.0) {
      br = {x, right, hx, h_right, 0};
      break;
    }
    right = x;
    h_right = hx;
  }
  while (br.hi - br.lo > tol) {
    const double mid = br.lo + 0.5 * (br.hi - br.lo);
    if (mid <= br.lo || mid >= br.hi) break;
    const double hm = detail::root_sample(h, mid);
    if (hm <= 0.0) {
      br.lo = mid;
      br.h_lo = hm;
    } else {
      br.hi = mid;
      br.h_hi = hm;
    }
    ++br.refinements;
  }
  return br;
}

/// Mirror image: bracket around c1 = inf{x in [a, b] : h(x) >= 0}, keeping
/// h(lo) < 0 <= h(hi).
template <class H>
ZeroBracket bracket_least_zero(H&& h, double a, double b, std::size_t scan_n,
                               double tol) {
  double ha, hb;
  detail::check_sign_configuration(h, a, b, ha, hb);
  if (ha == 0.0 || a == b) return {a, a, ha, ha, 0};
  if (scan_n < 1) throw PreconditionError("scan_n must be >= 1");

  ZeroBracket br{a, b, ha, hb, 0};
  double left = a, h_left = ha;
  for (std::size_t k = 1; k <= scan_n; ++k) {
    const double x = detail::scan_point(a, b, k, scan_n);
    const double hx = k == scan_n ? hb : detail::root_sample(h, x);
    if (hx >= 0.0) {
      br = {left, x, h_left, hx, 0};
      break;
    }
    left = x;
    h_left = hx;
  }
  while (br.hi - br.lo > tol) {
    const double mid = br.lo + 0.5 * (br.hi - br.lo);
    if (mid <= br.lo || mid >= br.hi) break;
    const double hm = detail::root_sample(h, mid);
    if (hm >= 0.0) {
      br.hi = mid;
      br.h_hi = hm;
    } else {
      br.lo = mid;
      br.h_lo = hm;
    }
    ++br.refinements;
  }
  return br;
}

/// Greatest zero of h on [a, b] (up to scan resolution and tol).
template <class H>
double greatest_zero(H&& h, double a, double b, std::size_t scan_n = 4096,
                     double tol = -1.0) {
  if (tol < 0.0) tol = default_root_tol(a, b);
  return bracket_greatest_zero(h, a, b, scan_n, tol).lo;
}

/// Least zero of h on [a, b] (up to scan resolution and tol).
template <class H>
double least_zero(H&& h, double a, double b, std::size_t scan_n = 4096,
                  double tol = -1.0) {
  if (tol < 0.0) tol = default_root_tol(a, b);
  return bracket_least_zero(h, a, b, scan_n, tol).hi;
}

}  // namespace devmono

#endif  // DEVMONO_ROOTFIND_HPP
