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

#ifndef DEVMONO_TESTS_SUPPORT_ROOT_ORACLE_HPP
#define DEVMONO_TESTS_SUPPORT_ROOT_ORACLE_HPP

#include <functional>

namespace devmono::testsupport {

using Fn = std::function<double(double)>;

// Brute force: 10^6 uniform cells, then bisection inside the chosen cell.
inline double oracle_greatest(const Fn& h, double a, double b) {
  constexpr int n = 1000000;
  if (h(b) == 0.0) return b;
  double lo = a, hi = b;
  for (int k = n - 1; k >= 0; --k) {
    const double x = a + (b - a) * k / n;
    if (h(x) <= 0.0) {
      lo = x;
      hi = a + (b - a) * (k + 1) / n;
      break;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m = 0.5 * (lo + hi);
    (h(m) <= 0.0 ? lo : hi) = m;
  }
  return lo;
}

inline double oracle_least(const Fn& h, double a, double b) {
  constexpr int n = 1000000;
  if (h(a) == 0.0) return a;
  double lo = a, hi = b;
  for (int k = 1; k <= n; ++k) {
    const double x = a + (b - a) * k / n;
    if (h(x) >= 0.0) {
      hi = x;
      lo = a + (b - a) * (k - 1) / n;
      break;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m = 0.5 * (lo + hi);
    (h(m) >= 0.0 ? hi : lo) = m;
  }
  return hi;
}

}  // namespace devmono::testsupport

#endif  // DEVMONO_TESTS_SUPPORT_ROOT_ORACLE_HPP
