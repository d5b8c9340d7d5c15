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

#ifndef DEVMONO_BOUNDS_HPP
#define DEVMONO_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "devmono/error.hpp"
#include "devmono/ivp.hpp"
#include "devmono/quadrature.hpp"
#include "devmono/trajectory.hpp"

namespace devmono {

/// Data of the lower/upper solution construction for problems with
/// |f(t, x, y, g)| <= p(t) h(|x|, |y|) and B(x(c), x) = x(c) - phi(x).
struct BoundsSpec {
  std::function<double(double)> p;
  /// Nonnegative, nondecreasing in both arguments.
  std::function<double(double, double)> h;
  /// Nondecreasing linear functional.
  std::function<double(const Trajectory&)> phi;
  double m = 0.0;
  double n_alpha = 0.0;
  double n_beta = 0.0;
  DeviationKind side = DeviationKind::delay;
  /// Lipschitz constant of u -> h(u, u); only feeds the Picard certificate.
  double h_lipschitz = 0.0;
};

struct FeasibilityReport {
  double phi_w = 0.0;
  double phi_one = 0.0;
  /// m - phi(w) - n_i (1 - phi(1)) for i = alpha, beta.
  double slack_alpha = 0.0;
  double slack_beta = 0.0;
  bool passed = false;
};

struct ConstructedBounds {
  Trajectory w;
  Trajectory alpha;
  Trajectory beta;
  FeasibilityReport feasibility;
};

/// Thrown by construct() when the slack inequality fails.
class InfeasibleBounds : public Error {
 public:
  InfeasibleBounds(const std::string& what, FeasibilityReport r)
      : Error(what), report_(r) {}
  const FeasibilityReport& report() const noexcept { return report_; }

 private:
  FeasibilityReport report_;
};

namespace detail {

inline void check_bounds_spec(const BoundsSpec& s) {
  if (!s.p || !s.h || !s.phi) throw PreconditionError("bounds spec is missing a callable");
  if (!(s.m >= 0.0 && s.n_alpha >= 0.0 && s.n_beta >= 0.0))
    throw PreconditionError("m, n_alpha and n_beta must be nonnegative");
  if (s.n_alpha > s.m || s.n_beta > s.m)
    throw PreconditionError("n_alpha and n_beta must not exceed m");
}

}  // namespace detail

/// w' = p(t) h(w, w), w(a) = m for the delay side. For the advance side
/// w' = -p(t) h(w, w), w(b) = m, so w >= m on the whole interval either way.
inline Trajectory comparison_solution(const BoundsSpec& spec, const Mesh& mesh,
                                      double tol = 1e-10, std::size_t max_iter = 200) {
  detail::check_bounds_spec(spec);
  const bool delay = spec.side == DeviationKind::delay;
  const double sign = delay ? 1.0 : -1.0;
  IvpSpec ivp;
  ivp.g = [&spec, sign](double t, double x, double) {
    const double p = spec.p(t);
    if (p < 0.0) {
      std::ostringstream os;
      os << "p must be nonnegative, but p(" << t << ") = " << p;
      throw PreconditionError(os.str());
    }
    return sign * p * spec.h(x, x);
  };
  ivp.tau = Deviation::identity(spec.side);
  ivp.anchor = delay ? Anchor::start : Anchor::end;
  ivp.anchor_value = spec.m;
  ivp.L1 = [&spec](double t) { return std::max(0.0, spec.p(t)) * spec.h_lipschitz; };
  return solve_ivp(ivp, mesh, tol, max_iter).x;
}

/// Slack of m - phi(w) >= n_i (1 - phi(1)) for both bounds.
inline FeasibilityReport check_feasibility(const BoundsSpec& spec, const Trajectory& w) {
  detail::check_bounds_spec(spec);
  FeasibilityReport r;
  r.phi_w = spec.phi(w);
  r.phi_one = spec.phi(Trajectory::constant(w.mesh(), 1.0));
  r.slack_alpha = spec.m - r.phi_w - spec.n_alpha * (1.0 - r.phi_one);
  r.slack_beta = spec.m - r.phi_w - spec.n_beta * (1.0 - r.phi_one);
  r.passed = r.slack_alpha >= 0.0 && r.slack_beta >= 0.0;
  return r;
}

/// alpha = -w + n_alpha and beta = w - n_beta.
inline ConstructedBounds construct(const BoundsSpec& spec, const Mesh& mesh,
                                   double tol = 1e-10) {
  Trajectory w = comparison_solution(spec, mesh, tol);
  FeasibilityReport rep = check_feasibility(spec, w);
  if (!rep.passed) {
    std::ostringstream os;
    os << "bounds are infeasible: slack_alpha = " << rep.slack_alpha
       << ", slack_beta = " << rep.slack_beta;
    throw InfeasibleBounds(os.str(), rep);
  }
  std::vector<double> a(w.size()), b(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    a[i] = -w[i] + spec.n_alpha;
    b[i] = w[i] - spec.n_beta;
  }
  return {std::move(w), Trajectory(mesh, std::move(a)), Trajectory(mesh, std::move(b)),
          rep};
}

/// int_0^U du / h(u, u) by Simpson. Growth of this value with U hints that the
/// improper integral diverges; it certifies nothing.
template <class H>
double nagumo_probe(H&& h, double U, std::size_t n) {
  if (!(U > 0.0)) throw PreconditionError("nagumo_probe needs U > 0");
  auto inv = [&](double u) {
    const double d = h(u, u);
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "h(u, u) must be positive, but h(" << u << ", " << u << ") = " << d;
      throw PreconditionError(os.str());
    }
    return 1.0 / d;
  };
  return integrate(inv, 0.0, U, n);
}

/// Sampled evidence that phi is linear and nondecreasing.
struct FunctionalCheck {
  double max_additivity_error = 0.0;
  double max_monotonicity_violation = 0.0;
  std::size_t samples = 0;
  bool passed = false;
};

inline FunctionalCheck check_linear_functional(
    const std::function<double(const Trajectory&)>& phi, const Mesh& mesh,
    std::size_t samples, double tol = 1e-9, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  auto random_traj = [&](bool nonnegative) {
    const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng), k = coef(rng);
    return Trajectory::sample(mesh, [&](double t) {
      const double v = c0 + c1 * t + c2 * std::sin(3.0 * k * t);
      return nonnegative ? std::abs(v) : v;
    });
  };
  FunctionalCheck r;
  r.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Trajectory x = random_traj(false), y = random_traj(false);
    std::vector<double> sum(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) sum[i] = x[i] + y[i];
    const double lhs = phi(Trajectory(mesh, sum));
    const double rhs = phi(x) + phi(y);
    const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
    r.max_additivity_error = std::max(r.max_additivity_error, std::abs(lhs - rhs) / scale);

    const Trajectory d = random_traj(true);
    std::vector<double> up(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) up[i] = x[i] + d[i];
    const double drop = phi(x) - phi(Trajectory(mesh, up));
    r.max_monotonicity_violation = std::max(r.max_monotonicity_violation, drop);
  }
  r.passed = r.max_additivity_error <= tol && r.max_monotonicity_violation <= tol;
  return r;
}

/// Sampled check that h is nondecreasing in both arguments on [0, U]^2.
inline bool check_growth_monotone(const std::function<double(double, double)>& h,
                                  double U, std::size_t grid) {
  for (std::size_t i = 0; i <= grid; ++i) {
    const double u = U * static_cast<double>(i) / static_cast<double>(grid);
    for (std::size_t j = 0; j <= grid; ++j) {
      const double v = U * static_cast<double>(j) / static_cast<double>(grid);
      const double here = h(u, v);
      if (i < grid && h(U * static_cast<double>(i + 1) / static_cast<double>(grid), v) < here)
        return false;
      if (j < grid && h(u, U * static_cast<double>(j + 1) / static_cast<double>(grid)) < here)
        return false;
    }
  }
  return true;
}

}  // namespace devmono

#endif  // DEVMONO_BOUNDS_HPP
