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

#ifndef DEVMONO_IVP_HPP
#define DEVMONO_IVP_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "devmono/error.hpp"
#include "devmono/quadrature.hpp"
#include "devmono/trajectory.hpp"

namespace devmono {

enum class Anchor { start, end };

/// x'(t) = g(t, x(t), x(tau(t))) with x fixed at one end of the interval.
///
/// Anchor::start pairs with a delay deviation (initial value problem),
/// Anchor::end with an advance deviation (final value problem). L1 and L2 are
/// the Lipschitz weights of g in x and y; they set the weighted norm and the
/// contraction constant used to certify the Picard iteration.
struct IvpSpec {
  std::function<double(double, double, double)> g;
  Deviation tau = Deviation::identity();
  double anchor_value = 0.0;
  Anchor anchor = Anchor::start;
  std::function<double(double)> L1 = [](double) { return 0.0; };
  std::function<double(double)> L2 = [](double) { return 0.0; };
};

struct IvpSolution {
  Trajectory x;
  IterationTrace trace;
};

struct IvpOptions {
  double tol = 1e-10;
  std::size_t max_iter = 200;
  /// Starting iterate; the constant anchor value when empty.
  std::optional<std::vector<double>> initial_guess;
};

namespace detail {

inline void check_finite_rhs(double v, double t) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "right-hand side is not finite at t=" << t;
    throw EvaluationError(os.str(), t);
  }
}

/// One application of the Picard operator
///   (Ax)(t_i) = x_a + trapezoid int_a^{t_i} rhs(s, x(s), x(tau(s))) ds
/// with the right-hand side given nodewise as rhs(i, x_i, x(tau(t_i))).
template <class Rhs>
void picard_apply(const Mesh& mesh, const DeviationStencil& stencil, Rhs& rhs,
                  double anchor_value, std::span<const double> x,
                  std::vector<double>& out, std::vector<double>& slope) {
  const std::size_t n = mesh.size();
  slope.resize(n);
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    slope[i] = rhs(i, x[i], stencil.apply(x, i));
    check_finite_rhs(slope[i], mesh[i]);
  }
  out[0] = anchor_value;
  for (std::size_t i = 1; i < n; ++i)
    out[i] = out[i - 1] + 0.5 * (mesh[i] - mesh[i - 1]) * (slope[i - 1] + slope[i]);
}

/// Picard iteration on a start-anchored delay problem given in nodal form.
template <class Rhs>
IvpSolution picard_solve(const Mesh& mesh, const DeviationStencil& stencil, Rhs&& rhs,
                         double anchor_value, const Trajectory& lambda, double q,
                         const IvpOptions& opt) {
  if (!(opt.tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (opt.max_iter < 1) throw PreconditionError("max_iter must be >= 1");
  const std::size_t n = mesh.size();
  std::vector<double> cur = opt.initial_guess ? *opt.initial_guess
                                              : std::vector<double>(n, anchor_value);
  if (cur.size() != n) throw PreconditionError("initial guess has the wrong size");
  std::vector<double> next, slope;
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) weight[i] = std::exp(-lambda[i]);

  IterationTrace trace;
  trace.q_used = q;
  const bool certify = q < 1.0 - 1e-12;
  for (std::size_t k = 0; k < opt.max_iter; ++k) {
    picard_apply(mesh, stencil, rhs, anchor_value, cur, next, slope);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      delta = std::max(delta, weight[i] * std::abs(next[i] - cur[i]));
    trace.weighted_deltas.push_back(delta);
    trace.iterations = k + 1;
    trace.error_bound = certify ? q / (1.0 - q) * delta
                                : std::numeric_limits<double>::infinity();
    cur.swap(next);
    if (delta <= opt.tol && (!certify || trace.error_bound <= opt.tol)) {
      trace.converged = true;
      return {Trajectory(mesh, std::move(cur)), std::move(trace)};
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not converge in " << opt.max_iter
     << " iterations (last increment " << trace.weighted_deltas.back() << ")";
  throw NonConvergence(os.str(), std::move(trace));
}

inline Trajectory sample_weight(const std::function<double(double)>& f,
                                const Mesh& mesh, const char* name) {
  return Trajectory::sample(mesh, [&](double t) {
    const double v = f(t);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << name << "(" << t << ") is not finite";
      throw EvaluationError(os.str(), t);
    }
    if (v < 0.0) {
      std::ostringstream os;
      os << name << " must be nonnegative, but " << name << "(" << t << ") = " << v;
      throw PreconditionError(os.str());
    }
    return v;
  });
}

inline void check_anchor(const IvpSpec& spec) {
  if (spec.anchor == Anchor::start && spec.tau.kind != DeviationKind::delay)
    throw PreconditionError("an initial value problem needs a delay deviation");
  if (spec.anchor == Anchor::end && spec.tau.kind != DeviationKind::advance)
    throw PreconditionError("a final value problem needs an advance deviation");
}

}  // namespace detail

/// The problem for y(s) = x(-s): g^(s, y, z) = -g(-s, y, z), tau^(s) = -tau(-s),
/// weights L(-s), anchor moved to the other end.
inline IvpSpec reversed(const IvpSpec& spec) {
  IvpSpec r;
  r.g = [g = spec.g](double t, double x, double y) { return -g(-t, x, y); };
  r.tau = reversed(spec.tau);
  r.anchor_value = spec.anchor_value;
  r.anchor = spec.anchor == Anchor::start ? Anchor::end : Anchor::start;
  r.L1 = [f = spec.L1](double t) { return f(-t); };
  r.L2 = [f = spec.L2](double t) { return f(-t); };
  return r;
}

/// Unique solution of the deviated IVP/FVP by Picard iteration of
/// (Ax)(t) = x_a + int_a^t g(s, x(s), x(tau(s))) ds in the Bielecki norm.
///
/// Stops once the weighted increment and the a-posteriori bound q/(1-q)*increment
/// are both below tol. Final value problems are solved on the reversed mesh and
/// mirrored back.
inline IvpSolution solve_ivp(const IvpSpec& spec, const Mesh& mesh,
                             const IvpOptions& opt = {}) {
  detail::check_anchor(spec);
  if (spec.anchor == Anchor::end) {
    IvpOptions ropt = opt;
    if (ropt.initial_guess)
      ropt.initial_guess =
          std::vector<double>(opt.initial_guess->rbegin(), opt.initial_guess->rend());
    IvpSolution s = solve_ivp(reversed(spec), reverse_mesh(mesh), ropt);
    return {reverse_time(s.x, mesh), std::move(s.trace)};
  }
  const DeviationStencil stencil(spec.tau, mesh);
  const Trajectory l1 = detail::sample_weight(spec.L1, mesh, "L1");
  const Trajectory l2 = detail::sample_weight(spec.L2, mesh, "L2");
  const Trajectory lambda = lambda_accumulate(l1, l2);
  const double q = contraction_constant(spec.L1, spec.L2, mesh.a(), mesh.b(),
                                        detail::round_up_even(mesh.intervals()));
  auto rhs = [&](std::size_t i, double x, double y) { return spec.g(mesh[i], x, y); };
  return detail::picard_solve(mesh, stencil, rhs, spec.anchor_value, lambda, q, opt);
}

inline IvpSolution solve_ivp(const IvpSpec& spec, const Mesh& mesh, double tol,
                             std::size_t max_iter) {
  IvpOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return solve_ivp(spec, mesh, opt);
}

/// ||A u0 - A v0||_* / ||u0 - v0||_*, an observed Picard contraction ratio.
inline double measure_contraction(const IvpSpec& spec, const Mesh& mesh,
                                  const Trajectory& u0, const Trajectory& v0) {
  detail::check_anchor(spec);
  if (!(u0.mesh() == mesh) || !(v0.mesh() == mesh)) throw MeshMismatch();
  if (spec.anchor == Anchor::end) {
    const Mesh rm = reverse_mesh(mesh);
    return measure_contraction(reversed(spec), rm, reverse_time(u0, rm),
                               reverse_time(v0, rm));
  }
  const DeviationStencil stencil(spec.tau, mesh);
  const Trajectory lambda =
      lambda_accumulate(detail::sample_weight(spec.L1, mesh, "L1"),
                        detail::sample_weight(spec.L2, mesh, "L2"));
  auto rhs = [&](std::size_t i, double x, double y) { return spec.g(mesh[i], x, y); };
  std::vector<double> au, av, slope;
  detail::picard_apply(mesh, stencil, rhs, spec.anchor_value, u0.values(), au, slope);
  detail::picard_apply(mesh, stencil, rhs, spec.anchor_value, v0.values(), av, slope);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double w = std::exp(-lambda[i]);
    num = std::max(num, w * std::abs(au[i] - av[i]));
    den = std::max(den, w * std::abs(u0[i] - v0[i]));
  }
  if (den == 0.0) throw PreconditionError("measure_contraction needs u0 != v0");
  return num / den;
}

struct ResidualReport {
  double max_residual = 0.0;
  /// Residual on every mesh cell, evaluated at the cell midpoint.
  std::vector<double> samples;
};

/// max over cells of |dx/dt - g(mid, x(mid), x(tau(mid)))|.
inline ResidualReport residual(const Trajectory& x, const IvpSpec& spec) {
  const Mesh& mesh = x.mesh();
  ResidualReport r;
  r.samples.resize(mesh.intervals());
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double h = mesh[i + 1] - mesh[i];
    const double mid = mesh[i] + 0.5 * h;
    const double slope = (x[i + 1] - x[i]) / h;
    const double g = spec.g(mid, x(mid), x.clamped(spec.tau(mid)));
    detail::check_finite_rhs(g, mid);
    r.samples[i] = std::abs(slope - g);
    r.max_residual = std::max(r.max_residual, r.samples[i]);
  }
  return r;
}

}  // namespace devmono

#endif  // DEVMONO_IVP_HPP
