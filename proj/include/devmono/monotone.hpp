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

#ifndef DEVMONO_MONOTONE_HPP
#define DEVMONO_MONOTONE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "devmono/error.hpp"
#include "devmono/ivp.hpp"
#include "devmono/quadrature.hpp"
#include "devmono/rootfind.hpp"
#include "devmono/trajectory.hpp"

namespace devmono {

/// f(t, x(t), x(tau(t)), x): right-hand side with access to the whole trajectory.
using RhsFunctional =
    std::function<double(double t, double x, double y, const Trajectory& gamma)>;
/// B(v, x): boundary functional; v stands for x(c).
using BoundaryFunctional = std::function<double(double v, const Trajectory& gamma)>;
using ScalarFunction = std::function<double(double)>;

struct ProblemOptions {
  /// Accept the problem even if the maximum-principle condition fails.
  bool force = false;
  /// Simpson subintervals for the condition check and the tau range check.
  std::size_t condition_n = 1024;
};

/// x'(t) = f(t, x(t), x(tau(t)), x) a.e. on [a, b], B(x(c), x) = 0, together
/// with the one-sided Lipschitz weights K, L of f.
///
/// c = a for delay deviations and c = b for advance deviations. Construction
/// checks L >= 0, tau's range and kind, and the applicable maximum-principle
/// condition (refused unless ProblemOptions::force is set).
class DeviatedProblem {
 public:
  DeviatedProblem(double a, double b, Deviation tau, RhsFunctional f,
                  BoundaryFunctional B, ScalarFunction K, ScalarFunction L,
                  ProblemOptions opt = {})
      : a_(a), b_(b), tau_(std::move(tau)), f_(std::move(f)), B_(std::move(B)),
        K_(std::move(K)), L_(std::move(L)), forced_(opt.force) {
    if (!(a_ < b_)) throw PreconditionError("problem interval needs a < b");
    if (!f_ || !B_ || !K_ || !L_ || !tau_.map)
      throw PreconditionError("problem is missing a callable");
    const std::size_t n = detail::round_up_even(std::max<std::size_t>(2, opt.condition_n));
    validate(tau_, Mesh::uniform(a_, b_, n));
    condition_ = tau_.kind == DeviationKind::delay
                     ? delay_condition(K_, L_, tau_, a_, b_, n)
                     : advance_condition(K_, L_, tau_, a_, b_, n);
    if (!condition_.satisfied && !opt.force) {
      std::ostringstream os;
      os << "maximum-principle condition fails: integral = " << condition_.value
         << " > 1";
      throw PreconditionError(os.str());
    }
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  /// Anchor point c of the boundary condition.
  double anchor() const noexcept { return is_delay() ? a_ : b_; }
  bool is_delay() const noexcept { return tau_.kind == DeviationKind::delay; }
  const Deviation& tau() const noexcept { return tau_; }
  const RhsFunctional& f() const noexcept { return f_; }
  const BoundaryFunctional& B() const noexcept { return B_; }
  const ScalarFunction& K() const noexcept { return K_; }
  const ScalarFunction& L() const noexcept { return L_; }
  const ConditionReport& condition() const noexcept { return condition_; }
  bool forced() const noexcept { return forced_; }

  /// The problem satisfied by y(s) = x(-s) on [-b, -a]:
  /// f~(s, x, y, g) = -f(-s, x, y, reverse(g)), tau^(s) = -tau(-s),
  /// B~(v, g) = B(v, reverse(g)), K~(s) = K(-s), L~(s) = L(-s).
  /// Delay problems become advance problems and vice versa; the condition value
  /// is invariant.
  DeviatedProblem reversed() const {
    DeviatedProblem r(*this);
    r.a_ = -b_;
    r.b_ = -a_;
    r.tau_ = devmono::reversed(tau_);
    auto mirror = std::make_shared<MirrorCache>();
    r.f_ = [f = f_, mirror](double t, double x, double y, const Trajectory& g) {
      return -f(-t, x, y, *mirror->get(g));
    };
    r.B_ = [B = B_, mirror](double v, const Trajectory& g) {
      return B(v, *mirror->get(g));
    };
    r.K_ = [K = K_](double t) { return K(-t); };
    r.L_ = [L = L_](double t) { return L(-t); };
    return r;
  }

 private:
  // f and B of a reversed problem are called many times with the same
  // trajectory; remember its mirror image.
  class MirrorCache {
   public:
    std::shared_ptr<const Trajectory> get(const Trajectory& g) {
      std::lock_guard lock(mutex_);
      if (!last_ || !same(g)) {
        key_.assign(g.values().begin(), g.values().end());
        key_mesh_.assign(g.mesh().points().begin(), g.mesh().points().end());
        last_ = std::make_shared<const Trajectory>(reverse_time(g));
      }
      return last_;
    }

   private:
    bool same(const Trajectory& g) const {
      return std::equal(key_.begin(), key_.end(), g.values().begin(), g.values().end()) &&
             std::equal(key_mesh_.begin(), key_mesh_.end(), g.mesh().points().begin(),
                        g.mesh().points().end());
    }
    std::mutex mutex_;
    std::vector<double> key_, key_mesh_;
    std::shared_ptr<const Trajectory> last_;
  };

  double a_, b_;
  Deviation tau_;
  RhsFunctional f_;
  BoundaryFunctional B_;
  ScalarFunction K_, L_;
  ConditionReport condition_;
  bool forced_ = false;
};

struct MonotoneOptions {
  /// Outer stopping tolerance on the sup-norm increment.
  double tol = 1e-8;
  std::size_t max_outer = 500;
  std::size_t scan_n = 4096;
  /// Root tolerance; <= 0 selects 1e-12 * (1 + |lo| + |hi|).
  double root_tol = 0.0;
  /// Inner Picard tolerance; <= 0 selects 1e-2 * tol.
  double inner_tol = 0.0;
  std::size_t inner_max_iter = 200;
  /// Keep every iterate of both chains in the result.
  bool record_chains = false;
};

/// G xi together with the anchor value x_xi and the inner solve evidence.
struct GResult {
  Trajectory x;
  double anchor_value;
  IterationTrace inner;
};

struct SolutionPair {
  Trajectory least;
  Trajectory greatest;
  /// Outer traces: weighted_deltas holds the sup-norm increments of each chain.
  IterationTrace least_trace;
  IterationTrace greatest_trace;
  /// |B(x(c), x)| for least and greatest.
  double boundary_residuals[2] = {0.0, 0.0};
  /// max over cells of |dx/dt - f(mid, ...)| for least and greatest.
  double differential_residuals[2] = {0.0, 0.0};
  std::size_t inner_iterations = 0;
  std::size_t clipped_nodes = 0;
  std::vector<Trajectory> least_chain;
  std::vector<Trajectory> greatest_chain;
};

namespace detail {

inline double clip_threshold(const Trajectory& alpha, const Trajectory& beta,
                             double tol) {
  const double scale = 1.0 + alpha.sup_norm() + beta.sup_norm();
  return std::max(100.0 * std::numeric_limits<double>::epsilon() * scale, 10.0 * tol);
}

inline void check_on_mesh(const Trajectory& x, const Mesh& mesh, const char* name) {
  if (!(x.mesh() == mesh)) {
    std::ostringstream os;
    os << name << " is not defined on the problem mesh";
    throw PreconditionError(os.str());
  }
}

/// Operator G and the two monotone chains for a delay problem on a fixed mesh.
class DelayEngine {
 public:
  /// mirrored: the problem is the time reversal of the caller's, so nodes and
  /// times in diagnostics are mapped back.
  DelayEngine(const DeviatedProblem& prob, const Mesh& mesh, const Trajectory& alpha,
              const Trajectory& beta, const MonotoneOptions& opt, bool mirrored = false)
      : prob_(prob), mesh_(mesh), alpha_(alpha), beta_(beta), opt_(opt), mirrored_(mirrored),
        stencil_(prob.tau(), mesh),
        lambda_(Trajectory::constant(mesh, 0.0)) {
    if (!prob.is_delay()) throw PreconditionError("DelayEngine needs a delay problem");
    if (mesh.a() != prob.a() || mesh.b() != prob.b())
      throw PreconditionError("mesh does not span the problem interval");
    check_on_mesh(alpha, mesh, "alpha");
    check_on_mesh(beta, mesh, "beta");
    const std::size_t n = mesh.size();
    k_.resize(n);
    l_.resize(n);
    std::vector<double> abs_k(n);
    for (std::size_t i = 0; i < n; ++i) {
      k_[i] = prob.K()(mesh[i]);
      l_[i] = prob.L()(mesh[i]);
      if (!std::isfinite(k_[i]) || !std::isfinite(l_[i]))
        throw EvaluationError("K or L is not finite", mesh[i]);
      if (l_[i] < 0.0) throw PreconditionError("L must be nonnegative");
      abs_k[i] = std::abs(k_[i]);
    }
    lambda_ = lambda_accumulate(Trajectory(mesh, abs_k), Trajectory(mesh, l_));
    auto abs_K = [K = prob.K()](double t) { return std::abs(K(t)); };
    q_ = contraction_constant(abs_K, prob.L(), mesh.a(), mesh.b(),
                              round_up_even(mesh.intervals()));
    threshold_ = clip_threshold(alpha, beta, opt.tol);
  }

  double threshold() const noexcept { return threshold_; }

  GResult apply(const Trajectory& xi) const {
    check_on_mesh(xi, mesh_, "xi");
    const std::size_t n = mesh_.size();
    auto target = [&](double v) { return prob_.B()(v, xi); };
    const double lo = alpha_[0], hi = beta_[0];
    const double h_lo = target(lo), h_hi = target(hi);
    if (!(h_lo <= 0.0)) {
      std::ostringstream os;
      os << "B(alpha(c), xi) = " << h_lo << " > 0";
      throw violation(os.str(), 0, h_lo);
    }
    if (!(h_hi >= 0.0)) {
      std::ostringstream os;
      os << "B(beta(c), xi) = " << h_hi << " < 0";
      throw violation(os.str(), 0, -h_hi);
    }
    const double rtol = opt_.root_tol > 0.0 ? opt_.root_tol : default_root_tol(lo, hi);
    const double x0 = greatest_zero(target, lo, hi, opt_.scan_n, rtol);

    std::vector<double> forcing(n), xi_dev(n);
    for (std::size_t i = 0; i < n; ++i) {
      xi_dev[i] = stencil_.apply(xi.values(), i);
      forcing[i] = prob_.f()(mesh_[i], xi[i], xi_dev[i], xi);
      if (!std::isfinite(forcing[i])) {
        std::ostringstream os;
        os << "f is not finite at t=" << mesh_[i];
        throw EvaluationError(os.str(), mesh_[i]);
      }
    }
    auto rhs = [&](std::size_t i, double x, double y) {
      return forcing[i] - k_[i] * (x - xi[i]) - l_[i] * (y - xi_dev[i]);
    };
    IvpOptions io;
    io.tol = opt_.inner_tol > 0.0 ? opt_.inner_tol : 1e-2 * opt_.tol;
    io.max_iter = opt_.inner_max_iter;
    io.initial_guess = std::vector<double>(xi.values().begin(), xi.values().end());
    IvpSolution s = picard_solve(mesh_, stencil_, rhs, x0, lambda_, q_, io);
    return {std::move(s.x), x0, std::move(s.trace)};
  }

  struct Chain {
    Trajectory limit;
    IterationTrace trace;
    std::size_t inner_iterations = 0;
    std::size_t clipped = 0;
    std::vector<Trajectory> iterates;
  };

  /// Iterates x_{k+1} = G x_k from alpha (upward) or beta (downward).
  Chain run_chain(bool upward) const {
    Chain c{upward ? alpha_ : beta_, {}, 0, 0, {}};
    c.trace.q_used = q_;
    if (opt_.record_chains) c.iterates.push_back(c.limit);
    const std::size_t n = mesh_.size();
    for (std::size_t k = 0; k < opt_.max_outer; ++k) {
      GResult g = apply(c.limit);
      c.inner_iterations += g.inner.iterations;
      std::vector<double> next(g.x.values().begin(), g.x.values().end());
      double incr = 0.0, worst = 0.0;
      std::size_t worst_node = 0;
      int worst_kind = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double prev = c.limit[i];
        // Order the chain must keep: prev <= next (upward), next <= prev (downward),
        // and alpha <= next <= beta.
        const double excess[3] = {upward ? prev - next[i] : next[i] - prev,
                                  next[i] - beta_[i], alpha_[i] - next[i]};
        for (int kind = 0; kind < 3; ++kind)
          if (excess[kind] > worst) {
            worst = excess[kind];
            worst_node = i;
            worst_kind = kind;
          }
        double clipped = next[i];
        if (upward) clipped = std::max(clipped, prev);
        else clipped = std::min(clipped, prev);
        clipped = std::clamp(clipped, alpha_[i], beta_[i]);
        if (clipped != next[i]) ++c.clipped;
        next[i] = clipped;
        incr = std::max(incr, std::abs(next[i] - prev));
      }
      if (worst > threshold_) {
        static const char* const what[3] = {nullptr, "iterate exceeds beta",
                                            "iterate falls below alpha"};
        std::ostringstream os;
        os << (upward ? "lower" : "upper") << " chain step " << k + 1 << ": "
           << (worst_kind == 0 ? (upward != mirrored_ ? "iterate decreased" : "iterate increased")
                               : what[worst_kind])
           << " by " << worst << " at t=" << user_t(worst_node)
           << " (G does not preserve the order; check lower/upper solutions and "
              "hypotheses)";
        throw violation(os.str(), worst_node, worst);
      }
      c.limit = Trajectory(mesh_, std::move(next));
      if (opt_.record_chains) c.iterates.push_back(c.limit);
      c.trace.weighted_deltas.push_back(incr);
      c.trace.iterations = k + 1;
      c.trace.error_bound = incr;
      if (incr <= opt_.tol) {
        c.trace.converged = true;
        return c;
      }
    }
    std::ostringstream os;
    os << (upward ? "lower" : "upper") << " monotone chain did not converge in "
       << opt_.max_outer << " steps (last increment "
       << c.trace.weighted_deltas.back() << ")";
    throw NonConvergence(os.str(), c.trace);
  }

 private:
  double user_t(std::size_t node) const { return mirrored_ ? -mesh_[node] : mesh_[node]; }

  HypothesisViolation violation(const std::string& what, std::size_t node,
                                double amount) const {
    const std::size_t user_node = mirrored_ ? mesh_.size() - 1 - node : node;
    return HypothesisViolation(what, user_node, user_t(node), amount);
  }

  const DeviatedProblem& prob_;
  Mesh mesh_;
  Trajectory alpha_, beta_;
  MonotoneOptions opt_;
  bool mirrored_ = false;
  DeviationStencil stencil_;
  Trajectory lambda_;
  std::vector<double> k_, l_;
  double q_ = 0.0;
  double threshold_ = 0.0;
};

}  // namespace detail

/// max over cells of |dx/dt - f(mid, x(mid), x(tau(mid)), x)|.
inline double differential_residual(const Trajectory& x, const DeviatedProblem& prob) {
  const Mesh& mesh = x.mesh();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double h = mesh[i + 1] - mesh[i];
    const double mid = mesh[i] + 0.5 * h;
    const double fv = prob.f()(mid, x(mid), x.clamped(prob.tau()(mid)), x);
    if (!std::isfinite(fv)) throw EvaluationError("f is not finite", mid);
    worst = std::max(worst, std::abs((x[i + 1] - x[i]) / h - fv));
  }
  return worst;
}

/// |B(x(c), x)|.
inline double boundary_residual(const Trajectory& x, const DeviatedProblem& prob) {
  const double v = prob.is_delay() ? x.front() : x.back();
  return std::abs(prob.B()(v, x));
}

/// G xi: the solution of the linear deviated problem
///   x' = f(t, xi, xi(tau), xi) - K (x - xi) - L (x(tau) - xi(tau)),  x(a) = x_xi
/// (delay case; the advance case is its time reversal, i.e. +K, +L and x(b) = x_xi)
/// where x_xi is the greatest zero of v -> B(v, xi) on [alpha(c), beta(c)].
inline GResult operator_G(const Trajectory& xi, const DeviatedProblem& prob,
                          const Trajectory& alpha, const Trajectory& beta,
                          const Mesh& mesh, const MonotoneOptions& opt = {}) {
  if (prob.is_delay()) {
    detail::DelayEngine engine(prob, mesh, alpha, beta, opt);
    return engine.apply(xi);
  }
  const DeviatedProblem rp = prob.reversed();
  const Mesh rm = reverse_mesh(mesh);
  detail::DelayEngine engine(rp, rm, reverse_time(alpha, rm), reverse_time(beta, rm),
                             opt, true);
  GResult r = engine.apply(reverse_time(xi, rm));
  return {reverse_time(r.x, mesh), r.anchor_value, std::move(r.inner)};
}

/// Least and greatest solutions in [alpha, beta] as limits of the monotone
/// chains alpha_{k+1} = G alpha_k (nondecreasing) and beta_{k+1} = G beta_k
/// (nonincreasing).
///
/// Every step is checked against the order the theory guarantees. Deviations
/// up to max(100 eps scale, 10 tol) are clipped; larger ones raise
/// HypothesisViolation naming the node.
inline SolutionPair extremal_solutions(const DeviatedProblem& prob,
                                       const Trajectory& alpha,
                                       const Trajectory& beta, const Mesh& mesh,
                                       const MonotoneOptions& opt = {}) {
  detail::check_on_mesh(alpha, mesh, "alpha");
  detail::check_on_mesh(beta, mesh, "beta");
  if (!leq(alpha, beta, detail::clip_threshold(alpha, beta, opt.tol)))
    throw PreconditionError("extremal_solutions needs alpha <= beta");

  const bool delay = prob.is_delay();
  const DeviatedProblem rp = delay ? prob : prob.reversed();
  const Mesh work_mesh = delay ? mesh : reverse_mesh(mesh);
  auto to_work = [&](const Trajectory& x) {
    return delay ? x : reverse_time(x, work_mesh);
  };
  auto from_work = [&](const Trajectory& x) {
    return delay ? x : reverse_time(x, mesh);
  };

  detail::DelayEngine engine(rp, work_mesh, to_work(alpha), to_work(beta), opt, !delay);
  auto lower = engine.run_chain(true);
  auto upper = engine.run_chain(false);

  SolutionPair out{from_work(lower.limit), from_work(upper.limit),
                   std::move(lower.trace), std::move(upper.trace), {0.0, 0.0}, {0.0, 0.0},
                   0, 0, {}, {}};
  if (!leq(out.least, out.greatest, engine.threshold())) {
    double worst = 0.0;
    std::size_t node = 0;
    for (std::size_t i = 0; i < mesh.size(); ++i)
      if (out.least[i] - out.greatest[i] > worst) {
        worst = out.least[i] - out.greatest[i];
        node = i;
      }
    throw HypothesisViolation("least limit exceeds greatest limit", node, mesh[node],
                              worst);
  }
  out.boundary_residuals[0] = boundary_residual(out.least, prob);
  out.boundary_residuals[1] = boundary_residual(out.greatest, prob);
  out.differential_residuals[0] = differential_residual(out.least, prob);
  out.differential_residuals[1] = differential_residual(out.greatest, prob);
  out.inner_iterations = lower.inner_iterations + upper.inner_iterations;
  out.clipped_nodes = lower.clipped + upper.clipped;
  if (opt.record_chains) {
    for (auto& x : lower.iterates) out.least_chain.push_back(from_work(x));
    for (auto& x : upper.iterates) out.greatest_chain.push_back(from_work(x));
  }
  return out;
}

/// Outcome of checking the lower- or upper-solution inequalities.
struct SolutionCheck {
  /// Largest signed defect of the differential inequality over cell midpoints
  /// (positive = violated).
  double max_defect = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  /// B(x(c), x).
  double boundary_value = 0.0;
  bool differential_ok = false;
  bool boundary_ok = false;
  bool passed = false;
};

namespace detail {

inline SolutionCheck check_solution_side(const Trajectory& x, const DeviatedProblem& prob,
                                         double tol, bool lower) {
  const Mesh& mesh = x.mesh();
  if (mesh.a() != prob.a() || mesh.b() != prob.b())
    throw PreconditionError("trajectory does not span the problem interval");
  SolutionCheck r;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double h = mesh[i + 1] - mesh[i];
    const double mid = mesh[i] + 0.5 * h;
    const double fv = prob.f()(mid, x(mid), x.clamped(prob.tau()(mid)), x);
    if (!std::isfinite(fv)) {
      std::ostringstream os;
      os << "f is not finite at t=" << mid;
      throw EvaluationError(os.str(), mid);
    }
    const double slope = (x[i + 1] - x[i]) / h;
    const double defect = lower ? slope - fv : fv - slope;
    if (defect > r.max_defect) {
      r.max_defect = defect;
      r.worst_t = mid;
    }
  }
  r.boundary_value = prob.B()(prob.is_delay() ? x.front() : x.back(), x);
  r.differential_ok = r.max_defect <= tol;
  r.boundary_ok = lower ? r.boundary_value <= tol : r.boundary_value >= -tol;
  r.passed = r.differential_ok && r.boundary_ok;
  return r;
}

}  // namespace detail

/// alpha' <= f(t, alpha, alpha(tau), alpha) at every cell midpoint and
/// B(alpha(c), alpha) <= 0, both up to tol.
inline SolutionCheck verify_lower(const Trajectory& alpha, const DeviatedProblem& prob,
                                  double tol) {
  return detail::check_solution_side(alpha, prob, tol, true);
}

/// beta' >= f(t, beta, beta(tau), beta) and B(beta(c), beta) >= 0, up to tol.
inline SolutionCheck verify_upper(const Trajectory& beta, const DeviatedProblem& prob,
                                  double tol) {
  return detail::check_solution_side(beta, prob, tol, false);
}

/// Worst violation of the one-sided Lipschitz condition over random ordered
/// samples. A sampling check, not a proof.
struct LipschitzReport {
  double max_violation = -std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  std::size_t samples = 0;
  DeviationKind form = DeviationKind::delay;
  bool passed = false;
};

/// Draws ordered tuples t; x <= x~ in [alpha(t), beta(t)]; y <= y~ in
/// [alpha(tau(t)), beta(tau(t))]; gamma <= gamma~ piecewise linear in
/// [alpha, beta] and measures
///   delay:   f(x, y, gamma) - f(x~, y~, gamma~) - K (x~ - x) - L (y~ - y)
///   advance: -K (x~ - x) - L (y~ - y) - (f(x, y, gamma) - f(x~, y~, gamma~)).
inline LipschitzReport check_one_sided_lipschitz(const DeviatedProblem& prob,
                                                 const Trajectory& alpha,
                                                 const Trajectory& beta,
                                                 std::size_t samples, double tol,
                                                 std::uint64_t seed = 20240101) {
  require_same_mesh(alpha, beta);
  const Mesh& mesh = alpha.mesh();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr std::size_t knots = 9;

  auto ordered = [&](double lo, double hi) {
    double u = lo + unit(rng) * (hi - lo);
    double v = lo + unit(rng) * (hi - lo);
    if (u > v) std::swap(u, v);
    return std::pair{u, v};
  };

  LipschitzReport r;
  r.samples = samples;
  r.form = prob.tau().kind;
  std::vector<double> g1(mesh.size()), g2(mesh.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = prob.a() + unit(rng) * (prob.b() - prob.a());
    const double tt = std::clamp(prob.tau()(t), prob.a(), prob.b());
    const auto [x, xb] = ordered(alpha(t), beta(t));
    const auto [y, yb] = ordered(alpha(tt), beta(tt));
    double th1[knots], th2[knots];
    for (std::size_t j = 0; j < knots; ++j) {
      auto [u, v] = ordered(0.0, 1.0);
      th1[j] = u;
      th2[j] = v;
    }
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      const double pos = (mesh[i] - mesh.a()) / (mesh.b() - mesh.a()) * (knots - 1);
      const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(pos), knots - 2);
      const double w = pos - static_cast<double>(j);
      const double u1 = th1[j] + w * (th1[j + 1] - th1[j]);
      const double u2 = std::max(u1, th2[j] + w * (th2[j + 1] - th2[j]));
      const double width = beta[i] - alpha[i];
      g1[i] = alpha[i] + u1 * width;
      g2[i] = alpha[i] + u2 * width;
    }
    const Trajectory gamma(mesh, g1), gamma_bar(mesh, g2);
    const double diff = prob.f()(t, x, y, gamma) - prob.f()(t, xb, yb, gamma_bar);
    const double bound = prob.K()(t) * (xb - x) + prob.L()(t) * (yb - y);
    const double violation = prob.is_delay() ? diff - bound : -bound - diff;
    if (violation > r.max_violation) {
      r.max_violation = violation;
      r.worst_t = t;
    }
  }
  r.passed = samples == 0 || r.max_violation <= tol;
  return r;
}

}  // namespace devmono

#endif  // DEVMONO_MONOTONE_HPP
