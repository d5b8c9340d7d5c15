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

#ifndef DEVMONO_CLI_HPP
#define DEVMONO_CLI_HPP

// devmono check | solve | bounds | ivp <file> [options]
//
// Exit codes: 0 success, 1 method or condition failure, 2 input error,
// 3 hypothesis violation detected by the monotone engine.

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "devmono/bounds.hpp"
#include "devmono/error.hpp"
#include "devmono/ivp.hpp"
#include "devmono/monotone.hpp"
#include "devmono/problem_file.hpp"
#include "devmono/trajectory.hpp"

namespace devmono::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, method_failure = 1, input_error = 2, hypothesis_violation = 3 };

struct Options {
  std::string command;
  std::string file;
  std::string csv;
  std::string report;
  std::string gnuplot;
  std::optional<std::size_t> mesh;
  std::optional<double> tol;
  bool force = false;
  bool trace = false;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Short form for the human-readable report.
inline std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline Json defaults_table() {
  return Json{{"mesh_n", Defaults::mesh_n},
              {"tol", Defaults::tol},
              {"max_iter", Defaults::max_iter},
              {"scan_n", Defaults::scan_n},
              {"ivp_tol", Defaults::ivp_tol},
              {"condition_n", Defaults::condition_n},
              {"lipschitz_samples", Defaults::lipschitz_samples},
              {"lipschitz_tol", Defaults::lipschitz_tol}};
}

struct Settings {
  std::size_t mesh_n;
  double tol;
  std::size_t max_iter;
  std::size_t scan_n;
};

inline Settings resolve(const ProblemFile& pf, const Options& opt, bool ivp) {
  Settings s{pf.numerics.mesh_n, pf.numerics.tol, pf.numerics.max_iter, pf.numerics.scan_n};
  if (ivp && !pf.numerics.tol_set) s.tol = Defaults::ivp_tol;
  if (ivp && !pf.numerics.max_iter_set) s.max_iter = 200;
  if (opt.mesh) s.mesh_n = *opt.mesh;
  if (opt.tol) s.tol = *opt.tol;
  return s;
}

inline Json settings_json(const Settings& s) {
  return Json{{"mesh_n", s.mesh_n}, {"tol", s.tol}, {"max_iter", s.max_iter},
              {"scan_n", s.scan_n}};
}

inline Json trace_json(const IterationTrace& t) {
  return Json{{"iterations", t.iterations},
              {"converged", t.converged},
              {"q_used", t.q_used},
              {"error_bound", std::isfinite(t.error_bound) ? Json(t.error_bound) : Json(nullptr)},
              {"deltas", t.weighted_deltas}};
}

inline void print_trace(std::ostream& out, const char* label, const IterationTrace& t) {
  for (std::size_t k = 0; k < t.weighted_deltas.size(); ++k)
    out << "  " << label << " step " << k + 1 << ": " << num(t.weighted_deltas[k]) << "\n";
}

/// One CSV: header row, %.17g, LF line endings.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const Mesh& mesh, const std::vector<const Trajectory*>& columns) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot write CSV");
  f << "t";
  for (const auto& h : header) f << "," << h;
  f << "\n";
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    f << num(mesh[i]);
    for (const Trajectory* c : columns) f << "," << num((*c)[i]);
    f << "\n";
  }
  if (!f) throw InputError(path + ": write failed");
}

inline void write_gnuplot(const std::string& path, const std::string& csv,
                          const std::vector<std::string>& header) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot write gnuplot script");
  f << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set xlabel 't'\n"
    << "plot";
  for (std::size_t k = 0; k < header.size(); ++k)
    f << (k ? ", \\\n    " : " ") << "'" << csv << "' using 1:" << k + 2 << " with lines";
  f << "\n";
}

inline void emit_columns(const Options& opt, const std::vector<std::string>& header,
                         const Mesh& mesh, const std::vector<const Trajectory*>& columns,
                         Json& report) {
  if (!opt.csv.empty()) {
    write_csv(opt.csv, header, mesh, columns);
    report["csv"] = opt.csv;
  }
  if (!opt.gnuplot.empty()) {
    write_gnuplot(opt.gnuplot, opt.csv, header);
    report["gnuplot"] = opt.gnuplot;
  }
}

struct Bounds {
  Trajectory alpha, beta;
};

/// Explicit [bounds] win over a [construct] block.
inline std::optional<Bounds> resolve_bounds(const ProblemFile& pf, const Mesh& mesh,
                                            Json& report, std::ostream& out) {
  if (pf.alpha) {
    report["bounds"] = {{"source", "explicit"},
                        {"alpha", pf.alpha->source()},
                        {"beta", pf.beta->source()}};
    return Bounds{Trajectory::sample(mesh, scalar_function(*pf.alpha)),
                  Trajectory::sample(mesh, scalar_function(*pf.beta))};
  }
  if (!pf.construct) throw InputError(pf.path + ": needs [bounds] or [construct]");
  const BoundsSpec spec = make_bounds_spec(pf);
  try {
    ConstructedBounds c = construct(spec, mesh, Defaults::ivp_tol);
    report["bounds"] = {{"source", "construct"},
                        {"slack_alpha", c.feasibility.slack_alpha},
                        {"slack_beta", c.feasibility.slack_beta}};
    out << "bounds: constructed (slack alpha " << brief(c.feasibility.slack_alpha)
        << ", slack beta " << brief(c.feasibility.slack_beta) << ")\n";
    return Bounds{std::move(c.alpha), std::move(c.beta)};
  } catch (const InfeasibleBounds& e) {
    report["bounds"] = {{"source", "construct"},
                        {"slack_alpha", e.report().slack_alpha},
                        {"slack_beta", e.report().slack_beta},
                        {"error", e.what()}};
    out << "bounds: " << e.what() << "\n";
    return std::nullopt;
  }
}

inline const char* verdict(bool b) { return b ? "ok" : "FAIL"; }

/// The checks shared by `check` and the implicit pre-check of `solve`.
/// Returns true when all of them pass.
inline bool run_checks(const DeviatedProblem& prob, const Mesh& mesh,
                       const Bounds& bounds, const Settings& s, Json& report,
                       std::ostream& out) {
  const ConditionReport& c = prob.condition();
  out << "condition: integral = " << num(c.value) << " (threshold 1, estimated error "
      << brief(c.estimated_error) << (c.marginal ? ", marginal" : "") << "): "
      << verdict(c.satisfied) << "\n";
  report["condition"] = {{"kind", prob.is_delay() ? "delay" : "advance"},
                         {"value", c.value},
                         {"threshold", c.threshold},
                         {"satisfied", c.satisfied},
                         {"marginal", c.marginal},
                         {"estimated_error", c.estimated_error},
                         {"mesh_size", c.mesh_size}};

  const double vtol = ordering_tolerance(bounds.alpha, bounds.beta);
  const SolutionCheck lo = verify_lower(bounds.alpha, prob, vtol);
  const SolutionCheck up = verify_upper(bounds.beta, prob, vtol);
  auto side = [](const SolutionCheck& r) {
    return Json{{"passed", r.passed},
                {"max_defect", r.max_defect},
                {"worst_t", r.worst_t},
                {"boundary_value", r.boundary_value},
                {"differential_ok", r.differential_ok},
                {"boundary_ok", r.boundary_ok}};
  };
  out << "lower solution: " << verdict(lo.passed) << " (max defect " << brief(lo.max_defect)
      << " at t=" << brief(lo.worst_t) << ", B = " << brief(lo.boundary_value) << ")\n";
  out << "upper solution: " << verdict(up.passed) << " (max defect " << brief(up.max_defect)
      << " at t=" << brief(up.worst_t) << ", B = " << brief(up.boundary_value) << ")\n";
  report["lower"] = side(lo);
  report["upper"] = side(up);

  const bool ordered = leq(bounds.alpha, bounds.beta, vtol);
  out << "alpha <= beta: " << verdict(ordered) << "\n";
  report["ordered"] = ordered;

  const LipschitzReport lip = check_one_sided_lipschitz(
      prob, bounds.alpha, bounds.beta, Defaults::lipschitz_samples,
      Defaults::lipschitz_tol * (1.0 + bounds.alpha.sup_norm() + bounds.beta.sup_norm()));
  out << "one-sided Lipschitz (" << lip.samples << " samples): " << verdict(lip.passed)
      << " (max violation " << brief(lip.max_violation) << " at t=" << brief(lip.worst_t)
      << ")\n";
  report["lipschitz"] = {{"passed", lip.passed},
                         {"samples", lip.samples},
                         {"max_violation", lip.max_violation},
                         {"worst_t", lip.worst_t}};

  // Whether G moves the bounds inward. Informational: it does not change the verdict.
  MonotoneOptions mo;
  mo.tol = s.tol;
  mo.scan_n = s.scan_n;
  Json probe;
  try {
    const GResult ga = operator_G(bounds.alpha, prob, bounds.alpha, bounds.beta, mesh, mo);
    const GResult gb = operator_G(bounds.beta, prob, bounds.alpha, bounds.beta, mesh, mo);
    double below = 0.0, above = 0.0, t_below = mesh.a(), t_above = mesh.a();
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      if (bounds.alpha[i] - ga.x[i] > below) {
        below = bounds.alpha[i] - ga.x[i];
        t_below = mesh[i];
      }
      if (gb.x[i] - bounds.beta[i] > above) {
        above = gb.x[i] - bounds.beta[i];
        t_above = mesh[i];
      }
    }
    const double slack = 10.0 * s.tol;
    probe = {{"alpha_le_G_alpha", below <= slack},
             {"alpha_excess", below},
             {"G_beta_le_beta", above <= slack},
             {"beta_excess", above}};
    out << "order probe (informational): alpha <= G alpha: "
        << (below <= slack ? "yes" : "no, by " + brief(below) + " at t=" + brief(t_below))
        << "; G beta <= beta: "
        << (above <= slack ? "yes" : "no, by " + brief(above) + " at t=" + brief(t_above))
        << "\n";
  } catch (const Error& e) {
    probe = {{"error", e.what()}};
    out << "order probe (informational): " << e.what() << "\n";
  }
  report["order_probe"] = probe;

  return c.satisfied && lo.passed && up.passed && ordered && lip.passed;
}

inline void header(const ProblemFile& pf, const Settings& s, std::ostream& out) {
  out << "problem: " << (pf.name.empty() ? pf.path : pf.name) << " ("
      << (pf.kind == DeviationKind::delay ? "delay" : "advance") << ", [" << num(pf.a) << ", "
      << num(pf.b) << "])\n";
  out << "numerics: mesh_n " << s.mesh_n << ", tol " << brief(s.tol) << ", max_iter "
      << s.max_iter << ", scan_n " << s.scan_n << "\n";
}

inline Json base_report(const Options& opt, const ProblemFile& pf, const Settings& s) {
  return Json{{"command", opt.command},
              {"file", opt.file},
              {"name", pf.name},
              {"defaults", defaults_table()},
              {"settings", settings_json(s)}};
}

}  // namespace detail

struct CommandResult {
  int exit_code = ok;
  Json report;
};

inline CommandResult cmd_check(const ProblemFile& pf, const Options& opt, std::ostream& out) {
  const detail::Settings s = detail::resolve(pf, opt, false);
  CommandResult r{ok, detail::base_report(opt, pf, s)};
  detail::header(pf, s, out);
  ProblemOptions po;
  po.force = true;
  po.condition_n = Defaults::condition_n;
  const DeviatedProblem prob = make_problem(pf, po);
  const Mesh mesh = Mesh::uniform(pf.a, pf.b, s.mesh_n);
  const auto bounds = detail::resolve_bounds(pf, mesh, r.report, out);
  bool passed = false;
  if (bounds) passed = detail::run_checks(prob, mesh, *bounds, s, r.report, out);
  r.exit_code = passed ? ok : method_failure;
  r.report["passed"] = passed;
  out << "result: " << (passed ? "PASS" : "FAIL") << "\n";
  return r;
}

inline CommandResult cmd_solve(const ProblemFile& pf, const Options& opt, std::ostream& out) {
  const detail::Settings s = detail::resolve(pf, opt, false);
  CommandResult r{ok, detail::base_report(opt, pf, s)};
  detail::header(pf, s, out);
  ProblemOptions po;
  po.force = true;
  po.condition_n = Defaults::condition_n;
  const DeviatedProblem prob = make_problem(pf, po);
  const Mesh mesh = Mesh::uniform(pf.a, pf.b, s.mesh_n);
  const auto bounds = detail::resolve_bounds(pf, mesh, r.report, out);
  if (!bounds) {
    r.exit_code = method_failure;
    out << "result: FAIL (no bounds)\n";
    return r;
  }
  if (!opt.force) {
    Json checks;
    const bool passed = detail::run_checks(prob, mesh, *bounds, s, checks, out);
    r.report["checks"] = checks;
    if (!passed) {
      r.exit_code = method_failure;
      out << "result: FAIL (checks failed; --force skips them)\n";
      return r;
    }
  } else {
    r.report["checks"] = "skipped (--force)";
  }

  MonotoneOptions mo;
  mo.tol = s.tol;
  mo.max_outer = s.max_iter;
  mo.scan_n = s.scan_n;
  try {
    const SolutionPair sol = extremal_solutions(prob, bounds->alpha, bounds->beta, mesh, mo);
    const double gap = sup_distance(sol.least, sol.greatest);
    out << "least solution: " << sol.least_trace.iterations << " steps, x(a) = "
        << detail::num(sol.least.front()) << ", x(b) = " << detail::num(sol.least.back())
        << "\n";
    out << "greatest solution: " << sol.greatest_trace.iterations << " steps, x(a) = "
        << detail::num(sol.greatest.front()) << ", x(b) = " << detail::num(sol.greatest.back())
        << "\n";
    out << "sup |greatest - least| = " << detail::brief(gap) << "\n";
    out << "boundary residuals: " << detail::brief(sol.boundary_residuals[0]) << ", "
        << detail::brief(sol.boundary_residuals[1]) << "\n";
    out << "differential residuals: " << detail::brief(sol.differential_residuals[0]) << ", "
        << detail::brief(sol.differential_residuals[1]) << "\n";
    out << "inner Picard iterations: " << sol.inner_iterations << ", clipped nodes: "
        << sol.clipped_nodes << "\n";
    if (opt.trace) {
      detail::print_trace(out, "least", sol.least_trace);
      detail::print_trace(out, "greatest", sol.greatest_trace);
    }
    r.report["least"] = detail::trace_json(sol.least_trace);
    r.report["greatest"] = detail::trace_json(sol.greatest_trace);
    r.report["gap"] = gap;
    r.report["boundary_residuals"] = {sol.boundary_residuals[0], sol.boundary_residuals[1]};
    r.report["differential_residuals"] = {sol.differential_residuals[0],
                                          sol.differential_residuals[1]};
    r.report["inner_iterations"] = sol.inner_iterations;
    r.report["clipped_nodes"] = sol.clipped_nodes;
    detail::emit_columns(opt, {"alpha", "beta", "x_least", "x_greatest"}, mesh,
                         {&bounds->alpha, &bounds->beta, &sol.least, &sol.greatest}, r.report);
    out << "result: converged\n";
  } catch (const HypothesisViolation& e) {
    r.exit_code = hypothesis_violation;
    r.report["violation"] = {
        {"message", e.what()}, {"node", e.node()}, {"t", e.t()}, {"amount", e.amount()}};
    out << "result: hypothesis violation: " << e.what() << "\n";
  } catch (const NonConvergence& e) {
    r.exit_code = method_failure;
    r.report["nonconvergence"] = {{"message", e.what()}, {"trace", detail::trace_json(e.trace())}};
    out << "result: " << e.what() << "\n";
  }
  return r;
}

inline CommandResult cmd_bounds(const ProblemFile& pf, const Options& opt, std::ostream& out) {
  const detail::Settings s = detail::resolve(pf, opt, true);
  CommandResult r{ok, detail::base_report(opt, pf, s)};
  detail::header(pf, s, out);
  const BoundsSpec spec = make_bounds_spec(pf);
  const Mesh mesh = Mesh::uniform(pf.a, pf.b, s.mesh_n);
  const Trajectory w = comparison_solution(spec, mesh, s.tol, s.max_iter);
  const FeasibilityReport f = check_feasibility(spec, w);
  out << "comparison solution: w(a) = " << detail::num(w.front())
      << ", w(b) = " << detail::num(w.back()) << "\n";
  out << "phi(w) = " << detail::num(f.phi_w) << ", phi(1) = " << detail::num(f.phi_one) << "\n";
  out << "slack alpha = " << detail::num(f.slack_alpha) << ", slack beta = "
      << detail::num(f.slack_beta) << "\n";
  r.report["feasibility"] = {{"phi_w", f.phi_w},
                             {"phi_one", f.phi_one},
                             {"slack_alpha", f.slack_alpha},
                             {"slack_beta", f.slack_beta},
                             {"passed", f.passed}};
  try {
    const double probe = nagumo_probe(spec.h, 100.0, 20000);
    out << "growth integral of 1/h(u,u) over [0, 100] (advisory): " << detail::brief(probe)
        << "\n";
    r.report["nagumo_probe_100"] = probe;
  } catch (const Error&) {
    r.report["nagumo_probe_100"] = nullptr;
  }
  if (!f.passed) {
    r.exit_code = method_failure;
    out << "result: infeasible\n";
    return r;
  }
  std::vector<double> a(w.size()), b(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    a[i] = -w[i] + spec.n_alpha;
    b[i] = w[i] - spec.n_beta;
  }
  const Trajectory alpha(mesh, std::move(a)), beta(mesh, std::move(b));
  out << "alpha(a) = " << detail::num(alpha.front()) << ", beta(a) = "
      << detail::num(beta.front()) << "\n";
  detail::emit_columns(opt, {"w", "alpha", "beta"}, mesh, {&w, &alpha, &beta}, r.report);
  out << "result: feasible\n";
  return r;
}

inline CommandResult cmd_ivp(const ProblemFile& pf, const Options& opt, std::ostream& out) {
  const detail::Settings s = detail::resolve(pf, opt, true);
  CommandResult r{ok, detail::base_report(opt, pf, s)};
  detail::header(pf, s, out);
  const IvpSpec spec = make_ivp(pf);
  const Mesh mesh = Mesh::uniform(pf.a, pf.b, s.mesh_n);
  try {
    const IvpSolution sol = solve_ivp(spec, mesh, s.tol, s.max_iter);
    out << "x(a) = " << detail::num(sol.x.front()) << ", x(b) = " << detail::num(sol.x.back())
        << "\n";
    out << "Picard iterations: " << sol.trace.iterations << ", q = "
        << detail::brief(sol.trace.q_used) << ", error bound "
        << detail::brief(sol.trace.error_bound) << "\n";
    if (opt.trace) detail::print_trace(out, "picard", sol.trace);
    r.report["trace"] = detail::trace_json(sol.trace);
    r.report["x_a"] = sol.x.front();
    r.report["x_b"] = sol.x.back();
    detail::emit_columns(opt, {"x"}, mesh, {&sol.x}, r.report);
    out << "result: converged\n";
  } catch (const NonConvergence& e) {
    r.exit_code = method_failure;
    r.report["nonconvergence"] = {{"message", e.what()}, {"trace", detail::trace_json(e.trace())}};
    out << "result: " << e.what() << "\n";
  }
  return r;
}

/// Entry point of the devmono binary; argv[0] is the program name.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extremal solutions of deviated-argument boundary value problems"};
  app.name("devmono");
  app.require_subcommand(1);
  Options opt;
  std::size_t mesh = 0;
  double tol = 0.0;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"check", "check the bounds, the smallness condition and the Lipschitz condition"},
      {"solve", "compute the least and greatest solutions between the bounds"},
      {"bounds", "construct a lower and an upper solution from a [construct] block"},
      {"ivp", "solve the initial value problem of the [ivp] section"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("file", opt.file, "problem file")->required();
    sub->add_option("--csv", opt.csv, "write the solution columns as CSV");
    sub->add_option("--report", opt.report, "write a JSON report");
    sub->add_option("--mesh", mesh, "mesh intervals (overrides numerics.mesh_n)")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
    sub->add_option("--tol", tol, "tolerance (overrides numerics.tol)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--force", opt.force, "skip the condition and pre-checks");
    sub->add_flag("--trace", opt.trace, "print every iteration increment");
    sub->add_option("--gnuplot", opt.gnuplot, "write a gnuplot script for the CSV");
    sub->callback([&opt, name = c.name] { opt.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "devmono: " << e.what() << "\n";
    return input_error;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--mesh")) opt.mesh = mesh;
    if (sub->count("--tol")) opt.tol = tol;
  }
  if (!opt.gnuplot.empty() && opt.csv.empty()) {
    err << "devmono: --gnuplot needs --csv\n";
    return input_error;
  }

  CommandResult result;
  try {
    const ProblemFile pf = load_problem(opt.file);
    if (opt.command == "check") result = cmd_check(pf, opt, out);
    else if (opt.command == "solve") result = cmd_solve(pf, opt, out);
    else if (opt.command == "bounds") result = cmd_bounds(pf, opt, out);
    else result = cmd_ivp(pf, opt, out);
  } catch (const InfeasibleBounds& e) {
    err << "devmono: " << e.what() << "\n";
    return method_failure;
  } catch (const NonConvergence& e) {
    err << "devmono: " << e.what() << "\n";
    return method_failure;
  } catch (const HypothesisViolation& e) {
    err << "devmono: " << e.what() << "\n";
    return hypothesis_violation;
  } catch (const Error& e) {
    // Input, domain, precondition and evaluation errors.
    err << "devmono: " << e.what() << "\n";
    return input_error;
  }
  result.report["exit_code"] = result.exit_code;
  if (!opt.report.empty()) {
    std::ofstream f(opt.report, std::ios::binary);
    f << result.report.dump(2) << "\n";
    if (!f) {
      err << "devmono: " << opt.report << ": cannot write report\n";
      return input_error;
    }
  }
  return result.exit_code;
}

}  // namespace devmono::cli

#endif  // DEVMONO_CLI_HPP
