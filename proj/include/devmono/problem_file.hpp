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

#ifndef DEVMONO_PROBLEM_FILE_HPP
#define DEVMONO_PROBLEM_FILE_HPP

// Problem files: `[section]` headers, `key = value` lines, `#` comments.
// Expressions are parsed by the dsl module in the context of their key.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "devmono/bounds.hpp"
#include "devmono/dsl.hpp"
#include "devmono/error.hpp"
#include "devmono/ivp.hpp"
#include "devmono/monotone.hpp"
#include "devmono/trajectory.hpp"

namespace devmono {

/// Malformed, incomplete or unreadable problem file.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Every default in one place; echoed into each report.
struct Defaults {
  static constexpr std::size_t mesh_n = 1024;
  static constexpr double tol = 1e-8;
  static constexpr std::size_t max_iter = 500;
  static constexpr std::size_t scan_n = 4096;
  static constexpr double ivp_tol = 1e-10;
  static constexpr std::size_t condition_n = 1024;
  static constexpr std::size_t lipschitz_samples = 2000;
  static constexpr double lipschitz_tol = 1e-9;
};

struct Numerics {
  std::size_t mesh_n = Defaults::mesh_n;
  double tol = Defaults::tol;
  std::size_t max_iter = Defaults::max_iter;
  std::size_t scan_n = Defaults::scan_n;
  /// Which values came from the file rather than Defaults.
  bool tol_set = false;
  bool max_iter_set = false;
};

struct ConstructBlock {
  dsl::Expr p, h, phi;
  double m = 0.0, n_alpha = 0.0, n_beta = 0.0, h_lipschitz = 0.0;
};

struct IvpBlock {
  dsl::Expr g, L1, L2;
  double value = 0.0;
  Anchor anchor = Anchor::start;
};

struct ProblemFile {
  std::string path;
  std::string name;
  double a = 0.0, b = 1.0;
  DeviationKind kind = DeviationKind::delay;
  dsl::Expr tau;
  std::optional<dsl::Expr> f, B, K, L, alpha, beta;
  std::optional<ConstructBlock> construct;
  std::optional<IvpBlock> ivp;
  Numerics numerics;
};

namespace detail {

struct RawValue {
  std::string text;
  int line = 0;
};
using RawSection = std::map<std::string, RawValue>;

struct KeySpec {
  const char* key;
  // Expression context, or nullopt for a plain value.
  std::optional<dsl::Context> context;
};

struct SectionSpec {
  const char* name;
  std::initializer_list<KeySpec> keys;
};

inline const SectionSpec kSections[] = {
    {"meta", {{"name", std::nullopt}}},
    {"interval", {{"a", std::nullopt}, {"b", std::nullopt}}},
    {"deviation", {{"kind", std::nullopt}, {"tau", dsl::Context::deviation}}},
    {"rhs", {{"f", dsl::Context::rhs}}},
    {"boundary", {{"B", dsl::Context::boundary}, {"anchor", std::nullopt}}},
    {"weights", {{"K", dsl::Context::scalar_of_t}, {"L", dsl::Context::scalar_of_t}}},
    {"bounds", {{"alpha", dsl::Context::bound_fn}, {"beta", dsl::Context::bound_fn}}},
    {"construct",
     {{"p", dsl::Context::scalar_of_t}, {"h", dsl::Context::growth},
      {"phi", dsl::Context::functional}, {"m", std::nullopt}, {"n_alpha", std::nullopt},
      {"n_beta", std::nullopt}, {"h_lipschitz", std::nullopt}}},
    {"numerics",
     {{"mesh_n", std::nullopt}, {"tol", std::nullopt}, {"max_iter", std::nullopt},
      {"scan_n", std::nullopt}}},
    {"ivp",
     {{"g", dsl::Context::ivp_rhs}, {"x0", std::nullopt}, {"anchor", std::nullopt},
      {"L1", dsl::Context::scalar_of_t}, {"L2", dsl::Context::scalar_of_t}}},
};

inline const SectionSpec* find_section(const std::string& name) {
  for (const auto& s : kSections)
    if (name == s.name) return &s;
  return nullptr;
}

inline const KeySpec* find_key(const SectionSpec& s, const std::string& key) {
  for (const auto& k : s.keys)
    if (key == k.key) return &k;
  return nullptr;
}

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] inline void input_error(const std::string& path, int line,
                                     const std::string& why) {
  std::ostringstream os;
  os << path;
  if (line > 0) os << ":" << line;
  os << ": " << why;
  throw InputError(os.str());
}

class Reader {
 public:
  Reader(std::map<std::string, RawSection> raw, std::string path)
      : raw_(std::move(raw)), path_(std::move(path)) {}

  bool has(const char* section) const { return raw_.count(section) > 0; }

  const RawValue* find(const char* section, const char* key) const {
    auto s = raw_.find(section);
    if (s == raw_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  const RawValue& need(const char* section, const char* key) const {
    const RawValue* v = find(section, key);
    if (!v) input_error(path_, 0, std::string("missing ") + key + " in [" + section + "]");
    return *v;
  }

  dsl::Expr expr(const char* section, const char* key, dsl::Context ctx) const {
    return parse_expr(need(section, key), key, ctx);
  }

  dsl::Expr expr_or(const char* section, const char* key, dsl::Context ctx,
                    const char* fallback) const {
    const RawValue* v = find(section, key);
    return v ? parse_expr(*v, key, ctx) : dsl::parse(fallback, ctx);
  }

  std::optional<dsl::Expr> optional_expr(const char* section, const char* key,
                                         dsl::Context ctx) const {
    const RawValue* v = find(section, key);
    if (!v) return std::nullopt;
    return parse_expr(*v, key, ctx);
  }

  double number(const RawValue& v, const char* key) const {
    const char* s = v.text.c_str();
    char* end = nullptr;
    errno = 0;
    const double d = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE || !std::isfinite(d))
      input_error(path_, v.line, std::string(key) + " must be a finite number, got '" +
                                     v.text + "'");
    return d;
  }

  double number(const char* section, const char* key) const {
    return number(need(section, key), key);
  }

  double number_or(const char* section, const char* key, double fallback) const {
    const RawValue* v = find(section, key);
    return v ? number(*v, key) : fallback;
  }

  std::size_t count(const char* section, const char* key, std::size_t fallback,
                    std::size_t min) const {
    const RawValue* v = find(section, key);
    if (!v) return fallback;
    const double d = number(*v, key);
    if (d != std::floor(d) || d < static_cast<double>(min) || d > 1e9)
      input_error(path_, v->line, std::string(key) + " must be an integer >= " +
                                      std::to_string(min) + ", got '" + v->text + "'");
    return static_cast<std::size_t>(d);
  }

  [[noreturn]] void fail(const RawValue& v, const std::string& why) const {
    input_error(path_, v.line, why);
  }

 private:
  dsl::Expr parse_expr(const RawValue& v, const char* key, dsl::Context ctx) const {
    try {
      return dsl::parse(v.text, ctx);
    } catch (const ParseError& e) {
      input_error(path_, v.line, std::string(key) + ": " + e.what());
    }
  }

  std::map<std::string, RawSection> raw_;
  std::string path_;
};

}  // namespace detail

/// Reads a problem file. Structural problems, unknown names and expressions
/// that do not parse in their context raise InputError.
inline ProblemFile parse_problem(std::istream& in, const std::string& path) {
  std::map<std::string, detail::RawSection> raw;
  const detail::SectionSpec* current = nullptr;
  std::string current_name;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') detail::input_error(path, number, "unterminated section header");
      current_name = detail::trim(line.substr(1, line.size() - 2));
      current = detail::find_section(current_name);
      if (!current) detail::input_error(path, number, "unknown section [" + current_name + "]");
      if (raw.count(current_name))
        detail::input_error(path, number, "section [" + current_name + "] repeated");
      raw[current_name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      detail::input_error(path, number, "expected 'key = value' or '[section]'");
    if (!current) detail::input_error(path, number, "key outside of any section");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!detail::find_key(*current, key))
      detail::input_error(path, number, "unknown key '" + key + "' in [" + current_name + "]");
    if (value.empty()) detail::input_error(path, number, "empty value for " + key);
    auto& sec = raw[current_name];
    if (sec.count(key)) detail::input_error(path, number, "key '" + key + "' repeated");
    sec[key] = {value, number};
  }

  const detail::Reader r(std::move(raw), path);
  ProblemFile pf{path, "", 0.0, 1.0, DeviationKind::delay, dsl::parse("t", dsl::Context::deviation),
                 {}, {}, {}, {}, {}, {}, {}, {}, {}};
  if (const auto* v = r.find("meta", "name")) pf.name = v->text;

  pf.a = r.number("interval", "a");
  pf.b = r.number("interval", "b");
  if (!(pf.a < pf.b)) r.fail(r.need("interval", "b"), "interval needs a < b");

  if (const auto* k = r.find("deviation", "kind")) {
    if (k->text == "delay") pf.kind = DeviationKind::delay;
    else if (k->text == "advance") pf.kind = DeviationKind::advance;
    else r.fail(*k, "deviation kind must be 'delay' or 'advance'");
  }
  pf.tau = r.expr_or("deviation", "tau", dsl::Context::deviation, "t");

  pf.f = r.optional_expr("rhs", "f", dsl::Context::rhs);
  pf.B = r.optional_expr("boundary", "B", dsl::Context::boundary);
  if (const auto* anchor = r.find("boundary", "anchor")) {
    const char* expected = pf.kind == DeviationKind::delay ? "a" : "b";
    if (anchor->text != "a" && anchor->text != "b")
      r.fail(*anchor, "boundary anchor must be 'a' or 'b'");
    if (anchor->text != expected)
      r.fail(*anchor, std::string("a ") +
                          (pf.kind == DeviationKind::delay ? "delay" : "advance") +
                          " problem is anchored at " + expected);
  }
  pf.K = r.expr_or("weights", "K", dsl::Context::scalar_of_t, "0");
  pf.L = r.expr_or("weights", "L", dsl::Context::scalar_of_t, "0");
  pf.alpha = r.optional_expr("bounds", "alpha", dsl::Context::bound_fn);
  pf.beta = r.optional_expr("bounds", "beta", dsl::Context::bound_fn);
  if (pf.alpha.has_value() != pf.beta.has_value())
    detail::input_error(path, 0, "[bounds] needs both alpha and beta");

  if (r.has("construct")) {
    ConstructBlock c{r.expr("construct", "p", dsl::Context::scalar_of_t),
                     r.expr("construct", "h", dsl::Context::growth),
                     r.expr("construct", "phi", dsl::Context::functional)};
    c.m = r.number("construct", "m");
    c.n_alpha = r.number_or("construct", "n_alpha", 0.0);
    c.n_beta = r.number_or("construct", "n_beta", 0.0);
    c.h_lipschitz = r.number_or("construct", "h_lipschitz", 0.0);
    pf.construct = std::move(c);
  }

  if (r.has("ivp")) {
    IvpBlock b{r.expr("ivp", "g", dsl::Context::ivp_rhs),
               r.expr_or("ivp", "L1", dsl::Context::scalar_of_t, "0"),
               r.expr_or("ivp", "L2", dsl::Context::scalar_of_t, "0")};
    b.value = r.number("ivp", "x0");
    if (const auto* anchor = r.find("ivp", "anchor")) {
      if (anchor->text == "start") b.anchor = Anchor::start;
      else if (anchor->text == "end") b.anchor = Anchor::end;
      else r.fail(*anchor, "ivp anchor must be 'start' or 'end'");
    }
    pf.ivp = std::move(b);
  }

  auto& n = pf.numerics;
  n.mesh_n = r.count("numerics", "mesh_n", Defaults::mesh_n, 2);
  n.max_iter = r.count("numerics", "max_iter", Defaults::max_iter, 1);
  n.max_iter_set = r.find("numerics", "max_iter") != nullptr;
  n.scan_n = r.count("numerics", "scan_n", Defaults::scan_n, 1);
  if (const auto* t = r.find("numerics", "tol")) {
    n.tol = r.number(*t, "tol");
    n.tol_set = true;
    if (!(n.tol > 0.0)) r.fail(*t, "tol must be positive");
  }
  return pf;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::input_error(path, 0, "cannot open file");
  return parse_problem(in, path);
}

// Callables built from parsed expressions. Each captures its tree by
// shared_ptr so copies stay cheap.

inline std::function<double(double)> scalar_function(const dsl::Expr& e) {
  auto p = std::make_shared<const dsl::Expr>(e);
  return [p](double t) {
    dsl::Env env;
    env.t = t;
    return dsl::eval(*p, env);
  };
}

inline Deviation make_deviation(const ProblemFile& pf) {
  return {pf.kind, scalar_function(pf.tau)};
}

inline std::function<double(double, double)> growth_function(const dsl::Expr& e) {
  auto p = std::make_shared<const dsl::Expr>(e);
  return [p](double x, double y) {
    dsl::Env env;
    env.x = x;
    env.y = y;
    return dsl::eval(*p, env);
  };
}

inline std::function<double(const Trajectory&)> functional(const dsl::Expr& e) {
  auto p = std::make_shared<const dsl::Expr>(e);
  return [p](const Trajectory& g) {
    dsl::Env env;
    env.gamma = &g;
    return dsl::eval(*p, env);
  };
}

inline void require_problem_sections(const ProblemFile& pf) {
  if (!pf.f) detail::input_error(pf.path, 0, "missing f in [rhs]");
  if (!pf.B) detail::input_error(pf.path, 0, "missing B in [boundary]");
}

inline DeviatedProblem make_problem(const ProblemFile& pf, ProblemOptions opt = {}) {
  require_problem_sections(pf);
  auto tau = std::make_shared<const Deviation>(make_deviation(pf));
  auto f = std::make_shared<const dsl::Expr>(*pf.f);
  auto B = std::make_shared<const dsl::Expr>(*pf.B);
  RhsFunctional rhs = [f, tau](double t, double x, double y, const Trajectory& g) {
    dsl::Env env;
    env.t = t;
    env.x = x;
    env.y = y;
    env.gamma = &g;
    env.tau = tau.get();
    return dsl::eval(*f, env);
  };
  BoundaryFunctional boundary = [B](double v, const Trajectory& g) {
    dsl::Env env;
    env.v = v;
    env.gamma = &g;
    return dsl::eval(*B, env);
  };
  return DeviatedProblem(pf.a, pf.b, *tau, std::move(rhs), std::move(boundary),
                         scalar_function(*pf.K), scalar_function(*pf.L), opt);
}

inline BoundsSpec make_bounds_spec(const ProblemFile& pf) {
  if (!pf.construct) detail::input_error(pf.path, 0, "missing [construct] section");
  const ConstructBlock& c = *pf.construct;
  BoundsSpec s;
  s.p = scalar_function(c.p);
  s.h = growth_function(c.h);
  s.phi = functional(c.phi);
  s.m = c.m;
  s.n_alpha = c.n_alpha;
  s.n_beta = c.n_beta;
  s.side = pf.kind;
  s.h_lipschitz = c.h_lipschitz;
  return s;
}

inline IvpSpec make_ivp(const ProblemFile& pf) {
  if (!pf.ivp) detail::input_error(pf.path, 0, "missing [ivp] section");
  const IvpBlock& b = *pf.ivp;
  auto tau = std::make_shared<const Deviation>(make_deviation(pf));
  auto g = std::make_shared<const dsl::Expr>(b.g);
  IvpSpec s;
  s.g = [g, tau](double t, double x, double y) {
    dsl::Env env;
    env.t = t;
    env.x = x;
    env.y = y;
    env.tau = tau.get();
    return dsl::eval(*g, env);
  };
  s.tau = *tau;
  s.anchor_value = b.value;
  s.anchor = b.anchor;
  s.L1 = scalar_function(b.L1);
  s.L2 = scalar_function(b.L2);
  return s;
}

}  // namespace devmono

#endif  // DEVMONO_PROBLEM_FILE_HPP
