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

#ifndef DEVMONO_TESTS_SUPPORT_DSL_ORACLE_HPP
#define DEVMONO_TESTS_SUPPORT_DSL_ORACLE_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include "devmono/dsl.hpp"

namespace devmono::dsl::testsupport {

// Grammar-driven generator of rhs-context sources.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::string expr(int depth) {
    std::string s = additive(depth);
    if (pick(6) == 0) s += std::string(" ") + cmp_[pick(6)] + " " + additive(depth);
    return s;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string additive(int depth) {
    std::string s = term(depth);
    for (int k = pick(3); k > 0; --k) s += (pick(2) ? " + " : " - ") + term(depth);
    return s;
  }
  std::string term(int depth) {
    std::string s = unary(depth);
    for (int k = pick(3); k > 0; --k) s += (pick(2) ? "*" : " / ") + unary(depth);
    return s;
  }
  std::string unary(int depth) {
    if (pick(5) == 0) return "-" + unary(depth);
    std::string s = primary(depth);
    if (pick(6) == 0) s += "^" + unary(depth - 1);
    return s;
  }
  std::string primary(int depth) {
    const int choice = depth <= 0 ? pick(5) : pick(11);
    switch (choice) {
      case 0: return number();
      case 1: return "t";
      case 2: return "x";
      case 3: return "y";
      case 4: return pick(2) ? "integral()" : "dev()";
      case 5: case 6: return "(" + expr(depth - 1) + ")";
      case 7: return std::string(fns_[pick(10)]) + "(" + expr(depth - 1) + ")";
      case 8:
        return "if(" + expr(depth - 1) + ", " + expr(depth - 1) + ", " + expr(depth - 1) + ")";
      case 9: return "traj(" + expr(depth - 1) + ")";
      default: return number();
    }
  }
  std::string number() {
    static const char* const fixed[] = {"0", "1", "2", "0.5", ".25", "3.", "1e-1", "2.5E+1", "pi"};
    if (pick(2)) return fixed[pick(9)];
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", 1 + pick(17),
                  std::uniform_real_distribution<double>(0.0, 4.0)(rng_));
    return buf;
  }

  std::mt19937_64 rng_;
  static constexpr const char* cmp_[6] = {"<", "<=", ">", ">=", "==", "!="};
  static constexpr const char* fns_[10] = {"sin", "cos", "tan", "tanh", "exp",
                                           "log", "sqrt", "abs", "floor", "trunc"};
};

struct OracleFailure {};

// Evaluates source text directly while parsing it, without building a tree.
// Inactive if() branches are parsed with evaluation switched off.
class Oracle {
 public:
  Oracle(const std::string& s, const Env& env) : s_(s), env_(env) {}

  double run() {
    const double v = expr(true);
    skip();
    if (i_ != s_.size()) throw std::logic_error("trailing input");
    return v;
  }

 private:
  void skip() {
    while (i_ < s_.size() && s_[i_] == ' ') ++i_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) == 0) {
      i_ += tok.size();
      return true;
    }
    return false;
  }
  void need(const std::string& tok) {
    if (!eat(tok)) throw std::logic_error("expected " + tok);
  }
  double fin(bool live, double v) {
    if (live && !std::isfinite(v)) throw OracleFailure{};
    return v;
  }

  double expr(bool live) {
    const double l = additive(live);
    for (const char* op : {"<=", ">=", "==", "!=", "<", ">"}) {
      if (eat(op)) {
        const double r = additive(live);
        const std::string o = op;
        if (o == "<=") return l <= r;
        if (o == ">=") return l >= r;
        if (o == "==") return l == r;
        if (o == "!=") return l != r;
        if (o == "<") return l < r;
        return l > r;
      }
    }
    return l;
  }
  double additive(bool live) {
    double v = term(live);
    for (;;) {
      if (eat("+")) v = fin(live, v + term(live));
      else if (eat("-")) v = fin(live, v - term(live));
      else return v;
    }
  }
  double term(bool live) {
    double v = unary(live);
    for (;;) {
      if (eat("*")) {
        v = fin(live, v * unary(live));
      } else if (eat("/")) {
        const double r = unary(live);
        if (live && r == 0.0) throw OracleFailure{};
        v = fin(live, v / r);
      } else {
        return v;
      }
    }
  }
  double unary(bool live) {
    if (eat("-")) return -unary(live);
    const double base = primary(live);
    if (eat("^")) return fin(live, std::pow(base, unary(live)));
    return base;
  }
  double primary(bool live) {
    skip();
    if (eat("(")) {
      const double v = expr(live);
      need(")");
      return v;
    }
    if (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(i_), &used);
      i_ += used;
      return v;
    }
    std::size_t j = i_;
    while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j]))) ++j;
    const std::string name = s_.substr(i_, j - i_);
    i_ = j;
    if (name == "pi") return 3.14159265358979323846;
    if (name == "t") return *env_.t;
    if (name == "x") return *env_.x;
    if (name == "y") return *env_.y;
    if (name == "integral") {
      need("(");
      need(")");
      return env_.gamma->integral();
    }
    if (name == "dev") {
      need("(");
      need(")");
      return fin(live, env_.tau->map(*env_.t));
    }
    need("(");
    if (name == "if") {
      const double c = expr(live);
      need(",");
      const double a = expr(live && c != 0.0);
      need(",");
      const double b = expr(live && c == 0.0);
      need(")");
      return c != 0.0 ? a : b;
    }
    const double a = expr(live);
    need(")");
    if (!live) return 0.0;
    if (name == "traj") {
      const Trajectory& g = *env_.gamma;
      return g(std::min(std::max(a, g.mesh().a()), g.mesh().b()));
    }
    if (name == "sin") return std::sin(a);
    if (name == "cos") return std::cos(a);
    if (name == "tan") return fin(live, std::tan(a));
    if (name == "tanh") return std::tanh(a);
    if (name == "exp") return fin(live, std::exp(a));
    if (name == "log") {
      if (!(a > 0.0)) throw OracleFailure{};
      return std::log(a);
    }
    if (name == "sqrt") {
      if (a < 0.0) throw OracleFailure{};
      return std::sqrt(a);
    }
    if (name == "abs") return std::abs(a);
    if (name == "floor") return std::floor(a);
    if (name == "trunc") return std::trunc(a);
    throw std::logic_error("unknown name " + name);
  }

  const std::string& s_;
  const Env& env_;
  std::size_t i_ = 0;
};

// n with 1 - 1/n <= x < 1 - 1/(n+1), by linear search.
inline double staircase_by_search(double x) {
  for (long n = 1; n <= 1000000; ++n)
    if (1.0 - 1.0 / n <= x && x < 1.0 - 1.0 / (n + 1)) return x / 2 - (1.0 - 1.0 / n);
  throw std::logic_error("no step found");
}

}  // namespace devmono::dsl::testsupport

#endif  // DEVMONO_TESTS_SUPPORT_DSL_ORACLE_HPP
