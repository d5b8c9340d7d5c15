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

#ifndef DEVMONO_DSL_HPP
#define DEVMONO_DSL_HPP

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "devmono/error.hpp"
#include "devmono/trajectory.hpp"

// Expression language for problem files.
//
//   expr       := additive [ relop additive ]
//   relop      := "<" | "<=" | ">" | ">=" | "==" | "!="
//   additive   := term { ("+" | "-") term }
//   term       := unary { ("*" | "/") unary }
//   unary      := "-" unary | power
//   power      := primary [ "^" unary ]              (right associative)
//   primary    := number | variable | "pi" | "(" expr ")"
//               | "if" "(" expr "," expr "," expr ")"
//               | func "(" expr ")" | "traj" "(" expr ")"
//               | "integral" "(" ")" | "dev" "(" ")"
//   func       := sin cos tan tanh exp log sqrt abs floor trunc
//
// Comparisons evaluate to 1 or 0; if() picks its second argument when the first
// is nonzero and evaluates only the branch it picks.

namespace devmono::dsl {

/// Where an expression is used; fixes which names it may refer to.
enum class Context {
  rhs,          // f(t, x, y, gamma): t x y traj integral dev
  ivp_rhs,      // g(t, x, y): t x y dev
  deviation,    // tau(t): t
  boundary,     // B(v, gamma): v traj integral
  functional,   // phi(gamma): traj integral
  scalar_of_t,  // K, L, p, L1, L2: t
  bound_fn,     // alpha, beta: t
  growth,       // h(x, y): x y
};

inline const char* to_string(Context c) {
  switch (c) {
    case Context::rhs: return "rhs";
    case Context::ivp_rhs: return "ivp_rhs";
    case Context::deviation: return "deviation";
    case Context::boundary: return "boundary";
    case Context::functional: return "functional";
    case Context::scalar_of_t: return "scalar-of-t";
    case Context::bound_fn: return "bound-fn";
    case Context::growth: return "growth";
  }
  return "?";
}

namespace detail {

struct ContextRules {
  const char* variables;
  bool functionals;  // traj(), integral()
  bool dev;
};

inline ContextRules rules(Context c) {
  switch (c) {
    case Context::rhs: return {"txy", true, true};
    case Context::ivp_rhs: return {"txy", false, true};
    case Context::deviation: return {"t", false, false};
    case Context::boundary: return {"v", true, false};
    case Context::functional: return {"", true, false};
    case Context::scalar_of_t: return {"t", false, false};
    case Context::bound_fn: return {"t", false, false};
    case Context::growth: return {"xy", false, false};
  }
  return {"", false, false};
}

inline std::string describe(Context c) {
  const ContextRules r = rules(c);
  std::string s = "name bound in ";
  s += to_string(c);
  s += " context (";
  bool first = true;
  auto add = [&](const std::string& n) {
    if (!first) s += ", ";
    s += n;
    first = false;
  };
  for (const char* p = r.variables; *p; ++p) add(std::string(1, *p));
  if (r.functionals) {
    add("traj()");
    add("integral()");
  }
  if (r.dev) add("dev()");
  s += ")";
  return s;
}

}  // namespace detail

/// A name that is not available in the expression's context.
class UnboundIdentifier : public ParseError {
 public:
  UnboundIdentifier(std::size_t position, const std::string& name, Context ctx)
      : ParseError(position, detail::describe(ctx), name), name_(name), context_(ctx) {}
  const std::string& name() const noexcept { return name_; }
  Context context() const noexcept { return context_; }

 private:
  std::string name_;
  Context context_;
};

enum class NodeKind { number, variable, negate, binary, compare, conditional, call,
                      traj, integral, dev };
enum class BinaryOp { add, sub, mul, div, pow };
enum class CompareOp { lt, le, gt, ge, eq, ne };
enum class Function { sin, cos, tan, tanh, exp, log, sqrt, abs, floor, trunc };

struct Node {
  NodeKind kind = NodeKind::number;
  double number = 0.0;
  char variable = 0;
  BinaryOp binary = BinaryOp::add;
  CompareOp compare = CompareOp::lt;
  Function function = Function::sin;
  std::vector<Node> args;
  /// Byte offset in the source; not part of structural equality.
  std::size_t position = 0;

  friend bool operator==(const Node& l, const Node& r) {
    if (l.kind != r.kind || l.args != r.args) return false;
    switch (l.kind) {
      case NodeKind::number:
        return std::bit_cast<std::uint64_t>(l.number) == std::bit_cast<std::uint64_t>(r.number);
      case NodeKind::variable: return l.variable == r.variable;
      case NodeKind::binary: return l.binary == r.binary;
      case NodeKind::compare: return l.compare == r.compare;
      case NodeKind::call: return l.function == r.function;
      default: return true;
    }
  }
};

/// A parsed expression together with the context it was checked against.
class Expr {
 public:
  Expr(Node root, Context context, std::string source)
      : root_(std::move(root)), context_(context), source_(std::move(source)) {}
  const Node& root() const noexcept { return root_; }
  Context context() const noexcept { return context_; }
  const std::string& source() const noexcept { return source_; }
  /// True if the expression mentions traj() or integral().
  bool uses_functionals() const { return mentions(root_); }

 private:
  static bool mentions(const Node& n) {
    if (n.kind == NodeKind::traj || n.kind == NodeKind::integral) return true;
    return std::any_of(n.args.begin(), n.args.end(), mentions);
  }
  Node root_;
  Context context_;
  std::string source_;
};

namespace detail {

struct FunctionName {
  const char* name;
  Function fn;
};

inline constexpr FunctionName kFunctions[] = {
    {"sin", Function::sin},   {"cos", Function::cos},     {"tan", Function::tan},
    {"tanh", Function::tanh}, {"exp", Function::exp},     {"log", Function::log},
    {"sqrt", Function::sqrt}, {"abs", Function::abs},     {"floor", Function::floor},
    {"trunc", Function::trunc}};

inline const char* function_name(Function f) {
  for (const auto& e : kFunctions)
    if (e.fn == f) return e.name;
  return "?";
}

enum class Tok { number, ident, op, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
  double value = 0.0;
};

class Parser {
 public:
  Parser(std::string_view src, Context ctx) : src_(src), ctx_(ctx), rules_(rules(ctx)) {
    advance();
  }

  Node parse_all() {
    Node n = expr();
    if (tok_.kind != Tok::end) fail("end of expression");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(tok_.pos, expected, tok_.kind == Tok::end ? "<end>" : tok_.text);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::end, "", start};
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      lex_number(start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_'))
        ++pos_;
      tok_ = {Tok::ident, std::string(src_.substr(start, pos_ - start)), start};
      return;
    }
    ++pos_;
    switch (c) {
      case '(': tok_ = {Tok::lparen, "(", start}; return;
      case ')': tok_ = {Tok::rparen, ")", start}; return;
      case ',': tok_ = {Tok::comma, ",", start}; return;
      case '+': case '-': case '*': case '/': case '^':
        tok_ = {Tok::op, std::string(1, c), start};
        return;
      case '<': case '>': case '=': case '!':
        if (pos_ < src_.size() && src_[pos_] == '=') {
          ++pos_;
          tok_ = {Tok::op, std::string{c, '='}, start};
          return;
        }
        if (c == '<' || c == '>') {
          tok_ = {Tok::op, std::string(1, c), start};
          return;
        }
        break;
      default: break;
    }
    tok_ = {Tok::op, std::string(1, c), start};
    fail("operator, number, name or parenthesis");
  }

  void lex_number(std::size_t start) {
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        digits();
      else
        pos_ = save;
    }
    std::string text(src_.substr(start, pos_ - start));
    const double v = std::strtod(text.c_str(), nullptr);
    tok_ = {Tok::number, text, start, v};
    if (!std::isfinite(v)) fail("finite number literal");
  }

  bool is_op(const char* s) const { return tok_.kind == Tok::op && tok_.text == s; }

  void expect(Tok k, const std::string& what) {
    if (tok_.kind != k) fail(what);
    advance();
  }

  Node expr() {
    Node lhs = additive();
    static constexpr std::pair<const char*, CompareOp> ops[] = {
        {"<", CompareOp::lt},  {"<=", CompareOp::le}, {">", CompareOp::gt},
        {">=", CompareOp::ge}, {"==", CompareOp::eq}, {"!=", CompareOp::ne}};
    for (const auto& [s, op] : ops) {
      if (is_op(s)) {
        Node n;
        n.kind = NodeKind::compare;
        n.compare = op;
        n.position = tok_.pos;
        advance();
        n.args.push_back(std::move(lhs));
        n.args.push_back(additive());
        return n;
      }
    }
    return lhs;
  }

  Node binary(BinaryOp op, std::size_t pos, Node l, Node r) {
    Node n;
        n.kind = NodeKind::binary;
    n.binary = op;
    n.position = pos;
    n.args.push_back(std::move(l));
    n.args.push_back(std::move(r));
    return n;
  }

  Node additive() {
    Node lhs = term();
    while (is_op("+") || is_op("-")) {
      const BinaryOp op = tok_.text == "+" ? BinaryOp::add : BinaryOp::sub;
      const std::size_t p = tok_.pos;
      advance();
      lhs = binary(op, p, std::move(lhs), term());
    }
    return lhs;
  }

  Node term() {
    Node lhs = unary();
    while (is_op("*") || is_op("/")) {
      const BinaryOp op = tok_.text == "*" ? BinaryOp::mul : BinaryOp::div;
      const std::size_t p = tok_.pos;
      advance();
      lhs = binary(op, p, std::move(lhs), unary());
    }
    return lhs;
  }

  Node unary() {
    if (is_op("-")) {
      Node n;
        n.kind = NodeKind::negate;
      n.position = tok_.pos;
      advance();
      n.args.push_back(unary());
      return n;
    }
    return power();
  }

  Node power() {
    Node base = primary();
    if (is_op("^")) {
      const std::size_t p = tok_.pos;
      advance();
      return binary(BinaryOp::pow, p, std::move(base), unary());
    }
    return base;
  }

  Node primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::number: {
        advance();
        Node n;
        n.kind = NodeKind::number;
        n.number = t.value;
        n.position = t.pos;
        return n;
      }
      case Tok::lparen: {
        advance();
        Node n = expr();
        expect(Tok::rparen, "')'");
        return n;
      }
      case Tok::ident: return named(t);
      default: fail("number, name or '('");
    }
  }

  Node named(const Token& t) {
    advance();
    Node n;
    n.position = t.pos;
    if (t.text == "pi") {
      n.kind = NodeKind::number;
      n.number = 3.14159265358979323846;
      return n;
    }
    if (t.text == "if") {
      n.kind = NodeKind::conditional;
      expect(Tok::lparen, "'(' after if");
      n.args.push_back(expr());
      expect(Tok::comma, "',' in if()");
      n.args.push_back(expr());
      expect(Tok::comma, "',' in if()");
      n.args.push_back(expr());
      expect(Tok::rparen, "')' closing if()");
      return n;
    }
    if (t.text == "traj" || t.text == "integral" || t.text == "dev") {
      const bool allowed = t.text == "dev" ? rules_.dev : rules_.functionals;
      if (!allowed) throw UnboundIdentifier(t.pos, t.text, ctx_);
      expect(Tok::lparen, "'(' after " + t.text);
      if (t.text == "traj") {
        n.kind = NodeKind::traj;
        n.args.push_back(expr());
      } else {
        n.kind = t.text == "dev" ? NodeKind::dev : NodeKind::integral;
      }
      expect(Tok::rparen, "')' closing " + t.text + "()");
      return n;
    }
    for (const auto& f : kFunctions) {
      if (t.text == f.name) {
        n.kind = NodeKind::call;
        n.function = f.fn;
        expect(Tok::lparen, "'(' after " + t.text);
        n.args.push_back(expr());
        expect(Tok::rparen, "')' closing " + t.text + "()");
        return n;
      }
    }
    if (t.text.size() == 1 && std::string_view(rules_.variables).find(t.text[0]) !=
                                  std::string_view::npos) {
      n.kind = NodeKind::variable;
      n.variable = t.text[0];
      return n;
    }
    throw UnboundIdentifier(t.pos, t.text, ctx_);
  }

  std::string_view src_;
  Context ctx_;
  ContextRules rules_;
  std::size_t pos_ = 0;
  Token tok_{Tok::end, "", 0};
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void print_node(const Node& n, std::string& out) {
  static constexpr const char* bin[] = {" + ", " - ", " * ", " / ", " ^ "};
  static constexpr const char* cmp[] = {" < ", " <= ", " > ", " >= ", " == ", " != "};
  switch (n.kind) {
    case NodeKind::number: out += format_number(n.number); return;
    case NodeKind::variable: out += n.variable; return;
    case NodeKind::negate:
      out += "(-";
      print_node(n.args[0], out);
      out += ")";
      return;
    case NodeKind::binary:
    case NodeKind::compare:
      out += "(";
      print_node(n.args[0], out);
      out += n.kind == NodeKind::binary ? bin[static_cast<int>(n.binary)]
                                        : cmp[static_cast<int>(n.compare)];
      print_node(n.args[1], out);
      out += ")";
      return;
    case NodeKind::conditional:
      out += "if(";
      print_node(n.args[0], out);
      out += ", ";
      print_node(n.args[1], out);
      out += ", ";
      print_node(n.args[2], out);
      out += ")";
      return;
    case NodeKind::call:
      out += function_name(n.function);
      out += "(";
      print_node(n.args[0], out);
      out += ")";
      return;
    case NodeKind::traj:
      out += "traj(";
      print_node(n.args[0], out);
      out += ")";
      return;
    case NodeKind::integral: out += "integral()"; return;
    case NodeKind::dev: out += "dev()"; return;
  }
}

}  // namespace detail

/// Parses `source` and checks every name against `context`.
inline Expr parse(std::string_view source, Context context) {
  detail::Parser p(source, context);
  return Expr(p.parse_all(), context, std::string(source));
}

/// Canonical, fully parenthesized text; parse(print(e)) reproduces e.
inline std::string print(const Node& n) {
  std::string s;
  detail::print_node(n, s);
  return s;
}

inline std::string print(const Expr& e) { return print(e.root()); }

/// Bindings available during evaluation.
struct Env {
  std::optional<double> t, x, y, v;
  const Trajectory* gamma = nullptr;
  const Deviation* tau = nullptr;
  /// Incremented whenever traj() clamps its argument into [a, b].
  std::size_t* clamp_count = nullptr;
};

namespace detail {

[[noreturn]] inline void domain_failure(const Node& n, const std::string& why, double t) {
  throw EvaluationError("cannot evaluate " + print(n) + ": " + why, t);
}

inline double binding(const std::optional<double>& v, char name, const Node& n,
                      double t) {
  if (!v) domain_failure(n, std::string("variable ") + name + " is not bound", t);
  return *v;
}

inline const Trajectory& need_gamma(const Env& env, const Node& n, double t) {
  if (!env.gamma) domain_failure(n, "no trajectory is bound", t);
  return *env.gamma;
}

inline double eval_node(const Node& n, const Env& env) {
  const double where = env.t.value_or(std::numeric_limits<double>::quiet_NaN());
  auto checked = [&](double r) {
    if (!std::isfinite(r)) domain_failure(n, "result is not finite", where);
    return r;
  };
  switch (n.kind) {
    case NodeKind::number: return n.number;
    case NodeKind::variable:
      switch (n.variable) {
        case 't': return binding(env.t, 't', n, where);
        case 'x': return binding(env.x, 'x', n, where);
        case 'y': return binding(env.y, 'y', n, where);
        default: return binding(env.v, 'v', n, where);
      }
    case NodeKind::negate: return -eval_node(n.args[0], env);
    case NodeKind::binary: {
      const double l = eval_node(n.args[0], env);
      const double r = eval_node(n.args[1], env);
      switch (n.binary) {
        case BinaryOp::add: return checked(l + r);
        case BinaryOp::sub: return checked(l - r);
        case BinaryOp::mul: return checked(l * r);
        case BinaryOp::div:
          if (r == 0.0) domain_failure(n, "division by zero", where);
          return checked(l / r);
        case BinaryOp::pow: return checked(std::pow(l, r));
      }
      return 0.0;
    }
    case NodeKind::compare: {
      const double l = eval_node(n.args[0], env);
      const double r = eval_node(n.args[1], env);
      bool b = false;
      switch (n.compare) {
        case CompareOp::lt: b = l < r; break;
        case CompareOp::le: b = l <= r; break;
        case CompareOp::gt: b = l > r; break;
        case CompareOp::ge: b = l >= r; break;
        case CompareOp::eq: b = l == r; break;
        case CompareOp::ne: b = l != r; break;
      }
      return b ? 1.0 : 0.0;
    }
    case NodeKind::conditional:
      return eval_node(n.args[0], env) != 0.0 ? eval_node(n.args[1], env)
                                              : eval_node(n.args[2], env);
    case NodeKind::call: {
      const double a = eval_node(n.args[0], env);
      switch (n.function) {
        case Function::sin: return std::sin(a);
        case Function::cos: return std::cos(a);
        case Function::tan: return checked(std::tan(a));
        case Function::tanh: return std::tanh(a);
        case Function::exp: return checked(std::exp(a));
        case Function::log:
          if (!(a > 0.0)) domain_failure(n, "log of a nonpositive number", where);
          return std::log(a);
        case Function::sqrt:
          if (a < 0.0) domain_failure(n, "sqrt of a negative number", where);
          return std::sqrt(a);
        case Function::abs: return std::abs(a);
        case Function::floor: return std::floor(a);
        case Function::trunc: return std::trunc(a);
      }
      return 0.0;
    }
    case NodeKind::traj: {
      const Trajectory& g = need_gamma(env, n, where);
      const double s = eval_node(n.args[0], env);
      const double c = std::clamp(s, g.mesh().a(), g.mesh().b());
      if (c != s && env.clamp_count) ++*env.clamp_count;
      return g(c);
    }
    case NodeKind::integral: return need_gamma(env, n, where).integral();
    case NodeKind::dev: {
      if (!env.tau) domain_failure(n, "no deviation is bound", where);
      return checked((*env.tau)(binding(env.t, 't', n, where)));
    }
  }
  return 0.0;
}

}  // namespace detail

/// Evaluates e under env. Partial functions (log, sqrt, division) and
/// non-finite intermediate results raise EvaluationError naming the
/// subexpression.
inline double eval(const Expr& e, const Env& env) {
  return detail::eval_node(e.root(), env);
}

}  // namespace devmono::dsl

#endif  // DEVMONO_DSL_HPP
