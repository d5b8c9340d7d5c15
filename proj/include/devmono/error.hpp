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

#ifndef DEVMONO_ERROR_HPP
#define DEVMONO_ERROR_HPP

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace devmono {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the interval a function is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two trajectories that must share a mesh do not.
class MeshMismatch : public Error {
 public:
  MeshMismatch() : Error("trajectories are defined on different meshes") {}
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A user callable produced a non-finite value or failed to evaluate.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double where)
      : Error(what), where_(where) {}
  explicit EvaluationError(const std::string& what) : Error(what) {}

  /// Time (or abscissa) at which the failure happened, NaN if unknown.
  double where() const noexcept { return where_; }

 private:
  double where_ = std::numeric_limits<double>::quiet_NaN();
};

/// Convergence evidence of a fixed-point iteration.
struct IterationTrace {
  std::size_t iterations = 0;
  /// Increment ||x_{k+1} - x_k|| of every step, in the norm the iteration uses.
  std::vector<double> weighted_deltas;
  /// Contraction constant used for the a-posteriori bound (0 when not applicable).
  double q_used = 0.0;
  bool converged = false;
  /// q/(1-q) * last delta; +inf when q is numerically 1.
  double error_bound = 0.0;
};

/// An iteration hit its cap before meeting the stopping rule.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, IterationTrace trace)
      : Error(what), trace_(std::move(trace)) {}
  const IterationTrace& trace() const noexcept { return trace_; }

 private:
  IterationTrace trace_;
};

/// The monotone iteration observed an order violation larger than roundoff.
/// This means the inputs do not satisfy the hypotheses of the method.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(const std::string& what, std::size_t node, double t,
                      double amount)
      : Error(what), node_(node), t_(t), amount_(amount) {}
  std::size_t node() const noexcept { return node_; }
  double t() const noexcept { return t_; }
  double amount() const noexcept { return amount_; }

 private:
  std::size_t node_;
  double t_;
  double amount_;
};

/// Syntax or binding error in an expression.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected, std::string found)
      : Error("parse error at offset " + std::to_string(position) +
              ": expected " + expected + ", found '" + found + "'"),
        position_(position),
        expected_(std::move(expected)),
        found_(std::move(found)) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t position_;
  std::string expected_;
  std::string found_;
};

}  // namespace devmono

#endif  // DEVMONO_ERROR_HPP
