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

#ifndef DEVMONO_TRAJECTORY_HPP
#define DEVMONO_TRAJECTORY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "devmono/error.hpp"

namespace devmono {

/// Strictly increasing grid t_0 = a < t_1 < ... < t_N = b.
///
/// The point storage is shared between copies, so copying a mesh (and every
/// trajectory living on it) is cheap and two trajectories derived from the same
/// mesh compare equal by pointer.
class Mesh {
 public:
  explicit Mesh(std::vector<double> points)
      : points_(std::make_shared<const std::vector<double>>(std::move(points))) {
    const auto& p = *points_;
    if (p.size() < 2) throw PreconditionError("mesh needs at least 2 points");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!std::isfinite(p[i])) throw PreconditionError("mesh point is not finite");
      if (i > 0 && !(p[i - 1] < p[i]))
        throw PreconditionError("mesh points must be strictly increasing");
    }
  }

  /// Uniform mesh with `intervals` cells over [a, b].
  static Mesh uniform(double a, double b, std::size_t intervals) {
    if (!(a < b)) throw PreconditionError("uniform mesh needs a < b");
    if (intervals < 1) throw PreconditionError("uniform mesh needs >= 1 interval");
    std::vector<double> p(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
      p[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
    p.back() = b;
    return Mesh(std::move(p));
  }

  double a() const noexcept { return points_->front(); }
  double b() const noexcept { return points_->back(); }
  std::size_t size() const noexcept { return points_->size(); }
  std::size_t intervals() const noexcept { return points_->size() - 1; }
  double operator[](std::size_t i) const { return (*points_)[i]; }
  std::span<const double> points() const noexcept { return *points_; }

  /// Index i of the cell [t_i, t_{i+1}] containing t; t must lie in [a, b].
  std::size_t locate(double t) const {
    const auto& p = *points_;
    if (t <= p.front()) return 0;
    if (t >= p.back()) return p.size() - 2;
    auto it = std::upper_bound(p.begin(), p.end(), t);
    return static_cast<std::size_t>(it - p.begin()) - 1;
  }

  bool contains(double t) const noexcept { return t >= a() && t <= b(); }

  friend bool operator==(const Mesh& l, const Mesh& r) {
    return l.points_ == r.points_ || *l.points_ == *r.points_;
  }

 private:
  std::shared_ptr<const std::vector<double>> points_;
};

/// Continuous piecewise-linear function on a mesh.
class Trajectory {
 public:
  Trajectory(Mesh mesh, std::vector<double> values)
      : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != mesh_.size())
      throw PreconditionError("trajectory needs one value per mesh point");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        std::ostringstream os;
        os << "trajectory value at t=" << mesh_[i] << " is not finite";
        throw EvaluationError(os.str(), mesh_[i]);
      }
    }
    double s = 0.0;
    for (std::size_t i = 1; i < values_.size(); ++i)
      s += 0.5 * (mesh_[i] - mesh_[i - 1]) * (values_[i - 1] + values_[i]);
    integral_ = s;
  }

  template <class F>
  static Trajectory sample(const Mesh& mesh, F&& f) {
    std::vector<double> v(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) v[i] = f(mesh[i]);
    return Trajectory(mesh, std::move(v));
  }

  static Trajectory constant(const Mesh& mesh, double c) {
    return Trajectory(mesh, std::vector<double>(mesh.size(), c));
  }

  const Mesh& mesh() const noexcept { return mesh_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const noexcept { return values_.front(); }
  double back() const noexcept { return values_.back(); }

  /// Linear interpolation; exact at nodes. Throws DomainError outside [a, b].
  double operator()(double t) const {
    if (!(t >= mesh_.a() && t <= mesh_.b())) {
      std::ostringstream os;
      os << "t=" << t << " outside [" << mesh_.a() << ", " << mesh_.b() << "]";
      throw DomainError(os.str());
    }
    const std::size_t i = mesh_.locate(t);
    const double t0 = mesh_[i], t1 = mesh_[i + 1];
    if (t == t0) return values_[i];
    if (t == t1) return values_[i + 1];
    const double w = (t - t0) / (t1 - t0);
    return values_[i] + w * (values_[i + 1] - values_[i]);
  }

  /// Value at t after clamping t into [a, b].
  double clamped(double t) const {
    return (*this)(std::clamp(t, mesh_.a(), mesh_.b()));
  }

  /// Exact integral of the interpolant over [a, b].
  double integral() const noexcept { return integral_; }

  double sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  Mesh mesh_;
  std::vector<double> values_;
  double integral_ = 0.0;
};

inline void require_same_mesh(const Trajectory& x, const Trajectory& y) {
  if (!(x.mesh() == y.mesh())) throw MeshMismatch();
}

inline double eval(const Trajectory& x, double t) { return x(t); }

/// lambda(t) = int_a^t (L1 + L2) by the cumulative trapezoid rule.
inline Trajectory lambda_accumulate(const Trajectory& l1, const Trajectory& l2) {
  require_same_mesh(l1, l2);
  const Mesh& mesh = l1.mesh();
  std::vector<double> out(mesh.size(), 0.0);
  for (std::size_t i = 1; i < mesh.size(); ++i) {
    const double left = l1[i - 1] + l2[i - 1];
    const double right = l1[i] + l2[i];
    out[i] = out[i - 1] + 0.5 * (mesh[i] - mesh[i - 1]) * (left + right);
  }
  return Trajectory(mesh, std::move(out));
}

/// Bielecki norm max_i exp(-lambda(t_i)) |x(t_i)|.
inline double weighted_norm(const Trajectory& x, const Trajectory& lambda) {
  require_same_mesh(x, lambda);
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m = std::max(m, std::exp(-lambda[i]) * std::abs(x[i]));
  return m;
}

inline double sup_distance(const Trajectory& x, const Trajectory& y) {
  require_same_mesh(x, y);
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

/// x <= y + tol at every node.
inline bool leq(const Trajectory& x, const Trajectory& y, double tol) {
  require_same_mesh(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] <= y[i] + tol)) return false;
  return true;
}

/// Default ordering tolerance 1e-9 * (1 + sup|alpha| + sup|beta|).
inline double ordering_tolerance(const Trajectory& alpha, const Trajectory& beta) {
  return 1e-9 * (1.0 + alpha.sup_norm() + beta.sup_norm());
}

inline Mesh reverse_mesh(const Mesh& mesh) {
  std::vector<double> p(mesh.size());
  const std::size_t n = mesh.size();
  for (std::size_t i = 0; i < n; ++i) p[i] = -mesh[n - 1 - i];
  return Mesh(std::move(p));
}

/// y(s) = x(-s) on the mirrored mesh. An involution, bit for bit.
inline Trajectory reverse_time(const Trajectory& x, const Mesh& reversed_mesh) {
  if (reversed_mesh.size() != x.size() || reversed_mesh.a() != -x.mesh().b())
    throw MeshMismatch();
  std::vector<double> v(x.values().rbegin(), x.values().rend());
  return Trajectory(reversed_mesh, std::move(v));
}

inline Trajectory reverse_time(const Trajectory& x) {
  return reverse_time(x, reverse_mesh(x.mesh()));
}

// ---------------------------------------------------------------------------
// Deviated argument

enum class DeviationKind { delay, advance };

inline const char* to_string(DeviationKind k) {
  return k == DeviationKind::delay ? "delay" : "advance";
}

/// The deviated argument tau together with its kind.
struct Deviation {
  DeviationKind kind = DeviationKind::delay;
  std::function<double(double)> map;

  double operator()(double t) const { return map(t); }

  static Deviation identity(DeviationKind kind = DeviationKind::delay) {
    return {kind, [](double t) { return t; }};
  }
};

namespace detail {
inline double range_slack(double a, double b) {
  return 64.0 * std::numeric_limits<double>::epsilon() *
         (1.0 + std::abs(a) + std::abs(b));
}
}  // namespace detail

/// Checks a <= tau(t) <= b and the delay/advance inequality at every point.
inline void validate(const Deviation& tau, std::span<const double> points, double a,
                     double b) {
  const double slack = detail::range_slack(a, b);
  for (double t : points) {
    const double s = tau(t);
    std::ostringstream os;
    if (!std::isfinite(s)) {
      os << "tau(" << t << ") is not finite";
      throw DomainError(os.str());
    }
    if (s < a - slack || s > b + slack) {
      os << "tau(" << t << ") = " << s << " leaves [" << a << ", " << b << "]";
      throw DomainError(os.str());
    }
    if (tau.kind == DeviationKind::delay && s > t + slack) {
      os << "delay deviation has tau(" << t << ") = " << s << " > t";
      throw DomainError(os.str());
    }
    if (tau.kind == DeviationKind::advance && s < t - slack) {
      os << "advance deviation has tau(" << t << ") = " << s << " < t";
      throw DomainError(os.str());
    }
  }
}

inline void validate(const Deviation& tau, const Mesh& mesh) {
  validate(tau, mesh.points(), mesh.a(), mesh.b());
}

/// tau^(t) = -tau(-t), the deviation of the time-reversed problem.
inline Deviation reversed(const Deviation& tau) {
  return {tau.kind == DeviationKind::delay ? DeviationKind::advance
                                           : DeviationKind::delay,
          [m = tau.map](double t) { return -m(-t); }};
}

/// Interpolation data for x(tau(t_i)) at every mesh node.
class DeviationStencil {
 public:
  DeviationStencil(const Deviation& tau, const Mesh& mesh) {
    validate(tau, mesh);
    const std::size_t n = mesh.size();
    cell_.resize(n);
    weight_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = std::clamp(tau(mesh[i]), mesh.a(), mesh.b());
      const std::size_t c = mesh.locate(s);
      double w = (s - mesh[c]) / (mesh[c + 1] - mesh[c]);
      cell_[i] = c;
      weight_[i] = std::clamp(w, 0.0, 1.0);
    }
  }

  double apply(std::span<const double> x, std::size_t i) const {
    const std::size_t c = cell_[i];
    const double w = weight_[i];
    if (w == 0.0) return x[c];
    if (w == 1.0) return x[c + 1];
    return x[c] + w * (x[c + 1] - x[c]);
  }

  std::size_t size() const noexcept { return cell_.size(); }

 private:
  std::vector<std::size_t> cell_;
  std::vector<double> weight_;
};

}  // namespace devmono

#endif  // DEVMONO_TRAJECTORY_HPP
