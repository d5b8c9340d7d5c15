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

#include "devmono/bounds.hpp"
#include "devmono/monotone.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace devmono {
namespace {

double eighth_of_integral(const Trajectory& x) { return x.integral() / 8.0; }

BoundsSpec delay_example_spec() {
  BoundsSpec s;
  s.p = [](double) { return 1.0; };
  s.h = [](double, double v) { return v + 1.0; };
  s.phi = eighth_of_integral;
  s.m = 3.0;
  s.n_alpha = s.n_beta = 1.0;
  s.h_lipschitz = 1.0;
  return s;
}

BoundsSpec flat_spec(double m, double na, double nb) {
  BoundsSpec s;
  s.p = [](double) { return 0.0; };
  s.h = [](double, double) { return 1.0; };
  s.phi = [](const Trajectory&) { return 0.0; };
  s.m = m;
  s.n_alpha = na;
  s.n_beta = nb;
  return s;
}

double sup_error(const Trajectory& x, double (*f)(double)) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(x[i] - f(x.mesh()[i])));
  return e;
}

TEST(ComparisonSolution, Examples) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 1024);
  const auto flat = comparison_solution(flat_spec(2.5, 0.0, 0.0), m);
  for (double v : flat.values()) EXPECT_EQ(v, 2.5);

  const auto w = comparison_solution(delay_example_spec(), m);
  EXPECT_LE(sup_error(w, [](double t) { return 4.0 * std::exp(t) - 1.0; }), 5e-4);

  BoundsSpec lin = flat_spec(0.0, 0.0, 0.0);
  lin.p = [](double) { return 1.0; };
  const auto t = comparison_solution(lin, Mesh::uniform(0.0, 1.0, 16));
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t[i], t.mesh()[i], 1e-14);
}

TEST(ComparisonSolution, AdvanceSideAnchorsAtTheEnd) {
  BoundsSpec lin = flat_spec(0.0, 0.0, 0.0);
  lin.p = [](double) { return 1.0; };
  lin.side = DeviationKind::advance;
  const auto w = comparison_solution(lin, Mesh::uniform(0.0, 1.0, 16));
  EXPECT_EQ(w.back(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], 1.0 - w.mesh()[i], 1e-14);
}

TEST(ComparisonSolution, NegativeWeightIsRejected) {
  BoundsSpec s = flat_spec(1.0, 0.0, 0.0);
  s.p = [](double t) { return t - 0.5; };
  EXPECT_THROW(comparison_solution(s, Mesh::uniform(0.0, 1.0, 8)), PreconditionError);
  EXPECT_THROW(comparison_solution(flat_spec(1.0, 2.0, 0.0), Mesh::uniform(0.0, 1.0, 8)),
               PreconditionError);
}

TEST(Feasibility, Examples) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 1024);
  const auto zero = check_feasibility(flat_spec(3.0, 1.0, 2.0), Trajectory::constant(m, 3.0));
  EXPECT_EQ(zero.slack_alpha, 2.0);
  EXPECT_EQ(zero.slack_beta, 1.0);
  EXPECT_TRUE(zero.passed);

  const auto spec = delay_example_spec();
  const auto r = check_feasibility(spec, comparison_solution(spec, m));
  const double closed = 3.0 - (4.0 * std::exp(1.0) - 5.0) / 8.0 - 7.0 / 8.0;
  EXPECT_NEAR(closed, 1.390859085770477, 1e-12);
  EXPECT_NEAR(r.slack_alpha, closed, 1e-4);
  EXPECT_NEAR(r.slack_beta, closed, 1e-4);
  EXPECT_NEAR(r.phi_one, 0.125, 1e-15);
  EXPECT_TRUE(r.passed);

  BoundsSpec tight = flat_spec(0.0, 0.0, 0.0);
  tight.phi = eighth_of_integral;
  const auto bad = check_feasibility(tight, Trajectory::constant(m, 1.0));
  EXPECT_FALSE(bad.passed);
  EXPECT_LT(bad.slack_alpha, 0.0);
}

TEST(Construct, DelayExampleBounds) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 1024);
  const auto c = construct(delay_example_spec(), m);
  EXPECT_LE(sup_error(c.alpha, [](double t) { return 2.0 - 4.0 * std::exp(t); }), 5e-4);
  EXPECT_LE(sup_error(c.beta, [](double t) { return 4.0 * std::exp(t) - 2.0; }), 5e-4);
  EXPECT_EQ(c.alpha.front(), -2.0);
  EXPECT_EQ(c.beta.front(), 2.0);
  EXPECT_TRUE(leq(c.alpha, c.beta, 0.0));
  EXPECT_NEAR(c.feasibility.slack_alpha, 1.3909, 1e-3);
}

TEST(Construct, FlatExamples) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 8);
  const auto collapsed = construct(flat_spec(1.0, 1.0, 1.0), m);
  EXPECT_EQ(collapsed.alpha.sup_norm(), 0.0);
  EXPECT_EQ(collapsed.beta.sup_norm(), 0.0);
  const auto wide = construct(flat_spec(2.0, 1.0, 0.0), m);
  for (double v : wide.alpha.values()) EXPECT_EQ(v, -1.0);
  for (double v : wide.beta.values()) EXPECT_EQ(v, 2.0);
}

TEST(Construct, InfeasibleCarriesReport) {
  BoundsSpec s = delay_example_spec();
  s.phi = [](const Trajectory& x) { return x.integral(); };
  try {
    construct(s, Mesh::uniform(0.0, 1.0, 256));
    FAIL() << "expected InfeasibleBounds";
  } catch (const InfeasibleBounds& e) {
    EXPECT_FALSE(e.report().passed);
    EXPECT_LT(e.report().slack_alpha, 0.0);
  }
}

TEST(Construct, SlackGrowsWithM) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 8);
  double prev = -1.0;
  for (double level = 0.0; level <= 5.0; level += 0.5) {
    const auto spec = flat_spec(level, 0.0, 0.0);
    const auto r = check_feasibility(spec, comparison_solution(spec, m));
    EXPECT_GT(r.slack_alpha, prev);
    EXPECT_EQ(r.slack_alpha, r.slack_beta);
    prev = r.slack_alpha;
  }
}

TEST(Construct, AnchorValuesAreExact) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 128);
  for (double level : {1.0, 2.5, 4.0}) {
    BoundsSpec s = delay_example_spec();
    s.phi = [](const Trajectory&) { return 0.0; };
    s.m = level;
    s.n_alpha = 0.25;
    s.n_beta = 0.75;
    const auto c = construct(s, m);
    EXPECT_EQ(c.alpha.front(), -level + 0.25);
    EXPECT_EQ(c.beta.front(), level - 0.75);
  }
}

TEST(Construct, BoundsAreLowerAndUpperSolutions) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 1024);
  const auto c = construct(delay_example_spec(), m);
  const DeviatedProblem p(
      0.0, 1.0, {DeviationKind::delay, [](double t) { return t / 2; }},
      [](double, double, double y, const Trajectory& g) { return y + std::tanh(std::floor(g(0.5))); },
      [](double v, const Trajectory& g) { return v - eighth_of_integral(g); },
      [](double) { return 0.0; }, [](double) { return 0.0; });
  EXPECT_TRUE(verify_lower(c.alpha, p, 1e-6).passed);
  EXPECT_TRUE(verify_upper(c.beta, p, 1e-6).passed);
}

TEST(NagumoProbe, Examples) {
  EXPECT_NEAR(nagumo_probe([](double, double v) { return v + 1.0; }, 100.0, 200000),
              4.615120516841259, 1e-6);
  EXPECT_NEAR(nagumo_probe([](double, double) { return 1.0; }, 10.0, 2), 10.0, 1e-12);
  EXPECT_NEAR(nagumo_probe([](double, double v) { return (v + 1.0) * (v + 1.0); }, 100.0, 200000),
              1.0 - 1.0 / 101.0, 1e-6);
  EXPECT_THROW(nagumo_probe([](double, double v) { return v; }, 1.0, 8), PreconditionError);
}

TEST(FunctionalChecks, LinearAndMonotone) {
  const Mesh m = Mesh::uniform(0.0, 1.0, 64);
  EXPECT_TRUE(check_linear_functional(eighth_of_integral, m, 100).passed);
  const auto sq = check_linear_functional(
      [](const Trajectory& x) { return x(0.5) * x(0.5); }, m, 100);
  EXPECT_FALSE(sq.passed);
  const auto neg = check_linear_functional([](const Trajectory& x) { return -x(0.25); }, m, 100);
  EXPECT_FALSE(neg.passed);
  EXPECT_GT(neg.max_monotonicity_violation, 0.0);
  EXPECT_LE(neg.max_additivity_error, 1e-12);
}

TEST(FunctionalChecks, GrowthMonotone) {
  EXPECT_TRUE(check_growth_monotone([](double u, double v) { return u + v + 1.0; }, 10.0, 20));
  EXPECT_FALSE(check_growth_monotone([](double u, double) { return std::cos(u); }, 10.0, 20));
}

}  // namespace
}  // namespace devmono
