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

#include "devmono/rootfind.hpp"
#include "support/root_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <string>

namespace devmono {
namespace {

using Fn = std::function<double(double)>;
using testsupport::oracle_greatest;
using testsupport::oracle_least;

struct Case {
  std::string name;
  Fn h;
  double a, b;
};

std::vector<Case> suite() {
  return {
      {"linear", [](double x) { return x - 0.5; }, 0.0, 1.0},
      {"cubic", [](double x) { return (x + 0.5) * x * (x - 0.5); }, -1.0, 1.0},
      {"flat", [](double x) { return x < -0.25 ? x + 0.25 : (x > 0.25 ? x - 0.25 : 0.0); },
       -1.0, 1.0},
      {"step", [](double x) { return x < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0},
      {"downward_jump", [](double x) { return x < 0.6 ? x : x - 0.8; }, -1.0, 1.0},
      {"staircase", [](double x) { return std::floor(8.0 * x) / 8.0 - 0.3; }, 0.0, 1.0},
      {"oscillating", [](double x) { return std::sin(9.0 * x) + 0.4 * x; }, -1.0, 1.5},
      {"zero", [](double) { return 0.0; }, -2.0, 3.0},
  };
}

TEST(GreatestZero, Examples) {
  EXPECT_NEAR(greatest_zero([](double x) { return x - 0.5; }, 0.0, 1.0), 0.5, 1e-12);
  EXPECT_EQ(greatest_zero([](double x) { return x; }, 0.0, 1.0), 0.0);
  EXPECT_NEAR(greatest_zero([](double x) { return (x + 0.5) * x * (x - 0.5); }, -1.0, 1.0), 0.5,
              1e-12);
  EXPECT_NEAR(greatest_zero([](double x) { return x < 0.6 ? x : x - 0.8; }, -1.0, 1.0), 0.8,
              1e-12);
  EXPECT_EQ(greatest_zero([](double) { return 0.0; }, -2.0, 3.0), 3.0);
}

TEST(LeastZero, Examples) {
  EXPECT_NEAR(least_zero([](double x) { return x - 0.5; }, 0.0, 1.0), 0.5, 1e-12);
  EXPECT_NEAR(least_zero([](double x) { return (x + 0.5) * x * (x - 0.5); }, -1.0, 1.0), -0.5,
              1e-12);
  EXPECT_NEAR(least_zero([](double x) { return x < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0), 0.3, 2e-12);
  EXPECT_EQ(least_zero([](double) { return 0.0; }, -2.0, 3.0), -2.0);
}

TEST(Zeros, StaircaseJumpsAtThreeEighths) {
  auto h = [](double x) { return std::floor(8.0 * x) / 8.0 - 0.3; };
  EXPECT_NEAR(greatest_zero(h, 0.0, 1.0), 0.375, 2e-12);
  EXPECT_NEAR(least_zero(h, 0.0, 1.0), 0.375, 2e-12);
}

TEST(Zeros, MatchBruteForceOracle) {
  for (const auto& c : suite()) {
    const double tol = default_root_tol(c.a, c.b);
    EXPECT_NEAR(greatest_zero(c.h, c.a, c.b), oracle_greatest(c.h, c.a, c.b), 2 * tol) << c.name;
    EXPECT_NEAR(least_zero(c.h, c.a, c.b), oracle_least(c.h, c.a, c.b), 2 * tol) << c.name;
  }
}

TEST(Zeros, BracketKeepsSignConfiguration) {
  for (const auto& c : suite()) {
    const double tol = 1e-9;
    const auto g = bracket_greatest_zero(c.h, c.a, c.b, 4096, tol);
    EXPECT_LE(g.lo, g.hi) << c.name;
    EXPECT_LE(g.hi - g.lo, tol) << c.name;
    EXPECT_LE(g.h_lo, 0.0) << c.name;
    EXPECT_GE(g.h_hi, 0.0) << c.name;
    const auto l = bracket_least_zero(c.h, c.a, c.b, 4096, tol);
    EXPECT_LE(l.hi - l.lo, tol) << c.name;
    EXPECT_LE(l.h_lo, 0.0) << c.name;
    EXPECT_GE(l.h_hi, 0.0) << c.name;
  }
}

TEST(Zeros, LeastNeverExceedsGreatest) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r1 = u(rng), r2 = u(rng), r3 = u(rng), jump = 0.5 * (u(rng) + 1.0);
    const double cut = u(rng);
    auto h = [=](double x) {
      const double p = (x - r1) * (x - r2) * (x - r3);
      return x < cut ? p : p - jump;
    };
    if (!(h(-1.0) <= 0.0 && h(1.0) >= 0.0)) continue;
    const double tol = default_root_tol(-1.0, 1.0);
    EXPECT_LE(least_zero(h, -1.0, 1.0), greatest_zero(h, -1.0, 1.0) + tol);
  }
}

TEST(Zeros, IncreasingFunctionAgreesWithBisection) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    const double r = u(rng);
    auto h = [r](double x) { return std::atan(5.0 * (x - r)) + 0.1 * (x - r); };
    double lo = -1.0, hi = 1.0;
    while (hi - lo > 1e-14) {
      const double m = 0.5 * (lo + hi);
      (h(m) <= 0.0 ? lo : hi) = m;
    }
    EXPECT_NEAR(greatest_zero(h, -1.0, 1.0), lo, 1e-11);
    EXPECT_NEAR(least_zero(h, -1.0, 1.0), lo, 1e-11);
    EXPECT_LE(std::abs(h(greatest_zero(h, -1.0, 1.0))), 6e-11);
  }
}

TEST(Zeros, BoundaryAnchorOfDelayExample) {
  // B(v, alpha) = v - (1/8) int_0^1 alpha with alpha(t) = 2 - 4 e^t.
  const double mass = (2.0 - 4.0 * (std::exp(1.0) - 1.0)) / 8.0;
  auto h = [mass](double v) { return v - mass; };
  EXPECT_NEAR(greatest_zero(h, -2.0, 2.0), -0.609140914229523, 1e-8);
  EXPECT_NEAR(least_zero(h, -2.0, 2.0), -0.609140914229523, 1e-8);
}

TEST(Zeros, SignPreconditionReportsEndValues) {
  try {
    greatest_zero([](double x) { return x + 2.0; }, 0.0, 1.0);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("= 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("= 3"), std::string::npos) << msg;
  }
  EXPECT_THROW(least_zero([](double x) { return -x - 1.0; }, 0.0, 1.0), PreconditionError);
  EXPECT_THROW(greatest_zero([](double x) { return x; }, 1.0, -1.0), PreconditionError);
  EXPECT_THROW(greatest_zero([](double x) { return x > 0.2 ? NAN : x - 1.0; }, 0.0, 1.0),
               EvaluationError);
}

}  // namespace
}  // namespace devmono
