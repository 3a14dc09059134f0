// Copyright 2026 The fairscore Authors
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

#include "fairscore/simplex.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support/lp_enumeration.hpp"
#include "support/random_instances.hpp"

namespace fairscore {
namespace {

constexpr double kFeasTolerance = 1e-9;

LpModel make_model(std::vector<double> objective,
                   std::vector<std::pair<std::vector<double>, double>> rows) {
  LpModel m;
  m.objective = std::move(objective);
  for (auto& [coefficients, bound] : rows) {
    m.constraints.push_back({std::move(coefficients), bound});
  }
  return m;
}

LpModel random_model(testing::Generator& gen) {
  const std::size_t vars = gen.index(1, 4);
  const std::size_t rows = gen.index(1, 5);
  LpModel m;
  for (std::size_t j = 0; j < vars; ++j) {
    m.objective.push_back(static_cast<double>(gen.index(0, 6)) - 3.0);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    LpConstraint row;
    for (std::size_t j = 0; j < vars; ++j) {
      // Small integers make ties and degenerate vertices common.
      row.coefficients.push_back(static_cast<double>(gen.index(0, 6)) - 3.0);
    }
    row.bound = static_cast<double>(gen.index(0, 8)) - 2.0;
    m.constraints.push_back(row);
  }
  return m;
}

TEST(Solve, SingleGroupForwardModel) {
  // alpha - g <= 0, beta - g <= 0, alpha - beta = 0.5 as two rows.
  const auto m = make_model({0, 0, -1}, {{{1, 0, -1}, 0},
                                         {{0, 1, -1}, 0},
                                         {{1, -1, 0}, 0.5},
                                         {{-1, 1, 0}, -0.5}});
  const auto sol = solve(m);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.x[2], 0.5, 1e-12);
  EXPECT_NEAR(sol.objective, -0.5, 1e-12);
  EXPECT_NEAR(sol.x[0] - sol.x[1], 0.5, 1e-12);
}

TEST(Solve, UpperBoundOnly) {
  const auto sol = solve(make_model({1}, {{{1}, 1}}));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(sol.x[0], 1.0);
  EXPECT_DOUBLE_EQ(sol.objective, 1.0);
}

TEST(Solve, Infeasible) {
  // x <= -1 with x >= 0.
  EXPECT_EQ(solve(make_model({1}, {{{1}, -1}})).status, LpStatus::kInfeasible);
  // x + y <= 1 and x + y >= 3.
  EXPECT_EQ(solve(make_model({1, 1}, {{{1, 1}, 1}, {{-1, -1}, -3}})).status,
            LpStatus::kInfeasible);
}

TEST(Solve, Unbounded) {
  EXPECT_EQ(solve(make_model({1}, {{{-1}, 0}})).status, LpStatus::kUnbounded);
  EXPECT_EQ(solve(make_model({1, 0}, {})).status, LpStatus::kUnbounded);
}

TEST(Solve, NoConstraints) {
  const auto sol = solve(make_model({-1, -2}, {}));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.objective, 0.0);
}

TEST(Solve, RejectsInconsistentDimensions) {
  EXPECT_THROW(solve(make_model({1, 1}, {{{1}, 1}})), std::invalid_argument);
  EXPECT_THROW(solve(make_model({1}, {{{NAN}, 1}})), std::invalid_argument);
  EXPECT_THROW(solve(make_model({INFINITY}, {{{1}, 1}})), std::invalid_argument);
  EXPECT_THROW(solve(make_model({1}, {{{1}, NAN}})), std::invalid_argument);
}

TEST(Solve, ZeroRows) {
  EXPECT_EQ(solve(make_model({1}, {{{0}, -1}, {{1}, 1}})).status,
            LpStatus::kInfeasible);
  const auto sol = solve(make_model({1}, {{{0}, 2}, {{1}, 1}}));
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(sol.objective, 1.0);
}

TEST(Solve, BealeCyclingExample) {
  // Cycles under textbook Dantzig pricing with lowest-index ties.
  const auto m = make_model({0.75, -20, 0.5, -6},
                            {{{0.25, -8, -1, 9}, 0},
                             {{0.5, -12, -0.5, 3}, 0},
                             {{0, 0, 1, 0}, 1}});
  const auto sol = solve(m);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 1.25, 1e-12);
  EXPECT_NEAR(testing::enumerate_lp(m).objective, 1.25, 1e-12);
}

TEST(Solve, DuplicatedRowsAreDegenerateButSolved) {
  const auto m = make_model({1, 1}, {{{1, 2}, 4},
                                     {{1, 2}, 4},
                                     {{2, 1}, 4},
                                     {{2, 1}, 4},
                                     {{1, 1}, 8.0 / 3.0}});
  const auto sol = solve(m);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 8.0 / 3.0, 1e-12);
  EXPECT_LE(max_violation(m, sol.x), kFeasTolerance);
}

TEST(Solve, TraceWritesTableaux) {
  std::ostringstream trace;
  SimplexOptions options;
  options.trace = &trace;
  const auto sol = solve(make_model({1, 1}, {{{1, 2}, 4}, {{2, 1}, 4}}), options);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_GT(sol.iterations, 0u);
  EXPECT_FALSE(trace.str().empty());
}

TEST(Solve, StatusNames) {
  EXPECT_STREQ(to_string(LpStatus::kOptimal), "optimal");
  EXPECT_STREQ(to_string(LpStatus::kInfeasible), "infeasible");
  EXPECT_STREQ(to_string(LpStatus::kUnbounded), "unbounded");
}

TEST(SolveProperty, AgreesWithVertexEnumeration) {
  testing::Generator gen(41);
  int counts[3] = {0, 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = random_model(gen);
    const auto expected = testing::enumerate_lp(m);
    const auto sol = solve(m);
    ++counts[static_cast<int>(expected.status)];
    ASSERT_EQ(sol.status, expected.status) << "trial " << trial;
    if (sol.status == LpStatus::kOptimal) {
      EXPECT_NEAR(sol.objective, expected.objective, 1e-9) << "trial " << trial;
      EXPECT_LE(max_violation(m, sol.x), kFeasTolerance) << "trial " << trial;
      double value = 0.0;
      for (std::size_t j = 0; j < sol.x.size(); ++j) value += m.objective[j] * sol.x[j];
      EXPECT_EQ(sol.objective, value);
    } else {
      EXPECT_TRUE(sol.x.empty());
    }
  }
  // The generator reaches every status.
  EXPECT_GT(counts[0], 20);
  EXPECT_GT(counts[1], 20);
  EXPECT_GT(counts[2], 20);
}

TEST(SolveProperty, StrongDualityOnOptimalModels) {
  testing::Generator gen(42);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    const auto m = random_model(gen);
    const auto sol = solve(m);
    if (sol.status != LpStatus::kOptimal || m.constraints.empty()) continue;
    EXPECT_NEAR(sol.objective, testing::enumerate_dual(m), 1e-9) << "trial " << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 40);
}

TEST(SolveProperty, MergingEqualitiesDoesNotChangeTheOptimum) {
  testing::Generator gen(43);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = random_model(gen);
    // Add a paired row so the merge path triggers.
    LpConstraint row = m.constraints.front();
    LpConstraint mirror = row;
    for (double& a : mirror.coefficients) a = -a;
    mirror.bound = -row.bound;
    m.constraints.push_back(mirror);
    SimplexOptions plain;
    plain.merge_equalities = false;
    const auto merged = solve(m);
    const auto split = solve(m, plain);
    const auto expected = testing::enumerate_lp(m);
    ASSERT_EQ(merged.status, expected.status) << "trial " << trial;
    ASSERT_EQ(split.status, expected.status) << "trial " << trial;
    if (expected.status == LpStatus::kOptimal) {
      EXPECT_NEAR(merged.objective, expected.objective, 1e-9);
      EXPECT_NEAR(split.objective, expected.objective, 1e-9);
    }
  }
}

TEST(SolveProperty, BitwiseDeterministic) {
  testing::Generator gen(44);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_model(gen);
    const auto first = solve(m);
    for (int again = 0; again < 2; ++again) {
      const auto next = solve(m);
      EXPECT_EQ(next.status, first.status);
      EXPECT_EQ(next.x, first.x);
      EXPECT_EQ(next.iterations, first.iterations);
    }
  }
}

}  // namespace
}  // namespace fairscore
