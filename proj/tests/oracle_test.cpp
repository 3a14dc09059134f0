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

#include "fairscore/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "support/random_instances.hpp"

namespace fairscore {
namespace {

struct Worked {
  ProfileSpace space = ProfileSpace::Uniform(3);
  std::vector<PopulationModel> pops = {{"p1", {0.5, 0.3, 0.2}},
                                       {"p2", {0.2, 0.3, 0.5}}};
  ScoreTable f{{1, 2, 3}};
};

GridSpec unit_grid(std::size_t steps = 201) {
  GridSpec g;
  g.lo = -1.0;
  g.hi = 1.0;
  g.steps = steps;
  return g;
}

TEST(GridSpec, Values) {
  const auto g = unit_grid();
  EXPECT_DOUBLE_EQ(g.step(), 0.01);
  EXPECT_EQ(g.value(0), -1.0);
  EXPECT_EQ(g.value(200), 1.0);
  GridSpec bad = g;
  bad.steps = 1;
  EXPECT_THROW(bad.check(), std::invalid_argument);
  bad = g;
  bad.hi = bad.lo;
  EXPECT_THROW(bad.check(), std::invalid_argument);
}

TEST(BruteForceForward, ZeroResiduals) {
  const auto space = ProfileSpace::Uniform(3);
  const std::vector<PopulationModel> pops = {{"a", {0.3, 0.5, 0.2}}};
  const auto r = brute_force_forward(space, pops, ResidualTargets{{0.0}},
                                     Partition::Singletons(3), unit_grid());
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->best, 0.0, 1e-12);
}

TEST(BruteForceForward, SingleGroup) {
  const auto space = ProfileSpace::Uniform(1);
  const std::vector<PopulationModel> pops = {{"a", {1.0}}};
  const auto r = brute_force_forward(space, pops, ResidualTargets{{0.5}},
                                     Partition::SingleGroup(1), unit_grid());
  ASSERT_TRUE(r);
  EXPECT_DOUBLE_EQ(r->best, 0.5);
  EXPECT_EQ(r->group_values, (std::vector<double>{0.5}));
}

TEST(BruteForceForward, EnumeratesFreeGroups) {
  // w1 + w2 = 1 on equal halves: best is the even split.
  const auto space = ProfileSpace::Uniform(2);
  const std::vector<PopulationModel> pops = {{"a", {0.5, 0.5}}};
  const auto r = brute_force_forward(space, pops, ResidualTargets{{0.5}},
                                     Partition::Singletons(2), unit_grid());
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->best, 0.5, 1e-12);
  EXPECT_NEAR(r->group_values[0], 0.5, 1e-12);
  EXPECT_NEAR(r->group_values[1], 0.5, 1e-12);
  EXPECT_GT(r->resolution, 0.0);
  EXPECT_EQ(r->visited, 201u);
}

TEST(BruteForceForward, TwoPopulationSignPartition) {
  const Worked w;
  const ResidualTargets b{{1.7 - population_average(w.space, w.pops[0], w.f),
                           1.7 - population_average(w.space, w.pops[1], w.f)}};
  const auto r = brute_force_forward(w.space, w.pops, b, Partition({0, 1, 1}, 2),
                                     unit_grid());
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->best, 1.0, 1e-12);
  EXPECT_NEAR(r->group_values[0], 1.0, 1e-12);
  EXPECT_NEAR(r->group_values[1], -1.0, 1e-12);
  EXPECT_NEAR(r->table[2], -1.0, 1e-12);
}

TEST(BruteForceForward, UnreachableReturnsNothing) {
  const Worked w;
  const auto r = brute_force_forward(w.space, w.pops, ResidualTargets{{1.0, -1.0}},
                                     Partition::SingleGroup(3), unit_grid());
  EXPECT_FALSE(r);
}

TEST(BruteForceForward, RefusesOversizedGrids) {
  const auto space = ProfileSpace::Uniform(5);
  const std::vector<PopulationModel> pops = {{"a", {0.2, 0.2, 0.2, 0.2, 0.2}}};
  GridSpec g = unit_grid();
  g.cap = 1000;
  EXPECT_THROW(brute_force_forward(space, pops, ResidualTargets{{0.1}},
                                   Partition::Singletons(5), g),
               GridCapExceeded);
}

TEST(BruteForceInverse, Examples) {
  const auto space = ProfileSpace::Uniform(1);
  const std::vector<PopulationModel> pops = {{"a", {1.0}}};
  const Partition one = Partition::SingleGroup(1);
  const ResidualTargets b{{0.5}};
  const auto zero = brute_force_inverse(space, pops, b, one, 0.0, unit_grid());
  EXPECT_EQ(zero.best, 0.5);
  EXPECT_EQ(zero.visited, 1u);
  const auto capped = brute_force_inverse(space, pops, b, one, 0.2, unit_grid());
  EXPECT_NEAR(capped.best, 0.3, 1e-12);
  EXPECT_NEAR(capped.group_values[0], 0.2, 1e-12);
  const auto roomy = brute_force_inverse(space, pops, b, one, 1.0, unit_grid());
  EXPECT_NEAR(roomy.best, 0.0, 1e-12);
  EXPECT_THROW(brute_force_inverse(space, pops, b, one, -1.0, unit_grid()),
               std::invalid_argument);
}

TEST(BruteForceInverse, ZeroEpsilonIsLargestResidual) {
  testing::Generator gen(61);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen.index(1, 4);
    const auto inst = gen.instance(4, n);
    ResidualTargets b;
    double largest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      b.b.push_back(gen.uniform(-2, 2));
      largest = std::max(largest, std::abs(b.b.back()));
    }
    const auto r = brute_force_inverse(inst.space, inst.pops, b,
                                       Partition::Singletons(4), 0.0, unit_grid());
    EXPECT_EQ(r.best, largest);
  }
}

TEST(BruteForceInverse, RefusesOversizedGrids) {
  const auto space = ProfileSpace::Uniform(4);
  const std::vector<PopulationModel> pops = {{"a", {0.25, 0.25, 0.25, 0.25}}};
  GridSpec g = unit_grid();
  g.cap = 1000;
  EXPECT_THROW(brute_force_inverse(space, pops, ResidualTargets{{0.1}},
                                   Partition::Singletons(4), 0.5, g),
               GridCapExceeded);
}

TEST(BruteForce, Deterministic) {
  testing::Generator gen(62);
  const auto inst = gen.instance(6, 2);
  const Partition part = gen.partition(6, 3);
  const ResidualTargets b{{0.3, -0.2}};
  const auto a = brute_force_inverse(inst.space, inst.pops, b, part, 0.4, unit_grid(101));
  const auto c = brute_force_inverse(inst.space, inst.pops, b, part, 0.4, unit_grid(101));
  EXPECT_EQ(a.best, c.best);
  EXPECT_EQ(a.group_values, c.group_values);
  const auto grid = default_forward_grid(inst.space, inst.pops, b, part);
  const auto f1 = brute_force_forward(inst.space, inst.pops, b, part, grid);
  const auto f2 = brute_force_forward(inst.space, inst.pops, b, part, grid);
  ASSERT_TRUE(f1 && f2);
  EXPECT_EQ(f1->best, f2->best);
  EXPECT_EQ(f1->group_values, f2->group_values);
}

TEST(VerifyTwoPopOptimality, WorkedInstance) {
  const Worked w;
  const auto v = verify_two_pop_optimality(w.space, w.pops[0], w.pops[1], w.f, 1.0);
  EXPECT_TRUE(v.optimal) << v.reason;
  EXPECT_FALSE(v.witness);
  EXPECT_GT(v.visited, 0u);
}

TEST(VerifyTwoPopOptimality, IdenticalPopulations) {
  const Worked w;
  const auto v = verify_two_pop_optimality(w.space, w.pops[0], w.pops[0], w.f, 0.0);
  EXPECT_TRUE(v.optimal) << v.reason;
}

TEST(VerifyTwoPopOptimality, RejectsWrongClaims) {
  const Worked w;
  const auto half = verify_two_pop_optimality(w.space, w.pops[0], w.pops[1], w.f, 0.5);
  EXPECT_FALSE(half.optimal);
  const auto twice = verify_two_pop_optimality(w.space, w.pops[0], w.pops[1], w.f, 2.0);
  EXPECT_FALSE(twice.optimal);
  ASSERT_TRUE(twice.witness);
  EXPECT_EQ(twice.witness->size(), 3u);
  // A nonzero claim for identical populations: f itself is fair.
  const auto same = verify_two_pop_optimality(w.space, w.pops[0], w.pops[0], w.f, 1.0);
  EXPECT_FALSE(same.optimal);
  ASSERT_TRUE(same.witness);
  EXPECT_EQ(*same.witness, w.f);
}

TEST(VerifyTwoPopOptimality, DisjointSupports) {
  // p1 = (1, 0), p2 = (0, 1): every fair table has h1 = h2, so from
  // f = (0, 2) the cheapest move is 1 on each cell.
  const auto space = ProfileSpace::Uniform(2);
  const PopulationModel p1{"p1", {1.0, 0.0}};
  const PopulationModel p2{"p2", {0.0, 1.0}};
  const ScoreTable f{{0, 2}};
  const auto ok = verify_two_pop_optimality(space, p1, p2, f, 1.0);
  EXPECT_TRUE(ok.optimal) << ok.reason;
  EXPECT_THROW(verify_two_pop_optimality(space, p1, p2, f, 1.0, 3),
               std::invalid_argument);
}

TEST(VerifyTwoPopOptimality, RefusesOversizedGrids) {
  const auto space = ProfileSpace::Uniform(4);
  const PopulationModel p1{"p1", {0.4, 0.3, 0.2, 0.1}};
  const PopulationModel p2{"p2", {0.1, 0.2, 0.3, 0.4}};
  const ScoreTable f{{1, 2, 3, 4}};
  double gap = 0.0, spread = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    const double d = p1.density[c] - p2.density[c];
    gap += d * f[c];
    spread += std::abs(d);
  }
  EXPECT_THROW(verify_two_pop_optimality(space, p1, p2, f, -gap / spread, 201, 1000),
               GridCapExceeded);
}

}  // namespace
}  // namespace fairscore
