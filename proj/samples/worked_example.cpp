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

// Equalizes two populations on three cells twice, once in closed form and
// once through the LP, then trades accuracy for fairness with an error cap.

#include <iostream>
#include <vector>

#include "fairscore/fairscore.hpp"

namespace {

void print(const char* label, const fairscore::ScoreTable& table) {
  std::cout << label;
  for (double x : table.values) std::cout << ' ' << x;
  std::cout << '\n';
}

}  // namespace

int main() {
  using namespace fairscore;

  const ProfileSpace space = ProfileSpace::Uniform(3);
  const std::vector<PopulationModel> pops = {
      {"group1", {0.5, 0.3, 0.2}},
      {"group2", {0.2, 0.3, 0.5}},
  };
  const ScoreTable f{{1.0, 2.0, 3.0}};

  const TwoPopSolution closed = solve_two_pop(space, pops[0], pops[1], f);
  std::cout << "closed form: k = " << closed.k << '\n';
  print("  h =", closed.h);

  // Same problem as an LP: both targets at the common average, cells grouped
  // by which population is the majority there.
  const double common = population_average(space, pops[0], closed.h);
  const TargetVector targets{{common, common}};
  const Partition majority({0, 1, 1}, 2);
  const CorrectionResult lp =
      remove_discrimination(space, pops, f, targets, majority);
  std::cout << "LP: status " << to_string(lp.lp.status)
            << ", gamma = " << lp.bonus_malus.gamma << '\n';
  print("  h =", *lp.corrected);

  // Allow each score to move by at most 0.5 and see how close we get.
  const CorrectionResult capped =
      minimize_discrimination(space, pops, f, targets, majority, 0.5);
  std::cout << "error cap 0.5: worst remaining gap = "
            << capped.bonus_malus.gamma << '\n';
  print("  h =", *capped.corrected);

  const AuditReport after = audit(space, pops, *capped.corrected, targets);
  for (const auto& row : after.rows) {
    std::cout << "  " << row.name << ": average " << row.average << ", gap "
              << row.gap << '\n';
  }
  return 0;
}
