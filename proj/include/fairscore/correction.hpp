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

// End-to-end correction pipelines: residual targets, group masses, LP,
// decoding, reassembly.

#ifndef FAIRSCORE_CORRECTION_HPP_
#define FAIRSCORE_CORRECTION_HPP_

#include <optional>
#include <span>

#include "fairscore/lp_builder.hpp"
#include "fairscore/profile_space.hpp"
#include "fairscore/reduction.hpp"
#include "fairscore/simplex.hpp"

namespace fairscore {

struct CorrectionResult {
  ResidualTargets residuals;
  GroupMassMatrix masses;
  LpModel model;
  LpSolution lp;
  BonusMalusSolution bonus_malus;
  std::optional<ScoreTable> corrected;  // f + u when the LP is optimal
};

namespace detail {

inline CorrectionResult run_correction(LpKind kind, const ProfileSpace& space,
                                       std::span<const PopulationModel> pops,
                                       const ScoreTable& f,
                                       const TargetVector& targets,
                                       const Partition& partition,
                                       double epsilon,
                                       const SimplexOptions& options) {
  ResidualTargets b = residual_targets(space, pops, f, targets);
  GroupMassMatrix v = group_mass(space, pops, partition);
  LpModel model = kind == LpKind::kForward ? build_forward_lp(v, b)
                                           : build_inverse_lp(v, b, epsilon);
  LpSolution lp = solve(model, options);
  BonusMalusSolution bm = decode_solution(kind, lp, partition, space);
  std::optional<ScoreTable> h;
  if (bm.u) {
    h = kind == LpKind::kForward ? assemble_forward(f, *bm.u)
                                 : assemble_inverse(f, *bm.u);
  }
  return CorrectionResult{std::move(b),  std::move(v),  std::move(model),
                          std::move(lp), std::move(bm), std::move(h)};
}

}  // namespace detail

// Smallest max-norm flat correction that moves every population average
// onto its target. Infeasible when no flat correction hits all targets.
inline CorrectionResult remove_discrimination(
    const ProfileSpace& space, std::span<const PopulationModel> pops,
    const ScoreTable& f, const TargetVector& targets,
    const Partition& partition, const SimplexOptions& options = {}) {
  return detail::run_correction(LpKind::kForward, space, pops, f, targets,
                                partition, 0.0, options);
}

// Flat correction bounded by epsilon in max-norm that minimizes the worst
// distance between a population average and its target. Always feasible.
inline CorrectionResult minimize_discrimination(
    const ProfileSpace& space, std::span<const PopulationModel> pops,
    const ScoreTable& f, const TargetVector& targets,
    const Partition& partition, double epsilon,
    const SimplexOptions& options = {}) {
  return detail::run_correction(LpKind::kInverse, space, pops, f, targets,
                                partition, epsilon, options);
}

}  // namespace fairscore

#endif  // FAIRSCORE_CORRECTION_HPP_
