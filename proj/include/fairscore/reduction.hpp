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

// Shifting targets so that corrections can be solved for around zero.
//
// Hitting average y_i with h is the same as hitting residual
// b_i = y_i - avg_i(f) with the correction u = h - f. The residuals are
// computed once and passed along so that every later stage sees the same
// numbers.

#ifndef FAIRSCORE_REDUCTION_HPP_
#define FAIRSCORE_REDUCTION_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairscore/profile_space.hpp"

namespace fairscore {

struct ResidualTargets {
  std::vector<double> b;

  std::size_t size() const { return b.size(); }
};

inline ResidualTargets residual_targets(const ProfileSpace& space,
                                        std::span<const PopulationModel> pops,
                                        const ScoreTable& f,
                                        const TargetVector& targets) {
  if (pops.size() != targets.size()) {
    throw std::invalid_argument("residual_targets: " +
                                std::to_string(pops.size()) +
                                " populations but " +
                                std::to_string(targets.size()) + " targets");
  }
  ResidualTargets out;
  out.b.reserve(pops.size());
  for (std::size_t i = 0; i < pops.size(); ++i) {
    out.b.push_back(targets.y[i] - population_average(space, pops[i], f));
  }
  return out;
}

namespace detail {

inline ScoreTable add_tables(const ScoreTable& f, const ScoreTable& u) {
  if (f.size() != u.size()) {
    throw std::invalid_argument("score tables differ in size");
  }
  ScoreTable h;
  h.values.resize(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) h[c] = f[c] + u[c];
  return h;
}

}  // namespace detail

// h = f + u for a correction u that hits the residual targets.
inline ScoreTable assemble_forward(const ScoreTable& f, const ScoreTable& u) {
  return detail::add_tables(f, u);
}

// h = f + u for a correction u that minimizes the worst residual gap.
inline ScoreTable assemble_inverse(const ScoreTable& f, const ScoreTable& u) {
  return detail::add_tables(f, u);
}

}  // namespace fairscore

#endif  // FAIRSCORE_REDUCTION_HPP_
