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

// Discrete data model for score post-processing.
//
// A profile set is a finite, ordered list of cells. Each cell carries a
// positive weight so that a continuous profile set can be represented by a
// quadrature rule; every integral over profiles becomes
//
//   sum over cells of  integrand(cell) * weight(cell).
//
// Populations are densities tabulated on the same cells, and score functions
// are per-cell tables. All types are plain values; validation is a separate,
// non-throwing step (validate_instance) so that callers can report every
// problem in an input at once.

#ifndef FAIRSCORE_PROFILE_SPACE_HPP_
#define FAIRSCORE_PROFILE_SPACE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace fairscore {

// Tolerance on sum(density * weight) == 1.
inline constexpr double kNormTolerance = 1e-9;

struct ProfileSpace {
  std::vector<std::string> cell_ids;
  std::vector<double> weights;

  std::size_t size() const { return cell_ids.size(); }

  // Cells labelled "0", "1", ... with unit weights.
  static ProfileSpace Uniform(std::size_t cells) {
    ProfileSpace space;
    space.cell_ids.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      space.cell_ids.push_back(std::to_string(c));
    }
    space.weights.assign(cells, 1.0);
    return space;
  }

  bool operator==(const ProfileSpace&) const = default;
};

struct PopulationModel {
  std::string name;
  std::vector<double> density;

  bool operator==(const PopulationModel&) const = default;
};

struct ScoreTable {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t c) const { return values[c]; }
  double& operator[](std::size_t c) { return values[c]; }

  bool operator==(const ScoreTable&) const = default;
};

struct TargetVector {
  std::vector<double> y;

  std::size_t size() const { return y.size(); }

  bool operator==(const TargetVector&) const = default;
};

// Assignment of every cell to one of `groups` non-empty groups. Group indices
// are 0-based in memory; the file formats use 1-based indices.
class Partition {
 public:
  Partition() = default;

  // Throws std::invalid_argument if an index is out of range or a group in
  // [0, groups) has no cell.
  Partition(std::vector<std::size_t> group_of, std::size_t groups)
      : group_of_(std::move(group_of)), groups_(groups) {
    if (groups_ == 0) throw std::invalid_argument("partition has no groups");
    std::vector<bool> used(groups_, false);
    for (std::size_t g : group_of_) {
      if (g >= groups_) {
        throw std::invalid_argument("partition group index out of range");
      }
      used[g] = true;
    }
    for (std::size_t g = 0; g < groups_; ++g) {
      if (!used[g]) {
        throw std::invalid_argument("partition group " + std::to_string(g + 1) +
                                    " is empty");
      }
    }
  }

  // Builds from 1-based indices; the group count is the largest index.
  static Partition FromOneBased(std::span<const long long> indices) {
    std::vector<std::size_t> group_of;
    group_of.reserve(indices.size());
    long long largest = 0;
    for (long long g : indices) {
      if (g < 1) throw std::invalid_argument("partition indices are 1-based");
      group_of.push_back(static_cast<std::size_t>(g - 1));
      largest = std::max(largest, g);
    }
    return Partition(std::move(group_of), static_cast<std::size_t>(largest));
  }

  // One group per cell: the finest partition.
  static Partition Singletons(std::size_t cells) {
    std::vector<std::size_t> group_of(cells);
    for (std::size_t c = 0; c < cells; ++c) group_of[c] = c;
    return Partition(std::move(group_of), cells);
  }

  static Partition SingleGroup(std::size_t cells) {
    return Partition(std::vector<std::size_t>(cells, 0), 1);
  }

  std::size_t groups() const { return groups_; }
  std::size_t cells() const { return group_of_.size(); }
  std::size_t group_of(std::size_t cell) const { return group_of_[cell]; }
  const std::vector<std::size_t>& assignment() const { return group_of_; }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> group_of_;
  std::size_t groups_ = 0;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Lists every violated invariant of the instance; never throws.
inline ValidationReport validate_instance(
    const ProfileSpace& space, std::span<const PopulationModel> pops,
    const ScoreTable& scores) {
  ValidationReport report;
  auto flag = [&report](std::string what) {
    report.violations.push_back(std::move(what));
  };

  const std::size_t cells = space.size();
  if (cells == 0) flag("no cells");
  if (space.weights.size() != cells) {
    flag("weights: expected " + std::to_string(cells) + " entries, got " +
         std::to_string(space.weights.size()));
  }
  for (std::size_t c = 0; c < space.weights.size(); ++c) {
    if (!std::isfinite(space.weights[c]) || space.weights[c] <= 0.0) {
      flag("nonpositive weight at cell " + std::to_string(c));
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : space.cell_ids) {
    if (!seen.insert(id).second) flag("duplicate cell id '" + id + "'");
  }

  if (scores.size() != cells) {
    flag("scores: expected " + std::to_string(cells) + " entries, got " +
         std::to_string(scores.size()));
  }
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (!std::isfinite(scores[c])) {
      flag("non-finite score at cell " + std::to_string(c));
    }
  }

  if (pops.empty()) flag("no populations");
  for (const auto& pop : pops) {
    const std::string who = "population '" + pop.name + "'";
    if (pop.density.size() != cells) {
      flag(who + ": density has " + std::to_string(pop.density.size()) +
           " entries, expected " + std::to_string(cells));
      continue;
    }
    bool well_formed = true;
    for (std::size_t c = 0; c < cells; ++c) {
      if (!std::isfinite(pop.density[c]) || pop.density[c] < 0.0) {
        flag(who + ": negative or non-finite density at cell " +
             std::to_string(c));
        well_formed = false;
      }
    }
    if (!well_formed || space.weights.size() != cells) continue;
    double mass = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      mass += pop.density[c] * space.weights[c];
    }
    if (std::abs(mass - 1.0) > kNormTolerance) {
      flag(who + ": density not normalized (total mass " +
           std::to_string(mass) + ")");
    }
  }
  return report;
}

// Rescales each density to unit mass. Only used when a caller explicitly
// opts in; validation never renormalizes.
inline void renormalize(const ProfileSpace& space,
                        std::vector<PopulationModel>& pops) {
  for (auto& pop : pops) {
    if (pop.density.size() != space.size()) continue;
    double mass = 0.0;
    for (std::size_t c = 0; c < space.size(); ++c) {
      mass += pop.density[c] * space.weights[c];
    }
    if (mass > 0.0) {
      for (double& p : pop.density) p /= mass;
    }
  }
}

// sum over cells of density * score * weight.
inline double population_average(const ProfileSpace& space,
                                 const PopulationModel& pop,
                                 const ScoreTable& scores) {
  if (pop.density.size() != space.size() || scores.size() != space.size()) {
    throw std::invalid_argument("population_average: shape mismatch");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < space.size(); ++c) {
    total += pop.density[c] * scores[c] * space.weights[c];
  }
  return total;
}

struct GapRow {
  std::string name;
  double average = 0.0;
  double target = 0.0;
  double gap = 0.0;  // average - target
};

struct AuditReport {
  std::vector<GapRow> rows;
  double max_abs_gap = 0.0;
};

inline AuditReport audit(const ProfileSpace& space,
                         std::span<const PopulationModel> pops,
                         const ScoreTable& scores,
                         const TargetVector& targets) {
  if (pops.size() != targets.size()) {
    throw std::invalid_argument("audit: " + std::to_string(pops.size()) +
                                " populations but " +
                                std::to_string(targets.size()) + " targets");
  }
  AuditReport report;
  report.rows.reserve(pops.size());
  for (std::size_t i = 0; i < pops.size(); ++i) {
    GapRow row;
    row.name = pops[i].name;
    row.average = population_average(space, pops[i], scores);
    row.target = targets.y[i];
    row.gap = row.average - row.target;
    report.max_abs_gap = std::max(report.max_abs_gap, std::abs(row.gap));
    report.rows.push_back(std::move(row));
  }
  return report;
}

// max over cells of |a - b|.
inline double sup_norm_distance(const ScoreTable& a, const ScoreTable& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("sup_norm_distance: shape mismatch");
  }
  double best = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    best = std::max(best, std::abs(a[c] - b[c]));
  }
  return best;
}

inline double sup_norm(const ScoreTable& a) {
  double best = 0.0;
  for (double x : a.values) best = std::max(best, std::abs(x));
  return best;
}

}  // namespace fairscore

#endif  // FAIRSCORE_PROFILE_SPACE_HPP_
