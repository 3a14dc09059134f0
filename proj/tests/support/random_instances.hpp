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

// Seeded generators for property tests, plus reference computations that
// deliberately avoid the library's code paths.

#ifndef FAIRSCORE_TESTS_RANDOM_INSTANCES_HPP_
#define FAIRSCORE_TESTS_RANDOM_INSTANCES_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "fairscore/profile_space.hpp"

namespace fairscore::testing {

struct RandomInstance {
  ProfileSpace space;
  std::vector<PopulationModel> pops;
  ScoreTable f;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  ProfileSpace space(std::size_t cells, bool varied_weights) {
    ProfileSpace s = ProfileSpace::Uniform(cells);
    if (varied_weights) {
      for (double& w : s.weights) w = uniform(0.2, 2.0);
    }
    return s;
  }

  PopulationModel density(const ProfileSpace& s, std::size_t id) {
    PopulationModel p;
    p.name = "p" + std::to_string(id + 1);
    p.density.resize(s.size());
    double mass = 0.0;
    for (std::size_t c = 0; c < s.size(); ++c) {
      p.density[c] = uniform(0.05, 1.0);
      mass += p.density[c] * s.weights[c];
    }
    for (double& d : p.density) d /= mass;
    return p;
  }

  ScoreTable scores(std::size_t cells, double lo = -3.0, double hi = 3.0) {
    ScoreTable t;
    t.values.resize(cells);
    for (double& x : t.values) x = uniform(lo, hi);
    return t;
  }

  RandomInstance instance(std::size_t cells, std::size_t populations,
                          bool varied_weights = false) {
    RandomInstance out;
    out.space = space(cells, varied_weights);
    for (std::size_t i = 0; i < populations; ++i) {
      out.pops.push_back(density(out.space, i));
    }
    out.f = scores(cells);
    return out;
  }

  // Every group gets at least one cell.
  Partition partition(std::size_t cells, std::size_t groups) {
    std::vector<std::size_t> order(cells);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    std::vector<std::size_t> group_of(cells);
    for (std::size_t k = 0; k < cells; ++k) {
      group_of[order[k]] = k < groups ? k : index(0, groups - 1);
    }
    return Partition(std::move(group_of), groups);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Reference average: long double accumulation in reverse cell order.
inline double reference_average(const ProfileSpace& space,
                                const PopulationModel& pop,
                                const ScoreTable& scores) {
  long double total = 0.0L;
  for (std::size_t c = space.size(); c-- > 0;) {
    total += static_cast<long double>(pop.density[c]) * scores[c] *
             space.weights[c];
  }
  return static_cast<double>(total);
}

// Reference sup-norm distance by exhaustive scan.
inline double reference_sup_distance(const ScoreTable& a, const ScoreTable& b) {
  double best = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = a[c] > b[c] ? a[c] - b[c] : b[c] - a[c];
    if (d > best) best = d;
  }
  return best;
}

}  // namespace fairscore::testing

#endif  // FAIRSCORE_TESTS_RANDOM_INSTANCES_HPP_
