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

// Seeded synthetic instances.
//
// Cells sit at the midpoints x_c = (c + 1/2) / C of [0, 1] with unit
// weights. Population i is a Gaussian bump of width 0.15 centered at
// 0.5 + (i - (n - 1) / 2) * separation, normalized to unit mass. Scores are
// the ramp 10 * x_c plus uniform noise in [-0.5, 0.5]. Targets are the mean
// of the population averages, so residuals are nonzero unless the
// populations coincide.

#ifndef FAIRSCORE_SYNTH_HPP_
#define FAIRSCORE_SYNTH_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "fairscore/io.hpp"
#include "fairscore/profile_space.hpp"

namespace fairscore {

struct SynthOptions {
  std::size_t cells = 50;
  std::size_t populations = 2;
  std::uint64_t seed = 1;
  double separation = 0.2;
};

inline Instance generate_synthetic(const SynthOptions& options) {
  if (options.cells < 1) throw std::invalid_argument("synth: need at least 1 cell");
  if (options.populations < 1) {
    throw std::invalid_argument("synth: need at least 1 population");
  }
  if (!std::isfinite(options.separation)) {
    throw std::invalid_argument("synth: separation must be finite");
  }
  constexpr double kWidth = 0.15;
  constexpr double kNoise = 0.5;

  // mt19937_64 output is fixed by the standard; the mapping to [0, 1) is
  // done here rather than through a distribution so files are identical
  // across standard libraries.
  std::mt19937_64 rng(options.seed);
  auto uniform = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  const std::size_t cells = options.cells;
  Instance inst;
  inst.space = ProfileSpace::Uniform(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    inst.space.cell_ids[c] = "c" + std::to_string(c);
  }

  std::vector<double> x(cells);
  inst.scores.values.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    x[c] = (static_cast<double>(c) + 0.5) / static_cast<double>(cells);
    inst.scores[c] = 10.0 * x[c] + kNoise * (2.0 * uniform() - 1.0);
  }

  const double mid = 0.5 * static_cast<double>(options.populations - 1);
  for (std::size_t i = 0; i < options.populations; ++i) {
    const double center =
        0.5 + (static_cast<double>(i) - mid) * options.separation;
    PopulationModel pop;
    pop.name = "pop" + std::to_string(i + 1);
    pop.density.resize(cells);
    double mass = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      const double z = (x[c] - center) / kWidth;
      pop.density[c] = std::exp(-0.5 * z * z);
      mass += pop.density[c];
    }
    if (!(mass > 0.0)) {
      throw std::invalid_argument("synth: separation pushes " + pop.name +
                                  " off the profile range");
    }
    for (double& p : pop.density) p /= mass;
    inst.populations.push_back(std::move(pop));
  }

  double grand_mean = 0.0;
  for (const auto& pop : inst.populations) {
    grand_mean += population_average(inst.space, pop, inst.scores);
  }
  grand_mean /= static_cast<double>(options.populations);
  inst.targets = TargetVector{std::vector<double>(options.populations, grand_mean)};
  return inst;
}

}  // namespace fairscore

#endif  // FAIRSCORE_SYNTH_HPP_
