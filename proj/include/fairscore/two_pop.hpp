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

// Closed-form equalization of two populations.
//
// Let d(x) = p1(x) - p2(x) and u(x) = +1 where d(x) > 0, -1 elsewhere.
// With A = sum d*u*w and B = sum d*f*w, the table h = f + k*u, k = -B/A,
// gives both populations the same average, and no table with equal averages
// is closer to f in the max norm than |k|. Cells with d(x) == 0 contribute
// nothing to A or B; they receive u = -1.

#ifndef FAIRSCORE_TWO_POP_HPP_
#define FAIRSCORE_TWO_POP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fairscore/profile_space.hpp"

namespace fairscore {

namespace detail {

// fl(f + shift), pulled toward f until |fl(h - f)| <= |shift|.
inline double shift_within(double f, double shift) {
  double h = f + shift;
  while (std::abs(h - f) > std::abs(shift)) h = std::nextafter(h, f);
  return h;
}

// Moves k by at most a few ulps so that some cell realizes the shift
// exactly in floating point, i.e. fl(fl(f + k*u) - f) == k*u there. With
// shift_within on every other cell, the max-norm distance of the result to
// f is then |k| bit for bit.
inline double representable_shift(const ScoreTable& f, const ScoreTable& u,
                                  double k) {
  if (k == 0.0 || f.size() == 0) return k;
  std::vector<std::size_t> order(f.size());
  for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
  // Largest |f| first: there the shift is exact whenever |k| <= |f|.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(f[a]) > std::abs(f[b]);
  });
  for (std::size_t c : order) {
    double candidate = k;
    for (int round = 0; round < 4; ++round) {
      const double realized = ((f[c] + candidate * u[c]) - f[c]) * u[c];
      if (realized == candidate) return candidate;
      candidate = realized;
    }
  }
  return k;
}

}  // namespace detail

struct TwoPopSolution {
  ScoreTable u;  // +1 / -1 sign pattern
  double A = 0.0;
  double B = 0.0;
  double k = 0.0;
  ScoreTable h;
};

inline TwoPopSolution solve_two_pop(const ProfileSpace& space,
                                    const PopulationModel& p1,
                                    const PopulationModel& p2,
                                    const ScoreTable& f) {
  const std::size_t cells = space.size();
  if (p1.density.size() != cells || p2.density.size() != cells ||
      f.size() != cells) {
    throw std::invalid_argument("solve_two_pop: shape mismatch");
  }
  TwoPopSolution sol;
  sol.u.values.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    // Exact comparison on stored densities, no tolerance band.
    sol.u[c] = p1.density[c] > p2.density[c] ? 1.0 : -1.0;
    const double d = p1.density[c] - p2.density[c];
    sol.A += d * sol.u[c] * space.weights[c];
    sol.B += d * f[c] * space.weights[c];
  }
  // A == 0 only when the densities coincide, which forces B == 0.
  const double k = sol.A > 0.0 ? -sol.B / sol.A : 0.0;
  sol.k = detail::representable_shift(f, sol.u, k);
  sol.h.values.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    sol.h[c] = detail::shift_within(f[c], sol.k * sol.u[c]);
  }
  return sol;
}

}  // namespace fairscore

#endif  // FAIRSCORE_TWO_POP_HPP_
