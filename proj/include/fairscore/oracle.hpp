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

// Brute-force certificates for small instances.
//
// Nothing here touches the simplex solver or the LP builder: group masses
// are recomputed locally and every optimum is found by enumerating a regular
// grid. The searches are meant for a handful of groups or cells; they refuse
// to run when the grid would exceed GridSpec::cap points.
//
// Forward search. Exact hits of the n equality constraints on a grid have
// measure zero, so the constraints are used to eliminate variables instead:
// Gaussian elimination on the mass matrix picks r pivot groups (r = rank),
// the remaining m - r free groups are enumerated on the grid, and the pivot
// values are solved from the constraints. A candidate is accepted when every
// constraint holds within eq_tol. Every accepted point is feasible, so the
// grid minimum can only overestimate the true optimum, and it does so by at
// most `resolution`.

#ifndef FAIRSCORE_ORACLE_HPP_
#define FAIRSCORE_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fairscore/profile_space.hpp"
#include "fairscore/reduction.hpp"

namespace fairscore {

class GridCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct GridSpec {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t steps = 201;
  std::size_t cap = 10'000'000;

  double step() const { return (hi - lo) / static_cast<double>(steps - 1); }

  double value(std::size_t i) const {
    return i + 1 == steps ? hi : lo + static_cast<double>(i) * step();
  }

  void check() const {
    if (steps < 2) throw std::invalid_argument("grid needs at least 2 steps");
    if (!(lo < hi)) throw std::invalid_argument("grid needs lo < hi");
  }
};

struct OracleResult {
  double best = 0.0;
  std::vector<double> group_values;
  ScoreTable table;
  // Grid minima overestimate the true optimum by at most this much.
  double resolution = 0.0;
  std::size_t visited = 0;
};

namespace detail {

struct GridMinimum {
  std::optional<double> best;
  std::vector<std::size_t> index;
  std::vector<double> point;
  std::size_t visited = 0;
};

inline std::size_t checked_grid_size(std::size_t dims, std::size_t steps,
                                     std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    if (total > cap / steps) {
      throw GridCapExceeded("grid of " + std::to_string(steps) + "^" +
                            std::to_string(dims) + " points exceeds cap " +
                            std::to_string(cap));
    }
    total *= steps;
  }
  return total;
}

// Minimizes eval over the dims-dimensional grid. eval returns nullopt for
// rejected points. Ties keep the lexicographically smallest index. The
// outermost dimension is split across threads; the result does not depend
// on the split.
template <class Eval>
GridMinimum grid_min(std::size_t dims, const GridSpec& grid, Eval eval) {
  checked_grid_size(dims, grid.steps, grid.cap);
  if (dims == 0) {
    GridMinimum out;
    out.visited = 1;
    out.best = eval(std::span<const double>{});
    return out;
  }

  std::vector<double> values(grid.steps);
  for (std::size_t i = 0; i < grid.steps; ++i) values[i] = grid.value(i);

  auto scan = [&](std::size_t worker, std::size_t workers) {
    GridMinimum local;
    std::vector<std::size_t> index(dims, 0);
    std::vector<double> point(dims);
    for (std::size_t first = worker; first < grid.steps; first += workers) {
      index.assign(dims, 0);
      index[0] = first;
      for (std::size_t d = 0; d < dims; ++d) point[d] = values[index[d]];
      for (;;) {
        ++local.visited;
        const std::optional<double> value = eval(std::span<const double>(point));
        if (value && (!local.best || *value < *local.best)) {
          local.best = value;
          local.index = index;
          local.point = point;
        }
        // Advance dimensions 1..dims-1; dimension 0 is fixed per outer pass.
        bool exhausted = true;
        for (std::size_t d = dims; d > 1;) {
          --d;
          if (++index[d] < grid.steps) {
            point[d] = values[index[d]];
            exhausted = false;
            break;
          }
          index[d] = 0;
          point[d] = values[0];
        }
        if (exhausted) break;
      }
    }
    return local;
  };

  const std::size_t hardware = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hardware, grid.steps);
  std::vector<GridMinimum> partial(workers);
  if (workers == 1) {
    partial[0] = scan(0, 1);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] { partial[w] = scan(w, workers); });
    }
    for (auto& t : threads) t.join();
  }

  GridMinimum out;
  for (auto& p : partial) {
    out.visited += p.visited;
    if (!p.best) continue;
    if (!out.best || *p.best < *out.best ||
        (*p.best == *out.best && p.index < out.index)) {
      out.best = p.best;
      out.index = std::move(p.index);
      out.point = std::move(p.point);
    }
  }
  return out;
}

// n x m population masses per group, row-major.
inline std::vector<double> oracle_masses(const ProfileSpace& space,
                                         std::span<const PopulationModel> pops,
                                         const Partition& partition) {
  if (partition.cells() != space.size()) {
    throw std::invalid_argument("oracle: partition does not match space");
  }
  const std::size_t m = partition.groups();
  std::vector<double> v(pops.size() * m, 0.0);
  for (std::size_t i = 0; i < pops.size(); ++i) {
    for (std::size_t c = 0; c < space.size(); ++c) {
      v[i * m + partition.group_of(c)] += pops[i].density[c] * space.weights[c];
    }
  }
  return v;
}

inline ScoreTable expand_flat(const Partition& partition,
                              std::span<const double> group_values) {
  ScoreTable table;
  table.values.resize(partition.cells());
  for (std::size_t c = 0; c < partition.cells(); ++c) {
    table[c] = group_values[partition.group_of(c)];
  }
  return table;
}

// Splits the columns of an n x m matrix into pivot and free columns and
// precomputes the affine map  free values -> pivot values  that satisfies
// the pivot rows exactly:  w_pivot = offset - coupling * w_free.
struct Elimination {
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> free_cols;
  std::vector<double> offset;    // r
  std::vector<double> coupling;  // r x (m - r), row-major
};

inline Elimination eliminate(std::span<const double> v, std::size_t n,
                             std::size_t m, std::span<const double> b) {
  constexpr double kRankTolerance = 1e-12;
  // Augmented [V | b], reduced to row echelon form with partial pivoting.
  std::vector<double> a(n * (m + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i * (m + 1) + j] = v[i * m + j];
    a[i * (m + 1) + m] = b[i];
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return a[i * (m + 1) + j];
  };
  Elimination e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t best = row;
    for (std::size_t i = row + 1; i < n; ++i) {
      if (std::abs(at(i, col)) > std::abs(at(best, col))) best = i;
    }
    if (std::abs(at(best, col)) <= kRankTolerance) {
      e.free_cols.push_back(col);
      continue;
    }
    for (std::size_t j = 0; j <= m; ++j) std::swap(at(row, j), at(best, j));
    const double inv = 1.0 / at(row, col);
    for (std::size_t j = 0; j <= m; ++j) at(row, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || at(i, col) == 0.0) continue;
      const double factor = at(i, col);
      for (std::size_t j = 0; j <= m; ++j) at(i, j) -= factor * at(row, j);
    }
    e.pivot_cols.push_back(col);
    ++row;
  }
  for (std::size_t col = e.pivot_cols.size() + e.free_cols.size(); col < m;
       ++col) {
    e.free_cols.push_back(col);
  }
  std::sort(e.free_cols.begin(), e.free_cols.end());
  // Reduced row echelon form: row r reads w_{pivot r} + sum_free a * w_free = rhs.
  const std::size_t r = e.pivot_cols.size();
  const std::size_t f = e.free_cols.size();
  e.offset.resize(r);
  e.coupling.resize(r * f);
  for (std::size_t p = 0; p < r; ++p) {
    e.offset[p] = at(p, m);
    for (std::size_t q = 0; q < f; ++q) {
      e.coupling[p * f + q] = at(p, e.free_cols[q]);
    }
  }
  return e;
}

}  // namespace detail

// Default search box for the forward oracle: symmetric with half-width
// 2 max|b_i| / min_i max_j v(i, j), widened when needed to contain the
// max-norm of one exactly feasible flat correction (which bounds the
// optimum). Falls back to [-1, 1] when b == 0.
inline GridSpec default_forward_grid(const ProfileSpace& space,
                                     std::span<const PopulationModel> pops,
                                     const ResidualTargets& b,
                                     const Partition& partition) {
  const std::size_t n = pops.size();
  const std::size_t m = partition.groups();
  const auto v = detail::oracle_masses(space, pops, partition);
  double max_b = 0.0;
  for (double bi : b.b) max_b = std::max(max_b, std::abs(bi));
  double min_row_max = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < m; ++j) row_max = std::max(row_max, v[i * m + j]);
    min_row_max = std::min(min_row_max, row_max);
  }
  double half = min_row_max > 0.0 ? 2.0 * max_b / min_row_max : 0.0;
  const auto e = detail::eliminate(v, n, m, b.b);
  for (double w : e.offset) half = std::max(half, std::abs(w));
  if (!(half > 0.0) || !std::isfinite(half)) half = 1.0;
  GridSpec grid;
  grid.lo = -half;
  grid.hi = half;
  return grid;
}

// Smallest max-norm of a flat correction u with |avg_i(u) - b_i| <= eq_tol
// for every population, over corrections whose free group values lie on the
// grid. Returns nullopt if no grid candidate satisfies the constraints.
inline std::optional<OracleResult> brute_force_forward(
    const ProfileSpace& space, std::span<const PopulationModel> pops,
    const ResidualTargets& b, const Partition& partition,
    const GridSpec& grid, double eq_tol = 1e-9) {
  grid.check();
  const std::size_t n = pops.size();
  const std::size_t m = partition.groups();
  if (b.size() != n) {
    throw std::invalid_argument("brute_force_forward: residual count mismatch");
  }
  const auto v = detail::oracle_masses(space, pops, partition);
  const auto e = detail::eliminate(v, n, m, b.b);
  const std::size_t r = e.pivot_cols.size();
  const std::size_t f = e.free_cols.size();

  auto assemble = [&](std::span<const double> free_values,
                      std::span<double> w) {
    for (std::size_t q = 0; q < f; ++q) w[e.free_cols[q]] = free_values[q];
    for (std::size_t p = 0; p < r; ++p) {
      double value = e.offset[p];
      for (std::size_t q = 0; q < f; ++q) {
        value -= e.coupling[p * f + q] * free_values[q];
      }
      w[e.pivot_cols[p]] = value;
    }
  };

  const auto found = detail::grid_min(
      f, grid, [&](std::span<const double> free_values) -> std::optional<double> {
        double w_buf[64];
        std::vector<double> w_heap;
        std::span<double> w;
        if (m <= 64) {
          w = std::span<double>(w_buf, m);
        } else {
          w_heap.resize(m);
          w = w_heap;
        }
        assemble(free_values, w);
        for (std::size_t i = 0; i < n; ++i) {
          double avg = 0.0;
          for (std::size_t j = 0; j < m; ++j) avg += v[i * m + j] * w[j];
          if (std::abs(avg - b.b[i]) > eq_tol) return std::nullopt;
        }
        double norm = 0.0;
        for (double x : w) norm = std::max(norm, std::abs(x));
        return norm;
      });
  if (!found.best) return std::nullopt;

  OracleResult out;
  out.best = *found.best;
  out.group_values.resize(m);
  assemble(found.point, out.group_values);
  out.table = detail::expand_flat(partition, out.group_values);
  out.visited = found.visited;
  if (f > 0) {
    double coupling_norm = 0.0;
    for (std::size_t p = 0; p < r; ++p) {
      double row_sum = 0.0;
      for (std::size_t q = 0; q < f; ++q) row_sum += std::abs(e.coupling[p * f + q]);
      coupling_norm = std::max(coupling_norm, row_sum);
    }
    out.resolution = 0.5 * grid.step() * std::max(1.0, coupling_norm);
  }
  return out;
}

// Smallest worst-case gap max_i |avg_i(u) - b_i| over flat corrections with
// every group value on the grid clipped to [-epsilon, epsilon].
inline OracleResult brute_force_inverse(const ProfileSpace& space,
                                        std::span<const PopulationModel> pops,
                                        const ResidualTargets& b,
                                        const Partition& partition,
                                        double epsilon, const GridSpec& grid) {
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("brute_force_inverse: epsilon must be >= 0");
  }
  const std::size_t n = pops.size();
  const std::size_t m = partition.groups();
  if (b.size() != n) {
    throw std::invalid_argument("brute_force_inverse: residual count mismatch");
  }
  const auto v = detail::oracle_masses(space, pops, partition);

  auto worst_gap = [&](std::span<const double> w) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double avg = 0.0;
      for (std::size_t j = 0; j < m; ++j) avg += v[i * m + j] * w[j];
      worst = std::max(worst, std::abs(avg - b.b[i]));
    }
    return worst;
  };

  OracleResult out;
  out.group_values.assign(m, 0.0);
  const double lo = std::max(grid.lo, -epsilon);
  const double hi = std::min(grid.hi, epsilon);
  if (!(lo < hi)) {
    // Only the zero correction fits in the box.
    out.best = worst_gap(out.group_values);
    out.table = detail::expand_flat(partition, out.group_values);
    out.visited = 1;
    return out;
  }
  GridSpec clipped = grid;
  clipped.lo = lo;
  clipped.hi = hi;
  clipped.check();
  const auto found = detail::grid_min(
      m, clipped, [&](std::span<const double> w) -> std::optional<double> {
        return worst_gap(w);
      });
  out.best = *found.best;
  out.group_values = found.point;
  out.table = detail::expand_flat(partition, out.group_values);
  out.visited = found.visited;
  double max_row_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += v[i * m + j];
    max_row_mass = std::max(max_row_mass, row);
  }
  out.resolution = 0.5 * clipped.step() * max_row_mass;
  return out;
}

struct TwoPopVerdict {
  bool optimal = true;
  // A fair table strictly closer to f than |k| (or the claimed table itself
  // when it fails to equalize the averages).
  std::optional<ScoreTable> witness;
  std::string reason;
  std::size_t visited = 0;
};

// Searches for a table h' = f + v with equal population averages and
// max |v| <= |k| - step, where step is the spacing of a `steps`-point grid
// on [-|k|, |k|]. All cells but one are enumerated; the remaining cell (the
// one with the largest |p1 - p2| * weight) is solved so that the averages
// agree exactly. Before searching, the claimed correction f + k*u, with u
// the +1/-1 majority pattern, must itself equalize the averages within
// eq_tol.
inline TwoPopVerdict verify_two_pop_optimality(
    const ProfileSpace& space, const PopulationModel& p1,
    const PopulationModel& p2, const ScoreTable& f, double k,
    std::size_t steps = 201, std::size_t cap = 10'000'000,
    double eq_tol = 1e-9) {
  const std::size_t cells = space.size();
  if (p1.density.size() != cells || p2.density.size() != cells ||
      f.size() != cells) {
    throw std::invalid_argument("verify_two_pop_optimality: shape mismatch");
  }
  std::vector<double> d(cells);
  double gap_f = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    d[c] = (p1.density[c] - p2.density[c]) * space.weights[c];
    gap_f += d[c] * f[c];
  }

  TwoPopVerdict verdict;
  double claimed_gap = gap_f;
  ScoreTable claimed = f;
  for (std::size_t c = 0; c < cells; ++c) {
    const double sign = p1.density[c] > p2.density[c] ? 1.0 : -1.0;
    claimed[c] += k * sign;
    claimed_gap += d[c] * k * sign;
  }
  if (std::abs(claimed_gap) > eq_tol) {
    verdict.optimal = false;
    verdict.witness = std::move(claimed);
    verdict.reason = "claimed correction does not equalize the averages";
    return verdict;
  }

  const double radius = std::abs(k);
  if (radius == 0.0) {
    verdict.reason = "zero correction";
    return verdict;
  }
  if (steps < 4) {
    throw std::invalid_argument("verify_two_pop_optimality: need >= 4 steps");
  }
  const GridSpec full{-radius, radius, steps, cap};
  const double bound = radius - full.step();

  std::size_t solved = 0;
  for (std::size_t c = 1; c < cells; ++c) {
    if (std::abs(d[c]) > std::abs(d[solved])) solved = c;
  }

  if (d[solved] == 0.0) {
    // Identical populations: every table is fair, including f itself.
    verdict.optimal = false;
    verdict.witness = f;
    verdict.reason = "populations coincide; the zero correction is fair";
    return verdict;
  }

  std::vector<std::size_t> enumerated;
  for (std::size_t c = 0; c < cells; ++c) {
    if (c != solved) enumerated.push_back(c);
  }
  // Inner grid points only: |v| <= |k| - step.
  const GridSpec inner{-bound, bound, steps - 2, cap};

  const auto found = detail::grid_min(
      enumerated.size(), inner,
      [&](std::span<const double> values) -> std::optional<double> {
        double gap = gap_f;
        double norm = 0.0;
        for (std::size_t q = 0; q < enumerated.size(); ++q) {
          gap += d[enumerated[q]] * values[q];
          norm = std::max(norm, std::abs(values[q]));
        }
        const double free_value = -gap / d[solved];
        if (std::abs(free_value) > bound) return std::nullopt;
        return std::max(norm, std::abs(free_value));
      });
  verdict.visited = found.visited;
  if (!found.best) {
    verdict.reason = "no fair table within |k| - step";
    return verdict;
  }

  ScoreTable witness = f;
  double gap = gap_f;
  for (std::size_t q = 0; q < enumerated.size(); ++q) {
    witness[enumerated[q]] += found.point[q];
    gap += d[enumerated[q]] * found.point[q];
  }
  witness[solved] += -gap / d[solved];
  verdict.optimal = false;
  verdict.witness = std::move(witness);
  verdict.reason = "found a fair table closer to f than |k|";
  return verdict;
}

}  // namespace fairscore

#endif  // FAIRSCORE_ORACLE_HPP_
