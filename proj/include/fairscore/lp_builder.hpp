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

// Linear programs for corrections that are flat on a partition.
//
// A correction constant on each group j is written w_j = alpha_j - beta_j
// with alpha_j, beta_j >= 0, and gamma bounds the result. With
// v(i, j) = mass of population i in group j, the forward program is
//
//   maximize -gamma
//   s.t.  alpha_j - gamma <= 0,  beta_j - gamma <= 0          (2m rows)
//          sum_j (alpha_j - beta_j) v(i, j) <=  b_i           (n rows)
//         -sum_j (alpha_j - beta_j) v(i, j) <= -b_i           (n rows)
//
// and its optimum gamma is the smallest max-norm of a flat correction whose
// population averages equal b. The inverse program caps alpha_j, beta_j by
// epsilon and lets gamma absorb the residual gaps:
//
//   maximize -gamma
//   s.t.  alpha_j <= eps,  beta_j <= eps                      (2m rows)
//          sum_j (alpha_j - beta_j) v(i, j) - gamma <=  b_i   (n rows)
//         -sum_j (alpha_j - beta_j) v(i, j) - gamma <= -b_i   (n rows)
//
// Variables are laid out as alpha_1..alpha_m, beta_1..beta_m, gamma.

#ifndef FAIRSCORE_LP_BUILDER_HPP_
#define FAIRSCORE_LP_BUILDER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairscore/profile_space.hpp"
#include "fairscore/reduction.hpp"
#include "fairscore/simplex.hpp"

namespace fairscore {

// Absolute tolerance for checks made on decoded LP optima.
inline constexpr double kLpTolerance = 1e-7;

enum class LpKind { kForward, kInverse };

// Row-major n x m matrix of population masses per group.
class GroupMassMatrix {
 public:
  GroupMassMatrix(std::size_t populations, std::size_t groups)
      : populations_(populations), groups_(groups),
        mass_(populations * groups, 0.0) {}

  std::size_t populations() const { return populations_; }
  std::size_t groups() const { return groups_; }

  double operator()(std::size_t i, std::size_t j) const {
    return mass_[i * groups_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return mass_[i * groups_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {mass_.data() + i * groups_, groups_};
  }

 private:
  std::size_t populations_;
  std::size_t groups_;
  std::vector<double> mass_;
};

inline GroupMassMatrix group_mass(const ProfileSpace& space,
                                  std::span<const PopulationModel> pops,
                                  const Partition& partition) {
  if (partition.cells() != space.size()) {
    throw std::invalid_argument("group_mass: partition covers " +
                                std::to_string(partition.cells()) +
                                " cells, space has " +
                                std::to_string(space.size()));
  }
  GroupMassMatrix v(pops.size(), partition.groups());
  for (std::size_t i = 0; i < pops.size(); ++i) {
    for (std::size_t c = 0; c < space.size(); ++c) {
      v(i, partition.group_of(c)) += pops[i].density[c] * space.weights[c];
    }
  }
  return v;
}

inline std::size_t alpha_index(std::size_t j) { return j; }
inline std::size_t beta_index(std::size_t groups, std::size_t j) {
  return groups + j;
}
inline std::size_t gamma_index(std::size_t groups) { return 2 * groups; }

namespace detail {

inline LpModel bonus_malus_skeleton(std::size_t groups) {
  LpModel model;
  const std::size_t vars = 2 * groups + 1;
  model.objective.assign(vars, 0.0);
  model.objective[gamma_index(groups)] = -1.0;
  model.variable_names.reserve(vars);
  for (std::size_t j = 0; j < groups; ++j) {
    model.variable_names.push_back("α" + std::to_string(j + 1));
  }
  for (std::size_t j = 0; j < groups; ++j) {
    model.variable_names.push_back("β" + std::to_string(j + 1));
  }
  model.variable_names.push_back("g");
  return model;
}

// Appends +-(sum_j (alpha_j - beta_j) v(i, j)) - gamma_coeff * gamma <= +-b_i.
inline void add_average_rows(LpModel& model, const GroupMassMatrix& v,
                             const ResidualTargets& b, double gamma_coeff) {
  const std::size_t m = v.groups();
  const std::size_t vars = model.num_vars();
  for (double sign : {1.0, -1.0}) {
    for (std::size_t i = 0; i < v.populations(); ++i) {
      LpConstraint row;
      row.coefficients.assign(vars, 0.0);
      for (std::size_t j = 0; j < m; ++j) {
        row.coefficients[alpha_index(j)] = sign * v(i, j);
        row.coefficients[beta_index(m, j)] = -sign * v(i, j);
      }
      row.coefficients[gamma_index(m)] = -gamma_coeff;
      row.bound = sign * b.b[i];
      model.constraints.push_back(std::move(row));
    }
  }
}

inline void check_dimensions(const GroupMassMatrix& v,
                             const ResidualTargets& b) {
  if (v.populations() != b.size()) {
    throw std::invalid_argument("lp_builder: mass matrix has " +
                                std::to_string(v.populations()) +
                                " rows but " + std::to_string(b.size()) +
                                " residual targets");
  }
}

}  // namespace detail

inline LpModel build_forward_lp(const GroupMassMatrix& v,
                                const ResidualTargets& b) {
  detail::check_dimensions(v, b);
  const std::size_t m = v.groups();
  LpModel model = detail::bonus_malus_skeleton(m);
  const std::size_t vars = model.num_vars();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t var : {alpha_index(j), beta_index(m, j)}) {
      LpConstraint row;
      row.coefficients.assign(vars, 0.0);
      row.coefficients[var] = 1.0;
      row.coefficients[gamma_index(m)] = -1.0;
      row.bound = 0.0;
      model.constraints.push_back(std::move(row));
    }
  }
  detail::add_average_rows(model, v, b, 0.0);
  return model;
}

inline LpModel build_inverse_lp(const GroupMassMatrix& v,
                                const ResidualTargets& b, double epsilon) {
  detail::check_dimensions(v, b);
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("build_inverse_lp: epsilon must be finite and >= 0");
  }
  const std::size_t m = v.groups();
  LpModel model = detail::bonus_malus_skeleton(m);
  const std::size_t vars = model.num_vars();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t var : {alpha_index(j), beta_index(m, j)}) {
      LpConstraint row;
      row.coefficients.assign(vars, 0.0);
      row.coefficients[var] = 1.0;
      row.bound = epsilon;
      model.constraints.push_back(std::move(row));
    }
  }
  detail::add_average_rows(model, v, b, 1.0);
  return model;
}

struct BonusMalusSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::optional<ScoreTable> u;  // present only when optimal
  double gamma = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Expands an LP optimum into the per-cell correction
// u(x) = alpha[group(x)] - beta[group(x)].
inline BonusMalusSolution decode_solution(LpKind kind,
                                          const LpSolution& lp,
                                          const Partition& partition,
                                          const ProfileSpace& space) {
  (void)kind;  // both programs share the variable layout
  BonusMalusSolution out;
  out.status = lp.status;
  if (lp.status != LpStatus::kOptimal) return out;
  const std::size_t m = partition.groups();
  if (lp.x.size() != 2 * m + 1 || partition.cells() != space.size()) {
    throw std::invalid_argument("decode_solution: LP solution does not match partition");
  }
  out.alpha.assign(lp.x.begin(), lp.x.begin() + m);
  out.beta.assign(lp.x.begin() + m, lp.x.begin() + 2 * m);
  out.gamma = lp.x[gamma_index(m)];
  ScoreTable u;
  u.values.resize(space.size());
  for (std::size_t c = 0; c < space.size(); ++c) {
    const std::size_t j = partition.group_of(c);
    u[c] = out.alpha[j] - out.beta[j];
  }
  out.u = std::move(u);
  return out;
}

struct BonusMalusPoint {
  std::vector<double> alpha;
  std::vector<double> beta;
  double gamma = 0.0;
};

// Moves every pair (alpha_j, beta_j) to the representative with one side
// zero and the same difference, and shrinks gamma to the largest remaining
// entry. Feasibility is preserved and gamma never grows.
inline BonusMalusPoint canonicalize_bonus_malus(std::span<const double> alpha,
                                                std::span<const double> beta,
                                                double gamma) {
  if (alpha.size() != beta.size()) {
    throw std::invalid_argument("canonicalize_bonus_malus: size mismatch");
  }
  (void)gamma;
  BonusMalusPoint out;
  out.alpha.resize(alpha.size());
  out.beta.resize(beta.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] >= beta[j]) {
      out.alpha[j] = alpha[j] - beta[j];
      out.beta[j] = 0.0;
    } else {
      out.alpha[j] = 0.0;
      out.beta[j] = beta[j] - alpha[j];
    }
    out.gamma = std::max({out.gamma, out.alpha[j], out.beta[j]});
  }
  return out;
}

// One line per row: objective first, then "rK: <terms> <= <bound>".
inline void write_lp_listing(std::ostream& out, const LpModel& model) {
  const auto old_precision = out.precision(17);
  auto terms = [&](const std::vector<double>& coefficients) {
    bool any = false;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
      if (coefficients[j] == 0.0) continue;
      out << ' ' << (coefficients[j] < 0.0 ? '-' : '+') << ' '
          << std::abs(coefficients[j]) << ' ' << model.variable_names[j];
      any = true;
    }
    if (!any) out << " 0";
  };
  out << "max:";
  terms(model.objective);
  out << '\n';
  for (std::size_t k = 0; k < model.constraints.size(); ++k) {
    out << 'r' << k + 1 << ':';
    terms(model.constraints[k].coefficients);
    out << " <= " << model.constraints[k].bound << '\n';
  }
  out.precision(old_precision);
}

}  // namespace fairscore

#endif  // FAIRSCORE_LP_BUILDER_HPP_
