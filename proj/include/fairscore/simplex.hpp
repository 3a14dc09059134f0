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

// Dense-tableau two-phase primal simplex for
//
//   maximize  c . x   subject to   A x <= d,  x >= 0.
//
// Rows with d < 0 are negated and given a surplus and an artificial column;
// pairs of rows that are exact negations of each other (a . x <= d and
// -a . x <= -d) are merged into a single equality row with one artificial.
// Phase 1 maximizes minus the sum of artificials; a strictly negative
// optimum proves infeasibility. Artificials still basic at zero level are
// pivoted out or, if their row has no usable entry, the row is dropped as
// redundant. Phase 2 then optimizes the real objective over the remaining
// columns.
//
// Pricing is Dantzig's largest reduced cost. After 3 * (rows + cols)
// consecutive pivots without objective progress the phase switches to
// Bland's rule, which cannot cycle. The ratio test breaks ties on the lowest
// row index under Dantzig pricing and on the lowest basic variable index
// under Bland pricing. Given identical input the sequence of floating-point
// operations is fixed, so solutions are reproducible bit for bit.

#ifndef FAIRSCORE_SIMPLEX_HPP_
#define FAIRSCORE_SIMPLEX_HPP_

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fairscore {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

// coefficients . x <= bound
struct LpConstraint {
  std::vector<double> coefficients;
  double bound = 0.0;
};

// Canonical form: maximize objective . x, every constraint is <=, and all
// variables are implicitly nonnegative.
struct LpModel {
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<std::string> variable_names;

  std::size_t num_vars() const { return objective.size(); }
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;  // empty unless optimal
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  bool merge_equalities = true;
  double pivot_tolerance = 1e-10;
  double optimality_tolerance = 1e-10;
  // Phase 1 declares infeasibility when the artificial sum exceeds this,
  // scaled by max(1, max |d|).
  double feasibility_tolerance = 1e-9;
  // When set, the tableau is written here after every pivot.
  std::ostream* trace = nullptr;
};

// Largest violation of A x <= d or x >= 0; 0 for a feasible point.
inline double max_violation(const LpModel& model, const std::vector<double>& x) {
  double worst = 0.0;
  for (double xi : x) worst = std::max(worst, -xi);
  for (const auto& row : model.constraints) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coefficients[j] * x[j];
    worst = std::max(worst, lhs - row.bound);
  }
  return worst;
}

namespace detail {

class Tableau {
 public:
  enum class RowKind { kLessEqual, kEqual };

  struct Row {
    std::vector<double> coefficients;
    double rhs;
    RowKind kind;
  };

  Tableau(std::size_t structural, const std::vector<Row>& rows,
          const SimplexOptions& options)
      : options_(options), structural_(structural) {
    std::size_t slacks = 0;
    std::size_t artificials = 0;
    for (const Row& row : rows) {
      if (row.kind == RowKind::kLessEqual) ++slacks;
      if (row.kind == RowKind::kEqual || row.rhs < 0.0) ++artificials;
    }
    first_artificial_ = structural_ + slacks;
    cols_ = first_artificial_ + artificials;
    stride_ = cols_ + 1;
    rows_ = rows.size();
    data_.assign(rows_ * stride_, 0.0);
    basis_.assign(rows_, 0);
    phase1_.assign(stride_, 0.0);
    phase2_.assign(stride_, 0.0);

    std::size_t next_slack = structural_;
    std::size_t next_artificial = first_artificial_;
    for (std::size_t r = 0; r < rows_; ++r) {
      const Row& row = rows[r];
      const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
      double* t = row_ptr(r);
      for (std::size_t j = 0; j < structural_; ++j) {
        t[j] = sign * row.coefficients[j];
      }
      t[cols_] = sign * row.rhs;
      if (row.kind == RowKind::kLessEqual) {
        t[next_slack] = sign;
        if (sign > 0.0) basis_[r] = next_slack;
        ++next_slack;
      }
      if (row.kind == RowKind::kEqual || sign < 0.0) {
        t[next_artificial] = 1.0;
        basis_[r] = next_artificial;
        ++next_artificial;
      }
    }
  }

  void set_objective(const std::vector<double>& c) {
    for (std::size_t j = 0; j < structural_; ++j) phase2_[j] = -c[j];
    for (std::size_t j = first_artificial_; j < cols_; ++j) phase1_[j] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      const double* t = row_ptr(r);
      for (std::size_t j = 0; j <= cols_; ++j) phase1_[j] -= t[j];
    }
  }

  bool has_artificials() const { return first_artificial_ < cols_; }

  enum class PhaseResult { kOptimal, kUnbounded };

  PhaseResult run_phase(bool phase_one) {
    std::vector<double>& obj = phase_one ? phase1_ : phase2_;
    const std::size_t allowed = phase_one ? cols_ : first_artificial_;
    const std::size_t stall_limit = 3 * (rows_ + cols_);
    const std::size_t iteration_limit = iterations_ + 50 * (rows_ + cols_) + 1000;
    std::size_t stall = 0;
    bool bland = false;
    double best = obj[cols_];
    for (;;) {
      const std::size_t entering = choose_entering(obj, allowed, bland);
      if (entering == kNone) return PhaseResult::kOptimal;
      const std::size_t leaving = choose_leaving(entering, bland);
      if (leaving == kNone) return PhaseResult::kUnbounded;
      pivot(leaving, entering);
      ++iterations_;
      if (obj[cols_] > best) {
        best = obj[cols_];
        stall = 0;
      } else if (++stall > stall_limit) {
        bland = true;
      }
      if (iterations_ > iteration_limit) {
        throw std::runtime_error("simplex: iteration limit exceeded");
      }
    }
  }

  // Value of the phase-1 objective, i.e. minus the artificial sum.
  double phase_one_value() const { return phase1_[cols_]; }

  // Pivots remaining zero-level artificials out of the basis and drops rows
  // that turn out to be linear combinations of others.
  void expel_artificials() {
    std::vector<std::size_t> redundant;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      const double* t = row_ptr(r);
      std::size_t best_col = kNone;
      double best_abs = options_.pivot_tolerance;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (std::abs(t[j]) > best_abs) {
          best_abs = std::abs(t[j]);
          best_col = j;
        }
      }
      if (best_col == kNone) {
        redundant.push_back(r);
      } else {
        pivot(r, best_col);
        ++iterations_;
      }
    }
    if (redundant.empty()) return;
    std::vector<double> kept;
    std::vector<std::size_t> kept_basis;
    kept.reserve((rows_ - redundant.size()) * stride_);
    std::size_t next = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (next < redundant.size() && redundant[next] == r) {
        ++next;
        continue;
      }
      kept.insert(kept.end(), row_ptr(r), row_ptr(r) + stride_);
      kept_basis.push_back(basis_[r]);
    }
    data_ = std::move(kept);
    basis_ = std::move(kept_basis);
    rows_ = basis_.size();
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(structural_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < structural_) x[basis_[r]] = row_ptr(r)[cols_];
    }
    return x;
  }

  std::size_t iterations() const { return iterations_; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  double* row_ptr(std::size_t r) { return data_.data() + r * stride_; }
  const double* row_ptr(std::size_t r) const {
    return data_.data() + r * stride_;
  }
  bool is_artificial(std::size_t col) const { return col >= first_artificial_; }

  std::size_t choose_entering(const std::vector<double>& obj,
                              std::size_t allowed, bool bland) const {
    const double tol = options_.optimality_tolerance;
    std::size_t best_col = kNone;
    double most_negative = -tol;
    for (std::size_t j = 0; j < allowed; ++j) {
      if (obj[j] < -tol && bland) return j;
      if (obj[j] < most_negative) {
        most_negative = obj[j];
        best_col = j;
      }
    }
    return best_col;
  }

  std::size_t choose_leaving(std::size_t col, bool bland) const {
    std::size_t best_row = kNone;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows_; ++r) {
      const double* t = row_ptr(r);
      if (t[col] <= options_.pivot_tolerance) continue;
      const double ratio = std::max(t[cols_], 0.0) / t[col];
      if (ratio < best_ratio ||
          (bland && ratio == best_ratio && basis_[r] < basis_[best_row])) {
        best_ratio = ratio;
        best_row = r;
      }
    }
    return best_row;
  }

  void pivot(std::size_t r, std::size_t col) {
    double* pr = row_ptr(r);
    const double inv = 1.0 / pr[col];
    for (std::size_t j = 0; j <= cols_; ++j) pr[j] *= inv;
    pr[col] = 1.0;
    auto eliminate = [&](double* target) {
      const double factor = target[col];
      if (factor == 0.0) return;
      for (std::size_t j = 0; j <= cols_; ++j) target[j] -= factor * pr[j];
      target[col] = 0.0;
    };
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i != r) eliminate(row_ptr(i));
    }
    eliminate(phase1_.data());
    eliminate(phase2_.data());
    basis_[r] = col;
    if (options_.trace != nullptr) dump(*options_.trace, r, col);
  }

  void dump(std::ostream& out, std::size_t r, std::size_t col) const {
    out << "pivot " << iterations_ + 1 << ": row " << r << " col " << col
        << '\n';
    const auto old_precision = out.precision(6);
    auto line = [&](const char* label, const double* v) {
      out << std::setw(6) << label;
      for (std::size_t j = 0; j <= cols_; ++j) out << ' ' << std::setw(11) << v[j];
      out << '\n';
    };
    for (std::size_t i = 0; i < rows_; ++i) {
      line(("x" + std::to_string(basis_[i])).c_str(), row_ptr(i));
    }
    line("obj1", phase1_.data());
    line("obj2", phase2_.data());
    out.precision(old_precision);
  }

  SimplexOptions options_;
  std::size_t structural_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::size_t rows_ = 0;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
  std::vector<double> phase1_;
  std::vector<double> phase2_;
  std::size_t iterations_ = 0;
};

inline void check_model(const LpModel& model) {
  const std::size_t n = model.num_vars();
  for (double c : model.objective) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("simplex: non-finite objective coefficient");
    }
  }
  for (std::size_t k = 0; k < model.constraints.size(); ++k) {
    const auto& row = model.constraints[k];
    if (row.coefficients.size() != n) {
      throw std::invalid_argument("simplex: constraint " + std::to_string(k) +
                                  " has " +
                                  std::to_string(row.coefficients.size()) +
                                  " coefficients, expected " +
                                  std::to_string(n));
    }
    if (!std::isfinite(row.bound)) {
      throw std::invalid_argument("simplex: non-finite bound in constraint " +
                                  std::to_string(k));
    }
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) {
        throw std::invalid_argument(
            "simplex: non-finite coefficient in constraint " +
            std::to_string(k));
      }
    }
  }
}

// Drops all-zero rows and optionally merges negated pairs into equalities.
// Returns false if an all-zero row has a negative bound.
inline bool presolve_rows(const LpModel& model, bool merge_equalities,
                          std::vector<Tableau::Row>& out) {
  std::vector<std::size_t> live;
  for (std::size_t k = 0; k < model.constraints.size(); ++k) {
    const auto& row = model.constraints[k];
    const bool zero = std::all_of(row.coefficients.begin(),
                                  row.coefficients.end(),
                                  [](double a) { return a == 0.0; });
    if (!zero) {
      live.push_back(k);
    } else if (row.bound < 0.0) {
      return false;
    }
  }

  std::vector<bool> consumed(model.constraints.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (merge_equalities) {
    // Key: the row scaled by +-1 so that its first nonzero is positive,
    // together with the equally scaled bound. A row and its exact negation
    // (bound included) share a key and have opposite signs.
    using Key = std::pair<std::vector<double>, double>;
    std::map<Key, std::vector<std::size_t>> open[2];
    for (std::size_t k : live) {
      const auto& row = model.constraints[k];
      const auto first = std::find_if(row.coefficients.begin(),
                                      row.coefficients.end(),
                                      [](double a) { return a != 0.0; });
      const double sign = *first > 0.0 ? 1.0 : -1.0;
      Key key{row.coefficients, sign * row.bound};
      for (double& a : key.first) a *= sign;
      const int side = sign > 0.0 ? 0 : 1;
      auto partner = open[1 - side].find(key);
      if (partner != open[1 - side].end() && !partner->second.empty()) {
        const std::size_t other = partner->second.front();
        partner->second.erase(partner->second.begin());
        pairs.emplace_back(std::min(k, other), std::max(k, other));
        consumed[k] = consumed[other] = true;
      } else {
        open[side][std::move(key)].push_back(k);
      }
    }
  }

  for (std::size_t k : live) {
    if (consumed[k]) continue;
    const auto& row = model.constraints[k];
    out.push_back({row.coefficients, row.bound,
                   Tableau::RowKind::kLessEqual});
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [k, other] : pairs) {
    const auto& row = model.constraints[k];
    out.push_back({row.coefficients, row.bound, Tableau::RowKind::kEqual});
  }
  return true;
}

}  // namespace detail

// Throws std::invalid_argument on inconsistent dimensions or non-finite
// data, and std::runtime_error if the iteration safety limit is hit.
inline LpSolution solve(const LpModel& model,
                        const SimplexOptions& options = {}) {
  detail::check_model(model);
  LpSolution solution;
  std::vector<detail::Tableau::Row> rows;
  if (!detail::presolve_rows(model, options.merge_equalities, rows)) {
    solution.status = LpStatus::kInfeasible;
    return solution;
  }

  double scale = 1.0;
  for (const auto& row : rows) scale = std::max(scale, std::abs(row.rhs));

  detail::Tableau tableau(model.num_vars(), rows, options);
  tableau.set_objective(model.objective);
  if (tableau.has_artificials()) {
    tableau.run_phase(true);
    if (tableau.phase_one_value() < -options.feasibility_tolerance * scale) {
      solution.status = LpStatus::kInfeasible;
      solution.iterations = tableau.iterations();
      return solution;
    }
    tableau.expel_artificials();
  }
  const auto result = tableau.run_phase(false);
  solution.iterations = tableau.iterations();
  if (result == detail::Tableau::PhaseResult::kUnbounded) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }
  solution.status = LpStatus::kOptimal;
  solution.x = tableau.structural_values();
  for (std::size_t j = 0; j < solution.x.size(); ++j) {
    solution.objective += model.objective[j] * solution.x[j];
  }
  assert(max_violation(model, solution.x) <=
         options.feasibility_tolerance * scale);
  return solution;
}

}  // namespace fairscore

#endif  // FAIRSCORE_SIMPLEX_HPP_
