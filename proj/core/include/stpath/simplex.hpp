#pragma once

/// @file simplex.hpp
/// @brief Dense two-phase tableau simplex over double or exact rationals.
///
/// Problems are in standard form: minimize c^T x subject to A x = b, x >= 0.
/// Every row owns an identity column created with the solver. Those columns
/// either act as phase-one artificials or, for column-generation masters, as
/// ordinary variables that start out basic. Because they are never removed
/// they always hold B^{-1}, which lets callers append columns after pivots
/// and read row duals.
///
/// Pivoting is Dantzig's rule with a fallback to Bland's rule after a run of
/// degenerate pivots; the fallback lasts until the objective strictly moves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stpath/error.hpp"
#include "stpath/rational.hpp"

namespace stpath {

template <class Scalar>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static constexpr double kTol = 1e-9;
  static bool is_zero(double v) { return std::abs(v) <= kTol; }
  static bool is_negative(double v) { return v < -kTol; }
  static bool is_positive(double v) { return v > kTol; }
  static double magnitude(double v) { return std::abs(v); }
};

template <>
struct ScalarOps<Rational> {
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static bool is_negative(const Rational& v) { return sgn(v) < 0; }
  static bool is_positive(const Rational& v) { return sgn(v) > 0; }
  static double magnitude(const Rational& v) { return std::abs(v.get_d()); }
};

enum class SimplexStatus { optimal, infeasible, unbounded, iteration_limit };

/// Column given as (row, coefficient) pairs.
template <class Scalar>
using SparseColumn = std::vector<std::pair<int, Scalar>>;

template <class Scalar>
class Simplex {
  using Ops = ScalarOps<Scalar>;

 public:
  struct Options {
    int bland_after_degenerate = 40;
    long max_pivots = 2'000'000;
  };

  /// `identity_artificial`: identity columns are phase-one artificials that
  /// must leave the basis (cost 0 in phase two, never re-enter). Otherwise
  /// they are real variables with cost `identity_cost` and the starting
  /// identity basis must already be feasible (b >= 0).
  Simplex(std::vector<Scalar> rhs, bool identity_artificial, Scalar identity_cost = Scalar(0))
      : Simplex(std::move(rhs), identity_artificial, std::move(identity_cost), Options{}) {}

  Simplex(std::vector<Scalar> rhs, bool identity_artificial, Scalar identity_cost, Options options)
      : rows_(static_cast<int>(rhs.size())),
        artificial_(identity_artificial),
        options_(options),
        rhs_(std::move(rhs)),
        sign_(rows_, 1),
        basis_(rows_) {
    for (int r = 0; r < rows_; ++r) {
      if (Ops::is_negative(rhs_[r])) {
        if (!artificial_) throw InputError("simplex: identity basis infeasible for negative right-hand side");
        rhs_[r] = -rhs_[r];
        sign_[r] = -1;
      }
    }
    tableau_.assign(rows_, std::vector<Scalar>(rows_, Scalar(0)));
    for (int r = 0; r < rows_; ++r) {
      tableau_[r][r] = Scalar(1);
      basis_[r] = r;
    }
    cost_.assign(rows_, artificial_ ? Scalar(0) : identity_cost);
    dual_row_valid_ = false;
  }

  int rows() const { return rows_; }
  int columns() const { return static_cast<int>(cost_.size()); }
  int identity_column(int row) const { return row; }
  bool is_identity(int column) const { return column < rows_; }

  /// Appends a structural column; allowed at any time (the tableau column is
  /// B^{-1} times the column). Returns its index.
  int add_column(const SparseColumn<Scalar>& entries, Scalar cost) {
    const int col = columns();
    for (int i = 0; i < rows_; ++i) {
      Scalar acc(0);
      for (const auto& [r, a] : entries) {
        const Scalar& binv = tableau_[i][r];
        if (!Ops::is_zero(binv)) {
          if (sign_[r] < 0) {
            acc -= binv * a;
          } else {
            acc += binv * a;
          }
        }
      }
      tableau_[i].push_back(std::move(acc));
    }
    cost_.push_back(std::move(cost));
    dual_row_valid_ = false;
    return col;
  }

  /// Pivots the hinted columns into the basis. Succeeds only if the
  /// resulting basic solution is nonnegative; otherwise the previous
  /// tableau is restored.
  bool crash(std::span<const int> hint) {
    auto saved_tableau = tableau_;
    auto saved_rhs = rhs_;
    auto saved_basis = basis_;
    for (int col : hint) {
      if (col < rows_ || col >= columns()) continue;
      if (std::find(basis_.begin(), basis_.end(), col) != basis_.end()) continue;
      int best = -1;
      double best_mag = 0.0;
      for (int i = 0; i < rows_; ++i) {
        if (!is_identity(basis_[i]) || Ops::is_zero(tableau_[i][col])) continue;
        const double mag = Ops::magnitude(tableau_[i][col]);
        if (best < 0 || mag > best_mag) {
          best = i;
          best_mag = mag;
        }
      }
      if (best >= 0) pivot(best, col);
    }
    const bool feasible =
        std::none_of(rhs_.begin(), rhs_.end(), [](const Scalar& v) { return Ops::is_negative(v); });
    if (!feasible) {
      tableau_ = std::move(saved_tableau);
      rhs_ = std::move(saved_rhs);
      basis_ = std::move(saved_basis);
    }
    dual_row_valid_ = false;
    return feasible;
  }

  SimplexStatus solve() {
    if (artificial_) {
      const bool needs_phase_one = std::any_of(basis_.begin(), basis_.end(), [&](int b) { return is_identity(b); });
      if (needs_phase_one) {
        std::vector<Scalar> phase_one(columns(), Scalar(0));
        for (int r = 0; r < rows_; ++r) phase_one[r] = Scalar(1);
        const SimplexStatus st = optimize(phase_one, /*identity_may_enter=*/true);
        if (st != SimplexStatus::optimal) return st;
        for (int i = 0; i < rows_; ++i) {
          if (is_identity(basis_[i]) && Ops::is_positive(rhs_[i])) return SimplexStatus::infeasible;
        }
        drive_out_artificials();
      }
      return optimize(cost_, /*identity_may_enter=*/false);
    }
    return optimize(cost_, /*identity_may_enter=*/true);
  }

  Scalar value(int column) const {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] == column) return rhs_[i];
    }
    return Scalar(0);
  }

  Scalar objective() const {
    Scalar total(0);
    for (int i = 0; i < rows_; ++i) total += cost_[basis_[i]] * rhs_[i];
    return total;
  }

  /// Row duals y with reduced cost c_j - y^T A_j for the original rows.
  std::vector<Scalar> duals() {
    refresh_reduced_costs(cost_);
    std::vector<Scalar> y(rows_);
    for (int r = 0; r < rows_; ++r) {
      Scalar v = cost_[r] - reduced_[r];
      y[r] = sign_[r] < 0 ? Scalar(-v) : v;
    }
    return y;
  }

  const std::vector<int>& basis() const { return basis_; }
  long pivots() const { return pivots_; }

 private:
  void refresh_reduced_costs(const std::vector<Scalar>& cost) {
    const int cols = columns();
    reduced_.assign(cols, Scalar(0));
    for (int j = 0; j < cols; ++j) reduced_[j] = cost[j];
    for (int i = 0; i < rows_; ++i) {
      const Scalar& cb = cost[basis_[i]];
      if (Ops::is_zero(cb)) continue;
      for (int j = 0; j < cols; ++j) {
        if (!Ops::is_zero(tableau_[i][j])) reduced_[j] -= cb * tableau_[i][j];
      }
    }
    dual_row_valid_ = true;
  }

  void pivot(int row, int col) {
    const int cols = columns();
    const Scalar inv = Scalar(1) / tableau_[row][col];
    for (int j = 0; j < cols; ++j) {
      if (!Ops::is_zero(tableau_[row][j])) tableau_[row][j] *= inv;
    }
    rhs_[row] *= inv;
    tableau_[row][col] = Scalar(1);
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      const Scalar factor = tableau_[i][col];
      if (Ops::is_zero(factor)) continue;
      for (int j = 0; j < cols; ++j) {
        if (!Ops::is_zero(tableau_[row][j])) tableau_[i][j] -= factor * tableau_[row][j];
      }
      rhs_[i] -= factor * rhs_[row];
      if constexpr (std::is_same_v<Scalar, double>) {
        if (std::abs(rhs_[i]) <= Ops::kTol) rhs_[i] = 0.0;
      }
      tableau_[i][col] = Scalar(0);
    }
    if (dual_row_valid_) {
      const Scalar factor = reduced_[col];
      if (!Ops::is_zero(factor)) {
        for (int j = 0; j < cols; ++j) {
          if (!Ops::is_zero(tableau_[row][j])) reduced_[j] -= factor * tableau_[row][j];
        }
      }
      reduced_[col] = Scalar(0);
    }
    basis_[row] = col;
    ++pivots_;
  }

  SimplexStatus optimize(const std::vector<Scalar>& cost, bool identity_may_enter) {
    refresh_reduced_costs(cost);
    int degenerate_run = 0;
    bool bland = false;
    long local = 0;
    while (true) {
      if (++local > options_.max_pivots) return SimplexStatus::iteration_limit;
      const int cols = columns();
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (!identity_may_enter && is_identity(j)) continue;
        if (!Ops::is_negative(reduced_[j])) continue;
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (enter < 0 || reduced_[j] < reduced_[enter]) enter = j;
      }
      if (enter < 0) return SimplexStatus::optimal;

      int leave = -1;
      Scalar best_ratio(0);
      for (int i = 0; i < rows_; ++i) {
        const Scalar& a = tableau_[i][enter];
        if (!Ops::is_positive(a)) continue;
        Scalar ratio = rhs_[i] / a;
        if (leave < 0 || ratio < best_ratio) {
          leave = i;
          best_ratio = std::move(ratio);
          continue;
        }
        if (!(best_ratio < ratio)) {
          // Tie: Bland picks the smallest leaving variable; otherwise prefer
          // the larger pivot element.
          if (bland ? basis_[i] < basis_[leave]
                    : Ops::magnitude(a) > Ops::magnitude(tableau_[leave][enter])) {
            leave = i;
          }
        }
      }
      if (leave < 0) return SimplexStatus::unbounded;

      const bool degenerate = Ops::is_zero(best_ratio);
      pivot(leave, enter);
      if (degenerate) {
        if (++degenerate_run >= options_.bland_after_degenerate) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  void drive_out_artificials() {
    const int cols = columns();
    for (int i = 0; i < rows_; ++i) {
      if (!is_identity(basis_[i])) continue;
      for (int j = rows_; j < cols; ++j) {
        if (!Ops::is_zero(tableau_[i][j]) && std::find(basis_.begin(), basis_.end(), j) == basis_.end()) {
          pivot(i, j);
          break;
        }
      }
      // A row with no structural entry left is redundant; its artificial
      // stays basic at level zero and never leaves.
    }
    dual_row_valid_ = false;
  }

  int rows_;
  bool artificial_;
  Options options_;
  std::vector<std::vector<Scalar>> tableau_;
  std::vector<Scalar> rhs_;
  std::vector<int> sign_;
  std::vector<int> basis_;
  std::vector<Scalar> cost_;
  std::vector<Scalar> reduced_;
  bool dual_row_valid_ = false;
  long pivots_ = 0;
};

}  // namespace stpath
