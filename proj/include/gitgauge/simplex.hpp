#pragma once

// Exact two-phase primal simplex over the rationals (dense tableau, Bland's
// rule), plus a small modelling layer for free variables and inequalities.

#include "gitgauge/linalg.hpp"

#include <optional>
#include <vector>

namespace gitgauge::lp {

enum class Status { Optimal, Infeasible, Unbounded };

/// Result of `minimize c·x s.t. A x = b, x >= 0`.
struct StandardResult {
  Status status = Status::Infeasible;
  RationalVector x;
  Rational objective;
  /// When infeasible: y with yᵀA <= 0 componentwise and yᵀb > 0.
  RationalVector farkas;
};

namespace detail {

class Tableau {
public:
  Tableau(const RationalMatrix& a, const RationalVector& b, std::size_t n) : n_(n), rows_(a.size()) {
    const std::size_t m = a.size();
    t_.assign(m, RationalVector(n + m + 1));
    sigma_.assign(m, 1);
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      sigma_[i] = b[i].sign() < 0 ? -1 : 1;
      for (std::size_t j = 0; j < n; ++j) t_[i][j] = sigma_[i] < 0 ? -a[i][j] : a[i][j];
      t_[i][n + i] = 1;
      t_[i][n + m] = sigma_[i] < 0 ? -b[i] : b[i];
      basis_[i] = n + i;
    }
  }

  std::size_t rhs() const { return n_ + rows_; }

  void load_costs(const RationalVector& cost) {
    cost_ = cost;
    z_.assign(rhs() + 1, Rational(0));
    for (std::size_t j = 0; j <= rhs(); ++j) {
      Rational s = j < rhs() ? cost_[j] : Rational(0);
      for (std::size_t i = 0; i < t_.size(); ++i) {
        const Rational& cb = cost_[basis_[i]];
        if (!cb.is_zero() && !t_[i][j].is_zero()) s -= cb * t_[i][j];
      }
      z_[j] = s;
    }
  }

  /// Runs Bland-rule iterations over columns [0, limit). False if unbounded.
  bool optimize(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (z_[j].sign() < 0) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = t_.size();
      Rational best;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][enter].sign() <= 0) continue;
        Rational ratio = t_[i][rhs()] / t_[i][enter];
        if (leave == t_.size() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == t_.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    Rational inv = Rational(1) / t_[row][col];
    for (auto& v : t_[row]) v *= inv;
    auto eliminate = [&](RationalVector& target) {
      if (target[col].is_zero()) return;
      Rational f = target[col];
      for (std::size_t j = 0; j <= rhs(); ++j)
        if (!t_[row][j].is_zero()) target[j] -= f * t_[row][j];
    };
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (i != row) eliminate(t_[i]);
    eliminate(z_);
    basis_[row] = col;
  }

  /// Pivots basic artificials out; drops rows that are linearly redundant.
  void expel_artificials() {
    for (std::size_t i = 0; i < t_.size();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (!t_[i][j].is_zero()) {
          col = j;
          break;
        }
      if (col < n_) {
        pivot(i, col);
        ++i;
      } else {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  Rational objective() const { return -z_[rhs()]; }
  const Rational& reduced_cost(std::size_t j) const { return z_[j]; }
  int sigma(std::size_t i) const { return sigma_[i]; }

  RationalVector solution() const {
    RationalVector x(n_);
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (basis_[i] < n_) x[basis_[i]] = t_[i][rhs()];
    return x;
  }

private:
  std::size_t n_;
  std::size_t rows_;
  RationalMatrix t_;
  RationalVector z_;
  RationalVector cost_;
  std::vector<std::size_t> basis_;
  std::vector<int> sigma_;
};

}  // namespace detail

inline StandardResult minimize_standard(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw input_error("lp: rhs size mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw input_error("lp: row size mismatch");

  detail::Tableau tab(a, b, n);
  RationalVector phase1(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1;
  tab.load_costs(phase1);
  tab.optimize(n);  // phase-1 objective is bounded below by 0

  StandardResult out;
  if (tab.objective().sign() > 0) {
    out.status = Status::Infeasible;
    out.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rational y = Rational(1) - tab.reduced_cost(n + i);
      out.farkas[i] = tab.sigma(i) < 0 ? -y : y;
    }
    return out;
  }

  tab.expel_artificials();
  RationalVector phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  tab.load_costs(phase2);
  if (!tab.optimize(n)) {
    out.status = Status::Unbounded;
    return out;
  }
  out.status = Status::Optimal;
  out.x = tab.solution();
  out.objective = tab.objective();
  return out;
}

enum class Relation { LessEqual, GreaterEqual, Equal };

/// Small LP model: variables are nonnegative unless declared free.
class Model {
public:
  std::size_t add_variable(bool free = false) {
    free_.push_back(free);
    return free_.size() - 1;
  }

  std::size_t variable_count() const { return free_.size(); }

  void add_constraint(RationalVector coeffs, Relation rel, Rational rhs) {
    coeffs.resize(free_.size());
    rows_.push_back({std::move(coeffs), rel, std::move(rhs)});
  }

  struct Result {
    Status status = Status::Infeasible;
    RationalVector values;
    Rational objective;
  };

  Result minimize(const RationalVector& objective) const { return solve(objective, false); }
  Result maximize(const RationalVector& objective) const { return solve(objective, true); }

private:
  struct Row {
    RationalVector coeffs;
    Relation rel;
    Rational rhs;
  };

  Result solve(RationalVector objective, bool maximize) const {
    objective.resize(free_.size());
    // Column layout: one column per nonnegative variable, two per free
    // variable, then one slack per inequality row.
    std::vector<std::size_t> col_of(free_.size());
    std::size_t cols = 0;
    for (std::size_t v = 0; v < free_.size(); ++v) {
      col_of[v] = cols;
      cols += free_[v] ? 2 : 1;
    }
    std::size_t slack_base = cols;
    for (const auto& row : rows_)
      if (row.rel != Relation::Equal) ++cols;

    RationalMatrix a(rows_.size(), RationalVector(cols));
    RationalVector b(rows_.size());
    std::size_t slack = slack_base;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto& row = rows_[i];
      for (std::size_t v = 0; v < free_.size(); ++v) {
        a[i][col_of[v]] = row.coeffs[v];
        if (free_[v]) a[i][col_of[v] + 1] = -row.coeffs[v];
      }
      if (row.rel == Relation::LessEqual) a[i][slack++] = 1;
      if (row.rel == Relation::GreaterEqual) a[i][slack++] = -1;
      b[i] = row.rhs;
    }
    RationalVector c(cols);
    for (std::size_t v = 0; v < free_.size(); ++v) {
      Rational w = maximize ? -objective[v] : objective[v];
      c[col_of[v]] = w;
      if (free_[v]) c[col_of[v] + 1] = -w;
    }

    auto std_result = minimize_standard(a, b, c);
    Result out;
    out.status = std_result.status;
    if (out.status != Status::Optimal) return out;
    out.values.resize(free_.size());
    for (std::size_t v = 0; v < free_.size(); ++v) {
      out.values[v] = std_result.x[col_of[v]];
      if (free_[v]) out.values[v] -= std_result.x[col_of[v] + 1];
    }
    out.objective = maximize ? -std_result.objective : std_result.objective;
    return out;
  }

  std::vector<bool> free_;
  std::vector<Row> rows_;
};

}  // namespace gitgauge::lp
