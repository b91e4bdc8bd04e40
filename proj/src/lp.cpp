#include "npr/lp.hpp"

#include <cmath>
#include <limits>

namespace npr::lp {

namespace {

constexpr double kPivotEps = 1e-9;

// Full-tableau simplex on: min c'x, Ax = b (b >= 0), x >= 0.
// Row layout: T[i] = [a_i | b_i] for i < m; T[m] = reduced-cost row with the
// negated objective value in its last entry.
class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), rows_(m + 1, std::vector<double>(n + 1, 0.0)), basis_(m, -1) {}

  std::vector<double>& row(int i) { return rows_[i]; }
  std::vector<double>& cost() { return rows_[m_]; }
  int basis(int i) const { return basis_[i]; }
  void set_basis(int i, int j) { basis_[i] = j; }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void drop_row(int i) {
    rows_.erase(rows_.begin() + i);
    basis_.erase(basis_.begin() + i);
    --m_;
  }

  void pivot(int r, int c) {
    double piv = rows_[r][c];
    for (double& v : rows_[r]) v /= piv;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double f = rows_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) rows_[i][j] -= f * rows_[r][j];
      rows_[i][c] = 0.0;
    }
    basis_[r] = c;
  }

  // Bland's rule iteration. allowed[j] == false bars the column from entering.
  // Returns Optimal or Unbounded; throws past the cap.
  LPStatus iterate(const std::vector<char>& allowed, long& budget) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (!allowed[j]) continue;
        if (rows_[m_][j] < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LPStatus::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        double a = rows_[i][enter];
        if (a > kPivotEps) {
          double ratio = rows_[i][n_] / a;
          if (ratio < best - kPivotEps ||
              (ratio < best + kPivotEps &&
               (leave < 0 || basis_[i] < basis_[leave]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LPStatus::Unbounded;
      if (--budget < 0)
        throw NumericFailure("simplex iteration cap exceeded");
      pivot(leave, enter);
    }
  }

 private:
  int m_, n_;
  std::vector<std::vector<double>> rows_;
  std::vector<int> basis_;
};

}  // namespace

LPOutcome solve(const LinearProgram& p) {
  const int n = p.var_count;
  const int m = static_cast<int>(p.constraints.size());
  for (const auto& c : p.constraints) {
    if (static_cast<int>(c.coeffs.size()) != n)
      throw Error("constraint dimension mismatch");
    for (double v : c.coeffs)
      if (!std::isfinite(v)) throw Error("non-finite coefficient");
    if (!std::isfinite(c.rhs)) throw Error("non-finite rhs");
  }
  if (static_cast<int>(p.objective.size()) != n)
    throw Error("objective dimension mismatch");

  long budget = 50L * (n + m);

  // Count slack and artificial columns after rhs sign normalization.
  int n_slack = 0, n_art = 0;
  std::vector<int> kind(m);  // 0 = EQ, +1 = LE (slack), -1 = GE (surplus + art)
  for (int i = 0; i < m; ++i) {
    const auto& c = p.constraints[i];
    Rel r = c.rel;
    double b = c.rhs;
    if (b < 0) r = (r == Rel::GE) ? Rel::LE : (r == Rel::LE ? Rel::GE : Rel::EQ);
    if (r == Rel::LE) {
      kind[i] = 1;
      ++n_slack;
    } else if (r == Rel::GE) {
      kind[i] = -1;
      ++n_slack;
      ++n_art;
    } else {
      kind[i] = 0;
      ++n_art;
    }
  }
  const int total = n + n_slack + n_art;
  Tableau t(m, total);
  std::vector<char> is_art(total, 0);
  {
    int slack_at = n, art_at = n + n_slack;
    for (int i = 0; i < m; ++i) {
      const auto& c = p.constraints[i];
      double sign = c.rhs < 0 ? -1.0 : 1.0;
      auto& row = t.row(i);
      for (int j = 0; j < n; ++j) row[j] = sign * c.coeffs[j];
      row[total] = sign * c.rhs;
      if (kind[i] == 1) {
        row[slack_at] = 1.0;
        t.set_basis(i, slack_at);
        ++slack_at;
      } else if (kind[i] == -1) {
        row[slack_at] = -1.0;
        ++slack_at;
        row[art_at] = 1.0;
        is_art[art_at] = 1;
        t.set_basis(i, art_at);
        ++art_at;
      } else {
        row[art_at] = 1.0;
        is_art[art_at] = 1;
        t.set_basis(i, art_at);
        ++art_at;
      }
    }
  }

  std::vector<char> allowed(total, 1);

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    auto& cost = t.cost();
    for (int j = 0; j < total; ++j) cost[j] = is_art[j] ? 1.0 : 0.0;
    cost[total] = 0.0;
    for (int i = 0; i < m; ++i) {
      if (is_art[t.basis(i)]) {
        const auto& row = t.row(i);
        for (int j = 0; j <= total; ++j) cost[j] -= row[j];
      }
    }
    LPStatus st = t.iterate(allowed, budget);
    (void)st;  // the phase-1 objective is bounded below by 0
    double infeas = -t.cost()[total];
    if (infeas > kTolFeas) return LPOutcome{LPStatus::Infeasible, 0.0, {}};
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (int i = t.rows() - 1; i >= 0; --i) {
      if (!is_art[t.basis(i)]) continue;
      int piv = -1;
      for (int j = 0; j < total; ++j) {
        if (is_art[j]) continue;
        if (std::fabs(t.row(i)[j]) > kPivotEps) {
          piv = j;
          break;
        }
      }
      if (piv >= 0)
        t.pivot(i, piv);
      else
        t.drop_row(i);
    }
    for (int j = 0; j < total; ++j)
      if (is_art[j]) allowed[j] = 0;
  }

  // Phase 2.
  const double dir = p.direction == Direction::Min ? 1.0 : -1.0;
  {
    auto& cost = t.cost();
    for (int j = 0; j <= total; ++j) cost[j] = 0.0;
    for (int j = 0; j < n; ++j) cost[j] = dir * p.objective[j];
    for (int i = 0; i < t.rows(); ++i) {
      double cb = cost[t.basis(i)];
      if (cb == 0.0) continue;
      const auto& row = t.row(i);
      for (int j = 0; j <= total; ++j) cost[j] -= cb * row[j];
      cost[t.basis(i)] = 0.0;
    }
  }
  LPStatus st = t.iterate(allowed, budget);
  if (st == LPStatus::Unbounded) return LPOutcome{LPStatus::Unbounded, 0.0, {}};

  std::vector<double> x(n, 0.0);
  for (int i = 0; i < t.rows(); ++i) {
    int b = t.basis(i);
    if (b < n) x[b] = t.row(i)[total];
  }
  double value = 0.0;
  for (int j = 0; j < n; ++j) value += p.objective[j] * x[j];
  return LPOutcome{LPStatus::Optimal, value, std::move(x)};
}

bool feasible(const std::vector<LinearConstraint>& constraints, int var_count) {
  LinearProgram p;
  p.var_count = var_count;
  p.objective.assign(var_count, 0.0);
  p.direction = Direction::Min;
  p.constraints = constraints;
  return solve(p).status != LPStatus::Infeasible;
}

}  // namespace npr::lp
