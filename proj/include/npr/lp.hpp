#ifndef NPR_LP_HPP
#define NPR_LP_HPP

#include <vector>

#include "npr/kb.hpp"

namespace npr::lp {

struct NumericFailure : Error {
  using Error::Error;
};

struct LinearConstraint {
  std::vector<double> coeffs;
  Rel rel = Rel::EQ;
  double rhs = 0.0;
};

enum class Direction { Min, Max };

struct LinearProgram {
  int var_count = 0;
  std::vector<double> objective;
  Direction direction = Direction::Min;
  std::vector<LinearConstraint> constraints;
  // all variables implicitly >= 0
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  double value = 0.0;
  std::vector<double> solution;
};

inline constexpr double kTolFeas = 1e-7;
inline constexpr double kTolObj = 1e-7;

/// Two-phase dense simplex, Bland's (least-index) pivot rule. Deterministic.
/// Throws NumericFailure past the iteration cap 50 * (vars + constraints).
LPOutcome solve(const LinearProgram& p);

bool feasible(const std::vector<LinearConstraint>& constraints, int var_count);

}  // namespace npr::lp

#endif
