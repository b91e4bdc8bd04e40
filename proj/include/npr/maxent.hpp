#ifndef NPR_MAXENT_HPP
#define NPR_MAXENT_HPP

#include <optional>

#include "npr/entail.hpp"

namespace npr {

struct Distribution {
  std::vector<double> p;
};

enum class MEStatus { OK, Infeasible, NotConverged };

struct MEResult {
  MEStatus status = MEStatus::Infeasible;
  Distribution dist;
  double entropy = 0.0;  // nats
  int iterations = 0;
  double residual = 0.0;  // max constraint / KKT violation
};

inline constexpr double kTolME = 1e-8;
inline constexpr int kMaxIterME = 100000;

/// Maximizes -sum p log p over the polytope described by cs (normalization
/// row included, p >= 0 implicit). Worlds pinned to zero probability by the
/// constraints are detected up front and frozen out of the exponential
/// family. `init` seeds the dual multipliers (zeros by default); the optimum
/// is unique so the seed only affects the iteration path.
MEResult max_entropy(const ConstraintSet& cs,
                     const std::vector<double>* init = nullptr,
                     double tol = kTolME, int max_iter = kMaxIterME);

/// Natural-log entropy with 0 log 0 := 0.
double entropy(const Distribution& d);

/// P(target & given) / P(given) under d; nullopt when the denominator
/// vanishes.
std::optional<double> me_query(const Distribution& d, const Conditional& q,
                               const WorldTable& t);

struct CIReportEntry {
  CIGTuple tuple;
  bool holds = false;
  std::optional<double> discrepancy;  // unset when the given has zero mass
};

/// For each tuple, |P(a&b|z) - P(a|z) P(b|z)| under d.
std::vector<CIReportEntry> ci_report(const Distribution& d,
                                     const std::vector<CIGTuple>& tuples,
                                     const WorldTable& t, double tol_ci);

}  // namespace npr

#endif
