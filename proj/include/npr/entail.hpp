#ifndef NPR_ENTAIL_HPP
#define NPR_ENTAIL_HPP

#include <optional>

#include "npr/lp.hpp"
#include "npr/worlds.hpp"

namespace npr {

struct InconsistentBase : Error {
  using Error::Error;
};

struct Conditional {
  Sentence target;
  Sentence given = Sentence::truth();
};

/// [lower, upper] interval for a conditional probability. Undefined when no
/// satisfying distribution gives the conditioning event positive probability.
struct Bound {
  bool defined = false;
  double lower = 0.0;
  double upper = 0.0;
};

/// Linear rows over world probabilities p_w, always containing the
/// normalization row sum p_w = 1 (p_w >= 0 is implicit in the LP layer).
struct ConstraintSet {
  const WorldTable* table = nullptr;
  std::vector<lp::LinearConstraint> rows;
};

/// Global comparison tolerance (point-value collapse uses the same knob).
double tolerance();
void set_tolerance(double t);

lp::LinearConstraint normalization_row(const WorldTable& t);

/// Builds the normalization row plus the linearization of every hard
/// constraint of the KB.
ConstraintSet assemble(const KnowledgeBase& kb, const WorldTable& t);

/// P(X|Y) rel q  ->  sum_{w |= X and Y} p_w - q * sum_{w |= Y} p_w  rel  0.
/// Unconditional constraints keep the reduced form  sum_{w |= X} p_w rel q.
lp::LinearConstraint linearize(const ProbConstraint& pc, const WorldTable& t);

bool consistent(const ConstraintSet& cs);

/// Tight bounds on P(target | given) over all satisfying distributions with
/// P(given) > 0, via the linear-fractional transformation.
Bound bound(const ConstraintSet& cs, const Conditional& q);

/// True iff the upper bound of P(!s) is zero, i.e. s holds with certainty.
bool entails_certain(const ConstraintSet& cs, const Sentence& s);

/// The entailed point value of q, when its bound collapses to a point.
std::optional<double> point_value(const ConstraintSet& cs, const Conditional& q);

/// Max of sum_{w in event} p_w over the feasible set.
double max_event_probability(const ConstraintSet& cs, const WorldSet& event);

}  // namespace npr

#endif
