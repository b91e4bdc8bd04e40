#include "npr/entail.hpp"

#include <algorithm>
#include <cmath>

namespace npr {

namespace {
double g_tol = 1e-7;
}

double tolerance() { return g_tol; }
void set_tolerance(double t) { g_tol = t; }

lp::LinearConstraint normalization_row(const WorldTable& t) {
  lp::LinearConstraint row;
  row.coeffs.assign(t.world_count(), 1.0);
  row.rel = Rel::EQ;
  row.rhs = 1.0;
  return row;
}

lp::LinearConstraint linearize(const ProbConstraint& pc, const WorldTable& t) {
  lp::LinearConstraint row;
  row.coeffs.assign(t.world_count(), 0.0);
  row.rel = pc.rel;
  WorldSet target = satisfying_set(pc.target, t);
  if (pc.given.is_true()) {
    for (size_t w = 0; w < t.world_count(); ++w)
      if (target.test(w)) row.coeffs[w] = 1.0;
    row.rhs = pc.value;
    return row;
  }
  WorldSet given = satisfying_set(pc.given, t);
  for (size_t w = 0; w < t.world_count(); ++w) {
    double c = 0.0;
    if (target.test(w) && given.test(w)) c += 1.0;
    if (given.test(w)) c -= pc.value;
    row.coeffs[w] = c;
  }
  row.rhs = 0.0;
  return row;
}

ConstraintSet assemble(const KnowledgeBase& kb, const WorldTable& t) {
  ConstraintSet cs;
  cs.table = &t;
  cs.rows.push_back(normalization_row(t));
  for (const auto& pc : kb.hard) cs.rows.push_back(linearize(pc, t));
  return cs;
}

bool consistent(const ConstraintSet& cs) {
  return lp::feasible(cs.rows, static_cast<int>(cs.table->world_count()));
}

double max_event_probability(const ConstraintSet& cs, const WorldSet& event) {
  lp::LinearProgram p;
  p.var_count = static_cast<int>(cs.table->world_count());
  p.direction = lp::Direction::Max;
  p.objective.assign(p.var_count, 0.0);
  for (size_t w = 0; w < event.size(); ++w)
    if (event.test(w)) p.objective[w] = 1.0;
  p.constraints = cs.rows;
  auto out = lp::solve(p);
  if (out.status == lp::LPStatus::Infeasible)
    throw InconsistentBase("constraint set is infeasible");
  return out.value;
}

namespace {

double fractional_optimum(const ConstraintSet& cs, const WorldSet& num,
                          const WorldSet& den, lp::Direction dir) {
  // Charnes-Cooper: y = t * p, t >= 0; every row a.p rel b becomes
  // a.y - b t rel 0, plus sum_{w in den} y_w = 1. Optimize sum_{w in num} y_w.
  const size_t n = cs.table->world_count();
  lp::LinearProgram p;
  p.var_count = static_cast<int>(n) + 1;  // y_0..y_{n-1}, t
  p.direction = dir;
  p.objective.assign(p.var_count, 0.0);
  for (size_t w = 0; w < n; ++w)
    if (num.test(w)) p.objective[w] = 1.0;
  for (const auto& row : cs.rows) {
    lp::LinearConstraint r;
    r.coeffs.assign(p.var_count, 0.0);
    for (size_t w = 0; w < n; ++w) r.coeffs[w] = row.coeffs[w];
    r.coeffs[n] = -row.rhs;
    r.rel = row.rel;
    r.rhs = 0.0;
    p.constraints.push_back(std::move(r));
  }
  lp::LinearConstraint unit;
  unit.coeffs.assign(p.var_count, 0.0);
  for (size_t w = 0; w < n; ++w)
    if (den.test(w)) unit.coeffs[w] = 1.0;
  unit.rel = Rel::EQ;
  unit.rhs = 1.0;
  p.constraints.push_back(std::move(unit));

  auto out = lp::solve(p);
  if (out.status != lp::LPStatus::Optimal)
    throw lp::NumericFailure("fractional transformation did not solve");
  return std::clamp(out.value, 0.0, 1.0);
}

}  // namespace

Bound bound(const ConstraintSet& cs, const Conditional& q) {
  WorldSet given = satisfying_set(q.given, *cs.table);
  if (max_event_probability(cs, given) <= tolerance()) return Bound{false, 0.0, 0.0};
  WorldSet both = satisfying_set(q.target, *cs.table) & given;
  Bound b;
  b.defined = true;
  b.lower = fractional_optimum(cs, both, given, lp::Direction::Min);
  b.upper = fractional_optimum(cs, both, given, lp::Direction::Max);
  return b;
}

bool entails_certain(const ConstraintSet& cs, const Sentence& s) {
  WorldSet counter = ~satisfying_set(s, *cs.table);
  return max_event_probability(cs, counter) <= tolerance();
}

std::optional<double> point_value(const ConstraintSet& cs, const Conditional& q) {
  Bound b = bound(cs, q);
  if (!b.defined || b.upper - b.lower > tolerance()) return std::nullopt;
  return 0.5 * (b.lower + b.upper);
}

}  // namespace npr
