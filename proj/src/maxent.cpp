#include "npr/maxent.hpp"

#include <algorithm>
#include <cmath>

namespace npr {

double entropy(const Distribution& d) {
  double h = 0.0;
  for (double p : d.p)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

std::optional<double> me_query(const Distribution& d, const Conditional& q,
                               const WorldTable& t) {
  WorldSet given = satisfying_set(q.given, t);
  WorldSet both = satisfying_set(q.target, t) & given;
  double num = 0.0, den = 0.0;
  for (size_t w = 0; w < d.p.size(); ++w) {
    if (given.test(w)) den += d.p[w];
    if (both.test(w)) num += d.p[w];
  }
  if (den <= tolerance()) return std::nullopt;
  return num / den;
}

std::vector<CIReportEntry> ci_report(const Distribution& d,
                                     const std::vector<CIGTuple>& tuples,
                                     const WorldTable& t, double tol_ci) {
  std::vector<CIReportEntry> out;
  for (const auto& tup : tuples) {
    CIReportEntry e;
    e.tuple = tup;
    auto pa = me_query(d, Conditional{tup.a, tup.given}, t);
    auto pb = me_query(d, Conditional{tup.b, tup.given}, t);
    auto pab = me_query(d, Conditional{Sentence::conj(tup.a, tup.b), tup.given}, t);
    if (pa && pb && pab) {
      double disc = std::fabs(*pab - *pa * *pb);
      e.discrepancy = disc;
      e.holds = disc <= tol_ci;
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

bool is_normalization(const lp::LinearConstraint& row) {
  if (row.rel != Rel::EQ || row.rhs != 1.0) return false;
  for (double c : row.coeffs)
    if (c != 1.0) return false;
  return true;
}

// Solves (A + jitter I) x = b for a small symmetric matrix, in place.
std::vector<double> solve_sym(std::vector<std::vector<double>> a,
                              std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += a[i][i];
  double jitter = 1e-10 * (trace / std::max(1, n)) + 1e-14;
  for (int i = 0; i < n; ++i) a[i][i] += jitter;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    double d = a[col][col];
    if (std::fabs(d) < 1e-300) continue;
    for (int i = col + 1; i < n; ++i) {
      double f = a[i][col] / d;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = std::fabs(a[i][i]) < 1e-300 ? 0.0 : s / a[i][i];
  }
  return x;
}

}  // namespace

MEResult max_entropy(const ConstraintSet& cs, const std::vector<double>* init,
                     double tol, int max_iter) {
  const WorldTable& t = *cs.table;
  const size_t n = t.world_count();
  if (!consistent(cs)) return MEResult{MEStatus::Infeasible, {}, 0.0, 0, 0.0};

  // Freeze worlds the constraints pin to zero probability.
  std::vector<size_t> support;
  for (size_t w = 0; w < n; ++w) {
    WorldSet single(n);
    single.set(w);
    ConstraintSet one = cs;
    if (max_event_probability(one, single) > tolerance()) support.push_back(w);
  }

  // Feature rows on the support, all inequalities as GE.
  struct Row {
    std::vector<double> phi;  // over support
    double rhs;
    bool ge;  // multiplier sign-constrained to >= 0
  };
  std::vector<Row> rows;
  for (const auto& r : cs.rows) {
    if (is_normalization(r)) continue;
    Row row;
    row.rhs = r.rhs;
    row.ge = r.rel != Rel::EQ;
    double sign = r.rel == Rel::LE ? -1.0 : 1.0;
    row.rhs *= sign;
    bool nonzero = false;
    for (size_t w : support) {
      double c = sign * r.coeffs[w];
      row.phi.push_back(c);
      if (c != 0.0) nonzero = true;
    }
    if (nonzero) rows.push_back(std::move(row));
  }
  const int m = static_cast<int>(rows.size());
  const int ns = static_cast<int>(support.size());

  std::vector<double> lambda(m, 0.0);
  if (init)
    for (int i = 0; i < m && i < static_cast<int>(init->size()); ++i)
      lambda[i] = (*init)[i];
  for (int i = 0; i < m; ++i)
    if (rows[i].ge && lambda[i] < 0.0) lambda[i] = 0.0;

  auto primal = [&](const std::vector<double>& lam, std::vector<double>& p,
                    double& lse) {
    std::vector<double> score(ns, 0.0);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < ns; ++k) score[k] += lam[i] * rows[i].phi[k];
    double mx = *std::max_element(score.begin(), score.end());
    double z = 0.0;
    for (int k = 0; k < ns; ++k) z += std::exp(score[k] - mx);
    lse = mx + std::log(z);
    p.resize(ns);
    for (int k = 0; k < ns; ++k) p[k] = std::exp(score[k] - lse);
  };
  auto dual = [&](const std::vector<double>& lam) {
    std::vector<double> p;
    double lse;
    primal(lam, p, lse);
    double g = lse;
    for (int i = 0; i < m; ++i) g -= lam[i] * rows[i].rhs;
    return g;
  };

  MEResult res;
  std::vector<double> p;
  double lse = 0.0;
  int iter = 0;
  double kkt = 0.0;
  for (; iter < max_iter; ++iter) {
    primal(lambda, p, lse);
    std::vector<double> expect(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < ns; ++k) expect[i] += p[k] * rows[i].phi[k];

    kkt = 0.0;
    std::vector<double> grad(m);
    for (int i = 0; i < m; ++i) {
      double c = expect[i] - rows[i].rhs;
      grad[i] = c;
      if (rows[i].ge) {
        kkt = std::max(kkt, std::max(0.0, -c));
        kkt = std::max(kkt, std::fabs(lambda[i] * c));
      } else {
        kkt = std::max(kkt, std::fabs(c));
      }
    }
    if (kkt <= tol) break;

    // Free set: equality rows plus inequality rows not pinned at zero.
    std::vector<int> free_idx;
    for (int i = 0; i < m; ++i) {
      bool pinned = rows[i].ge && lambda[i] <= 0.0 && grad[i] > 0.0;
      if (!pinned) free_idx.push_back(i);
    }
    const int f = static_cast<int>(free_idx.size());
    std::vector<double> step(m, 0.0);
    if (f > 0) {
      std::vector<std::vector<double>> hess(f, std::vector<double>(f, 0.0));
      for (int a = 0; a < f; ++a)
        for (int b = a; b < f; ++b) {
          double s = 0.0;
          for (int k = 0; k < ns; ++k)
            s += p[k] * rows[free_idx[a]].phi[k] * rows[free_idx[b]].phi[k];
          s -= expect[free_idx[a]] * expect[free_idx[b]];
          hess[a][b] = hess[b][a] = s;
        }
      std::vector<double> gf(f);
      for (int a = 0; a < f; ++a) gf[a] = -grad[free_idx[a]];
      std::vector<double> d = solve_sym(std::move(hess), std::move(gf));
      for (int a = 0; a < f; ++a) step[free_idx[a]] = d[a];
    }

    double g0 = lse;
    for (int i = 0; i < m; ++i) g0 -= lambda[i] * rows[i].rhs;
    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> cand = lambda;
      for (int i = 0; i < m; ++i) {
        cand[i] += alpha * step[i];
        if (rows[i].ge && cand[i] < 0.0) cand[i] = 0.0;
      }
      if (dual(cand) < g0 - 1e-16) {
        lambda = std::move(cand);
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      // Newton direction failed; fall back to a projected gradient step.
      alpha = 1.0;
      for (int bt = 0; bt < 60 && !moved; ++bt) {
        std::vector<double> cand = lambda;
        for (int i = 0; i < m; ++i) {
          cand[i] -= alpha * grad[i];
          if (rows[i].ge && cand[i] < 0.0) cand[i] = 0.0;
        }
        if (dual(cand) < g0 - 1e-16) {
          lambda = std::move(cand);
          moved = true;
        }
        alpha *= 0.5;
      }
      if (!moved) break;  // stationary up to rounding
    }
  }

  primal(lambda, p, lse);
  res.dist.p.assign(n, 0.0);
  for (int k = 0; k < ns; ++k) res.dist.p[support[k]] = p[k];
  res.entropy = entropy(res.dist);
  res.iterations = iter;

  // Residual against the original rows, frozen worlds included.
  double resid = 0.0;
  for (const auto& r : cs.rows) {
    double v = 0.0;
    for (size_t w = 0; w < n; ++w) v += r.coeffs[w] * res.dist.p[w];
    double c = v - r.rhs;
    if (r.rel == Rel::EQ)
      resid = std::max(resid, std::fabs(c));
    else if (r.rel == Rel::GE)
      resid = std::max(resid, std::max(0.0, -c));
    else
      resid = std::max(resid, std::max(0.0, c));
  }
  resid = std::max(resid, kkt);
  res.residual = resid;
  res.status = resid <= tol ? MEStatus::OK : MEStatus::NotConverged;
  return res;
}

}  // namespace npr
