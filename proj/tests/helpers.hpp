#ifndef NPR_TESTS_HELPERS_HPP
#define NPR_TESTS_HELPERS_HPP

#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "npr/entail.hpp"

namespace npr::testing {

inline std::string data_path(const std::string& name) {
  return std::string(NPR_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GridBound {
  bool defined = false;
  double lower = 0.0;
  double upper = 0.0;
};

// Brute-force oracle: enumerates every distribution on the world simplex
// whose masses are multiples of 1/units, keeps those satisfying all rows,
// and tracks the extremes of  sum_{num} p / sum_{den} p  where the
// denominator is positive. The two final worlds are handled in closed form
// (all rows are affine in the last free mass), which keeps 8-world sweeps
// cheap.
class GridOracle {
 public:
  GridOracle(const std::vector<lp::LinearConstraint>& rows, size_t worlds,
             int units)
      : rows_(rows), n_(worlds), units_(units) {
    // suffix coefficient ranges, used to prune branches whose remaining mass
    // cannot bring a row back into range
    minc_.assign(rows_.size(), std::vector<double>(n_, 0.0));
    maxc_.assign(rows_.size(), std::vector<double>(n_, 0.0));
    for (size_t i = 0; i < rows_.size(); ++i) {
      minc_[i][n_ - 1] = maxc_[i][n_ - 1] = rows_[i].coeffs[n_ - 1];
      for (size_t w = n_ - 1; w-- > 0;) {
        minc_[i][w] = std::min(minc_[i][w + 1], rows_[i].coeffs[w]);
        maxc_[i][w] = std::max(maxc_[i][w + 1], rows_[i].coeffs[w]);
      }
    }
  }

  GridBound bound(const WorldSet& num, const WorldSet& den) const {
    num_.assign(n_, 0.0);
    den_.assign(n_, 0.0);
    for (size_t w = 0; w < n_; ++w) {
      if (num.test(w) && den.test(w)) num_[w] = 1.0;
      if (den.test(w)) den_[w] = 1.0;
    }
    result_ = GridBound{};
    best_lo_ = 2.0;
    best_hi_ = -1.0;
    sums_.assign(rows_.size(), 0.0);
    if (n_ == 1) {
      leaf(units_);  // single world carries everything
    } else {
      recurse(0, units_, 0.0, 0.0);
    }
    if (best_hi_ >= 0.0) result_ = GridBound{true, best_lo_, best_hi_};
    return result_;
  }

 private:
  static constexpr double kEps = 1e-9;

  void recurse(size_t w, int remaining, double nacc, double dacc) const {
    if (w + 2 == n_) {
      closed_form(remaining, nacc, dacc);
      return;
    }
    // remaining mass lands somewhere in worlds >= w, so each row's final
    // value sits in [sums + r*minc, sums + r*maxc]; prune dead branches
    const double r = static_cast<double>(remaining) / units_;
    for (size_t i = 0; i < rows_.size(); ++i) {
      double lo = sums_[i] + r * minc_[i][w];
      double hi = sums_[i] + r * maxc_[i][w];
      bool ok = rows_[i].rel == Rel::EQ
                    ? (rows_[i].rhs >= lo - kEps && rows_[i].rhs <= hi + kEps)
                : rows_[i].rel == Rel::GE ? hi >= rows_[i].rhs - kEps
                                          : lo <= rows_[i].rhs + kEps;
      if (!ok) return;
    }
    for (int m = 0; m <= remaining; ++m) {
      double mass = static_cast<double>(m) / units_;
      for (size_t i = 0; i < rows_.size(); ++i)
        sums_[i] += mass * rows_[i].coeffs[w];
      recurse(w + 1, remaining - m, nacc + mass * num_[w], dacc + mass * den_[w]);
      for (size_t i = 0; i < rows_.size(); ++i)
        sums_[i] -= mass * rows_[i].coeffs[w];
    }
  }

  // Worlds n-2 and n-1 share the remaining mass r; every row value is affine
  // in x = mass of world n-2, so the feasible x form an interval.
  void closed_form(int remaining, double nacc, double dacc) const {
    const size_t u = n_ - 2, v = n_ - 1;
    const double r = static_cast<double>(remaining) / units_;
    double xlo = 0.0, xhi = r;
    bool pole_scan = false;
    for (size_t i = 0; i < rows_.size(); ++i) {
      double a = sums_[i] + r * rows_[i].coeffs[v];
      double b = rows_[i].coeffs[u] - rows_[i].coeffs[v];
      // a + x b  rel  rhs
      double rhs = rows_[i].rhs;
      auto tighten_ge = [&](double aa, double bb, double rr) {
        // aa + x bb >= rr - eps
        if (std::fabs(bb) < kEps) {
          if (aa < rr - kEps) xlo = 1.0, xhi = 0.0;
        } else if (bb > 0) {
          xlo = std::max(xlo, (rr - kEps - aa) / bb);
        } else {
          xhi = std::min(xhi, (rr - kEps - aa) / bb);
        }
      };
      switch (rows_[i].rel) {
        case Rel::GE:
          tighten_ge(a, b, rhs);
          break;
        case Rel::LE:
          tighten_ge(-a, -b, -rhs);
          break;
        case Rel::EQ:
          tighten_ge(a, b, rhs);
          tighten_ge(-a, -b, -rhs);
          break;
      }
      if (xlo > xhi) return;
    }
    int ilo = static_cast<int>(std::ceil(xlo * units_ - 1e-6));
    int ihi = static_cast<int>(std::floor(xhi * units_ + 1e-6));
    ilo = std::max(ilo, 0);
    ihi = std::min(ihi, remaining);
    if (ilo > ihi) return;

    double an = nacc + r * num_[v], bn = num_[u] - num_[v];
    double ad = dacc + r * den_[v], bd = den_[u] - den_[v];
    // Ratio (an + x bn)/(ad + x bd) is monotone away from the denominator
    // zero; scan the whole integer range if the zero falls inside it.
    if (std::fabs(bd) > kEps) {
      double pole = -ad / bd;
      if (pole > ilo / static_cast<double>(units_) - 1e-9 &&
          pole < ihi / static_cast<double>(units_) + 1e-9)
        pole_scan = true;
    }
    auto consider = [&](int xi) {
      double x = static_cast<double>(xi) / units_;
      double d = ad + x * bd;
      if (d <= kEps) return;
      double ratio = (an + x * bn) / d;
      best_lo_ = std::min(best_lo_, ratio);
      best_hi_ = std::max(best_hi_, ratio);
    };
    if (pole_scan) {
      for (int xi = ilo; xi <= ihi; ++xi) consider(xi);
    } else {
      consider(ilo);
      consider(ihi);
    }
  }

  void leaf(int remaining) const {
    double mass = static_cast<double>(remaining) / units_;
    for (size_t i = 0; i < rows_.size(); ++i) {
      double v = mass * rows_[i].coeffs[0];
      double c = v - rows_[i].rhs;
      bool ok = rows_[i].rel == Rel::EQ  ? std::fabs(c) <= kEps
                : rows_[i].rel == Rel::GE ? c >= -kEps
                                          : c <= kEps;
      if (!ok) return;
    }
    double d = mass * den_[0];
    if (d <= kEps) return;
    double ratio = mass * num_[0] / d;
    best_lo_ = std::min(best_lo_, ratio);
    best_hi_ = std::max(best_hi_, ratio);
  }

  const std::vector<lp::LinearConstraint>& rows_;
  size_t n_;
  int units_;
  std::vector<std::vector<double>> minc_, maxc_;
  mutable std::vector<double> num_, den_, sums_;
  mutable GridBound result_;
  mutable double best_lo_ = 2.0, best_hi_ = -1.0;
};

// Random propositional sentence over atom indices [0, natoms).
inline Sentence random_sentence(std::mt19937& rng,
                                const std::vector<Atom>& atoms, int depth = 2) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  switch (pick(rng)) {
    case 0:
    case 1: {
      std::uniform_int_distribution<int> ai(0, static_cast<int>(atoms.size()) - 1);
      int i = ai(rng);
      return Sentence::atom(i, atoms[i].name);
    }
    case 2:
      return Sentence::negate(random_sentence(rng, atoms, depth - 1));
    case 3:
      return Sentence::conj(random_sentence(rng, atoms, depth - 1),
                            random_sentence(rng, atoms, depth - 1));
    case 4:
      return Sentence::disj(random_sentence(rng, atoms, depth - 1),
                            random_sentence(rng, atoms, depth - 1));
    default:
      return Sentence::implies(random_sentence(rng, atoms, depth - 1),
                               random_sentence(rng, atoms, depth - 1));
  }
}

// Random grid distribution: `units` unit masses dropped on random worlds.
inline std::vector<double> random_grid_dist(std::mt19937& rng, size_t worlds,
                                            int units) {
  std::vector<int> m(worlds, 0);
  std::uniform_int_distribution<size_t> pick(0, worlds - 1);
  for (int u = 0; u < units; ++u) ++m[pick(rng)];
  std::vector<double> p(worlds);
  for (size_t w = 0; w < worlds; ++w)
    p[w] = static_cast<double>(m[w]) / units;
  return p;
}

inline double event_prob(const std::vector<double>& p, const WorldSet& s) {
  double v = 0.0;
  for (size_t w = 0; w < p.size(); ++w)
    if (s.test(w)) v += p[w];
  return v;
}

// Random KB anchored at a grid distribution p*, so the KB is consistent by
// construction and the 0.02-grid oracle always has a witness.
struct AnchoredKB {
  KnowledgeBase kb;
  std::vector<double> anchor;
};

inline ProbConstraint anchored_constraint(std::mt19937& rng,
                                          const std::vector<Atom>& atoms,
                                          const WorldTable& t,
                                          const std::vector<double>& anchor) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> slackd(0.06, 0.2);
  for (int tries = 0; tries < 50; ++tries) {
    ProbConstraint pc;
    pc.target = random_sentence(rng, atoms);
    int k = kind(rng);
    if (k == 0) {
      // unconditional equality at the anchor's exact (grid) value
      pc.rel = Rel::EQ;
      pc.value = event_prob(anchor, satisfying_set(pc.target, t));
      return pc;
    }
    pc.given = random_sentence(rng, atoms);
    WorldSet g = satisfying_set(pc.given, t);
    double pg = event_prob(anchor, g);
    if (pg < 0.3) continue;  // keep conditioning events fat
    double ratio =
        event_prob(anchor, satisfying_set(pc.target, t) & g) / pg;
    double slack = slackd(rng);
    if (k == 1) {
      pc.rel = Rel::GE;
      pc.value = std::max(0.0, ratio - slack);
    } else {
      pc.rel = Rel::LE;
      pc.value = std::min(1.0, ratio + slack);
    }
    return pc;
  }
  ProbConstraint pc;  // fallback: a vacuous bound
  pc.target = Sentence::atom(0, atoms[0].name);
  pc.rel = Rel::GE;
  pc.value = 0.0;
  return pc;
}

inline AnchoredKB random_anchored_kb(std::mt19937& rng, int natoms,
                                     int nconstraints, int units = 50) {
  AnchoredKB out;
  for (int i = 0; i < natoms; ++i)
    out.kb.atoms.push_back(Atom{std::string(1, static_cast<char>('A' + i))});
  WorldTable t(out.kb.atoms);
  out.anchor = random_grid_dist(rng, t.world_count(), units);
  for (int c = 0; c < nconstraints; ++c)
    out.kb.hard.push_back(anchored_constraint(rng, out.kb.atoms, t, out.anchor));
  return out;
}

}  // namespace npr::testing

#endif
