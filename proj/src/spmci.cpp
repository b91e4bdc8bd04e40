#include "npr/spmci.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace npr {

std::vector<CIGTuple> expand_ci(const SetCITriple& tr) {
  auto keys = [](const std::vector<Sentence>& v) {
    std::set<std::string> out;
    for (const auto& s : v) out.insert(canonical_form(s));
    return out;
  };
  std::set<std::string> l = keys(tr.left), g = keys(tr.given), r = keys(tr.right);
  if (l.empty() || g.empty() || r.empty())
    throw OverlapError("set CI triple requires three nonempty sets");
  auto intersects = [](const std::set<std::string>& a,
                       const std::set<std::string>& b) {
    for (const auto& k : a)
      if (b.count(k)) return true;
    return false;
  };
  if (intersects(l, g) || intersects(l, r) || intersects(g, r))
    throw OverlapError("set CI triple sets must be pairwise disjoint");

  std::map<std::string, CIGTuple> out;
  for (const auto& a : tr.left)
    for (const auto& b : tr.right)
      for (const auto& c : tr.given) {
        CIGTuple t(a, b, c);
        out.emplace(t.key(), t);
      }
  std::vector<CIGTuple> res;
  for (auto& [k, t] : out) res.push_back(std::move(t));
  return res;
}

std::vector<CandidateDefault> generate_candidates(const KnowledgeBase& kb,
                                                  const Conditional& q,
                                                  const ConstraintSet& hard) {
  const WorldTable& t = *hard.table;
  const std::string target_key = canonical_form(q.target);
  std::map<std::string, CandidateDefault> by_key;

  // Inheritance candidates: one tuple <{H, S}, C> per conditioning sentence C
  // of a hard constraint on H, when S -> C is certain and C is not
  // equivalent to S.
  for (const auto& pc : kb.hard) {
    if (canonical_form(pc.target) != target_key) continue;
    const Sentence& c = pc.given;
    if (!entails_certain(hard, Sentence::implies(q.given, c))) continue;
    if (entails_certain(hard, Sentence::implies(c, q.given))) continue;
    CIGTuple tup(q.target, q.given, c);
    CandidateDefault cd;
    cd.tuple = tup;
    cd.origin = Origin::Inheritance;
    by_key.emplace(tup.key(), std::move(cd));
  }
  for (const auto& d : kb.defaults) {
    CandidateDefault cd;
    cd.tuple = d;
    cd.origin = Origin::Declared;
    by_key.emplace(d.key(), std::move(cd));
  }
  (void)t;
  std::vector<CandidateDefault> out;
  for (auto& [k, cd] : by_key) out.push_back(std::move(cd));
  return out;
}

std::vector<CandidateDefault> specificity_order(
    std::vector<CandidateDefault> cands, const ConstraintSet& hard,
    const std::vector<PriorityDecl>& priorities,
    std::vector<std::string>* audit) {
  const int n = static_cast<int>(cands.size());
  std::vector<std::vector<char>> edge(n, std::vector<char>(n, 0));
  std::vector<std::vector<char>> comparable(n, std::vector<char>(n, 0));

  // Certainty of given_i -> given_j, cached per ordered pair.
  std::vector<std::vector<char>> implies(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      implies[i][j] = entails_certain(
          hard, Sentence::implies(cands[i].tuple.given, cands[j].tuple.given));
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (implies[i][j] && !implies[j][i]) {
        edge[i][j] = 1;  // i more specific, i first
        comparable[i][j] = comparable[j][i] = 1;
      } else if (implies[i][j] && implies[j][i]) {
        comparable[i][j] = comparable[j][i] = 1;  // equivalent givens
      }
    }
  for (const auto& pd : priorities) {
    int hi = -1, lo = -1;
    for (int i = 0; i < n; ++i) {
      if (cands[i].tuple == pd.higher) hi = i;
      if (cands[i].tuple == pd.lower) lo = i;
    }
    if (hi >= 0 && lo >= 0 && hi != lo) {
      edge[hi][lo] = 1;
      comparable[hi][lo] = comparable[lo][hi] = 1;
    }
  }

  if (audit) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!comparable[i][j])
          audit->push_back("incomparable defaults: " + cands[i].tuple.key() +
                           " vs " + cands[j].tuple.key());
  }

  // Kahn's algorithm; among ready nodes pick the smallest canonical key.
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (edge[i][j]) ++indeg[j];
  std::vector<char> done(n, 0);
  std::vector<CandidateDefault> out;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (done[i] || indeg[i] != 0) continue;
      if (pick < 0 || cands[i].tuple.key() < cands[pick].tuple.key()) pick = i;
    }
    if (pick < 0)
      throw PriorityCycle("priority declarations create a cycle");
    done[pick] = 1;
    for (int j = 0; j < n; ++j)
      if (edge[pick][j]) --indeg[j];
    cands[pick].rank = step;
    out.push_back(cands[pick]);
  }
  return out;
}

namespace {

lp::LinearConstraint ci_row(const WorldTable& t, const Sentence& point_member,
                            const Sentence& other, const Sentence& given,
                            double v) {
  // P(x & y & z) - v * P(y & z) = 0  with x the point member.
  WorldSet x = satisfying_set(point_member, t);
  WorldSet y = satisfying_set(other, t);
  WorldSet z = satisfying_set(given, t);
  lp::LinearConstraint row;
  row.coeffs.assign(t.world_count(), 0.0);
  row.rel = Rel::EQ;
  row.rhs = 0.0;
  for (size_t w = 0; w < t.world_count(); ++w) {
    double c = 0.0;
    if (x.test(w) && y.test(w) && z.test(w)) c += 1.0;
    if (y.test(w) && z.test(w)) c -= v;
    row.coeffs[w] = c;
  }
  return row;
}

}  // namespace

Extension compute_extension(const KnowledgeBase& kb, const Conditional& q,
                            const WorldTable& t) {
  ConstraintSet hard = assemble(kb, t);
  if (!consistent(hard)) throw InconsistentBase("hard theory is inconsistent");

  Extension ext;
  auto cands = generate_candidates(kb, q, hard);
  cands = specificity_order(std::move(cands), hard, kb.priorities,
                            &ext.order_audit);

  ext.rows = hard.rows;
  for (auto& cd : cands) {
    ConstraintSet cur{&t, ext.rows};
    const Sentence& a = cd.tuple.a;
    const Sentence& b = cd.tuple.b;
    const Sentence& z = cd.tuple.given;

    std::optional<double> v = point_value(cur, Conditional{a, z});
    const Sentence* point = &a;
    const Sentence* other = &b;
    if (!v) {
      v = point_value(cur, Conditional{b, z});
      point = &b;
      other = &a;
    }
    if (!v) {
      ext.blocked.emplace_back(cd, BlockReason::NotLinearizable);
      continue;
    }
    cd.point_member = *point;
    cd.point = *v;
    lp::LinearConstraint row = ci_row(t, *point, *other, z, *v);
    cd.linearization = row;

    std::vector<lp::LinearConstraint> trial = ext.rows;
    trial.push_back(row);
    if (!lp::feasible(trial, static_cast<int>(t.world_count()))) {
      ext.blocked.emplace_back(cd, BlockReason::Infeasible);
      continue;
    }
    ConstraintSet trial_cs{&t, trial};
    WorldSet conditioned = satisfying_set(*other, t) & satisfying_set(z, t);
    if (max_event_probability(trial_cs, conditioned) <= tolerance()) {
      ext.blocked.emplace_back(cd, BlockReason::ForcedVacuous);
      continue;
    }
    ext.rows = std::move(trial);
    ext.adopted.push_back(cd);
  }
  return ext;
}

std::pair<Bound, Extension> spmci_bound(const KnowledgeBase& kb,
                                        const Conditional& q,
                                        const WorldTable& t) {
  Extension ext = compute_extension(kb, q, t);
  ConstraintSet cs{&t, ext.rows};
  return {bound(cs, q), std::move(ext)};
}

std::string render_trace(const Extension& ext) {
  struct Line {
    int rank;
    std::string text;
  };
  std::vector<Line> lines;
  auto fmt = [](const CandidateDefault& cd, const std::string& verdict) {
    std::ostringstream os;
    os << verdict << "  ci {" << canonical_form(cd.tuple.a) << ","
       << canonical_form(cd.tuple.b) << "} given "
       << canonical_form(cd.tuple.given);
    if (cd.point_member) os << "  [v=" << cd.point << "]";
    os << "  rank=" << cd.rank;
    return os.str();
  };
  for (const auto& cd : ext.adopted) lines.push_back({cd.rank, fmt(cd, "ADOPT")});
  for (const auto& [cd, reason] : ext.blocked) {
    const char* r = nullptr;
    switch (reason) {
      case BlockReason::NotLinearizable: r = "NOT_LINEARIZABLE"; break;
      case BlockReason::Infeasible: r = "INFEASIBLE"; break;
      case BlockReason::ForcedVacuous: r = "FORCED_VACUOUS"; break;
      case BlockReason::UserExcluded: r = "USER_EXCLUDED"; break;
    }
    lines.push_back({cd.rank, fmt(cd, "BLOCK(" + std::string(r) + ")")});
  }
  std::sort(lines.begin(), lines.end(),
            [](const Line& a, const Line& b) { return a.rank < b.rank; });
  std::string out;
  for (const auto& l : lines) {
    out += l.text;
    out += '\n';
  }
  return out;
}

}  // namespace npr
