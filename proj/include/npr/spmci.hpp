#ifndef NPR_SPMCI_HPP
#define NPR_SPMCI_HPP

#include <optional>
#include <utility>

#include "npr/entail.hpp"

namespace npr {

struct OverlapError : Error {
  using Error::Error;
};
struct PriorityCycle : Error {
  using Error::Error;
};

/// Set-level conditional independence I(left, given, right).
struct SetCITriple {
  std::vector<Sentence> left;
  std::vector<Sentence> given;
  std::vector<Sentence> right;
};

/// Expands a set triple into its pairwise CIG tuples, deduplicated and
/// ordered by canonical form. Throws OverlapError when the sets intersect.
std::vector<CIGTuple> expand_ci(const SetCITriple& tr);

enum class Origin { Inheritance, Declared, Expanded };
enum class BlockReason { NotLinearizable, Infeasible, ForcedVacuous, UserExcluded };

struct CandidateDefault {
  CIGTuple tuple;
  Origin origin = Origin::Declared;
  // Filled at adoption time: the CI product constraint made linear through
  // the entailed point value of P(point_member | given).
  std::optional<lp::LinearConstraint> linearization;
  std::optional<Sentence> point_member;
  double point = 0.0;
  int rank = 0;  // position in the adoption order
};

struct Extension {
  std::vector<CandidateDefault> adopted;
  std::vector<std::pair<CandidateDefault, BlockReason>> blocked;
  std::vector<std::string> order_audit;
  std::vector<lp::LinearConstraint> rows;  // hard rows + adopted rows
};

std::vector<CandidateDefault> generate_candidates(const KnowledgeBase& kb,
                                                  const Conditional& q,
                                                  const ConstraintSet& hard);

/// Specificity order (more specific conditioning sentence first), refined by
/// user `prefer` edges, linearized topologically with canonical-form
/// tie-breaking. Incomparable pairs land in the audit list.
std::vector<CandidateDefault> specificity_order(
    std::vector<CandidateDefault> cands, const ConstraintSet& hard,
    const std::vector<PriorityDecl>& priorities,
    std::vector<std::string>* audit);

Extension compute_extension(const KnowledgeBase& kb, const Conditional& q,
                            const WorldTable& t);

std::pair<Bound, Extension> spmci_bound(const KnowledgeBase& kb,
                                        const Conditional& q,
                                        const WorldTable& t);

std::string render_trace(const Extension& ext);

}  // namespace npr

#endif
