#ifndef NPR_SENTENCE_HPP
#define NPR_SENTENCE_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace npr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Atom {
  std::string name;
};

/// Immutable propositional formula over declared atoms. Copies share nodes.
class Sentence {
 public:
  enum class Kind { True, False, Atom, Not, And, Or, Implies, Iff };

  Sentence() : Sentence(truth()) {}

  static Sentence truth();
  static Sentence falsity();
  static Sentence atom(int index, std::string name);
  static Sentence negate(Sentence s);
  static Sentence conj(Sentence l, Sentence r);
  static Sentence disj(Sentence l, Sentence r);
  static Sentence implies(Sentence l, Sentence r);
  static Sentence iff(Sentence l, Sentence r);

  Kind kind() const { return node_->kind; }
  int atom_index() const { return node_->atom_index; }
  const std::string& atom_name() const { return node_->atom_name; }
  const Sentence& lhs() const { return node_->children[0]; }
  const Sentence& rhs() const { return node_->children[1]; }
  bool is_true() const { return node_->kind == Kind::True; }

  /// Largest atom index referenced, -1 if none.
  int max_atom_index() const;

 private:
  struct Node {
    Kind kind;
    int atom_index = -1;
    std::string atom_name;
    std::vector<Sentence> children;  // 1 for Not, 2 for binary connectives
  };
  explicit Sentence(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Sentence make_binary(Kind k, Sentence l, Sentence r);
  std::shared_ptr<const Node> node_;
};

/// Deterministic string form: fully parenthesized, with the two arguments of
/// each And/Or node sorted by their own canonical form. Purely syntactic, no
/// logical simplification.
std::string canonical_form(const Sentence& s);

/// Parseable text preserving the original argument order.
std::string render(const Sentence& s);

}  // namespace npr

#endif
