#ifndef NPR_KB_HPP
#define NPR_KB_HPP

#include <string>
#include <utility>
#include <vector>

#include "npr/sentence.hpp"

namespace npr {

enum class Rel { EQ, GE, LE };

/// One Type-1-ci statement: P(target | given) rel value.
struct ProbConstraint {
  Sentence target;
  Sentence given = Sentence::truth();  // unconditional when True
  Rel rel = Rel::EQ;
  double value = 0.0;
  int line = 0;  // source position, 0 when synthesized
};

/// Conditional-independence default on an unordered pair {a, b} given z.
struct CIGTuple {
  Sentence a, b;  // stored sorted by canonical form
  Sentence given;

  CIGTuple() = default;
  CIGTuple(Sentence x, Sentence y, Sentence z);

  std::string key() const;  // canonical identity string
  friend bool operator==(const CIGTuple& l, const CIGTuple& r) {
    return l.key() == r.key();
  }
};

struct PriorityDecl {
  CIGTuple higher;
  CIGTuple lower;
  int line = 0;
};

struct Query {
  Sentence target;
  Sentence given = Sentence::truth();
};

struct KnowledgeBase {
  std::vector<Atom> atoms;
  std::vector<ProbConstraint> hard;
  std::vector<CIGTuple> defaults;
  std::vector<PriorityDecl> priorities;
  std::vector<Query> queries;
};

constexpr int kDefaultAtomCap = 12;

struct ParseError : Error {
  int line, col;
  ParseError(int line, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
};

struct ValidationError : Error {
  std::vector<std::string> issues;
  explicit ValidationError(std::vector<std::string> v)
      : Error(join(v)), issues(std::move(v)) {}

 private:
  static std::string join(const std::vector<std::string>& v);
};

KnowledgeBase parse_kb(const std::string& text);
Sentence parse_sentence(const std::string& text, const std::vector<Atom>& atoms);

/// Parses a query string of the form "P(X | Y)" or "P(X)".
Query parse_query(const std::string& text, const std::vector<Atom>& atoms);

/// Inverse pretty-printer: parse_kb(render(kb)) reproduces kb up to
/// canonical forms.
std::string render(const KnowledgeBase& kb);

}  // namespace npr

#endif
