#include "npr/sentence.hpp"

#include <algorithm>
#include <utility>

namespace npr {

Sentence Sentence::truth() {
  static const auto n = [] {
    auto p = std::make_shared<Node>();
    p->kind = Kind::True;
    return p;
  }();
  return Sentence(n);
}

Sentence Sentence::falsity() {
  static const auto n = [] {
    auto p = std::make_shared<Node>();
    p->kind = Kind::False;
    return p;
  }();
  return Sentence(n);
}

Sentence Sentence::atom(int index, std::string name) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Atom;
  p->atom_index = index;
  p->atom_name = std::move(name);
  return Sentence(std::move(p));
}

Sentence Sentence::negate(Sentence s) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Not;
  p->children.push_back(std::move(s));
  return Sentence(std::move(p));
}

Sentence Sentence::make_binary(Kind k, Sentence l, Sentence r) {
  auto p = std::make_shared<Node>();
  p->kind = k;
  p->children.push_back(std::move(l));
  p->children.push_back(std::move(r));
  return Sentence(std::move(p));
}

Sentence Sentence::conj(Sentence l, Sentence r) {
  return make_binary(Kind::And, std::move(l), std::move(r));
}
Sentence Sentence::disj(Sentence l, Sentence r) {
  return make_binary(Kind::Or, std::move(l), std::move(r));
}
Sentence Sentence::implies(Sentence l, Sentence r) {
  return make_binary(Kind::Implies, std::move(l), std::move(r));
}
Sentence Sentence::iff(Sentence l, Sentence r) {
  return make_binary(Kind::Iff, std::move(l), std::move(r));
}

int Sentence::max_atom_index() const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return -1;
    case Kind::Atom:
      return atom_index();
    case Kind::Not:
      return lhs().max_atom_index();
    default:
      return std::max(lhs().max_atom_index(), rhs().max_atom_index());
  }
}

namespace {

void emit(const Sentence& s, bool canonical, std::string& out) {
  switch (s.kind()) {
    case Sentence::Kind::True:
      out += "true";
      return;
    case Sentence::Kind::False:
      out += "false";
      return;
    case Sentence::Kind::Atom:
      out += s.atom_name();
      return;
    case Sentence::Kind::Not:
      out += '!';
      emit(s.lhs(), canonical, out);
      return;
    default:
      break;
  }
  const char* op = nullptr;
  switch (s.kind()) {
    case Sentence::Kind::And:
      op = " & ";
      break;
    case Sentence::Kind::Or:
      op = " v ";
      break;
    case Sentence::Kind::Implies:
      op = " -> ";
      break;
    default:
      op = " <-> ";
      break;
  }
  std::string a, b;
  emit(s.lhs(), canonical, a);
  emit(s.rhs(), canonical, b);
  const bool commutative = s.kind() == Sentence::Kind::And ||
                           s.kind() == Sentence::Kind::Or;
  if (canonical && commutative && b < a) std::swap(a, b);
  out += '(';
  out += a;
  out += op;
  out += b;
  out += ')';
}

}  // namespace

std::string canonical_form(const Sentence& s) {
  std::string out;
  emit(s, true, out);
  return out;
}

std::string render(const Sentence& s) {
  std::string out;
  emit(s, false, out);
  return out;
}

}  // namespace npr
