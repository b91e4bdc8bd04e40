#include "npr/worlds.hpp"

#include <algorithm>

namespace npr {

WorldTable::WorldTable(std::vector<Atom> atoms, int cap)
    : atoms_(std::move(atoms)) {
  if (static_cast<int>(atoms_.size()) > cap)
    throw CapExceeded("atom count " + std::to_string(atoms_.size()) +
                      " exceeds cap " + std::to_string(cap));
}

size_t WorldSet::count() const {
  return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

WorldSet WorldSet::operator~() const {
  WorldSet r(size());
  for (size_t w = 0; w < size(); ++w) r.bits_[w] = bits_[w] ^ 1;
  return r;
}

WorldSet WorldSet::operator&(const WorldSet& o) const {
  WorldSet r(size());
  for (size_t w = 0; w < size(); ++w) r.bits_[w] = bits_[w] & o.bits_[w];
  return r;
}

WorldSet WorldSet::operator|(const WorldSet& o) const {
  WorldSet r(size());
  for (size_t w = 0; w < size(); ++w) r.bits_[w] = bits_[w] | o.bits_[w];
  return r;
}

WorldTable build_world_table(std::vector<Atom> atoms, int cap) {
  return WorldTable(std::move(atoms), cap);
}

WorldSet satisfying_set(const Sentence& s, const WorldTable& t) {
  switch (s.kind()) {
    case Sentence::Kind::True:
      return WorldSet(t.world_count(), true);
    case Sentence::Kind::False:
      return WorldSet(t.world_count(), false);
    case Sentence::Kind::Atom: {
      int i = s.atom_index();
      if (i < 0 || i >= t.atom_count())
        throw UnknownAtom("atom '" + s.atom_name() + "' not in table");
      WorldSet r(t.world_count());
      for (size_t w = 0; w < t.world_count(); ++w)
        r.set(w, t.atom_true_in(w, i));
      return r;
    }
    case Sentence::Kind::Not:
      return ~satisfying_set(s.lhs(), t);
    case Sentence::Kind::And:
      return satisfying_set(s.lhs(), t) & satisfying_set(s.rhs(), t);
    case Sentence::Kind::Or:
      return satisfying_set(s.lhs(), t) | satisfying_set(s.rhs(), t);
    case Sentence::Kind::Implies:
      return ~satisfying_set(s.lhs(), t) | satisfying_set(s.rhs(), t);
    case Sentence::Kind::Iff: {
      WorldSet l = satisfying_set(s.lhs(), t);
      WorldSet r = satisfying_set(s.rhs(), t);
      return (l & r) | (~l & ~r);
    }
  }
  throw Error("bad sentence kind");
}

bool is_valid(const Sentence& s, const WorldTable& t) {
  return satisfying_set(s, t).count() == t.world_count();
}

}  // namespace npr
