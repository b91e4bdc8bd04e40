#ifndef NPR_WORLDS_HPP
#define NPR_WORLDS_HPP

#include <cstdint>
#include <vector>

#include "npr/kb.hpp"

namespace npr {

struct CapExceeded : Error {
  using Error::Error;
};
struct UnknownAtom : Error {
  using Error::Error;
};

/// Enumeration of the 2^n truth assignments over an ordered atom list.
/// World w assigns atom i the value of bit i of w (bit 0 = atom 0).
class WorldTable {
 public:
  explicit WorldTable(std::vector<Atom> atoms, int cap = kDefaultAtomCap);

  const std::vector<Atom>& atoms() const { return atoms_; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  size_t world_count() const { return size_t{1} << atoms_.size(); }
  bool atom_true_in(size_t world, int atom_index) const {
    return (world >> atom_index) & 1u;
  }

 private:
  std::vector<Atom> atoms_;
};

/// Bitset over a table's worlds.
class WorldSet {
 public:
  explicit WorldSet(size_t world_count, bool fill = false)
      : bits_(world_count, fill ? 1 : 0) {}

  size_t size() const { return bits_.size(); }
  bool test(size_t w) const { return bits_[w] != 0; }
  void set(size_t w, bool v = true) { bits_[w] = v ? 1 : 0; }
  size_t count() const;

  WorldSet operator~() const;
  WorldSet operator&(const WorldSet& o) const;
  WorldSet operator|(const WorldSet& o) const;
  friend bool operator==(const WorldSet&, const WorldSet&) = default;

 private:
  std::vector<uint8_t> bits_;
};

WorldTable build_world_table(std::vector<Atom> atoms, int cap = kDefaultAtomCap);

/// Worlds satisfying s under classical semantics.
WorldSet satisfying_set(const Sentence& s, const WorldTable& t);

bool is_valid(const Sentence& s, const WorldTable& t);

}  // namespace npr

#endif
