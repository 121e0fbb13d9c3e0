#pragma once

#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "shop2/term.hpp"

namespace shop2 {

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position in a State's change trail; undoing to it restores the state.
struct UndoRecord {
  std::size_t mark = 0;
};

/// Set of ground atoms indexed by predicate. Atoms of one predicate are
/// kept in insertion order, which is the enumeration order seen by the
/// prover. Every change is trailed so search can backtrack without copies.
class State {
 public:
  State() = default;
  explicit State(std::span<const Term> atoms);

  bool contains(const Term& atom) const { return members_.count(atom) != 0; }
  std::span<const Term> atomsFor(SymbolId predicate) const;
  /// All atoms, grouped by predicate in order of first appearance.
  std::vector<Term> atoms() const;
  std::size_t size() const { return members_.size(); }

  /// Returns false when the atom was already present (no change trailed).
  bool add(const Term& atom);
  /// Returns false when the atom was absent.
  bool remove(const Term& atom);

  /// Deletions strictly before additions.
  UndoRecord applyEffects(std::span<const Term> deletions, std::span<const Term> additions);
  void undo(UndoRecord record);
  std::size_t mark() const { return trail_.size(); }

  /// Multiset comparison ignoring order.
  bool sameAtoms(const State& other) const;

 private:
  struct Change {
    bool added;
    Term atom;
    std::size_t position;
  };

  static SymbolId predicateOf(const Term& atom);

  std::unordered_map<SymbolId, std::vector<Term>> index_;
  std::vector<SymbolId> predicateOrder_;
  std::unordered_set<Term, TermHash> members_;
  std::vector<Change> trail_;
};

}  // namespace shop2
