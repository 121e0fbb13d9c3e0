#include "shop2/state.hpp"

#include <algorithm>

namespace shop2 {

State::State(std::span<const Term> atoms) {
  for (const auto& a : atoms) add(a);
  trail_.clear();
}

SymbolId State::predicateOf(const Term& atom) {
  auto h = atom.head();
  if (!h) throw GroundingError("not an atom: " + toString(atom));
  if (!atom.isGround()) throw GroundingError("non-ground atom: " + toString(atom));
  return *h;
}

std::span<const Term> State::atomsFor(SymbolId predicate) const {
  auto it = index_.find(predicate);
  if (it == index_.end()) return {};
  return it->second;
}

std::vector<Term> State::atoms() const {
  std::vector<Term> out;
  out.reserve(members_.size());
  for (SymbolId p : predicateOrder_) {
    auto it = index_.find(p);
    if (it == index_.end()) continue;
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

bool State::add(const Term& atom) {
  SymbolId p = predicateOf(atom);
  if (!members_.insert(atom).second) return false;
  auto [it, fresh] = index_.try_emplace(p);
  if (fresh) predicateOrder_.push_back(p);
  it->second.push_back(atom);
  trail_.push_back(Change{true, atom, it->second.size() - 1});
  return true;
}

bool State::remove(const Term& atom) {
  SymbolId p = predicateOf(atom);
  auto member = members_.find(atom);
  if (member == members_.end()) return false;
  members_.erase(member);
  auto& bucket = index_[p];
  auto pos = std::find(bucket.begin(), bucket.end(), atom);
  std::size_t index = static_cast<std::size_t>(pos - bucket.begin());
  Term stored = *pos;
  bucket.erase(pos);
  trail_.push_back(Change{false, std::move(stored), index});
  return true;
}

UndoRecord State::applyEffects(std::span<const Term> deletions, std::span<const Term> additions) {
  for (const auto& a : deletions) predicateOf(a);
  for (const auto& a : additions) predicateOf(a);
  UndoRecord record{trail_.size()};
  for (const auto& a : deletions) remove(a);
  for (const auto& a : additions) add(a);
  return record;
}

void State::undo(UndoRecord record) {
  while (trail_.size() > record.mark) {
    Change change = std::move(trail_.back());
    trail_.pop_back();
    SymbolId p = *change.atom.head();
    auto& bucket = index_[p];
    if (change.added) {
      bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(change.position));
      members_.erase(change.atom);
    } else {
      bucket.insert(bucket.begin() + static_cast<std::ptrdiff_t>(change.position), change.atom);
      members_.insert(change.atom);
    }
  }
}

bool State::sameAtoms(const State& other) const {
  if (members_.size() != other.members_.size()) return false;
  for (const auto& a : members_) {
    if (!other.contains(a)) return false;
  }
  return true;
}

}  // namespace shop2
