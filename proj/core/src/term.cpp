#include "shop2/term.hpp"

#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace shop2 {

namespace {

struct SymbolTable {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string_view, SymbolId> ids;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hashNumber(double d) {
  if (d == 0.0) d = 0.0;  // fold -0.0
  return mix(0x51ed270b, std::hash<double>{}(d));
}

int kindRank(Term::Kind k) {
  switch (k) {
    case Term::Kind::Integer:
    case Term::Kind::Real:
      return 0;
    case Term::Kind::Symbol:
      return 1;
    case Term::Kind::Variable:
      return 2;
    case Term::Kind::List:
      return 3;
  }
  return 4;
}

std::atomic<std::uint32_t> generationCounter{1};

}  // namespace

SymbolId intern(std::string_view name) {
  auto& table = symbols();
  {
    std::shared_lock lock(table.mutex);
    auto it = table.ids.find(name);
    if (it != table.ids.end()) return it->second;
  }
  std::unique_lock lock(table.mutex);
  auto it = table.ids.find(name);
  if (it != table.ids.end()) return it->second;
  table.names.emplace_back(name);
  auto id = static_cast<SymbolId>(table.names.size() - 1);
  table.ids.emplace(table.names.back(), id);
  return id;
}

const std::string& symbolName(SymbolId id) {
  auto& table = symbols();
  std::shared_lock lock(table.mutex);
  return table.names.at(id);
}

struct Term::ListNode {
  std::vector<Term> items;
  std::size_t hash = 0;
  bool ground = true;
};

Term Term::symbol(SymbolId id) {
  Term t(Kind::Symbol);
  t.sym_ = id;
  return t;
}

Term Term::integer(std::int64_t v) {
  Term t(Kind::Integer);
  t.i_ = v;
  return t;
}

Term Term::real(double v) {
  Term t(Kind::Real);
  t.d_ = v;
  return t;
}

Term Term::variable(SymbolId name, std::uint32_t generation) {
  Term t(Kind::Variable);
  t.sym_ = name;
  t.gen_ = generation;
  return t;
}

Term Term::list(std::vector<Term> items) {
  if (items.empty()) return Term();
  auto node = std::make_shared<ListNode>();
  std::size_t h = 0x3c6ef372;
  for (const auto& item : items) {
    h = mix(h, item.hash());
    if (!item.isGround()) node->ground = false;
  }
  node->hash = h;
  node->items = std::move(items);
  Term t(Kind::List);
  t.list_ = std::move(node);
  return t;
}

Term Term::truth() {
  static const SymbolId t = intern("t");
  return symbol(t);
}

bool Term::isTruthy() const {
  static const SymbolId nilId = intern("nil");
  if (kind_ == Kind::List) return size() != 0;
  return !(kind_ == Kind::Symbol && sym_ == nilId);
}

Number Term::asNumber() const {
  return kind_ == Kind::Integer ? Number::ofInteger(i_) : Number::ofReal(d_);
}

std::span<const Term> Term::items() const {
  if (!list_) return {};
  return std::span<const Term>(list_->items);
}

std::size_t Term::size() const { return list_ ? list_->items.size() : 0; }

std::optional<SymbolId> Term::head() const {
  if (kind_ != Kind::List || !list_ || !list_->items.front().isSymbol()) return std::nullopt;
  return list_->items.front().sym_;
}

bool Term::isGround() const {
  if (kind_ == Kind::Variable) return false;
  if (kind_ == Kind::List) return !list_ || list_->ground;
  return true;
}

std::size_t Term::hash() const {
  switch (kind_) {
    case Kind::Symbol:
      return mix(0x1234567, sym_);
    case Kind::Integer:
      return hashNumber(static_cast<double>(i_));
    case Kind::Real:
      return hashNumber(d_);
    case Kind::Variable:
      return mix(mix(0x7654321, sym_), gen_);
    case Kind::List:
      return list_ ? list_->hash : 0x3c6ef372;
  }
  return 0;
}

bool operator==(const Term& a, const Term& b) {
  if (a.isNumber() && b.isNumber()) {
    if (a.kind_ == Term::Kind::Integer && b.kind_ == Term::Kind::Integer) return a.i_ == b.i_;
    return a.asDouble() == b.asDouble();
  }
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Term::Kind::Symbol:
      return a.sym_ == b.sym_;
    case Term::Kind::Variable:
      return a.sym_ == b.sym_ && a.gen_ == b.gen_;
    case Term::Kind::List: {
      if (a.list_ == b.list_) return true;
      if (a.size() != b.size() || a.hash() != b.hash()) return false;
      auto xs = a.items();
      auto ys = b.items();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] == ys[i])) return false;
      }
      return true;
    }
    default:
      return false;
  }
}

bool operator<(const Term& a, const Term& b) {
  int ra = kindRank(a.kind_);
  int rb = kindRank(b.kind_);
  if (ra != rb) return ra < rb;
  switch (a.kind_) {
    case Term::Kind::Integer:
    case Term::Kind::Real:
      return a.asDouble() < b.asDouble();
    case Term::Kind::Symbol:
      return symbolName(a.sym_) < symbolName(b.sym_);
    case Term::Kind::Variable:
      if (a.sym_ != b.sym_) return symbolName(a.sym_) < symbolName(b.sym_);
      return a.gen_ < b.gen_;
    case Term::Kind::List: {
      auto xs = a.items();
      auto ys = b.items();
      std::size_t n = std::min(xs.size(), ys.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (xs[i] < ys[i]) return true;
        if (ys[i] < xs[i]) return false;
      }
      return xs.size() < ys.size();
    }
  }
  return false;
}

Term toTerm(const SExpr& e) {
  switch (e.kind()) {
    case SExpr::Kind::Symbol:
    case SExpr::Kind::FunctionRef:
      return Term::symbol(e.name());
    case SExpr::Kind::Keyword:
      return Term::symbol(":" + e.name());
    case SExpr::Kind::Variable:
      return Term::variable("?" + e.name());
    case SExpr::Kind::Number:
      return Term::number(e.number());
    case SExpr::Kind::List: {
      std::vector<Term> items;
      items.reserve(e.items().size());
      for (const auto& item : e.items()) items.push_back(toTerm(item));
      return Term::list(std::move(items));
    }
  }
  return Term();
}

SExpr toSExpr(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Symbol: {
      const auto& name = symbolName(t.symbolId());
      if (name.size() > 1 && name[0] == ':') return SExpr::keyword(name.substr(1));
      return SExpr::symbol(name);
    }
    case Term::Kind::Variable:
      return SExpr::variable(symbolName(t.symbolId()).substr(1));
    case Term::Kind::Integer:
      return SExpr::integer(t.asInteger());
    case Term::Kind::Real:
      return SExpr::real(t.asDouble());
    case Term::Kind::List: {
      std::vector<SExpr> items;
      items.reserve(t.size());
      for (const auto& item : t.items()) items.push_back(toSExpr(item));
      return SExpr::list(std::move(items));
    }
  }
  return SExpr();
}

std::string toString(const Term& t) { return print(toSExpr(t)); }

Term parseTerm(std::string_view text) { return toTerm(parseSExpr(text)); }

Term renameVariables(const Term& t, std::uint32_t generation) {
  if (t.isGround()) return t;
  if (t.isVariable()) return Term::variable(t.symbolId(), generation);
  std::vector<Term> items;
  items.reserve(t.size());
  for (const auto& item : t.items()) items.push_back(renameVariables(item, generation));
  return Term::list(std::move(items));
}

std::uint32_t freshGeneration() { return generationCounter.fetch_add(1, std::memory_order_relaxed); }

void collectVariables(const Term& t, std::vector<Term>& out) {
  if (t.isGround()) return;
  if (t.isVariable()) {
    for (const auto& v : out) {
      if (v == t) return;
    }
    out.push_back(t);
    return;
  }
  for (const auto& item : t.items()) collectVariables(item, out);
}

const Term* Substitution::lookup(const Term& var) const {
  Key k = keyOf(var);
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
    if (it->first == k) return &it->second;
  }
  return nullptr;
}

void Substitution::bind(const Term& var, Term value) { bindings_.emplace_back(keyOf(var), std::move(value)); }

const Term& Substitution::walk(const Term& t) const {
  const Term* cur = &t;
  while (cur->isVariable()) {
    const Term* next = lookup(*cur);
    if (!next) break;
    cur = next;
  }
  return *cur;
}

Term Substitution::resolve(const Term& t) const {
  if (t.isGround()) return t;
  if (t.isVariable()) {
    const Term& w = walk(t);
    if (w.isVariable()) return w;
    return resolve(w);
  }
  std::vector<Term> items;
  items.reserve(t.size());
  bool changed = false;
  for (const auto& item : t.items()) {
    items.push_back(resolve(item));
    if (!changed && !(items.back().kind() == item.kind() && items.back() == item)) changed = true;
  }
  if (!changed) return t;
  return Term::list(std::move(items));
}

bool Substitution::occurs(const Term& var, const Term& t) const {
  if (t.isGround()) return false;
  const Term& w = walk(t);
  if (w.isVariable()) return w == var;
  if (!w.isList()) return false;
  for (const auto& item : w.items()) {
    if (occurs(var, item)) return true;
  }
  return false;
}

std::vector<std::pair<Term, Term>> Substitution::bindings() const {
  std::vector<std::pair<Term, Term>> out;
  out.reserve(bindings_.size());
  for (const auto& [key, value] : bindings_) {
    Term var = Term::variable(static_cast<SymbolId>(key >> 32), static_cast<std::uint32_t>(key));
    out.emplace_back(var, resolve(value));
  }
  return out;
}

namespace {

bool unifyRec(const Term& x, const Term& y, Substitution& theta) {
  const Term& a = theta.walk(x);
  const Term& b = theta.walk(y);
  if (a.isVariable()) {
    if (b.isVariable() && a == b) return true;
    if (theta.occurs(a, b)) return false;
    theta.bind(a, b);
    return true;
  }
  if (b.isVariable()) {
    if (theta.occurs(b, a)) return false;
    theta.bind(b, a);
    return true;
  }
  if (a.isList() && b.isList()) {
    if (a.size() != b.size()) return false;
    if (a.isGround() && b.isGround()) return a == b;
    auto xs = a.items();
    auto ys = b.items();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!unifyRec(xs[i], ys[i], theta)) return false;
    }
    return true;
  }
  return a == b;
}

}  // namespace

bool unify(const Term& a, const Term& b, Substitution& theta) {
  std::size_t m = theta.mark();
  if (unifyRec(a, b, theta)) return true;
  theta.undoTo(m);
  return false;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution theta;
  if (!unify(a, b, theta)) return std::nullopt;
  return theta;
}

}  // namespace shop2
