#include "shop2/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace shop2 {

namespace {

struct Names {
  SymbolId durative = intern(":durative-operator");
  SymbolId dynamic = intern(":dynamic");
  SymbolId statics = intern(":static");
  SymbolId readTime = intern("read-time");
  SymbolId writeTime = intern("write-time");
  SymbolId maxtime = intern("maxtime");
  SymbolId kAnd = intern("and");
  SymbolId kNot = intern("not");
  SymbolId assign = intern("assign");
  SymbolId eval = intern("eval");
  SymbolId max = intern("max");
  SymbolId plus = intern("+");
  SymbolId minus = intern("-");
  SymbolId start = intern("?start");
  SymbolId duration = intern("?duration");
  SymbolId end = intern("?end");
  SymbolId nil = intern("nil");
};

const Names& names() {
  static const Names n;
  return n;
}

Term sym(SymbolId id) { return Term::symbol(id); }
Term var(std::string_view name) { return Term::variable(name); }

Term assignForm(const Term& v, const Term& expr) { return Term::list({sym(names().assign), v, expr}); }

Term evalForm(SymbolId fn, std::vector<Term> args) {
  args.insert(args.begin(), sym(fn));
  return Term::list({sym(names().eval), Term::list(std::move(args))});
}

std::vector<Term> conjuncts(const Term& expr) {
  if (expr.isEmptyList() || expr.isSymbol(names().nil)) return {};
  if (expr.isList() && expr[0].isList()) return {expr.items().begin(), expr.items().end()};
  if (expr.isList() && expr[0].isSymbol(names().kAnd)) {
    std::vector<Term> out;
    for (const auto& c : expr.items().subspan(1)) {
      auto inner = conjuncts(c);
      out.insert(out.end(), inner.begin(), inner.end());
    }
    return out;
  }
  return {expr};
}

struct Effects {
  std::vector<Term> deletions;
  std::vector<Term> additions;
};

Effects splitEffects(const Term& effects, const Term& head) {
  Effects out;
  for (const auto& lit : conjuncts(effects)) {
    if (!lit.isList() || lit.isEmptyList() || !lit[0].isSymbol()) {
      throw LoadError("durative effect " + toString(lit) + " is not a literal in " + toString(head));
    }
    if (lit[0].isSymbol(names().kNot)) {
      if (lit.size() != 2 || !lit[1].isList() || lit[1].isEmptyList()) {
        throw LoadError("malformed negative effect " + toString(lit) + " in " + toString(head));
      }
      out.deletions.push_back(lit[1]);
    } else {
      out.additions.push_back(lit);
    }
  }
  return out;
}

struct Instance {
  SymbolId predicate;
  std::vector<Term> keys;
  int rank;

  Term pattern() const {
    std::vector<Term> items{sym(predicate)};
    items.insert(items.end(), keys.begin(), keys.end());
    return Term::list(std::move(items));
  }
  bool operator==(const Instance& o) const { return predicate == o.predicate && keys == o.keys; }
};

void addInstance(std::vector<Instance>& out, const Term& atom, const DynamicProperty& p, int rank,
                 const Term& head) {
  if (static_cast<int>(atom.size()) - 1 != p.arity()) {
    throw LoadError("atom " + toString(atom) + " does not match the arity of dynamic property " +
                    symbolName(p.predicate) + " in " + toString(head));
  }
  Instance inst{p.predicate, {}, rank};
  for (int k : p.keyPositions) inst.keys.push_back(atom[static_cast<std::size_t>(k)]);
  if (std::find(out.begin(), out.end(), inst) == out.end()) out.push_back(std::move(inst));
}

}  // namespace

Term timelineAtom(std::string_view kind, SymbolId predicate, std::span<const Term> keys, const Term& time) {
  std::vector<Term> items{Term::symbol(kind), Term::symbol(predicate)};
  items.insert(items.end(), keys.begin(), keys.end());
  items.push_back(time);
  return Term::list(std::move(items));
}

DurativeOperator parseDurativeOperator(const Term& form) {
  const auto& N = names();
  if (!form.isList() || !form[0].isSymbol(N.durative) || (form.size() != 6 && form.size() != 7)) {
    throw LoadError(
        "expected (:durative-operator head (:dynamic ...) [(:static ...)] precondition effects duration), got " +
        toString(form));
  }
  DurativeOperator op;
  op.head = form[1];
  if (!op.head.isList() || op.head.isEmptyList() || !op.head[0].isSymbol() ||
      !isPrimitiveTask(op.head[0].symbolId())) {
    throw LoadError("durative operator head must be a primitive task: " + toString(op.head));
  }
  const Term& dyn = form[2];
  if (!dyn.isList() || dyn.isEmptyList() || !dyn[0].isSymbol(N.dynamic)) {
    throw LoadError("durative operator needs a (:dynamic ...) declaration in " + toString(op.head));
  }
  for (const auto& decl : dyn.items().subspan(1)) {
    if (!decl.isList() || decl.size() < 2 || !decl[0].isSymbol()) {
      throw LoadError("malformed dynamic property " + toString(decl) + " in " + toString(op.head));
    }
    DynamicProperty p;
    p.predicate = decl[0].symbolId();
    for (std::size_t i = 1; i < decl.size(); ++i) {
      if (decl[i].kind() != Term::Kind::Integer || decl[i].asInteger() < 1) {
        throw LoadError("dynamic property positions must be positive integers in " + toString(decl));
      }
      int pos = static_cast<int>(decl[i].asInteger());
      if (i + 1 == decl.size()) {
        p.valuePosition = pos;
      } else {
        p.keyPositions.push_back(pos);
      }
    }
    op.dynamics.push_back(std::move(p));
  }
  std::size_t i = 3;
  if (form.size() == 7) {
    const Term& st = form[3];
    if (!st.isList() || st.isEmptyList() || !st[0].isSymbol(N.statics)) {
      throw LoadError("expected (:static ...) in " + toString(op.head));
    }
    for (const auto& s : st.items().subspan(1)) {
      if (!s.isSymbol()) throw LoadError("static declarations list predicate names in " + toString(op.head));
      op.statics.push_back(s.symbolId());
    }
    i = 4;
  }
  op.precondition = form[i].isSymbol(N.nil) ? Term() : form[i];
  op.effects = form[i + 1].isSymbol(N.nil) ? Term() : form[i + 1];
  op.duration = form[i + 2];
  for (const auto& p : op.dynamics) {
    if (std::find(op.statics.begin(), op.statics.end(), p.predicate) != op.statics.end()) {
      throw LoadError("property " + symbolName(p.predicate) + " is declared both dynamic and static in " +
                      toString(op.head));
    }
  }
  splitEffects(op.effects, op.head);
  return op;
}

Term durativeToTerm(const DurativeOperator& op) {
  const auto& N = names();
  std::vector<Term> dyn{sym(N.dynamic)};
  for (const auto& p : op.dynamics) {
    std::vector<Term> d{sym(p.predicate)};
    for (int k : p.keyPositions) d.push_back(Term::integer(k));
    d.push_back(Term::integer(p.valuePosition));
    dyn.push_back(Term::list(std::move(d)));
  }
  std::vector<Term> items{sym(N.durative), op.head, Term::list(std::move(dyn))};
  if (!op.statics.empty()) {
    std::vector<Term> st{sym(N.statics)};
    for (SymbolId s : op.statics) st.push_back(sym(s));
    items.push_back(Term::list(std::move(st)));
  }
  items.push_back(op.precondition);
  items.push_back(op.effects);
  items.push_back(op.duration);
  return Term::list(std::move(items));
}

Operator mtpTranslate(const DurativeOperator& op, std::span<const DynamicProperty> properties,
                      const MtpOptions& options) {
  const auto& N = names();
  auto findProperty = [&](SymbolId pred) -> std::pair<const DynamicProperty*, int> {
    for (std::size_t i = 0; i < op.dynamics.size(); ++i) {
      if (op.dynamics[i].predicate == pred) return {&op.dynamics[i], static_cast<int>(i)};
    }
    for (std::size_t i = 0; i < properties.size(); ++i) {
      if (properties[i].predicate == pred) {
        return {&properties[i], static_cast<int>(op.dynamics.size() + i)};
      }
    }
    return {nullptr, 0};
  };

  std::vector<Term> original = conjuncts(op.precondition);
  Effects effects = splitEffects(op.effects, op.head);

  std::vector<Term> used;
  collectVariables(op.head, used);
  collectVariables(op.precondition, used);
  collectVariables(op.effects, used);
  collectVariables(op.duration, used);
  auto reserve = [&](std::string name) {
    Term v = var(name);
    if (std::find(used.begin(), used.end(), v) != used.end()) {
      throw LoadError("variable " + name + " is reserved by the timeline translation in " + toString(op.head));
    }
    used.push_back(v);
    return v;
  };

  std::vector<Instance> reads;
  for (const auto& c : original) {
    if (!c.isList() || c.isEmptyList() || !c[0].isSymbol()) continue;
    auto [p, rank] = findProperty(c[0].symbolId());
    if (p) addInstance(reads, c, *p, rank, op.head);
  }
  std::vector<Instance> writes;
  for (const auto* list : {&effects.deletions, &effects.additions}) {
    for (const auto& a : *list) {
      SymbolId pred = *a.head();
      if (std::find(op.statics.begin(), op.statics.end(), pred) != op.statics.end()) {
        throw LoadError("static property " + symbolName(pred) + " is written by " + toString(op.head));
      }
      auto [p, rank] = findProperty(pred);
      if (p) addInstance(writes, a, *p, rank, op.head);
    }
  }
  auto byRank = [](const Instance& a, const Instance& b) { return a.rank < b.rank; };
  std::stable_sort(reads.begin(), reads.end(), byRank);
  std::stable_sort(writes.begin(), writes.end(), byRank);
  auto contains = [](const std::vector<Instance>& v, const Instance& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };

  Term startVar = reserve("?start");
  Term durationVar = reserve("?duration");
  Term endVar = reserve("?end");

  Operator out;
  std::vector<Term> head(op.head.items().begin(), op.head.items().end());
  head.push_back(startVar);
  head.push_back(durationVar);
  out.head = Term::list(std::move(head));

  std::vector<Term> pre = original;
  pre.push_back(assignForm(durationVar, op.duration));

  int counter = 0;
  auto nextTime = [&] { return reserve("?t" + std::to_string(++counter)); };
  std::vector<Term> startTerms;
  std::vector<Term> writeTimeVar(writes.size());
  std::vector<Term> readTimeVar(writes.size());
  for (const auto& r : reads) {
    Term t = nextTime();
    pre.push_back(timelineAtom("write-time", r.predicate, r.keys, t));
    startTerms.push_back(t);
    auto it = std::find(writes.begin(), writes.end(), r);
    if (it != writes.end()) writeTimeVar[static_cast<std::size_t>(it - writes.begin())] = t;
  }
  for (std::size_t i = 0; i < writes.size(); ++i) {
    Term t = nextTime();
    pre.push_back(timelineAtom("read-time", writes[i].predicate, writes[i].keys, t));
    startTerms.push_back(t);
    readTimeVar[i] = t;
  }
  for (std::size_t i = 0; i < writes.size(); ++i) {
    if (contains(reads, writes[i])) continue;
    Term t = nextTime();
    pre.push_back(timelineAtom("write-time", writes[i].predicate, writes[i].keys, t));
    writeTimeVar[i] = t;
  }
  if (startTerms.empty()) {
    pre.push_back(assignForm(startVar, Term::integer(0)));
  } else {
    pre.push_back(assignForm(startVar, evalForm(N.max, startTerms)));
  }
  pre.push_back(assignForm(endVar, evalForm(N.plus, {startVar, durationVar})));

  std::vector<Term> dels = effects.deletions;
  std::vector<Term> adds = effects.additions;
  for (std::size_t i = 0; i < writes.size(); ++i) {
    dels.push_back(timelineAtom("write-time", writes[i].predicate, writes[i].keys, writeTimeVar[i]));
    dels.push_back(timelineAtom("read-time", writes[i].predicate, writes[i].keys, readTimeVar[i]));
    adds.push_back(timelineAtom("write-time", writes[i].predicate, writes[i].keys, endVar));
    adds.push_back(timelineAtom("read-time", writes[i].predicate, writes[i].keys, endVar));
  }
  int fresh = 0;
  for (const auto& r : reads) {
    if (contains(writes, r)) continue;
    Term t = nextTime();
    ++fresh;
    Term nv = reserve(fresh == 1 ? "?new-value" : "?new-value" + std::to_string(fresh));
    pre.push_back(timelineAtom("read-time", r.predicate, r.keys, t));
    pre.push_back(assignForm(nv, evalForm(N.max, {t, endVar})));
    dels.push_back(timelineAtom("read-time", r.predicate, r.keys, t));
    adds.push_back(timelineAtom("read-time", r.predicate, r.keys, nv));
  }

  if (options.trackMakespan) {
    Term maxVar = reserve("?maxtime");
    Term newMax = reserve("?new-maxtime");
    pre.push_back(Term::list({sym(N.maxtime), maxVar}));
    pre.push_back(assignForm(newMax, evalForm(N.max, {maxVar, endVar})));
    dels.push_back(Term::list({sym(N.maxtime), maxVar}));
    adds.push_back(Term::list({sym(N.maxtime), newMax}));
    out.cost = Term::list({sym(N.minus), newMax, maxVar});
  } else {
    out.cost = Term::integer(1);
  }

  out.precondition = Term::list(std::move(pre));
  out.deleteList = Term::list(std::move(dels));
  out.addList = Term::list(std::move(adds));

  TemporalSignature sig;
  for (const auto& r : reads) sig.reads.push_back(r.pattern());
  for (const auto& w : writes) sig.writes.push_back(w.pattern());
  out.temporal = std::move(sig);

  std::vector<Term> unbound;
  collectVariables(op.duration, unbound);
  std::vector<Term> known;
  collectVariables(op.head, known);
  collectVariables(op.precondition, known);
  for (const auto& v : unbound) {
    if (std::find(known.begin(), known.end(), v) == known.end()) {
      throw LoadError("duration formula uses unbound variable " + toString(v) + " in " + toString(op.head));
    }
  }
  std::vector<Term> effectVars;
  collectVariables(op.effects, effectVars);
  for (const auto& v : effectVars) {
    if (std::find(known.begin(), known.end(), v) == known.end() && v != durationVar && v != startVar &&
        v != endVar) {
      throw LoadError("effect variable " + toString(v) + " is not bound in " + toString(op.head));
    }
  }
  return out;
}

TemporalVerdict checkTemporalPlan(const Domain& domain, const Problem& problem, const Plan& plan,
                                  const FunctionTable* functions) {
  TemporalVerdict verdict;
  ValidationResult replay = validatePlan(domain, problem, plan, functions);
  if (!replay.ok) {
    verdict.ok = false;
    verdict.first = replay.failedIndex;
    verdict.message = "plan does not replay: " + replay.message;
    return verdict;
  }

  struct Timeline {
    double write = 0.0;
    double read = 0.0;
  };
  std::map<Term, Timeline> timelines;
  struct Span {
    std::size_t index;
    double start;
    double end;
    std::vector<Term> reads;
    std::vector<Term> writes;
  };
  std::vector<Span> spans;

  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const Action& a = plan.actions[i];
    const Operator* op = domain.findOperator(a.name());
    if (!op || !op->temporal) continue;
    auto args = a.arguments();
    if (args.size() < 2 || !args[args.size() - 2].isNumber() || !args.back().isNumber()) {
      verdict.ok = false;
      verdict.first = i;
      verdict.message = "action " + toString(a.task) + " lacks numeric start and duration arguments";
      return verdict;
    }
    double start = args[args.size() - 2].asDouble();
    double duration = args.back().asDouble();
    const Substitution& theta = replay.bindings[i];
    Span span{i, start, start + duration, {}, {}};
    for (const auto& r : op->temporal->reads) span.reads.push_back(theta.resolve(r));
    for (const auto& w : op->temporal->writes) span.writes.push_back(theta.resolve(w));

    double expected = 0.0;
    for (const auto& r : span.reads) expected = std::max(expected, timelines[r].write);
    for (const auto& w : span.writes) expected = std::max(expected, timelines[w].read);
    if (start < 0.0 || duration < 0.0) {
      verdict.ok = false;
      verdict.first = i;
      verdict.message = "action " + toString(a.task) + " has a negative start or duration";
      return verdict;
    }
    if (!costsEqual(start, expected)) {
      verdict.ok = false;
      verdict.first = i;
      verdict.message = "action " + toString(a.task) + " starts at " + std::to_string(start) +
                        " but its timelines allow " + std::to_string(expected);
      return verdict;
    }
    for (const auto& w : span.writes) {
      auto& tl = timelines[w];
      tl.write = span.end;
      tl.read = std::max(tl.read, span.end);
    }
    for (const auto& r : span.reads) {
      auto& tl = timelines[r];
      tl.read = std::max(tl.read, span.end);
    }
    spans.push_back(std::move(span));
  }

  auto has = [](const std::vector<Term>& v, const Term& t) { return std::find(v.begin(), v.end(), t) != v.end(); };
  for (std::size_t x = 0; x < spans.size(); ++x) {
    for (std::size_t y = x + 1; y < spans.size(); ++y) {
      const Span& a = spans[x];
      const Span& b = spans[y];
      if (!(a.start < b.end && b.start < a.end)) continue;
      auto conflict = [&](const Span& w, const Span& o) -> std::optional<Term> {
        for (const auto& p : w.writes) {
          if (has(o.reads, p) || has(o.writes, p)) return p;
        }
        return std::nullopt;
      };
      auto p = conflict(a, b);
      if (!p) p = conflict(b, a);
      if (p) {
        verdict.ok = false;
        verdict.first = a.index;
        verdict.second = b.index;
        verdict.property = toString(*p);
        verdict.message = "actions " + toString(plan.actions[a.index].task) + " and " +
                          toString(plan.actions[b.index].task) + " overlap on " + verdict.property;
        return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace shop2
