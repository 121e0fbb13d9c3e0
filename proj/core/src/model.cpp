#include "shop2/model.hpp"

#include <algorithm>
#include <unordered_set>

#include "shop2/temporal.hpp"

namespace shop2 {

namespace {

struct Names {
  SymbolId defdomain = intern("defdomain");
  SymbolId defproblem = intern("defproblem");
  SymbolId op = intern(":operator");
  SymbolId method = intern(":method");
  SymbolId axiom = intern(":-");
  SymbolId durative = intern(":durative-operator");
  SymbolId nil = intern("nil");
  SymbolId protection = intern(":protection");
  SymbolId maxtime = intern("maxtime");
};

const Names& names() {
  static const Names n;
  return n;
}

bool isNilForm(const Term& t) { return t.isEmptyList() || t.isSymbol(names().nil); }

Term normalizeCondition(const Term& t) { return t.isSymbol(names().nil) ? Term() : t; }

std::string where(const Term& head) { return " in " + toString(head); }

void requireTaskHead(const Term& head, const char* what) {
  if (!head.isList() || head.isEmptyList() || !head[0].isSymbol()) {
    throw LoadError(std::string(what) + " head must be a list starting with a name, got " + toString(head));
  }
  const std::string& name = symbolName(head[0].symbolId());
  if (name.front() == ':' || name.front() == '?') throw LoadError(std::string(what) + " has an invalid name " + name);
}

void checkEffectList(const Term& list, const Term& head, const char* what) {
  if (list.isVariable()) return;
  if (!list.isList()) throw LoadError(std::string(what) + " must be a list" + where(head));
  for (const auto& item : list.items()) {
    if (item.isVariable()) continue;
    if (!item.isList() || item.isEmptyList() || !item[0].isSymbol()) {
      throw LoadError(std::string(what) + " entry " + toString(item) + " is not an atom" + where(head));
    }
    if (item[0].isSymbol(names().protection)) {
      throw LoadError("unsupported feature: protected conditions" + where(head));
    }
    if (symbolName(item[0].symbolId()).front() == ':') {
      throw LoadError(std::string(what) + " entry " + toString(item) + " uses an unsupported form" + where(head));
    }
  }
}

Operator parseOperator(const Term& form) {
  if (form.size() != 5 && form.size() != 6) {
    throw LoadError("operator needs head, precondition, delete list, add list and optional cost: " +
                    toString(form));
  }
  Operator op;
  op.head = form[1];
  requireTaskHead(op.head, "operator");
  if (!isPrimitiveTask(op.head[0].symbolId())) {
    throw LoadError("operator name must start with '!': " + toString(op.head));
  }
  op.precondition = normalizeCondition(form[2]);
  op.deleteList = normalizeCondition(form[3]);
  op.addList = normalizeCondition(form[4]);
  op.cost = form.size() == 6 ? form[5] : Term::integer(1);
  checkEffectList(op.deleteList, op.head, "delete list");
  checkEffectList(op.addList, op.head, "add list");

  std::vector<Term> known;
  collectVariables(op.head, known);
  collectVariables(op.precondition, known);
  std::vector<Term> used;
  collectVariables(op.deleteList, used);
  collectVariables(op.addList, used);
  collectVariables(op.cost, used);
  for (const auto& v : used) {
    if (std::find(known.begin(), known.end(), v) == known.end()) {
      throw LoadError("variable " + toString(v) + " is not bound by the head or precondition" + where(op.head));
    }
  }
  return op;
}

Method parseMethod(const Term& form) {
  if (form.size() < 3) throw LoadError("method needs a head and at least one clause: " + toString(form));
  Method m;
  m.head = form[1];
  requireTaskHead(m.head, "method");
  if (isPrimitiveTask(m.head[0].symbolId())) {
    throw LoadError("method head cannot be a primitive task: " + toString(m.head));
  }
  std::size_t n = form.size();
  std::size_t i = 2;
  while (i < n) {
    MethodClause clause;
    if (form[i].isSymbol() && !form[i].isSymbol(names().nil)) {
      const std::string& name = symbolName(form[i].symbolId());
      if (name.front() == ':') throw LoadError("method has unexpected keyword " + name + where(m.head));
      clause.label = form[i].symbolId();
      ++i;
    }
    if (i + 1 >= n) throw LoadError("method clause needs a precondition and a task list" + where(m.head));
    clause.precondition = normalizeCondition(form[i]);
    const Term& subtasks = form[i + 1];
    if (!isNilForm(subtasks) && !subtasks.isList()) {
      throw LoadError("method subtasks must be a list" + where(m.head));
    }
    try {
      clause.subtasks = isNilForm(subtasks) ? NetworkTemplate::ordered({}) : parseNetwork(subtasks);
    } catch (const NetworkError& e) {
      throw LoadError(std::string(e.what()) + where(m.head));
    }
    m.clauses.push_back(std::move(clause));
    i += 2;
  }
  return m;
}

Axiom parseAxiom(const Term& form) {
  if (form.size() < 3) throw LoadError("axiom needs a head and a tail: " + toString(form));
  Axiom a;
  a.head = form[1];
  if (!a.head.isList() || a.head.isEmptyList() || !a.head[0].isSymbol()) {
    throw LoadError("axiom head must be an atom: " + toString(a.head));
  }
  std::size_t n = form.size();
  std::size_t i = 2;
  while (i < n) {
    AxiomClause clause;
    if (form[i].isSymbol() && !form[i].isSymbol(names().nil)) {
      clause.label = form[i].symbolId();
      ++i;
      if (i >= n) throw LoadError("axiom has a label without a tail" + where(a.head));
    }
    clause.tail = normalizeCondition(form[i]);
    if (!clause.tail.isList()) throw LoadError("axiom tail must be a list" + where(a.head));
    a.clauses.push_back(std::move(clause));
    ++i;
  }
  return a;
}

void mergeDynamics(std::vector<DynamicProperty>& into, const std::vector<DynamicProperty>& from) {
  for (const auto& p : from) {
    auto it = std::find_if(into.begin(), into.end(), [&](const auto& q) { return q.predicate == p.predicate; });
    if (it == into.end()) {
      into.push_back(p);
    } else if (it->keyPositions != p.keyPositions || it->valuePosition != p.valuePosition) {
      throw LoadError("dynamic property " + symbolName(p.predicate) + " declared with different positions");
    }
  }
}

void checkTaskResolves(const Domain& d, const Term& task, const std::string& context) {
  auto h = task.head();
  if (!h) throw LoadError("task " + toString(task) + " has no name" + context);
  if (isPrimitiveTask(*h)) {
    const Operator* op = d.findOperator(*h);
    if (!op) throw LoadError("no operator for primitive task " + toString(task) + context);
    std::size_t arity = task.size() - 1;
    bool ok = arity == op->arity() || (op->temporal && arity + 2 == op->arity());
    if (!ok) {
      throw LoadError("task " + toString(task) + " has " + std::to_string(arity) + " argument(s) but operator " +
                      symbolName(*h) + " takes " + std::to_string(op->arity()) + context);
    }
    return;
  }
  if (d.methodsFor(*h).empty()) throw LoadError("no method for compound task " + toString(task) + context);
}

void checkNetwork(const Domain& d, const NetworkTemplate& n, const std::string& context) {
  for (const auto* leaf : n.leaves()) checkTaskResolves(d, leaf->task, context);
}

}  // namespace

int DynamicProperty::arity() const {
  int a = valuePosition;
  for (int k : keyPositions) a = std::max(a, k);
  return a;
}

bool Operator::internal() const {
  const std::string& n = symbolName(name());
  return n.size() > 1 && n[0] == '!' && n[1] == '!';
}

bool isPrimitiveTask(SymbolId name) {
  const std::string& n = symbolName(name);
  return !n.empty() && n[0] == '!';
}

const Operator* Domain::findOperator(SymbolId name) const {
  auto it = operatorIndex.find(name);
  return it == operatorIndex.end() ? nullptr : &operators[it->second];
}

std::vector<const Method*> Domain::methodsFor(SymbolId task) const {
  std::vector<const Method*> out;
  auto it = methodIndex.find(task);
  if (it == methodIndex.end()) return out;
  for (std::size_t i : it->second) out.push_back(&methods[i]);
  return out;
}

const DynamicProperty* Domain::dynamicFor(SymbolId predicate) const {
  for (const auto& p : dynamics) {
    if (p.predicate == predicate) return &p;
  }
  return nullptr;
}

Domain loadDomain(const SExpr& sform) {
  const auto& N = names();
  Term form = toTerm(sform);
  if (!form.isList() || form.size() != 3 || !form[0].isSymbol(N.defdomain) || !form[1].isSymbol() ||
      !form[2].isList()) {
    throw LoadError("expected (defdomain name (items...))");
  }
  Domain d;
  d.name = symbolName(form[1].symbolId());

  auto addOperator = [&](Operator op) {
    if (d.operatorIndex.count(op.name())) throw LoadError("duplicate operator name " + symbolName(op.name()));
    d.operatorIndex[op.name()] = d.operators.size();
    d.operators.push_back(std::move(op));
  };

  for (const auto& item : form[2].items()) {
    if (!item.isList() || item.isEmptyList() || !item[0].isSymbol()) {
      throw LoadError("unexpected domain item " + toString(item));
    }
    SymbolId kind = item[0].symbolId();
    if (kind == N.op) {
      d.items.push_back({Domain::ItemKind::Operator, d.operators.size()});
      addOperator(parseOperator(item));
    } else if (kind == N.method) {
      Method m = parseMethod(item);
      d.methodIndex[m.task()].push_back(d.methods.size());
      d.items.push_back({Domain::ItemKind::Method, d.methods.size()});
      d.methods.push_back(std::move(m));
    } else if (kind == N.axiom) {
      Axiom a = parseAxiom(item);
      d.items.push_back({Domain::ItemKind::Axiom, d.axiomList.size()});
      d.axiomList.push_back(a);
      d.axioms.add(std::move(a));
    } else if (kind == N.durative) {
      DurativeOperator op = parseDurativeOperator(item);
      mergeDynamics(d.dynamics, op.dynamics);
      d.items.push_back({Domain::ItemKind::Durative, d.durative.size()});
      d.durative.push_back(std::move(op));
    } else {
      throw LoadError("unknown keyword " + symbolName(kind) + " in domain " + d.name);
    }
  }
  // Translation waits for the complete dynamic-property list.
  for (auto& item : d.items) {
    if (item.kind != Domain::ItemKind::Durative) continue;
    addOperator(mtpTranslate(d.durative[item.index], d.dynamics));
  }
  for (const auto& m : d.methods) {
    std::string context = " (method " + toString(m.head) + ")";
    for (const auto& clause : m.clauses) checkNetwork(d, clause.subtasks, context);
  }
  return d;
}

Domain loadDomainText(std::string_view text) {
  auto forms = parseSExprs(text);
  if (forms.size() != 1) throw LoadError("a domain file must contain exactly one defdomain form");
  return loadDomain(forms[0]);
}

Problem loadProblem(const SExpr& sform) {
  Term form = toTerm(sform);
  if (!form.isList() || (form.size() != 5 && form.size() != 4) || !form[0].isSymbol(names().defproblem) ||
      !form[1].isSymbol()) {
    throw LoadError("expected (defproblem name domain (atoms...) tasks)");
  }
  Problem p;
  p.name = symbolName(form[1].symbolId());
  std::size_t i = 2;
  if (form.size() == 5) {
    if (!form[2].isSymbol()) throw LoadError("problem " + p.name + ": domain name must be a symbol");
    p.domainName = symbolName(form[2].symbolId());
    i = 3;
  }
  const Term& atoms = normalizeCondition(form[i]);
  if (!atoms.isList()) throw LoadError("problem " + p.name + ": initial state must be a list of atoms");
  for (const auto& a : atoms.items()) {
    if (!a.isList() || a.isEmptyList() || !a[0].isSymbol()) {
      throw LoadError("problem " + p.name + ": initial entry " + toString(a) + " is not an atom");
    }
    if (!a.isGround()) throw LoadError("problem " + p.name + ": initial atom " + toString(a) + " is not ground");
    p.initialState.push_back(a);
  }
  try {
    p.goals = isNilForm(form[i + 1]) ? NetworkTemplate::ordered({}) : parseNetwork(form[i + 1]);
  } catch (const NetworkError& e) {
    throw LoadError("problem " + p.name + ": " + e.what());
  }
  return p;
}

std::vector<Problem> loadProblems(std::string_view text) {
  std::vector<Problem> out;
  for (const auto& f : parseSExprs(text)) out.push_back(loadProblem(f));
  if (out.empty()) throw LoadError("no defproblem form found");
  return out;
}

void checkGoals(const Domain& domain, const Problem& problem) {
  if (!problem.domainName.empty() && problem.domainName != domain.name) {
    throw LoadError("problem " + problem.name + " is for domain " + problem.domainName + ", not " + domain.name);
  }
  checkNetwork(domain, problem.goals, " (problem " + problem.name + ")");
}

std::vector<Term> initialAtoms(const Domain& domain, const Problem& problem) {
  std::vector<Term> atoms = problem.initialState;
  if (!domain.isTemporal()) return atoms;
  std::unordered_set<Term, TermHash> present(atoms.begin(), atoms.end());
  auto push = [&](Term t) {
    if (present.insert(t).second) atoms.push_back(std::move(t));
  };
  Term zero = Term::integer(0);
  bool hasMaxtime = false;
  for (const auto& a : problem.initialState) {
    if (a.head() == names().maxtime) hasMaxtime = true;
  }
  std::unordered_set<Term, TermHash> instances;
  for (const auto& a : problem.initialState) {
    const DynamicProperty* p = domain.dynamicFor(*a.head());
    if (!p || static_cast<int>(a.size()) - 1 != p->arity()) continue;
    std::vector<Term> keys;
    for (int k : p->keyPositions) keys.push_back(a[static_cast<std::size_t>(k)]);
    push(timelineAtom("read-time", p->predicate, keys, zero));
    push(timelineAtom("write-time", p->predicate, keys, zero));
  }
  if (!hasMaxtime) push(Term::list({Term::symbol(names().maxtime), zero}));
  return atoms;
}

SExpr domainToSExpr(const Domain& d) {
  const auto& N = names();
  std::vector<Term> items;
  for (const auto& item : d.items) {
    switch (item.kind) {
      case Domain::ItemKind::Operator: {
        const Operator& op = d.operators[item.index];
        items.push_back(
            Term::list({Term::symbol(N.op), op.head, op.precondition, op.deleteList, op.addList, op.cost}));
        break;
      }
      case Domain::ItemKind::Method: {
        const Method& m = d.methods[item.index];
        std::vector<Term> parts{Term::symbol(N.method), m.head};
        for (const auto& c : m.clauses) {
          if (c.label) parts.push_back(Term::symbol(*c.label));
          parts.push_back(c.precondition);
          parts.push_back(networkToTerm(c.subtasks));
        }
        items.push_back(Term::list(std::move(parts)));
        break;
      }
      case Domain::ItemKind::Axiom: {
        const Axiom& a = d.axiomList[item.index];
        std::vector<Term> parts{Term::symbol(N.axiom), a.head};
        for (const auto& c : a.clauses) {
          if (c.label) parts.push_back(Term::symbol(*c.label));
          parts.push_back(c.tail);
        }
        items.push_back(Term::list(std::move(parts)));
        break;
      }
      case Domain::ItemKind::Durative:
        items.push_back(durativeToTerm(d.durative[item.index]));
        break;
    }
  }
  return toSExpr(Term::list({Term::symbol(N.defdomain), Term::symbol(d.name), Term::list(std::move(items))}));
}

SExpr problemToSExpr(const Problem& p) {
  std::vector<Term> parts{Term::symbol(names().defproblem), Term::symbol(p.name)};
  if (!p.domainName.empty()) parts.push_back(Term::symbol(p.domainName));
  parts.push_back(Term::list(p.initialState));
  parts.push_back(networkToTerm(p.goals));
  return toSExpr(Term::list(std::move(parts)));
}

std::string printDomain(const Domain& domain) { return prettyPrint(domainToSExpr(domain)); }

}  // namespace shop2
