#include "shop2/pddl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "shop2/sexpr.hpp"

namespace shop2 {

namespace {

struct Names {
  SymbolId define = intern("define");
  SymbolId domain = intern("domain");
  SymbolId problem = intern("problem");
  SymbolId requirements = intern(":requirements");
  SymbolId types = intern(":types");
  SymbolId constants = intern(":constants");
  SymbolId predicates = intern(":predicates");
  SymbolId functions = intern(":functions");
  SymbolId action = intern(":action");
  SymbolId durativeAction = intern(":durative-action");
  SymbolId derived = intern(":derived");
  SymbolId parameters = intern(":parameters");
  SymbolId precondition = intern(":precondition");
  SymbolId effect = intern(":effect");
  SymbolId domainRef = intern(":domain");
  SymbolId objects = intern(":objects");
  SymbolId init = intern(":init");
  SymbolId goal = intern(":goal");
  SymbolId metric = intern(":metric");
  SymbolId dash = intern("-");
  SymbolId either = intern("either");
  SymbolId object = intern("object");
  SymbolId andS = intern("and");
  SymbolId orS = intern("or");
  SymbolId notS = intern("not");
  SymbolId imply = intern("imply");
  SymbolId forall = intern("forall");
  SymbolId exists = intern("exists");
  SymbolId when = intern("when");
  SymbolId eq = intern("=");
  SymbolId lt = intern("<");
  SymbolId le = intern("<=");
  SymbolId gt = intern(">");
  SymbolId ge = intern(">=");
  SymbolId plus = intern("+");
  SymbolId minus = intern("-");
  SymbolId times = intern("*");
  SymbolId divide = intern("/");
  SymbolId assign = intern("assign");
  SymbolId increase = intern("increase");
  SymbolId decrease = intern("decrease");
  SymbolId scaleUp = intern("scale-up");
  SymbolId scaleDown = intern("scale-down");
  SymbolId eval = intern("eval");
  SymbolId equal = intern("equal");
  SymbolId defdomain = intern("defdomain");
  SymbolId opKw = intern(":operator");
  SymbolId methodKw = intern(":method");
};

const Names& N() {
  static const Names n;
  return n;
}

const std::set<std::string>& supportedRequirements() {
  static const std::set<std::string> s{":strips",
                                       ":typing",
                                       ":equality",
                                       ":negative-preconditions",
                                       ":disjunctive-preconditions",
                                       ":fluents",
                                       ":numeric-fluents",
                                       ":action-costs"};
  return s;
}

std::string unsupportedFeature(const std::string& requirement) {
  if (requirement == ":conditional-effects") return "conditional effects unsupported";
  if (requirement == ":durative-actions" || requirement == ":duration-inequalities" ||
      requirement == ":continuous-effects" || requirement == ":timed-initial-literals") {
    return "durative actions unsupported";
  }
  if (requirement == ":quantified-preconditions" || requirement == ":universal-preconditions" ||
      requirement == ":existential-preconditions") {
    return "quantified preconditions unsupported";
  }
  if (requirement == ":derived-predicates") return "derived predicates unsupported";
  return "unsupported requirement " + requirement;
}

bool isComparison(SymbolId s) {
  const auto& n = N();
  return s == n.lt || s == n.le || s == n.gt || s == n.ge || s == n.eq;
}

bool isArithmetic(SymbolId s) {
  const auto& n = N();
  return s == n.plus || s == n.minus || s == n.times || s == n.divide;
}

/// Thrown for constructs outside the subset; caught per action in lenient mode.
class Unsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<PddlParameter> typedList(std::span<const Term> items, bool variables) {
  const auto& n = N();
  std::vector<PddlParameter> out;
  std::size_t pending = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Term& t = items[i];
    if (t.isSymbol(n.dash)) {
      if (i + 1 >= items.size()) throw PddlError("typed list ends with '-'");
      const Term& type = items[++i];
      if (type.isList()) {
        if (type.size() > 0 && type[0].isSymbol(n.either)) throw Unsupported("either types unsupported");
        throw PddlError("malformed type " + toString(type));
      }
      if (!type.isSymbol()) throw PddlError("malformed type " + toString(type));
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = type.symbolId();
      pending = 0;
      continue;
    }
    if (variables ? !t.isVariable() : !t.isSymbol()) {
      throw PddlError(std::string("expected ") + (variables ? "a variable" : "a name") + ", got " + toString(t));
    }
    out.push_back(PddlParameter{t, std::nullopt});
    ++pending;
  }
  return out;
}

class ActionParser {
 public:
  ActionParser(const PddlDomain& d, const PddlAction& a) : domain_(d) {
    for (const auto& p : a.parameters) params_.insert(p.variable);
  }

  void checkGoal(const Term& g) const {
    const auto& n = N();
    if (g.isEmptyList()) return;
    if (!g.isList() || !g[0].isSymbol()) throw PddlError("malformed condition " + toString(g));
    SymbolId h = g[0].symbolId();
    auto args = g.items().subspan(1);
    if (h == n.andS || h == n.orS) {
      for (const auto& c : args) checkGoal(c);
    } else if (h == n.notS) {
      if (args.size() != 1) throw PddlError("not takes one argument");
      checkGoal(args[0]);
    } else if (h == n.imply) {
      if (args.size() != 2) throw PddlError("imply takes two arguments");
      checkGoal(args[0]);
      checkGoal(args[1]);
    } else if (h == n.forall || h == n.exists) {
      throw Unsupported("quantified preconditions unsupported");
    } else if (isComparison(h)) {
      if (args.size() != 2) throw PddlError(symbolName(h) + " takes two arguments");
      if (h == n.eq && !isNumeric(args[0]) && !isNumeric(args[1])) {
        checkObject(args[0]);
        checkObject(args[1]);
      } else {
        checkNumeric(args[0]);
        checkNumeric(args[1]);
      }
    } else {
      if (domain_.isFluent(h)) throw PddlError("fluent " + symbolName(h) + " used as a condition");
      checkAtomArgs(g);
    }
  }

  bool isNumeric(const Term& e) const {
    if (e.isNumber()) return true;
    if (!e.isList() || e.isEmptyList() || !e[0].isSymbol()) return false;
    return domain_.isFluent(e[0].symbolId()) || isArithmetic(e[0].symbolId());
  }

  void checkNumeric(const Term& e) const {
    if (e.isNumber()) return;
    if (e.isVariable()) {
      checkObject(e);
      return;
    }
    if (!e.isList() || e.isEmptyList() || !e[0].isSymbol()) throw PddlError("malformed expression " + toString(e));
    SymbolId h = e[0].symbolId();
    if (domain_.isFluent(h)) {
      checkAtomArgs(e);
      return;
    }
    if (!isArithmetic(h)) throw PddlError("unknown function " + symbolName(h));
    if (e.size() < 2 || (e.size() > 3) || (e.size() == 2 && h != N().minus)) {
      throw PddlError("bad arity in " + toString(e));
    }
    for (const auto& a : e.items().subspan(1)) checkNumeric(a);
  }

  void checkObject(const Term& t) const {
    if (t.isVariable() && !params_.count(t)) throw PddlError("undeclared variable " + toString(t));
    if (t.isList()) throw PddlError("expected an object, got " + toString(t));
  }

  void checkAtomArgs(const Term& atom) const {
    for (const auto& a : atom.items().subspan(1)) checkObject(a);
  }

  void effect(const Term& e, PddlAction& a) const {
    const auto& n = N();
    if (e.isEmptyList()) return;
    if (!e.isList() || !e[0].isSymbol()) throw PddlError("malformed effect " + toString(e));
    SymbolId h = e[0].symbolId();
    auto args = e.items().subspan(1);
    if (h == n.andS) {
      for (const auto& c : args) effect(c, a);
    } else if (h == n.when) {
      throw Unsupported("conditional effects unsupported");
    } else if (h == n.forall) {
      throw Unsupported("universally quantified effects unsupported");
    } else if (h == n.notS) {
      if (args.size() != 1 || !args[0].isList() || args[0].isEmptyList()) throw PddlError("malformed delete effect");
      literal(args[0]);
      a.deletions.push_back(args[0]);
    } else if (h == n.assign || h == n.increase || h == n.decrease || h == n.scaleUp || h == n.scaleDown) {
      if (args.size() != 2) throw PddlError(symbolName(h) + " takes two arguments");
      const Term& f = args[0];
      if (!f.isList() || f.isEmptyList() || !f[0].isSymbol() || !domain_.isFluent(f[0].symbolId())) {
        throw PddlError("numeric effect target is not a fluent: " + toString(f));
      }
      checkAtomArgs(f);
      checkNumeric(args[1]);
      for (const auto& other : a.numeric) {
        if (other.fluent == f) throw Unsupported("multiple numeric effects on " + toString(f));
      }
      NumericEffect::Op op = h == n.assign     ? NumericEffect::Op::Assign
                             : h == n.increase ? NumericEffect::Op::Increase
                             : h == n.decrease ? NumericEffect::Op::Decrease
                             : h == n.scaleUp  ? NumericEffect::Op::ScaleUp
                                               : NumericEffect::Op::ScaleDown;
      a.numeric.push_back(NumericEffect{op, f, args[1]});
    } else {
      literal(e);
      a.additions.push_back(e);
    }
  }

 private:
  void literal(const Term& atom) const {
    if (!atom[0].isSymbol()) throw PddlError("malformed literal " + toString(atom));
    if (domain_.isFluent(atom[0].symbolId())) throw PddlError("fluent used as a literal: " + toString(atom));
    checkAtomArgs(atom);
  }

  const PddlDomain& domain_;
  std::unordered_set<Term, TermHash> params_;
};

Term parseForm(std::string_view text, const char* what) {
  std::vector<SExpr> forms;
  try {
    forms = parseSExprs(text);
  } catch (const ParseError& e) {
    throw PddlError(std::string("syntax error: ") + e.what());
  }
  if (forms.size() != 1) throw PddlError(std::string("expected exactly one ") + what + " definition");
  Term t = toTerm(forms[0]);
  if (!t.isList() || t.size() < 2 || !t[0].isSymbol(N().define)) {
    throw PddlError(std::string("expected (define (") + what + " name) ...)");
  }
  return t;
}

std::string headerName(const Term& t, SymbolId kind) {
  const Term& h = t[1];
  if (!h.isList() || h.size() != 2 || !h[0].isSymbol(kind) || !h[1].isSymbol()) {
    throw PddlError("expected (" + symbolName(kind) + " name)");
  }
  return symbolName(h[1].symbolId());
}

PddlAction parseAction(const PddlDomain& d, const Term& form) {
  const auto& n = N();
  if (form.size() < 2 || !form[1].isSymbol()) throw PddlError("action without a name");
  PddlAction a;
  a.name = form[1].symbolId();
  a.precondition = Term::nil();
  std::optional<Term> effect;
  std::size_t i = 2;
  while (i < form.size()) {
    if (!form[i].isSymbol() || i + 1 >= form.size()) {
      throw PddlError("malformed action " + symbolName(a.name));
    }
    SymbolId key = form[i].symbolId();
    const Term& value = form[i + 1];
    if (key == n.parameters) {
      if (!value.isList()) throw PddlError("parameters must be a list");
      a.parameters = typedList(value.items(), true);
    } else if (key == n.precondition) {
      a.precondition = value;
    } else if (key == n.effect) {
      effect = value;
    } else {
      throw PddlError("unknown action field " + symbolName(key));
    }
    i += 2;
  }
  ActionParser p(d, a);
  p.checkGoal(a.precondition);
  if (effect) p.effect(*effect, a);
  return a;
}

void checkRequirement(const std::string& r, PddlDomain& d, const PddlOptions& options) {
  if (supportedRequirements().count(r)) return;
  std::string feature = unsupportedFeature(r);
  if (options.strict) throw PddlError(feature);
  d.skipped.push_back(SkippedConstruct{"(requirements)", feature});
}

Term numberTerm(double v) {
  if (v == std::floor(v) && std::fabs(v) < 9e15) return Term::integer(static_cast<std::int64_t>(v));
  return Term::real(v);
}

}  // namespace

const PddlAction* PddlDomain::findAction(SymbolId name) const {
  for (const auto& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

bool PddlDomain::isFluent(SymbolId name) const {
  return std::any_of(functions.begin(), functions.end(), [&](const Term& f) { return *f.head() == name; });
}

std::vector<SymbolId> PddlDomain::typeChain(SymbolId type) const {
  std::vector<SymbolId> out{type};
  for (std::size_t guard = 0; guard <= types.size(); ++guard) {
    auto it = std::find_if(types.begin(), types.end(), [&](const auto& t) { return t.first == out.back(); });
    if (it == types.end() || !it->second || std::find(out.begin(), out.end(), *it->second) != out.end()) break;
    out.push_back(*it->second);
  }
  return out;
}

PddlDomain parsePddl(std::string_view text, const PddlOptions& options) {
  const auto& n = N();
  Term t = parseForm(text, "domain");
  PddlDomain d;
  d.name = headerName(t, n.domain);
  std::vector<Term> actionForms;
  for (const auto& section : t.items().subspan(2)) {
    if (!section.isList() || section.isEmptyList() || !section[0].isSymbol()) {
      throw PddlError("malformed domain section " + toString(section));
    }
    SymbolId key = section[0].symbolId();
    auto body = section.items().subspan(1);
    if (key == n.requirements) {
      for (const auto& r : body) {
        if (!r.isSymbol()) throw PddlError("malformed requirement " + toString(r));
        d.requirements.push_back(symbolName(r.symbolId()));
        checkRequirement(d.requirements.back(), d, options);
      }
    } else if (key == n.types) {
      for (const auto& p : typedList(body, false)) d.types.emplace_back(p.variable.symbolId(), p.type);
    } else if (key == n.constants) {
      d.constants = typedList(body, false);
    } else if (key == n.predicates) {
      for (const auto& p : body) {
        if (!p.isList() || p.isEmptyList() || !p[0].isSymbol()) throw PddlError("malformed predicate " + toString(p));
        d.predicates.push_back(p);
      }
    } else if (key == n.functions) {
      for (const auto& f : body) {
        if (f.isSymbol(n.dash) || f.isSymbol()) continue;  // `- number`
        if (!f.isList() || f.isEmptyList() || !f[0].isSymbol()) throw PddlError("malformed function " + toString(f));
        d.functions.push_back(f);
      }
    } else if (key == n.action) {
      actionForms.push_back(section);
    } else if (key == n.durativeAction || key == n.derived) {
      std::string feature = key == n.derived ? "derived predicates unsupported" : "durative actions unsupported";
      std::string name = section.size() > 1 ? toString(section[1]) : "?";
      if (options.strict) throw PddlError(feature + " (" + name + ")");
      d.skipped.push_back(SkippedConstruct{name, feature});
    } else {
      throw PddlError("unknown domain section " + symbolName(key));
    }
  }
  for (const auto& form : actionForms) {
    try {
      d.actions.push_back(parseAction(d, form));
    } catch (const Unsupported& e) {
      std::string name = form.size() > 1 ? toString(form[1]) : "?";
      if (options.strict) throw PddlError(std::string(e.what()) + " (" + name + ")");
      d.skipped.push_back(SkippedConstruct{name, e.what()});
    }
  }
  return d;
}

PddlProblem parsePddlProblem(std::string_view text) {
  const auto& n = N();
  Term t = parseForm(text, "problem");
  PddlProblem p;
  p.name = headerName(t, n.problem);
  p.goal = Term::nil();
  for (const auto& section : t.items().subspan(2)) {
    if (!section.isList() || section.isEmptyList() || !section[0].isSymbol()) {
      throw PddlError("malformed problem section " + toString(section));
    }
    SymbolId key = section[0].symbolId();
    auto body = section.items().subspan(1);
    if (key == n.domainRef) {
      if (body.size() != 1 || !body[0].isSymbol()) throw PddlError("malformed :domain");
      p.domain = symbolName(body[0].symbolId());
    } else if (key == n.objects) {
      p.objects = typedList(body, false);
    } else if (key == n.init) {
      for (const auto& a : body) {
        if (!a.isList() || a.isEmptyList() || !a[0].isSymbol()) throw PddlError("malformed init atom " + toString(a));
        if (a[0].isSymbol(n.eq)) {
          if (a.size() != 3 || !a[1].isList() || !a[2].isNumber()) {
            throw PddlError("malformed fluent value " + toString(a));
          }
          std::vector<Term> items(a[1].items().begin(), a[1].items().end());
          items.push_back(a[2]);
          p.init.push_back(Term::list(std::move(items)));
        } else {
          p.init.push_back(a);
        }
        if (!p.init.back().isGround()) throw PddlError("init atom is not ground: " + toString(a));
      }
    } else if (key == n.goal) {
      if (body.size() != 1) throw PddlError("malformed :goal");
      p.goal = body[0];
    } else if (key == n.metric || key == n.requirements) {
      continue;
    } else {
      throw PddlError("unknown problem section " + symbolName(key));
    }
  }
  return p;
}

std::vector<Term> pddlInitialAtoms(const PddlDomain& domain, const PddlProblem& problem) {
  std::vector<Term> out;
  std::unordered_set<Term, TermHash> seen;
  auto push = [&](Term a) {
    if (seen.insert(a).second) out.push_back(std::move(a));
  };
  auto typed = [&](const std::vector<PddlParameter>& objects) {
    for (const auto& o : objects) {
      if (!o.type) continue;
      for (SymbolId ty : domain.typeChain(*o.type)) {
        if (ty == N().object) continue;
        push(Term::list({Term::symbol(ty), o.variable}));
      }
    }
  };
  typed(domain.constants);
  typed(problem.objects);
  for (const auto& a : problem.init) push(a);
  return out;
}

std::string TranslationReport::text() const {
  std::string out = "translated operators: " + std::to_string(translatedOperators) + "\n";
  out += "skipped constructs: " + std::to_string(skipped.size()) + "\n";
  for (const auto& s : skipped) out += "  " + s.action + ": " + s.feature + "\n";
  out += "stub methods: " + std::to_string(stubMethods.size()) + "\n";
  for (const auto& m : stubMethods) out += "  " + m + "\n";
  for (const auto& note : notes) out += "note: " + note + "\n";
  return out;
}

namespace {

class OperatorBuilder {
 public:
  explicit OperatorBuilder(const PddlDomain& d) : domain_(d) {}

  Term build(const PddlAction& a) {
    const auto& n = N();
    fluentVars_.clear();
    lookups_.clear();
    std::vector<Term> head{Term::symbol("!" + symbolName(a.name))};
    std::vector<Term> conjuncts;
    for (const auto& p : a.parameters) {
      head.push_back(p.variable);
      if (p.type && *p.type != n.object) conjuncts.push_back(Term::list({Term::symbol(*p.type), p.variable}));
    }

    std::vector<Term> atoms;
    std::vector<Term> rest;
    std::vector<Term> top;
    flattenAnd(a.precondition, top);
    for (const auto& c : top) {
      if (isPlainAtom(c)) {
        atoms.push_back(c);
      } else {
        rest.push_back(goal(c));
      }
    }
    std::vector<Term> effectsPre;
    std::vector<Term> deletions = a.deletions;
    std::vector<Term> additions = a.additions;
    int k = 0;
    for (const auto& e : a.numeric) {
      Term current = fluentVar(e.fluent);
      Term rhs = expression(e.expression);
      Term value;
      switch (e.op) {
        case NumericEffect::Op::Assign:
          value = rhs;
          break;
        case NumericEffect::Op::Increase:
          value = Term::list({Term::symbol(n.plus), current, rhs});
          break;
        case NumericEffect::Op::Decrease:
          value = Term::list({Term::symbol(n.minus), current, rhs});
          break;
        case NumericEffect::Op::ScaleUp:
          value = Term::list({Term::symbol(n.times), current, rhs});
          break;
        case NumericEffect::Op::ScaleDown:
          value = Term::list({Term::symbol(n.divide), current, rhs});
          break;
      }
      Term fresh = Term::variable("?new-value-" + std::to_string(++k));
      effectsPre.push_back(Term::list({Term::symbol(n.assign), fresh, Term::list({Term::symbol(n.eval), value})}));
      deletions.push_back(withValue(e.fluent, current));
      additions.push_back(withValue(e.fluent, fresh));
    }

    conjuncts.insert(conjuncts.end(), atoms.begin(), atoms.end());
    conjuncts.insert(conjuncts.end(), lookups_.begin(), lookups_.end());
    conjuncts.insert(conjuncts.end(), rest.begin(), rest.end());
    conjuncts.insert(conjuncts.end(), effectsPre.begin(), effectsPre.end());
    Term pre = Term::nil();
    if (!conjuncts.empty()) {
      conjuncts.insert(conjuncts.begin(), Term::symbol(n.andS));
      pre = Term::list(std::move(conjuncts));
    }
    return Term::list({Term::symbol(n.opKw), Term::list(std::move(head)), pre, Term::list(std::move(deletions)),
                       Term::list(std::move(additions))});
  }

 private:
  static void flattenAnd(const Term& g, std::vector<Term>& out) {
    if (g.isEmptyList()) return;
    if (g[0].isSymbol(N().andS)) {
      for (const auto& c : g.items().subspan(1)) flattenAnd(c, out);
      return;
    }
    out.push_back(g);
  }

  bool isPlainAtom(const Term& g) const {
    SymbolId h = g[0].symbolId();
    const auto& n = N();
    return h != n.orS && h != n.notS && h != n.imply && !isComparison(h);
  }

  Term goal(const Term& g) {
    const auto& n = N();
    if (g.isEmptyList()) return g;
    SymbolId h = g[0].symbolId();
    if (h == n.andS || h == n.orS || h == n.notS || h == n.imply) {
      std::vector<Term> items{g[0]};
      for (const auto& c : g.items().subspan(1)) items.push_back(goal(c));
      return Term::list(std::move(items));
    }
    if (isComparison(h)) {
      ActionParser probe(domain_, PddlAction{});
      bool numeric = h != n.eq || probe.isNumeric(g[1]) || probe.isNumeric(g[2]);
      if (!numeric) return Term::list({Term::symbol(n.eval), Term::list({Term::symbol(n.equal), g[1], g[2]})});
      return Term::list({Term::symbol(n.eval), Term::list({g[0], expression(g[1]), expression(g[2])})});
    }
    return g;
  }

  Term expression(const Term& e) {
    if (!e.isList() || e.isEmptyList()) return e;
    SymbolId h = e[0].symbolId();
    if (domain_.isFluent(h)) return fluentVar(e);
    std::vector<Term> items{e[0]};
    for (const auto& a : e.items().subspan(1)) items.push_back(expression(a));
    return Term::list(std::move(items));
  }

  Term fluentVar(const Term& fluent) {
    auto it = std::find_if(fluentVars_.begin(), fluentVars_.end(), [&](const auto& p) { return p.first == fluent; });
    if (it != fluentVars_.end()) return it->second;
    Term v = Term::variable("?fluent-" + std::to_string(fluentVars_.size() + 1));
    fluentVars_.emplace_back(fluent, v);
    lookups_.push_back(withValue(fluent, v));
    return v;
  }

  static Term withValue(const Term& fluent, const Term& value) {
    std::vector<Term> items(fluent.items().begin(), fluent.items().end());
    items.push_back(value);
    return Term::list(std::move(items));
  }

  const PddlDomain& domain_;
  std::vector<std::pair<Term, Term>> fluentVars_;
  std::vector<Term> lookups_;
};

}  // namespace

Translation translateToShop(const PddlDomain& domain) {
  const auto& n = N();
  Translation out;
  out.report.skipped = domain.skipped;
  std::unordered_set<SymbolId> names;
  std::vector<Term> items;
  OperatorBuilder builder(domain);
  for (const auto& a : domain.actions) {
    const std::string& name = symbolName(a.name);
    if (!name.empty() && name[0] == '!') throw PddlError("name collision: action " + name + " already carries the '!' prefix");
    if (!names.insert(a.name).second) throw PddlError("name collision: action " + name + " defined twice");
    items.push_back(builder.build(a));
    ++out.report.translatedOperators;
  }
  for (const auto& a : domain.actions) {
    std::vector<Term> head{Term::symbol(a.name)};
    std::vector<Term> sub{Term::symbol("!" + symbolName(a.name))};
    for (const auto& p : a.parameters) {
      head.push_back(p.variable);
      sub.push_back(p.variable);
    }
    Term task = Term::list(std::move(head));
    out.report.stubMethods.push_back(toString(task));
    items.push_back(Term::list({Term::symbol(n.methodKw), task, Term::nil(), Term::list({Term::list(std::move(sub))})}));
  }
  out.report.notes.push_back("wrapper methods are placeholders; replace them with domain-specific methods");
  if (!domain.functions.empty()) {
    out.report.notes.push_back("numeric fluents are encoded as atoms (f args... value)");
  }
  Term form = Term::list({Term::symbol(n.defdomain), Term::symbol(domain.name), Term::list(std::move(items))});
  try {
    out.domain = loadDomain(toSExpr(form));
  } catch (const LoadError& e) {
    throw PddlError(std::string("translated domain failed to load: ") + e.what());
  }
  out.source = printDomain(out.domain);
  return out;
}

namespace {

class Executor {
 public:
  Executor(const PddlDomain& d, const State& s) : domain_(d), state_(s) {}

  std::optional<double> fluent(const Term& f) const {
    for (const auto& atom : state_.atomsFor(*f.head())) {
      if (atom.size() != f.size() + 1) continue;
      bool match = true;
      for (std::size_t i = 1; i < f.size() && match; ++i) match = atom[i] == f[i];
      if (match && atom[f.size()].isNumber()) return atom[f.size()].asDouble();
    }
    return std::nullopt;
  }

  double number(const Term& e) const {
    const auto& n = N();
    if (e.isNumber()) return e.asDouble();
    if (!e.isList() || e.isEmptyList()) throw std::runtime_error("not a number: " + toString(e));
    SymbolId h = e[0].symbolId();
    if (domain_.isFluent(h)) {
      auto v = fluent(e);
      if (!v) throw std::runtime_error("undefined fluent " + toString(e));
      return *v;
    }
    double a = number(e[1]);
    if (e.size() == 2) return -a;
    double b = number(e[2]);
    if (h == n.plus) return a + b;
    if (h == n.minus) return a - b;
    if (h == n.times) return a * b;
    if (b == 0.0) throw std::runtime_error("division by zero");
    return a / b;
  }

  bool holds(const Term& g) const {
    const auto& n = N();
    if (g.isEmptyList()) return true;
    SymbolId h = g[0].symbolId();
    auto args = g.items().subspan(1);
    if (h == n.andS) return std::all_of(args.begin(), args.end(), [&](const Term& c) { return holds(c); });
    if (h == n.orS) return std::any_of(args.begin(), args.end(), [&](const Term& c) { return holds(c); });
    if (h == n.notS) return !holds(args[0]);
    if (h == n.imply) return !holds(args[0]) || holds(args[1]);
    if (isComparison(h)) {
      ActionParser probe(domain_, PddlAction{});
      if (h == n.eq && !probe.isNumeric(args[0]) && !probe.isNumeric(args[1])) return args[0] == args[1];
      double a = number(args[0]);
      double b = number(args[1]);
      if (h == n.lt) return a < b;
      if (h == n.le) return a <= b;
      if (h == n.gt) return a > b;
      if (h == n.ge) return a >= b;
      return a == b;
    }
    return state_.contains(g);
  }

  /// Returns an error message, empty on success.
  std::string apply(const Term& action) {
    if (!action.isList() || action.isEmptyList() || !action[0].isSymbol()) return "malformed action";
    const PddlAction* a = domain_.findAction(action[0].symbolId());
    if (!a) return "unknown action " + toString(action);
    if (action.size() != a->parameters.size() + 1) return "wrong number of arguments";
    Substitution theta;
    for (std::size_t i = 0; i < a->parameters.size(); ++i) {
      const auto& p = a->parameters[i];
      const Term& obj = action[i + 1];
      if (p.type && *p.type != N().object && !state_.contains(Term::list({Term::symbol(*p.type), obj}))) {
        return toString(obj) + " is not of type " + symbolName(*p.type);
      }
      theta.bind(p.variable, obj);
    }
    try {
      if (!holds(theta.resolve(a->precondition))) return "precondition violated";
      std::vector<Term> dels;
      std::vector<Term> adds;
      for (const auto& d : a->deletions) dels.push_back(theta.resolve(d));
      for (const auto& x : a->additions) adds.push_back(theta.resolve(x));
      for (const auto& e : a->numeric) {
        Term f = theta.resolve(e.fluent);
        double rhs = number(theta.resolve(e.expression));
        double value = rhs;
        auto cur = fluent(f);
        if (!cur) return "undefined fluent " + toString(f);
        {
          switch (e.op) {
            case NumericEffect::Op::Increase:
              value = *cur + rhs;
              break;
            case NumericEffect::Op::Decrease:
              value = *cur - rhs;
              break;
            case NumericEffect::Op::ScaleUp:
              value = *cur * rhs;
              break;
            case NumericEffect::Op::ScaleDown:
              if (rhs == 0.0) return "division by zero";
              value = *cur / rhs;
              break;
            case NumericEffect::Op::Assign:
              break;
          }
        }
        for (const auto& atom : state_.atomsFor(*f.head())) {
          bool match = atom.size() == f.size() + 1;
          for (std::size_t i = 1; i < f.size() && match; ++i) match = atom[i] == f[i];
          if (match) dels.push_back(atom);
        }
        std::vector<Term> items(f.items().begin(), f.items().end());
        items.push_back(numberTerm(value));
        adds.push_back(Term::list(std::move(items)));
      }
      for (const auto& d : dels) state_.remove(d);
      for (const auto& x : adds) state_.add(x);
    } catch (const std::exception& e) {
      return e.what();
    }
    return {};
  }

  State& state() { return state_; }

 private:
  const PddlDomain& domain_;
  State state_;
};

}  // namespace

PddlExecution executePddl(const PddlDomain& domain, const State& init, const std::vector<Term>& actions) {
  Executor ex(domain, init);
  PddlExecution out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    std::string msg = ex.apply(actions[i]);
    if (!msg.empty()) {
      out.ok = false;
      out.failedIndex = i;
      out.message = "action " + std::to_string(i) + " " + toString(actions[i]) + ": " + msg;
      break;
    }
  }
  out.finalState = std::move(ex.state());
  return out;
}

}  // namespace shop2
