#include "shop2/functions.hpp"

#include <cmath>
#include <limits>

namespace shop2 {

namespace {

const Term& requireNumber(const Term& t, std::string_view fn) {
  if (!t.isNumber()) {
    throw EvaluationError(std::string(fn) + ": non-numeric argument " + toString(t));
  }
  return t;
}

void requireArity(std::span<const Term> args, std::size_t min, std::string_view fn) {
  if (args.size() < min) {
    throw EvaluationError(std::string(fn) + ": expected at least " + std::to_string(min) +
                          " argument(s)");
  }
}

Term boolTerm(bool b) { return b ? Term::truth() : Term::nil(); }

// Integer arithmetic stays exact until it overflows or meets a real.
template <typename IntOp, typename RealOp>
Term arith(const Term& a, const Term& b, IntOp intOp, RealOp realOp) {
  if (a.kind() == Term::Kind::Integer && b.kind() == Term::Kind::Integer) {
    std::int64_t out = 0;
    if (!intOp(a.asInteger(), b.asInteger(), &out)) return Term::integer(out);
  }
  return Term::real(realOp(a.asDouble(), b.asDouble()));
}

Term add(const Term& a, const Term& b) {
  return arith(
      a, b, [](std::int64_t x, std::int64_t y, std::int64_t* r) { return __builtin_add_overflow(x, y, r); },
      [](double x, double y) { return x + y; });
}

Term sub(const Term& a, const Term& b) {
  return arith(
      a, b, [](std::int64_t x, std::int64_t y, std::int64_t* r) { return __builtin_sub_overflow(x, y, r); },
      [](double x, double y) { return x - y; });
}

Term mul(const Term& a, const Term& b) {
  return arith(
      a, b, [](std::int64_t x, std::int64_t y, std::int64_t* r) { return __builtin_mul_overflow(x, y, r); },
      [](double x, double y) { return x * y; });
}

Term divide(const Term& a, const Term& b) {
  if (b.asDouble() == 0.0) throw EvaluationError("/: division by zero");
  if (a.kind() == Term::Kind::Integer && b.kind() == Term::Kind::Integer && b.asInteger() != -1 &&
      a.asInteger() % b.asInteger() == 0) {
    return Term::integer(a.asInteger() / b.asInteger());
  }
  return Term::real(a.asDouble() / b.asDouble());
}

template <typename Cmp>
FunctionTable::Function comparison(std::string name, Cmp cmp) {
  return [name, cmp](std::span<const Term> args) {
    requireArity(args, 1, name);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (!cmp(requireNumber(args[i], name).asDouble(), requireNumber(args[i + 1], name).asDouble())) {
        return Term::nil();
      }
    }
    requireNumber(args.back(), name);
    return Term::truth();
  };
}

}  // namespace

FunctionTable::FunctionTable() {
  define("+", [](std::span<const Term> args) {
    Term acc = Term::integer(0);
    for (const auto& a : args) acc = add(acc, requireNumber(a, "+"));
    return acc;
  });
  define("*", [](std::span<const Term> args) {
    Term acc = Term::integer(1);
    for (const auto& a : args) acc = mul(acc, requireNumber(a, "*"));
    return acc;
  });
  define("-", [](std::span<const Term> args) {
    requireArity(args, 1, "-");
    if (args.size() == 1) return sub(Term::integer(0), requireNumber(args[0], "-"));
    Term acc = requireNumber(args[0], "-");
    for (std::size_t i = 1; i < args.size(); ++i) acc = sub(acc, requireNumber(args[i], "-"));
    return acc;
  });
  define("/", [](std::span<const Term> args) {
    requireArity(args, 1, "/");
    if (args.size() == 1) return divide(Term::integer(1), requireNumber(args[0], "/"));
    Term acc = requireNumber(args[0], "/");
    for (std::size_t i = 1; i < args.size(); ++i) acc = divide(acc, requireNumber(args[i], "/"));
    return acc;
  });
  define("max", [](std::span<const Term> args) {
    requireArity(args, 1, "max");
    const Term* best = &requireNumber(args[0], "max");
    for (const auto& a : args.subspan(1)) {
      if (requireNumber(a, "max").asDouble() > best->asDouble()) best = &a;
    }
    return *best;
  });
  define("min", [](std::span<const Term> args) {
    requireArity(args, 1, "min");
    const Term* best = &requireNumber(args[0], "min");
    for (const auto& a : args.subspan(1)) {
      if (requireNumber(a, "min").asDouble() < best->asDouble()) best = &a;
    }
    return *best;
  });
  define("abs", [](std::span<const Term> args) {
    requireArity(args, 1, "abs");
    const Term& a = requireNumber(args[0], "abs");
    if (a.asDouble() >= 0) return a;
    return sub(Term::integer(0), a);
  });
  define("float", [](std::span<const Term> args) {
    requireArity(args, 1, "float");
    return Term::real(requireNumber(args[0], "float").asDouble());
  });
  define("<", comparison("<", [](double a, double b) { return a < b; }));
  define("<=", comparison("<=", [](double a, double b) { return a <= b; }));
  define(">", comparison(">", [](double a, double b) { return a > b; }));
  define(">=", comparison(">=", [](double a, double b) { return a >= b; }));
  define("=", [](std::span<const Term> args) {
    requireArity(args, 1, "=");
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (!(args[i] == args[i + 1])) return Term::nil();
    }
    return Term::truth();
  });
  define("equal", [](std::span<const Term> args) {
    requireArity(args, 2, "equal");
    return boolTerm(args[0] == args[1]);
  });
  define("different", [](std::span<const Term> args) {
    requireArity(args, 2, "different");
    return boolTerm(!(args[0] == args[1]));
  });
  define("not", [](std::span<const Term> args) {
    requireArity(args, 1, "not");
    return boolTerm(!args[0].isTruthy());
  });
  define("list", [](std::span<const Term> args) { return Term::list({args.begin(), args.end()}); });
}

void FunctionTable::define(std::string_view name, Function fn) { functions_[intern(name)] = std::move(fn); }

const FunctionTable::Function* FunctionTable::find(SymbolId name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

void FunctionTable::setParameter(SymbolId name, Term value) { parameters_[name] = std::move(value); }

std::optional<Term> FunctionTable::parameter(SymbolId name) const {
  auto it = parameters_.find(name);
  if (it == parameters_.end()) return std::nullopt;
  return it->second;
}

Term FunctionTable::apply(SymbolId name, std::span<const Term> args) {
  const Function* fn = find(name);
  if (!fn) throw EvaluationError("unknown function " + symbolName(name));
  return (*fn)(args);
}

Term FunctionTable::evaluate(const Term& expr, const Substitution& theta) {
  static const SymbolId kIf = intern("if");
  static const SymbolId kSetf = intern("setf");
  static const SymbolId kSetParam = intern("set-param");
  static const SymbolId kEval = intern("eval");
  static const SymbolId kCall = intern("call");
  static const SymbolId kQuote = intern("quote");
  static const SymbolId kAnd = intern("and");
  static const SymbolId kOr = intern("or");
  static const SymbolId kFixnum = intern("most-positive-fixnum");
  static const SymbolId kNegFixnum = intern("most-negative-fixnum");

  switch (expr.kind()) {
    case Term::Kind::Integer:
    case Term::Kind::Real:
      return expr;
    case Term::Kind::Variable: {
      Term v = theta.resolve(expr);
      if (!v.isGround()) throw EvaluationError("unbound variable " + toString(expr) + " in evaluation");
      return v;
    }
    case Term::Kind::Symbol: {
      if (expr.symbolId() == kFixnum) return Term::integer(kFixnumSentinel);
      if (expr.symbolId() == kNegFixnum) return Term::integer(INT64_MIN);
      if (auto p = parameter(expr.symbolId())) return *p;
      return expr;
    }
    case Term::Kind::List:
      break;
  }
  if (expr.isEmptyList()) return expr;
  auto head = expr.head();
  if (!head) throw EvaluationError("cannot evaluate " + toString(theta.resolve(expr)));
  auto args = expr.items().subspan(1);
  SymbolId fn = *head;
  if (fn == kQuote) {
    if (args.size() != 1) throw EvaluationError("quote: expected one argument");
    Term v = theta.resolve(args[0]);
    if (!v.isGround()) throw EvaluationError("unbound variable in quoted term " + toString(v));
    return v;
  }
  if (fn == kIf) {
    if (args.size() < 2 || args.size() > 3) throw EvaluationError("if: expected 2 or 3 arguments");
    if (evaluate(args[0], theta).isTruthy()) return evaluate(args[1], theta);
    return args.size() == 3 ? evaluate(args[2], theta) : Term::nil();
  }
  if (fn == kSetf || fn == kSetParam) {
    if (args.size() != 2 || !args[0].isSymbol()) {
      throw EvaluationError("setf: expected a parameter name and a value");
    }
    Term value = evaluate(args[1], theta);
    setParameter(args[0].symbolId(), value);
    return value;
  }
  if (fn == kEval) {
    if (args.size() != 1) throw EvaluationError("eval: expected one argument");
    return evaluate(args[0], theta);
  }
  if (fn == kCall) {
    if (args.empty() || !args[0].isSymbol()) throw EvaluationError("call: expected a function name");
    std::vector<Term> call(args.begin(), args.end());
    return evaluate(Term::list(std::move(call)), theta);
  }
  if (fn == kAnd) {
    Term last = Term::truth();
    for (const auto& a : args) {
      last = evaluate(a, theta);
      if (!last.isTruthy()) return Term::nil();
    }
    return last;
  }
  if (fn == kOr) {
    for (const auto& a : args) {
      Term v = evaluate(a, theta);
      if (v.isTruthy()) return v;
    }
    return Term::nil();
  }
  const Function* f = find(fn);
  if (!f) throw EvaluationError("unknown function " + symbolName(fn));
  std::vector<Term> values;
  values.reserve(args.size());
  for (const auto& a : args) values.push_back(evaluate(a, theta));
  return (*f)(values);
}

}  // namespace shop2
