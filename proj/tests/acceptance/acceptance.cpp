// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracle.hpp"
#include "shop2/bundled.hpp"
#include "shop2/engine.hpp"
#include "shop2/functions.hpp"
#include "shop2/logic.hpp"
#include "shop2/model.hpp"
#include "shop2/pddl.hpp"
#include "shop2/plan_io.hpp"
#include "shop2/temporal.hpp"

using namespace shop2;
using shop2::testing::OraclePlan;

namespace {

constexpr double kLogisticsSeconds = 0.1;
constexpr double kOracleSeconds = 60.0;
constexpr double kNumericSeconds = 1.0;
constexpr double kTimeLimit = 1.0;
constexpr double kTimeLimitSlack = 2.0;  // wall-clock allowance past the limit
constexpr int kDepthLimit = 20;
constexpr int kRandomInstances = 120;    // per domain
constexpr int kSortByCases = 1000;
constexpr int kNegationCases = 500;
constexpr unsigned kSeed = 20031;

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Failure{"cannot read " + p.string()};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Domain& bundledDomain(const std::string& name) {
  static std::map<std::string, Domain> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, loadDomainText(*bundledFile(name + ".shop"))).first;
  return it->second;
}

Problem bundledProblem(const std::string& name) { return loadProblems(*bundledFile("problems/" + name + ".shop")).at(0); }

Plan toPlan(const OraclePlan& p) {
  Plan plan;
  for (std::size_t i = 0; i < p.actions.size(); ++i) plan.append(p.actions[i], p.costs[i]);
  return plan;
}

std::vector<std::string> sequence(const std::vector<Term>& tasks) {
  std::vector<std::string> out;
  for (const auto& t : tasks) out.push_back(toString(t));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + " ";
  return s;
}

struct Instance {
  const Domain* domain;
  Problem problem;
  std::string text;
};

std::vector<Instance> randomInstances() {
  std::mt19937 rng(kSeed);
  std::vector<Instance> out;
  for (int i = 0; i < kRandomInstances; ++i) {
    std::string text = shop2::testing::randomLogisticsProblem(rng, i);
    out.push_back({&bundledDomain("logistics"), loadProblems(text).at(0), text});
    text = shop2::testing::randomZenoSimpleProblem(rng, i);
    out.push_back({&bundledDomain("zenotravel-simple"), loadProblems(text).at(0), text});
  }
  return out;
}

const std::vector<Instance>& instances() {
  static const std::vector<Instance> all = randomInstances();
  return all;
}

const std::vector<std::vector<OraclePlan>>& oraclePlans() {
  static const std::vector<std::vector<OraclePlan>> all = [] {
    std::vector<std::vector<OraclePlan>> v;
    for (const auto& inst : instances()) {
      v.push_back(shop2::testing::enumeratePlans(*inst.domain, inst.problem, {kDepthLimit, 0}));
    }
    return v;
  }();
  return all;
}

// 1. Two packages are carried by two trucks, each reserved before loading.
std::string logistics() {
  const Domain& d = bundledDomain("logistics");
  Problem p = bundledProblem("logistics-two");
  auto t0 = Clock::now();
  SearchResult r = plan(d, p);
  double secs = secondsSince(t0);
  require(r.status == SearchStatus::PlanFound, "no plan");
  const Plan& best = *r.best();
  ValidationResult v = validatePlan(d, p, best);
  require(v.ok, "plan does not validate: " + v.message);
  std::map<std::string, std::string> truckOf;
  for (std::size_t i = 0; i < best.actions.size(); ++i) {
    const Action& a = best.actions[i];
    if (symbolName(a.name()) != "!load") continue;
    std::string truck = toString(a.task[1]);
    truckOf[toString(a.task[2])] = truck;
    bool reserved = false;
    for (std::size_t j = 0; j < i; ++j) {
      const Action& b = best.actions[j];
      if (symbolName(b.name()) == "!reserve" && toString(b.task[1]) == truck) reserved = true;
    }
    require(reserved, "truck " + truck + " loaded before it was reserved");
  }
  require(truckOf.size() == 2, "expected two loads");
  require(truckOf["p1"] != truckOf["p2"], "both packages use " + truckOf["p1"]);
  require(secs < kLogisticsSeconds, "took " + std::to_string(secs) + " s");
  return "p1 on " + truckOf["p1"] + ", p2 on " + truckOf["p2"] + ", " + std::to_string(best.actions.size()) +
         " actions, " + std::to_string(secs) + " s";
}

// 2. All-plans mode matches the brute-force expander.
std::string oracleEquivalence() {
  auto t0 = Clock::now();
  const auto& all = instances();
  const auto& expected = oraclePlans();
  std::size_t totalPlans = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    SearchConfig cfg;
    cfg.mode = SearchMode::AllPlans;
    cfg.depthLimit = kDepthLimit;
    SearchResult r = plan(*all[i].domain, all[i].problem, cfg);
    std::set<std::vector<std::string>> got;
    for (const auto& p : r.plans) got.insert(sequence(p.tasks()));
    std::set<std::vector<std::string>> want;
    for (const auto& p : expected[i]) want.insert(sequence(p.actions));
    if (got != want) {
      std::string detail = "instance " + std::to_string(i) + ": engine " + std::to_string(got.size()) +
                           " plans, oracle " + std::to_string(want.size());
      for (const auto& s : want) {
        if (!got.count(s)) {
          detail += "; missing " + join(s);
          break;
        }
      }
      for (const auto& s : got) {
        if (!want.count(s)) {
          detail += "; extra " + join(s);
          break;
        }
      }
      throw Failure{detail + "\n" + all[i].text};
    }
    totalPlans += got.size();
  }
  double secs = secondsSince(t0);
  require(secs < kOracleSeconds, "took " + std::to_string(secs) + " s");
  return std::to_string(all.size()) + " instances, " + std::to_string(totalPlans) + " distinct plans, " +
         std::to_string(secs) + " s";
}

// 3. Branch-and-bound reaches the oracle minimum with decreasing incumbents.
std::string branchAndBound() {
  const auto& all = instances();
  const auto& expected = oraclePlans();
  std::size_t solved = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& p : expected[i]) {
      for (double c : p.costs) require(c >= 0.0, "negative cost in instance " + std::to_string(i));
    }
    SearchConfig cfg;
    cfg.mode = SearchMode::BranchAndBound;
    cfg.depthLimit = kDepthLimit;
    SearchResult r = plan(*all[i].domain, all[i].problem, cfg);
    auto minimum = shop2::testing::minimumCost(expected[i]);
    if (!minimum) {
      require(r.plans.empty(), "instance " + std::to_string(i) + ": plan found but the oracle has none");
      continue;
    }
    require(r.best() != nullptr, "instance " + std::to_string(i) + ": no plan");
    require(costsEqual(r.best()->totalCost, *minimum), "instance " + std::to_string(i) + ": cost " +
                                                          std::to_string(r.best()->totalCost) + " vs minimum " +
                                                          std::to_string(*minimum));
    for (std::size_t k = 1; k < r.incumbentCosts.size(); ++k) {
      require(r.incumbentCosts[k] < r.incumbentCosts[k - 1],
              "instance " + std::to_string(i) + ": incumbents do not strictly decrease");
    }
    ++solved;
  }
  return std::to_string(solved) + " solvable instances at the oracle minimum";
}

// 4. Sort-by is a stable sort of the unsorted satisfiers.
std::string sortBy() {
  std::mt19937 rng(kSeed + 4);
  FunctionTable functions;
  AxiomSet noAxioms;
  const Term y = Term::variable("?y");
  const Term x = Term::variable("?x");
  for (int c = 0; c < kSortByCases; ++c) {
    int n = std::uniform_int_distribution<int>(0, 100)(rng);
    std::vector<Term> atoms;
    for (int i = 0; i < n; ++i) {
      int key = std::uniform_int_distribution<int>(0, 9)(rng);
      Term value = (rng() % 4 == 0) ? Term::real(key + 0.5) : Term::integer(key);
      atoms.push_back(Term::list({Term::symbol("d"), Term::symbol("y" + std::to_string(rng() % 40)), value}));
    }
    State state{atoms};
    bool descending = rng() % 2 == 1;
    bool filtered = rng() % 3 == 0;
    std::string child = filtered ? "((d ?y ?x) (eval (> ?x 2)))" : "((d ?y ?x))";
    Term sorted = parseTerm(std::string("(:sort-by ?x #'") + (descending ? ">" : "<") + " " + child + ")");
    Prover prover(state, noAxioms, functions);
    auto keyed = [&](const std::vector<Substitution>& sats) {
      std::vector<std::pair<Term, double>> out;
      for (const auto& s : sats) out.emplace_back(s.resolve(y), s.resolve(x).asDouble());
      return out;
    };
    auto unsorted = keyed(prover.satisfiers(parseTerm(child)));
    auto got = keyed(prover.satisfiers(sorted));
    auto want = unsorted;
    std::stable_sort(want.begin(), want.end(), [&](const auto& a, const auto& b) {
      return descending ? a.second > b.second : a.second < b.second;
    });
    require(got == want, "case " + std::to_string(c) + ": order differs from a stable sort");
    for (std::size_t i = 1; i < got.size(); ++i) {
      bool monotone = descending ? got[i - 1].second >= got[i].second : got[i - 1].second <= got[i].second;
      require(monotone, "case " + std::to_string(c) + ": keys not monotone");
    }
    auto a = got;
    auto b = unsorted;
    auto byAll = [](const auto& p, const auto& q) { return p.first < q.first || (p.first == q.first && p.second < q.second); };
    std::sort(a.begin(), a.end(), byAll);
    std::sort(b.begin(), b.end(), byAll);
    require(a == b, "case " + std::to_string(c) + ": not a permutation");
  }
  return std::to_string(kSortByCases) + " cases";
}

// 5. Negation as failure agrees with naive bottom-up evaluation.
struct Rule {
  int head;
  std::vector<Term> headArgs;
  std::vector<std::pair<int, std::vector<Term>>> body;
};

std::string negation() {
  std::mt19937 rng(kSeed + 5);
  const std::vector<std::string> constants{"a", "b", "c"};
  const std::vector<std::string> vars{"?x", "?y", "?z"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::size_t queries = 0;
  for (int c = 0; c < kNegationCases; ++c) {
    const int base = 3;
    const int derived = 4;
    std::vector<int> arity(base + derived);
    for (auto& a : arity) a = pick(1, 2);
    auto predName = [&](int p) { return p < base ? "b" + std::to_string(p) : "q" + std::to_string(p - base); };

    std::set<Term> facts;
    for (int p = 0; p < base; ++p) {
      for (const auto& c1 : constants) {
        for (const auto& c2 : constants) {
          if (arity[p] == 1 && c2 != constants[0]) continue;
          if (pick(0, 9) < 4) {
            std::vector<Term> items{Term::symbol(predName(p)), Term::symbol(c1)};
            if (arity[p] == 2) items.push_back(Term::symbol(c2));
            facts.insert(Term::list(items));
          }
        }
      }
    }

    std::vector<Rule> rules;
    int nrules = pick(1, 20);
    for (int r = 0; r < nrules; ++r) {
      Rule rule;
      rule.head = base + pick(0, derived - 1);
      int nbody = pick(1, 2);
      std::vector<Term> bodyVars;
      bool derivedUsed = false;
      for (int b = 0; b < nbody; ++b) {
        // At most one derived atom per body keeps top-down proof counts polynomial.
        int p = derivedUsed ? pick(0, base - 1) : pick(0, rule.head - 1);
        if (p >= base) derivedUsed = true;
        std::vector<Term> args;
        for (int k = 0; k < arity[p]; ++k) {
          if (pick(0, 3) == 0) {
            args.push_back(Term::symbol(constants[pick(0, 2)]));
          } else {
            Term v = Term::variable(vars[pick(0, 2)]);
            args.push_back(v);
            bodyVars.push_back(v);
          }
        }
        rule.body.emplace_back(p, args);
      }
      for (int k = 0; k < arity[rule.head]; ++k) {
        if (bodyVars.empty() || pick(0, 4) == 0) {
          rule.headArgs.push_back(Term::symbol(constants[pick(0, 2)]));
        } else {
          rule.headArgs.push_back(bodyVars[pick(0, static_cast<int>(bodyVars.size()) - 1)]);
        }
      }
      rules.push_back(std::move(rule));
    }

    auto atom = [&](int p, const std::vector<Term>& args) {
      std::vector<Term> items{Term::symbol(predName(p))};
      items.insert(items.end(), args.begin(), args.end());
      return Term::list(items);
    };
    std::ostringstream text;
    text << "(defdomain generated (";
    for (const auto& r : rules) {
      text << "(:- " << toString(atom(r.head, r.headArgs)) << " (";
      for (const auto& [p, args] : r.body) text << toString(atom(p, args)) << ' ';
      text << ")) ";
    }
    text << "))";
    Domain domain = loadDomainText(text.str());

    // Naive bottom-up fixpoint over every grounding of ?x ?y ?z.
    std::set<Term> model = facts;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rules) {
        for (int g = 0; g < 27; ++g) {
          auto ground = [&](const Term& t) {
            if (!t.isVariable()) return t;
            int idx = static_cast<int>(std::find(vars.begin(), vars.end(), symbolName(t.symbolId())) - vars.begin());
            int digit = idx == 0 ? g % 3 : idx == 1 ? (g / 3) % 3 : g / 9;
            return Term::symbol(constants[static_cast<std::size_t>(digit)]);
          };
          bool all = true;
          for (const auto& [p, args] : r.body) {
            std::vector<Term> ga;
            for (const auto& a : args) ga.push_back(ground(a));
            if (!model.count(atom(p, ga))) {
              all = false;
              break;
            }
          }
          if (!all) continue;
          std::vector<Term> gh;
          for (const auto& a : r.headArgs) gh.push_back(ground(a));
          if (model.insert(atom(r.head, gh)).second) changed = true;
        }
      }
    }

    std::vector<Term> factList(facts.begin(), facts.end());
    State state{factList};
    FunctionTable functions;
    Prover prover(state, domain.axioms, functions);
    for (int p = base; p < base + derived; ++p) {
      std::set<Term> expected;
      for (const auto& c1 : constants) {
        for (const auto& c2 : constants) {
          if (arity[p] == 1 && c2 != constants[0]) continue;
          std::vector<Term> args{Term::symbol(c1)};
          if (arity[p] == 2) args.push_back(Term::symbol(c2));
          Term g = atom(p, args);
          bool derivable = model.count(g) != 0;
          if (derivable) expected.insert(g);
          require(prover.holds(g) == derivable, "case " + std::to_string(c) + ": " + toString(g) + " should be " +
                                                    (derivable ? "provable" : "unprovable") + "\n" + text.str());
          Term neg = Term::list({Term::symbol("not"), g});
          require(prover.holds(neg) == !derivable, "case " + std::to_string(c) + ": " + toString(neg) + "\n" + text.str());
          queries += 2;
        }
      }
      std::vector<Term> open{Term::variable("?u")};
      if (arity[p] == 2) open.push_back(Term::variable("?v"));
      Term pattern = atom(p, open);
      std::set<Term> got;
      Substitution theta;
      prover.forEach(pattern, theta, [&](Substitution& s) {
        got.insert(s.resolve(pattern));
        return true;
      });
      require(got == expected, "case " + std::to_string(c) + ": answers to " + toString(pattern) + " differ\n" + text.str());
      ++queries;
    }
  }
  return std::to_string(kNegationCases) + " programs, " + std::to_string(queries) + " queries";
}

// 6. Numeric ZenoTravel end to end.
std::string numericZeno() {
  const Domain& d = bundledDomain("zenotravel-numeric");
  Problem p = bundledProblem("zenotravel-numeric-small");
  auto t0 = Clock::now();
  SearchResult r = plan(d, p);
  double secs = secondsSince(t0);
  require(r.status == SearchStatus::PlanFound, "no plan");
  require(secs < kNumericSeconds, "took " + std::to_string(secs) + " s");
  const Plan& best = *r.best();
  ValidationResult v = validatePlan(d, p, best);
  require(v.ok, "plan does not validate: " + v.message);

  auto lookup = [&](const std::vector<Term>& atoms, const std::vector<std::string>& prefix) -> std::optional<double> {
    for (const auto& a : atoms) {
      if (a.size() != prefix.size() + 1) continue;
      bool match = true;
      for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (toString(a[i]) != prefix[i]) match = false;
      }
      if (match) return a[prefix.size()].asDouble();
    }
    return std::nullopt;
  };
  double expected = lookup(p.initialState, {"total-fuel-used"}).value_or(0.0);
  int flights = 0;
  for (const auto& a : best.actions) {
    std::string name = symbolName(a.name());
    if (name != "!fly" && name != "!zoom") continue;
    std::string plane = toString(a.task[1]);
    auto dist = lookup(p.initialState, {"distance", toString(a.task[2]), toString(a.task[3])});
    auto burn = lookup(p.initialState, {name == "!fly" ? "slow-burn" : "fast-burn", plane});
    require(dist && burn, "missing distance or burn for " + toString(a.task));
    expected += *dist * *burn;
    ++flights;
  }
  auto used = lookup(r.finalState, {"total-fuel-used"});
  require(used.has_value(), "final state lacks total-fuel-used");
  require(costsEqual(*used, expected), "total-fuel-used " + std::to_string(*used) + " vs " + std::to_string(expected));
  double sum = 0.0;
  for (const auto& a : best.actions) sum += a.cost;
  require(costsEqual(sum, best.totalCost), "plan cost differs from the sum of action costs");
  return std::to_string(flights) + " flights, fuel " + std::to_string(*used) + ", cost " +
         std::to_string(best.totalCost) + ", " + std::to_string(secs) + " s";
}

// 7. Timeline translation and concurrency on the temporal domain.
std::string temporal() {
  std::filesystem::path dir = std::filesystem::path(SHOP2_FIXTURE_DIR) / "temporal";
  DurativeOperator source = parseDurativeOperator(parseTerm(readFile(dir / "refuel-durative.shop")));
  Operator op = mtpTranslate(source, {}, MtpOptions{false});
  Term expected = parseTerm(readFile(dir / "refuel-expected.shop"));
  Term durationAssign = parseTerm("(assign ?duration (/ (- ?fuel-cap ?fuel-level) ?rate))");
  const auto& pre = op.precondition.items();
  require(std::find(pre.begin(), pre.end(), durationAssign) != pre.end(), "duration assign missing or different");
  require(op.head == expected[1], "head " + toString(op.head));
  require(op.precondition == expected[2], "precondition " + toString(op.precondition));
  require(op.deleteList == expected[3], "delete list " + toString(op.deleteList));
  require(op.addList == expected[4], "add list " + toString(op.addList));

  const Domain& d = bundledDomain("zenotravel-temporal");
  std::vector<Problem> problems{bundledProblem("zenotravel-temporal-small")};
  std::mt19937 rng(kSeed + 7);
  for (int i = 0; i < 20; ++i) problems.push_back(loadProblems(shop2::testing::randomZenoTemporalProblem(rng, i)).at(0));

  std::size_t plans = 0;
  std::size_t overlaps = 0;
  for (const auto& problem : problems) {
    for (const auto& op : shop2::testing::enumeratePlans(d, problem, {kDepthLimit, 0})) {
      Plan p = toPlan(op);
      TemporalVerdict verdict = checkTemporalPlan(d, problem, p);
      require(verdict.ok, "plan rejected: " + verdict.message);
      struct Span {
        std::string name;
        std::string plane;
        double start;
        double end;
      };
      std::vector<Span> spans;
      for (const auto& a : p.actions) {
        std::string name = symbolName(a.name());
        auto args = a.arguments();
        double start = args[args.size() - 2].asDouble();
        double end = start + args.back().asDouble();
        std::string plane = toString(name == "!board" || name == "!debark" ? args[1] : args[0]);
        spans.push_back({name, plane, start, end});
      }
      bool boardRefuel = false;
      for (const auto& a : spans) {
        for (const auto& b : spans) {
          if (a.plane != b.plane || !(a.start < b.end && b.start < a.end)) continue;
          bool boarding = a.name == "!board" || a.name == "!debark";
          require(!(boarding && b.name == "!fly"),
                  "boarding overlaps a flight of " + a.plane + " in " + join(sequence(p.tasks())));
          if (boarding && b.name == "!refuel") boardRefuel = true;
        }
      }
      if (boardRefuel) ++overlaps;
      ++plans;
    }
  }
  require(overlaps > 0, "no plan overlaps boarding with refuelling");
  return "refuel operator matches; " + std::to_string(plans) + " plans checked, " + std::to_string(overlaps) +
         " with boarding during refuel";
}

// 8. Translated PDDL domains agree with direct PDDL execution.
std::string pddlSoundness() {
  std::filesystem::path root = std::filesystem::path(SHOP2_FIXTURE_DIR) / "pddl";
  std::vector<std::filesystem::path> dirs;
  for (const auto& e : std::filesystem::directory_iterator(root)) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  require(dirs.size() == 10, "expected 10 fixtures, found " + std::to_string(dirs.size()));
  std::size_t plans = 0;
  for (const auto& dir : dirs) {
    std::string name = dir.filename().string();
    PddlDomain pd = parsePddl(readFile(dir / "domain.pddl"));
    PddlProblem pp = parsePddlProblem(readFile(dir / "problem.pddl"));
    Translation tr = translateToShop(pd);
    Problem problem;
    problem.name = pp.name;
    problem.domainName = tr.domain.name;
    problem.initialState = pddlInitialAtoms(pd, pp);
    problem.goals = parseNetwork(parseTerm(readFile(dir / "tasks.shop")));
    SearchConfig cfg;
    cfg.mode = SearchMode::AllPlans;
    cfg.maxPlans = 100;
    SearchResult r = plan(tr.domain, problem, cfg);
    require(!r.plans.empty(), name + ": no plan");
    for (const auto& p : r.plans) {
      ValidationResult v = validatePlan(tr.domain, problem, p);
      require(v.ok, name + ": engine plan does not validate: " + v.message);
      std::vector<Term> actions;
      for (const auto& a : p.actions) {
        std::vector<Term> items(a.task.items().begin(), a.task.items().end());
        items[0] = Term::symbol(symbolName(a.name()).substr(1));
        actions.push_back(Term::list(items));
      }
      PddlExecution ex = executePddl(pd, State(problem.initialState), actions);
      require(ex.ok, name + ": PDDL execution fails at action " + std::to_string(ex.failedIndex) + ": " + ex.message);
      std::set<Term> shop(v.finalState.begin(), v.finalState.end());
      auto direct = ex.finalState.atoms();
      std::set<Term> pddl(direct.begin(), direct.end());
      require(shop == pddl, name + ": final states differ for " + join(sequence(actions)));
      ++plans;
    }
  }
  return std::to_string(dirs.size()) + " fixtures, " + std::to_string(plans) + " plans replayed";
}

// 9. Tracing of method clauses.
std::string tracing() {
  const Domain& d = bundledDomain("zenotravel-simple");
  Problem p = bundledProblem("zenotravel-simple-small");
  std::vector<TraceEvent> events;
  SearchConfig traced;
  traced.trace = {{"Case1", {}}, {"Case2", {}}};
  traced.traceSink = [&](const TraceEvent& e) { events.push_back(e); };
  SearchResult a = plan(d, p, traced);

  std::vector<TraceEvent> silent;
  SearchConfig plain;
  plain.traceSink = [&](const TraceEvent& e) { silent.push_back(e); };
  SearchResult b = plan(d, p, plain);

  require(!events.empty(), "no events");
  std::vector<const TraceEvent*> stack;
  std::size_t enters = 0;
  for (const auto& e : events) {
    require(e.subject == TraceEvent::Subject::MethodClause && e.name == "transport-person" &&
                (e.label == "case1" || e.label == "case2"),
            "untraced event " + formatTraceEvent(e));
    if (e.kind == TraceEvent::Kind::Enter) {
      stack.push_back(&e);
      ++enters;
    } else {
      require(!stack.empty(), "exit without enter");
      require(stack.back()->label == e.label && stack.back()->name == e.name, "improperly nested exit");
      stack.pop_back();
    }
  }
  require(stack.empty(), "unclosed enter events");
  require(silent.empty(), std::to_string(silent.size()) + " events with tracing off");
  require(a.plans.size() == b.plans.size(), "plan counts differ");
  for (std::size_t i = 0; i < a.plans.size(); ++i) {
    require(sequence(a.plans[i].tasks()) == sequence(b.plans[i].tasks()), "plans differ");
    require(a.plans[i].totalCost == b.plans[i].totalCost, "plan costs differ");
  }
  return std::to_string(enters) + " nested enter/exit pairs";
}

// 10. Optimization under a time limit keeps a valid incumbent.
std::string timeLimit() {
  const Domain& d = bundledDomain("zenotravel-simple");
  std::ostringstream text;
  text << "(defproblem large zenotravel-simple\n  ((fuel-burn slow 1) (fuel-burn fast 3)\n";
  const int cities = 5;
  const int persons = 7;
  for (int a = 0; a < 2; ++a) {
    text << "   (plane a" << a << ") (at a" << a << " c" << a << ") (fuel a" << a << " 60) (capacity a" << a
         << " 120)\n";
  }
  for (int i = 0; i < cities; ++i) {
    for (int j = 0; j < cities; ++j) {
      if (i != j) text << "   (distance c" << i << " c" << j << ' ' << 10 + 7 * ((i * 3 + j * 5) % 6) << ")\n";
    }
  }
  for (int q = 0; q < persons; ++q) text << "   (at q" << q << " c" << q % cities << ")\n";
  text << "  )\n  ((:unordered";
  for (int q = 0; q < persons; ++q) text << " (transport-person q" << q << " c" << (q * 2 + 1) % cities << ")";
  text << ")))\n";
  Problem p = loadProblems(text.str()).at(0);

  SearchConfig cfg;
  cfg.mode = SearchMode::BranchAndBound;
  cfg.timeLimit = kTimeLimit;
  auto t0 = Clock::now();
  SearchResult r = plan(d, p, cfg);
  double secs = secondsSince(t0);
  require(r.status == SearchStatus::ResourceLimit, "status " + std::to_string(static_cast<int>(r.status)));
  require(r.timedOut, "search finished before the limit");
  require(r.best() != nullptr, "no incumbent");
  require(secs < kTimeLimit + kTimeLimitSlack, "returned after " + std::to_string(secs) + " s");
  ValidationResult v = validatePlan(d, p, *r.best());
  require(v.ok, "incumbent does not validate: " + v.message);
  require(costsEqual(v.recomputedCost, r.best()->totalCost), "incumbent cost does not replay");
  return std::to_string(r.incumbentCosts.size()) + " incumbents, best " + std::to_string(r.best()->totalCost) +
         ", " + std::to_string(secs) + " s";
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "logistics trucks", logistics},
      {2, "oracle equivalence", oracleEquivalence},
      {3, "branch-and-bound optimality", branchAndBound},
      {4, "sort-by contract", sortBy},
      {5, "negation as failure", negation},
      {6, "numeric zenotravel", numericZeno},
      {7, "timeline translation", temporal},
      {8, "pddl translation soundness", pddlSoundness},
      {9, "tracing", tracing},
      {10, "time limit", timeLimit},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      detail = c.run();
      ok = true;
    } catch (const Failure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.title << "): " << detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
