#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "shop2/bundled.hpp"
#include "shop2/engine.hpp"
#include "shop2/logic.hpp"
#include "shop2/model.hpp"
#include "shop2/pddl.hpp"
#include "shop2/plan_io.hpp"
#include "shop2/sexpr.hpp"
#include "shop2/temporal.hpp"

namespace {

using namespace shop2;

constexpr int kPlanFound = 0;
constexpr int kNoPlan = 1;
constexpr int kResourceLimit = 2;
constexpr int kInputError = 3;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File contents, falling back to a bundled file of the same (or .shop-suffixed) name.
std::string readSource(const std::string& path) {
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  for (const std::string& name : {path, path + ".shop", "problems/" + path, "problems/" + path + ".shop"}) {
    if (auto text = bundledFile(name)) return std::string(*text);
  }
  throw InputError("no such file or bundled domain: " + path);
}

Problem selectProblem(const std::string& path, const std::string& name) {
  std::vector<Problem> problems = loadProblems(readSource(path));
  if (name.empty()) return problems.front();
  std::string wanted = name;
  for (auto& c : wanted) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto& p : problems) {
    if (p.name == wanted) return p;
  }
  throw InputError("problem " + name + " not found in " + path);
}

std::map<std::string, TraceDetail> parseTraceSpecs(const std::vector<std::string>& specs) {
  std::map<std::string, TraceDetail> out;
  for (const auto& spec : specs) {
    std::size_t colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    if (name.empty()) throw InputError("empty trace name in --trace " + spec);
    TraceDetail detail;
    if (colon != std::string::npos) {
      std::stringstream rest(spec.substr(colon + 1));
      std::string opt;
      while (std::getline(rest, opt, ',')) {
        if (!opt.empty() && opt.front() == ':') opt.erase(0, 1);
        if (opt == "state") {
          detail.state = true;
        } else if (opt == "args" || opt == "arguments") {
          detail.arguments = true;
        } else if (!opt.empty()) {
          throw InputError("unknown trace option " + opt + " in --trace " + spec);
        }
      }
    }
    out[name] = detail;
  }
  return out;
}

int exitFor(SearchStatus status) {
  switch (status) {
    case SearchStatus::PlanFound:
      return kPlanFound;
    case SearchStatus::NoPlan:
      return kNoPlan;
    case SearchStatus::ResourceLimit:
      return kResourceLimit;
  }
  return kInputError;
}

struct PlanArgs {
  std::string domain;
  std::string problem;
  std::string problemName;
  bool optimize = false;
  bool allPlans = false;
  double timeLimit = 0.0;
  int depthLimit = 0;
  std::size_t maxPlans = 0;
  std::vector<std::string> trace;
  bool showInternal = false;
  std::string format = "text";
  bool tree = false;
};

int runPlan(const PlanArgs& args) {
  Domain domain = loadDomainText(readSource(args.domain));
  Problem problem = selectProblem(args.problem, args.problemName);
  checkGoals(domain, problem);

  SearchConfig config;
  config.mode = args.optimize ? SearchMode::BranchAndBound
                : args.allPlans ? SearchMode::AllPlans
                                : SearchMode::FirstPlan;
  if (args.timeLimit > 0) config.timeLimit = args.timeLimit;
  if (args.depthLimit > 0) config.depthLimit = args.depthLimit;
  config.maxPlans = args.maxPlans;
  config.trace = parseTraceSpecs(args.trace);
  bool json = args.format == "json";
  std::vector<TraceEvent> events;
  config.traceSink = [&](const TraceEvent& ev) {
    if (json) {
      events.push_back(ev);
    } else {
      std::cerr << "; trace " << formatTraceEvent(ev) << '\n';
    }
  };
  if (!json) {
    config.onIncumbent = [](const Plan& p) { std::cerr << "; incumbent cost=" << formatCost(p.totalCost) << '\n'; };
  }

  SearchResult result = plan(domain, problem, config);

  if (json) {
    JsonOptions options;
    options.showInternal = args.showInternal;
    options.includeTree = args.tree;
    options.trace = config.trace.empty() ? nullptr : &events;
    options.domain = domain.name;
    options.problem = problem.name;
    std::cout << formatResultJson(result, options);
    return exitFor(result.status);
  }

  std::cout << "; status=" << statusName(result.status) << " plans=" << result.plans.size()
            << " expansions=" << result.expansions << '\n';
  auto printOne = [&](std::size_t i) {
    std::cout << formatPlanText(result.plans[i], args.showInternal);
    if (args.tree && i < result.trees.size()) {
      std::stringstream tree(formatTreeText(result.trees[i], result.plans[i], args.showInternal));
      std::string line;
      while (std::getline(tree, line)) std::cout << ";   " << line << '\n';
    }
  };
  if (config.mode == SearchMode::AllPlans) {
    for (std::size_t i = 0; i < result.plans.size(); ++i) {
      std::cout << "; plan " << (i + 1) << '\n';
      printOne(i);
    }
  } else if (!result.plans.empty()) {
    printOne(result.plans.size() - 1);
  }
  return exitFor(result.status);
}

Plan readPlanFile(const std::string& path) {
  std::string text = readSource(path);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parsePlanJson(text);
  return parsePlanText(text);
}

int runValidate(const std::string& domainPath, const std::string& problemPath, const std::string& problemName,
                const std::string& planPath) {
  Domain domain = loadDomainText(readSource(domainPath));
  Problem problem = selectProblem(problemPath, problemName);
  Plan p = readPlanFile(planPath);
  ValidationResult v = validatePlan(domain, problem, p);
  if (!v.ok) {
    std::cout << "invalid: " << v.message << '\n';
    return kNoPlan;
  }
  if (domain.isTemporal()) {
    TemporalVerdict t = checkTemporalPlan(domain, problem, p);
    if (!t.ok) {
      std::cout << "invalid: " << t.message << '\n';
      return kNoPlan;
    }
  }
  std::cout << "valid: " << p.actions.size() << " actions, total-cost=" << formatCost(v.recomputedCost) << '\n';
  return kPlanFound;
}

void writeOut(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

int runTranslate(const std::string& pddlPath, const std::string& output, const std::string& reportPath,
                 bool lenient) {
  PddlOptions options;
  options.strict = !lenient;
  PddlDomain d = parsePddl(readSource(pddlPath), options);
  Translation t = translateToShop(d);
  writeOut(output, t.source);
  if (reportPath.empty()) {
    std::cerr << t.report.text();
  } else {
    writeOut(reportPath, t.report.text());
  }
  return kPlanFound;
}

int runMtp(const std::string& domainPath, bool noMakespan) {
  Domain domain = loadDomainText(readSource(domainPath));
  if (domain.durative.empty()) throw InputError("domain has no durative operators");
  MtpOptions options;
  options.trackMakespan = !noMakespan;
  for (const auto& op : domain.durative) {
    Operator out = mtpTranslate(op, domain.dynamics, options);
    Term form = Term::list({Term::symbol(":operator"), out.head, out.precondition, out.deleteList, out.addList,
                            out.cost});
    std::cout << prettyPrint(toSExpr(form)) << "\n\n";
  }
  return kPlanFound;
}

int runSelfCheck() {
  int status = kPlanFound;
  for (const auto& f : bundledFiles()) {
    try {
      if (f.name.rfind("problems/", 0) == 0) {
        auto problems = loadProblems(f.text);
        std::cout << "ok   " << f.name << " (" << problems.size() << " problems)\n";
      } else {
        Domain d = loadDomainText(f.text);
        std::cout << "ok   " << f.name << " (" << d.operators.size() << " operators, " << d.methods.size()
                  << " methods, " << d.axiomList.size() << " axioms)\n";
      }
    } catch (const std::exception& e) {
      std::cout << "FAIL " << f.name << ": " << e.what() << '\n';
      status = kInputError;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTN planner"};
  app.require_subcommand(1);

  PlanArgs planArgs;
  auto* planCmd = app.add_subcommand("plan", "Find a plan for a problem");
  planCmd->add_option("--domain", planArgs.domain, "Domain file or bundled domain name")->required();
  planCmd->add_option("--problem", planArgs.problem, "Problem file")->required();
  planCmd->add_option("--problem-name", planArgs.problemName, "Problem to use when the file holds several");
  auto* optimize = planCmd->add_flag("--optimize", planArgs.optimize, "Branch-and-bound search for a cheapest plan");
  planCmd->add_flag("--all-plans", planArgs.allPlans, "Enumerate every plan")->excludes(optimize);
  planCmd->add_option("--time-limit", planArgs.timeLimit, "Search time limit in seconds")
      ->check(CLI::PositiveNumber);
  planCmd->add_option("--depth-limit", planArgs.depthLimit, "Maximum decomposition depth")
      ->check(CLI::PositiveNumber);
  planCmd->add_option("--max-plans", planArgs.maxPlans, "Stop after this many plans in --all-plans mode");
  planCmd->add_option("--trace", planArgs.trace, "Trace NAME[:state,args]; may be repeated");
  planCmd->add_flag("--show-internal", planArgs.showInternal, "Print internal !! actions");
  planCmd->add_option("--format", planArgs.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  planCmd->add_flag("--tree", planArgs.tree, "Include the decomposition tree");

  std::string vDomain, vProblem, vProblemName, vPlan;
  auto* validateCmd = app.add_subcommand("validate", "Check a plan file against a problem");
  validateCmd->add_option("--domain", vDomain, "Domain file")->required();
  validateCmd->add_option("--problem", vProblem, "Problem file")->required();
  validateCmd->add_option("--problem-name", vProblemName, "Problem to use when the file holds several");
  validateCmd->add_option("--plan", vPlan, "Plan file (text or json)")->required();

  std::string pddlPath, shopOut, reportOut;
  bool lenient = false;
  auto* translateCmd = app.add_subcommand("translate-pddl", "Translate a PDDL domain into a domain skeleton");
  translateCmd->add_option("--pddl", pddlPath, "PDDL domain file")->required();
  translateCmd->add_option("--output", shopOut, "Output domain file (default stdout)");
  translateCmd->add_option("--report", reportOut, "Report file (default stderr)");
  translateCmd->add_flag("--lenient", lenient, "Skip unsupported actions instead of failing");

  std::string mDomain;
  bool noMakespan = false;
  auto* mtpCmd = app.add_subcommand("mtp", "Print the timeline translation of durative operators");
  mtpCmd->add_option("--domain", mDomain, "Domain file")->required();
  mtpCmd->add_flag("--no-makespan", noMakespan, "Omit makespan bookkeeping");

  auto* selfCheck = app.add_subcommand("self-check", "Load every bundled domain and problem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*planCmd) return runPlan(planArgs);
    if (*validateCmd) return runValidate(vDomain, vProblem, vProblemName, vPlan);
    if (*translateCmd) return runTranslate(pddlPath, shopOut, reportOut, lenient);
    if (*mtpCmd) return runMtp(mDomain, noMakespan);
    if (*selfCheck) return runSelfCheck();
  } catch (const ProofDepthError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
