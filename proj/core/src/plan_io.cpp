#include "shop2/plan_io.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

#include "json.hpp"

namespace shop2 {

using nlohmann::json;

bool Action::internal() const {
  const std::string& n = symbolName(name());
  return n.size() > 1 && n[0] == '!' && n[1] == '!';
}

void Plan::append(Term task, double cost) {
  actions.push_back(Action{std::move(task), cost, actions.size()});
  totalCost += cost;
}

std::vector<const Action*> Plan::visibleActions() const {
  std::vector<const Action*> out;
  for (const auto& a : actions) {
    if (!a.internal()) out.push_back(&a);
  }
  return out;
}

std::vector<Term> Plan::tasks() const {
  std::vector<Term> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(a.task);
  return out;
}

std::vector<int> DecompositionTree::leafActions(int node) const {
  std::vector<int> out;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const Node& n = nodes[static_cast<std::size_t>(id)];
    if (n.primitive()) out.push_back(n.action);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<int> DecompositionTree::leafActions() const {
  std::vector<int> out;
  for (int r : roots) {
    auto part = leafActions(r);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string formatCost(double cost) {
  if (cost == static_cast<double>(static_cast<std::int64_t>(cost)) && std::fabs(cost) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(cost));
  }
  return printNumber(Number::ofReal(cost));
}

std::string formatPlanText(const Plan& plan, bool showInternal) {
  std::string out;
  for (const auto& a : plan.actions) {
    if (a.internal() && !showInternal) continue;
    out += toString(a.task);
    out += " cost=";
    out += formatCost(a.cost);
    out += '\n';
  }
  out += "; total-cost=" + formatCost(plan.totalCost) + '\n';
  return out;
}

Plan parsePlanText(std::string_view text) {
  Plan plan;
  std::optional<double> declared;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineNo;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line = line.substr(first);
    if (line.front() == ';') {
      constexpr std::string_view key = "; total-cost=";
      if (line.substr(0, key.size()) == key) {
        std::string value(line.substr(key.size()));
        while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
        try {
          declared = toTerm(parseSExpr(value)).asDouble();
        } catch (const std::exception&) {
          throw PlanFormatError("line " + std::to_string(lineNo) + ": bad total cost");
        }
      }
      continue;
    }
    std::size_t marker = line.rfind(" cost=");
    std::string_view taskText = marker == std::string_view::npos ? line : line.substr(0, marker);
    double cost = 1.0;
    Term task;
    try {
      task = toTerm(parseSExpr(taskText));
      if (marker != std::string_view::npos) {
        std::string value(line.substr(marker + 6));
        while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
        Term c = toTerm(parseSExpr(value));
        if (!c.isNumber()) throw PlanFormatError("cost is not a number");
        cost = c.asDouble();
      }
    } catch (const std::exception& e) {
      throw PlanFormatError("line " + std::to_string(lineNo) + ": " + e.what());
    }
    if (!task.isList() || task.isEmptyList() || !task[0].isSymbol()) {
      throw PlanFormatError("line " + std::to_string(lineNo) + ": not an action");
    }
    plan.append(task, cost);
  }
  if (declared) plan.totalCost = *declared;
  return plan;
}

namespace {

void treeLines(const DecompositionTree& tree, const Plan& plan, int id, int indent, bool showInternal,
               std::string& out) {
  const auto& n = tree.nodes[static_cast<std::size_t>(id)];
  if (n.primitive()) {
    const Action& a = plan.actions[static_cast<std::size_t>(n.action)];
    if (a.internal() && !showInternal) return;
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += std::to_string(n.action) + ": " + toString(a.task) + '\n';
    return;
  }
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += toString(n.task);
  if (n.label) out += " [" + symbolName(*n.label) + "]";
  out += '\n';
  for (int c : n.children) treeLines(tree, plan, c, indent + 1, showInternal, out);
}

json taskJson(const Term& task) {
  json args = json::array();
  for (const auto& a : task.items().subspan(1)) args.push_back(toString(a));
  return json{{"name", symbolName(*task.head())}, {"args", args}};
}

json treeJson(const DecompositionTree& tree, int id) {
  const auto& n = tree.nodes[static_cast<std::size_t>(id)];
  json j;
  j["task"] = toString(n.task);
  if (n.primitive()) {
    j["action"] = n.action;
    return j;
  }
  if (n.label) j["label"] = symbolName(*n.label);
  json b = json::object();
  for (const auto& [var, value] : n.bindings) b[toString(var)] = toString(value);
  j["bindings"] = b;
  j["immediate"] = n.immediate;
  json children = json::array();
  for (int c : n.children) children.push_back(treeJson(tree, c));
  j["children"] = children;
  return j;
}

json costJson(double c) {
  if (c == static_cast<double>(static_cast<std::int64_t>(c)) && std::fabs(c) < 1e15) {
    return static_cast<std::int64_t>(c);
  }
  return c;
}

json planJson(const Plan& plan, bool showInternal) {
  json actions = json::array();
  for (const auto& a : plan.actions) {
    if (a.internal() && !showInternal) continue;
    json j = taskJson(a.task);
    j["index"] = a.index;
    j["task"] = toString(a.task);
    j["cost"] = costJson(a.cost);
    j["internal"] = a.internal();
    actions.push_back(j);
  }
  return json{{"actions", actions},
              {"totalCost", costJson(plan.totalCost)},
              {"length", plan.actions.size()},
              {"complete", showInternal || plan.visibleActions().size() == plan.actions.size()}};
}

}  // namespace

std::string formatTreeText(const DecompositionTree& tree, const Plan& plan, bool showInternal) {
  std::string out;
  for (int r : tree.roots) treeLines(tree, plan, r, 0, showInternal, out);
  return out;
}

std::string statusName(SearchStatus status) {
  switch (status) {
    case SearchStatus::PlanFound:
      return "plan-found";
    case SearchStatus::NoPlan:
      return "no-plan";
    case SearchStatus::ResourceLimit:
      return "resource-limit";
  }
  return "unknown";
}

std::string formatTraceEvent(const TraceEvent& ev) {
  std::string out = ev.kind == TraceEvent::Kind::Enter ? "enter " : "exit ";
  switch (ev.subject) {
    case TraceEvent::Subject::MethodClause:
      out += "method ";
      break;
    case TraceEvent::Subject::Operator:
      out += "operator ";
      break;
    case TraceEvent::Subject::AxiomClause:
      out += "axiom ";
      break;
  }
  out += ev.name;
  if (!ev.label.empty()) out += " " + ev.label;
  if (ev.arguments) out += " " + toString(*ev.arguments);
  if (ev.kind == TraceEvent::Kind::Exit) out += ev.success ? " success" : " failure";
  if (ev.state) {
    out += " state=(";
    for (std::size_t i = 0; i < ev.state->size(); ++i) {
      if (i) out += ' ';
      out += toString((*ev.state)[i]);
    }
    out += ')';
  }
  return out;
}

std::string formatResultJson(const SearchResult& result, const JsonOptions& options) {
  json doc;
  doc["format"] = "shop2-result";
  doc["version"] = 1;
  doc["domain"] = options.domain;
  doc["problem"] = options.problem;
  doc["status"] = statusName(result.status);
  doc["timedOut"] = result.timedOut;
  doc["depthLimitHit"] = result.depthLimitHit;
  doc["expansions"] = result.expansions;
  doc["seconds"] = result.seconds;
  json plans = json::array();
  for (std::size_t i = 0; i < result.plans.size(); ++i) {
    json p = planJson(result.plans[i], options.showInternal);
    if (options.includeTree && i < result.trees.size()) {
      json roots = json::array();
      for (int r : result.trees[i].roots) roots.push_back(treeJson(result.trees[i], r));
      p["tree"] = roots;
    }
    plans.push_back(p);
  }
  doc["plans"] = plans;
  doc["best"] = result.plans.empty() ? json(nullptr) : json(result.plans.size() - 1);
  json incumbents = json::array();
  for (double c : result.incumbentCosts) incumbents.push_back(costJson(c));
  doc["incumbentCosts"] = incumbents;
  if (options.trace) {
    json events = json::array();
    for (const auto& ev : *options.trace) {
      json e;
      e["event"] = ev.kind == TraceEvent::Kind::Enter ? "enter" : "exit";
      e["subject"] = ev.subject == TraceEvent::Subject::MethodClause ? "method"
                     : ev.subject == TraceEvent::Subject::Operator   ? "operator"
                                                                     : "axiom";
      e["name"] = ev.name;
      if (!ev.label.empty()) e["label"] = ev.label;
      if (ev.arguments) e["arguments"] = toString(*ev.arguments);
      if (ev.kind == TraceEvent::Kind::Exit) e["success"] = ev.success;
      if (ev.state) {
        json s = json::array();
        for (const auto& a : *ev.state) s.push_back(toString(a));
        e["state"] = s;
      }
      events.push_back(e);
    }
    doc["trace"] = events;
  }
  return doc.dump(2) + "\n";
}

Plan parsePlanJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw PlanFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "shop2-result") {
    throw PlanFormatError("not a shop2-result document");
  }
  const json& plans = doc["plans"];
  if (!plans.is_array() || plans.empty()) throw PlanFormatError("document holds no plan");
  std::size_t best = doc["best"].is_number() ? doc["best"].get<std::size_t>() : plans.size() - 1;
  const json& p = plans.at(best);
  Plan plan;
  try {
    for (const auto& a : p.at("actions")) {
      plan.append(toTerm(parseSExpr(a.at("task").get<std::string>())), a.at("cost").get<double>());
    }
    plan.totalCost = p.at("totalCost").get<double>();
  } catch (const std::exception& e) {
    throw PlanFormatError(std::string("malformed plan: ") + e.what());
  }
  return plan;
}

}  // namespace shop2
