#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shop2/engine.hpp"
#include "shop2/plan.hpp"

namespace shop2 {

class PlanFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string formatCost(double cost);

/// One `(<name> <args...>) cost=<c>` line per action, then `; total-cost=<c>`.
/// Internal `!!` actions are listed only when `showInternal` is set; the
/// total always includes them.
std::string formatPlanText(const Plan& plan, bool showInternal = false);
Plan parsePlanText(std::string_view text);

std::string formatTreeText(const DecompositionTree& tree, const Plan& plan, bool showInternal = false);

struct JsonOptions {
  bool showInternal = false;
  bool includeTree = false;
  const std::vector<TraceEvent>* trace = nullptr;
  std::string domain;
  std::string problem;
};

/// Single self-describing document for a search result; see docs/formats.md.
std::string formatResultJson(const SearchResult& result, const JsonOptions& options);
/// Plan of a document written by formatResultJson (the best plan).
Plan parsePlanJson(std::string_view text);

std::string statusName(SearchStatus status);
std::string formatTraceEvent(const TraceEvent& event);

}  // namespace shop2
