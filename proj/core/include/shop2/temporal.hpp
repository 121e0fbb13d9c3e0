#pragma once

#include <optional>
#include <span>
#include <string>

#include "shop2/engine.hpp"
#include "shop2/model.hpp"

namespace shop2 {

struct MtpOptions {
  /// Maintain `(maxtime t)` and charge each action its makespan increase.
  bool trackMakespan = true;
};

/// Rewrites a durative operator into an ordinary operator with `?start` and
/// `?duration` parameters and read-time/write-time bookkeeping.
Operator mtpTranslate(const DurativeOperator& op, std::span<const DynamicProperty> properties,
                      const MtpOptions& options = {});

DurativeOperator parseDurativeOperator(const Term& form);
Term durativeToTerm(const DurativeOperator& op);

/// `(write-time pred key...)` and friends; `time` is appended.
Term timelineAtom(std::string_view kind, SymbolId predicate, std::span<const Term> keys, const Term& time);

struct TemporalVerdict {
  bool ok = true;
  std::string message;
  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
  std::string property;
};

/// Replays the plan, recomputes every start time from independent
/// timelines and checks conflicting actions for overlap. Intervals are
/// half-open.
TemporalVerdict checkTemporalPlan(const Domain& domain, const Problem& problem, const Plan& plan,
                                  const FunctionTable* functions = nullptr);

}  // namespace shop2
