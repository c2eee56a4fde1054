#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hddl/ast.hpp"
#include "hddl/source.hpp"

namespace hddl {

enum class RequirementFlag {
  Hierarchy,
  MethodPreconditions,
  MethodConstraints,
  Typing,
  Fluents,
  NumericFluents,
  ObjectFluents,
  DurativeActions,
  DurativeMethods,
  DurationInequalities,
  TimedInitialLiterals,
  ContinuousEffects,
  NegativePreconditions,
  DisjunctivePreconditions,
  ExistentialPreconditions,
  UniversalPreconditions,
  ConditionalEffects,
  Equality,
};

using FlagSet = std::set<RequirementFlag>;

/// Flag name without the leading ':' (e.g. "durative-actions").
std::string_view to_string(RequirementFlag f);
const std::vector<RequirementFlag>& all_flags();
/// Accepts names with or without the leading ':'.
std::optional<RequirementFlag> flag_from_string(std::string_view name);

/// Smallest superset of `declared` closed under the implication table.
FlagSet closure(const FlagSet& declared);

/// Converts a `(:requirements ...)` list, reporting unknown flags.
FlagSet read_requirements(const std::vector<ast::Symbol>& keys, Diagnostics& diags);

struct GateViolation {
  std::string feature;
  RequirementFlag required_flag;
  SourceSpan span;
};

/// One violation per gated construct whose flag is missing from the closure
/// of the flags declared by the domain and (when given) the problem.
std::vector<GateViolation> check_gates(const ast::Domain& domain, const ast::Problem* problem,
                                       const FlagSet& declared);
/// Convenience overload that reads the declared flags from the ASTs.
std::vector<GateViolation> check_gates(const ast::Domain& domain,
                                       const ast::Problem* problem = nullptr);
/// Gates for a problem on its own, against an externally supplied flag set.
std::vector<GateViolation> check_problem_gates(const ast::Problem& problem,
                                               const FlagSet& declared);

Diagnostic to_diagnostic(const GateViolation& v, bool strict);

}  // namespace hddl
