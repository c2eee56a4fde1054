#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hddl/source.hpp"

// Timed hierarchical plans.
//
//   0.000: (activate_instrument sat0 instrument0) [5.000]
//   ...
//   ==>
//   root 0 1
//   bind ?p obj                 ; value for a :htn parameter
//   0: (do_observation site spectrograph) -> method_observe 2 3 4
//   2: action 0                 ; leaf, 0-based index into the actions
//
// Lines starting with ';' are comments.
namespace hddl {

struct PlanAction {
  double start = 0.0;
  std::string name;
  std::vector<std::string> args;
  /// Absent for instantaneous actions.
  std::optional<double> duration;
  std::uint32_t line = 0;

  double end() const { return start + duration.value_or(0.0); }
};

struct DecompositionNode {
  std::string id;
  bool leaf = false;
  std::size_t action = 0;  // leaf only
  std::string task;        // method nodes only
  std::vector<std::string> args;
  std::string method;
  std::vector<std::string> children;
  std::uint32_t line = 0;
};

struct TimedPlan {
  std::vector<PlanAction> actions;
  bool has_decomposition = false;
  std::vector<std::string> roots;
  std::vector<DecompositionNode> nodes;
  std::map<std::string, std::size_t> node_index;
  /// Values for the problem's :htn parameters.
  std::map<std::string, std::string> htn_bindings;

  const DecompositionNode* node(const std::string& id) const;
};

struct PlanParseResult {
  std::optional<TimedPlan> plan;
  Diagnostics diagnostics;
};

PlanParseResult parse_plan(std::string_view text, FileId file = 0);

/// Renders a plan back into the text format.
std::string print_plan(const TimedPlan& plan);

/// Shortest decimal spelling that reads back as the same value, with at
/// most six fractional digits.
std::string format_number(double v);

}  // namespace hddl
