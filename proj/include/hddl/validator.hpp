#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hddl/analysis.hpp"
#include "hddl/plan.hpp"
#include "hddl/temporal.hpp"

namespace hddl {

enum class FailureKind {
  UnsatisfiedStartCond,
  UnsatisfiedOverallCond,
  UnsatisfiedEndCond,
  DurationViolation,
  MutexEffect,
  OrderingViolation,
  MethodDurationViolation,
  MethodConstraintViolation,
  GoalUnsatisfied,
  UnclaimedAction,
  BadDecomposition,
  /// An effect that cannot be applied: unassigned fluent, division by zero,
  /// or a continuous effect.
  InvalidEffect,
};

std::string_view to_string(FailureKind k);

struct Failure {
  FailureKind kind;
  /// Plan line the failure is attributed to (0 when none).
  std::uint32_t line = 0;
  std::optional<double> time;
  std::string explanation;
};

enum class MethodDurationMode {
  /// A durative method without :duration lasts as long as the sum of its
  /// primitive leaves.
  Sum,
  /// A durative method lasts from its first to its last subtask; no extra
  /// constraint.
  Max,
};

struct ValidatorOptions {
  double eps_t = 0.001;
  double eps_num = 1e-6;
  MethodDurationMode mode = MethodDurationMode::Sum;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Failure> failures;
  std::optional<double> metric;
  double makespan = 0.0;
  TimedTrajectory trajectory;
};

/// A plan action matched to its declaration.
struct ResolvedAction {
  const ast::Structure* schema = nullptr;  // nullptr when unresolved
  Bindings bindings;
  bool durative = false;
};

/// Matches plan actions to declarations; failures for unknown names, bad
/// arity and argument types.
std::vector<ResolvedAction> resolve_actions(const Model& model, const TimedPlan& plan,
                                            std::vector<Failure>& failures);

/// The initial state from :init, without timed initial literals.
State initial_state(const Model& model);

/// Replays the event queue; appends mutex and effect failures.
TimedTrajectory build_trajectory(const Model& model, const TimedPlan& plan,
                                 const std::vector<ResolvedAction>& resolved,
                                 const ValidatorOptions& opts, std::vector<Failure>& failures);

std::vector<Failure> check_actions(const Model& model, const TimedPlan& plan,
                                   const std::vector<ResolvedAction>& resolved,
                                   const TimedTrajectory& traj, const ValidatorOptions& opts);

std::vector<Failure> check_decomposition(const Model& model, const TimedPlan& plan,
                                         const TimedTrajectory& traj,
                                         const ValidatorOptions& opts);

struct GoalAndMetric {
  bool goal = true;
  std::optional<double> metric;
  double makespan = 0.0;
  std::optional<std::string> error;
};

GoalAndMetric check_goal_and_metric(const Model& model, const TimedPlan& plan,
                                    const TimedTrajectory& traj, const ValidatorOptions& opts);

ValidationReport validate(const Model& model, const TimedPlan& plan,
                          const ValidatorOptions& opts = {});

std::string render_text(const ValidationReport& r);
nlohmann::json to_json(const ValidationReport& r);

}  // namespace hddl
