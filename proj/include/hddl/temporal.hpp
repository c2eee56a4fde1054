#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hddl/analysis.hpp"
#include "hddl/ast.hpp"

// Evaluation of goal descriptions, numeric expressions, duration
// constraints and method constraints over timed state trajectories.
namespace hddl {

/// A ground atom or ground function term, spelled "name arg1 arg2".
using GroundAtom = std::string;

GroundAtom make_atom(const std::string& name, const std::vector<std::string>& args);
/// "(name arg1 arg2)"
std::string atom_text(const GroundAtom& a);

struct State {
  std::set<GroundAtom> atoms;
  std::map<GroundAtom, double> fluents;
  bool operator==(const State&) const = default;
};

/// Variable (with its '?') to object.
using Bindings = std::map<std::string, std::string>;

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalContext {
  /// Needed for quantifiers; quantifying without it is an EvalError.
  const SymbolTable* symbols = nullptr;
  double eps_num = 1e-6;
  std::optional<double> duration;    // ?duration
  std::optional<double> total_time;  // total-time in metrics
};

/// Comparison with tolerance: `=` within eps, strict comparisons need a gap
/// larger than eps.
bool compare(ast::CompOp op, double a, double b, double eps);

std::string resolve(const ast::Term& t, const Bindings& b);
GroundAtom ground(const ast::AtomicFormula& a, const Bindings& b);
/// Ground function term of a Head expression.
GroundAtom ground_head(const ast::FExp& head, const Bindings& b);

bool eval_gd(const ast::Gd& gd, const State& s, const Bindings& b, const EvalContext& ctx);
double eval_fexp(const ast::FExp& e, const State& s, const Bindings& b, const EvalContext& ctx);

/// Checks an action's duration constraint for a given duration. Conjuncts
/// wrapped in `(at end ...)` are evaluated in `end`, or in `start` when no
/// end state is supplied.
bool check_action_duration(const ast::DurationConstraint& c, double duration,
                           const State& start, const Bindings& b, const EvalContext& ctx,
                           const State* end = nullptr);

struct TaskInterval {
  std::string task;
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

using IntervalMap = std::map<std::string, TaskInterval>;

bool check_method_duration(const ast::DurationConstraint& c, const TaskInterval& method,
                           const IntervalMap& subtasks, const State& context,
                           const Bindings& b, const EvalContext& ctx);

struct TrajectoryStep {
  State state;
  double time = 0.0;
};

/// ⟨(s0,t0),…,(sn,tn)⟩. Step 0 is the state before any event; step 1 may
/// share its timestamp when events happen at t0. Later timestamps strictly
/// increase.
struct TimedTrajectory {
  std::vector<TrajectoryStep> steps;

  /// Index of the last step with time <= t (0 when none).
  std::size_t index_at(double t, double eps = 0.0) const;
  /// Index of the last step with time < t (0 when none): the state in force
  /// before the events at t.
  std::size_t index_before(double t, double eps = 0.0) const;
  const State& at(double t, double eps = 0.0) const { return steps[index_at(t, eps)].state; }
  const State& before(double t, double eps = 0.0) const {
    return steps[index_before(t, eps)].state;
  }
  const State& initial() const { return steps.front().state; }
  const State& final() const { return steps.back().state; }
};

/// Satisfaction of one method constraint. Throws EvalError when a referenced
/// task has no interval.
bool holds_constraint(const ast::ConstraintDef& c, const TimedTrajectory& traj,
                      const IntervalMap& intervals, const Bindings& b, const EvalContext& ctx);

}  // namespace hddl
