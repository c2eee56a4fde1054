#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hddl/source.hpp"

// Syntax trees for HDDL 2.1 domains and problems. Names are stored
// lower-cased; variables keep their leading '?'. Every node carries a
// NodeInfo that is ignored by operator==, so equality is structural.
namespace hddl::ast {

enum class CompOp { Lt, Le, Eq, Ge, Gt };
enum class ArithOp { Add, Sub, Mul, Div };
enum class TimeSpec { Start, End };
enum class AssignOp { Assign, ScaleUp, ScaleDown, Increase, Decrease };

std::string_view to_string(CompOp op);
std::string_view to_string(ArithOp op);
std::string_view to_string(TimeSpec t);
std::string_view to_string(AssignOp op);

struct Number {
  double value = 0.0;
  /// Source spelling, used when printing so that `1.00000` survives.
  std::string text;

  friend bool operator==(const Number& a, const Number& b) { return a.value == b.value; }
};

struct Symbol {
  std::string name;
  NodeInfo info;
  bool operator==(const Symbol&) const = default;
};

struct Term {
  bool is_variable = false;
  std::string name;
  NodeInfo info;
  bool operator==(const Term&) const = default;
};

struct Type {
  bool either = false;
  std::vector<Symbol> names;
  NodeInfo info;
  bool operator==(const Type&) const = default;
};

/// One entry of a typed list; `type` is empty for untyped trailing items.
struct TypedName {
  Symbol name;
  std::optional<Type> type;
  bool operator==(const TypedName&) const = default;
};

using TypedList = std::vector<TypedName>;

struct PredicateSkeleton {
  Symbol name;
  TypedList params;
  NodeInfo info;
  bool operator==(const PredicateSkeleton&) const = default;
};

struct FunctionSkeleton {
  enum class Result { Unspecified, Number, Object };
  Symbol name;
  TypedList params;
  Result result = Result::Unspecified;
  std::optional<Type> result_type;  // set when result == Object
  NodeInfo info;
  bool operator==(const FunctionSkeleton&) const = default;
};

struct TaskSkeleton {
  Symbol name;
  TypedList params;
  NodeInfo info;
  bool operator==(const TaskSkeleton&) const = default;
};

struct FExp {
  enum class Kind {
    Number,
    Head,         // (f t*) or bare f
    Negate,       // (- e)
    Binary,       // (- a b) | (/ a b)
    Multi,        // (* a b+) | (+ a b+)
    DurationVar,  // ?duration
    TimeStep,     // #t
    TotalTime,    // total-time (metric only)
  };
  Kind kind = Kind::Number;
  Number number;
  Symbol function;
  std::vector<Term> args;
  bool bare = false;
  /// Set when an argument list could not be parsed and was dropped.
  bool malformed = false;
  ArithOp op = ArithOp::Add;
  std::vector<FExp> operands;
  NodeInfo info;
  bool operator==(const FExp&) const = default;
};

struct AtomicFormula {
  Symbol predicate;
  std::vector<Term> args;
  NodeInfo info;
  bool operator==(const AtomicFormula&) const = default;
};

struct Gd {
  enum class Kind { Empty, Atom, And, Or, Not, Imply, Exists, Forall, Equal, Compare };
  Kind kind = Kind::Empty;
  AtomicFormula atom;
  std::vector<Gd> children;
  TypedList variables;
  Term left;
  Term right;
  CompOp comp = CompOp::Eq;
  std::vector<FExp> sides;  // Compare: exactly two
  NodeInfo info;
  bool operator==(const Gd&) const = default;
};

struct Effect {
  enum class Kind { Empty, And, Forall, When, Add, Delete, Assign };
  Kind kind = Kind::Empty;
  AtomicFormula atom;
  std::vector<Effect> children;  // And: c-effects; Forall/When: one body
  TypedList variables;
  std::vector<Gd> condition;  // When: exactly one
  AssignOp assign = AssignOp::Assign;
  std::vector<FExp> operands;  // Assign: target head, value
  NodeInfo info;
  bool operator==(const Effect&) const = default;
};

struct DaGd {
  enum class Kind { Empty, And, Forall, At, OverAll };
  Kind kind = Kind::Empty;
  std::vector<DaGd> children;
  TypedList variables;
  TimeSpec time = TimeSpec::Start;
  Gd gd;
  NodeInfo info;
  bool operator==(const DaGd&) const = default;
};

struct DaEffect {
  enum class Kind { Empty, And, Forall, When, Timed, Continuous };
  Kind kind = Kind::Empty;
  std::vector<DaEffect> children;  // And; Forall/When: one body
  TypedList variables;
  std::vector<DaGd> condition;  // When: exactly one
  TimeSpec time = TimeSpec::Start;
  /// Timed: a cond-effect (p-effects) or an Assign effect.
  Effect effect;
  /// Continuous: increase/decrease of a head by an f-exp-t.
  AssignOp assign = AssignOp::Increase;
  std::vector<FExp> operands;
  NodeInfo info;
  bool operator==(const DaEffect&) const = default;
};

struct DurationOperand {
  enum class Kind { Self, Task, Value };
  Kind kind = Kind::Self;
  Symbol task;
  std::vector<FExp> value;  // Value: exactly one
  NodeInfo info;
  bool operator==(const DurationOperand&) const = default;
};

struct SimpleDurationConstraint {
  /// Nested `(at start|end ...)` wrappers, outermost first.
  std::vector<TimeSpec> at;
  CompOp op = CompOp::Eq;
  DurationOperand left;
  DurationOperand right;
  NodeInfo info;
  bool operator==(const SimpleDurationConstraint&) const = default;
};

/// Duration constraint of a durative action or method. An empty conjunct
/// list is the empty constraint `()`.
struct DurationConstraint {
  std::vector<SimpleDurationConstraint> conjuncts;
  bool conjunction = false;  // written as (and ...)
  NodeInfo info;
  bool operator==(const DurationConstraint&) const = default;
};

struct TaskApp {
  Symbol name;
  std::vector<Term> args;
  NodeInfo info;
  bool operator==(const TaskApp&) const = default;
};

struct Subtask {
  std::optional<Symbol> label;
  TaskApp task;
  NodeInfo info;
  bool operator==(const Subtask&) const = default;
};

struct TimePoint {
  std::optional<TimeSpec> spec;
  Symbol task;
  NodeInfo info;
  bool operator==(const TimePoint&) const = default;
};

struct OrderingDef {
  CompOp op = CompOp::Lt;
  TimePoint left;
  TimePoint right;
  NodeInfo info;
  bool operator==(const OrderingDef&) const = default;
};

struct ConstraintDef {
  enum class Kind {
    Equal,
    NotEqual,
    HoldBefore,
    HoldAfter,
    HoldBetween,
    HoldDuring,
    AtEnd,
    AtStart,
    Always,
    AtMostOnce,
    Sometime,
    SometimeBefore,
    SometimeAfter,
  };
  Kind kind = Kind::Equal;
  Term left;
  Term right;
  std::vector<Symbol> tasks;
  Gd gd;
  Effect effect;  // AtEnd only
  NodeInfo info;
  bool operator==(const ConstraintDef&) const = default;
};

std::string_view to_string(ConstraintDef::Kind k);

struct TaskNetwork {
  bool has_subtasks = false;
  bool ordered = false;
  std::vector<Subtask> subtasks;
  bool has_orderings = false;
  std::vector<OrderingDef> orderings;
  bool has_constraints = false;
  std::vector<ConstraintDef> constraints;
  NodeInfo info;
  bool operator==(const TaskNetwork&) const = default;
};

struct Action {
  Symbol name;
  TypedList params;
  std::optional<Gd> precondition;
  std::optional<Effect> effect;
  NodeInfo info;
  bool operator==(const Action&) const = default;
};

struct DurativeAction {
  Symbol name;
  TypedList params;
  DurationConstraint duration;
  std::optional<DaGd> condition;
  std::optional<DaEffect> effect;
  NodeInfo info;
  bool operator==(const DurativeAction&) const = default;
};

struct Method {
  Symbol name;
  TypedList params;
  TaskApp task;
  std::optional<Gd> precondition;
  TaskNetwork network;
  NodeInfo info;
  bool operator==(const Method&) const = default;
};

struct DurativeMethod {
  Symbol name;
  TypedList params;
  TaskApp task;
  std::optional<DurationConstraint> duration;
  std::optional<DaGd> condition;
  TaskNetwork network;
  NodeInfo info;
  bool operator==(const DurativeMethod&) const = default;
};

using Structure = std::variant<Action, DurativeAction, Method, DurativeMethod>;

const Symbol& structure_name(const Structure& s);
const NodeInfo& structure_info(const Structure& s);

struct Domain {
  Symbol name;
  std::optional<std::vector<Symbol>> requirements;
  std::optional<TypedList> types;
  std::optional<std::vector<PredicateSkeleton>> predicates;
  std::optional<std::vector<FunctionSkeleton>> functions;
  std::optional<TypedList> constants;
  std::vector<TaskSkeleton> tasks;
  std::vector<Structure> structures;
  NodeInfo info;
  bool operator==(const Domain&) const = default;
};

struct InitElement {
  enum class Kind { Literal, Timed, FunctionInit };
  Kind kind = Kind::Literal;
  bool negated = false;
  AtomicFormula atom;
  Number time;
  Symbol function;
  std::vector<Symbol> function_args;
  bool bare_function = false;
  Number value;
  NodeInfo info;
  bool operator==(const InitElement&) const = default;
};

struct InitialTaskNetwork {
  std::optional<TypedList> params;
  TaskNetwork network;
  NodeInfo info;
  bool operator==(const InitialTaskNetwork&) const = default;
};

struct Metric {
  bool minimize = true;
  FExp expr;
  NodeInfo info;
  bool operator==(const Metric&) const = default;
};

struct Problem {
  Symbol name;
  Symbol domain;
  std::optional<std::vector<Symbol>> requirements;
  std::optional<TypedList> objects;
  std::optional<InitialTaskNetwork> htn;
  std::vector<InitElement> init;
  std::optional<Gd> goal;
  std::optional<Metric> metric;
  NodeInfo info;
  bool operator==(const Problem&) const = default;
};

}  // namespace hddl::ast
