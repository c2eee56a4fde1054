#include "hddl/requirements.hpp"

#include <map>
#include <utility>

namespace hddl {

using namespace ast;
using F = RequirementFlag;

namespace {

const std::vector<std::pair<F, std::string_view>>& names() {
  static const std::vector<std::pair<F, std::string_view>> n = {
      {F::Hierarchy, "hierarchy"},
      {F::MethodPreconditions, "method-preconditions"},
      {F::MethodConstraints, "method-constraints"},
      {F::Typing, "typing"},
      {F::Fluents, "fluents"},
      {F::NumericFluents, "numeric-fluents"},
      {F::ObjectFluents, "object-fluents"},
      {F::DurativeActions, "durative-actions"},
      {F::DurativeMethods, "durative-methods"},
      {F::DurationInequalities, "duration-inequalities"},
      {F::TimedInitialLiterals, "timed-initial-literals"},
      {F::ContinuousEffects, "continuous-effects"},
      {F::NegativePreconditions, "negative-preconditions"},
      {F::DisjunctivePreconditions, "disjunctive-preconditions"},
      {F::ExistentialPreconditions, "existential-preconditions"},
      {F::UniversalPreconditions, "universal-preconditions"},
      {F::ConditionalEffects, "conditional-effects"},
      {F::Equality, "equality"},
  };
  return n;
}

const std::multimap<F, F>& implications() {
  static const std::multimap<F, F> m = {
      {F::DurationInequalities, F::DurativeActions},
      {F::TimedInitialLiterals, F::DurativeActions},
      {F::DurativeMethods, F::DurativeActions},
      {F::DurativeMethods, F::Hierarchy},
      {F::MethodConstraints, F::Hierarchy},
      {F::NumericFluents, F::Fluents},
      {F::ObjectFluents, F::Fluents},
      {F::ObjectFluents, F::Typing},
  };
  return m;
}

class GateWalker {
 public:
  explicit GateWalker(const FlagSet& flags) : flags_(flags) {}

  void need(F flag, std::string feature, const NodeInfo& at) {
    if (!flags_.count(flag)) out.push_back({std::move(feature), flag, at.span});
  }

  void domain(const Domain& d) {
    if (d.types) need(F::Typing, "types-def", d.types->empty() ? d.info : d.types->front().name.info);
    if (d.functions) {
      need(F::Fluents, "functions-def", d.functions->empty() ? d.info : d.functions->front().info);
      for (const auto& f : *d.functions) {
        if (f.result == FunctionSkeleton::Result::Number)
          need(F::NumericFluents, "number-function", f.info);
        if (f.result == FunctionSkeleton::Result::Object) {
          need(F::Typing, "object-function", f.info);
          need(F::ObjectFluents, "object-function", f.info);
        }
      }
    }
    for (const auto& s : d.structures) std::visit([&](const auto& x) { structure(x); }, s);
  }

  void problem(const Problem& p) {
    if (p.htn) network(p.htn->network);
    for (const auto& e : p.init) {
      if (e.kind == InitElement::Kind::Timed)
        need(F::TimedInitialLiterals, "timed-initial-literal", e.info);
      if (e.kind == InitElement::Kind::FunctionInit)
        need(F::NumericFluents, "function-init", e.info);
    }
    if (p.goal) gd(*p.goal);
    if (p.metric) need(F::NumericFluents, "metric", p.metric->info);
  }

  std::vector<GateViolation> out;

 private:
  void structure(const Action& a) {
    if (a.precondition) gd(*a.precondition);
    if (a.effect) effect(*a.effect);
  }

  void structure(const DurativeAction& a) {
    need(F::DurativeActions, "durative-action", a.info);
    action_duration(a.duration);
    if (a.condition) da_gd(*a.condition);
    if (a.effect) da_effect(*a.effect);
  }

  void structure(const Method& m) {
    if (m.precondition) {
      need(F::MethodPreconditions, "method-precondition", m.precondition->info);
      gd(*m.precondition);
    }
    network(m.network);
  }

  void structure(const DurativeMethod& m) {
    need(F::DurativeMethods, "durative-method", m.info);
    if (m.duration) {
      need(F::DurationInequalities, "method-duration", m.duration->info);
      for (const auto& c : m.duration->conjuncts) {
        duration_value(c.left);
        duration_value(c.right);
      }
    }
    if (m.condition) {
      need(F::MethodPreconditions, "method-condition", m.condition->info);
      da_gd(*m.condition);
    }
    network(m.network);
  }

  void action_duration(const DurationConstraint& d) {
    if (d.conjunction) need(F::DurationInequalities, "duration-conjunction", d.info);
    for (const auto& c : d.conjuncts) {
      if (c.op != CompOp::Eq) need(F::DurationInequalities, "duration-inequality", c.info);
      duration_value(c.right);
    }
  }

  void duration_value(const DurationOperand& v) {
    if (v.kind != DurationOperand::Kind::Value || v.value.empty()) return;
    if (v.value.front().kind != FExp::Kind::Number)
      need(F::NumericFluents, "numeric-duration", v.info);
  }

  void network(const TaskNetwork& n) {
    for (const auto& o : n.orderings) {
      if (o.left.spec || o.right.spec)
        need(F::DurativeActions, "time-decorated-ordering", o.info);
      else if (o.op != CompOp::Lt)
        need(F::DurativeActions, "ordering-comparison", o.info);
    }
    for (const auto& c : n.constraints) {
      using K = ConstraintDef::Kind;
      if (c.kind == K::Equal || c.kind == K::NotEqual) continue;
      need(F::MethodConstraints, std::string(to_string(c.kind)), c.info);
      if (c.kind == K::AtEnd)
        effect(c.effect);
      else
        gd(c.gd);
    }
  }

  void gd(const Gd& g) {
    switch (g.kind) {
      case Gd::Kind::Or:
        need(F::DisjunctivePreconditions, "or", g.info);
        break;
      case Gd::Kind::Not:
        if (g.children.at(0).kind != Gd::Kind::Atom)
          need(F::NegativePreconditions, "not", g.info);
        break;
      case Gd::Kind::Imply:
        need(F::DisjunctivePreconditions, "imply", g.info);
        need(F::NegativePreconditions, "imply", g.info);
        break;
      case Gd::Kind::Exists:
        need(F::ExistentialPreconditions, "exists", g.info);
        break;
      case Gd::Kind::Forall:
        need(F::UniversalPreconditions, "forall", g.info);
        break;
      case Gd::Kind::Compare:
        need(F::NumericFluents, "f-comp", g.info);
        break;
      default:
        break;
    }
    for (const auto& c : g.children) gd(c);
  }

  void effect(const Effect& e) {
    switch (e.kind) {
      case Effect::Kind::Forall:
        need(F::ConditionalEffects, "forall-effect", e.info);
        break;
      case Effect::Kind::When:
        need(F::ConditionalEffects, "when-effect", e.info);
        gd(e.condition.at(0));
        break;
      case Effect::Kind::Assign:
        need(F::NumericFluents, "assign-effect", e.info);
        break;
      default:
        break;
    }
    for (const auto& c : e.children) effect(c);
  }

  void da_gd(const DaGd& g) {
    if (g.kind == DaGd::Kind::Forall) need(F::UniversalPreconditions, "forall", g.info);
    if (g.kind == DaGd::Kind::At || g.kind == DaGd::Kind::OverAll) gd(g.gd);
    for (const auto& c : g.children) da_gd(c);
  }

  void da_effect(const DaEffect& e) {
    switch (e.kind) {
      case DaEffect::Kind::Forall:
        need(F::ConditionalEffects, "forall-effect", e.info);
        break;
      case DaEffect::Kind::When:
        need(F::ConditionalEffects, "when-effect", e.info);
        da_gd(e.condition.at(0));
        break;
      case DaEffect::Kind::Timed:
        if (e.effect.kind == Effect::Kind::Assign) {
          need(F::NumericFluents, "timed-assign", e.info);
          duration_vars(e.effect.operands.at(1));
        } else {
          effect(e.effect);
        }
        break;
      case DaEffect::Kind::Continuous:
        need(F::ContinuousEffects, "continuous-effect", e.info);
        need(F::NumericFluents, "continuous-effect", e.info);
        break;
      default:
        break;
    }
    for (const auto& c : e.children) da_effect(c);
  }

  void duration_vars(const FExp& e) {
    if (e.kind == FExp::Kind::DurationVar)
      need(F::DurationInequalities, "duration-variable", e.info);
    for (const auto& o : e.operands) duration_vars(o);
  }

  const FlagSet& flags_;
};

}  // namespace

std::string_view to_string(RequirementFlag f) {
  for (const auto& [flag, name] : names())
    if (flag == f) return name;
  return "?";
}

const std::vector<RequirementFlag>& all_flags() {
  static const std::vector<RequirementFlag> flags = [] {
    std::vector<RequirementFlag> v;
    for (const auto& n : names()) v.push_back(n.first);
    return v;
  }();
  return flags;
}

std::optional<RequirementFlag> flag_from_string(std::string_view name) {
  if (!name.empty() && name.front() == ':') name.remove_prefix(1);
  for (const auto& [flag, n] : names())
    if (n == name) return flag;
  return std::nullopt;
}

FlagSet closure(const FlagSet& declared) {
  FlagSet out = declared;
  std::vector<F> work(declared.begin(), declared.end());
  while (!work.empty()) {
    F f = work.back();
    work.pop_back();
    auto [lo, hi] = implications().equal_range(f);
    for (auto it = lo; it != hi; ++it)
      if (out.insert(it->second).second) work.push_back(it->second);
  }
  return out;
}

FlagSet read_requirements(const std::vector<Symbol>& keys, Diagnostics& diags) {
  FlagSet out;
  for (const auto& k : keys) {
    if (auto f = flag_from_string(k.name)) {
      out.insert(*f);
    } else {
      diags.push_back({Severity::Error, k.info.span, "unknown-requirement",
                       "unknown requirement flag " + k.info.spelling, "require-key"});
    }
  }
  return out;
}

std::vector<GateViolation> check_gates(const Domain& domain, const Problem* problem,
                                       const FlagSet& declared) {
  FlagSet flags = closure(declared);
  GateWalker w(flags);
  w.domain(domain);
  if (problem) w.problem(*problem);
  return std::move(w.out);
}

std::vector<GateViolation> check_gates(const Domain& domain, const Problem* problem) {
  Diagnostics ignored;
  FlagSet declared;
  if (domain.requirements) declared = read_requirements(*domain.requirements, ignored);
  if (problem && problem->requirements) {
    FlagSet more = read_requirements(*problem->requirements, ignored);
    declared.insert(more.begin(), more.end());
  }
  return check_gates(domain, problem, declared);
}

std::vector<GateViolation> check_problem_gates(const Problem& problem, const FlagSet& declared) {
  FlagSet flags = closure(declared);
  GateWalker w(flags);
  w.problem(problem);
  return std::move(w.out);
}

Diagnostic to_diagnostic(const GateViolation& v, bool strict) {
  return Diagnostic{strict ? Severity::Error : Severity::Warning, v.span, "requirement-gate",
                    v.feature + " requires :" + std::string(to_string(v.required_flag)),
                    "require-def"};
}

}  // namespace hddl
