#include "hddl/validator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "hddl/printer.hpp"

namespace hddl {

using namespace ast;
using FK = FailureKind;

std::string_view to_string(FailureKind k) {
  switch (k) {
    case FK::UnsatisfiedStartCond: return "unsatisfied-start-cond";
    case FK::UnsatisfiedOverallCond: return "unsatisfied-overall-cond";
    case FK::UnsatisfiedEndCond: return "unsatisfied-end-cond";
    case FK::DurationViolation: return "duration-violation";
    case FK::MutexEffect: return "mutex-effect";
    case FK::OrderingViolation: return "ordering-violation";
    case FK::MethodDurationViolation: return "method-duration-violation";
    case FK::MethodConstraintViolation: return "method-constraint-violation";
    case FK::GoalUnsatisfied: return "goal-unsatisfied";
    case FK::UnclaimedAction: return "unclaimed-action";
    case FK::BadDecomposition: return "bad-decomposition";
    case FK::InvalidEffect: return "invalid-effect";
  }
  return "?";
}

namespace {

EvalContext context(const Model& m, const ValidatorOptions& o) {
  EvalContext c;
  c.symbols = &m.symbols;
  c.eps_num = o.eps_num;
  return c;
}

const TypedList& params_of(const Structure& s) {
  return std::visit([](const auto& x) -> const TypedList& { return x.params; }, s);
}

std::string app_text(const std::string& name, const std::vector<std::string>& args) {
  return atom_text(make_atom(name, args));
}

std::string describe(const PlanAction& a) { return app_text(a.name, a.args); }

// All extensions of `b` binding the typed variables to objects.
std::vector<Bindings> assignments(const TypedList& vars, const Bindings& b, const SymbolTable& st) {
  std::vector<Bindings> out{b};
  for (const auto& v : vars) {
    std::vector<Bindings> next;
    for (const auto& obj : st.objects_of(st.expand(v.type)))
      for (auto partial : out) {
        partial[v.name.name] = obj;
        next.push_back(std::move(partial));
      }
    out = std::move(next);
  }
  return out;
}

// Binds schema terms to ground arguments; false on a clash.
bool unify(const std::vector<Term>& schema, const std::vector<std::string>& args, Bindings& b) {
  if (schema.size() != args.size()) return false;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const Term& t = schema[i];
    if (!t.is_variable) {
      if (t.name != args[i]) return false;
      continue;
    }
    auto [it, fresh] = b.emplace(t.name, args[i]);
    if (!fresh && it->second != args[i]) return false;
  }
  return true;
}

// Checks that every parameter is bound to a declared object of a
// compatible type; returns a message for the first problem.
std::optional<std::string> check_params(const TypedList& params, const Bindings& b,
                                        const SymbolTable& st) {
  for (const auto& p : params) {
    auto it = b.find(p.name.name);
    if (it == b.end()) return "parameter " + p.name.name + " is not bound";
    auto obj = st.objects.find(it->second);
    if (obj == st.objects.end()) return "unknown object " + it->second;
    if (!st.compatible(obj->second, st.expand(p.type)))
      return "object " + it->second + " does not fit the type of " + p.name.name;
  }
  return std::nullopt;
}

struct NumericUpdate {
  GroundAtom key;
  AssignOp op;
  double value;
};

// Ground effects of one event source.
struct EffectSet {
  std::set<GroundAtom> adds;
  std::set<GroundAtom> dels;
  std::vector<NumericUpdate> updates;
};

void collect_effect(const Effect& e, const State& pre, const Bindings& b, const EvalContext& ctx,
                    EffectSet& out) {
  switch (e.kind) {
    case Effect::Kind::Empty:
      return;
    case Effect::Kind::And:
      for (const auto& c : e.children) collect_effect(c, pre, b, ctx, out);
      return;
    case Effect::Kind::Forall:
      for (const auto& inner : assignments(e.variables, b, *ctx.symbols))
        collect_effect(e.children.at(0), pre, inner, ctx, out);
      return;
    case Effect::Kind::When:
      if (eval_gd(e.condition.at(0), pre, b, ctx)) collect_effect(e.children.at(0), pre, b, ctx, out);
      return;
    case Effect::Kind::Add:
      out.adds.insert(ground(e.atom, b));
      return;
    case Effect::Kind::Delete:
      out.dels.insert(ground(e.atom, b));
      return;
    case Effect::Kind::Assign:
      out.updates.push_back({ground_head(e.operands.at(0), b), e.assign,
                             eval_fexp(e.operands.at(1), pre, b, ctx)});
      return;
  }
}

// Timed-effect conditions are read against the pre-event state whatever
// their time annotation.
bool da_condition_holds(const DaGd& g, const State& pre, const Bindings& b, const EvalContext& ctx) {
  switch (g.kind) {
    case DaGd::Kind::Empty:
      return true;
    case DaGd::Kind::And:
      for (const auto& c : g.children)
        if (!da_condition_holds(c, pre, b, ctx)) return false;
      return true;
    case DaGd::Kind::Forall:
      for (const auto& inner : assignments(g.variables, b, *ctx.symbols))
        if (!da_condition_holds(g.children.at(0), pre, inner, ctx)) return false;
      return true;
    case DaGd::Kind::At:
    case DaGd::Kind::OverAll:
      return eval_gd(g.gd, pre, b, ctx);
  }
  return false;
}

void collect_da_effect(const DaEffect& e, TimeSpec phase, const State& pre, const Bindings& b,
                       const EvalContext& ctx, EffectSet& out) {
  switch (e.kind) {
    case DaEffect::Kind::Empty:
      return;
    case DaEffect::Kind::And:
      for (const auto& c : e.children) collect_da_effect(c, phase, pre, b, ctx, out);
      return;
    case DaEffect::Kind::Forall:
      for (const auto& inner : assignments(e.variables, b, *ctx.symbols))
        collect_da_effect(e.children.at(0), phase, pre, inner, ctx, out);
      return;
    case DaEffect::Kind::When: {
      EffectSet body;
      collect_da_effect(e.children.at(0), phase, pre, b, ctx, body);
      if (body.adds.empty() && body.dels.empty() && body.updates.empty()) return;
      if (!da_condition_holds(e.condition.at(0), pre, b, ctx)) return;
      out.adds.insert(body.adds.begin(), body.adds.end());
      out.dels.insert(body.dels.begin(), body.dels.end());
      out.updates.insert(out.updates.end(), body.updates.begin(), body.updates.end());
      return;
    }
    case DaEffect::Kind::Timed:
      if (e.time == phase) collect_effect(e.effect, pre, b, ctx, out);
      return;
    case DaEffect::Kind::Continuous:
      if (phase == TimeSpec::Start) throw EvalError("continuous effects are not supported");
      return;
  }
}

enum class Phase { Til, Start, End, Instant };

struct Event {
  double time;
  Phase phase;
  std::size_t index;  // action index, or init element index for a TIL
};

struct Source {
  std::string name;
  std::uint32_t line;
  EffectSet effects;
};

}  // namespace

std::vector<ResolvedAction> resolve_actions(const Model& model, const TimedPlan& plan,
                                            std::vector<Failure>& failures) {
  std::vector<ResolvedAction> out(plan.actions.size());
  for (std::size_t k = 0; k < plan.actions.size(); ++k) {
    const PlanAction& a = plan.actions[k];
    const Structure* s = model.structure(a.name);
    if (!s || !(std::holds_alternative<Action>(*s) || std::holds_alternative<DurativeAction>(*s))) {
      failures.push_back({FK::BadDecomposition, a.line, a.start, "unknown action " + a.name});
      continue;
    }
    const TypedList& params = params_of(*s);
    if (params.size() != a.args.size()) {
      failures.push_back({FK::BadDecomposition, a.line, a.start,
                          describe(a) + " has " + std::to_string(a.args.size()) +
                              " arguments, the action takes " + std::to_string(params.size())});
      continue;
    }
    Bindings b;
    for (std::size_t i = 0; i < params.size(); ++i) b[params[i].name.name] = a.args[i];
    if (auto msg = check_params(params, b, model.symbols)) {
      failures.push_back({FK::BadDecomposition, a.line, a.start, describe(a) + ": " + *msg});
      continue;
    }
    out[k] = {s, std::move(b), std::holds_alternative<DurativeAction>(*s)};
  }
  return out;
}

State initial_state(const Model& model) {
  State s;
  for (const auto& e : model.problem.init) {
    if (e.kind == InitElement::Kind::Literal) {
      GroundAtom a = ground(e.atom, {});
      if (e.negated)
        s.atoms.erase(a);
      else
        s.atoms.insert(a);
    } else if (e.kind == InitElement::Kind::FunctionInit) {
      std::vector<std::string> args;
      for (const auto& x : e.function_args) args.push_back(x.name);
      s.fluents[make_atom(e.function.name, args)] = e.value.value;
    }
  }
  return s;
}

TimedTrajectory build_trajectory(const Model& model, const TimedPlan& plan,
                                 const std::vector<ResolvedAction>& resolved,
                                 const ValidatorOptions& opts, std::vector<Failure>& failures) {
  EvalContext ctx = context(model, opts);
  TimedTrajectory traj;
  traj.steps.push_back({initial_state(model), 0.0});

  std::vector<Event> events;
  const auto& init = model.problem.init;
  for (std::size_t i = 0; i < init.size(); ++i)
    if (init[i].kind == InitElement::Kind::Timed && init[i].time.value >= 0.0)
      events.push_back({init[i].time.value, Phase::Til, i});
  for (std::size_t k = 0; k < resolved.size(); ++k) {
    if (!resolved[k].schema) continue;
    const PlanAction& a = plan.actions[k];
    if (resolved[k].durative) {
      events.push_back({a.start, Phase::Start, k});
      events.push_back({a.end(), Phase::End, k});
    } else {
      events.push_back({a.start, Phase::Instant, k});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& x, const Event& y) { return x.time < y.time; });

  std::size_t i = 0;
  while (i < events.size()) {
    const double t = events[i].time;
    std::size_t j = i;
    while (j < events.size() && events[j].time <= t + opts.eps_num) ++j;
    const State pre = traj.steps.back().state;

    std::vector<Source> sources;
    for (std::size_t k = i; k < j; ++k) {
      const Event& ev = events[k];
      Source src;
      if (ev.phase == Phase::Til) {
        const InitElement& e = init[ev.index];
        src.name = "timed initial literal at " + format_number(e.time.value);
        src.line = 0;
        (e.negated ? src.effects.dels : src.effects.adds).insert(ground(e.atom, {}));
        sources.push_back(std::move(src));
        continue;
      }
      const PlanAction& a = plan.actions[ev.index];
      const ResolvedAction& r = resolved[ev.index];
      src.name = describe(a) + (ev.phase == Phase::Start ? " start"
                                : ev.phase == Phase::End ? " end"
                                                         : "");
      src.line = a.line;
      EvalContext actx = ctx;
      if (r.durative) actx.duration = a.duration.value_or(0.0);
      try {
        if (const auto* da = std::get_if<DurativeAction>(r.schema)) {
          if (da->effect)
            collect_da_effect(*da->effect, ev.phase == Phase::Start ? TimeSpec::Start : TimeSpec::End,
                              pre, r.bindings, actx, src.effects);
        } else if (const auto* act = std::get_if<Action>(r.schema)) {
          if (act->effect) collect_effect(*act->effect, pre, r.bindings, actx, src.effects);
        }
      } catch (const EvalError& err) {
        failures.push_back({FK::InvalidEffect, a.line, t, src.name + ": " + err.what()});
        continue;
      }
      sources.push_back(std::move(src));
    }

    // Two different sources may not disagree on an atom or touch the same
    // fluent non-additively at one timestamp.
    std::set<GroundAtom> reported;
    for (const auto& s : sources)
      for (const auto& a : s.effects.adds)
        for (const auto& o : sources) {
          if (&o == &s || !o.effects.dels.count(a) || !reported.insert(a).second) continue;
          failures.push_back({FK::MutexEffect, s.line ? s.line : o.line, t,
                              atom_text(a) + " is added by " + s.name + " and deleted by " +
                                  o.name + " at t=" + format_number(t)});
        }
    std::map<GroundAtom, std::vector<std::pair<const Source*, AssignOp>>> fluent_use;
    for (const auto& s : sources)
      for (const auto& u : s.effects.updates) fluent_use[u.key].push_back({&s, u.op});
    for (const auto& [key, uses] : fluent_use) {
      bool shared = false, exclusive = false;
      for (const auto& [src, op] : uses) {
        if (src != uses.front().first) shared = true;
        if (op != AssignOp::Increase && op != AssignOp::Decrease) exclusive = true;
      }
      if (shared && exclusive)
        failures.push_back({FK::MutexEffect, uses.front().first->line, t,
                            atom_text(key) + " is updated by several sources at t=" +
                                format_number(t)});
    }

    State next = pre;
    for (const auto& s : sources)
      for (const auto& a : s.effects.dels) next.atoms.erase(a);
    for (const auto& s : sources)
      for (const auto& a : s.effects.adds) next.atoms.insert(a);
    for (const auto& s : sources)
      for (const auto& u : s.effects.updates) {
        auto it = next.fluents.find(u.key);
        if (u.op == AssignOp::Assign) {
          next.fluents[u.key] = u.value;
          continue;
        }
        if (it == next.fluents.end()) {
          failures.push_back({FK::InvalidEffect, s.line, t,
                              s.name + " updates unassigned fluent " + atom_text(u.key)});
          continue;
        }
        switch (u.op) {
          case AssignOp::Increase: it->second += u.value; break;
          case AssignOp::Decrease: it->second -= u.value; break;
          case AssignOp::ScaleUp: it->second *= u.value; break;
          case AssignOp::ScaleDown:
            if (u.value == 0.0)
              failures.push_back({FK::InvalidEffect, s.line, t, s.name + " scales down by zero"});
            else
              it->second /= u.value;
            break;
          case AssignOp::Assign: break;
        }
      }
    traj.steps.push_back({std::move(next), t});
    i = j;
  }
  return traj;
}

std::vector<Failure> check_actions(const Model& model, const TimedPlan& plan,
                                   const std::vector<ResolvedAction>& resolved,
                                   const TimedTrajectory& traj, const ValidatorOptions& opts) {
  std::vector<Failure> out;
  EvalContext ctx = context(model, opts);
  const double eps = opts.eps_num;
  for (std::size_t k = 0; k < resolved.size(); ++k) {
    const ResolvedAction& r = resolved[k];
    if (!r.schema) continue;
    const PlanAction& a = plan.actions[k];
    const double s = a.start;
    const double e = a.end();

    if (const auto* act = std::get_if<Action>(r.schema)) {
      if (a.duration && *a.duration > eps)
        out.push_back({FK::DurationViolation, a.line, s,
                       describe(a) + " is instantaneous but was given a duration"});
      if (!act->precondition) continue;
      try {
        if (!eval_gd(*act->precondition, traj.before(s, eps), r.bindings, ctx))
          out.push_back({FK::UnsatisfiedStartCond, a.line, s,
                         "precondition " + to_text(*act->precondition) + " of " + describe(a) +
                             " does not hold at t=" + format_number(s)});
      } catch (const EvalError& err) {
        out.push_back({FK::UnsatisfiedStartCond, a.line, s, describe(a) + ": " + err.what()});
      }
      continue;
    }

    const auto& da = std::get<DurativeAction>(*r.schema);
    if (!a.duration) {
      out.push_back({FK::DurationViolation, a.line, s, describe(a) + " has no duration"});
    } else {
      EvalContext dctx = ctx;
      try {
        if (!check_action_duration(da.duration, *a.duration, traj.before(s, eps), r.bindings, dctx,
                                   &traj.before(e, eps)))
          out.push_back({FK::DurationViolation, a.line, s,
                         "duration " + format_number(*a.duration) + " of " + describe(a) +
                             " violates " + to_text(da.duration)});
      } catch (const EvalError& err) {
        out.push_back({FK::DurationViolation, a.line, s, describe(a) + ": " + err.what()});
      }
    }
    if (!da.condition) continue;

    EvalContext cctx = ctx;
    cctx.duration = a.duration.value_or(0.0);
    std::function<void(const DaGd&, const Bindings&)> walk = [&](const DaGd& g,
                                                                  const Bindings& b) {
      switch (g.kind) {
        case DaGd::Kind::Empty:
          return;
        case DaGd::Kind::And:
          for (const auto& c : g.children) walk(c, b);
          return;
        case DaGd::Kind::Forall:
          for (const auto& inner : assignments(g.variables, b, model.symbols))
            walk(g.children.at(0), inner);
          return;
        case DaGd::Kind::At:
        case DaGd::Kind::OverAll:
          break;
      }
      auto fail = [&](FK kind, double t, const std::string& why) {
        out.push_back({kind, a.line, t,
                       to_text(g) + " of " + describe(a) + " " + why + " at t=" + format_number(t)});
      };
      try {
        if (g.kind == DaGd::Kind::At && g.time == TimeSpec::Start) {
          if (!eval_gd(g.gd, traj.before(s, eps), b, cctx))
            fail(FK::UnsatisfiedStartCond, s, "does not hold");
        } else if (g.kind == DaGd::Kind::At) {
          if (!eval_gd(g.gd, traj.before(e, eps), b, cctx))
            fail(FK::UnsatisfiedEndCond, e, "does not hold");
        } else if (e > s + eps) {
          for (std::size_t i = traj.index_at(s, eps); i < traj.steps.size(); ++i) {
            double t = traj.steps[i].time;
            if (t >= e - eps) break;
            if (!eval_gd(g.gd, traj.steps[i].state, b, cctx)) {
              fail(FK::UnsatisfiedOverallCond, std::max(t, s), "does not hold");
              break;
            }
          }
        }
      } catch (const EvalError& err) {
        FK kind = g.kind == DaGd::Kind::OverAll   ? FK::UnsatisfiedOverallCond
                  : g.time == TimeSpec::Start     ? FK::UnsatisfiedStartCond
                                                  : FK::UnsatisfiedEndCond;
        out.push_back({kind, a.line, s, describe(a) + ": " + err.what()});
      }
    };
    walk(*da.condition, r.bindings);
  }
  return out;
}

namespace {

struct NodeResult {
  bool ok = false;
  std::string task;
  std::vector<std::string> args;
  /// Absent for nodes with no primitive descendant (empty methods).
  std::optional<TaskInterval> interval;
  double leaf_sum = 0.0;
};

class DecompositionChecker {
 public:
  DecompositionChecker(const Model& m, const TimedPlan& p, const TimedTrajectory& t,
                       const ValidatorOptions& o)
      : model_(m), plan_(p), traj_(t), opts_(o), ctx_(context(m, o)),
        claims_(p.actions.size(), 0) {}

  std::vector<Failure> run() {
    roots();
    bool structural = false;
    for (const auto& f : out_)
      if (f.kind == FK::BadDecomposition) structural = true;
    for (std::size_t k = 0; k < claims_.size(); ++k) {
      const PlanAction& a = plan_.actions[k];
      if (claims_[k] > 1)
        out_.push_back({FK::BadDecomposition, a.line, a.start,
                        "action " + std::to_string(k) + " " + describe(a) +
                            " is claimed by several leaves"});
      else if (claims_[k] == 0 && !structural)
        out_.push_back({FK::UnclaimedAction, a.line, a.start,
                        "action " + std::to_string(k) + " " + describe(a) +
                            " is not part of the decomposition"});
    }
    return std::move(out_);
  }

 private:
  void bad(std::uint32_t line, std::string why) {
    out_.push_back({FK::BadDecomposition, line, std::nullopt, std::move(why)});
  }

  void roots() {
    const InitialTaskNetwork* htn = model_.problem.htn ? &*model_.problem.htn : nullptr;
    std::vector<NodeResult> results;
    bool ok = true;
    for (const auto& id : plan_.roots) {
      results.push_back(node(id, 0));
      ok = ok && results.back().ok;
    }
    if (!htn || !ok) return;
    const TaskNetwork& net = htn->network;
    if (results.size() != net.subtasks.size()) {
      bad(0, "the plan has " + std::to_string(results.size()) +
                 " root tasks, the initial task network has " +
                 std::to_string(net.subtasks.size()));
      return;
    }
    Bindings b(plan_.htn_bindings.begin(), plan_.htn_bindings.end());
    if (!match_children(net, results, b, 0, "the initial task network")) return;
    if (htn->params)
      if (auto msg = check_params(*htn->params, b, model_.symbols)) {
        bad(0, "initial task network: " + *msg);
        return;
      }
    network(net, results, b, 0, "the initial task network");
  }

  NodeResult node(const std::string& id, std::uint32_t parent_line) {
    NodeResult r;
    const DecompositionNode* n = plan_.node(id);
    if (!n) {
      bad(parent_line, "node " + id + " is referenced but not defined");
      return r;
    }
    if (!visited_.insert(id).second) {
      bad(n->line, "node " + id + " appears more than once in the tree");
      return r;
    }
    if (n->leaf) {
      if (n->action >= plan_.actions.size()) {
        bad(n->line, "node " + id + " refers to action " + std::to_string(n->action) +
                         " but the plan has " + std::to_string(plan_.actions.size()));
        return r;
      }
      const PlanAction& a = plan_.actions[n->action];
      ++claims_[n->action];
      r.ok = true;
      r.task = a.name;
      r.args = a.args;
      r.interval = TaskInterval{id, a.start, a.end()};
      r.leaf_sum = a.end() - a.start;
      return r;
    }

    const Structure* s = model_.structure(n->method);
    const TaskApp* task = nullptr;
    const TaskNetwork* net = nullptr;
    if (const auto* m = s ? std::get_if<Method>(s) : nullptr) {
      task = &m->task;
      net = &m->network;
    } else if (const auto* dm = s ? std::get_if<DurativeMethod>(s) : nullptr) {
      task = &dm->task;
      net = &dm->network;
    }
    if (!task) {
      bad(n->line, "unknown method " + n->method);
      return r;
    }
    if (!model_.symbols.tasks.count(n->task)) {
      bad(n->line, "node " + id + ": " + n->task + " is not an abstract task");
      return r;
    }
    Bindings b;
    if (task->name.name != n->task || !unify(task->args, n->args, b)) {
      bad(n->line, "method " + n->method + " decomposes " + to_text(*task) + ", not " +
                       app_text(n->task, n->args));
      return r;
    }
    if (n->children.size() != net->subtasks.size()) {
      bad(n->line, "method " + n->method + " has " + std::to_string(net->subtasks.size()) +
                       " subtasks but node " + id + " lists " +
                       std::to_string(n->children.size()) + " children");
      return r;
    }
    std::vector<NodeResult> children;
    bool ok = true;
    for (const auto& c : n->children) {
      children.push_back(node(c, n->line));
      ok = ok && children.back().ok;
    }
    if (!ok) return r;
    std::string where = "method " + n->method + " (node " + id + ")";
    if (!match_children(*net, children, b, n->line, where)) return r;
    if (auto msg = check_params(params_of(*s), b, model_.symbols)) {
      bad(n->line, where + ": " + *msg);
      return r;
    }

    r.ok = true;
    r.task = n->task;
    r.args = n->args;
    for (const auto& c : children) {
      r.leaf_sum += c.leaf_sum;
      if (!c.interval) continue;
      if (!r.interval) {
        r.interval = TaskInterval{id, c.interval->start, c.interval->end};
      } else {
        r.interval->start = std::min(r.interval->start, c.interval->start);
        r.interval->end = std::max(r.interval->end, c.interval->end);
      }
    }
    IntervalMap labels = network(*net, children, b, n->line, where);
    if (r.interval) method_checks(*s, *r.interval, r.leaf_sum, labels, b, n->line, where);
    return r;
  }

  // Children against the network's subtask schemas, extending `b`.
  bool match_children(const TaskNetwork& net, const std::vector<NodeResult>& children, Bindings& b,
                      std::uint32_t line, const std::string& where) {
    for (std::size_t i = 0; i < children.size(); ++i) {
      const TaskApp& schema = net.subtasks[i].task;
      const NodeResult& c = children[i];
      if (schema.name.name != c.task || !unify(schema.args, c.args, b)) {
        bad(line, where + ": subtask " + std::to_string(i) + " should be " + to_text(schema) +
                      ", the plan has " + app_text(c.task, c.args));
        return false;
      }
    }
    return true;
  }

  // Orderings and constraints of a network over its children's intervals.
  IntervalMap network(const TaskNetwork& net, const std::vector<NodeResult>& children,
                      const Bindings& b, std::uint32_t line, const std::string& where) {
    IntervalMap labels;
    for (std::size_t i = 0; i < children.size(); ++i)
      if (net.subtasks[i].label && children[i].interval)
        labels[net.subtasks[i].label->name] = *children[i].interval;
    const double eps = opts_.eps_num;

    if (net.ordered) {
      std::optional<TaskInterval> prev;
      for (const auto& c : children) {
        if (!c.interval) continue;
        if (prev && prev->end > c.interval->start + eps)
          out_.push_back({FK::OrderingViolation, line, c.interval->start,
                          where + ": ordered subtask " + c.interval->task + " starts at " +
                              format_number(c.interval->start) + " before " + prev->task +
                              " ends at " + format_number(prev->end)});
        prev = c.interval;
      }
    }
    for (const auto& o : net.orderings) {
      auto l = labels.find(o.left.task.name);
      auto r = labels.find(o.right.task.name);
      if (l == labels.end() || r == labels.end()) continue;
      bool holds = false;
      double lv, rv;
      if (!o.left.spec) {
        lv = l->second.end;
        rv = r->second.start;
        holds = lv <= rv + eps;
      } else {
        lv = *o.left.spec == TimeSpec::Start ? l->second.start : l->second.end;
        rv = *o.right.spec == TimeSpec::Start ? r->second.start : r->second.end;
        switch (o.op) {
          case CompOp::Lt: holds = rv - lv >= opts_.eps_t - eps; break;
          case CompOp::Le: holds = lv <= rv + eps; break;
          case CompOp::Eq: holds = std::fabs(lv - rv) <= eps; break;
          case CompOp::Ge: holds = lv >= rv - eps; break;
          case CompOp::Gt: holds = lv - rv >= opts_.eps_t - eps; break;
        }
      }
      if (!holds)
        out_.push_back({FK::OrderingViolation, line, std::nullopt,
                        where + ": ordering " + to_text(o) + " fails (" + format_number(lv) +
                            " vs " + format_number(rv) + ")"});
    }
    for (const auto& c : net.constraints) {
      bool missing = false;
      for (const auto& t : c.tasks) missing = missing || !labels.count(t.name);
      if (missing) continue;
      try {
        if (!holds_constraint(c, traj_, labels, b, ctx_))
          out_.push_back({FK::MethodConstraintViolation, line, std::nullopt,
                          where + ": constraint " + to_text(c) + " is violated"});
      } catch (const EvalError& err) {
        out_.push_back({FK::MethodConstraintViolation, line, std::nullopt,
                        where + ": constraint " + to_text(c) + ": " + err.what()});
      }
    }
    return labels;
  }

  static std::string lengths(const DurationConstraint& c, const TaskInterval& iv,
                             const IntervalMap& labels) {
    std::string out = " (method lasts " + format_number(iv.length());
    std::set<std::string> seen;
    for (const auto& sc : c.conjuncts)
      for (const auto* o : {&sc.left, &sc.right})
        if (o->kind == DurationOperand::Kind::Task && seen.insert(o->task.name).second) {
          auto it = labels.find(o->task.name);
          if (it != labels.end())
            out += ", " + o->task.name + " lasts " + format_number(it->second.length());
        }
    return out + ")";
  }

  void method_checks(const Structure& s, const TaskInterval& iv, double leaf_sum,
                     const IntervalMap& labels, const Bindings& b, std::uint32_t line,
                     const std::string& where) {
    const double eps = opts_.eps_num;
    if (const auto* m = std::get_if<Method>(&s)) {
      if (!m->precondition) return;
      try {
        if (!eval_gd(*m->precondition, traj_.before(iv.start, eps), b, ctx_))
          out_.push_back({FK::MethodConstraintViolation, line, iv.start,
                          where + ": precondition " + to_text(*m->precondition) +
                              " does not hold"});
      } catch (const EvalError& err) {
        out_.push_back({FK::MethodConstraintViolation, line, iv.start, where + ": " + err.what()});
      }
      return;
    }
    const auto& dm = std::get<DurativeMethod>(s);
    try {
      if (dm.duration) {
        if (!check_method_duration(*dm.duration, iv, labels, traj_.before(iv.start, eps), b, ctx_))
          out_.push_back({FK::MethodDurationViolation, line, iv.start,
                          where + ": " + to_text(*dm.duration) + " does not hold" +
                              lengths(*dm.duration, iv, labels)});
      } else if (opts_.mode == MethodDurationMode::Sum && std::fabs(iv.length() - leaf_sum) > eps) {
        out_.push_back({FK::MethodDurationViolation, line, iv.start,
                        where + ": lasts " + format_number(iv.length()) +
                            " but its primitive tasks sum to " + format_number(leaf_sum)});
      }
    } catch (const EvalError& err) {
      out_.push_back({FK::MethodDurationViolation, line, iv.start, where + ": " + err.what()});
    }
    if (!dm.condition) return;
    EvalContext cctx = ctx_;
    cctx.duration = iv.length();
    std::function<void(const DaGd&, const Bindings&)> walk = [&](const DaGd& g,
                                                                  const Bindings& gb) {
      if (g.kind == DaGd::Kind::And) {
        for (const auto& c : g.children) walk(c, gb);
        return;
      }
      if (g.kind == DaGd::Kind::Forall) {
        for (const auto& inner : assignments(g.variables, gb, model_.symbols))
          walk(g.children.at(0), inner);
        return;
      }
      if (g.kind == DaGd::Kind::Empty) return;
      bool holds = true;
      try {
        if (g.kind == DaGd::Kind::At) {
          double t = g.time == TimeSpec::Start ? iv.start : iv.end;
          holds = eval_gd(g.gd, traj_.before(t, eps), gb, cctx);
        } else {
          for (std::size_t i = traj_.index_at(iv.start, eps);
               holds && i < traj_.steps.size() && traj_.steps[i].time < iv.end - eps; ++i)
            holds = eval_gd(g.gd, traj_.steps[i].state, gb, cctx);
        }
      } catch (const EvalError&) {
        holds = false;
      }
      if (!holds)
        out_.push_back({FK::MethodConstraintViolation, line, iv.start,
                        where + ": condition " + to_text(g) + " does not hold"});
    };
    walk(*dm.condition, b);
  }

  const Model& model_;
  const TimedPlan& plan_;
  const TimedTrajectory& traj_;
  const ValidatorOptions& opts_;
  EvalContext ctx_;
  std::vector<int> claims_;
  std::set<std::string> visited_;
  std::vector<Failure> out_;
};

}  // namespace

std::vector<Failure> check_decomposition(const Model& model, const TimedPlan& plan,
                                         const TimedTrajectory& traj,
                                         const ValidatorOptions& opts) {
  if (!plan.has_decomposition) return {};
  return DecompositionChecker(model, plan, traj, opts).run();
}

GoalAndMetric check_goal_and_metric(const Model& model, const TimedPlan& plan,
                                    const TimedTrajectory& traj, const ValidatorOptions& opts) {
  GoalAndMetric r;
  for (const auto& a : plan.actions) r.makespan = std::max(r.makespan, a.end());
  EvalContext ctx = context(model, opts);
  ctx.total_time = r.makespan;
  try {
    if (model.problem.goal) r.goal = eval_gd(*model.problem.goal, traj.final(), {}, ctx);
  } catch (const EvalError& err) {
    r.goal = false;
    r.error = err.what();
  }
  try {
    if (model.problem.metric) r.metric = eval_fexp(model.problem.metric->expr, traj.final(), {}, ctx);
  } catch (const EvalError& err) {
    if (!r.error) r.error = std::string("metric: ") + err.what();
  }
  return r;
}

ValidationReport validate(const Model& model, const TimedPlan& plan, const ValidatorOptions& opts) {
  ValidationReport rep;
  auto resolved = resolve_actions(model, plan, rep.failures);
  rep.trajectory = build_trajectory(model, plan, resolved, opts, rep.failures);
  for (auto& f : check_actions(model, plan, resolved, rep.trajectory, opts))
    rep.failures.push_back(std::move(f));
  for (auto& f : check_decomposition(model, plan, rep.trajectory, opts))
    rep.failures.push_back(std::move(f));
  GoalAndMetric gm = check_goal_and_metric(model, plan, rep.trajectory, opts);
  if (!gm.goal)
    rep.failures.push_back({FK::GoalUnsatisfied, 0, std::nullopt,
                            "goal " + (model.problem.goal ? to_text(*model.problem.goal) : "") +
                                " does not hold in the final state" +
                                (gm.error ? " (" + *gm.error + ")" : "")});
  rep.metric = gm.metric;
  rep.makespan = gm.makespan;
  rep.valid = rep.failures.empty();
  return rep;
}

std::string render_text(const ValidationReport& r) {
  std::string out = std::string("verdict: ") + (r.valid ? "valid" : "invalid") + "\n";
  out += "makespan: " + format_number(r.makespan) + "\n";
  if (r.metric) out += "metric: " + format_number(*r.metric) + "\n";
  for (const auto& f : r.failures) {
    out += "failure: " + std::string(to_string(f.kind));
    if (f.line) out += " (plan line " + std::to_string(f.line) + ")";
    if (f.time) out += " t=" + format_number(*f.time);
    out += ": " + f.explanation + "\n";
  }
  return out;
}

nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json j;
  j["verdict"] = r.valid ? "valid" : "invalid";
  j["makespan"] = r.makespan;
  j["metric"] = r.metric ? nlohmann::json(*r.metric) : nlohmann::json(nullptr);
  j["failures"] = nlohmann::json::array();
  for (const auto& f : r.failures) {
    nlohmann::json x;
    x["kind"] = to_string(f.kind);
    x["line"] = f.line;
    x["time"] = f.time ? nlohmann::json(*f.time) : nlohmann::json(nullptr);
    x["explanation"] = f.explanation;
    j["failures"].push_back(std::move(x));
  }
  j["trajectory"] = nlohmann::json::array();
  for (const auto& s : r.trajectory.steps) {
    nlohmann::json x;
    x["time"] = s.time;
    x["atoms"] = nlohmann::json::array();
    for (const auto& a : s.state.atoms) x["atoms"].push_back(atom_text(a));
    x["fluents"] = nlohmann::json::object();
    for (const auto& [k, v] : s.state.fluents) x["fluents"][atom_text(k)] = v;
    j["trajectory"].push_back(std::move(x));
  }
  return j;
}

}  // namespace hddl
