#include "hddl/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hddl {

using namespace ast;

GroundAtom make_atom(const std::string& name, const std::vector<std::string>& args) {
  std::string out = name;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

std::string atom_text(const GroundAtom& a) { return "(" + a + ")"; }

bool compare(CompOp op, double a, double b, double eps) {
  switch (op) {
    case CompOp::Lt: return a < b - eps;
    case CompOp::Le: return a <= b + eps;
    case CompOp::Eq: return std::fabs(a - b) <= eps;
    case CompOp::Ge: return a >= b - eps;
    case CompOp::Gt: return a > b + eps;
  }
  return false;
}

std::string resolve(const Term& t, const Bindings& b) {
  if (!t.is_variable) return t.name;
  auto it = b.find(t.name);
  if (it == b.end()) throw EvalError("unbound variable " + t.name);
  return it->second;
}

namespace {

std::vector<std::string> resolve_all(const std::vector<Term>& ts, const Bindings& b) {
  std::vector<std::string> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(resolve(t, b));
  return out;
}

// Calls f once per assignment of the typed variables to objects; stops as
// soon as f returns `stop_on`. Returns true when it stopped early.
bool each_assignment(const TypedList& vars, const Bindings& b, const EvalContext& ctx,
                     bool stop_on, const std::function<bool(const Bindings&)>& f) {
  if (!ctx.symbols) throw EvalError("quantifier evaluated without a symbol table");
  std::vector<std::vector<std::string>> domains;
  for (const auto& v : vars) {
    TypeSet t = v.type ? ctx.symbols->expand(v.type) : TypeSet{"object"};
    domains.push_back(ctx.symbols->objects_of(t));
    if (domains.back().empty()) return false;
  }
  std::vector<std::size_t> idx(vars.size(), 0);
  Bindings inner = b;
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) inner[vars[i].name.name] = domains[i][idx[i]];
    if (f(inner) == stop_on) return true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == domains[k].size()) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

}  // namespace

GroundAtom ground(const AtomicFormula& a, const Bindings& b) {
  return make_atom(a.predicate.name, resolve_all(a.args, b));
}

GroundAtom ground_head(const FExp& head, const Bindings& b) {
  return make_atom(head.function.name, resolve_all(head.args, b));
}

bool eval_gd(const Gd& gd, const State& s, const Bindings& b, const EvalContext& ctx) {
  switch (gd.kind) {
    case Gd::Kind::Empty:
      return true;
    case Gd::Kind::Atom:
      return s.atoms.count(ground(gd.atom, b)) > 0;
    case Gd::Kind::And:
      for (const auto& c : gd.children)
        if (!eval_gd(c, s, b, ctx)) return false;
      return true;
    case Gd::Kind::Or:
      for (const auto& c : gd.children)
        if (eval_gd(c, s, b, ctx)) return true;
      return false;
    case Gd::Kind::Not:
      return !eval_gd(gd.children.at(0), s, b, ctx);
    case Gd::Kind::Imply:
      return !eval_gd(gd.children.at(0), s, b, ctx) || eval_gd(gd.children.at(1), s, b, ctx);
    case Gd::Kind::Exists:
      return each_assignment(gd.variables, b, ctx, true, [&](const Bindings& inner) {
        return eval_gd(gd.children.at(0), s, inner, ctx);
      });
    case Gd::Kind::Forall:
      return !each_assignment(gd.variables, b, ctx, false, [&](const Bindings& inner) {
        return eval_gd(gd.children.at(0), s, inner, ctx);
      });
    case Gd::Kind::Equal:
      return resolve(gd.left, b) == resolve(gd.right, b);
    case Gd::Kind::Compare:
      return compare(gd.comp, eval_fexp(gd.sides.at(0), s, b, ctx),
                     eval_fexp(gd.sides.at(1), s, b, ctx), ctx.eps_num);
  }
  return false;
}

double eval_fexp(const FExp& e, const State& s, const Bindings& b, const EvalContext& ctx) {
  switch (e.kind) {
    case FExp::Kind::Number:
      return e.number.value;
    case FExp::Kind::Head: {
      if (e.malformed) throw EvalError("malformed function application " + e.function.name);
      GroundAtom key = ground_head(e, b);
      auto it = s.fluents.find(key);
      if (it == s.fluents.end()) throw EvalError("unassigned fluent " + atom_text(key));
      return it->second;
    }
    case FExp::Kind::Negate:
      return -eval_fexp(e.operands.at(0), s, b, ctx);
    case FExp::Kind::Binary:
    case FExp::Kind::Multi: {
      double acc = eval_fexp(e.operands.at(0), s, b, ctx);
      for (std::size_t i = 1; i < e.operands.size(); ++i) {
        double v = eval_fexp(e.operands[i], s, b, ctx);
        switch (e.op) {
          case ArithOp::Add: acc += v; break;
          case ArithOp::Sub: acc -= v; break;
          case ArithOp::Mul: acc *= v; break;
          case ArithOp::Div:
            if (v == 0.0) throw EvalError("division by zero");
            acc /= v;
            break;
        }
      }
      return acc;
    }
    case FExp::Kind::DurationVar:
      if (!ctx.duration) throw EvalError("?duration used outside a duration context");
      return *ctx.duration;
    case FExp::Kind::TimeStep:
      throw EvalError("continuous effects (#t) are not evaluated");
    case FExp::Kind::TotalTime:
      if (!ctx.total_time) throw EvalError("total-time used outside a metric");
      return *ctx.total_time;
  }
  return 0.0;
}

bool check_action_duration(const DurationConstraint& c, double duration, const State& start,
                           const Bindings& b, const EvalContext& ctx, const State* end) {
  EvalContext inner = ctx;
  inner.duration = duration;
  for (const auto& sc : c.conjuncts) {
    const State& s = (!sc.at.empty() && sc.at.back() == TimeSpec::End && end) ? *end : start;
    double rhs = eval_fexp(sc.right.value.at(0), s, b, inner);
    if (!compare(sc.op, duration, rhs, ctx.eps_num)) return false;
  }
  return true;
}

bool check_method_duration(const DurationConstraint& c, const TaskInterval& method,
                           const IntervalMap& subtasks, const State& context,
                           const Bindings& b, const EvalContext& ctx) {
  EvalContext inner = ctx;
  inner.duration = method.length();
  auto value = [&](const DurationOperand& o) {
    switch (o.kind) {
      case DurationOperand::Kind::Self:
        return method.length();
      case DurationOperand::Kind::Task: {
        auto it = subtasks.find(o.task.name);
        if (it == subtasks.end()) throw EvalError("no interval for task " + o.task.name);
        return it->second.length();
      }
      case DurationOperand::Kind::Value:
        break;
    }
    return eval_fexp(o.value.at(0), context, b, inner);
  };
  for (const auto& sc : c.conjuncts)
    if (!compare(sc.op, value(sc.left), value(sc.right), ctx.eps_num)) return false;
  return true;
}

std::size_t TimedTrajectory::index_at(double t, double eps) const {
  std::size_t i = 0;
  for (std::size_t k = 0; k < steps.size() && steps[k].time <= t + eps; ++k) i = k;
  return i;
}

std::size_t TimedTrajectory::index_before(double t, double eps) const {
  std::size_t i = 0;
  for (std::size_t k = 0; k < steps.size() && steps[k].time < t - eps; ++k) i = k;
  return i;
}

namespace {

// An (at end <effect>) body read as the goal it induces: added atoms must
// hold, deleted atoms must not.
bool effect_holds(const Effect& e, const State& s, const Bindings& b, const EvalContext& ctx) {
  switch (e.kind) {
    case Effect::Kind::Empty:
      return true;
    case Effect::Kind::And:
      for (const auto& c : e.children)
        if (!effect_holds(c, s, b, ctx)) return false;
      return true;
    case Effect::Kind::Forall:
      return !each_assignment(e.variables, b, ctx, false, [&](const Bindings& inner) {
        return effect_holds(e.children.at(0), s, inner, ctx);
      });
    case Effect::Kind::When:
      return !eval_gd(e.condition.at(0), s, b, ctx) || effect_holds(e.children.at(0), s, b, ctx);
    case Effect::Kind::Add:
      return s.atoms.count(ground(e.atom, b)) > 0;
    case Effect::Kind::Delete:
      return s.atoms.count(ground(e.atom, b)) == 0;
    case Effect::Kind::Assign:
      if (e.assign != AssignOp::Assign)
        throw EvalError("only assign can be read as a condition in an at end constraint");
      return compare(CompOp::Eq, eval_fexp(e.operands.at(0), s, b, ctx),
                     eval_fexp(e.operands.at(1), s, b, ctx), ctx.eps_num);
  }
  return false;
}

const TaskInterval& interval_of(const IntervalMap& m, const std::string& task) {
  auto it = m.find(task);
  if (it == m.end()) throw EvalError("no interval for task " + task);
  return it->second;
}

}  // namespace

bool holds_constraint(const ConstraintDef& c, const TimedTrajectory& traj,
                      const IntervalMap& intervals, const Bindings& b, const EvalContext& ctx) {
  using K = ConstraintDef::Kind;
  const double eps = ctx.eps_num;
  auto phi = [&](std::size_t i) { return eval_gd(c.gd, traj.steps[i].state, b, ctx); };
  auto all_in = [&](double lo, double hi) {
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
      double t = traj.steps[i].time;
      if (t >= lo - eps && t <= hi + eps && !phi(i)) return false;
    }
    return true;
  };
  auto task = [&](std::size_t k) -> const TaskInterval& {
    return interval_of(intervals, c.tasks.at(k).name);
  };
  const std::size_t n = traj.steps.size();

  switch (c.kind) {
    case K::Equal:
      return resolve(c.left, b) == resolve(c.right, b);
    case K::NotEqual:
      return resolve(c.left, b) != resolve(c.right, b);
    case K::HoldBefore:
      return phi(traj.index_before(task(0).start, eps));
    case K::HoldAfter:
      return phi(traj.index_at(task(0).end, eps));
    case K::HoldBetween:
      return all_in(task(0).end, task(1).start);
    case K::HoldDuring:
      return all_in(task(0).start, task(1).end);
    case K::AtStart:
      return phi(0);
    case K::AtEnd:
      return effect_holds(c.effect, traj.final(), b, ctx);
    case K::Always:
      for (std::size_t i = 0; i < n; ++i)
        if (!phi(i)) return false;
      return true;
    case K::Sometime:
      for (std::size_t i = 0; i < n; ++i)
        if (phi(i)) return true;
      return false;
    case K::SometimeBefore: {
      double ts = task(0).start;
      for (std::size_t i = 0; i < n && traj.steps[i].time <= ts + eps; ++i)
        if (phi(i)) return true;
      return false;
    }
    case K::SometimeAfter: {
      double te = task(0).end;
      for (std::size_t i = 0; i < n; ++i)
        if (traj.steps[i].time >= te - eps && phi(i)) return true;
      return false;
    }
    case K::AtMostOnce: {
      int blocks = 0;
      bool prev = false;
      for (std::size_t i = 0; i < n; ++i) {
        bool cur = phi(i);
        if (cur && !prev) ++blocks;
        prev = cur;
      }
      return blocks <= 1;
    }
  }
  return false;
}

}  // namespace hddl
