#include "ast_gen.hpp"

#include <cstdlib>
#include <random>
#include <string>

namespace hddl::testing {

using namespace ast;

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Symbol sym(std::string s) { return Symbol{std::move(s), {}}; }
  Symbol named(const char* prefix, int n) { return sym(prefix + std::to_string(pick(n))); }

  Term term() {
    if (!ground_ && coin()) return Term{true, "?v" + std::to_string(pick(3)), {}};
    return Term{false, "c" + std::to_string(pick(3)), {}};
  }
  std::vector<Term> terms(int max) {
    std::vector<Term> out;
    for (int i = pick(max + 1); i > 0; --i) out.push_back(term());
    return out;
  }

  Type type() {
    Type t;
    if (coin(0.2)) {
      t.either = true;
      int n = 2 + pick(2);
      for (int i = 0; i < n; ++i) t.names.push_back(named("t", 4));
    } else {
      t.names.push_back(coin(0.2) ? sym("object") : named("t", 4));
    }
    return t;
  }

  // Typed groups first; an untyped tail may only come last.
  TypedList typed_list(const char* prefix, int max_groups, bool allow_empty = true) {
    TypedList out;
    int groups = allow_empty ? pick(max_groups + 1) : 1 + pick(max_groups);
    for (int g = 0; g < groups; ++g) {
      Type t = type();
      for (int k = 1 + pick(2); k > 0; --k) out.push_back({named(prefix, 5), t});
    }
    if (coin(0.25) || out.empty())
      for (int k = allow_empty ? pick(2) : 1; k > 0; --k) out.push_back({named(prefix, 5), {}});
    return out;
  }

  Number number() {
    std::string text = std::to_string(pick(20));
    if (coin(0.3)) text += "." + std::to_string(1 + pick(9));
    return Number{std::strtod(text.c_str(), nullptr), text};
  }

  FExp head(bool allow_bare = true) {
    FExp e;
    e.kind = FExp::Kind::Head;
    e.function = named("f", 3);
    if (allow_bare && coin(0.3)) {
      e.bare = true;
    } else {
      e.args = terms(2);
    }
    return e;
  }

  FExp fexp(int depth, bool allow_duration = false, bool allow_total = false) {
    if (depth <= 0 || coin(0.4)) {
      int r = pick(allow_duration || allow_total ? 4 : 3);
      if (r == 3) {
        FExp e;
        e.kind = allow_duration ? FExp::Kind::DurationVar : FExp::Kind::TotalTime;
        return e;
      }
      if (r == 0) {
        FExp e;
        e.kind = FExp::Kind::Number;
        e.number = number();
        return e;
      }
      return head();
    }
    FExp e;
    switch (pick(3)) {
      case 0:
        e.kind = FExp::Kind::Negate;
        e.operands.push_back(fexp(depth - 1, allow_duration, allow_total));
        break;
      case 1:
        e.kind = FExp::Kind::Binary;
        e.op = coin() ? ArithOp::Sub : ArithOp::Div;
        for (int i = 0; i < 2; ++i) e.operands.push_back(fexp(depth - 1, allow_duration, allow_total));
        break;
      default:
        e.kind = FExp::Kind::Multi;
        e.op = coin() ? ArithOp::Add : ArithOp::Mul;
        for (int i = 2 + pick(2); i > 0; --i)
          e.operands.push_back(fexp(depth - 1, allow_duration, allow_total));
        break;
    }
    return e;
  }

  AtomicFormula atom() { return AtomicFormula{named("p", 3), terms(2), {}}; }

  Gd gd(int depth) {
    Gd g;
    int r = depth <= 0 ? pick(3) : pick(10);
    switch (r) {
      case 0:
        g.kind = Gd::Kind::Atom;
        g.atom = atom();
        break;
      case 1:
        g.kind = Gd::Kind::Equal;
        g.left = term();
        g.right = term();
        break;
      case 2: {
        g.kind = Gd::Kind::Compare;
        g.comp = static_cast<CompOp>(pick(5));
        // `(= a b)` with two bare names reads as object equality, so an
        // `=` comparison keeps its left side parenthesised.
        FExp left = g.comp == CompOp::Eq ? head(false) : fexp(1);
        g.sides = {left, fexp(1)};
        if (g.comp == CompOp::Eq && g.sides[1].kind == FExp::Kind::Head) g.sides[1].bare = false;
        break;
      }
      case 3:
      case 4:
        g.kind = r == 3 ? Gd::Kind::And : Gd::Kind::Or;
        for (int i = 1 + pick(3); i > 0; --i) g.children.push_back(gd(depth - 1));
        break;
      case 5:
      case 6:
        g.kind = Gd::Kind::Not;
        g.children.push_back(gd(depth - 1));
        break;
      case 7:
        g.kind = Gd::Kind::Imply;
        g.children = {gd(depth - 1), gd(depth - 1)};
        break;
      default:
        g.kind = coin() ? Gd::Kind::Exists : Gd::Kind::Forall;
        g.variables = typed_list("?q", 2, false);
        g.children.push_back(gd(depth - 1));
        break;
    }
    return g;
  }

  Effect p_effect(bool allow_duration = false) {
    Effect e;
    switch (pick(3)) {
      case 0:
        e.kind = Effect::Kind::Add;
        e.atom = atom();
        break;
      case 1:
        e.kind = Effect::Kind::Delete;
        e.atom = atom();
        break;
      default:
        e.kind = Effect::Kind::Assign;
        e.assign = static_cast<AssignOp>(pick(5));
        e.operands = {head(), fexp(2, allow_duration)};
        break;
    }
    return e;
  }

  Effect cond_effect() {
    if (coin(0.6)) return p_effect();
    Effect e;
    e.kind = Effect::Kind::And;
    for (int i = 1 + pick(2); i > 0; --i) e.children.push_back(p_effect());
    return e;
  }

  Effect c_effect(int depth) {
    if (depth <= 0) return p_effect();
    switch (pick(4)) {
      case 0: {
        Effect e;
        e.kind = Effect::Kind::Forall;
        e.variables = typed_list("?q", 2, false);
        e.children.push_back(effect(depth - 1));
        return e;
      }
      case 1: {
        Effect e;
        e.kind = Effect::Kind::When;
        e.condition.push_back(gd(depth - 1));
        e.children.push_back(cond_effect());
        return e;
      }
      default:
        return p_effect();
    }
  }

  Effect effect(int depth) {
    if (coin(0.4)) return c_effect(depth);
    Effect e;
    e.kind = Effect::Kind::And;
    for (int i = 1 + pick(3); i > 0; --i) e.children.push_back(c_effect(depth));
    return e;
  }

  DaGd timed_gd(int depth) {
    DaGd g;
    if (coin(0.3)) {
      g.kind = DaGd::Kind::OverAll;
    } else {
      g.kind = DaGd::Kind::At;
      g.time = coin() ? TimeSpec::Start : TimeSpec::End;
    }
    g.gd = gd(depth);
    return g;
  }

  DaGd da_gd(int depth) {
    DaGd g;
    switch (depth <= 0 ? 0 : pick(4)) {
      case 0:
      case 1:
        return timed_gd(depth);
      case 2:
        g.kind = DaGd::Kind::Forall;
        g.variables = typed_list("?q", 2, false);
        g.children.push_back(da_gd(depth - 1));
        return g;
      default:
        g.kind = DaGd::Kind::And;
        for (int i = 1 + pick(3); i > 0; --i) g.children.push_back(da_gd(depth - 1));
        return g;
    }
  }

  DaEffect timed_effect() {
    DaEffect e;
    e.kind = DaEffect::Kind::Timed;
    e.time = coin() ? TimeSpec::Start : TimeSpec::End;
    e.effect = p_effect(true);
    return e;
  }

  DaEffect da_effect(int depth) {
    DaEffect e;
    switch (depth <= 0 ? 0 : pick(5)) {
      case 0:
      case 1:
        return timed_effect();
      case 2: {
        e.kind = DaEffect::Kind::Continuous;
        e.assign = coin() ? AssignOp::Increase : AssignOp::Decrease;
        FExp t;
        t.kind = FExp::Kind::TimeStep;
        FExp rate;
        if (coin(0.3)) {
          rate = t;
        } else {
          rate.kind = FExp::Kind::Multi;
          rate.op = ArithOp::Mul;
          rate.operands = {t, fexp(1)};
          if (coin()) std::swap(rate.operands[0], rate.operands[1]);
        }
        e.operands = {head(false), rate};
        return e;
      }
      case 3:
        if (coin()) {
          e.kind = DaEffect::Kind::Forall;
          e.variables = typed_list("?q", 2, false);
          e.children.push_back(da_effect(depth - 1));
        } else {
          e.kind = DaEffect::Kind::When;
          e.condition.push_back(timed_gd(depth - 1));
          e.children.push_back(timed_effect());
        }
        return e;
      default:
        e.kind = DaEffect::Kind::And;
        for (int i = 1 + pick(3); i > 0; --i) e.children.push_back(da_effect(depth - 1));
        return e;
    }
  }

  // Left side: ?duration or (duration t); right side: a value or (duration t).
  DurationOperand operand(bool method, bool right) {
    DurationOperand d;
    if (method && coin(0.3)) {
      d.kind = DurationOperand::Kind::Task;
      d.task = named("t", 3);
    } else if (right) {
      d.kind = DurationOperand::Kind::Value;
      d.value.push_back(fexp(2));
    }
    return d;
  }

  DurationConstraint duration(bool method) {
    DurationConstraint c;
    int r = pick(4);
    if (r == 0) return c;
    c.conjunction = r == 3;
    for (int i = c.conjunction ? 1 + pick(3) : 1; i > 0; --i) {
      SimpleDurationConstraint s;
      if (coin(0.3)) s.at.push_back(coin() ? TimeSpec::Start : TimeSpec::End);
      // Actions only admit <=, >= and =.
      static const CompOp action_ops[] = {CompOp::Le, CompOp::Eq, CompOp::Ge};
      s.op = method ? static_cast<CompOp>(pick(5)) : action_ops[pick(3)];
      s.left = operand(method, false);
      s.right = operand(method, true);
      c.conjuncts.push_back(s);
    }
    return c;
  }

  TaskApp task_app() { return TaskApp{named("task", 3), terms(2), {}}; }

  TimePoint time_point(bool decorated) {
    TimePoint p;
    if (decorated) p.spec = coin() ? TimeSpec::Start : TimeSpec::End;
    p.task = named("t", 3);
    return p;
  }

  ConstraintDef constraint(int depth) {
    using K = ConstraintDef::Kind;
    ConstraintDef c;
    c.kind = static_cast<K>(pick(13));
    switch (c.kind) {
      case K::Equal:
      case K::NotEqual:
        c.left = term();
        c.right = term();
        break;
      case K::AtEnd:
        c.effect = cond_effect();
        break;
      case K::HoldBetween:
      case K::HoldDuring:
        c.tasks.push_back(named("t", 3));
        [[fallthrough]];
      case K::HoldBefore:
      case K::HoldAfter:
      case K::SometimeBefore:
      case K::SometimeAfter:
        c.tasks.insert(c.tasks.begin(), named("t", 3));
        c.gd = gd(depth);
        break;
      default:
        c.gd = gd(depth);
        break;
    }
    return c;
  }

  TaskNetwork network() {
    TaskNetwork n;
    n.has_subtasks = coin(0.8);
    if (n.has_subtasks) {
      n.ordered = coin(0.3);
      for (int i = pick(4); i > 0; --i) {
        Subtask s;
        if (coin(0.7)) s.label = named("t", 3);
        s.task = task_app();
        n.subtasks.push_back(s);
      }
    }
    n.has_orderings = !n.ordered && coin(0.4);
    if (n.has_orderings)
      for (int i = pick(3); i > 0; --i) {
        OrderingDef o;
        bool decorated = coin();
        o.op = decorated ? static_cast<CompOp>(pick(5)) : CompOp::Lt;
        o.left = time_point(decorated);
        o.right = time_point(decorated);
        n.orderings.push_back(o);
      }
    n.has_constraints = coin(0.5);
    if (n.has_constraints)
      for (int i = pick(3); i > 0; --i) n.constraints.push_back(constraint(2));
    return n;
  }

  Structure structure() {
    switch (pick(4)) {
      case 0: {
        Action a;
        a.name = named("act", 4);
        a.params = typed_list("?v", 2);
        if (coin(0.8)) a.precondition = coin(0.1) ? Gd{} : gd(3);
        if (coin(0.8)) a.effect = coin(0.1) ? Effect{} : effect(2);
        return a;
      }
      case 1: {
        DurativeAction a;
        a.name = named("dact", 4);
        a.params = typed_list("?v", 2);
        a.duration = duration(false);
        if (coin(0.8)) a.condition = coin(0.1) ? DaGd{} : da_gd(2);
        if (coin(0.8)) a.effect = coin(0.1) ? DaEffect{} : da_effect(2);
        return a;
      }
      case 2: {
        Method m;
        m.name = named("m", 4);
        m.params = typed_list("?v", 2);
        m.task = task_app();
        if (coin(0.5)) m.precondition = gd(2);
        m.network = network();
        return m;
      }
      default: {
        DurativeMethod m;
        m.name = named("dm", 4);
        m.params = typed_list("?v", 2);
        m.task = task_app();
        if (coin(0.7)) m.duration = duration(true);
        if (coin(0.6)) m.condition = da_gd(2);
        m.network = network();
        return m;
      }
    }
  }

  std::vector<Symbol> requirements() {
    static const char* flags[] = {":hierarchy",        ":typing",           ":durative-actions",
                                  ":durative-methods", ":numeric-fluents",  ":method-constraints",
                                  ":timed-initial-literals"};
    std::vector<Symbol> out;
    for (int i = pick(4); i > 0; --i) out.push_back(sym(flags[pick(7)]));
    return out;
  }

  std::vector<FunctionSkeleton> functions() {
    std::vector<FunctionSkeleton> out;
    for (int g = pick(3); g > 0; --g) {
      bool object = coin(0.3);
      std::optional<Type> rt;
      if (object) rt = type();
      for (int k = 1 + pick(2); k > 0; --k) {
        FunctionSkeleton f;
        f.name = named("f", 3);
        f.params = typed_list("?a", 1);
        f.result = object ? FunctionSkeleton::Result::Object : FunctionSkeleton::Result::Number;
        f.result_type = rt;
        out.push_back(f);
      }
    }
    // Functions without a declared result must come last: a later `- number`
    // would claim them.
    for (int k = coin(0.3) ? 1 + pick(2) : 0; k > 0; --k) {
      FunctionSkeleton f;
      f.name = named("f", 3);
      f.params = typed_list("?a", 1);
      out.push_back(f);
    }
    return out;
  }

  Domain domain() {
    Domain d;
    d.name = named("dom", 10);
    if (coin(0.8)) d.requirements = requirements();
    if (coin(0.7)) d.types = typed_list("t", 2);
    if (coin(0.8)) {
      d.predicates.emplace();
      for (int i = pick(3); i > 0; --i)
        d.predicates->push_back({named("p", 3), typed_list("?a", 2), {}});
    }
    if (coin(0.6)) d.functions = functions();
    if (coin(0.6)) d.constants = typed_list("c", 2);
    for (int i = pick(3); i > 0; --i) d.tasks.push_back({named("task", 3), typed_list("?a", 2), {}});
    for (int i = pick(5); i > 0; --i) d.structures.push_back(structure());
    return d;
  }

  InitElement init_element() {
    InitElement e;
    switch (pick(3)) {
      case 0:
        e.kind = InitElement::Kind::Literal;
        e.negated = coin(0.2);
        e.atom = AtomicFormula{named("p", 3), {}, {}};
        for (int i = pick(3); i > 0; --i) e.atom.args.push_back(Term{false, "o" + std::to_string(pick(3)), {}});
        break;
      case 1:
        e.kind = InitElement::Kind::Timed;
        e.negated = coin(0.3);
        e.time = number();
        e.atom = AtomicFormula{named("p", 3), {Term{false, "o0", {}}}, {}};
        break;
      default:
        e.kind = InitElement::Kind::FunctionInit;
        e.function = named("f", 3);
        e.bare_function = coin(0.3);
        if (!e.bare_function)
          for (int i = pick(3); i > 0; --i) e.function_args.push_back(named("o", 3));
        e.value = number();
        break;
    }
    return e;
  }

  Problem problem() {
    Problem p;
    p.name = named("prob", 10);
    p.domain = named("dom", 10);
    if (coin(0.5)) p.requirements = requirements();
    if (coin(0.8)) p.objects = typed_list("o", 2);
    if (coin(0.7)) {
      p.htn.emplace();
      if (coin(0.4)) p.htn->params = typed_list("?h", 2);
      p.htn->network = network();
    }
    for (int i = pick(6); i > 0; --i) p.init.push_back(init_element());
    if (coin(0.7)) p.goal = gd(3);
    if (coin(0.5)) {
      p.metric.emplace();
      p.metric->minimize = coin();
      ground_ = true;  // metric heads take object names only
      p.metric->expr = fexp(3, false, true);
      ground_ = false;
    }
    return p;
  }

 private:
  std::mt19937_64 rng_;
  bool ground_ = false;
};

}  // namespace

Domain random_domain(std::uint64_t seed) { return Gen(seed).domain(); }
Problem random_problem(std::uint64_t seed) { return Gen(seed).problem(); }

}  // namespace hddl::testing
