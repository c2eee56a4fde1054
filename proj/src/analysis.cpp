#include "hddl/analysis.hpp"

#include <algorithm>
#include <functional>

namespace hddl {

using namespace ast;

namespace {

std::string join_types(const TypeSet& t) {
  if (t.size() == 1) return *t.begin();
  std::string out = "(either";
  for (const auto& n : t) out += " " + n;
  return out + ")";
}

void diag(Diagnostics& out, Severity sev, const SourceSpan& span, std::string code,
          std::string message, std::string production) {
  out.push_back({sev, span, std::move(code), std::move(message), std::move(production)});
}

}  // namespace

bool SymbolTable::is_subtype(const std::string& sub, const std::string& super) const {
  if (super == "object" || sub == super) return true;
  std::string cur = sub;
  for (std::size_t guard = 0; guard <= types.size(); ++guard) {
    auto it = types.find(cur);
    if (it == types.end() || it->second == cur) return false;
    cur = it->second;
    if (cur == super) return true;
  }
  return false;
}

bool SymbolTable::compatible(const TypeSet& actual, const TypeSet& expected) const {
  for (const auto& a : actual) {
    bool ok = std::any_of(expected.begin(), expected.end(),
                          [&](const std::string& e) { return is_subtype(a, e); });
    if (!ok) return false;
  }
  return true;
}

std::vector<std::string> SymbolTable::objects_of(const TypeSet& type) const {
  std::vector<std::string> out;
  for (const auto& [name, t] : objects)
    if (compatible(t, type)) out.push_back(name);
  return out;
}

TypeSet SymbolTable::expand(const std::optional<Type>& t) const {
  if (!t) return {"object"};
  TypeSet out;
  for (const auto& n : t->names) out.insert(n.name);
  return out;
}

SymbolTable build_symbols(const Domain& domain, const Problem* problem, Diagnostics& diags) {
  SymbolTable st;
  st.types["object"] = "object";
  st.typing = domain.types.has_value();

  std::map<std::string, const TypedName*> declared;
  if (domain.types) {
    for (const auto& t : *domain.types) {
      if (t.name.name == "object") continue;
      if (declared.count(t.name.name)) {
        diag(diags, Severity::Error, t.name.info.span, "duplicate-declaration",
             "type " + t.name.name + " is declared twice", "types-def");
        continue;
      }
      declared[t.name.name] = &t;
      st.types[t.name.name] = t.type ? t.type->names.at(0).name : "object";
    }
    for (auto& [name, parent] : st.types) {
      if (name == "object") continue;
      if (!st.types.count(parent)) {
        diag(diags, Severity::Error, declared[name]->type->info.span, "unknown-type",
             "unknown parent type " + parent + " of " + name, "types-def");
        parent = "object";
      }
    }
    // Break cycles so later subtype queries terminate.
    for (auto& [name, parent] : st.types) {
      std::set<std::string> seen{name};
      std::string cur = parent;
      while (cur != "object") {
        if (seen.count(cur)) {
          diag(diags, Severity::Error, declared[name]->name.info.span, "type-cycle",
               "type hierarchy contains a cycle through " + name, "types-def");
          parent = "object";
          break;
        }
        seen.insert(cur);
        cur = st.types[cur];
      }
    }
  }

  auto signature = [&](const TypedList& params, const char* prod) {
    std::vector<TypeSet> sig;
    for (const auto& p : params) {
      TypeSet t = st.expand(p.type);
      for (const auto& n : t) {
        if (!st.types.count(n))
          diag(diags, Severity::Error, p.type->info.span, "unknown-type", "unknown type " + n,
               prod);
      }
      sig.push_back(std::move(t));
    }
    return sig;
  };
  auto declare = [&](auto& table, const Symbol& name, auto value, const char* what,
                     const char* prod) {
    if (table.count(name.name)) {
      diag(diags, Severity::Error, name.info.span, "duplicate-declaration",
           std::string(what) + " " + name.name + " is declared twice", prod);
      return;
    }
    table.emplace(name.name, std::move(value));
  };

  if (domain.predicates)
    for (const auto& p : *domain.predicates)
      declare(st.predicates, p.name, signature(p.params, "predicates-def"), "predicate",
              "predicates-def");
  if (domain.functions)
    for (const auto& f : *domain.functions) {
      FunctionSignature sig;
      sig.params = signature(f.params, "functions-def");
      sig.numeric = f.result != FunctionSkeleton::Result::Object;
      if (!sig.numeric) sig.result = st.expand(f.result_type);
      declare(st.functions, f.name, std::move(sig), "function", "functions-def");
    }
  for (const auto& t : domain.tasks)
    declare(st.tasks, t.name, signature(t.params, "tasks-def"), "task", "tasks-def");
  std::set<std::string> structure_names;
  for (const auto& s : domain.structures) {
    const Symbol& name = structure_name(s);
    if (!structure_names.insert(name.name).second)
      diag(diags, Severity::Error, name.info.span, "duplicate-declaration",
           "structure " + name.name + " is declared twice", "structure-def");
    if (std::holds_alternative<Action>(s) || std::holds_alternative<DurativeAction>(s)) {
      const TypedList& params = std::holds_alternative<Action>(s)
                                    ? std::get<Action>(s).params
                                    : std::get<DurativeAction>(s).params;
      if (st.tasks.count(name.name))
        diag(diags, Severity::Error, name.info.span, "duplicate-declaration",
             "action " + name.name + " has the same name as an abstract task", "structure-def");
      st.actions[name.name] = signature(params, "structure-def");
    }
  }
  auto add_objects = [&](const TypedList& l, const char* prod) {
    for (const auto& o : l) {
      TypeSet t = st.expand(o.type);
      for (const auto& n : t)
        if (!st.types.count(n))
          diag(diags, Severity::Error, o.type->info.span, "unknown-type", "unknown type " + n,
               prod);
      declare(st.objects, o.name, t, "object", prod);
    }
  };
  if (domain.constants) add_objects(*domain.constants, "constants-def");
  if (problem && problem->objects) add_objects(*problem->objects, "object-declaration");
  return st;
}

namespace {

class Checker {
 public:
  Checker(const SymbolTable* syms, Diagnostics& out) : syms_(syms), out_(out) {}

  void structure(const Structure& s) { std::visit([&](const auto& x) { check(x); }, s); }

  void problem(const Problem& p) {
    scopes_.clear();
    scopes_.emplace_back();
    if (p.htn) {
      if (p.htn->params) bind(*p.htn->params);
      network(p.htn->network);
    }
    for (const auto& e : p.init) init_el(e);
    if (p.goal) gd(*p.goal);
    if (p.metric) fexp(p.metric->expr);
  }

 private:
  using Scope = std::map<std::string, TypeSet>;

  void check(const Action& a) {
    begin(a.params, false);
    if (a.precondition) gd(*a.precondition);
    if (a.effect) effect(*a.effect);
  }

  void check(const DurativeAction& a) {
    begin(a.params, true);
    for (const auto& c : a.duration.conjuncts) duration_operand(c.right);
    if (a.condition) da_gd(*a.condition);
    if (a.effect) da_effect(*a.effect);
  }

  void check(const Method& m) {
    begin(m.params, false);
    method_task(m.task);
    labels_ = collect_labels(m.network);
    if (m.precondition) gd(*m.precondition);
    network(m.network);
  }

  void check(const DurativeMethod& m) {
    begin(m.params, true);
    method_task(m.task);
    labels_ = collect_labels(m.network);
    if (m.duration)
      for (const auto& c : m.duration->conjuncts) {
        duration_operand(c.left);
        duration_operand(c.right);
      }
    if (m.condition) da_gd(*m.condition);
    network(m.network);
  }

  void begin(const TypedList& params, bool durative) {
    scopes_.clear();
    scopes_.emplace_back();
    durative_ = durative;
    labels_.clear();
    bind(params);
  }

  void bind(const TypedList& params) {
    Scope& s = scopes_.back();
    for (const auto& p : params) {
      TypeSet t = syms_ ? syms_->expand(p.type) : TypeSet{"object"};
      if (!s.emplace(p.name.name, t).second)
        diag(out_, Severity::Error, p.name.info.span, "duplicate-declaration",
             "parameter " + p.name.name + " is declared twice", "typed-list");
      if (p.name.name == "?duration")
        diag(out_, Severity::Error, p.name.info.span, "duration-misuse",
             "?duration is reserved and cannot be declared as a parameter", "typed-list");
    }
  }

  void push_quantified(const TypedList& vars) {
    for (const auto& v : vars)
      for (const auto& s : scopes_)
        if (s.count(v.name.name)) {
          diag(out_, Severity::Warning, v.name.info.span, "shadowed-variable",
               "variable " + v.name.name + " shadows an outer declaration", "typed-list");
          break;
        }
    scopes_.emplace_back();
    Scope& s = scopes_.back();
    for (const auto& v : vars) s[v.name.name] = syms_ ? syms_->expand(v.type) : TypeSet{"object"};
  }

  void pop() { scopes_.pop_back(); }

  std::optional<TypeSet> term(const Term& t, const char* prod) {
    if (t.is_variable) {
      for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
        auto f = it->find(t.name);
        if (f != it->end()) return f->second;
      }
      if (t.name == "?duration") {
        diag(out_, Severity::Error, t.info.span, "duration-misuse",
             "?duration can only appear in duration constraints and durative effects", prod);
        return std::nullopt;
      }
      diag(out_, Severity::Error, t.info.span, "unbound-variable",
           "unbound variable " + t.info.spelling, prod);
      return std::nullopt;
    }
    if (!syms_) return std::nullopt;
    auto f = syms_->objects.find(t.name);
    if (f == syms_->objects.end()) {
      diag(out_, Severity::Error, t.info.span, "unknown-object",
           "unknown constant or object " + t.info.spelling, prod);
      return std::nullopt;
    }
    return f->second;
  }

  void args(const std::vector<Term>& actual, const std::vector<TypeSet>* sig,
            const std::string& what, const NodeInfo& at, const char* prod, bool check_arity = true) {
    std::vector<std::optional<TypeSet>> types;
    for (const auto& a : actual) types.push_back(term(a, prod));
    if (!sig) return;
    if (check_arity && actual.size() != sig->size()) {
      diag(out_, Severity::Error, at.span, "arity-mismatch",
           what + " expects " + std::to_string(sig->size()) + " argument(s), got " +
               std::to_string(actual.size()),
           prod);
      return;
    }
    for (std::size_t i = 0; i < actual.size() && i < sig->size(); ++i) {
      if (types[i] && !syms_->compatible(*types[i], (*sig)[i]))
        diag(out_, Severity::Error, actual[i].info.span, "type-mismatch",
             "argument " + actual[i].info.spelling + " of " + what + " has type " +
                 join_types(*types[i]) + ", expected " + join_types((*sig)[i]),
             prod);
    }
  }

  template <class Table>
  auto lookup(const Table& table, const Symbol& name) -> const typename Table::mapped_type* {
    auto it = table.find(name.name);
    return it == table.end() ? nullptr : &it->second;
  }

  void atom(const AtomicFormula& a, const char* prod = "atomic-formula") {
    const std::vector<TypeSet>* sig = nullptr;
    if (syms_) {
      sig = lookup(syms_->predicates, a.predicate);
      if (!sig)
        diag(out_, Severity::Error, a.predicate.info.span, "unknown-predicate",
             "unknown predicate " + a.predicate.info.spelling, prod);
    }
    args(a.args, sig, "predicate " + a.predicate.name, a.info, prod);
  }

  void fexp(const FExp& e) {
    switch (e.kind) {
      case FExp::Kind::Head: {
        const FunctionSignature* sig = nullptr;
        if (syms_) {
          sig = lookup(syms_->functions, e.function);
          if (!sig)
            diag(out_, Severity::Error, e.function.info.span, "unknown-function",
                 "unknown function " + e.function.info.spelling, "f-head");
          else if (!sig->numeric)
            diag(out_, Severity::Error, e.function.info.span, "not-numeric",
                 "function " + e.function.name + " is object-valued and cannot appear in a "
                 "numeric expression",
                 "f-head");
        }
        args(e.args, sig ? &sig->params : nullptr, "function " + e.function.name, e.info, "f-head",
             !e.malformed);
        break;
      }
      case FExp::Kind::DurationVar:
        if (!durative_)
          diag(out_, Severity::Error, e.info.span, "duration-misuse",
               "?duration used outside a durative action or method", "f-exp-da");
        break;
      default:
        break;
    }
    for (const auto& o : e.operands) fexp(o);
  }

  void gd(const Gd& g) {
    switch (g.kind) {
      case Gd::Kind::Atom:
        atom(g.atom, "gd");
        return;
      case Gd::Kind::Exists:
      case Gd::Kind::Forall:
        push_quantified(g.variables);
        for (const auto& c : g.children) gd(c);
        pop();
        return;
      case Gd::Kind::Equal:
        term(g.left, "gd");
        term(g.right, "gd");
        return;
      case Gd::Kind::Compare:
        for (const auto& s : g.sides) fexp(s);
        return;
      default:
        for (const auto& c : g.children) gd(c);
    }
  }

  void effect(const Effect& e) {
    switch (e.kind) {
      case Effect::Kind::Add:
      case Effect::Kind::Delete:
        atom(e.atom, "p-effect");
        return;
      case Effect::Kind::Assign:
        for (const auto& o : e.operands) fexp(o);
        return;
      case Effect::Kind::Forall:
        push_quantified(e.variables);
        for (const auto& c : e.children) effect(c);
        pop();
        return;
      case Effect::Kind::When:
        gd(e.condition.at(0));
        [[fallthrough]];
      default:
        for (const auto& c : e.children) effect(c);
    }
  }

  void da_gd(const DaGd& g) {
    switch (g.kind) {
      case DaGd::Kind::At:
      case DaGd::Kind::OverAll:
        gd(g.gd);
        return;
      case DaGd::Kind::Forall:
        push_quantified(g.variables);
        for (const auto& c : g.children) da_gd(c);
        pop();
        return;
      default:
        for (const auto& c : g.children) da_gd(c);
    }
  }

  void da_effect(const DaEffect& e) {
    switch (e.kind) {
      case DaEffect::Kind::Timed:
        effect(e.effect);
        return;
      case DaEffect::Kind::Continuous:
        for (const auto& o : e.operands) fexp(o);
        return;
      case DaEffect::Kind::Forall:
        push_quantified(e.variables);
        for (const auto& c : e.children) da_effect(c);
        pop();
        return;
      case DaEffect::Kind::When:
        da_gd(e.condition.at(0));
        [[fallthrough]];
      default:
        for (const auto& c : e.children) da_effect(c);
    }
  }

  void duration_operand(const DurationOperand& d) {
    if (d.kind == DurationOperand::Kind::Task) task_id(d.task, "task-duration");
    if (d.kind == DurationOperand::Kind::Value)
      for (const auto& v : d.value) fexp(v);
  }

  void method_task(const TaskApp& t) {
    const std::vector<TypeSet>* sig = nullptr;
    if (syms_) {
      sig = lookup(syms_->tasks, t.name);
      if (!sig) {
        bool primitive = syms_->actions.count(t.name.name) > 0;
        diag(out_, Severity::Error, t.name.info.span, "unknown-task",
             primitive ? "method task " + t.name.name + " is an action, not an abstract task"
                       : "unknown task symbol " + t.name.name,
             "method-def");
      }
    }
    args(t.args, sig, "task " + t.name.name, t.info, "method-def");
  }

  void subtask(const TaskApp& t) {
    const std::vector<TypeSet>* sig = nullptr;
    if (syms_) {
      sig = lookup(syms_->tasks, t.name);
      if (!sig) sig = lookup(syms_->actions, t.name);
      if (!sig)
        diag(out_, Severity::Error, t.name.info.span, "unknown-task",
             "unknown task symbol " + t.name.name, "subtask-def");
    }
    args(t.args, sig, "task " + t.name.name, t.info, "subtask-def");
  }

  std::set<std::string> collect_labels(const TaskNetwork& n) {
    std::set<std::string> labels;
    for (const auto& s : n.subtasks)
      if (s.label && !labels.insert(s.label->name).second)
        diag(out_, Severity::Error, s.label->info.span, "duplicate-task-id",
             "task id " + s.label->name + " is declared twice in this network", "subtask-def");
    return labels;
  }

  void task_id(const Symbol& id, const char* prod) {
    if (!labels_.count(id.name))
      diag(out_, Severity::Error, id.info.span, "undeclared-task-id",
           "undeclared task id " + id.name, prod);
  }

  void network(const TaskNetwork& n) {
    if (labels_.empty()) labels_ = collect_labels(n);
    for (const auto& s : n.subtasks) subtask(s.task);
    for (const auto& o : n.orderings) {
      task_id(o.left.task, "ordering-def");
      task_id(o.right.task, "ordering-def");
    }
    for (const auto& c : n.constraints) {
      using K = ConstraintDef::Kind;
      for (const auto& t : c.tasks) task_id(t, "constraint-def");
      if (c.kind == K::Equal || c.kind == K::NotEqual) {
        term(c.left, "constraint-def");
        term(c.right, "constraint-def");
      } else if (c.kind == K::AtEnd) {
        effect(c.effect);
      } else {
        gd(c.gd);
      }
    }
    Diagnostics cons = check_network_consistency(n);
    out_.insert(out_.end(), cons.begin(), cons.end());
  }

  void init_el(const InitElement& e) {
    if (e.kind == InitElement::Kind::FunctionInit) {
      const FunctionSignature* sig = nullptr;
      if (syms_) {
        sig = lookup(syms_->functions, e.function);
        if (!sig)
          diag(out_, Severity::Error, e.function.info.span, "unknown-function",
               "unknown function " + e.function.info.spelling, "init-el");
      }
      std::vector<Term> terms;
      for (const auto& a : e.function_args) terms.push_back(Term{false, a.name, a.info});
      args(terms, sig ? &sig->params : nullptr, "function " + e.function.name, e.info, "init-el");
      return;
    }
    atom(e.atom, "init-el");
  }

  const SymbolTable* syms_;
  Diagnostics& out_;
  std::vector<Scope> scopes_;
  std::set<std::string> labels_;
  bool durative_ = false;
};

}  // namespace

Diagnostics check_domain(const Domain& domain, const SymbolTable& symbols) {
  Diagnostics out;
  Checker c(&symbols, out);
  for (const auto& s : domain.structures) c.structure(s);
  return out;
}

Diagnostics check_problem(const Problem& problem, const SymbolTable& symbols) {
  Diagnostics out;
  Checker c(&symbols, out);
  c.problem(problem);
  return out;
}

Diagnostics check_variable_scopes(const Structure& s) {
  Diagnostics all;
  Checker c(nullptr, all);
  c.structure(s);
  Diagnostics out;
  for (auto& d : all)
    if (d.code == "unbound-variable" || d.code == "duration-misuse" ||
        d.code == "shadowed-variable")
      out.push_back(std::move(d));
  return out;
}

std::vector<PointEdge> point_graph(const TaskNetwork& n) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<PointEdge> edges;
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < n.subtasks.size(); ++i) {
    int start = static_cast<int>(2 * i);
    edges.push_back({start, start + 1, false, npos});
    if (n.subtasks[i].label) index.emplace(n.subtasks[i].label->name, static_cast<int>(i));
    if (n.ordered && i > 0) edges.push_back({start - 1, start, true, npos});
  }
  for (std::size_t k = 0; k < n.orderings.size(); ++k) {
    const OrderingDef& o = n.orderings[k];
    auto l = index.find(o.left.task.name);
    auto r = index.find(o.right.task.name);
    if (l == index.end() || r == index.end()) continue;
    if (!o.left.spec && !o.right.spec) {
      edges.push_back({2 * l->second + 1, 2 * r->second, true, k});
      continue;
    }
    auto point = [](int task, const TimePoint& p) {
      return 2 * task + (p.spec && *p.spec == TimeSpec::End ? 1 : 0);
    };
    int a = point(l->second, o.left);
    int b = point(r->second, o.right);
    switch (o.op) {
      case CompOp::Lt:
        edges.push_back({a, b, true, k});
        break;
      case CompOp::Le:
        edges.push_back({a, b, false, k});
        break;
      case CompOp::Eq:
        edges.push_back({a, b, false, k});
        edges.push_back({b, a, false, k});
        break;
      case CompOp::Ge:
        edges.push_back({b, a, false, k});
        break;
      case CompOp::Gt:
        edges.push_back({b, a, true, k});
        break;
    }
  }
  return edges;
}

Diagnostics check_network_consistency(const TaskNetwork& n) {
  Diagnostics out;
  std::vector<PointEdge> edges = point_graph(n);
  std::size_t points = 2 * n.subtasks.size();
  std::vector<std::vector<int>> adj(points);
  for (const auto& e : edges) adj[static_cast<std::size_t>(e.from)].push_back(e.to);
  auto reaches = [&](int from, int to) {
    std::vector<bool> seen(points, false);
    std::vector<int> stack{from};
    seen[static_cast<std::size_t>(from)] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (int v : adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          stack.push_back(v);
        }
    }
    return false;
  };
  for (const auto& e : edges) {
    if (!e.strict || !reaches(e.to, e.from)) continue;
    SourceSpan span = e.ordering < n.orderings.size() ? n.orderings[e.ordering].info.span
                                                      : n.info.span;
    diag(out, Severity::Error, span, "inconsistent-ordering",
         "ordering constraints are unsatisfiable: they form a cycle through a strict precedence",
         "ordering-defs");
    break;
  }
  return out;
}

const Structure* Model::structure(const std::string& name) const {
  auto it = structure_by_name.find(name);
  return it == structure_by_name.end() ? nullptr : &domain.structures[it->second];
}

AnalysisResult analyze(Domain domain, Problem problem) {
  AnalysisResult r;
  SymbolTable st = build_symbols(domain, &problem, r.diagnostics);
  if (!problem.domain.name.empty() && problem.domain.name != domain.name.name)
    diag(r.diagnostics, Severity::Error, problem.domain.info.span, "domain-mismatch",
         "problem refers to domain " + problem.domain.name + " but the domain is " +
             domain.name.name,
         "problem");
  Diagnostics d = check_domain(domain, st);
  r.diagnostics.insert(r.diagnostics.end(), d.begin(), d.end());
  Diagnostics p = check_problem(problem, st);
  r.diagnostics.insert(r.diagnostics.end(), p.begin(), p.end());
  sort_diagnostics(r.diagnostics);
  if (has_errors(r.diagnostics)) return r;
  Model m;
  m.domain = std::move(domain);
  m.problem = std::move(problem);
  m.symbols = std::move(st);
  for (std::size_t i = 0; i < m.domain.structures.size(); ++i) {
    const Structure& s = m.domain.structures[i];
    m.structure_by_name[structure_name(s).name] = i;
    if (const auto* mm = std::get_if<Method>(&s)) m.methods_by_task[mm->task.name.name].push_back(i);
    if (const auto* dm = std::get_if<DurativeMethod>(&s))
      m.methods_by_task[dm->task.name.name].push_back(i);
  }
  r.model = std::move(m);
  return r;
}

}  // namespace hddl
