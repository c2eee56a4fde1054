#include "hddl/printer.hpp"

#include <iomanip>
#include <sstream>

namespace hddl {

using namespace ast;

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string paren(const std::string& head, const std::vector<std::string>& rest) {
  std::string out = "(" + head;
  for (const auto& r : rest) out += " " + r;
  return out + ")";
}

std::string term_text(const Term& t) { return t.name; }

std::vector<std::string> terms(const std::vector<Term>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(term_text(t));
  return out;
}

std::string type_text(const Type& t) {
  if (!t.either) return t.names.empty() ? "object" : t.names.front().name;
  std::vector<std::string> names;
  for (const auto& n : t.names) names.push_back(n.name);
  return paren("either", names);
}

std::string time_text(TimeSpec t) { return std::string(to_string(t)); }

std::string operand_text(const DurationOperand& d) {
  switch (d.kind) {
    case DurationOperand::Kind::Self:
      return "?duration";
    case DurationOperand::Kind::Task:
      return "(duration " + d.task.name + ")";
    case DurationOperand::Kind::Value:
      return d.value.empty() ? "0" : to_text(d.value.front());
  }
  return "?duration";
}

std::string simple_duration_text(const SimpleDurationConstraint& c) {
  std::string inner = "(" + std::string(to_string(c.op)) + " " + operand_text(c.left) + " " +
                      operand_text(c.right) + ")";
  for (auto it = c.at.rbegin(); it != c.at.rend(); ++it)
    inner = "(at " + time_text(*it) + " " + inner + ")";
  return inner;
}

std::string subtask_text(const Subtask& s) {
  if (s.label) return "(" + s.label->name + " " + to_text(s.task) + ")";
  return to_text(s.task);
}

std::string time_point_text(const TimePoint& p) {
  if (p.spec) return "(" + time_text(*p.spec) + " " + p.task.name + ")";
  return p.task.name;
}

std::string function_list_text(const std::vector<FunctionSkeleton>& fs) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < fs.size()) {
    std::size_t j = i;
    while (j < fs.size() && fs[j].result == fs[i].result && fs[j].result_type == fs[i].result_type)
      ++j;
    for (std::size_t k = i; k < j; ++k) {
      std::string params = to_text(fs[k].params);
      parts.push_back(params.empty() ? "(" + fs[k].name.name + ")"
                                     : "(" + fs[k].name.name + " " + params + ")");
    }
    if (fs[i].result == FunctionSkeleton::Result::Number) parts.push_back("- number");
    if (fs[i].result == FunctionSkeleton::Result::Object)
      parts.push_back("- " + (fs[i].result_type ? type_text(*fs[i].result_type) : "object"));
    i = j;
  }
  return join(parts);
}

class Writer {
 public:
  void line(int depth, const std::string& s) {
    out_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << s << '\n';
  }

  /// Prints `key value`, breaking a top-level (and ...) over several lines.
  void field(int depth, const std::string& key, const std::string& head,
             const std::vector<std::string>& children, const std::string& single) {
    if (children.empty()) {
      line(depth, key + " " + single);
      return;
    }
    line(depth, key + " (" + head);
    for (std::size_t i = 0; i < children.size(); ++i)
      line(depth + 2, children[i] + (i + 1 == children.size() ? ")" : ""));
  }

  void network(int depth, const TaskNetwork& n) {
    if (n.has_subtasks) {
      std::vector<std::string> items;
      for (const auto& s : n.subtasks) items.push_back(subtask_text(s));
      field(depth, n.ordered ? ":ordered-subtasks" : ":subtasks", "and", items, "()");
    }
    if (n.has_orderings) {
      std::vector<std::string> items;
      for (const auto& o : n.orderings) items.push_back(to_text(o));
      field(depth, ":ordering", "and", items, "()");
    }
    if (n.has_constraints) {
      std::vector<std::string> items;
      for (const auto& c : n.constraints) items.push_back(to_text(c));
      field(depth, ":constraints", "and", items, "()");
    }
  }

  void gd_field(int depth, const std::string& key, const Gd& g) {
    if (g.kind == Gd::Kind::And) {
      std::vector<std::string> items;
      for (const auto& c : g.children) items.push_back(to_text(c));
      field(depth, key, "and", items, "");
    } else {
      line(depth, key + " " + to_text(g));
    }
  }

  void da_gd_field(int depth, const std::string& key, const DaGd& g) {
    if (g.kind == DaGd::Kind::And) {
      std::vector<std::string> items;
      for (const auto& c : g.children) items.push_back(to_text(c));
      field(depth, key, "and", items, "");
    } else {
      line(depth, key + " " + to_text(g));
    }
  }

  void effect_field(int depth, const std::string& key, const Effect& e) {
    if (e.kind == Effect::Kind::And) {
      std::vector<std::string> items;
      for (const auto& c : e.children) items.push_back(to_text(c));
      field(depth, key, "and", items, "");
    } else {
      line(depth, key + " " + to_text(e));
    }
  }

  void da_effect_field(int depth, const std::string& key, const DaEffect& e) {
    if (e.kind == DaEffect::Kind::And) {
      std::vector<std::string> items;
      for (const auto& c : e.children) items.push_back(to_text(c));
      field(depth, key, "and", items, "");
    } else {
      line(depth, key + " " + to_text(e));
    }
  }

  void structure(int depth, const Structure& s) {
    std::visit([&](const auto& x) { this->write(depth, x); }, s);
  }

  void write(int depth, const Action& a) {
    line(depth, "(:action " + a.name.name);
    line(depth + 1, ":parameters (" + to_text(a.params) + ")");
    if (a.precondition) gd_field(depth + 1, ":precondition", *a.precondition);
    if (a.effect) effect_field(depth + 1, ":effect", *a.effect);
    line(depth, ")");
  }

  void write(int depth, const DurativeAction& a) {
    line(depth, "(:durative-action " + a.name.name);
    line(depth + 1, ":parameters (" + to_text(a.params) + ")");
    line(depth + 1, ":duration " + to_text(a.duration));
    if (a.condition) da_gd_field(depth + 1, ":condition", *a.condition);
    if (a.effect) da_effect_field(depth + 1, ":effect", *a.effect);
    line(depth, ")");
  }

  void write(int depth, const Method& m) {
    line(depth, "(:method " + m.name.name);
    line(depth + 1, ":parameters (" + to_text(m.params) + ")");
    line(depth + 1, ":task " + to_text(m.task));
    if (m.precondition) gd_field(depth + 1, ":precondition", *m.precondition);
    network(depth + 1, m.network);
    line(depth, ")");
  }

  void write(int depth, const DurativeMethod& m) {
    line(depth, "(:durative-method " + m.name.name);
    line(depth + 1, ":parameters (" + to_text(m.params) + ")");
    line(depth + 1, ":task " + to_text(m.task));
    if (m.duration) line(depth + 1, ":duration " + to_text(*m.duration));
    if (m.condition) da_gd_field(depth + 1, ":condition", *m.condition);
    network(depth + 1, m.network);
    line(depth, ")");
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string requirements_text(const std::vector<Symbol>& r) {
  std::vector<std::string> names;
  for (const auto& s : r) names.push_back(s.name);
  return paren(":requirements", names);
}

std::string init_text(const InitElement& e) {
  switch (e.kind) {
    case InitElement::Kind::FunctionInit: {
      std::string f;
      if (e.bare_function) {
        f = e.function.name;
      } else {
        std::vector<std::string> args;
        for (const auto& a : e.function_args) args.push_back(a.name);
        f = paren(e.function.name, args);
      }
      return "(= " + f + " " + to_text(e.value) + ")";
    }
    case InitElement::Kind::Timed:
    case InitElement::Kind::Literal: {
      std::string lit = to_text(e.atom);
      if (e.negated) lit = "(not " + lit + ")";
      if (e.kind == InitElement::Kind::Timed) return "(at " + to_text(e.time) + " " + lit + ")";
      return lit;
    }
  }
  return "()";
}

}  // namespace

std::string to_text(const Number& n) {
  if (!n.text.empty()) return n.text;
  std::ostringstream os;
  os << std::setprecision(17) << n.value;
  return os.str();
}

std::string to_text(const TypedList& l) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < l.size()) {
    std::size_t j = i;
    while (j < l.size() && l[j].type == l[i].type) ++j;
    for (std::size_t k = i; k < j; ++k) parts.push_back(l[k].name.name);
    if (l[i].type) parts.push_back("- " + type_text(*l[i].type));
    i = j;
  }
  return join(parts);
}

std::string to_text(const AtomicFormula& a) { return paren(a.predicate.name, terms(a.args)); }

std::string to_text(const TaskApp& t) { return paren(t.name.name, terms(t.args)); }

std::string to_text(const FExp& e) {
  switch (e.kind) {
    case FExp::Kind::Number:
      return to_text(e.number);
    case FExp::Kind::Head:
      return e.bare ? e.function.name : paren(e.function.name, terms(e.args));
    case FExp::Kind::Negate:
      return "(- " + to_text(e.operands.at(0)) + ")";
    case FExp::Kind::Binary:
    case FExp::Kind::Multi: {
      std::vector<std::string> ops;
      for (const auto& o : e.operands) ops.push_back(to_text(o));
      return paren(std::string(to_string(e.op)), ops);
    }
    case FExp::Kind::DurationVar:
      return "?duration";
    case FExp::Kind::TimeStep:
      return "#t";
    case FExp::Kind::TotalTime:
      return "total-time";
  }
  return "0";
}

std::string to_text(const Gd& g) {
  auto children = [&] {
    std::vector<std::string> out;
    for (const auto& c : g.children) out.push_back(to_text(c));
    return out;
  };
  switch (g.kind) {
    case Gd::Kind::Empty:
      return "()";
    case Gd::Kind::Atom:
      return to_text(g.atom);
    case Gd::Kind::And:
      return paren("and", children());
    case Gd::Kind::Or:
      return paren("or", children());
    case Gd::Kind::Not:
      return paren("not", children());
    case Gd::Kind::Imply:
      return paren("imply", children());
    case Gd::Kind::Exists:
    case Gd::Kind::Forall:
      return "(" + std::string(g.kind == Gd::Kind::Exists ? "exists" : "forall") + " (" +
             to_text(g.variables) + ") " + to_text(g.children.at(0)) + ")";
    case Gd::Kind::Equal:
      return "(= " + term_text(g.left) + " " + term_text(g.right) + ")";
    case Gd::Kind::Compare:
      return "(" + std::string(to_string(g.comp)) + " " + to_text(g.sides.at(0)) + " " +
             to_text(g.sides.at(1)) + ")";
  }
  return "()";
}

std::string to_text(const Effect& e) {
  switch (e.kind) {
    case Effect::Kind::Empty:
      return "()";
    case Effect::Kind::And: {
      std::vector<std::string> out;
      for (const auto& c : e.children) out.push_back(to_text(c));
      return paren("and", out);
    }
    case Effect::Kind::Forall:
      return "(forall (" + to_text(e.variables) + ") " + to_text(e.children.at(0)) + ")";
    case Effect::Kind::When:
      return "(when " + to_text(e.condition.at(0)) + " " + to_text(e.children.at(0)) + ")";
    case Effect::Kind::Add:
      return to_text(e.atom);
    case Effect::Kind::Delete:
      return "(not " + to_text(e.atom) + ")";
    case Effect::Kind::Assign:
      return "(" + std::string(to_string(e.assign)) + " " + to_text(e.operands.at(0)) + " " +
             to_text(e.operands.at(1)) + ")";
  }
  return "()";
}

std::string to_text(const DaGd& g) {
  switch (g.kind) {
    case DaGd::Kind::Empty:
      return "()";
    case DaGd::Kind::And: {
      std::vector<std::string> out;
      for (const auto& c : g.children) out.push_back(to_text(c));
      return paren("and", out);
    }
    case DaGd::Kind::Forall:
      return "(forall (" + to_text(g.variables) + ") " + to_text(g.children.at(0)) + ")";
    case DaGd::Kind::At:
      return "(at " + time_text(g.time) + " " + to_text(g.gd) + ")";
    case DaGd::Kind::OverAll:
      return "(over all " + to_text(g.gd) + ")";
  }
  return "()";
}

std::string to_text(const DaEffect& e) {
  switch (e.kind) {
    case DaEffect::Kind::Empty:
      return "()";
    case DaEffect::Kind::And: {
      std::vector<std::string> out;
      for (const auto& c : e.children) out.push_back(to_text(c));
      return paren("and", out);
    }
    case DaEffect::Kind::Forall:
      return "(forall (" + to_text(e.variables) + ") " + to_text(e.children.at(0)) + ")";
    case DaEffect::Kind::When:
      return "(when " + to_text(e.condition.at(0)) + " " + to_text(e.children.at(0)) + ")";
    case DaEffect::Kind::Timed:
      return "(at " + time_text(e.time) + " " + to_text(e.effect) + ")";
    case DaEffect::Kind::Continuous:
      return "(" + std::string(to_string(e.assign)) + " " + to_text(e.operands.at(0)) + " " +
             to_text(e.operands.at(1)) + ")";
  }
  return "()";
}

std::string to_text(const OrderingDef& o) {
  return "(" + std::string(to_string(o.op)) + " " + time_point_text(o.left) + " " +
         time_point_text(o.right) + ")";
}

std::string to_text(const ConstraintDef& c) {
  using K = ConstraintDef::Kind;
  std::vector<std::string> tasks;
  for (const auto& t : c.tasks) tasks.push_back(t.name);
  auto with_gd = [&](const char* head) {
    tasks.push_back(to_text(c.gd));
    return paren(head, tasks);
  };
  switch (c.kind) {
    case K::Equal:
      return "(= " + term_text(c.left) + " " + term_text(c.right) + ")";
    case K::NotEqual:
      return "(not (= " + term_text(c.left) + " " + term_text(c.right) + "))";
    case K::AtStart:
      return "(at start " + to_text(c.gd) + ")";
    case K::AtEnd:
      return "(at end " + to_text(c.effect) + ")";
    case K::HoldBefore:
    case K::HoldAfter:
    case K::HoldBetween:
    case K::HoldDuring:
    case K::Always:
    case K::AtMostOnce:
    case K::Sometime:
    case K::SometimeBefore:
    case K::SometimeAfter:
      return with_gd(std::string(to_string(c.kind)).c_str());
  }
  return "()";
}

std::string to_text(const DurationConstraint& c) {
  if (c.conjuncts.empty()) return "()";
  if (!c.conjunction) return simple_duration_text(c.conjuncts.front());
  std::vector<std::string> out;
  for (const auto& s : c.conjuncts) out.push_back(simple_duration_text(s));
  return paren("and", out);
}

std::string print_canonical(const Structure& s) {
  Writer w;
  w.structure(0, s);
  return w.str();
}

std::string print_canonical(const Domain& d) {
  Writer w;
  w.line(0, "(define (domain " + d.name.name + ")");
  if (d.requirements) w.line(1, requirements_text(*d.requirements));
  if (d.types) w.line(1, "(:types" + (d.types->empty() ? "" : " " + to_text(*d.types)) + ")");
  if (d.predicates) {
    w.line(1, "(:predicates");
    for (const auto& p : *d.predicates) {
      std::string params = to_text(p.params);
      w.line(2, "(" + p.name.name + (params.empty() ? "" : " " + params) + ")");
    }
    w.line(1, ")");
  }
  if (d.functions) {
    std::string f = function_list_text(*d.functions);
    w.line(1, "(:functions" + (f.empty() ? "" : " " + f) + ")");
  }
  if (d.constants)
    w.line(1, "(:constants" + (d.constants->empty() ? "" : " " + to_text(*d.constants)) + ")");
  for (const auto& t : d.tasks)
    w.line(1, "(:task " + t.name.name + " :parameters (" + to_text(t.params) + "))");
  for (const auto& s : d.structures) w.structure(1, s);
  w.line(0, ")");
  return w.str();
}

std::string print_canonical(const Problem& p) {
  Writer w;
  w.line(0, "(define (problem " + p.name.name + ")");
  w.line(1, "(:domain " + p.domain.name + ")");
  if (p.requirements) w.line(1, requirements_text(*p.requirements));
  if (p.objects)
    w.line(1, "(:objects" + (p.objects->empty() ? "" : " " + to_text(*p.objects)) + ")");
  if (p.htn) {
    w.line(1, "(:htn");
    if (p.htn->params) w.line(2, ":parameters (" + to_text(*p.htn->params) + ")");
    w.network(2, p.htn->network);
    w.line(1, ")");
  }
  w.line(1, "(:init");
  for (const auto& e : p.init) w.line(2, init_text(e));
  w.line(1, ")");
  if (p.goal) w.line(1, "(:goal " + to_text(*p.goal) + ")");
  if (p.metric)
    w.line(1, std::string("(:metric ") + (p.metric->minimize ? "minimize" : "maximize") + " " +
                  to_text(p.metric->expr) + ")");
  w.line(0, ")");
  return w.str();
}

}  // namespace hddl
