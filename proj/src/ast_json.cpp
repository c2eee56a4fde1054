#include "hddl/ast_json.hpp"

#include <type_traits>

namespace hddl {

using namespace ast;
using nlohmann::json;

namespace {

json span(const NodeInfo& i) {
  return json::array({i.span.start_line, i.span.start_col, i.span.end_line, i.span.end_col});
}

json node(const char* kind, const NodeInfo& i) { return json{{"kind", kind}, {"span", span(i)}}; }

json typed(const TypedList& l) {
  json out = json::array();
  for (const auto& t : l) {
    json e{{"name", t.name.name}};
    if (t.type) {
      json names = json::array();
      for (const auto& n : t.type->names) names.push_back(n.name);
      e["type"] = t.type->either ? json{{"either", names}} : json(names.at(0));
    } else {
      e["type"] = "object";
    }
    out.push_back(e);
  }
  return out;
}

json terms(const std::vector<Term>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(t.name);
  return out;
}

json fexp(const FExp& e);
json gd(const Gd& g);
json effect(const Effect& e);
json da_gd(const DaGd& g);
json da_effect(const DaEffect& e);

json fexp(const FExp& e) {
  switch (e.kind) {
    case FExp::Kind::Number: {
      json j = node("number", e.info);
      j["value"] = e.number.value;
      return j;
    }
    case FExp::Kind::Head: {
      json j = node("function-head", e.info);
      j["function"] = e.function.name;
      j["args"] = terms(e.args);
      if (e.malformed) j["malformed"] = true;
      return j;
    }
    case FExp::Kind::Negate: {
      json j = node("negate", e.info);
      j["operand"] = fexp(e.operands.at(0));
      return j;
    }
    case FExp::Kind::Binary:
    case FExp::Kind::Multi: {
      json j = node(e.kind == FExp::Kind::Binary ? "binary" : "multi", e.info);
      j["op"] = std::string(to_string(e.op));
      j["operands"] = json::array();
      for (const auto& o : e.operands) j["operands"].push_back(fexp(o));
      return j;
    }
    case FExp::Kind::DurationVar:
      return node("duration-var", e.info);
    case FExp::Kind::TimeStep:
      return node("time-step", e.info);
    case FExp::Kind::TotalTime:
      return node("total-time", e.info);
  }
  return json();
}

json atom(const AtomicFormula& a) {
  json j = node("atom", a.info);
  j["predicate"] = a.predicate.name;
  j["args"] = terms(a.args);
  return j;
}

json gd(const Gd& g) {
  static const char* names[] = {"empty", "atom", "and",   "or",    "not",
                                "imply", "exists", "forall", "equal", "compare"};
  json j = node(names[static_cast<int>(g.kind)], g.info);
  switch (g.kind) {
    case Gd::Kind::Atom:
      j["atom"] = atom(g.atom);
      break;
    case Gd::Kind::Exists:
    case Gd::Kind::Forall:
      j["variables"] = typed(g.variables);
      [[fallthrough]];
    case Gd::Kind::And:
    case Gd::Kind::Or:
    case Gd::Kind::Not:
    case Gd::Kind::Imply:
      j["children"] = json::array();
      for (const auto& c : g.children) j["children"].push_back(gd(c));
      break;
    case Gd::Kind::Equal:
      j["left"] = g.left.name;
      j["right"] = g.right.name;
      break;
    case Gd::Kind::Compare:
      j["comparison"] = std::string(to_string(g.comp));
      j["left"] = fexp(g.sides.at(0));
      j["right"] = fexp(g.sides.at(1));
      break;
    case Gd::Kind::Empty:
      break;
  }
  return j;
}

json effect(const Effect& e) {
  static const char* names[] = {"empty", "and", "forall", "when", "add", "delete", "assign"};
  json j = node(names[static_cast<int>(e.kind)], e.info);
  switch (e.kind) {
    case Effect::Kind::Add:
    case Effect::Kind::Delete:
      j["atom"] = atom(e.atom);
      break;
    case Effect::Kind::Assign:
      j["op"] = std::string(to_string(e.assign));
      j["target"] = fexp(e.operands.at(0));
      j["value"] = fexp(e.operands.at(1));
      break;
    case Effect::Kind::When:
      j["condition"] = gd(e.condition.at(0));
      [[fallthrough]];
    case Effect::Kind::Forall:
      if (e.kind == Effect::Kind::Forall) j["variables"] = typed(e.variables);
      [[fallthrough]];
    case Effect::Kind::And:
      j["children"] = json::array();
      for (const auto& c : e.children) j["children"].push_back(effect(c));
      break;
    case Effect::Kind::Empty:
      break;
  }
  return j;
}

json da_gd(const DaGd& g) {
  static const char* names[] = {"empty", "and", "forall", "at", "over-all"};
  json j = node(names[static_cast<int>(g.kind)], g.info);
  switch (g.kind) {
    case DaGd::Kind::At:
      j["time"] = std::string(to_string(g.time));
      [[fallthrough]];
    case DaGd::Kind::OverAll:
      j["gd"] = gd(g.gd);
      break;
    case DaGd::Kind::Forall:
      j["variables"] = typed(g.variables);
      [[fallthrough]];
    case DaGd::Kind::And:
      j["children"] = json::array();
      for (const auto& c : g.children) j["children"].push_back(da_gd(c));
      break;
    case DaGd::Kind::Empty:
      break;
  }
  return j;
}

json da_effect(const DaEffect& e) {
  static const char* names[] = {"empty", "and", "forall", "when", "timed", "continuous"};
  json j = node(names[static_cast<int>(e.kind)], e.info);
  switch (e.kind) {
    case DaEffect::Kind::Timed:
      j["time"] = std::string(to_string(e.time));
      j["effect"] = effect(e.effect);
      break;
    case DaEffect::Kind::Continuous:
      j["op"] = std::string(to_string(e.assign));
      j["target"] = fexp(e.operands.at(0));
      j["rate"] = fexp(e.operands.at(1));
      break;
    case DaEffect::Kind::When:
      j["condition"] = da_gd(e.condition.at(0));
      [[fallthrough]];
    case DaEffect::Kind::Forall:
      if (e.kind == DaEffect::Kind::Forall) j["variables"] = typed(e.variables);
      [[fallthrough]];
    case DaEffect::Kind::And:
      j["children"] = json::array();
      for (const auto& c : e.children) j["children"].push_back(da_effect(c));
      break;
    case DaEffect::Kind::Empty:
      break;
  }
  return j;
}

json operand(const DurationOperand& d) {
  switch (d.kind) {
    case DurationOperand::Kind::Self:
      return node("duration-var", d.info);
    case DurationOperand::Kind::Task: {
      json j = node("task-duration", d.info);
      j["task"] = d.task.name;
      return j;
    }
    case DurationOperand::Kind::Value:
      return fexp(d.value.at(0));
  }
  return json();
}

json duration(const DurationConstraint& c) {
  json j = node("duration-constraint", c.info);
  j["conjuncts"] = json::array();
  for (const auto& s : c.conjuncts) {
    json k = node("simple-duration-constraint", s.info);
    json at = json::array();
    for (auto t : s.at) at.push_back(std::string(to_string(t)));
    if (!at.empty()) k["at"] = at;
    k["comparison"] = std::string(to_string(s.op));
    k["left"] = operand(s.left);
    k["right"] = operand(s.right);
    j["conjuncts"].push_back(k);
  }
  return j;
}

json time_point(const TimePoint& p) {
  json j{{"task", p.task.name}};
  if (p.spec) j["time"] = std::string(to_string(*p.spec));
  return j;
}

json network(const TaskNetwork& n) {
  json j = node("task-network", n.info);
  j["ordered"] = n.ordered;
  j["subtasks"] = json::array();
  for (const auto& s : n.subtasks) {
    json k = node("subtask", s.info);
    if (s.label) k["label"] = s.label->name;
    k["task"] = s.task.name.name;
    k["args"] = terms(s.task.args);
    j["subtasks"].push_back(k);
  }
  j["orderings"] = json::array();
  for (const auto& o : n.orderings) {
    json k = node("ordering", o.info);
    k["comparison"] = std::string(to_string(o.op));
    k["left"] = time_point(o.left);
    k["right"] = time_point(o.right);
    j["orderings"].push_back(k);
  }
  j["constraints"] = json::array();
  for (const auto& c : n.constraints) {
    json k = node(std::string(to_string(c.kind)).c_str(), c.info);
    using K = ConstraintDef::Kind;
    if (c.kind == K::Equal || c.kind == K::NotEqual) {
      k["left"] = c.left.name;
      k["right"] = c.right.name;
    } else if (c.kind == K::AtEnd) {
      k["effect"] = effect(c.effect);
    } else {
      json tasks = json::array();
      for (const auto& t : c.tasks) tasks.push_back(t.name);
      k["tasks"] = tasks;
      k["gd"] = gd(c.gd);
    }
    j["constraints"].push_back(k);
  }
  return j;
}

json task_app(const TaskApp& t) {
  return json{{"task", t.name.name}, {"args", terms(t.args)}, {"span", span(t.info)}};
}

}  // namespace

json to_json(const Structure& s) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        json j;
        if constexpr (std::is_same_v<T, Action>) {
          j = node("action", x.info);
          if (x.precondition) j["precondition"] = gd(*x.precondition);
          if (x.effect) j["effect"] = effect(*x.effect);
        } else if constexpr (std::is_same_v<T, DurativeAction>) {
          j = node("durative-action", x.info);
          j["duration"] = duration(x.duration);
          if (x.condition) j["condition"] = da_gd(*x.condition);
          if (x.effect) j["effect"] = da_effect(*x.effect);
        } else if constexpr (std::is_same_v<T, Method>) {
          j = node("method", x.info);
          j["task"] = task_app(x.task);
          if (x.precondition) j["precondition"] = gd(*x.precondition);
          j["network"] = network(x.network);
        } else {
          j = node("durative-method", x.info);
          j["task"] = task_app(x.task);
          if (x.duration) j["duration"] = duration(*x.duration);
          if (x.condition) j["condition"] = da_gd(*x.condition);
          j["network"] = network(x.network);
        }
        j["name"] = x.name.name;
        j["parameters"] = typed(x.params);
        return j;
      },
      s);
}

json to_json(const Domain& d) {
  json j = node("domain", d.info);
  j["name"] = d.name.name;
  json req = json::array();
  if (d.requirements)
    for (const auto& r : *d.requirements) req.push_back(r.name);
  j["requirements"] = req;
  j["types"] = d.types ? typed(*d.types) : json::array();
  j["predicates"] = json::array();
  if (d.predicates)
    for (const auto& p : *d.predicates)
      j["predicates"].push_back(json{{"name", p.name.name}, {"parameters", typed(p.params)}});
  j["functions"] = json::array();
  if (d.functions)
    for (const auto& f : *d.functions) {
      json k{{"name", f.name.name}, {"parameters", typed(f.params)}};
      if (f.result == FunctionSkeleton::Result::Number) k["result"] = "number";
      if (f.result == FunctionSkeleton::Result::Object)
        k["result"] = f.result_type ? json(f.result_type->names.at(0).name) : json("object");
      j["functions"].push_back(k);
    }
  j["constants"] = d.constants ? typed(*d.constants) : json::array();
  j["tasks"] = json::array();
  for (const auto& t : d.tasks)
    j["tasks"].push_back(json{{"name", t.name.name}, {"parameters", typed(t.params)}});
  j["structures"] = json::array();
  for (const auto& s : d.structures) j["structures"].push_back(to_json(s));
  return j;
}

json to_json(const Problem& p) {
  json j = node("problem", p.info);
  j["name"] = p.name.name;
  j["domain-name"] = p.domain.name;
  json req = json::array();
  if (p.requirements)
    for (const auto& r : *p.requirements) req.push_back(r.name);
  j["requirements"] = req;
  j["objects"] = p.objects ? typed(*p.objects) : json::array();
  if (p.htn) {
    json h = node("htn", p.htn->info);
    h["parameters"] = p.htn->params ? typed(*p.htn->params) : json::array();
    h["network"] = network(p.htn->network);
    j["htn"] = h;
  }
  j["init"] = json::array();
  for (const auto& e : p.init) {
    json k;
    switch (e.kind) {
      case InitElement::Kind::Literal:
      case InitElement::Kind::Timed:
        k = node(e.kind == InitElement::Kind::Timed ? "timed-literal" : "literal", e.info);
        k["negated"] = e.negated;
        k["atom"] = atom(e.atom);
        if (e.kind == InitElement::Kind::Timed) k["time"] = e.time.value;
        break;
      case InitElement::Kind::FunctionInit: {
        k = node("function-init", e.info);
        k["function"] = e.function.name;
        json args = json::array();
        for (const auto& a : e.function_args) args.push_back(a.name);
        k["args"] = args;
        k["value"] = e.value.value;
        break;
      }
    }
    j["init"].push_back(k);
  }
  if (p.goal) j["goal"] = gd(*p.goal);
  if (p.metric) {
    j["metric"] = json{{"optimization", p.metric->minimize ? "minimize" : "maximize"},
                       {"expression", fexp(p.metric->expr)}};
  }
  return j;
}

}  // namespace hddl
