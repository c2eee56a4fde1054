#include "hddl/parser.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <map>

namespace hddl {

using namespace ast;

const std::vector<std::string>& grammar_productions() {
  static const std::vector<std::string> productions = {
      // domain structure
      "domain", "require-def", "types-def", "predicates-def", "functions-def", "constants-def",
      "tasks-def", "structure-def:action", "structure-def:durative-action",
      "structure-def:method", "structure-def:durative-method", "atomic-formula-skeleton",
      "atomic-function-skeleton", "typed-list", "type:either", "type:primitive",
      "function-typed-list", "function-type:number", "function-type:type",
      // methods and task networks
      "method-def:precondition", "durative-method-def:duration", "durative-method-def:condition",
      "tasknetwork-def:subtasks", "tasknetwork-def:ordered-subtasks", "tasknetwork-def:ordering",
      "tasknetwork-def:constraints", "subtask-defs:empty", "subtask-defs:single",
      "subtask-defs:and", "subtask-def:unlabeled", "subtask-def:labeled", "ordering-defs:empty",
      "ordering-defs:single", "ordering-defs:and", "ordering-def:task-id",
      "ordering-def:time-task-id", "d-task:<", "d-task:>=", "d-task:<=", "d-task:>", "d-task:=",
      "time-specifier:start", "time-specifier:end", "constraint-defs:empty",
      "constraint-defs:single", "constraint-defs:and", "constraint-def:not-equal",
      "constraint-def:equal", "constraint-def:hold-before", "constraint-def:hold-after",
      "constraint-def:hold-between", "constraint-def:hold-during", "constraint-def:at-end",
      "constraint-def:at-start", "constraint-def:always", "constraint-def:at-most-once",
      "constraint-def:sometime", "constraint-def:sometime-before",
      "constraint-def:sometime-after",
      // actions and durations
      "action-def:precondition", "action-def:effect", "durative-action-def:condition",
      "durative-action-def:effect", "action-duration-constraint:and",
      "action-duration-constraint:empty", "action-duration-constraint:simple",
      "action-simple-duration-constraint:d-op", "action-simple-duration-constraint:at",
      "d-op:<=", "d-op:>=", "d-op:=", "d-value:number", "d-value:f-exp",
      // numeric expressions
      "f-exp:number", "f-exp:binary", "f-exp:multi", "f-exp:negate", "f-exp:f-head",
      "f-head:application", "f-head:symbol", "binary-op:-", "binary-op:/", "multi-op:*",
      "multi-op:+", "binary-comp:>", "binary-comp:<", "binary-comp:=", "binary-comp:>=",
      "binary-comp:<=",
      // method durations
      "method-duration-constraint:and", "method-duration-constraint:empty",
      "method-duration-constraint:simple", "simple-method-duration-constraint:comp",
      "simple-method-duration-constraint:at", "duration:?duration", "duration:task-duration",
      "td-value:d-value", "td-value:task-duration",
      // goal descriptions
      "gd:empty", "gd:literal", "gd:and", "gd:or", "gd:not", "gd:imply", "gd:exists",
      "gd:forall", "gd:equal", "gd:f-comp", "literal:atom", "literal:not", "term:name",
      "term:variable", "da-gd:timed-gd", "da-gd:and", "da-gd:forall", "timed-gd:at",
      "timed-gd:over",
      // effects
      "effect:empty", "effect:and", "effect:c-effect", "c-effect:forall", "c-effect:when",
      "c-effect:p-effect", "p-effect:not", "p-effect:atom", "cond-effect:and",
      "cond-effect:p-effect", "da-effect:and", "da-effect:timed-effect", "da-effect:forall",
      "da-effect:when", "timed-effect:cond-effect", "timed-effect:f-assign-da",
      "timed-effect:continuous", "f-assign-da", "f-exp-da:binary", "f-exp-da:multi",
      "f-exp-da:negate", "f-exp-da:?duration", "f-exp-da:f-exp", "assign-op-t:increase",
      "assign-op-t:decrease", "f-exp-t:product-left", "f-exp-t:product-right",
      "f-exp-t:time-step",
      // problems
      "problem", "object-declaration", "init", "init-el:literal", "init-el:timed-literal",
      "init-el:function-init", "basic-function-term:symbol", "basic-function-term:application",
      "goal", "htn", "htn:parameters", "metric-spec", "optimization:minimize",
      "optimization:maximize", "metric-f-exp:binary", "metric-f-exp:multi",
      "metric-f-exp:negate", "metric-f-exp:number", "metric-f-exp:application",
      "metric-f-exp:symbol", "metric-f-exp:total-time"};
  return productions;
}

namespace {

struct Sexp {
  bool is_list = false;
  Token token;
  std::vector<Sexp> items;
  SourceSpan span;
};

struct ParseError : std::exception {
  Diagnostic diag;
  explicit ParseError(Diagnostic d) : diag(std::move(d)) {}
  const char* what() const noexcept override { return diag.message.c_str(); }
};

std::vector<Sexp> read_forest(const std::vector<Token>& tokens, Diagnostics& diags) {
  std::vector<Sexp> top;
  std::vector<Sexp> stack;
  auto append = [&](Sexp s) {
    if (stack.empty())
      top.push_back(std::move(s));
    else
      stack.back().items.push_back(std::move(s));
  };
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::LParen) {
      Sexp s;
      s.is_list = true;
      s.span = t.span;
      stack.push_back(std::move(s));
    } else if (t.kind == TokenKind::RParen) {
      if (stack.empty()) {
        diags.push_back({Severity::Error, t.span, "unbalanced-parens", "unexpected ')'", "s-expression"});
        continue;
      }
      Sexp s = std::move(stack.back());
      stack.pop_back();
      s.span = SourceSpan::cover(s.span, t.span);
      append(std::move(s));
    } else {
      Sexp s;
      s.token = t;
      s.span = t.span;
      append(std::move(s));
    }
  }
  while (!stack.empty()) {
    Sexp s = std::move(stack.back());
    stack.pop_back();
    diags.push_back({Severity::Error, s.span, "unbalanced-parens",
                     "missing ')' for list opened here", "s-expression"});
    if (!s.items.empty()) s.span = SourceSpan::cover(s.span, s.items.back().span);
    append(std::move(s));
  }
  return top;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest(std::string_view word, const std::vector<std::string_view>& options) {
  std::string_view best;
  std::size_t best_d = static_cast<std::size_t>(-1);
  for (auto o : options) {
    std::size_t d = edit_distance(word, o);
    if (d < best_d) {
      best_d = d;
      best = o;
    }
  }
  return std::string(best);
}

std::optional<CompOp> comp_op(std::string_view s) {
  if (s == "<") return CompOp::Lt;
  if (s == "<=") return CompOp::Le;
  if (s == "=") return CompOp::Eq;
  if (s == ">=") return CompOp::Ge;
  if (s == ">") return CompOp::Gt;
  return std::nullopt;
}

std::optional<AssignOp> assign_op(std::string_view s) {
  if (s == "assign") return AssignOp::Assign;
  if (s == "scale-up") return AssignOp::ScaleUp;
  if (s == "scale-down") return AssignOp::ScaleDown;
  if (s == "increase") return AssignOp::Increase;
  if (s == "decrease") return AssignOp::Decrease;
  return std::nullopt;
}

enum class NumCtx { Plain, Duration, Metric };

class GrammarParser {
 public:
  GrammarParser(Diagnostics& diags, ProductionCoverage* coverage)
      : diags_(diags), coverage_(coverage) {}

  // ---- entry points -----------------------------------------------------

  Domain domain(const Sexp& sx) {
    const char* prod = "domain";
    mark(prod);
    require_list(sx, prod);
    Domain d;
    d.info = info(sx);
    if (sx.items.size() < 2 || !is_name(sx.items[0], "define"))
      fail(sx.span, "syntax", "expected (define (domain <name>) ...)", prod);
    const Sexp& header = sx.items[1];
    if (!header.is_list || header.items.size() != 2 || !is_name(header.items[0], "domain"))
      fail(header.span, "syntax", "expected (domain <name>)", prod);
    d.name = symbol(header.items[1], TokenKind::Name, prod);

    static const std::vector<std::string_view> order = {
        ":requirements", ":types", ":predicates", ":functions", ":constants", ":task",
        ":action", ":durative-action", ":method", ":durative-method"};
    int last_rank = -1;
    for (std::size_t i = 2; i < sx.items.size(); ++i) {
      const Sexp& sec = sx.items[i];
      try {
        std::string key = section_key(sec, prod);
        auto it = std::find(order.begin(), order.end(), key);
        if (it == order.end()) {
          fail(sec.items[0].span, "unknown-section",
               "unknown domain section '" + sec.items[0].token.lexeme + "'; did you mean '" +
                   nearest(key, order) + "'?",
               prod);
        }
        int rank = std::min<int>(static_cast<int>(it - order.begin()), 6);
        if (rank < last_rank) {
          warn(sec.span, "section-order",
               "section " + key + " appears after sections that the grammar orders after it",
               prod);
        }
        last_rank = std::max(last_rank, rank);
        domain_section(d, key, sec);
      } catch (const ParseError& e) {
        diags_.push_back(e.diag);
      }
    }
    return d;
  }

  Problem problem(const Sexp& sx) {
    const char* prod = "problem";
    mark(prod);
    require_list(sx, prod);
    Problem p;
    p.info = info(sx);
    if (sx.items.size() < 2 || !is_name(sx.items[0], "define"))
      fail(sx.span, "syntax", "expected (define (problem <name>) ...)", prod);
    const Sexp& header = sx.items[1];
    if (!header.is_list || header.items.size() != 2 || !is_name(header.items[0], "problem"))
      fail(header.span, "syntax", "expected (problem <name>)", prod);
    p.name = symbol(header.items[1], TokenKind::Name, prod);
    std::vector<const Sexp*> sections;
    for (std::size_t i = 2; i < sx.items.size(); ++i) sections.push_back(&sx.items[i]);
    bool has_domain = false;
    bool has_init = false;
    problem_sections(p, sections, has_domain, has_init);
    if (!has_domain) error(sx.span, "missing-section", "problem lacks a (:domain <name>) section", prod);
    if (!has_init) error(sx.span, "missing-section", "problem lacks an (:init ...) section", prod);
    return p;
  }

  void problem_sections(Problem& p, const std::vector<const Sexp*>& sections, bool& has_domain,
                        bool& has_init) {
    const char* prod = "problem";
    static const std::vector<std::string_view> order = {
        ":domain", ":requirements", ":objects", ":htn", ":init", ":goal", ":metric"};
    int last_rank = -1;
    for (const Sexp* sec : sections) {
      try {
        std::string key = section_key(*sec, prod);
        auto it = std::find(order.begin(), order.end(), key);
        if (it == order.end()) {
          fail(sec->items[0].span, "unknown-section",
               "unknown problem section '" + sec->items[0].token.lexeme + "'; did you mean '" +
                   nearest(key, order) + "'?",
               prod);
        }
        int rank = static_cast<int>(it - order.begin());
        if (rank <= last_rank) {
          if (rank == last_rank)
            fail(sec->span, "duplicate-section", "duplicate section " + key, prod);
          warn(sec->span, "section-order",
               "section " + key + " appears after sections that the grammar orders after it",
               prod);
        }
        last_rank = std::max(last_rank, rank);
        if (key == ":domain") has_domain = true;
        if (key == ":init") has_init = true;
        problem_section(p, key, *sec);
      } catch (const ParseError& e) {
        diags_.push_back(e.diag);
      }
    }
  }

  Structure structure(const Sexp& sx) {
    std::string key = section_key(sx, "structure-def");
    if (key == ":action") return action(sx);
    if (key == ":durative-action") return durative_action(sx);
    if (key == ":method") return method(sx);
    if (key == ":durative-method") return durative_method(sx);
    fail(sx.items[0].span, "unknown-section",
         "expected a structure definition; did you mean '" +
             nearest(key, {":action", ":durative-action", ":method", ":durative-method"}) + "'?",
         "structure-def");
  }

  // ---- goal descriptions --------------------------------------------------

  Gd gd(const Sexp& sx) {
    const char* prod = "gd";
    require_list(sx, prod);
    Gd g;
    g.info = info(sx);
    if (sx.items.empty()) {
      mark("gd:empty");
      g.kind = Gd::Kind::Empty;
      return g;
    }
    const Sexp& head = sx.items[0];
    if (head.is_list) fail(head.span, "syntax", "expected a connective or predicate name", prod);
    const std::string& h = head.token.text;
    if (head.token.kind == TokenKind::Name) {
      if (h == "and") {
        mark("gd:and");
        for (std::size_t i = 1; i < sx.items.size(); ++i) g.children.push_back(gd(sx.items[i]));
        g.kind = g.children.empty() ? Gd::Kind::Empty : Gd::Kind::And;
        return g;
      }
      if (h == "or") {
        mark("gd:or");
        g.kind = Gd::Kind::Or;
        for (std::size_t i = 1; i < sx.items.size(); ++i) g.children.push_back(gd(sx.items[i]));
        return g;
      }
      if (h == "not") {
        arity(sx, 2, "(not <gd>)", prod);
        g.kind = Gd::Kind::Not;
        g.children.push_back(gd(sx.items[1]));
        if (g.children[0].kind == Gd::Kind::Atom) {
          mark("gd:literal");
          mark("literal:not");
        } else {
          mark("gd:not");
        }
        return g;
      }
      if (h == "imply") {
        arity(sx, 3, "(imply <gd> <gd>)", prod);
        mark("gd:imply");
        g.kind = Gd::Kind::Imply;
        g.children.push_back(gd(sx.items[1]));
        g.children.push_back(gd(sx.items[2]));
        return g;
      }
      if (h == "exists" || h == "forall") {
        arity(sx, 3, "(" + h + " (<typed list (variable)>) <gd>)", prod);
        mark(h == "exists" ? "gd:exists" : "gd:forall");
        g.kind = h == "exists" ? Gd::Kind::Exists : Gd::Kind::Forall;
        g.variables = typed_list(sx.items[1], TokenKind::Variable, "typed-list");
        g.children.push_back(gd(sx.items[2]));
        return g;
      }
      mark("gd:literal");
      mark("literal:atom");
      g.kind = Gd::Kind::Atom;
      g.atom = atomic_formula(sx, prod);
      return g;
    }
    if (head.token.kind == TokenKind::Operator) {
      auto op = comp_op(h);
      if (!op) fail(head.span, "syntax", "'" + head.token.lexeme + "' is not a comparison", prod);
      arity(sx, 3, "(<binary-comp> <f-exp> <f-exp>)", prod);
      if (*op == CompOp::Eq && is_term(sx.items[1]) && is_term(sx.items[2])) {
        mark("gd:equal");
        g.kind = Gd::Kind::Equal;
        g.left = term(sx.items[1], prod);
        g.right = term(sx.items[2], prod);
        return g;
      }
      mark("gd:f-comp");
      mark_comp(*op);
      g.kind = Gd::Kind::Compare;
      g.comp = *op;
      g.sides.push_back(fexp(sx.items[1], NumCtx::Plain));
      g.sides.push_back(fexp(sx.items[2], NumCtx::Plain));
      return g;
    }
    fail(head.span, "syntax", "expected a goal description", prod);
  }

  DaGd da_gd(const Sexp& sx) {
    const char* prod = "da-gd";
    require_list(sx, prod);
    DaGd g;
    g.info = info(sx);
    if (sx.items.empty()) {
      g.kind = DaGd::Kind::Empty;
      return g;
    }
    const Sexp& head = sx.items[0];
    if (is_name(head, "and")) {
      mark("da-gd:and");
      for (std::size_t i = 1; i < sx.items.size(); ++i) g.children.push_back(da_gd(sx.items[i]));
      g.kind = g.children.empty() ? DaGd::Kind::Empty : DaGd::Kind::And;
      return g;
    }
    if (is_name(head, "forall")) {
      arity(sx, 3, "(forall (<typed list (variable)>) <da-gd>)", prod);
      mark("da-gd:forall");
      g.kind = DaGd::Kind::Forall;
      g.variables = typed_list(sx.items[1], TokenKind::Variable, "typed-list");
      g.children.push_back(da_gd(sx.items[2]));
      return g;
    }
    if (is_name(head, "at")) {
      arity(sx, 3, "(at <time-specifier> <gd>)", "timed-gd");
      mark("da-gd:timed-gd");
      mark("timed-gd:at");
      g.kind = DaGd::Kind::At;
      g.time = time_spec(sx.items[1], "timed-gd");
      g.gd = gd(sx.items[2]);
      return g;
    }
    if (is_name(head, "over")) {
      arity(sx, 3, "(over all <gd>)", "timed-gd");
      if (!is_name(sx.items[1], "all"))
        fail(sx.items[1].span, "syntax", "expected 'all' after 'over'", "timed-gd");
      mark("da-gd:timed-gd");
      mark("timed-gd:over");
      g.kind = DaGd::Kind::OverAll;
      g.gd = gd(sx.items[2]);
      return g;
    }
    fail(sx.span, "syntax", "expected a timed condition (at start|at end|over all <gd>)", prod);
  }

  // ---- effects ------------------------------------------------------------

  Effect effect(const Sexp& sx) {
    const char* prod = "effect";
    require_list(sx, prod);
    Effect e;
    e.info = info(sx);
    if (sx.items.empty()) {
      mark("effect:empty");
      e.kind = Effect::Kind::Empty;
      return e;
    }
    if (is_name(sx.items[0], "and")) {
      mark("effect:and");
      for (std::size_t i = 1; i < sx.items.size(); ++i) e.children.push_back(c_effect(sx.items[i]));
      e.kind = e.children.empty() ? Effect::Kind::Empty : Effect::Kind::And;
      return e;
    }
    mark("effect:c-effect");
    return c_effect(sx);
  }

  Effect c_effect(const Sexp& sx) {
    const char* prod = "c-effect";
    require_list(sx, prod);
    if (!sx.items.empty() && is_name(sx.items[0], "forall")) {
      arity(sx, 3, "(forall (<variable>*) <effect>)", prod);
      mark("c-effect:forall");
      Effect e;
      e.info = info(sx);
      e.kind = Effect::Kind::Forall;
      e.variables = typed_list(sx.items[1], TokenKind::Variable, "typed-list");
      e.children.push_back(effect(sx.items[2]));
      return e;
    }
    if (!sx.items.empty() && is_name(sx.items[0], "when")) {
      arity(sx, 3, "(when <gd> <cond-effect>)", prod);
      mark("c-effect:when");
      Effect e;
      e.info = info(sx);
      e.kind = Effect::Kind::When;
      e.condition.push_back(gd(sx.items[1]));
      e.children.push_back(cond_effect(sx.items[2], false));
      return e;
    }
    mark("c-effect:p-effect");
    return p_effect(sx, false);
  }

  Effect cond_effect(const Sexp& sx, bool da) {
    require_list(sx, "cond-effect");
    if (!sx.items.empty() && is_name(sx.items[0], "and")) {
      mark("cond-effect:and");
      Effect e;
      e.info = info(sx);
      for (std::size_t i = 1; i < sx.items.size(); ++i) e.children.push_back(p_effect(sx.items[i], da));
      e.kind = e.children.empty() ? Effect::Kind::Empty : Effect::Kind::And;
      return e;
    }
    mark("cond-effect:p-effect");
    return p_effect(sx, da);
  }

  Effect p_effect(const Sexp& sx, bool da) {
    const char* prod = "p-effect";
    require_list(sx, prod);
    Effect e;
    e.info = info(sx);
    if (sx.items.empty()) fail(sx.span, "syntax", "empty list is not an effect literal", prod);
    const Sexp& head = sx.items[0];
    if (is_name(head, "not")) {
      arity(sx, 2, "(not <atomic formula(term)>)", prod);
      mark("p-effect:not");
      e.kind = Effect::Kind::Delete;
      e.atom = atomic_formula(sx.items[1], prod);
      return e;
    }
    if (!head.is_list && head.token.kind == TokenKind::Name) {
      if (auto op = assign_op(head.token.text)) {
        arity(sx, 3, "(<assign-op> <f-head> <f-exp>)", prod);
        e.kind = Effect::Kind::Assign;
        e.assign = *op;
        e.operands.push_back(f_head(sx.items[1], NumCtx::Plain));
        e.operands.push_back(fexp(sx.items[2], da ? NumCtx::Duration : NumCtx::Plain));
        return e;
      }
    }
    mark("p-effect:atom");
    e.kind = Effect::Kind::Add;
    e.atom = atomic_formula(sx, prod);
    return e;
  }

  DaEffect da_effect(const Sexp& sx) {
    const char* prod = "da-effect";
    require_list(sx, prod);
    DaEffect e;
    e.info = info(sx);
    if (sx.items.empty()) {
      e.kind = DaEffect::Kind::Empty;
      return e;
    }
    const Sexp& head = sx.items[0];
    if (is_name(head, "and")) {
      mark("da-effect:and");
      for (std::size_t i = 1; i < sx.items.size(); ++i) e.children.push_back(da_effect(sx.items[i]));
      e.kind = e.children.empty() ? DaEffect::Kind::Empty : DaEffect::Kind::And;
      return e;
    }
    if (is_name(head, "forall")) {
      arity(sx, 3, "(forall (<typed list (variable)>) <da-effect>)", prod);
      mark("da-effect:forall");
      e.kind = DaEffect::Kind::Forall;
      e.variables = typed_list(sx.items[1], TokenKind::Variable, "typed-list");
      e.children.push_back(da_effect(sx.items[2]));
      return e;
    }
    if (is_name(head, "when")) {
      arity(sx, 3, "(when <da-gd> <timed-effect>)", prod);
      mark("da-effect:when");
      e.kind = DaEffect::Kind::When;
      e.condition.push_back(da_gd(sx.items[1]));
      e.children.push_back(timed_effect(sx.items[2]));
      return e;
    }
    mark("da-effect:timed-effect");
    return timed_effect(sx);
  }

  DaEffect timed_effect(const Sexp& sx) {
    const char* prod = "timed-effect";
    require_list(sx, prod);
    DaEffect e;
    e.info = info(sx);
    if (sx.items.empty()) fail(sx.span, "syntax", "expected a timed effect", prod);
    const Sexp& head = sx.items[0];
    if (is_name(head, "at")) {
      arity(sx, 3, "(at <time-specifier> <cond-effect>)", prod);
      e.kind = DaEffect::Kind::Timed;
      e.time = time_spec(sx.items[1], prod);
      const Sexp& body = sx.items[2];
      if (body.is_list && !body.items.empty() && !body.items[0].is_list &&
          body.items[0].token.kind == TokenKind::Name && assign_op(body.items[0].token.text)) {
        mark("timed-effect:f-assign-da");
        mark("f-assign-da");
        e.effect = p_effect(body, true);
      } else {
        mark("timed-effect:cond-effect");
        e.effect = cond_effect(body, true);
      }
      return e;
    }
    if (!head.is_list && head.token.kind == TokenKind::Name &&
        (head.token.text == "increase" || head.token.text == "decrease")) {
      arity(sx, 3, "(<assign-op-t> <f-head> <f-exp-t>)", prod);
      mark("timed-effect:continuous");
      mark(head.token.text == "increase" ? "assign-op-t:increase" : "assign-op-t:decrease");
      e.kind = DaEffect::Kind::Continuous;
      e.assign = head.token.text == "increase" ? AssignOp::Increase : AssignOp::Decrease;
      e.operands.push_back(f_head(sx.items[1], NumCtx::Plain));
      e.operands.push_back(fexp_t(sx.items[2]));
      return e;
    }
    fail(sx.span, "syntax",
         "expected a timed effect (at start|end ...) or a continuous increase/decrease", prod);
  }

  // ---- numeric expressions ----------------------------------------------

  FExp fexp(const Sexp& sx, NumCtx ctx) {
    const char* prod = ctx == NumCtx::Metric ? "metric-f-exp" : "f-exp";
    FExp e;
    e.info = info(sx);
    if (!sx.is_list) {
      const Token& t = sx.token;
      switch (t.kind) {
        case TokenKind::Number:
          mark(ctx == NumCtx::Metric ? "metric-f-exp:number" : "f-exp:number");
          if (ctx == NumCtx::Duration) mark("f-exp-da:f-exp");
          e.kind = FExp::Kind::Number;
          e.number = number(sx, prod);
          return e;
        case TokenKind::Name:
          if (ctx == NumCtx::Metric && t.text == "total-time") {
            mark("metric-f-exp:total-time");
            e.kind = FExp::Kind::TotalTime;
            return e;
          }
          if (ctx == NumCtx::Metric) {
            mark("metric-f-exp:symbol");
          } else {
            mark("f-exp:f-head");
            mark("f-head:symbol");
            if (ctx == NumCtx::Duration) mark("f-exp-da:f-exp");
          }
          e.kind = FExp::Kind::Head;
          e.bare = true;
          e.function = symbol(sx, TokenKind::Name, prod);
          return e;
        case TokenKind::Variable:
          if (ctx == NumCtx::Duration && t.text == "?duration") {
            mark("f-exp-da:?duration");
            e.kind = FExp::Kind::DurationVar;
            return e;
          }
          fail(t.span, "syntax",
               "variable " + t.lexeme + " cannot be used as a numeric expression", prod);
        case TokenKind::TimeStep:
          fail(t.span, "syntax", "#t is only allowed in continuous effects", prod);
        default:
          fail(t.span, "syntax", "expected a numeric expression", prod);
      }
    }
    if (sx.items.empty()) fail(sx.span, "syntax", "empty list is not a numeric expression", prod);
    const Sexp& head = sx.items[0];
    if (!head.is_list && head.token.kind == TokenKind::Operator) {
      const std::string& h = head.token.text;
      std::size_t n = sx.items.size() - 1;
      if (h == "-" && n == 1) {
        mark(ctx == NumCtx::Metric ? "metric-f-exp:negate" : "f-exp:negate");
        if (ctx == NumCtx::Duration) mark("f-exp-da:negate");
        e.kind = FExp::Kind::Negate;
        e.operands.push_back(fexp(sx.items[1], ctx));
        return e;
      }
      if (h == "-" || h == "/") {
        if (n != 2)
          fail(sx.span, "arity", "operator '" + h + "' takes exactly two operands", prod);
        mark(ctx == NumCtx::Metric ? "metric-f-exp:binary" : "f-exp:binary");
        if (ctx == NumCtx::Duration) mark("f-exp-da:binary");
        mark(h == "-" ? "binary-op:-" : "binary-op:/");
        e.kind = FExp::Kind::Binary;
        e.op = h == "-" ? ArithOp::Sub : ArithOp::Div;
        e.operands.push_back(fexp(sx.items[1], ctx));
        e.operands.push_back(fexp(sx.items[2], ctx));
        return e;
      }
      if (h == "*" || h == "+") {
        if (n < 2)
          fail(sx.span, "arity", "operator '" + h + "' takes at least two operands", prod);
        mark(ctx == NumCtx::Metric ? "metric-f-exp:multi" : "f-exp:multi");
        if (ctx == NumCtx::Duration) mark("f-exp-da:multi");
        mark(h == "*" ? "multi-op:*" : "multi-op:+");
        e.kind = FExp::Kind::Multi;
        e.op = h == "*" ? ArithOp::Mul : ArithOp::Add;
        for (std::size_t i = 1; i < sx.items.size(); ++i) e.operands.push_back(fexp(sx.items[i], ctx));
        return e;
      }
      fail(head.span, "syntax", "'" + head.token.lexeme + "' is not an arithmetic operator", prod);
    }
    if (ctx == NumCtx::Metric) {
      mark("metric-f-exp:application");
      e = f_head(sx, ctx);
      return e;
    }
    mark("f-exp:f-head");
    if (ctx == NumCtx::Duration) mark("f-exp-da:f-exp");
    return f_head(sx, ctx);
  }

  FExp f_head(const Sexp& sx, NumCtx ctx) {
    const char* prod = "f-head";
    FExp e;
    e.info = info(sx);
    e.kind = FExp::Kind::Head;
    if (!sx.is_list) {
      if (ctx != NumCtx::Metric) mark("f-head:symbol");
      e.bare = true;
      e.function = symbol(sx, TokenKind::Name, prod);
      return e;
    }
    if (sx.items.empty()) fail(sx.span, "syntax", "expected a function application", prod);
    if (ctx != NumCtx::Metric) mark("f-head:application");
    e.function = symbol(sx.items[0], TokenKind::Name, prod);
    for (std::size_t i = 1; i < sx.items.size(); ++i) {
      const Sexp& a = sx.items[i];
      if (a.is_list) {
        // Recover locally so the rest of the structure can still be checked.
        error(a.span, "malformed-function-application",
              "malformed function application: argument of '" + e.function.info.spelling +
                  "' must be a term, not a list",
              prod);
        e.malformed = true;
        continue;
      }
      if (ctx == NumCtx::Metric && a.token.kind != TokenKind::Name)
        fail(a.span, "syntax", "metric function arguments must be object names", "metric-f-exp");
      e.args.push_back(term(a, prod));
    }
    return e;
  }

  FExp fexp_t(const Sexp& sx) {
    const char* prod = "f-exp-t";
    FExp e;
    e.info = info(sx);
    if (!sx.is_list && sx.token.kind == TokenKind::TimeStep) {
      mark("f-exp-t:time-step");
      e.kind = FExp::Kind::TimeStep;
      return e;
    }
    if (sx.is_list && sx.items.size() == 3 && !sx.items[0].is_list &&
        sx.items[0].token.text == "*") {
      auto is_ts = [](const Sexp& s) { return !s.is_list && s.token.kind == TokenKind::TimeStep; };
      e.kind = FExp::Kind::Multi;
      e.op = ArithOp::Mul;
      FExp ts;
      if (is_ts(sx.items[2]) && !is_ts(sx.items[1])) {
        mark("f-exp-t:product-left");
        ts.info = info(sx.items[2]);
        ts.kind = FExp::Kind::TimeStep;
        e.operands.push_back(fexp(sx.items[1], NumCtx::Plain));
        e.operands.push_back(std::move(ts));
        return e;
      }
      if (is_ts(sx.items[1]) && !is_ts(sx.items[2])) {
        mark("f-exp-t:product-right");
        ts.info = info(sx.items[1]);
        ts.kind = FExp::Kind::TimeStep;
        e.operands.push_back(std::move(ts));
        e.operands.push_back(fexp(sx.items[2], NumCtx::Plain));
        return e;
      }
    }
    fail(sx.span, "syntax", "continuous rate must be #t, (* <f-exp> #t) or (* #t <f-exp>)", prod);
  }

  // ---- durations ----------------------------------------------------------

  DurationConstraint action_duration(const Sexp& sx) {
    const char* prod = "action-duration-constraint";
    require_list(sx, prod);
    DurationConstraint d;
    d.info = info(sx);
    if (sx.items.empty()) {
      mark("action-duration-constraint:empty");
      return d;
    }
    if (is_name(sx.items[0], "and")) {
      mark("action-duration-constraint:and");
      d.conjunction = true;
      for (std::size_t i = 1; i < sx.items.size(); ++i)
        d.conjuncts.push_back(simple_action_duration(sx.items[i]));
      if (d.conjuncts.empty()) d.conjunction = false;
      return d;
    }
    mark("action-duration-constraint:simple");
    d.conjuncts.push_back(simple_action_duration(sx));
    return d;
  }

  SimpleDurationConstraint simple_action_duration(const Sexp& sx) {
    const char* prod = "action-simple-duration-constraint";
    require_list(sx, prod);
    if (sx.items.size() == 3 && is_name(sx.items[0], "at")) {
      mark("action-simple-duration-constraint:at");
      TimeSpec t = time_spec(sx.items[1], prod);
      SimpleDurationConstraint c = simple_action_duration(sx.items[2]);
      c.at.insert(c.at.begin(), t);
      c.info = info(sx);
      return c;
    }
    arity(sx, 3, "(<d-op> ?duration <d-value>)", prod);
    SimpleDurationConstraint c;
    c.info = info(sx);
    const Sexp& op = sx.items[0];
    auto cop = op.is_list ? std::nullopt : comp_op(op.token.text);
    if (!cop || *cop == CompOp::Lt || *cop == CompOp::Gt)
      fail(op.span, "syntax", "action duration constraints use <=, >= or =", prod);
    mark("action-simple-duration-constraint:d-op");
    mark(std::string("d-op:") + std::string(to_string(*cop)));
    c.op = *cop;
    if (sx.items[1].is_list || sx.items[1].token.text != "?duration")
      fail(sx.items[1].span, "syntax", "expected ?duration", prod);
    c.left.kind = DurationOperand::Kind::Self;
    c.left.info = info(sx.items[1]);
    c.right = d_value(sx.items[2]);
    return c;
  }

  DurationOperand d_value(const Sexp& sx) {
    DurationOperand v;
    v.info = info(sx);
    v.kind = DurationOperand::Kind::Value;
    if (!sx.is_list && sx.token.kind == TokenKind::Number) {
      mark("d-value:number");
      FExp n;
      n.info = info(sx);
      n.kind = FExp::Kind::Number;
      n.number = number(sx, "d-value");
      v.value.push_back(std::move(n));
      return v;
    }
    mark("d-value:f-exp");
    v.value.push_back(fexp(sx, NumCtx::Plain));
    return v;
  }

  DurationConstraint method_duration(const Sexp& sx) {
    const char* prod = "method-duration-constraint";
    require_list(sx, prod);
    DurationConstraint d;
    d.info = info(sx);
    if (sx.items.empty()) {
      mark("method-duration-constraint:empty");
      return d;
    }
    if (is_name(sx.items[0], "and")) {
      mark("method-duration-constraint:and");
      d.conjunction = true;
      for (std::size_t i = 1; i < sx.items.size(); ++i)
        d.conjuncts.push_back(simple_method_duration(sx.items[i]));
      if (d.conjuncts.empty()) d.conjunction = false;
      return d;
    }
    mark("method-duration-constraint:simple");
    d.conjuncts.push_back(simple_method_duration(sx));
    return d;
  }

  SimpleDurationConstraint simple_method_duration(const Sexp& sx) {
    const char* prod = "simple-method-duration-constraint";
    require_list(sx, prod);
    if (sx.items.size() == 3 && is_name(sx.items[0], "at")) {
      mark("simple-method-duration-constraint:at");
      TimeSpec t = time_spec(sx.items[1], prod);
      SimpleDurationConstraint c = simple_method_duration(sx.items[2]);
      c.at.insert(c.at.begin(), t);
      c.info = info(sx);
      return c;
    }
    arity(sx, 3, "(<binary-comp> <duration> <td-value>)", prod);
    SimpleDurationConstraint c;
    c.info = info(sx);
    const Sexp& op = sx.items[0];
    auto cop = op.is_list ? std::nullopt : comp_op(op.token.text);
    if (!cop) fail(op.span, "syntax", "expected a comparison operator", prod);
    mark("simple-method-duration-constraint:comp");
    mark_comp(*cop);
    c.op = *cop;
    const Sexp& l = sx.items[1];
    if (!l.is_list && l.token.text == "?duration") {
      mark("duration:?duration");
      c.left.kind = DurationOperand::Kind::Self;
      c.left.info = info(l);
    } else if (is_task_duration(l)) {
      mark("duration:task-duration");
      c.left = task_duration(l);
    } else {
      fail(l.span, "syntax", "expected ?duration or (duration <task-id>)", prod);
    }
    const Sexp& r = sx.items[2];
    if (is_task_duration(r)) {
      mark("td-value:task-duration");
      c.right = task_duration(r);
    } else {
      mark("td-value:d-value");
      c.right = d_value(r);
    }
    return c;
  }

  // ---- task networks ------------------------------------------------------

  /// Consumes task-network keywords from `fields`; returns false when none.
  TaskNetwork task_network(const std::vector<std::pair<const Sexp*, const Sexp*>>& fields,
                           const SourceSpan& span) {
    const char* prod = "tasknetwork-def";
    TaskNetwork n;
    n.info.span = span;
    bool first = true;
    for (auto [key, value] : fields) {
      const std::string& k = key->token.text;
      if (first) {
        n.info.span = SourceSpan::cover(key->span, value->span);
        first = false;
      } else {
        n.info.span = SourceSpan::cover(n.info.span, value->span);
      }
      if (k == ":subtasks" || k == ":tasks" || k == ":ordered-subtasks" || k == ":ordered-tasks") {
        if (n.has_subtasks) fail(key->span, "duplicate-section", "duplicate subtask section", prod);
        n.has_subtasks = true;
        n.ordered = k.rfind(":ordered-", 0) == 0;
        mark(n.ordered ? "tasknetwork-def:ordered-subtasks" : "tasknetwork-def:subtasks");
        n.subtasks = subtask_defs(*value);
      } else if (k == ":ordering" || k == ":order") {
        if (n.has_orderings) fail(key->span, "duplicate-section", "duplicate ordering section", prod);
        mark("tasknetwork-def:ordering");
        n.has_orderings = true;
        n.orderings = ordering_defs(*value);
      } else if (k == ":constraints") {
        if (n.has_constraints)
          fail(key->span, "duplicate-section", "duplicate constraints section", prod);
        mark("tasknetwork-def:constraints");
        n.has_constraints = true;
        n.constraints = constraint_defs(*value);
      }
    }
    if (n.ordered && n.has_orderings && !n.orderings.empty())
      error(n.info.span, "ordering-conflict",
            "ordered subtasks cannot be combined with explicit ordering constraints", prod);
    return n;
  }

  std::vector<Subtask> subtask_defs(const Sexp& sx) {
    const char* prod = "subtask-defs";
    require_list(sx, prod);
    std::vector<Subtask> out;
    if (sx.items.empty()) {
      mark("subtask-defs:empty");
      return out;
    }
    if (is_name(sx.items[0], "and")) {
      mark(sx.items.size() == 1 ? "subtask-defs:empty" : "subtask-defs:and");
      for (std::size_t i = 1; i < sx.items.size(); ++i) out.push_back(subtask_def(sx.items[i]));
      return out;
    }
    mark("subtask-defs:single");
    out.push_back(subtask_def(sx));
    return out;
  }

  Subtask subtask_def(const Sexp& sx) {
    const char* prod = "subtask-def";
    require_list(sx, prod);
    Subtask s;
    s.info = info(sx);
    if (sx.items.size() >= 2 && sx.items[1].is_list) {
      if (sx.items.size() != 2)
        fail(sx.span, "syntax", "labeled subtask must be (<subtask> (<task-symbol> <term>*))", prod);
      mark("subtask-def:labeled");
      s.label = symbol(sx.items[0], TokenKind::Name, prod);
      s.task = task_app(sx.items[1], prod);
      return s;
    }
    mark("subtask-def:unlabeled");
    s.task = task_app(sx, prod);
    return s;
  }

  std::vector<OrderingDef> ordering_defs(const Sexp& sx) {
    const char* prod = "ordering-defs";
    require_list(sx, prod);
    std::vector<OrderingDef> out;
    if (sx.items.empty()) {
      mark("ordering-defs:empty");
      return out;
    }
    if (is_name(sx.items[0], "and")) {
      mark(sx.items.size() == 1 ? "ordering-defs:empty" : "ordering-defs:and");
      for (std::size_t i = 1; i < sx.items.size(); ++i) out.push_back(ordering_def(sx.items[i]));
      return out;
    }
    mark("ordering-defs:single");
    out.push_back(ordering_def(sx));
    return out;
  }

  OrderingDef ordering_def(const Sexp& sx) {
    const char* prod = "ordering-def";
    require_list(sx, prod);
    arity(sx, 3, "(<d-task> <task-id> <task-id>)", prod);
    OrderingDef o;
    o.info = info(sx);
    const Sexp& op = sx.items[0];
    auto cop = op.is_list ? std::nullopt : comp_op(op.token.text);
    if (!cop) fail(op.span, "syntax", "expected an ordering operator (<, <=, =, >=, >)", prod);
    o.op = *cop;
    mark(std::string("d-task:") + std::string(to_string(*cop)));
    bool l_dec = sx.items[1].is_list;
    bool r_dec = sx.items[2].is_list;
    if (l_dec != r_dec)
      fail(sx.span, "syntax",
           "both ordering endpoints must be plain task ids or both time-decorated", prod);
    if (!l_dec) {
      if (*cop != CompOp::Lt)
        fail(op.span, "syntax",
             "undecorated task ids can only be ordered with '<'; use (start id)/(end id)", prod);
      mark("ordering-def:task-id");
      o.left.task = symbol(sx.items[1], TokenKind::Name, prod);
      o.left.info = info(sx.items[1]);
      o.right.task = symbol(sx.items[2], TokenKind::Name, prod);
      o.right.info = info(sx.items[2]);
      return o;
    }
    mark("ordering-def:time-task-id");
    o.left = time_point(sx.items[1]);
    o.right = time_point(sx.items[2]);
    return o;
  }

  TimePoint time_point(const Sexp& sx) {
    const char* prod = "time-task-id";
    arity(sx, 2, "(<time-specifier> <task-id>)", prod);
    TimePoint p;
    p.info = info(sx);
    p.spec = time_spec(sx.items[0], prod);
    p.task = symbol(sx.items[1], TokenKind::Name, prod);
    return p;
  }

  std::vector<ConstraintDef> constraint_defs(const Sexp& sx) {
    const char* prod = "constraint-defs";
    require_list(sx, prod);
    std::vector<ConstraintDef> out;
    if (sx.items.empty()) {
      mark("constraint-defs:empty");
      return out;
    }
    if (is_name(sx.items[0], "and")) {
      mark(sx.items.size() == 1 ? "constraint-defs:empty" : "constraint-defs:and");
      for (std::size_t i = 1; i < sx.items.size(); ++i) out.push_back(constraint_def(sx.items[i]));
      return out;
    }
    mark("constraint-defs:single");
    out.push_back(constraint_def(sx));
    return out;
  }

  ConstraintDef constraint_def(const Sexp& sx) {
    const char* prod = "constraint-def";
    require_list(sx, prod);
    using K = ConstraintDef::Kind;
    ConstraintDef c;
    c.info = info(sx);
    if (sx.items.empty() || sx.items[0].is_list)
      fail(sx.span, "syntax", "expected a method constraint", prod);
    const std::string& h = sx.items[0].token.text;
    auto with_tasks = [&](K kind, std::size_t n_tasks, const char* shape) {
      arity(sx, 2 + n_tasks, shape, prod);
      c.kind = kind;
      for (std::size_t i = 0; i < n_tasks; ++i)
        c.tasks.push_back(symbol(sx.items[1 + i], TokenKind::Name, prod));
      c.gd = gd(sx.items[1 + n_tasks]);
      mark(std::string("constraint-def:") + std::string(to_string(kind)));
      return c;
    };
    if (h == "not") {
      arity(sx, 2, "(not (= <term> <term>))", prod);
      const Sexp& eq = sx.items[1];
      if (!eq.is_list || eq.items.size() != 3 || eq.items[0].is_list || eq.items[0].token.text != "=")
        fail(eq.span, "syntax", "expected (= <term> <term>) under not", prod);
      mark("constraint-def:not-equal");
      c.kind = K::NotEqual;
      c.left = term(eq.items[1], prod);
      c.right = term(eq.items[2], prod);
      return c;
    }
    if (h == "=") {
      arity(sx, 3, "(= <term> <term>)", prod);
      mark("constraint-def:equal");
      c.kind = K::Equal;
      c.left = term(sx.items[1], prod);
      c.right = term(sx.items[2], prod);
      return c;
    }
    if (h == "hold-before") return with_tasks(K::HoldBefore, 1, "(hold-before <task-id> <gd>)");
    if (h == "hold-after") return with_tasks(K::HoldAfter, 1, "(hold-after <task-id> <gd>)");
    if (h == "hold-between")
      return with_tasks(K::HoldBetween, 2, "(hold-between <task-id> <task-id> <gd>)");
    if (h == "hold-during")
      return with_tasks(K::HoldDuring, 2, "(hold-during <task-id> <task-id> <gd>)");
    if (h == "always") return with_tasks(K::Always, 0, "(always <gd>)");
    if (h == "at-most-once") return with_tasks(K::AtMostOnce, 0, "(at-most-once <gd>)");
    if (h == "sometime") return with_tasks(K::Sometime, 0, "(sometime <gd>)");
    if (h == "sometime-before")
      return with_tasks(K::SometimeBefore, 1, "(sometime-before <task-id> <gd>)");
    if (h == "sometime-after")
      return with_tasks(K::SometimeAfter, 1, "(sometime-after <task-id> <gd>)");
    if (h == "at") {
      arity(sx, 3, "(at start <gd>) or (at end <effect>)", prod);
      TimeSpec t = time_spec(sx.items[1], prod);
      if (t == TimeSpec::Start) {
        mark("constraint-def:at-start");
        c.kind = K::AtStart;
        c.gd = gd(sx.items[2]);
      } else {
        mark("constraint-def:at-end");
        c.kind = K::AtEnd;
        c.effect = effect(sx.items[2]);
      }
      return c;
    }
    static const std::vector<std::string_view> known = {
        "hold-before", "hold-after", "hold-between", "hold-during", "always", "at-most-once",
        "sometime", "sometime-before", "sometime-after", "at", "not", "="};
    fail(sx.items[0].span, "syntax",
         "unknown method constraint '" + sx.items[0].token.lexeme + "'; did you mean '" +
             nearest(h, known) + "'?",
         prod);
  }

 private:
  // ---- domain sections ----------------------------------------------------

  void domain_section(Domain& d, const std::string& key, const Sexp& sec) {
    auto once = [&](bool present) {
      if (present) fail(sec.span, "duplicate-section", "duplicate section " + key, "domain");
    };
    if (key == ":requirements") {
      once(d.requirements.has_value());
      mark("require-def");
      d.requirements = requirement_list(sec);
    } else if (key == ":types") {
      once(d.types.has_value());
      mark("types-def");
      d.types = typed_list_items(sec, 1, TokenKind::Name, "types-def");
    } else if (key == ":predicates") {
      once(d.predicates.has_value());
      mark("predicates-def");
      d.predicates.emplace();
      for (std::size_t i = 1; i < sec.items.size(); ++i) {
        const Sexp& p = sec.items[i];
        mark("atomic-formula-skeleton");
        require_list(p, "atomic-formula-skeleton");
        if (p.items.empty()) fail(p.span, "syntax", "expected (<predicate> <typed-list(variable)>)", "atomic-formula-skeleton");
        PredicateSkeleton s;
        s.info = info(p);
        s.name = symbol(p.items[0], TokenKind::Name, "atomic-formula-skeleton");
        s.params = typed_list_items(p, 1, TokenKind::Variable, "atomic-formula-skeleton");
        d.predicates->push_back(std::move(s));
      }
    } else if (key == ":functions") {
      once(d.functions.has_value());
      mark("functions-def");
      d.functions = function_typed_list(sec);
    } else if (key == ":constants") {
      once(d.constants.has_value());
      mark("constants-def");
      d.constants = typed_list_items(sec, 1, TokenKind::Name, "constants-def");
    } else if (key == ":task") {
      mark("tasks-def");
      d.tasks.push_back(task_skeleton(sec));
    } else {
      d.structures.push_back(structure(sec));
    }
  }

  std::vector<Symbol> requirement_list(const Sexp& sec) {
    std::vector<Symbol> out;
    for (std::size_t i = 1; i < sec.items.size(); ++i)
      out.push_back(symbol(sec.items[i], TokenKind::Keyword, "require-def"));
    return out;
  }

  std::vector<FunctionSkeleton> function_typed_list(const Sexp& sec) {
    const char* prod = "function-typed-list";
    std::vector<FunctionSkeleton> out;
    std::size_t pending_from = 0;
    for (std::size_t i = 1; i < sec.items.size(); ++i) {
      const Sexp& it = sec.items[i];
      if (it.is_list) {
        mark("atomic-function-skeleton");
        if (it.items.empty()) fail(it.span, "syntax", "expected (<function> <typed-list(variable)>)", "atomic-function-skeleton");
        FunctionSkeleton f;
        f.info = info(it);
        f.name = symbol(it.items[0], TokenKind::Name, "atomic-function-skeleton");
        f.params = typed_list_items(it, 1, TokenKind::Variable, "atomic-function-skeleton");
        out.push_back(std::move(f));
        continue;
      }
      if (it.token.kind == TokenKind::Operator && it.token.text == "-") {
        if (i + 1 >= sec.items.size())
          fail(it.span, "syntax", "expected a function type after '-'", prod);
        if (pending_from == out.size())
          fail(it.span, "syntax", "function type without preceding function skeletons", prod);
        mark(prod);
        const Sexp& ty = sec.items[++i];
        FunctionSkeleton::Result r;
        std::optional<Type> rt;
        if (!ty.is_list && ty.token.text == "number") {
          mark("function-type:number");
          r = FunctionSkeleton::Result::Number;
        } else {
          mark("function-type:type");
          r = FunctionSkeleton::Result::Object;
          rt = type(ty);
        }
        for (std::size_t j = pending_from; j < out.size(); ++j) {
          out[j].result = r;
          out[j].result_type = rt;
        }
        pending_from = out.size();
        continue;
      }
      fail(it.span, "syntax", "expected a function skeleton or '- <function-type>'", prod);
    }
    return out;
  }

  TaskSkeleton task_skeleton(const Sexp& sec) {
    const char* prod = "task-def";
    TaskSkeleton t;
    t.info = info(sec);
    if (sec.items.size() < 2) fail(sec.span, "syntax", "expected (:task <name> :parameters (...))", prod);
    t.name = symbol(sec.items[1], TokenKind::Name, prod);
    auto fields = keyword_fields(sec, 2, {":parameters"}, prod);
    for (auto [k, v] : fields) t.params = typed_list(*v, TokenKind::Variable, "typed-list");
    return t;
  }

  // ---- structures ---------------------------------------------------------

  using Fields = std::vector<std::pair<const Sexp*, const Sexp*>>;

  Fields keyword_fields(const Sexp& sx, std::size_t from,
                        const std::vector<std::string_view>& allowed, const char* prod) {
    Fields out;
    std::vector<std::string> seen;
    for (std::size_t i = from; i < sx.items.size(); i += 2) {
      const Sexp& k = sx.items[i];
      if (k.is_list || k.token.kind != TokenKind::Keyword)
        fail(k.span, "syntax", "expected a :keyword", prod);
      if (std::find(allowed.begin(), allowed.end(), k.token.text) == allowed.end())
        fail(k.span, "unknown-section",
             "unexpected keyword '" + k.token.lexeme + "'; did you mean '" +
                 nearest(k.token.text, allowed) + "'?",
             prod);
      if (std::find(seen.begin(), seen.end(), k.token.text) != seen.end())
        fail(k.span, "duplicate-section", "duplicate keyword " + k.token.text, prod);
      seen.push_back(k.token.text);
      if (i + 1 >= sx.items.size())
        fail(k.span, "syntax", "keyword " + k.token.text + " has no value", prod);
      out.emplace_back(&k, &sx.items[i + 1]);
    }
    return out;
  }

  static const Sexp* field(const Fields& f, std::string_view key) {
    for (auto [k, v] : f)
      if (k->token.text == key) return v;
    return nullptr;
  }

  static Fields network_fields(const Fields& f) {
    Fields out;
    for (auto kv : f) {
      const std::string& k = kv.first->token.text;
      if (k == ":subtasks" || k == ":tasks" || k == ":ordered-subtasks" ||
          k == ":ordered-tasks" || k == ":ordering" || k == ":order" || k == ":constraints")
        out.push_back(kv);
    }
    return out;
  }

  static SourceSpan network_anchor(const Sexp& sx) {
    SourceSpan s = sx.span;
    s.begin = s.end > 0 ? s.end - 1 : 0;
    s.start_line = s.end_line;
    s.start_col = s.end_col > 1 ? s.end_col - 1 : 1;
    return s;
  }

  Action action(const Sexp& sx) {
    const char* prod = "action-def";
    mark("structure-def:action");
    Action a;
    a.info = info(sx);
    if (sx.items.size() < 2) fail(sx.span, "syntax", "expected (:action <name> ...)", prod);
    a.name = symbol(sx.items[1], TokenKind::Name, prod);
    auto f = keyword_fields(sx, 2, {":parameters", ":precondition", ":effect"}, prod);
    if (auto* p = field(f, ":parameters")) a.params = typed_list(*p, TokenKind::Variable, "typed-list");
    if (auto* p = field(f, ":precondition")) {
      mark("action-def:precondition");
      a.precondition = gd(*p);
    }
    if (auto* e = field(f, ":effect")) {
      mark("action-def:effect");
      a.effect = effect(*e);
    }
    return a;
  }

  DurativeAction durative_action(const Sexp& sx) {
    const char* prod = "durative-action-def";
    mark("structure-def:durative-action");
    DurativeAction a;
    a.info = info(sx);
    if (sx.items.size() < 2) fail(sx.span, "syntax", "expected (:durative-action <name> ...)", prod);
    a.name = symbol(sx.items[1], TokenKind::Name, prod);
    auto f = keyword_fields(sx, 2, {":parameters", ":duration", ":condition", ":precondition", ":effect"}, prod);
    if (auto* p = field(f, ":parameters")) a.params = typed_list(*p, TokenKind::Variable, "typed-list");
    const Sexp* dur = field(f, ":duration");
    if (!dur) fail(sx.span, "missing-section", "durative action requires a :duration", prod);
    a.duration = action_duration(*dur);
    const Sexp* cond = field(f, ":condition");
    const Sexp* pre = field(f, ":precondition");
    if (cond && pre) fail(pre->span, "duplicate-section", "both :condition and :precondition given", prod);
    if (!cond) cond = pre;
    if (cond) {
      mark("durative-action-def:condition");
      a.condition = da_gd(*cond);
    }
    if (auto* e = field(f, ":effect")) {
      mark("durative-action-def:effect");
      a.effect = da_effect(*e);
    }
    return a;
  }

  Method method(const Sexp& sx) {
    const char* prod = "method-def";
    mark("structure-def:method");
    Method m;
    m.info = info(sx);
    if (sx.items.size() < 2) fail(sx.span, "syntax", "expected (:method <name> ...)", prod);
    m.name = symbol(sx.items[1], TokenKind::Name, prod);
    auto f = keyword_fields(sx, 2,
                            {":parameters", ":task", ":precondition", ":subtasks", ":tasks",
                             ":ordered-subtasks", ":ordered-tasks", ":ordering", ":order",
                             ":constraints"},
                            prod);
    if (auto* p = field(f, ":parameters")) m.params = typed_list(*p, TokenKind::Variable, "typed-list");
    const Sexp* task = field(f, ":task");
    if (!task) fail(sx.span, "missing-section", "method requires a :task", prod);
    m.task = task_app(*task, prod);
    if (auto* p = field(f, ":precondition")) {
      mark("method-def:precondition");
      m.precondition = gd(*p);
    }
    m.network = task_network(network_fields(f), network_anchor(sx));
    return m;
  }

  DurativeMethod durative_method(const Sexp& sx) {
    const char* prod = "durative-method-def";
    mark("structure-def:durative-method");
    DurativeMethod m;
    m.info = info(sx);
    if (sx.items.size() < 2) fail(sx.span, "syntax", "expected (:durative-method <name> ...)", prod);
    m.name = symbol(sx.items[1], TokenKind::Name, prod);
    auto f = keyword_fields(sx, 2,
                            {":parameters", ":task", ":duration", ":condition", ":subtasks",
                             ":tasks", ":ordered-subtasks", ":ordered-tasks", ":ordering",
                             ":order", ":constraints"},
                            prod);
    if (auto* p = field(f, ":parameters")) m.params = typed_list(*p, TokenKind::Variable, "typed-list");
    const Sexp* task = field(f, ":task");
    if (!task) fail(sx.span, "missing-section", "durative method requires a :task", prod);
    m.task = task_app(*task, prod);
    if (auto* d = field(f, ":duration")) {
      mark("durative-method-def:duration");
      m.duration = method_duration(*d);
    }
    if (auto* c = field(f, ":condition")) {
      mark("durative-method-def:condition");
      m.condition = da_gd(*c);
    }
    m.network = task_network(network_fields(f), network_anchor(sx));
    return m;
  }

  // ---- problem sections ---------------------------------------------------

  void problem_section(Problem& p, const std::string& key, const Sexp& sec) {
    if (key == ":domain") {
      if (sec.items.size() != 2) fail(sec.span, "syntax", "expected (:domain <name>)", "problem");
      p.domain = symbol(sec.items[1], TokenKind::Name, "problem");
    } else if (key == ":requirements") {
      mark("require-def");
      p.requirements = requirement_list(sec);
    } else if (key == ":objects") {
      mark("object-declaration");
      p.objects = typed_list_items(sec, 1, TokenKind::Name, "object-declaration");
    } else if (key == ":htn") {
      mark("htn");
      InitialTaskNetwork h;
      h.info = info(sec);
      auto f = keyword_fields(sec, 1,
                              {":parameters", ":subtasks", ":tasks", ":ordered-subtasks",
                               ":ordered-tasks", ":ordering", ":order", ":constraints"},
                              "htn");
      if (auto* ps = field(f, ":parameters")) {
        mark("htn:parameters");
        h.params = typed_list(*ps, TokenKind::Variable, "typed-list");
      }
      h.network = task_network(network_fields(f), network_anchor(sec));
      p.htn = std::move(h);
    } else if (key == ":init") {
      mark("init");
      for (std::size_t i = 1; i < sec.items.size(); ++i) p.init.push_back(init_el(sec.items[i]));
    } else if (key == ":goal") {
      mark("goal");
      if (sec.items.size() != 2) fail(sec.span, "syntax", "expected (:goal <gd>)", "goal");
      p.goal = gd(sec.items[1]);
    } else if (key == ":metric") {
      mark("metric-spec");
      if (sec.items.size() != 3) fail(sec.span, "syntax", "expected (:metric <optimization> <metric-f-exp>)", "metric-spec");
      Metric m;
      m.info = info(sec);
      const Sexp& opt = sec.items[1];
      if (is_name(opt, "minimize")) {
        mark("optimization:minimize");
        m.minimize = true;
      } else if (is_name(opt, "maximize")) {
        mark("optimization:maximize");
        m.minimize = false;
      } else {
        fail(opt.span, "syntax", "expected minimize or maximize", "metric-spec");
      }
      m.expr = fexp(sec.items[2], NumCtx::Metric);
      p.metric = std::move(m);
    }
  }

  InitElement init_el(const Sexp& sx) {
    const char* prod = "init-el";
    require_list(sx, prod);
    InitElement e;
    e.info = info(sx);
    if (sx.items.empty()) fail(sx.span, "syntax", "empty init element", prod);
    const Sexp& head = sx.items[0];
    if (is_name(head, "at") && sx.items.size() == 3 && !sx.items[1].is_list &&
        sx.items[1].token.kind == TokenKind::Number) {
      mark("init-el:timed-literal");
      e.kind = InitElement::Kind::Timed;
      e.time = number(sx.items[1], prod);
      ground_literal(sx.items[2], e);
      return e;
    }
    if (!head.is_list && head.token.kind == TokenKind::Operator && head.token.text == "=") {
      arity(sx, 3, "(= <basic-function-term> <number>)", prod);
      mark("init-el:function-init");
      e.kind = InitElement::Kind::FunctionInit;
      const Sexp& f = sx.items[1];
      if (f.is_list) {
        mark("basic-function-term:application");
        if (f.items.empty()) fail(f.span, "syntax", "expected a function term", "basic-function-term");
        e.function = symbol(f.items[0], TokenKind::Name, "basic-function-term");
        for (std::size_t i = 1; i < f.items.size(); ++i)
          e.function_args.push_back(symbol(f.items[i], TokenKind::Name, "basic-function-term"));
      } else {
        mark("basic-function-term:symbol");
        e.bare_function = true;
        e.function = symbol(f, TokenKind::Name, "basic-function-term");
      }
      if (sx.items[2].is_list || sx.items[2].token.kind != TokenKind::Number)
        fail(sx.items[2].span, "syntax", "function initial value must be a number", prod);
      e.value = number(sx.items[2], prod);
      return e;
    }
    mark("init-el:literal");
    e.kind = InitElement::Kind::Literal;
    ground_literal(sx, e);
    return e;
  }

  void ground_literal(const Sexp& sx, InitElement& e) {
    const char* prod = "literal";
    require_list(sx, prod);
    if (!sx.items.empty() && is_name(sx.items[0], "not")) {
      arity(sx, 2, "(not <atomic formula(name)>)", prod);
      mark("literal:not");
      e.negated = true;
      e.atom = atomic_formula(sx.items[1], prod);
    } else {
      mark("literal:atom");
      e.atom = atomic_formula(sx, prod);
    }
    for (const Term& t : e.atom.args)
      if (t.is_variable)
        fail(t.info.span, "syntax", "initial state literals must be ground", prod);
  }

  // ---- shared pieces ------------------------------------------------------

  AtomicFormula atomic_formula(const Sexp& sx, const char* prod) {
    require_list(sx, prod);
    if (sx.items.empty()) fail(sx.span, "syntax", "expected (<predicate> <term>*)", prod);
    AtomicFormula a;
    a.info = info(sx);
    a.predicate = symbol(sx.items[0], TokenKind::Name, prod);
    for (std::size_t i = 1; i < sx.items.size(); ++i) a.args.push_back(term(sx.items[i], prod));
    return a;
  }

  TaskApp task_app(const Sexp& sx, const char* prod) {
    require_list(sx, prod);
    if (sx.items.empty()) fail(sx.span, "syntax", "expected (<task-symbol> <term>*)", prod);
    TaskApp t;
    t.info = info(sx);
    t.name = symbol(sx.items[0], TokenKind::Name, prod);
    for (std::size_t i = 1; i < sx.items.size(); ++i) t.args.push_back(term(sx.items[i], prod));
    return t;
  }

  Term term(const Sexp& sx, const char* prod) {
    if (sx.is_list || (sx.token.kind != TokenKind::Name && sx.token.kind != TokenKind::Variable))
      fail(sx.span, "syntax", "expected a term (name or ?variable)", prod);
    Term t;
    t.is_variable = sx.token.kind == TokenKind::Variable;
    mark(t.is_variable ? "term:variable" : "term:name");
    t.name = sx.token.text;
    t.info = info(sx);
    return t;
  }

  static bool is_term(const Sexp& sx) {
    return !sx.is_list &&
           (sx.token.kind == TokenKind::Name || sx.token.kind == TokenKind::Variable);
  }

  static bool is_task_duration(const Sexp& sx) {
    return sx.is_list && sx.items.size() == 2 && is_name(sx.items[0], "duration") &&
           !sx.items[1].is_list && sx.items[1].token.kind == TokenKind::Name;
  }

  DurationOperand task_duration(const Sexp& sx) {
    DurationOperand d;
    d.info = info(sx);
    d.kind = DurationOperand::Kind::Task;
    d.task = symbol(sx.items[1], TokenKind::Name, "task-duration");
    return d;
  }

  TypedList typed_list(const Sexp& sx, TokenKind kind, const char* prod) {
    require_list(sx, prod);
    return typed_list_items(sx, 0, kind, prod);
  }

  TypedList typed_list_items(const Sexp& sx, std::size_t from, TokenKind kind, const char* prod) {
    TypedList out;
    std::size_t pending_from = 0;
    for (std::size_t i = from; i < sx.items.size(); ++i) {
      const Sexp& it = sx.items[i];
      if (!it.is_list && it.token.kind == TokenKind::Operator && it.token.text == "-") {
        if (pending_from == out.size())
          fail(it.span, "syntax", "'-' must follow at least one list item", prod);
        if (i + 1 >= sx.items.size()) fail(it.span, "syntax", "expected a type after '-'", prod);
        mark("typed-list");
        Type t = type(sx.items[++i]);
        for (std::size_t j = pending_from; j < out.size(); ++j) out[j].type = t;
        pending_from = out.size();
        continue;
      }
      TypedName n;
      n.name = symbol(it, kind, prod);
      out.push_back(std::move(n));
    }
    return out;
  }

  Type type(const Sexp& sx) {
    const char* prod = "type";
    Type t;
    t.info = info(sx);
    if (sx.is_list) {
      if (sx.items.size() < 2 || !is_name(sx.items[0], "either"))
        fail(sx.span, "syntax", "expected (either <primitive-type>+)", prod);
      mark("type:either");
      t.either = true;
      for (std::size_t i = 1; i < sx.items.size(); ++i)
        t.names.push_back(symbol(sx.items[i], TokenKind::Name, prod));
      return t;
    }
    mark("type:primitive");
    t.names.push_back(symbol(sx, TokenKind::Name, prod));
    return t;
  }

  TimeSpec time_spec(const Sexp& sx, const char* prod) {
    if (is_name(sx, "start")) {
      mark("time-specifier:start");
      return TimeSpec::Start;
    }
    if (is_name(sx, "end")) {
      mark("time-specifier:end");
      return TimeSpec::End;
    }
    fail(sx.span, "syntax", "expected a time specifier (start or end)", prod);
  }

  Number number(const Sexp& sx, const char* prod) {
    if (sx.is_list || sx.token.kind != TokenKind::Number)
      fail(sx.span, "syntax", "expected a number", prod);
    Number n;
    n.text = sx.token.lexeme;
    std::string_view s = n.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n.value);
    if (ec != std::errc() || ptr != s.data() + s.size())
      fail(sx.span, "malformed-number", "malformed number '" + n.text + "'", prod);
    return n;
  }

  void mark_comp(CompOp op) { mark(std::string("binary-comp:") + std::string(to_string(op))); }

  Symbol symbol(const Sexp& sx, TokenKind kind, const char* prod) {
    if (sx.is_list || sx.token.kind != kind) {
      std::string what = kind == TokenKind::Variable  ? "a ?variable"
                         : kind == TokenKind::Keyword ? "a :keyword"
                                                      : "a name";
      fail(sx.span, "syntax", "expected " + what, prod);
    }
    Symbol s;
    s.name = sx.token.text;
    s.info = info(sx);
    return s;
  }

  std::string section_key(const Sexp& sx, const char* prod) {
    if (!sx.is_list || sx.items.empty() || sx.items[0].is_list ||
        sx.items[0].token.kind != TokenKind::Keyword)
      fail(sx.span, "syntax", "expected a (:section ...) list", prod);
    return sx.items[0].token.text;
  }

  static NodeInfo info(const Sexp& sx) {
    NodeInfo i;
    i.span = sx.span;
    if (!sx.is_list) i.spelling = sx.token.lexeme;
    return i;
  }

  static bool is_name(const Sexp& sx, std::string_view n) {
    return !sx.is_list && sx.token.kind == TokenKind::Name && sx.token.text == n;
  }

  void require_list(const Sexp& sx, const char* prod) {
    if (!sx.is_list)
      fail(sx.span, "syntax", "expected '(' but found '" + sx.token.lexeme + "'", prod);
  }

  void arity(const Sexp& sx, std::size_t n, const std::string& shape, const char* prod) {
    if (sx.items.size() != n) fail(sx.span, "arity", "expected " + shape, prod);
  }

  void mark(std::string_view production) {
    if (coverage_) coverage_->hit.emplace(production);
  }

  [[noreturn]] void fail(const SourceSpan& span, std::string code, std::string message,
                         std::string_view production) {
    throw ParseError(Diagnostic{Severity::Error, span, std::move(code), std::move(message),
                                std::string(production)});
  }

  void error(const SourceSpan& span, std::string code, std::string message,
             std::string_view production) {
    diags_.push_back({Severity::Error, span, std::move(code), std::move(message), std::string(production)});
  }

  void warn(const SourceSpan& span, std::string code, std::string message,
            std::string_view production) {
    diags_.push_back({Severity::Warning, span, std::move(code), std::move(message), std::string(production)});
  }

  Diagnostics& diags_;
  ProductionCoverage* coverage_;
};

template <class T, class F>
ParseResult<T> run_single(const std::vector<Token>& tokens, ParseOptions opts, const char* what,
                          F&& body) {
  ParseResult<T> r;
  std::vector<Sexp> forest = read_forest(tokens, r.diagnostics);
  if (forest.size() != 1) {
    SourceSpan span = forest.empty() ? SourceSpan{} : forest[1].span;
    r.diagnostics.push_back({Severity::Error, span, "syntax",
                             forest.empty() ? std::string("expected ") + what
                                            : std::string("unexpected input after ") + what,
                             what});
    if (forest.empty()) return r;
  }
  GrammarParser p(r.diagnostics, opts.coverage);
  try {
    r.ast = body(p, forest.front());
  } catch (const ParseError& e) {
    r.diagnostics.push_back(e.diag);
  }
  return r;
}

template <class T, class F>
ParseResult<T> with_lex(std::string_view text, FileId file, F&& f) {
  LexResult lex = tokenize(text, file);
  ParseResult<T> r = f(lex.tokens);
  r.diagnostics.insert(r.diagnostics.begin(), lex.diagnostics.begin(), lex.diagnostics.end());
  return r;
}

}  // namespace

ParseResult<Domain> parse_domain(const std::vector<Token>& tokens, ParseOptions opts) {
  return run_single<Domain>(tokens, opts, "domain",
                            [](GrammarParser& p, const Sexp& s) { return p.domain(s); });
}

ParseResult<Problem> parse_problem(const std::vector<Token>& tokens, ParseOptions opts) {
  return run_single<Problem>(tokens, opts, "problem",
                             [](GrammarParser& p, const Sexp& s) { return p.problem(s); });
}

ParseResult<Domain> parse_domain_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<Domain>(text, file, [&](const auto& t) { return parse_domain(t, opts); });
}

ParseResult<Problem> parse_problem_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<Problem>(text, file, [&](const auto& t) { return parse_problem(t, opts); });
}

ParseResult<Structure> parse_structure_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<Structure>(text, file, [&](const auto& t) {
    return run_single<Structure>(t, opts, "structure-def",
                                 [](GrammarParser& p, const Sexp& s) { return p.structure(s); });
  });
}

ParseResult<std::vector<Structure>> parse_structures_text(std::string_view text, FileId file,
                                                          ParseOptions opts) {
  return with_lex<std::vector<Structure>>(text, file, [&](const auto& tokens) {
    ParseResult<std::vector<Structure>> r;
    std::vector<Sexp> forest = read_forest(tokens, r.diagnostics);
    GrammarParser p(r.diagnostics, opts.coverage);
    r.ast.emplace();
    for (const Sexp& s : forest) {
      try {
        r.ast->push_back(p.structure(s));
      } catch (const ParseError& e) {
        r.diagnostics.push_back(e.diag);
      }
    }
    return r;
  });
}

ParseResult<Problem> parse_problem_sections_text(std::string_view text, FileId file,
                                                 ParseOptions opts) {
  return with_lex<Problem>(text, file, [&](const auto& tokens) {
    ParseResult<Problem> r;
    std::vector<Sexp> forest = read_forest(tokens, r.diagnostics);
    GrammarParser p(r.diagnostics, opts.coverage);
    Problem prob;
    std::vector<const Sexp*> sections;
    for (const Sexp& s : forest) sections.push_back(&s);
    if (!forest.empty()) prob.info.span = SourceSpan::cover(forest.front().span, forest.back().span);
    bool has_domain = false;
    bool has_init = false;
    p.problem_sections(prob, sections, has_domain, has_init);
    r.ast = std::move(prob);
    return r;
  });
}

ParseResult<Gd> parse_gd_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<Gd>(text, file, [&](const auto& t) {
    return run_single<Gd>(t, opts, "gd", [](GrammarParser& p, const Sexp& s) { return p.gd(s); });
  });
}

ParseResult<FExp> parse_fexp_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<FExp>(text, file, [&](const auto& t) {
    return run_single<FExp>(t, opts, "f-exp", [](GrammarParser& p, const Sexp& s) {
      return p.fexp(s, NumCtx::Plain);
    });
  });
}

ParseResult<Effect> parse_effect_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<Effect>(text, file, [&](const auto& t) {
    return run_single<Effect>(t, opts, "effect",
                              [](GrammarParser& p, const Sexp& s) { return p.effect(s); });
  });
}

ParseResult<DaGd> parse_da_gd_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<DaGd>(text, file, [&](const auto& t) {
    return run_single<DaGd>(t, opts, "da-gd",
                            [](GrammarParser& p, const Sexp& s) { return p.da_gd(s); });
  });
}

ParseResult<DaEffect> parse_da_effect_text(std::string_view text, FileId file, ParseOptions opts) {
  return with_lex<DaEffect>(text, file, [&](const auto& t) {
    return run_single<DaEffect>(t, opts, "da-effect",
                                [](GrammarParser& p, const Sexp& s) { return p.da_effect(s); });
  });
}

ParseResult<TaskNetwork> parse_task_network_text(std::string_view text, FileId file,
                                                 ParseOptions opts) {
  return with_lex<TaskNetwork>(text, file, [&](const auto& tokens) {
    ParseResult<TaskNetwork> r;
    std::vector<Sexp> forest = read_forest(tokens, r.diagnostics);
    Sexp wrapper;
    wrapper.is_list = true;
    wrapper.items = std::move(forest);
    if (!wrapper.items.empty())
      wrapper.span = SourceSpan::cover(wrapper.items.front().span, wrapper.items.back().span);
    GrammarParser p(r.diagnostics, opts.coverage);
    try {
      std::vector<std::pair<const Sexp*, const Sexp*>> fields;
      for (std::size_t i = 0; i + 1 < wrapper.items.size(); i += 2) {
        const Sexp& k = wrapper.items[i];
        if (k.is_list || k.token.kind != TokenKind::Keyword) {
          r.diagnostics.push_back({Severity::Error, k.span, "syntax", "expected a :keyword",
                                   "tasknetwork-def"});
          return r;
        }
        fields.emplace_back(&k, &wrapper.items[i + 1]);
      }
      r.ast = p.task_network(fields, wrapper.span);
    } catch (const ParseError& e) {
      r.diagnostics.push_back(e.diag);
    }
    return r;
  });
}

}  // namespace hddl
