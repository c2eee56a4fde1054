#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hddl/lexer.hpp"
#include "hddl/parser.hpp"
#include "hddl/printer.hpp"
#include "hddl/requirements.hpp"

using namespace hddl;
using namespace hddl::testing;

namespace {

std::vector<TokenKind> kinds(const LexResult& r) {
  std::vector<TokenKind> out;
  for (const auto& t : r.tokens) out.push_back(t.kind);
  return out;
}

bool has_code(const Diagnostics& ds, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::string squash(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

ast::Structure only(const ParseResult<std::vector<ast::Structure>>& r) {
  REQUIRE(r.ok());
  REQUIRE(r.ast->size() == 1);
  return r.ast->front();
}

}  // namespace

TEST_CASE("tokenize") {
  auto r = tokenize("(= ?duration 1.00000)");
  CHECK(r.diagnostics.empty());
  CHECK(kinds(r) == std::vector<TokenKind>{TokenKind::LParen, TokenKind::Operator,
                                           TokenKind::Variable, TokenKind::Number,
                                           TokenKind::RParen});
  CHECK(r.tokens[2].text == "?duration");
  CHECK(r.tokens[3].lexeme == "1.00000");

  CHECK(tokenize("").tokens.empty());

  auto c = tokenize("; comment\n(and)");
  CHECK(kinds(c) == std::vector<TokenKind>{TokenKind::LParen, TokenKind::Name, TokenKind::RParen});
  CHECK(c.tokens[1].text == "and");
  CHECK(c.tokens[1].span.start_line == 2);
}

TEST_CASE("lexing keeps going past illegal characters") {
  auto r = tokenize("(a $ b & c)");
  CHECK(r.diagnostics.size() == 2);
  CHECK(r.tokens.size() == 5);
}

TEST_CASE("calibrate action") {
  const auto s = only(parse_structures_text(corpus_text("figures/fig1-calibrate.hddl")));
  const auto* a = std::get_if<ast::DurativeAction>(&s);
  REQUIRE(a);
  CHECK(a->name.name == "calibrate");
  REQUIRE(a->duration.conjuncts.size() == 1);
  const auto& d = a->duration.conjuncts[0];
  CHECK(d.op == ast::CompOp::Eq);
  CHECK(d.left.kind == ast::DurationOperand::Kind::Self);
  REQUIRE(d.right.kind == ast::DurationOperand::Kind::Value);
  const auto& head = d.right.value.at(0);
  CHECK(head.kind == ast::FExp::Kind::Head);
  CHECK(head.function.name == "calib-time");
  REQUIRE(head.args.size() == 1);
  CHECK(head.args[0].name == "?c_i");

  REQUIRE(a->condition);
  REQUIRE(a->condition->kind == ast::DaGd::Kind::And);
  CHECK(a->condition->children.size() == 4);
  for (const auto& c : a->condition->children) {
    CHECK(c.kind == ast::DaGd::Kind::At);
    CHECK(c.time == ast::TimeSpec::Start);
  }
  REQUIRE(a->effect);
  std::vector<ast::DaEffect> effects =
      a->effect->kind == ast::DaEffect::Kind::And ? a->effect->children
                                                  : std::vector<ast::DaEffect>{*a->effect};
  REQUIRE(effects.size() == 1);
  CHECK(effects[0].kind == ast::DaEffect::Kind::Timed);
  CHECK(effects[0].time == ast::TimeSpec::End);
}

TEST_CASE("method_observe") {
  const auto s = only(parse_structures_text(corpus_text("figures/fig5-method-observe.hddl")));
  const auto* m = std::get_if<ast::DurativeMethod>(&s);
  REQUIRE(m);
  REQUIRE(m->duration);
  REQUIRE(m->duration->conjuncts.size() == 1);
  const auto& d = m->duration->conjuncts[0];
  CHECK(d.op == ast::CompOp::Lt);
  CHECK(d.left.kind == ast::DurationOperand::Kind::Task);
  CHECK(d.left.task.name == "task1");
  CHECK(d.right.value.at(0).function.name == "calib-time");

  const auto& n = m->network;
  REQUIRE(n.subtasks.size() == 3);
  for (int i = 0; i < 3; ++i) {
    REQUIRE(n.subtasks[static_cast<std::size_t>(i)].label);
    CHECK(n.subtasks[static_cast<std::size_t>(i)].label->name == "task" + std::to_string(i));
  }
  REQUIRE(n.orderings.size() == 2);
  CHECK(n.orderings[0].left.task.name == "task0");
  CHECK(n.orderings[0].right.task.name == "task2");
  CHECK(n.orderings[1].left.task.name == "task1");
  CHECK_FALSE(n.orderings[1].left.spec);
  REQUIRE(n.constraints.size() == 2);
  CHECK(n.constraints[0].kind == ast::ConstraintDef::Kind::NotEqual);
  CHECK(n.constraints[1].kind == ast::ConstraintDef::Kind::HoldBefore);
  CHECK(n.constraints[1].tasks.at(0).name == "task1");
  CHECK(n.constraints[1].gd.atom.predicate.name == "power_on");
}

TEST_CASE("minimal domain and problem") {
  auto d = parse_domain_text("(define (domain d))");
  REQUIRE(d.ok());
  CHECK(d.ast->name.name == "d");
  CHECK_FALSE(d.ast->requirements);
  CHECK_FALSE(d.ast->types);
  CHECK(d.ast->structures.empty());
  CHECK(squash(print_canonical(*d.ast)) == "(define(domaind))");

  auto p = parse_problem_text("(define (problem p) (:domain d) (:init))");
  REQUIRE(p.ok());
  CHECK(p.ast->init.empty());
  CHECK_FALSE(p.ast->htn);
  CHECK_FALSE(p.ast->goal);
}

TEST_CASE("timed literals and function inits") {
  auto r = parse_problem_sections_text(corpus_text("figures/fig2-init.hddl"));
  REQUIRE(r.ok());
  std::vector<const ast::InitElement*> timed;
  for (const auto& e : r.ast->init)
    if (e.kind == ast::InitElement::Kind::Timed) timed.push_back(&e);
  REQUIRE(timed.size() == 2);
  CHECK(timed[0]->time.value == 500);
  CHECK_FALSE(timed[0]->negated);
  CHECK(timed[0]->atom.predicate.name == "observable");
  CHECK(timed[0]->atom.args.at(0).name == "site");
  CHECK(timed[1]->time.value == 1000);
  CHECK(timed[1]->negated);

  auto p = parse_problem_text(
      "(define (problem p) (:domain d) (:init (= (calib-time instrument0) 20)))");
  REQUIRE(p.ok());
  REQUIRE(p.ast->init.size() == 1);
  const auto& f = p.ast->init[0];
  CHECK(f.kind == ast::InitElement::Kind::FunctionInit);
  CHECK(f.function.name == "calib-time");
  CHECK(f.function_args.at(0).name == "instrument0");
  CHECK(f.value.value == 20);
}

TEST_CASE("metric section prints unchanged") {
  auto p = parse_problem_text(
      "(define (problem p) (:domain d) (:init) (:metric minimize total-time))");
  REQUIRE(p.ok());
  CHECK(print_canonical(*p.ast).find("(:metric minimize total-time)") != std::string::npos);
}

TEST_CASE("case is normalised, spelling is kept for messages") {
  auto upper = parse_gd_text("(AND (On_Board ?X Sat0) (NOT (Pointing ?X Site)))");
  auto lower = parse_gd_text("(and (on_board ?x sat0) (not (pointing ?x site)))");
  REQUIRE(upper.ok());
  REQUIRE(lower.ok());
  CHECK(*upper.ast == *lower.ast);
  CHECK(upper.ast->children[0].atom.predicate.info.spelling == "On_Board");

  auto d = parse_domain_text("(define (domain d) (:requirements :Hierarchy :NoSuchFlag))");
  REQUIRE(d.ast);
  Diagnostics diags;
  read_requirements(*d.ast->requirements, diags);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find(":NoSuchFlag") != std::string::npos);
}

TEST_CASE("unbalanced parentheses are reported with a span") {
  auto r = parse_domain_text("(define (domain d)\n  (:types a b)\n");
  REQUIRE_FALSE(r.ok());
  CHECK(has_code(r.diagnostics, "unbalanced-parens"));
  for (const auto& d : r.diagnostics) CHECK(d.span.start_line >= 1);
}

TEST_CASE("recovery reports problems in several structures") {
  auto r = parse_domain_text(R"((define (domain d)
  (:action a :parameters (?x) :precondition (and (p ?x) (or)) :effect (q ?x) :bogus 1)
  (:action b :parameters (?y) :effect (and (when)))
  (:action c :parameters () :effect (r)))
)");
  CHECK(std::count_if(r.diagnostics.begin(), r.diagnostics.end(),
                      [](const Diagnostic& d) { return d.severity == Severity::Error; }) >= 2);
  REQUIRE(r.ast);
  // The intact action survives.
  CHECK(std::any_of(r.ast->structures.begin(), r.ast->structures.end(),
                    [](const ast::Structure& s) { return ast::structure_name(s).name == "c"; }));
}

TEST_CASE("diagnostic format") {
  Diagnostic d{Severity::Error, SourceSpan{0, 3, 7, 3, 9, 0, 0}, "unbound-variable",
               "unbound variable ?x", "term"};
  CHECK(format_diagnostic(d, "dom.hddl") ==
        "dom.hddl:3:7: error: unbound variable ?x [term]");
}

TEST_CASE("span soundness on the EOS domain") {
  const std::string text = corpus_text("eos/domain.hddl");
  auto r = parse_domain_text(text);
  REQUIRE(r.ok());
  auto slice = [&](const SourceSpan& s) { return text.substr(s.begin, s.end - s.begin); };
  int checked = 0;
  for (const auto& s : r.ast->structures) {
    auto again = parse_structure_text(slice(ast::structure_info(s).span));
    REQUIRE(again.ok());
    CHECK(*again.ast == s);
    ++checked;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ast::DurativeAction>) {
            if (x.condition) {
              auto g = parse_da_gd_text(slice(x.condition->info.span));
              REQUIRE(g.ok());
              CHECK(*g.ast == *x.condition);
            }
            if (x.effect) {
              auto e = parse_da_effect_text(slice(x.effect->info.span));
              REQUIRE(e.ok());
              CHECK(*e.ast == *x.effect);
            }
          } else if constexpr (std::is_same_v<T, ast::Action>) {
            if (x.precondition) {
              auto g = parse_gd_text(slice(x.precondition->info.span));
              REQUIRE(g.ok());
              CHECK(*g.ast == *x.precondition);
            }
          }
        },
        s);
  }
  CHECK(checked >= 8);
}

TEST_CASE("dropping a parenthesis or keyword is always reported") {
  const std::string text = corpus_text("figures/fig1-calibrate.hddl");
  auto lexed = tokenize(text);
  int mutants = 0;
  for (const auto& t : lexed.tokens) {
    if (t.kind != TokenKind::LParen && t.kind != TokenKind::RParen && t.kind != TokenKind::Keyword)
      continue;
    std::string broken = text.substr(0, t.span.begin) + text.substr(t.span.end);
    auto r = parse_structures_text(broken);
    CHECK_MESSAGE(!r.ok(), "removing '" << t.lexeme << "' at " << t.span.start_line << ":"
                                        << t.span.start_col << " went unnoticed");
    ++mutants;
  }
  CHECK(mutants > 20);
}
