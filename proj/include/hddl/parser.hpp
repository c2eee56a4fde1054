#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hddl/ast.hpp"
#include "hddl/lexer.hpp"
#include "hddl/source.hpp"

namespace hddl {

/// Every grammar production alternative the parser knows, by stable id
/// (e.g. "gd:imply", "constraint-def:hold-between").
const std::vector<std::string>& grammar_productions();

/// Records which production alternatives a parse went through.
struct ProductionCoverage {
  std::set<std::string> hit;
};

struct ParseOptions {
  ProductionCoverage* coverage = nullptr;
};

template <class T>
struct ParseResult {
  std::optional<T> ast;
  Diagnostics diagnostics;

  /// True when a tree was produced and no error was reported.
  bool ok() const { return ast.has_value() && !has_errors(diagnostics); }
};

ParseResult<ast::Domain> parse_domain(const std::vector<Token>& tokens, ParseOptions opts = {});
ParseResult<ast::Problem> parse_problem(const std::vector<Token>& tokens, ParseOptions opts = {});

// Text conveniences; lexer diagnostics are merged into the result.
ParseResult<ast::Domain> parse_domain_text(std::string_view text, FileId file = 0,
                                           ParseOptions opts = {});
ParseResult<ast::Problem> parse_problem_text(std::string_view text, FileId file = 0,
                                             ParseOptions opts = {});

// Entry points for single productions, used for fragments and for checking
// that a node's span re-parses to the same node.
ParseResult<ast::Structure> parse_structure_text(std::string_view text, FileId file = 0,
                                                 ParseOptions opts = {});
/// A sequence of structure definitions with no surrounding `(define ...)`.
ParseResult<std::vector<ast::Structure>> parse_structures_text(std::string_view text,
                                                               FileId file = 0,
                                                               ParseOptions opts = {});
/// A sequence of problem sections (`(:objects ...) (:init ...)` ...) with no
/// surrounding `(define ...)`; the resulting problem has empty names.
ParseResult<ast::Problem> parse_problem_sections_text(std::string_view text, FileId file = 0,
                                                      ParseOptions opts = {});
ParseResult<ast::Gd> parse_gd_text(std::string_view text, FileId file = 0, ParseOptions opts = {});
ParseResult<ast::FExp> parse_fexp_text(std::string_view text, FileId file = 0,
                                       ParseOptions opts = {});
ParseResult<ast::Effect> parse_effect_text(std::string_view text, FileId file = 0,
                                           ParseOptions opts = {});
ParseResult<ast::DaGd> parse_da_gd_text(std::string_view text, FileId file = 0,
                                        ParseOptions opts = {});
ParseResult<ast::DaEffect> parse_da_effect_text(std::string_view text, FileId file = 0,
                                                ParseOptions opts = {});
ParseResult<ast::TaskNetwork> parse_task_network_text(std::string_view text, FileId file = 0,
                                                      ParseOptions opts = {});

}  // namespace hddl
