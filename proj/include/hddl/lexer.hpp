#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hddl/source.hpp"

namespace hddl {

enum class TokenKind {
  LParen,
  RParen,
  Keyword,   // leading ':'
  Variable,  // leading '?'
  Name,
  Number,
  TimeStep,  // '#t'
  Operator,  // < <= > >= = - / * +
};

std::string_view to_string(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::Name;
  /// Normalized text: lower-cased for names, keywords and variables.
  std::string text;
  /// Exact source spelling.
  std::string lexeme;
  SourceSpan span;
};

struct LexResult {
  std::vector<Token> tokens;
  Diagnostics diagnostics;
};

/// Splits HDDL source into tokens. Comments run from ';' to end of line.
/// Lexing continues past illegal characters so that every problem in the
/// input is reported.
LexResult tokenize(std::string_view source, FileId file = 0);

}  // namespace hddl
