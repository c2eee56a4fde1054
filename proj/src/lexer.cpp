#include "hddl/lexer.hpp"

#include <cctype>

namespace hddl {

std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::LParen:
      return "LPAREN";
    case TokenKind::RParen:
      return "RPAREN";
    case TokenKind::Keyword:
      return "KEYWORD";
    case TokenKind::Variable:
      return "VARIABLE";
    case TokenKind::Name:
      return "NAME";
    case TokenKind::Number:
      return "NUMBER";
    case TokenKind::TimeStep:
      return "TIME-STEP";
    case TokenKind::Operator:
      return "OPERATOR";
  }
  return "?";
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_delimiter(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0 || c == '(' || c == ')' || c == ';';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Lexer {
 public:
  Lexer(std::string_view src, FileId file) : src_(src), file_(file) {}

  LexResult run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      begin_token();
      if (c == '(') {
        advance();
        emit(TokenKind::LParen);
      } else if (c == ')') {
        advance();
        emit(TokenKind::RParen);
      } else if (c == ':' || c == '?') {
        advance();
        if (pos_ >= src_.size() || !is_name_start(src_[pos_])) {
          skip_to_delimiter();
          error("illegal-character",
                std::string("expected a name after '") + c + "'");
          continue;
        }
        while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
        if (!at_delimiter()) {
          skip_to_delimiter();
          error("illegal-character", "illegal character in identifier");
          continue;
        }
        emit(c == ':' ? TokenKind::Keyword : TokenKind::Variable);
      } else if (c == '#') {
        advance();
        if (pos_ < src_.size() && (src_[pos_] == 't' || src_[pos_] == 'T')) {
          advance();
          if (at_delimiter()) {
            emit(TokenKind::TimeStep);
            continue;
          }
        }
        skip_to_delimiter();
        error("illegal-character", "'#' is only valid in the time-step symbol '#t'");
      } else if (is_digit(c) || ((c == '-' || c == '+' || c == '.') && signed_number_ahead())) {
        lex_number();
      } else if (c == '<' || c == '>') {
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') advance();
        finish_operator();
      } else if (c == '=' || c == '-' || c == '/' || c == '*' || c == '+') {
        advance();
        finish_operator();
      } else if (is_name_start(c)) {
        while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
        if (!at_delimiter()) {
          skip_to_delimiter();
          error("illegal-character", "illegal character in name");
          continue;
        }
        emit(TokenKind::Name);
      } else {
        advance();
        error("illegal-character",
              std::string("illegal character '") + c + "'");
      }
    }
    return std::move(out_);
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool at_delimiter() const { return pos_ >= src_.size() || is_delimiter(src_[pos_]); }

  void skip_to_delimiter() {
    while (!at_delimiter()) advance();
  }

  bool signed_number_ahead() const {
    std::size_t p = pos_;
    if (src_[p] == '-' || src_[p] == '+') ++p;
    if (p < src_.size() && src_[p] == '.') ++p;
    return p < src_.size() && is_digit(src_[p]);
  }

  void begin_token() {
    tok_begin_ = pos_;
    tok_line_ = line_;
    tok_col_ = col_;
  }

  SourceSpan current_span() const {
    SourceSpan s;
    s.file = file_;
    s.begin = tok_begin_;
    s.end = pos_;
    s.start_line = tok_line_;
    s.start_col = tok_col_;
    s.end_line = line_;
    s.end_col = col_;
    return s;
  }

  void emit(TokenKind kind) {
    Token t;
    t.kind = kind;
    t.lexeme = std::string(src_.substr(tok_begin_, pos_ - tok_begin_));
    t.text = lower(t.lexeme);
    t.span = current_span();
    out_.tokens.push_back(std::move(t));
  }

  void error(std::string code, std::string message) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.span = current_span();
    d.code = std::move(code);
    d.message = std::move(message);
    d.production = "token";
    out_.diagnostics.push_back(std::move(d));
  }

  void finish_operator() {
    if (!at_delimiter()) {
      skip_to_delimiter();
      error("illegal-character", "operator must be followed by a delimiter");
      return;
    }
    emit(TokenKind::Operator);
  }

  void lex_number() {
    if (src_[pos_] == '-' || src_[pos_] == '+') advance();
    bool digits = false;
    while (pos_ < src_.size() && is_digit(src_[pos_])) {
      advance();
      digits = true;
    }
    int dots = 0;
    bool bad = false;
    while (pos_ < src_.size() && src_[pos_] == '.') {
      ++dots;
      advance();
      bool frac = false;
      while (pos_ < src_.size() && is_digit(src_[pos_])) {
        advance();
        frac = true;
      }
      if (!frac) bad = true;
      digits = digits || frac;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      skip_to_delimiter();
      error("malformed-number", "exponent notation is not supported in numbers");
      return;
    }
    if (!at_delimiter()) {
      skip_to_delimiter();
      error("malformed-number", "malformed number");
      return;
    }
    if (dots > 1 || bad || !digits) {
      error("malformed-number", "malformed number '" +
                                    std::string(src_.substr(tok_begin_, pos_ - tok_begin_)) +
                                    "'");
      return;
    }
    emit(TokenKind::Number);
  }

  std::string_view src_;
  FileId file_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
  std::size_t tok_begin_ = 0;
  std::uint32_t tok_line_ = 1;
  std::uint32_t tok_col_ = 1;
  LexResult out_;
};

}  // namespace

LexResult tokenize(std::string_view source, FileId file) { return Lexer(source, file).run(); }

}  // namespace hddl
