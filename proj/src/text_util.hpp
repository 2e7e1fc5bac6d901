#pragma once
// Token-level helpers shared by the directive-style parsers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hcps/decimal.hpp"

#include "hcps/error.hpp"
#include "hcps/kb.hpp"
#include "lexer.hpp"

namespace hcps::detail {

bool looks_integer(std::string_view t);
bool looks_decimal(std::string_view t);
// Prefixed or bare name resolved against the kb.
Iri name_token(const KnowledgeBase& kb, const Token& token, std::size_t line);
// Name, quoted string, integer or decimal.
Term object_token(const KnowledgeBase& kb, const Token& token, std::size_t line);

// `?var`, `a`, or anything object_token accepts.
PatternSlot slot_token(const KnowledgeBase& kb, const Token& token, std::size_t line);
// Exactly three slot tokens.
Pattern pattern_tokens(const KnowledgeBase& kb, const std::vector<Token>& tokens, std::size_t line);

class LineCursor {
 public:
  explicit LineCursor(const Line& line) : line_(line) {}

  bool done() const { return pos_ >= line_.tokens.size(); }

  const Token& next(const char* expected) {
    if (done()) throw SyntaxError(line_.number, end_column(), expected);
    return line_.tokens[pos_++];
  }

  const Token* peek() const { return done() ? nullptr : &line_.tokens[pos_]; }

  void keyword(const char* kw) {
    const Token& t = next(kw);
    if (t.quoted || t.text != kw) throw SyntaxError(line_.number, t.column, kw);
  }

  void finish() {
    if (!done()) throw SyntaxError(line_.number, line_.tokens[pos_].column, "end of line");
  }

  std::size_t number() const { return line_.number; }

  // Consumes and returns every remaining token.
  std::vector<Token> rest() {
    std::vector<Token> out(line_.tokens.begin() + static_cast<std::ptrdiff_t>(pos_), line_.tokens.end());
    pos_ = line_.tokens.size();
    return out;
  }

  std::int64_t integer(const char* expected) {
    const Token& t = next(expected);
    if (t.quoted || !looks_integer(t.text)) throw SyntaxError(line_.number, t.column, expected);
    return std::stoll(t.text);
  }

  Rational decimal(const char* expected) {
    const Token& t = next(expected);
    if (t.quoted || !(looks_integer(t.text) || looks_decimal(t.text))) throw SyntaxError(line_.number, t.column, expected);
    return parse_decimal(t.text);
  }

 private:
  std::size_t end_column() const {
    if (line_.tokens.empty()) return 1;
    const Token& last = line_.tokens.back();
    return last.column + last.text.size();
  }

  const Line& line_;
  std::size_t pos_ = 0;
};


}  // namespace hcps::detail
