#pragma once
// Line lexer shared by the directive-style formats (kb documents, profiles,
// capability files, scenarios, task lists). Parentheses and commas are
// always single tokens; "..." strings keep their quotes so callers can tell
// them apart from names; `#` starts a comment outside strings.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hcps::detail {

struct Token {
  std::string text;
  std::size_t column = 0;  // 1-based
  bool quoted = false;
};

struct Line {
  std::size_t number = 0;  // 1-based
  std::vector<Token> tokens;
};

std::vector<Token> tokenize_line(std::string_view line, std::size_t line_number);

// Non-empty, comment-stripped lines.
std::vector<Line> tokenize(std::string_view text);

std::string unquote(const Token& token, std::size_t line_number);

}  // namespace hcps::detail
