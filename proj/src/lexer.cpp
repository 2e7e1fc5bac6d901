#include "lexer.hpp"

#include <cctype>

#include "hcps/error.hpp"

namespace hcps::detail {

std::vector<Token> tokenize_line(std::string_view line, std::size_t line_number) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '(' || c == ')' || c == ',') {
      tokens.push_back(Token{std::string(1, c), i + 1, false});
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          i += 2;
          continue;
        }
        if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        }
        ++i;
      }
      if (!closed) throw SyntaxError(line_number, start + 1, "closing '\"'");
      tokens.push_back(Token{std::string(line.substr(start, i - start)), start + 1, true});
      continue;
    }
    // `<...>` is kept whole so prefix expansions may contain any character.
    if (c == '<') {
      const auto close = line.find('>', i);
      if (close == std::string_view::npos) throw SyntaxError(line_number, start + 1, "closing '>'");
      i = close + 1;
      tokens.push_back(Token{std::string(line.substr(start, i - start)), start + 1, false});
      continue;
    }
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '(' &&
           line[i] != ')' && line[i] != ',' && line[i] != '#') {
      ++i;
    }
    tokens.push_back(Token{std::string(line.substr(start, i - start)), start + 1, false});
  }
  return tokens;
}

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto tokens = tokenize_line(raw, number);
    if (!tokens.empty()) lines.push_back(Line{number, std::move(tokens)});
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return lines;
}

std::string unquote(const Token& token, std::size_t line_number) {
  std::string out;
  const std::string& t = token.text;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] == '\\') {
      ++i;
      switch (t[i]) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: throw SyntaxError(line_number, token.column + i, "valid escape sequence");
      }
    } else {
      out += t[i];
    }
  }
  return out;
}

}  // namespace hcps::detail
