#include "text_util.hpp"

#include <cctype>

namespace hcps::detail {

bool looks_integer(std::string_view t) {
  std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
  if (i >= t.size()) return false;
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
  }
  return true;
}

bool looks_decimal(std::string_view t) {
  const auto dot = t.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 >= t.size()) return false;
  return looks_integer(t.substr(0, dot)) && looks_integer(t.substr(dot + 1)) && t[dot + 1] != '-' && t[dot + 1] != '+';
}

Iri name_token(const KnowledgeBase& kb, const Token& token, std::size_t line) {
  if (token.quoted) throw SyntaxError(line, token.column, "name");
  const auto colon = token.text.find(':');
  const std::string prefix = colon == std::string::npos ? std::string(kDefaultPrefix) : token.text.substr(0, colon);
  const std::string local = colon == std::string::npos ? token.text : token.text.substr(colon + 1);
  if (!is_identifier(prefix) || !is_identifier(local)) throw SyntaxError(line, token.column, "name");
  return kb.resolve(prefix, local);
}

Term object_token(const KnowledgeBase& kb, const Token& token, std::size_t line) {
  if (token.quoted) return Literal::string(detail::unquote(token, line));
  if (looks_decimal(token.text)) return Literal::decimal(token.text);
  if (looks_integer(token.text)) {
    return Literal{Literal::Kind::integer, token.text[0] == '+' ? token.text.substr(1) : token.text};
  }
  return name_token(kb, token, line);
}

PatternSlot slot_token(const KnowledgeBase& kb, const Token& token, std::size_t line) {
  if (!token.quoted && token.text.size() > 1 && token.text[0] == '?') {
    const std::string name = token.text.substr(1);
    if (!is_identifier(name)) throw SyntaxError(line, token.column, "variable name");
    return Variable{name};
  }
  if (!token.quoted && token.text == "a") return rdf_type();
  Term term = object_token(kb, token, line);
  if (const auto* i = as_iri(term)) return *i;
  return std::get<Literal>(term);
}

Pattern pattern_tokens(const KnowledgeBase& kb, const std::vector<Token>& tokens, std::size_t line) {
  if (tokens.size() != 3) {
    const std::size_t col = tokens.empty() ? 1 : tokens.front().column;
    throw SyntaxError(line, col, "three terms (subject predicate object)");
  }
  return Pattern{slot_token(kb, tokens[0], line), slot_token(kb, tokens[1], line), slot_token(kb, tokens[2], line)};
}

}  // namespace hcps::detail
