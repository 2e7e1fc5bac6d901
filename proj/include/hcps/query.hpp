#pragma once
// SELECT / WHERE / FILTER subset: conjunctive triple patterns with equality
// and IN filters combined by && and ||.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcps/kb.hpp"

namespace hcps {

// Terms stay textual ("?x", "a", "prefix:name", literal) until evaluation so
// that prefixes resolve against the kb being queried.
struct QueryPattern {
  std::string subject;
  std::string predicate;
  std::string object;

  friend auto operator<=>(const QueryPattern&, const QueryPattern&) = default;
};

struct FilterExpr {
  enum class Kind { eq, in, all, any };  // all = &&, any = ||

  Kind kind = Kind::eq;
  std::string var;                     // eq / in, without '?'
  std::vector<std::string> constants;  // eq: one; in: one or more
  std::vector<FilterExpr> children;    // all / any: two or more

  static FilterExpr equals(std::string var, std::string constant);
  static FilterExpr in(std::string var, std::vector<std::string> constants);
  static FilterExpr conj(std::vector<FilterExpr> children);
  static FilterExpr disj(std::vector<FilterExpr> children);

  bool operator==(const FilterExpr&) const = default;

  std::vector<std::string> variables() const;
};

struct QueryAst {
  std::vector<std::string> projected;  // without '?'
  std::vector<QueryPattern> patterns;
  std::optional<FilterExpr> filter;

  bool operator==(const QueryAst&) const = default;

  std::vector<std::string> pattern_variables() const;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Term>> rows;

  bool operator==(const ResultTable&) const = default;

  // Header row then one line per row, tab separated.
  std::string tsv() const;
  // Values of one column in row order.
  std::vector<Term> column(std::string_view name) const;
};

// Throws SyntaxError, UnboundProjection, UnboundFilterVar.
QueryAst parse_query(std::string_view text);
// Canonical text; parse_query(print_query(q)) == q.
std::string print_query(const QueryAst& q);
std::string to_string(const FilterExpr& f);

// Throws UnknownPrefix when a name does not resolve.
ResultTable evaluate(const KnowledgeBase& kb, const QueryAst& q);
inline ResultTable evaluate(const KnowledgeBase& kb, std::string_view text) {
  return evaluate(kb, parse_query(text));
}

// Structural equality ignoring pattern order and the order of && / ||
// operands and IN lists.
bool pattern_equivalent(const QueryAst& a, const QueryAst& b);

}  // namespace hcps
