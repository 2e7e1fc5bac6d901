#include "hcps/query.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "hcps/error.hpp"

namespace hcps {

namespace {

struct QToken {
  enum class Kind { word, literal, punct, end };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool is_punct(char c) { return c == '{' || c == '}' || c == '(' || c == ')' || c == ',' || c == '='; }

bool all_digits(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::vector<QToken> lex(std::string_view text) {
  std::vector<QToken> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cl = col;
    if (is_punct(c) || c == '.') {
      out.push_back({QToken::Kind::punct, std::string(1, c), l, cl});
      advance(1);
      continue;
    }
    if ((c == '&' || c == '|') && i + 1 < text.size() && text[i + 1] == c) {
      out.push_back({QToken::Kind::punct, std::string(2, c), l, cl});
      advance(2);
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') j += text[j] == '\\' ? 2 : 1;
      if (j >= text.size() || text[j] != '"') throw SyntaxError(l, cl, "closing quote");
      out.push_back({QToken::Kind::literal, std::string(text.substr(i, j + 1 - i)), l, cl});
      advance(j + 1 - i);
      continue;
    }
    std::size_t j = i;
    while (j < text.size()) {
      const char d = text[j];
      if (std::isspace(static_cast<unsigned char>(d)) || is_punct(d) || d == '"' || d == '#') break;
      if (d == '&' || d == '|') break;
      if (d == '.') {
        const bool decimal_point = all_digits(text.substr(i, j - i)) && j + 1 < text.size() &&
                                   std::isdigit(static_cast<unsigned char>(text[j + 1]));
        if (!decimal_point) break;
      }
      ++j;
    }
    if (j == i) throw SyntaxError(l, cl, "term");
    out.push_back({QToken::Kind::word, std::string(text.substr(i, j - i)), l, cl});
    advance(j - i);
  }
  out.push_back({QToken::Kind::end, "", line, col});
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

bool is_variable(std::string_view t) { return t.size() > 1 && t[0] == '?' && is_identifier(t.substr(1)); }

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  QueryAst parse() {
    QueryAst q;
    keyword("SELECT");
    while (peek().kind == QToken::Kind::word && is_variable(peek().text)) q.projected.push_back(next().text.substr(1));
    if (q.projected.empty()) fail("variable");
    keyword("WHERE");
    punct("{");
    while (true) {
      const auto& t = peek();
      if (t.kind == QToken::Kind::word && iequals(t.text, "FILTER")) break;
      if (t.kind == QToken::Kind::punct && t.text == "}") break;
      QueryPattern p;
      p.subject = term();
      p.predicate = term();
      p.object = term();
      q.patterns.push_back(std::move(p));
      if (peek().kind == QToken::Kind::punct && peek().text == ".") next();
    }
    if (q.patterns.empty()) fail("triple pattern");
    if (peek().kind == QToken::Kind::word && iequals(peek().text, "FILTER")) {
      next();
      punct("(");
      q.filter = disjunction();
      punct(")");
      if (peek().kind == QToken::Kind::punct && peek().text == ".") next();
    }
    punct("}");
    if (peek().kind != QToken::Kind::end) fail("end of query");

    const auto vars = q.pattern_variables();
    for (const auto& v : q.projected)
      if (!std::binary_search(vars.begin(), vars.end(), v)) throw Error(Errc::unbound_projection, v);
    if (q.filter)
      for (const auto& v : q.filter->variables())
        if (!std::binary_search(vars.begin(), vars.end(), v)) throw Error(Errc::unbound_filter_var, v);
    return q;
  }

 private:
  const QToken& peek() const { return toks_[pos_]; }
  const QToken& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(peek().line, peek().column, expected);
  }

  void keyword(std::string_view kw) {
    if (peek().kind != QToken::Kind::word || !iequals(peek().text, kw)) fail(std::string(kw));
    next();
  }

  void punct(std::string_view p) {
    if (peek().kind != QToken::Kind::punct || peek().text != p) fail("'" + std::string(p) + "'");
    next();
  }

  bool at_punct(std::string_view p) const { return peek().kind == QToken::Kind::punct && peek().text == p; }

  std::string term() {
    const auto& t = peek();
    if (t.kind == QToken::Kind::literal) return next().text;
    if (t.kind != QToken::Kind::word || iequals(t.text, "FILTER")) fail("term");
    if (t.text[0] == '?' && !is_variable(t.text)) fail("variable name");
    return next().text;
  }

  std::string constant() {
    const auto& t = peek();
    if (t.kind == QToken::Kind::literal) return next().text;
    if (t.kind != QToken::Kind::word || t.text[0] == '?') fail("constant");
    return next().text;
  }

  FilterExpr disjunction() {
    std::vector<FilterExpr> parts{conjunction()};
    while (at_punct("||")) {
      next();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? std::move(parts[0]) : FilterExpr::disj(std::move(parts));
  }

  FilterExpr conjunction() {
    std::vector<FilterExpr> parts{primary()};
    while (at_punct("&&")) {
      next();
      parts.push_back(primary());
    }
    return parts.size() == 1 ? std::move(parts[0]) : FilterExpr::conj(std::move(parts));
  }

  FilterExpr primary() {
    if (at_punct("(")) {
      next();
      FilterExpr inner = disjunction();
      punct(")");
      return inner;
    }
    if (peek().kind != QToken::Kind::word || !is_variable(peek().text)) fail("variable");
    std::string var = next().text.substr(1);
    if (at_punct("=")) {
      next();
      return FilterExpr::equals(std::move(var), constant());
    }
    keyword("IN");
    punct("(");
    std::vector<std::string> values{constant()};
    while (at_punct(",")) {
      next();
      values.push_back(constant());
    }
    punct(")");
    return FilterExpr::in(std::move(var), std::move(values));
  }

  std::vector<QToken> toks_;
  std::size_t pos_ = 0;
};

void collect_vars(const FilterExpr& f, std::set<std::string>& out) {
  if (f.kind == FilterExpr::Kind::eq || f.kind == FilterExpr::Kind::in) out.insert(f.var);
  for (const auto& c : f.children) collect_vars(c, out);
}

std::string print_filter(const FilterExpr& f, bool nested) {
  switch (f.kind) {
    case FilterExpr::Kind::eq:
      return "?" + f.var + "=" + f.constants.front();
    case FilterExpr::Kind::in: {
      std::string out = "?" + f.var + " IN (";
      for (std::size_t i = 0; i < f.constants.size(); ++i) out += (i ? ", " : "") + f.constants[i];
      return out + ")";
    }
    case FilterExpr::Kind::all:
    case FilterExpr::Kind::any: {
      const char* op = f.kind == FilterExpr::Kind::all ? " && " : " || ";
      std::string out;
      for (std::size_t i = 0; i < f.children.size(); ++i) out += (i ? op : "") + print_filter(f.children[i], true);
      return nested ? "(" + out + ")" : out;
    }
  }
  return {};
}

// Compiled form used during evaluation.
struct ResolvedFilter {
  FilterExpr::Kind kind;
  std::string var;
  std::vector<Term> values;
  std::vector<ResolvedFilter> children;

  bool test(const Binding& b) const {
    switch (kind) {
      case FilterExpr::Kind::eq:
      case FilterExpr::Kind::in: {
        const Term& v = b.at(var);
        return std::find(values.begin(), values.end(), v) != values.end();
      }
      case FilterExpr::Kind::all:
        return std::all_of(children.begin(), children.end(), [&](const auto& c) { return c.test(b); });
      case FilterExpr::Kind::any:
        return std::any_of(children.begin(), children.end(), [&](const auto& c) { return c.test(b); });
    }
    return false;
  }
};

Term slot_term(const PatternSlot& s) {
  if (const auto* i = std::get_if<Iri>(&s)) return *i;
  return std::get<Literal>(s);
}

ResolvedFilter resolve_filter(const KnowledgeBase& kb, const FilterExpr& f) {
  ResolvedFilter r{f.kind, f.var, {}, {}};
  for (const auto& c : f.constants) {
    const auto slot = parse_pattern_slot(kb, c);
    if (std::holds_alternative<Variable>(slot)) throw SyntaxError(1, 1, "constant");
    r.values.push_back(slot_term(slot));
  }
  for (const auto& c : f.children) r.children.push_back(resolve_filter(kb, c));
  return r;
}

int bound_positions(const Pattern& p, const std::set<std::string>& bound) {
  int n = 0;
  for (const PatternSlot* s : {&p.subject, &p.predicate, &p.object}) {
    const auto* v = std::get_if<Variable>(s);
    if (!v || bound.count(v->name)) ++n;
  }
  return n;
}

std::string normalize_name(const std::string& t) {
  if (t == "rdf:type") return "a";
  const std::string def = std::string(kDefaultPrefix) + ":";
  if (t.compare(0, def.size(), def) == 0) return t.substr(def.size());
  return t;
}

FilterExpr normalize(FilterExpr f) {
  for (auto& c : f.constants) c = normalize_name(c);
  std::sort(f.constants.begin(), f.constants.end());
  if (f.kind == FilterExpr::Kind::in && f.constants.size() == 1) f.kind = FilterExpr::Kind::eq;
  for (auto& c : f.children) c = normalize(std::move(c));
  std::vector<FilterExpr> flat;
  for (auto& c : f.children) {
    if (c.kind == f.kind) {
      for (auto& g : c.children) flat.push_back(std::move(g));
    } else {
      flat.push_back(std::move(c));
    }
  }
  f.children = std::move(flat);
  std::sort(f.children.begin(), f.children.end(),
            [](const FilterExpr& a, const FilterExpr& b) { return print_filter(a, true) < print_filter(b, true); });
  return f;
}

}  // namespace

FilterExpr FilterExpr::equals(std::string var, std::string constant) {
  return FilterExpr{Kind::eq, std::move(var), {std::move(constant)}, {}};
}

FilterExpr FilterExpr::in(std::string var, std::vector<std::string> constants) {
  return FilterExpr{Kind::in, std::move(var), std::move(constants), {}};
}

FilterExpr FilterExpr::conj(std::vector<FilterExpr> children) { return FilterExpr{Kind::all, {}, {}, std::move(children)}; }

FilterExpr FilterExpr::disj(std::vector<FilterExpr> children) { return FilterExpr{Kind::any, {}, {}, std::move(children)}; }

std::vector<std::string> FilterExpr::variables() const {
  std::set<std::string> vars;
  collect_vars(*this, vars);
  return {vars.begin(), vars.end()};
}

std::vector<std::string> QueryAst::pattern_variables() const {
  std::set<std::string> vars;
  for (const auto& p : patterns)
    for (const auto* t : {&p.subject, &p.predicate, &p.object})
      if (is_variable(*t)) vars.insert(t->substr(1));
  return {vars.begin(), vars.end()};
}

std::string ResultTable::tsv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "\t" : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      if (const auto* iri = as_iri(row[i])) out += iri->short_form();
      else out += std::get<Literal>(row[i]).lexical;
    }
    out += '\n';
  }
  return out;
}

std::vector<Term> ResultTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return {};
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<Term> out;
  for (const auto& row : rows) out.push_back(row[idx]);
  return out;
}

QueryAst parse_query(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const FilterExpr& f) { return print_filter(f, false); }

std::string print_query(const QueryAst& q) {
  std::string out = "SELECT";
  for (const auto& v : q.projected) out += " ?" + v;
  out += "\nWHERE {\n";
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    const auto& p = q.patterns[i];
    out += "    " + p.subject + " " + p.predicate + " " + p.object;
    out += i + 1 < q.patterns.size() ? " .\n" : "\n";
  }
  if (q.filter) out += "    FILTER (" + to_string(*q.filter) + ")\n";
  out += "}\n";
  return out;
}

ResultTable evaluate(const KnowledgeBase& kb, const QueryAst& q) {
  std::vector<Pattern> pending;
  for (const auto& p : q.patterns)
    pending.push_back(Pattern{parse_pattern_slot(kb, p.subject), parse_pattern_slot(kb, p.predicate),
                              parse_pattern_slot(kb, p.object)});
  std::optional<ResolvedFilter> filter;
  if (q.filter) filter = resolve_filter(kb, *q.filter);

  std::vector<Binding> partial{Binding{}};
  std::set<std::string> bound;
  while (!pending.empty() && !partial.empty()) {
    // Most constrained pattern first; earliest wins ties.
    auto best = pending.begin();
    for (auto it = pending.begin(); it != pending.end(); ++it)
      if (bound_positions(*it, bound) > bound_positions(*best, bound)) best = it;
    const Pattern pattern = *best;
    pending.erase(best);

    std::vector<Binding> extended;
    for (const auto& b : partial) {
      for (auto& m : kb.match(substitute(pattern, b))) {
        m.insert(b.begin(), b.end());
        extended.push_back(std::move(m));
      }
    }
    partial = std::move(extended);
    for (const auto& v : variables_of(pattern)) bound.insert(v);
  }

  std::set<std::vector<Term>> rows;
  for (const auto& b : partial) {
    if (filter && !filter->test(b)) continue;
    std::vector<Term> row;
    for (const auto& v : q.projected) row.push_back(b.at(v));
    rows.insert(std::move(row));
  }
  return ResultTable{q.projected, {rows.begin(), rows.end()}};
}

bool pattern_equivalent(const QueryAst& a, const QueryAst& b) {
  auto canon = [](const QueryAst& q) {
    std::vector<QueryPattern> ps;
    for (const auto& p : q.patterns)
      ps.push_back({normalize_name(p.subject), normalize_name(p.predicate), normalize_name(p.object)});
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::optional<FilterExpr> f;
    if (q.filter) f = normalize(*q.filter);
    return std::make_tuple(q.projected, ps, f);
  };
  return canon(a) == canon(b);
}

}  // namespace hcps
