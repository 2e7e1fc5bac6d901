#pragma once
// Brute-force query evaluation and random query generation. The oracle
// enumerates the full cross product of candidate values for every variable.

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hcps/kb.hpp"
#include "hcps/query.hpp"

namespace hcps::testing {

inline Term oracle_constant(const KnowledgeBase& kb, const std::string& text) {
  const auto slot = parse_pattern_slot(kb, text);
  if (const auto* i = std::get_if<Iri>(&slot)) return *i;
  return std::get<Literal>(slot);
}

inline bool oracle_filter(const KnowledgeBase& kb, const FilterExpr& f, const std::map<std::string, Term>& b) {
  switch (f.kind) {
    case FilterExpr::Kind::eq:
    case FilterExpr::Kind::in:
      for (const auto& c : f.constants)
        if (oracle_constant(kb, c) == b.at(f.var)) return true;
      return false;
    case FilterExpr::Kind::all:
      for (const auto& c : f.children)
        if (!oracle_filter(kb, c, b)) return false;
      return true;
    case FilterExpr::Kind::any:
      for (const auto& c : f.children)
        if (oracle_filter(kb, c, b)) return true;
      return false;
  }
  return false;
}

inline ResultTable brute_force_evaluate(const KnowledgeBase& kb, const QueryAst& q) {
  std::set<Term> universe;
  for (const auto& st : kb.statements()) {
    universe.insert(st.subject);
    universe.insert(st.predicate);
    universe.insert(st.object);
  }
  const std::vector<Term> values(universe.begin(), universe.end());
  const auto vars = q.pattern_variables();

  auto slot_value = [&](const std::string& text, const std::map<std::string, Term>& b) -> Term {
    if (text.size() > 1 && text[0] == '?') return b.at(text.substr(1));
    return oracle_constant(kb, text);
  };

  std::set<std::vector<Term>> rows;
  std::map<std::string, Term> binding;
  std::function<void(std::size_t)> assign = [&](std::size_t k) {
    if (k == vars.size()) {
      for (const auto& p : q.patterns) {
        const Term s = slot_value(p.subject, binding);
        const Term pr = slot_value(p.predicate, binding);
        const Term o = slot_value(p.object, binding);
        const Iri* si = as_iri(s);
        const Iri* pi = as_iri(pr);
        if (!si || !pi || !kb.contains({*si, *pi, o})) return;
      }
      if (q.filter && !oracle_filter(kb, *q.filter, binding)) return;
      std::vector<Term> row;
      for (const auto& v : q.projected) row.push_back(binding.at(v));
      rows.insert(row);
      return;
    }
    for (const auto& v : values) {
      binding[vars[k]] = v;
      assign(k + 1);
    }
    binding.erase(vars[k]);
  };
  assign(0);
  return ResultTable{q.projected, {rows.begin(), rows.end()}};
}

// Terms drawn from the vocabulary of random_kb(). Predicates get their own
// variable so that joins mostly happen on subjects and objects.
inline std::string random_query_term(std::mt19937& rng, int position) {
  static const char* const kVars[] = {"?a", "?b", "?c"};
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> idx(0, 4);
  const int k = pick(rng);
  if (position == 1) {
    static const char* const kPreds[] = {"p0", "p1", "p2", "p0", "p1", "p2", "a", "score", "?p", "?p"};
    return kPreds[k];
  }
  if (k < 6) return kVars[k % 3];
  if (position == 2 && k >= 8) return k == 8 ? "C1" : "3";
  return "e" + std::to_string(idx(rng));
}

inline FilterExpr random_filter(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<std::size_t> var(0, vars.size() - 1);
  std::uniform_int_distribution<int> ent(0, 4);
  const int k = pick(rng);
  if (depth > 0 && k >= 4) {
    std::vector<FilterExpr> kids{random_filter(rng, vars, depth - 1), random_filter(rng, vars, depth - 1)};
    return k == 4 ? FilterExpr::conj(std::move(kids)) : FilterExpr::disj(std::move(kids));
  }
  if (k % 2 == 0) return FilterExpr::equals(vars[var(rng)], "e" + std::to_string(ent(rng)));
  std::vector<std::string> values;
  const int n = 1 + ent(rng) % 3;
  for (int i = 0; i < n; ++i) values.push_back("e" + std::to_string(ent(rng)));
  return FilterExpr::in(vars[var(rng)], values);
}

inline QueryAst random_query(std::mt19937& rng) {
  QueryAst q;
  std::uniform_int_distribution<int> count(1, 4);
  const int n = count(rng);
  for (int i = 0; i < n; ++i)
    q.patterns.push_back({random_query_term(rng, 0), random_query_term(rng, 1), random_query_term(rng, 2)});
  auto vars = q.pattern_variables();
  if (vars.empty()) {
    q.patterns.push_back({"?a", "p0", "?b"});
    vars = q.pattern_variables();
  }
  std::uniform_int_distribution<int> coin(0, 1);
  for (const auto& v : vars)
    if (coin(rng)) q.projected.push_back(v);
  if (q.projected.empty()) q.projected.push_back(vars.front());
  if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) q.filter = random_filter(rng, vars, 2);
  return q;
}

}  // namespace hcps::testing
