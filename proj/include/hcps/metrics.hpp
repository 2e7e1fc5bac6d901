#pragma once
// Ontology evaluation: class/relation ratio, competency questions and a
// combined report.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcps/decimal.hpp"
#include "hcps/kb.hpp"
#include "hcps/query.hpp"

namespace hcps {

struct CrrResult {
  std::size_t class_count = 0;
  std::size_t relation_count = 0;  // object properties + subclass links
  Rational ratio;                  // rounded half-up to 2 places

  bool operator==(const CrrResult&) const = default;
};

// Throws ZeroRelations.
CrrResult crr(const KnowledgeBase& kb);
// "CRR <classes> <relations> <ratio>"
std::string to_line(const CrrResult& r);

struct CompetencyQuestion {
  std::string id;        // "CQ1"
  std::string question;  // free text, may be empty
  std::string query;
};

struct CqVerdict {
  enum class Kind { instant, requires_evolution };

  std::string id;
  Kind kind = Kind::instant;
  ResultTable result;        // instant only
  std::vector<Iri> missing;  // requires_evolution only, sorted

  bool instant() const { return kind == Kind::instant; }
};

// Vocabulary referenced by a query: predicates and the classes after `a`.
// Unknown prefixes yield a name in the "prefix:local" form of the text.
std::vector<Iri> cq_vocabulary(const KnowledgeBase& kb, const QueryAst& q);
// Throws SyntaxError when the query does not parse.
CqVerdict run_cq(const KnowledgeBase& kb, const CompetencyQuestion& cq);
// "<id> instant rows=<n>" or "<id> requires_evolution <term>..."
std::string to_line(const CqVerdict& v);

// Leading `#` lines become the question text; the id comes from the caller.
CompetencyQuestion parse_cq(std::string id, std::string_view text);
// cq1.q ... cqN.q from a directory, in numeric order.
std::vector<CompetencyQuestion> load_cq_dir(const std::string& dir);

struct EvalReport {
  CrrResult clarity;
  std::vector<CqVerdict> completeness;
  std::string consistency;  // ConsistencyReport::str(), "clean" when empty
  std::string ontoclean;    // violation lines, "clean", or "skipped: no annotations"
  std::size_t consistency_findings = 0;
  std::size_t ontoclean_findings = 0;

  std::string str() const;
};

// annotations: nullopt uses the kb's own META records.
EvalReport eval_report(const KnowledgeBase& kb, const std::optional<std::vector<MetaAnnotation>>& annotations,
                       const std::vector<CompetencyQuestion>& cqs);

}  // namespace hcps
