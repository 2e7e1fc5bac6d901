#include "hcps/metrics.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hcps/error.hpp"
#include "hcps/reasoner.hpp"

namespace hcps {

namespace {

bool is_variable(const std::string& t) { return !t.empty() && t[0] == '?'; }

Iri vocabulary_iri(const KnowledgeBase& kb, const std::string& text) {
  try {
    return kb.resolve(text);
  } catch (const Error& e) {
    if (e.code() != Errc::unknown_prefix) throw;
    const auto colon = text.find(':');
    return Iri{text.substr(0, colon), text.substr(colon + 1)};
  }
}

std::string indent_lines(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out += "  " + line + "\n";
  return out;
}

}  // namespace

CrrResult crr(const KnowledgeBase& kb) {
  CrrResult r;
  r.class_count = kb.classes().size();
  std::size_t object_properties = 0;
  for (const auto& [p, decl] : kb.properties())
    if (decl.is_object_property()) ++object_properties;
  r.relation_count = object_properties + kb.subclass_links().size();
  if (r.relation_count == 0) throw Error(Errc::zero_relations, "no object properties or subclass links");
  r.ratio = round_half_up(Rational(static_cast<std::int64_t>(r.class_count),
                                   static_cast<std::int64_t>(r.relation_count)),
                          2);
  return r;
}

std::string to_line(const CrrResult& r) {
  return "CRR " + std::to_string(r.class_count) + " " + std::to_string(r.relation_count) + " " +
         format_fixed(r.ratio, 2);
}

std::vector<Iri> cq_vocabulary(const KnowledgeBase& kb, const QueryAst& q) {
  std::set<Iri> out;
  for (const auto& p : q.patterns) {
    if (p.predicate == "a") {
      if (!is_variable(p.object)) out.insert(vocabulary_iri(kb, p.object));
    } else if (!is_variable(p.predicate)) {
      out.insert(vocabulary_iri(kb, p.predicate));
    }
  }
  return {out.begin(), out.end()};
}

CqVerdict run_cq(const KnowledgeBase& kb, const CompetencyQuestion& cq) {
  const QueryAst q = parse_query(cq.query);
  CqVerdict v;
  v.id = cq.id;
  for (const auto& term : cq_vocabulary(kb, q)) {
    const bool known = term == rdf_type() || kb.classes().count(term) || kb.has_property(term);
    if (!known) v.missing.push_back(term);
  }
  if (!v.missing.empty()) {
    v.kind = CqVerdict::Kind::requires_evolution;
    return v;
  }
  v.result = evaluate(kb, q);
  return v;
}

std::string to_line(const CqVerdict& v) {
  if (v.instant()) return v.id + " instant rows=" + std::to_string(v.result.rows.size());
  std::string out = v.id + " requires_evolution";
  for (const auto& m : v.missing) out += " " + m.short_form();
  return out;
}

CompetencyQuestion parse_cq(std::string id, std::string_view text) {
  CompetencyQuestion cq;
  cq.id = std::move(id);
  std::istringstream in{std::string(text)};
  bool header = true;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') {
      if (header) {
        auto q = line.substr(first + 1);
        q.erase(0, q.find_first_not_of(' '));
        cq.question += (cq.question.empty() ? "" : " ") + q;
      }
      continue;
    }
    if (first != std::string::npos) header = false;
    cq.query += line + "\n";
  }
  return cq;
}

std::vector<CompetencyQuestion> load_cq_dir(const std::string& dir) {
  std::vector<std::pair<int, std::filesystem::path>> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (name.size() < 5 || name.rfind("cq", 0) != 0 || entry.path().extension() != ".q") continue;
    const auto digits = name.substr(2, name.size() - 4);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) continue;
    files.emplace_back(std::stoi(digits), entry.path());
  }
  if (ec) throw Error(Errc::io, "cannot list " + dir);
  std::sort(files.begin(), files.end());
  std::vector<CompetencyQuestion> out;
  for (const auto& [n, path] : files) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    out.push_back(parse_cq("CQ" + std::to_string(n), buf.str()));
  }
  return out;
}

std::string EvalReport::str() const {
  std::string out = "[clarity]\n" + to_line(clarity) + "\n";
  out += "[completeness]\n";
  std::size_t instant = 0;
  for (const auto& v : completeness) {
    out += to_line(v) + "\n";
    instant += v.instant();
  }
  out += "[consistency]\n" + consistency + (consistency.empty() || consistency.back() == '\n' ? "" : "\n");
  out += "[ontoclean]\n" + ontoclean + (ontoclean.empty() || ontoclean.back() == '\n' ? "" : "\n");
  out += "[accuracy]\nnon-metric: class axioms are checked by the inference tests\n";
  out += "[adaptability]\nnon-metric: modules kb_core reasoner query_engine schema registry broker mapek_sim "
         "allocation metrics cli\n";
  out += "[summary]\n";
  out += "crr=" + format_fixed(clarity.ratio, 2) + "\n";
  out += "cq_instant=" + std::to_string(instant) + "/" + std::to_string(completeness.size()) + "\n";
  out += "consistency_findings=" + std::to_string(consistency_findings) + "\n";
  out += "ontoclean_findings=" + std::to_string(ontoclean_findings) + "\n";
  return out;
}

EvalReport eval_report(const KnowledgeBase& kb, const std::optional<std::vector<MetaAnnotation>>& annotations,
                       const std::vector<CompetencyQuestion>& cqs) {
  EvalReport r;
  r.clarity = crr(kb);
  for (const auto& cq : cqs) r.completeness.push_back(run_cq(kb, cq));

  const auto consistency = check_consistency(kb);
  r.consistency_findings = consistency.disjointness_violations.size() + consistency.unsatisfiable_classes.size();
  r.consistency = r.consistency_findings == 0 ? "clean\n" : consistency.str();

  std::vector<MetaAnnotation> metas;
  if (annotations) {
    metas = *annotations;
  } else {
    for (const auto& [cls, a] : kb.annotations()) metas.push_back(a);
  }
  if (metas.empty()) {
    r.ontoclean = "skipped: no annotations\n";
  } else {
    const auto violations = check_ontoclean(kb, metas);
    r.ontoclean_findings = violations.size();
    for (const auto& v : violations) r.ontoclean += to_line(v) + "\n";
    if (violations.empty()) r.ontoclean = "clean\n";
  }
  return r;
}

}  // namespace hcps
