#include "hcps/reasoner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hcps/error.hpp"

namespace hcps {

namespace {

using SuperMap = std::map<Iri, std::set<Iri>>;

// Strict transitive superclasses of every class appearing in a link.
SuperMap superclass_closure(const KnowledgeBase& kb) {
  SuperMap direct;
  for (const auto& [child, parent] : kb.subclass_links()) direct[child].insert(parent);
  SuperMap closure;
  for (const auto& [cls, parents] : direct) {
    auto& out = closure[cls];
    std::vector<Iri> stack(parents.begin(), parents.end());
    while (!stack.empty()) {
      Iri next = stack.back();
      stack.pop_back();
      if (!out.insert(next).second) continue;
      auto it = direct.find(next);
      if (it != direct.end()) stack.insert(stack.end(), it->second.begin(), it->second.end());
    }
  }
  return closure;
}

class Materializer {
 public:
  explicit Materializer(KnowledgeBase kb) : kb_(std::move(kb)), supers_(superclass_closure(kb_)) {}

  KnowledgeBase run() {
    for (const auto& [cls, sups] : supers_)
      for (const auto& s : sups) kb_.add_subclass(cls, s);

    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& ax : kb_.axioms()) {
        for (const auto& x : candidates(ax.body)) {
          if (!kb_.has_type(x, ax.head) && satisfies(x, ax.body)) changed |= add_type(x, ax.head);
        }
      }
      changed |= inherit_all();
    }
    return std::move(kb_);
  }

 private:
  bool add_type(const Iri& x, const Iri& cls) {
    bool fresh = kb_.insert(x, rdf_type(), cls);
    auto it = supers_.find(cls);
    if (it != supers_.end())
      for (const auto& s : it->second) fresh |= kb_.insert(x, rdf_type(), s);
    return fresh;
  }

  bool inherit_all() {
    std::vector<std::pair<Iri, Iri>> pending;
    for (const auto& row : kb_.match(Pattern{Variable{"x"}, rdf_type(), Variable{"c"}})) {
      const Iri* x = as_iri(row.at("x"));
      const Iri* c = as_iri(row.at("c"));
      auto it = supers_.find(*c);
      if (it == supers_.end()) continue;
      for (const auto& s : it->second)
        if (!kb_.has_type(*x, s)) pending.emplace_back(*x, s);
    }
    for (const auto& [x, s] : pending) kb_.insert(x, rdf_type(), s);
    return !pending.empty();
  }

  // Individuals that could possibly satisfy `body`.
  std::set<Iri> candidates(const ClassExpr& body) const {
    switch (body.kind) {
      case ClassExpr::Kind::named: {
        const auto subs = kb_.subjects(rdf_type(), body.name);
        return {subs.begin(), subs.end()};
      }
      case ClassExpr::Kind::some: {
        std::set<Iri> out;
        for (const auto& row : kb_.match(Pattern{Variable{"x"}, body.property, Variable{"y"}}))
          out.insert(std::get<Iri>(row.at("x")));
        return out;
      }
      case ClassExpr::Kind::conjunction:
        return candidates(body.operands.front());
    }
    return {};
  }

  bool satisfies(const Iri& x, const ClassExpr& body) const {
    switch (body.kind) {
      case ClassExpr::Kind::named:
        return kb_.has_type(x, body.name);
      case ClassExpr::Kind::some:
        for (const auto& y : kb_.objects(x, body.property)) {
          const Iri* yi = as_iri(y);
          if (yi && kb_.has_type(*yi, body.name)) return true;
        }
        return false;
      case ClassExpr::Kind::conjunction:
        return std::all_of(body.operands.begin(), body.operands.end(),
                           [&](const ClassExpr& op) { return satisfies(x, op); });
    }
    return false;
  }

  KnowledgeBase kb_;
  SuperMap supers_;
};

bool has_flag(const MetaAnnotation& a, const std::string& flag) {
  if (flag == "~R") return a.rigidity == Rigidity::anti_rigid;
  if (flag == "+I") return a.identity == Identity::carries;
  if (flag == "+U") return a.unity == Unity::unity;
  if (flag == "~U") return a.unity == Unity::anti_unity;
  return false;
}

}  // namespace

KnowledgeBase materialize(const KnowledgeBase& kb) { return Materializer(kb).run(); }

ConsistencyReport check_consistency(const KnowledgeBase& input) {
  const KnowledgeBase kb = materialize(input);
  ConsistencyReport report;

  std::set<DisjointnessViolation> clashes;
  for (const auto& [a, b] : kb.disjoint_pairs()) {
    if (b < a) continue;
    const auto as = kb.subjects(rdf_type(), a);
    for (const auto& x : as)
      if (kb.has_type(x, b)) clashes.insert({x, a, b});
  }
  report.disjointness_violations.assign(clashes.begin(), clashes.end());

  // Superclass sets extended through pure named-conjunction axioms.
  SuperMap supers = superclass_closure(kb);
  for (const auto& cls : kb.classes()) supers[cls];
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [cls, sups] : supers) {
      for (const auto& ax : kb.axioms()) {
        const auto conjuncts = ax.body.named_conjuncts();
        if (!conjuncts || sups.count(ax.head) || ax.head == cls) continue;
        const bool covered = std::all_of(conjuncts->begin(), conjuncts->end(), [&](const Iri& c) {
          return c == cls || sups.count(c) != 0;
        });
        if (!covered) continue;
        sups.insert(ax.head);
        auto it = supers.find(ax.head);
        if (it != supers.end()) sups.insert(it->second.begin(), it->second.end());
        changed = true;
      }
    }
  }
  for (const auto& [cls, sups] : supers) {
    std::set<Iri> all = sups;
    all.insert(cls);
    const bool clash = std::any_of(kb.disjoint_pairs().begin(), kb.disjoint_pairs().end(),
                                   [&](const auto& pair) { return all.count(pair.first) && all.count(pair.second); });
    if (clash) report.unsatisfiable_classes.push_back(cls);
  }
  return report;
}

std::vector<OntoCleanViolation> check_ontoclean(const KnowledgeBase& kb,
                                                const std::vector<MetaAnnotation>& annotations) {
  std::map<Iri, MetaAnnotation> by_class;
  for (const auto& a : annotations) by_class.emplace(a.cls, a);
  auto lookup = [&](const Iri& cls) -> const MetaAnnotation& {
    auto it = by_class.find(cls);
    if (it == by_class.end()) throw Error(Errc::unannotated_class, cls.short_form());
    return it->second;
  };

  static const char* const kRules[] = {"~R", "~U", "+I", "+U"};
  std::vector<OntoCleanViolation> out;
  for (const auto& [child, parent] : kb.subclass_links()) {
    const auto& q = lookup(parent);
    const auto& p = lookup(child);
    for (const char* flag : kRules)
      if (has_flag(q, flag) && !has_flag(p, flag)) out.push_back({child, parent, flag});
  }
  return out;
}

std::vector<OntoCleanViolation> check_ontoclean(const KnowledgeBase& kb) {
  std::vector<MetaAnnotation> annotations;
  for (const auto& [cls, a] : kb.annotations()) annotations.push_back(a);
  return check_ontoclean(kb, annotations);
}

std::string to_line(const DisjointnessViolation& v) {
  return "VIOLATION disjointness " + v.individual.short_form() + " " + v.class_a.short_form() + " " +
         v.class_b.short_form();
}

std::string to_line(const OntoCleanViolation& v) {
  return "VIOLATION ontoclean " + v.child.short_form() + " " + v.parent.short_form() + " " + v.flag;
}

std::string ConsistencyReport::str() const {
  std::string out;
  for (const auto& v : disjointness_violations) out += to_line(v) + "\n";
  for (const auto& c : unsatisfiable_classes) out += "VIOLATION unsatisfiable " + c.short_form() + "\n";
  for (const auto& v : ontoclean_violations) out += to_line(v) + "\n";
  return out;
}

}  // namespace hcps
