#include "hcps/kb.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <tuple>

#include "hcps/error.hpp"

namespace hcps {

// ---------------------------------------------------------------------------
// Terms

std::string Iri::str() const { return prefix + ":" + local; }

std::string Iri::short_form() const { return prefix == kDefaultPrefix ? local : str(); }

Iri iri(std::string_view local) { return Iri{std::string(kDefaultPrefix), std::string(local)}; }

const Iri& rdf_type() {
  static const Iri type{std::string(kRdfPrefix), "type"};
  return type;
}

bool is_datatype(const Iri& range) { return range.prefix == kXsdPrefix; }

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  const auto first = static_cast<unsigned char>(name.front());
  if (!std::isalpha(first) && first != '_') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-';
  });
}

Literal Literal::string(std::string value) { return Literal{Kind::string, std::move(value)}; }

Literal Literal::integer(std::int64_t value) { return Literal{Kind::integer, std::to_string(value)}; }

Literal Literal::decimal(std::string lexical) { return Literal{Kind::decimal, std::move(lexical)}; }

std::string Literal::str() const {
  if (kind != Kind::string) return lexical;
  std::string out = "\"";
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

double Literal::number() const { return kind == Kind::string ? 0.0 : std::strtod(lexical.c_str(), nullptr); }

std::string to_string(const Term& term) {
  if (const auto* i = std::get_if<Iri>(&term)) return i->short_form();
  return std::get<Literal>(term).str();
}

const Iri* as_iri(const Term& term) { return std::get_if<Iri>(&term); }

std::string to_string(const PatternSlot& slot) {
  if (const auto* v = std::get_if<Variable>(&slot)) return "?" + v->name;
  if (const auto* i = std::get_if<Iri>(&slot)) return *i == rdf_type() ? "a" : i->short_form();
  return std::get<Literal>(slot).str();
}

std::string to_string(const Pattern& pattern) {
  return to_string(pattern.subject) + " " + to_string(pattern.predicate) + " " + to_string(pattern.object);
}

std::vector<std::string> variables_of(const Pattern& pattern) {
  std::vector<std::string> out;
  for (const auto* slot : {&pattern.subject, &pattern.predicate, &pattern.object}) {
    if (const auto* v = std::get_if<Variable>(slot)) {
      if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
    }
  }
  return out;
}

namespace {

PatternSlot substitute_slot(const PatternSlot& slot, const Binding& binding) {
  if (const auto* v = std::get_if<Variable>(&slot)) {
    auto it = binding.find(v->name);
    if (it == binding.end()) return slot;
    if (const auto* i = std::get_if<Iri>(&it->second)) return *i;
    return std::get<Literal>(it->second);
  }
  return slot;
}

}  // namespace

Pattern substitute(const Pattern& pattern, const Binding& binding) {
  return Pattern{substitute_slot(pattern.subject, binding), substitute_slot(pattern.predicate, binding),
                 substitute_slot(pattern.object, binding)};
}

// ---------------------------------------------------------------------------
// Class expressions

ClassExpr ClassExpr::named_class(Iri name) {
  ClassExpr e;
  e.kind = Kind::named;
  e.name = std::move(name);
  return e;
}

ClassExpr ClassExpr::conjunction(ClassExpr lhs, ClassExpr rhs) {
  ClassExpr e;
  e.kind = Kind::conjunction;
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

ClassExpr ClassExpr::some(Iri property, Iri filler) {
  ClassExpr e;
  e.kind = Kind::some;
  e.property = std::move(property);
  e.name = std::move(filler);
  return e;
}

bool ClassExpr::operator==(const ClassExpr& other) const { return (*this <=> other) == 0; }

std::strong_ordering ClassExpr::operator<=>(const ClassExpr& other) const {
  if (auto c = kind <=> other.kind; c != 0) return c;
  if (auto c = name <=> other.name; c != 0) return c;
  if (auto c = property <=> other.property; c != 0) return c;
  if (auto c = operands.size() <=> other.operands.size(); c != 0) return c;
  for (std::size_t i = 0; i < operands.size(); ++i) {
    if (auto c = operands[i] <=> other.operands[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string ClassExpr::str() const {
  switch (kind) {
    case Kind::named: return name.short_form();
    case Kind::some: return "( " + property.short_form() + " SOME " + name.short_form() + " )";
    case Kind::conjunction: {
      auto side = [](const ClassExpr& e) { return e.str(); };
      return "( " + side(operands[0]) + " AND " + side(operands[1]) + " )";
    }
  }
  return {};
}

std::optional<std::vector<Iri>> ClassExpr::named_conjuncts() const {
  if (kind == Kind::named) return std::vector<Iri>{name};
  if (kind == Kind::some) return std::nullopt;
  std::vector<Iri> out;
  for (const auto& op : operands) {
    auto part = op.named_conjuncts();
    if (!part) return std::nullopt;
    out.insert(out.end(), part->begin(), part->end());
  }
  return out;
}

std::strong_ordering ClassAxiom::operator<=>(const ClassAxiom& other) const {
  if (auto c = head <=> other.head; c != 0) return c;
  return body <=> other.body;
}

std::string ClassAxiom::str() const {
  // Top-level conjunction is printed without its own parentheses since the
  // directive already wraps the body.
  std::string inner;
  if (body.kind == ClassExpr::Kind::conjunction) {
    inner = body.operands[0].str() + " AND " + body.operands[1].str();
  } else if (body.kind == ClassExpr::Kind::some) {
    inner = body.property.short_form() + " SOME " + body.name.short_form();
  } else {
    inner = body.name.short_form();
  }
  return "AXIOM ( " + inner + " ) SUBCLASSOF " + head.short_form();
}

std::string MetaAnnotation::flags() const {
  std::vector<std::string> parts;
  if (rigidity == Rigidity::rigid) parts.emplace_back("+R");
  if (rigidity == Rigidity::anti_rigid) parts.emplace_back("~R");
  if (identity == Identity::carries) parts.emplace_back("+I");
  if (identity == Identity::lacks) parts.emplace_back("-I");
  if (unity == Unity::unity) parts.emplace_back("+U");
  if (unity == Unity::anti_unity) parts.emplace_back("~U");
  if (unity == Unity::non_unity) parts.emplace_back("-U");
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// KnowledgeBase

bool KnowledgeBase::PosLess::operator()(const Statement& a, const Statement& b) const {
  return std::tie(a.predicate, a.object, a.subject) < std::tie(b.predicate, b.object, b.subject);
}

bool KnowledgeBase::OspLess::operator()(const Statement& a, const Statement& b) const {
  return std::tie(a.object, a.subject, a.predicate) < std::tie(b.object, b.subject, b.predicate);
}

KnowledgeBase::KnowledgeBase() { prefixes_.emplace(kDefaultPrefix, kDefaultExpansion); }

void KnowledgeBase::add_prefix(const std::string& name, const std::string& expansion) {
  if (name == kRdfPrefix || name == kXsdPrefix) {
    throw Error(Errc::conflicting_declaration, "prefix '" + name + "' is reserved");
  }
  prefixes_[name] = expansion;
}

Iri KnowledgeBase::resolve(std::string_view prefix, std::string_view local) const {
  if (prefix == kRdfPrefix || prefix == kXsdPrefix) return Iri{std::string(prefix), std::string(local)};
  auto it = prefixes_.find(std::string(prefix));
  if (it == prefixes_.end()) throw Error(Errc::unknown_prefix, std::string(prefix));
  // Aliases collapse onto the default prefix when they share its expansion,
  // otherwise onto the alphabetically first name for that expansion.
  const auto def = prefixes_.find(std::string(kDefaultPrefix));
  if (def != prefixes_.end() && def->second == it->second) return Iri{def->first, std::string(local)};
  for (const auto& [name, expansion] : prefixes_) {
    if (expansion == it->second) return Iri{name, std::string(local)};
  }
  return Iri{it->first, std::string(local)};
}

Iri KnowledgeBase::resolve(std::string_view name) const {
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) return resolve(kDefaultPrefix, name);
  return resolve(name.substr(0, colon), name.substr(colon + 1));
}

void KnowledgeBase::declare_class(const Iri& cls) { classes_.insert(cls); }

bool KnowledgeBase::reaches(const Iri& from, const Iri& to, std::vector<Iri>& path) const {
  path.push_back(from);
  if (from == to) return true;
  auto it = subclass_links_.lower_bound({from, Iri{}});
  for (; it != subclass_links_.end() && it->first == from; ++it) {
    if (reaches(it->second, to, path)) return true;
  }
  path.pop_back();
  return false;
}

void KnowledgeBase::add_subclass(const Iri& child, const Iri& parent) {
  std::vector<Iri> path;
  if (reaches(parent, child, path)) {
    std::string text = child.short_form();
    for (const auto& step : path) text += " -> " + step.short_form();
    throw Error(Errc::cyclic_subclass, text);
  }
  classes_.insert(child);
  subclass_links_.emplace(child, parent);
}

void KnowledgeBase::declare_property(const Iri& property, const Iri& domain, const Iri& range) {
  auto [it, inserted] = properties_.emplace(property, PropertyDecl{domain, range});
  if (!inserted && (it->second.domain != domain || it->second.range != range)) {
    throw Error(Errc::conflicting_declaration, "property " + property.short_form() + " redeclared with a different domain/range");
  }
}

void KnowledgeBase::add_disjoint(const Iri& a, const Iri& b) {
  disjoint_.emplace(a, b);
  disjoint_.emplace(b, a);
}

void KnowledgeBase::add_axiom(ClassAxiom axiom) { axioms_.insert(std::move(axiom)); }

void KnowledgeBase::set_annotation(const MetaAnnotation& annotation) {
  auto [it, inserted] = annotations_.emplace(annotation.cls, annotation);
  if (!inserted && it->second != annotation) {
    throw Error(Errc::conflicting_declaration, "conflicting META for " + annotation.cls.short_form());
  }
}

void KnowledgeBase::remove_class(const Iri& cls) {
  classes_.erase(cls);
  std::erase_if(subclass_links_, [&](const auto& link) { return link.first == cls || link.second == cls; });
  std::erase_if(disjoint_, [&](const auto& pair) { return pair.first == cls || pair.second == cls; });
  annotations_.erase(cls);
}

bool KnowledgeBase::insert(const Statement& statement) {
  if (statement.predicate != rdf_type() && !has_property(statement.predicate)) {
    throw Error(Errc::undeclared_term, "predicate " + statement.predicate.short_form() + " is not a declared property");
  }
  if (statement.predicate == rdf_type() && !as_iri(statement.object)) {
    throw Error(Errc::syntax, "type of " + statement.subject.short_form() + " must be a class");
  }
  if (!spo_.insert(statement).second) return false;
  pos_.insert(statement);
  osp_.insert(statement);
  return true;
}

bool KnowledgeBase::erase(const Statement& statement) {
  if (spo_.erase(statement) == 0) return false;
  pos_.erase(statement);
  osp_.erase(statement);
  return true;
}

bool KnowledgeBase::contains(const Statement& statement) const { return spo_.count(statement) != 0; }

std::size_t KnowledgeBase::object_property_count() const {
  return static_cast<std::size_t>(std::count_if(properties_.begin(), properties_.end(),
                                                [](const auto& kv) { return kv.second.is_object_property(); }));
}

std::vector<Term> KnowledgeBase::objects(const Iri& subject, const Iri& predicate) const {
  std::vector<Term> out;
  for (auto it = spo_.lower_bound(Statement{subject, predicate, Iri{}});
       it != spo_.end() && it->subject == subject && it->predicate == predicate; ++it) {
    out.push_back(it->object);
  }
  return out;
}

std::vector<Iri> KnowledgeBase::subjects(const Iri& predicate, const Term& object) const {
  std::vector<Iri> out;
  for (auto it = pos_.lower_bound(Statement{Iri{}, predicate, object});
       it != pos_.end() && it->predicate == predicate && it->object == object; ++it) {
    out.push_back(it->subject);
  }
  return out;
}

std::optional<Term> KnowledgeBase::first_object(const Iri& subject, const Iri& predicate) const {
  auto it = spo_.lower_bound(Statement{subject, predicate, Iri{}});
  if (it != spo_.end() && it->subject == subject && it->predicate == predicate) return it->object;
  return std::nullopt;
}

bool KnowledgeBase::has_type(const Iri& individual, const Iri& cls) const {
  return contains(Statement{individual, rdf_type(), cls});
}

std::vector<Statement> KnowledgeBase::describe(const Iri& subject) const {
  std::vector<Statement> out;
  for (auto it = spo_.lower_bound(Statement{subject, Iri{}, Iri{}}); it != spo_.end() && it->subject == subject; ++it) {
    out.push_back(*it);
  }
  return out;
}

namespace {

// Binds `slot` against `value`; false on conflict with a constant or with an
// earlier binding of the same variable.
bool unify(const PatternSlot& slot, const Term& value, Binding& binding) {
  if (const auto* v = std::get_if<Variable>(&slot)) {
    auto [it, inserted] = binding.emplace(v->name, value);
    return inserted || it->second == value;
  }
  if (const auto* i = std::get_if<Iri>(&slot)) {
    const auto* vi = std::get_if<Iri>(&value);
    return vi != nullptr && *vi == *i;
  }
  const auto* vl = std::get_if<Literal>(&value);
  return vl != nullptr && *vl == std::get<Literal>(slot);
}

std::optional<Term> constant_of(const PatternSlot& slot) {
  if (const auto* i = std::get_if<Iri>(&slot)) return Term{*i};
  if (const auto* l = std::get_if<Literal>(&slot)) return Term{*l};
  return std::nullopt;
}

}  // namespace

std::vector<Binding> KnowledgeBase::match(const Pattern& pattern) const {
  std::vector<Binding> out;
  auto consider = [&](const Statement& st) {
    Binding b;
    if (unify(pattern.subject, st.subject, b) && unify(pattern.predicate, st.predicate, b) &&
        unify(pattern.object, st.object, b)) {
      out.push_back(std::move(b));
    }
  };

  const auto s = constant_of(pattern.subject);
  const auto p = constant_of(pattern.predicate);
  const auto o = constant_of(pattern.object);
  // A literal in subject or predicate position can never match.
  if ((s && !as_iri(*s)) || (p && !as_iri(*p))) return out;

  if (s) {
    const Iri& subj = *as_iri(*s);
    for (auto it = spo_.lower_bound(Statement{subj, Iri{}, Iri{}}); it != spo_.end() && it->subject == subj; ++it) {
      consider(*it);
    }
  } else if (p) {
    const Iri& pred = *as_iri(*p);
    auto it = o ? pos_.lower_bound(Statement{Iri{}, pred, *o}) : pos_.lower_bound(Statement{Iri{}, pred, Iri{}});
    for (; it != pos_.end() && it->predicate == pred && (!o || it->object == *o); ++it) consider(*it);
  } else if (o) {
    for (auto it = osp_.lower_bound(Statement{Iri{}, Iri{}, *o}); it != osp_.end() && it->object == *o; ++it) {
      consider(*it);
    }
  } else {
    for (const auto& st : spo_) consider(st);
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void KnowledgeBase::merge(const KnowledgeBase& other) {
  for (const auto& [name, expansion] : other.prefixes_) prefixes_[name] = expansion;
  classes_.insert(other.classes_.begin(), other.classes_.end());
  for (const auto& [property, decl] : other.properties_) declare_property(property, decl.domain, decl.range);
  for (const auto& [child, parent] : other.subclass_links_) add_subclass(child, parent);
  disjoint_.insert(other.disjoint_.begin(), other.disjoint_.end());
  axioms_.insert(other.axioms_.begin(), other.axioms_.end());
  for (const auto& [cls, annotation] : other.annotations_) set_annotation(annotation);
  for (const auto& st : other.spo_) insert(st);
}

bool KnowledgeBase::operator==(const KnowledgeBase& other) const {
  return prefixes_ == other.prefixes_ && classes_ == other.classes_ && properties_ == other.properties_ &&
         subclass_links_ == other.subclass_links_ && disjoint_ == other.disjoint_ && axioms_ == other.axioms_ &&
         annotations_ == other.annotations_ && spo_ == other.spo_;
}

}  // namespace hcps
