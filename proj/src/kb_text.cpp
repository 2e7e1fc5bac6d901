// Line-oriented text format for KnowledgeBase.

#include <cctype>
#include <sstream>

#include "hcps/error.hpp"
#include "hcps/kb.hpp"
#include "lexer.hpp"
#include "text_util.hpp"

namespace hcps {

using detail::Line;
using detail::LineCursor;
using detail::name_token;
using detail::object_token;
using detail::Token;

namespace {

ClassExpr parse_class_expr(const KnowledgeBase& kb, LineCursor& cur);

// Contents between a pair of parentheses: `A AND B [AND C ...]`,
// `p SOME C`, or a single (possibly parenthesised) expression.
ClassExpr parse_group_body(const KnowledgeBase& kb, LineCursor& cur) {
  const Token* first = cur.peek();
  if (first == nullptr) throw SyntaxError(cur.number(), 0, "class expression");
  if (first->text != "(") {
    const Token& name = cur.next("class or property");
    const Token* after = cur.peek();
    if (after != nullptr && after->text == "SOME") {
      cur.next("SOME");
      const Token& filler = cur.next("class");
      return ClassExpr::some(name_token(kb, name, cur.number()), name_token(kb, filler, cur.number()));
    }
    ClassExpr lhs = ClassExpr::named_class(name_token(kb, name, cur.number()));
    while (cur.peek() != nullptr && cur.peek()->text == "AND") {
      cur.next("AND");
      lhs = ClassExpr::conjunction(std::move(lhs), parse_class_expr(kb, cur));
    }
    return lhs;
  }
  ClassExpr lhs = parse_class_expr(kb, cur);
  while (cur.peek() != nullptr && cur.peek()->text == "AND") {
    cur.next("AND");
    lhs = ClassExpr::conjunction(std::move(lhs), parse_class_expr(kb, cur));
  }
  return lhs;
}

ClassExpr parse_class_expr(const KnowledgeBase& kb, LineCursor& cur) {
  const Token& t = cur.next("class expression");
  if (t.text != "(") return ClassExpr::named_class(name_token(kb, t, cur.number()));
  ClassExpr inner = parse_group_body(kb, cur);
  cur.keyword(")");
  return inner;
}

void check_expr_declared(const KnowledgeBase& kb, const ClassExpr& e, std::size_t line) {
  auto need_class = [&](const Iri& c) {
    if (!kb.classes().count(c)) {
      throw Error(Errc::undeclared_term, "line " + std::to_string(line) + ": class " + c.short_form());
    }
  };
  switch (e.kind) {
    case ClassExpr::Kind::named: need_class(e.name); break;
    case ClassExpr::Kind::some:
      if (!kb.has_property(e.property)) {
        throw Error(Errc::undeclared_term, "line " + std::to_string(line) + ": property " + e.property.short_form());
      }
      need_class(e.name);
      break;
    case ClassExpr::Kind::conjunction:
      for (const auto& op : e.operands) check_expr_declared(kb, op, line);
      break;
  }
}

MetaAnnotation parse_meta(const KnowledgeBase& kb, LineCursor& cur) {
  MetaAnnotation m;
  m.cls = name_token(kb, cur.next("class"), cur.number());
  bool r = false, i = false, u = false;
  while (!cur.done()) {
    const Token& f = cur.next("flag");
    auto dup = [&](bool& seen) {
      if (seen) throw SyntaxError(cur.number(), f.column, "at most one flag per dimension");
      seen = true;
    };
    if (f.text == "+R") { dup(r); m.rigidity = Rigidity::rigid; }
    else if (f.text == "~R") { dup(r); m.rigidity = Rigidity::anti_rigid; }
    else if (f.text == "+I") { dup(i); m.identity = Identity::carries; }
    else if (f.text == "-I") { dup(i); m.identity = Identity::lacks; }
    else if (f.text == "+U") { dup(u); m.unity = Unity::unity; }
    else if (f.text == "~U") { dup(u); m.unity = Unity::anti_unity; }
    else if (f.text == "-U") { dup(u); m.unity = Unity::non_unity; }
    else throw SyntaxError(cur.number(), f.column, "one of +R ~R +I -I +U ~U -U");
  }
  return m;
}

struct PendingStatement {
  Statement statement;
  std::size_t line;
};

struct PendingAxiom {
  ClassAxiom axiom;
  std::size_t line;
};

}  // namespace

void parse_document_into(KnowledgeBase& kb, std::string_view text) {
  const auto lines = detail::tokenize(text);

  // Prefixes first so that the rest of the document is order-independent.
  for (const auto& line : lines) {
    if (line.tokens[0].text != "@prefix") continue;
    LineCursor cur(line);
    cur.next("@prefix");
    const Token& name = cur.next("prefix name");
    if (name.text.size() < 2 || name.text.back() != ':' || !is_identifier(name.text.substr(0, name.text.size() - 1))) {
      throw SyntaxError(line.number, name.column, "prefix name ending in ':'");
    }
    const Token& exp = cur.next("<expansion>");
    if (exp.text.size() < 2 || exp.text.front() != '<' || exp.text.back() != '>') {
      throw SyntaxError(line.number, exp.column, "<expansion>");
    }
    cur.finish();
    kb.add_prefix(name.text.substr(0, name.text.size() - 1), exp.text.substr(1, exp.text.size() - 2));
  }

  std::vector<std::pair<Iri, Iri>> links;
  std::vector<PendingAxiom> axioms;
  std::vector<PendingStatement> statements;

  for (const auto& line : lines) {
    LineCursor cur(line);
    const Token& head = cur.next("directive");
    const std::size_t n = line.number;
    if (head.text == "@prefix") continue;
    if (head.text == "CLASS") {
      const Iri cls = name_token(kb, cur.next("class name"), n);
      kb.declare_class(cls);
      if (!cur.done()) {
        cur.keyword("SUBCLASSOF");
        links.emplace_back(cls, name_token(kb, cur.next("parent class"), n));
      }
      cur.finish();
    } else if (head.text == "PROPERTY") {
      const Iri property = name_token(kb, cur.next("property name"), n);
      cur.keyword("DOMAIN");
      const Iri domain = name_token(kb, cur.next("domain class"), n);
      cur.keyword("RANGE");
      const Iri range = name_token(kb, cur.next("range class"), n);
      cur.finish();
      kb.declare_property(property, domain, range);
    } else if (head.text == "DISJOINT") {
      const Iri a = name_token(kb, cur.next("class"), n);
      const Iri b = name_token(kb, cur.next("class"), n);
      cur.finish();
      kb.add_disjoint(a, b);
    } else if (head.text == "AXIOM") {
      cur.keyword("(");
      ClassExpr body = parse_group_body(kb, cur);
      cur.keyword(")");
      cur.keyword("SUBCLASSOF");
      const Iri target = name_token(kb, cur.next("class"), n);
      cur.finish();
      axioms.push_back(PendingAxiom{ClassAxiom{std::move(body), target}, n});
    } else if (head.text == "INDIVIDUAL") {
      const Iri ind = name_token(kb, cur.next("individual name"), n);
      cur.keyword("TYPE");
      const Iri cls = name_token(kb, cur.next("class"), n);
      cur.finish();
      statements.push_back(PendingStatement{Statement{ind, rdf_type(), cls}, n});
    } else if (head.text == "FACT") {
      const Iri s = name_token(kb, cur.next("subject"), n);
      const Token& pt = cur.next("predicate");
      const Iri p = pt.text == "a" ? rdf_type() : name_token(kb, pt, n);
      const Term o = object_token(kb, cur.next("object"), n);
      cur.finish();
      statements.push_back(PendingStatement{Statement{s, p, o}, n});
    } else if (head.text == "META") {
      const MetaAnnotation m = parse_meta(kb, cur);
      kb.set_annotation(m);
    } else {
      throw SyntaxError(n, head.column, "directive (@prefix, CLASS, PROPERTY, DISJOINT, AXIOM, INDIVIDUAL, FACT, META)");
    }
  }

  for (const auto& [child, parent] : links) kb.add_subclass(child, parent);
  for (auto& pending : axioms) {
    check_expr_declared(kb, pending.axiom.body, pending.line);
    if (!kb.classes().count(pending.axiom.head)) {
      throw Error(Errc::undeclared_term,
                  "line " + std::to_string(pending.line) + ": class " + pending.axiom.head.short_form());
    }
    kb.add_axiom(std::move(pending.axiom));
  }
  for (const auto& pending : statements) {
    try {
      kb.insert(pending.statement);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(pending.line) + ": " + e.what());
    }
  }
}

KnowledgeBase parse_document(std::string_view text) {
  KnowledgeBase kb;
  parse_document_into(kb, text);
  return kb;
}

std::string serialize(const KnowledgeBase& kb) {
  std::ostringstream out;
  out << "# soa-hitlcps knowledge base\n";
  const auto& prefixes = kb.prefixes();
  if (auto def = prefixes.find(std::string(kDefaultPrefix)); def != prefixes.end()) {
    out << "@prefix " << def->first << ": <" << def->second << ">\n";
  }
  for (const auto& [name, expansion] : prefixes) {
    if (name != kDefaultPrefix) out << "@prefix " << name << ": <" << expansion << ">\n";
  }

  const auto& links = kb.subclass_links();
  for (const auto& cls : kb.classes()) {
    bool any = false;
    for (auto it = links.lower_bound({cls, Iri{}}); it != links.end() && it->first == cls; ++it) {
      out << "CLASS " << cls.short_form() << " SUBCLASSOF " << it->second.short_form() << '\n';
      any = true;
    }
    if (!any) out << "CLASS " << cls.short_form() << '\n';
  }
  for (const auto& [property, decl] : kb.properties()) {
    out << "PROPERTY " << property.short_form() << " DOMAIN " << decl.domain.short_form() << " RANGE "
        << decl.range.short_form() << '\n';
  }
  for (const auto& [a, b] : kb.disjoint_pairs()) {
    if (a < b) out << "DISJOINT " << a.short_form() << ' ' << b.short_form() << '\n';
  }
  for (const auto& axiom : kb.axioms()) out << axiom.str() << '\n';
  for (const auto& [cls, annotation] : kb.annotations()) {
    out << "META " << cls.short_form();
    if (const auto flags = annotation.flags(); !flags.empty()) out << ' ' << flags;
    out << '\n';
  }
  for (const auto& st : kb.statements()) {
    if (st.predicate == rdf_type()) {
      out << "INDIVIDUAL " << st.subject.short_form() << " TYPE " << to_string(st.object) << '\n';
    }
  }
  for (const auto& st : kb.statements()) {
    if (st.predicate != rdf_type()) {
      out << "FACT " << st.subject.short_form() << ' ' << st.predicate.short_form() << ' ' << to_string(st.object)
          << '\n';
    }
  }
  return out.str();
}

PatternSlot parse_pattern_slot(const KnowledgeBase& kb, std::string_view token) {
  auto tokens = detail::tokenize_line(token, 1);
  if (tokens.size() != 1) throw SyntaxError(1, 1, "single term");
  const Token& t = tokens[0];
  if (!t.quoted && t.text.size() > 1 && t.text[0] == '?') {
    const std::string name = t.text.substr(1);
    if (!is_identifier(name)) throw SyntaxError(1, t.column, "variable name");
    return Variable{name};
  }
  if (!t.quoted && t.text == "a") return rdf_type();
  Term term = object_token(kb, t, 1);
  if (const auto* i = as_iri(term)) return *i;
  return std::get<Literal>(term);
}

Pattern parse_pattern(const KnowledgeBase& kb, std::string_view text) {
  auto tokens = detail::tokenize_line(text, 1);
  if (tokens.size() != 3) throw SyntaxError(1, 1, "three terms (subject predicate object)");
  return Pattern{parse_pattern_slot(kb, tokens[0].text), parse_pattern_slot(kb, tokens[1].text),
                 parse_pattern_slot(kb, tokens[2].text)};
}

}  // namespace hcps
