#pragma once
// In-memory typed knowledge graph.
//
// A KnowledgeBase holds declarations (classes, properties, subclass links,
// disjointness, axioms, OntoClean annotations) and a set of statements. All
// containers are ordered so that iteration, matching and serialization are
// deterministic. Mutation requires exclusive access; concurrent reads of an
// unmodified instance are fine.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace hcps {

inline constexpr std::string_view kDefaultPrefix = "soa-hitlcps";
inline constexpr std::string_view kDefaultExpansion = "urn:soa-hitlcps#";
// Reserved vocabularies; always resolvable, never part of the prefix table.
inline constexpr std::string_view kRdfPrefix = "rdf";
inline constexpr std::string_view kXsdPrefix = "xsd";

struct Iri {
  std::string prefix;
  std::string local;

  friend auto operator<=>(const Iri&, const Iri&) = default;

  // "prefix:local"
  std::string str() const;
  // bare local name for the default prefix, "prefix:local" otherwise
  std::string short_form() const;
};

// Iri in the default namespace.
Iri iri(std::string_view local);
const Iri& rdf_type();
bool is_datatype(const Iri& range);

struct Literal {
  enum class Kind : std::uint8_t { string, integer, decimal };

  Kind kind = Kind::string;
  std::string lexical;

  friend auto operator<=>(const Literal&, const Literal&) = default;

  static Literal string(std::string value);
  static Literal integer(std::int64_t value);
  // `lexical` must look like -?[0-9]+.[0-9]+
  static Literal decimal(std::string lexical);

  // Surface form: quoted and escaped for strings, bare for numbers.
  std::string str() const;
  double number() const;
};

using Term = std::variant<Iri, Literal>;

std::string to_string(const Term& term);
const Iri* as_iri(const Term& term);

struct Statement {
  Iri subject;
  Iri predicate;
  Term object;

  friend auto operator<=>(const Statement&, const Statement&) = default;
};

struct Variable {
  std::string name;  // without the leading '?'

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using PatternSlot = std::variant<Variable, Iri, Literal>;

struct Pattern {
  PatternSlot subject;
  PatternSlot predicate;
  PatternSlot object;

  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

std::string to_string(const PatternSlot& slot);
std::string to_string(const Pattern& pattern);
std::vector<std::string> variables_of(const Pattern& pattern);

using Binding = std::map<std::string, Term>;

// Substitutes bound variables; unbound ones stay variables.
Pattern substitute(const Pattern& pattern, const Binding& binding);

struct PropertyDecl {
  Iri domain;
  Iri range;

  friend auto operator<=>(const PropertyDecl&, const PropertyDecl&) = default;

  bool is_object_property() const { return !is_datatype(range); }
};

// Restricted class expression: a named class, a binary conjunction, or a
// single-level existential restriction `property SOME Class`.
struct ClassExpr {
  enum class Kind : std::uint8_t { named, conjunction, some };

  Kind kind = Kind::named;
  Iri name;      // named: the class; some: the filler class
  Iri property;  // some only
  std::vector<ClassExpr> operands;  // conjunction only, exactly two

  static ClassExpr named_class(Iri name);
  static ClassExpr conjunction(ClassExpr lhs, ClassExpr rhs);
  static ClassExpr some(Iri property, Iri filler);

  bool operator==(const ClassExpr& other) const;
  std::strong_ordering operator<=>(const ClassExpr& other) const;

  std::string str() const;
  // Named conjuncts if the expression is a pure conjunction of named classes.
  std::optional<std::vector<Iri>> named_conjuncts() const;
};

struct ClassAxiom {
  ClassExpr body;
  Iri head;

  bool operator==(const ClassAxiom& other) const = default;
  std::strong_ordering operator<=>(const ClassAxiom& other) const;

  std::string str() const;
};

enum class Rigidity : std::uint8_t { unset, rigid, anti_rigid };        // +R ~R
enum class Identity : std::uint8_t { unset, carries, lacks };           // +I -I
enum class Unity : std::uint8_t { unset, unity, anti_unity, non_unity };  // +U ~U -U

struct MetaAnnotation {
  Iri cls;
  Rigidity rigidity = Rigidity::unset;
  Identity identity = Identity::unset;
  Unity unity = Unity::unset;

  friend auto operator<=>(const MetaAnnotation&, const MetaAnnotation&) = default;

  // Space separated flags in canonical order, empty when all unset.
  std::string flags() const;
};

class KnowledgeBase {
 public:
  KnowledgeBase();

  // Prefixes. Redeclaring a prefix overrides its expansion.
  void add_prefix(const std::string& name, const std::string& expansion);
  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }
  // Maps a prefixed name to its canonical Iri (the first prefix, in table
  // order with the default first, sharing the expansion). Throws UnknownPrefix.
  Iri resolve(std::string_view prefix, std::string_view local) const;
  // Accepts "local" (default prefix) or "prefix:local".
  Iri resolve(std::string_view name) const;

  void declare_class(const Iri& cls);
  void add_subclass(const Iri& child, const Iri& parent);  // throws CyclicSubclass
  void declare_property(const Iri& property, const Iri& domain, const Iri& range);
  void add_disjoint(const Iri& a, const Iri& b);
  void add_axiom(ClassAxiom axiom);
  void set_annotation(const MetaAnnotation& annotation);
  void remove_class(const Iri& cls);

  // Predicate must be rdf:type or a declared property (UndeclaredTerm).
  // Returns true when the statement was new.
  bool insert(const Statement& statement);
  bool insert(const Iri& subject, const Iri& predicate, const Term& object) {
    return insert(Statement{subject, predicate, object});
  }
  bool erase(const Statement& statement);
  bool contains(const Statement& statement) const;

  const std::set<Iri>& classes() const { return classes_; }
  const std::map<Iri, PropertyDecl>& properties() const { return properties_; }
  const std::set<std::pair<Iri, Iri>>& subclass_links() const { return subclass_links_; }
  // Symmetric closure: both (a, b) and (b, a) are present.
  const std::set<std::pair<Iri, Iri>>& disjoint_pairs() const { return disjoint_; }
  const std::set<ClassAxiom>& axioms() const { return axioms_; }
  const std::map<Iri, MetaAnnotation>& annotations() const { return annotations_; }
  const std::set<Statement>& statements() const { return spo_; }

  bool has_property(const Iri& property) const { return properties_.count(property) != 0; }
  std::size_t object_property_count() const;

  // Objects of (subject, predicate, *) in order.
  std::vector<Term> objects(const Iri& subject, const Iri& predicate) const;
  // Subjects of (*, predicate, object) in order.
  std::vector<Iri> subjects(const Iri& predicate, const Term& object) const;
  std::optional<Term> first_object(const Iri& subject, const Iri& predicate) const;
  bool has_type(const Iri& individual, const Iri& cls) const;
  // Statements whose subject is `subject`.
  std::vector<Statement> describe(const Iri& subject) const;

  // Every binding of the pattern's variables such that the substituted triple
  // is in the kb, ordered lexicographically by bound values.
  std::vector<Binding> match(const Pattern& pattern) const;

  // Set union of every field; prefixes from `other` override.
  void merge(const KnowledgeBase& other);

  // Set equality of every field.
  bool operator==(const KnowledgeBase& other) const;

 private:
  struct PosLess {
    bool operator()(const Statement& a, const Statement& b) const;
  };
  struct OspLess {
    bool operator()(const Statement& a, const Statement& b) const;
  };

  bool reaches(const Iri& from, const Iri& to, std::vector<Iri>& path) const;

  std::map<std::string, std::string> prefixes_;
  std::set<Iri> classes_;
  std::map<Iri, PropertyDecl> properties_;
  std::set<std::pair<Iri, Iri>> subclass_links_;
  std::set<std::pair<Iri, Iri>> disjoint_;
  std::set<ClassAxiom> axioms_;
  std::map<Iri, MetaAnnotation> annotations_;
  std::set<Statement> spo_;
  std::set<Statement, PosLess> pos_;
  std::set<Statement, OspLess> osp_;
};

// Text format, one directive per line:
//   @prefix name: <expansion>
//   CLASS Name [SUBCLASSOF Parent]
//   PROPERTY name DOMAIN Class RANGE Class
//   DISJOINT A B
//   AXIOM ( ClassExpr ) SUBCLASSOF Class
//   INDIVIDUAL name TYPE Class
//   FACT subject predicate object
//   META Class [+R|~R] [+I|-I] [+U|~U|-U]
KnowledgeBase parse_document(std::string_view text);
// Parses on top of an existing kb (declarations and prefixes visible).
void parse_document_into(KnowledgeBase& kb, std::string_view text);
std::string serialize(const KnowledgeBase& kb);

// Parses a single term in kb surface syntax ("?x", "name", "p:name", literal).
PatternSlot parse_pattern_slot(const KnowledgeBase& kb, std::string_view token);
// Three whitespace separated terms; `a` stands for rdf:type.
Pattern parse_pattern(const KnowledgeBase& kb, std::string_view text);

bool is_identifier(std::string_view name);

}  // namespace hcps
