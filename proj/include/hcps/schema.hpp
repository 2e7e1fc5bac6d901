#pragma once
// Base ontology, capability and service-profile data model, and the
// constructors that write them into a KnowledgeBase.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hcps/decimal.hpp"
#include "hcps/kb.hpp"

namespace hcps {

// ---------------------------------------------------------------------------
// Base ontology and taxonomy

KnowledgeBase base_ontology();
std::string_view base_ontology_text();

struct Taxonomy {
  std::set<Iri> skills;
  std::set<Iri> knowledge;
  std::set<Iri> abilities;
  std::set<Iri> performance_factors;
  std::set<Iri> education_levels;
};

// Terms shipped with the base ontology.
const Taxonomy& taxonomy();
// Terms known to a particular kb (shipped plus any declared by the kb).
Taxonomy taxonomy_of(const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Service profiles

enum class ServiceKind { sensing, actuating, communicating, processing };

const char* to_string(ServiceKind kind);
std::optional<ServiceKind> parse_service_kind(std::string_view text);
Iri kind_class(ServiceKind kind);

struct ServiceTypeSpec {
  bool composite = false;
  ServiceKind kind = ServiceKind::processing;  // atomic only
  std::vector<Iri> parts;                      // composite only
  bool adaptation = false;                     // composite only

  bool operator==(const ServiceTypeSpec&) const = default;
};

struct Parameter {
  std::string name;
  Iri type;

  bool operator==(const Parameter&) const = default;
};

struct Qos {
  Rational reputation{0};
  Rational cost{0};
  Rational response_time{0};  // seconds

  bool operator==(const Qos&) const = default;
};

struct PropertyBundle {
  std::vector<Iri> context;
  Iri capability_ref;  // empty local: the provider's own capability
  Qos qos;

  bool operator==(const PropertyBundle&) const = default;
};

struct Limitation {
  enum class Kind { time_window, max_distance, location, condition };

  Kind kind = Kind::time_window;
  std::int64_t start = 0;  // time_window, inclusive
  std::int64_t end = 0;    // time_window, inclusive
  Rational meters{0};      // max_distance
  Iri place;               // max_distance anchor, location
  Pattern condition;       // condition

  static Limitation window(std::int64_t start, std::int64_t end);
  static Limitation distance(Rational meters, Iri anchor);
  static Limitation location(Iri place);
  static Limitation when(Pattern condition);

  bool operator==(const Limitation&) const = default;
};

struct ServiceProfile {
  Iri service_id;
  ServiceTypeSpec service_type;
  std::vector<Parameter> inputs;
  std::vector<Parameter> outputs;
  std::vector<Pattern> preconditions;
  std::vector<Pattern> effects_add;
  std::vector<Pattern> effects_remove;
  PropertyBundle properties;
  std::int64_t degree_of_parallelism = 1;
  std::vector<Limitation> limitations;

  bool operator==(const ServiceProfile&) const = default;
};

// Variables every precondition and effect may use without binding them.
inline constexpr const char* kBuiltinVariables[] = {"consumer", "provider", "service"};

// Reason text when the profile breaks an invariant, empty when valid.
std::string profile_problem(const ServiceProfile& profile);

// ---------------------------------------------------------------------------
// Capabilities

struct ScaledTerm {
  Iri term;
  int scale = 1;  // 1..7

  bool operator==(const ScaledTerm&) const = default;
};

struct Preference {
  std::string dimension;  // time | location | price
  std::string value;

  bool operator==(const Preference&) const = default;
};

struct ExperienceRecord {
  Iri service;
  Iri requester;
  Rational rating{0};  // 0..5
  std::map<std::string, Rational> criteria;
  std::int64_t timestamp = 0;

  bool operator==(const ExperienceRecord&) const = default;
};

struct UnlockRule {
  std::optional<ScaledTerm> required_skill;
  std::vector<Iri> required_knowledge;
  std::int64_t min_experience_count = 0;

  bool empty() const { return !required_skill && required_knowledge.empty() && min_experience_count == 0; }
  bool operator==(const UnlockRule&) const = default;
};

struct PotentialService {
  ServiceProfile template_profile;
  UnlockRule unlock_rule;

  bool operator==(const PotentialService&) const = default;
};

struct HumanCapability {
  std::vector<Preference> preferences;
  std::vector<ScaledTerm> abilities;
  std::vector<ScaledTerm> performance_factors;
  std::vector<ScaledTerm> skills;
  std::vector<Iri> knowledge;
  std::optional<Iri> education;
  std::vector<ExperienceRecord> experience;
  std::vector<PotentialService> potential;

  bool operator==(const HumanCapability&) const = default;
};

struct MachineCapability {
  std::vector<Iri> hardware;
  std::vector<Iri> software;
  std::vector<Iri> learned_knowledge;
  std::vector<Iri> programmed_skills;

  bool operator==(const MachineCapability&) const = default;
};

// ---------------------------------------------------------------------------
// Registration and typed views

// Capability individual of a node: <name>_cap.
Iri capability_of(const Iri& node);

// Throws DuplicateIndividual, UnknownTaxonomyTerm, InvalidCapability.
Iri register_human(KnowledgeBase& kb, const Iri& name, const HumanCapability& capability,
                   const std::vector<Iri>& context);
Iri register_machine(KnowledgeBase& kb, const Iri& name, const MachineCapability& capability,
                     const std::vector<Iri>& context);

bool is_registered(const KnowledgeBase& kb, const Iri& node);
bool is_machine(const KnowledgeBase& kb, const Iri& node);

// Programmed skills are fixed at registration: always ImmutableSkillSet for a
// registered machine, UnknownIndividual otherwise.
void add_programmed_skill(KnowledgeBase& kb, const Iri& machine, const Iri& skill);
// Append-only; returns false when already known.
bool append_learned_knowledge(KnowledgeBase& kb, const Iri& machine, const Iri& fact);

// Human growth: raise or set a skill level, acquire knowledge.
void set_skill_level(KnowledgeBase& kb, const Iri& human, const Iri& skill, int scale);
void add_knowledge(KnowledgeBase& kb, const Iri& human, const Iri& knowledge);

// Appends an Experience individual to the node's capability.
Iri add_experience(KnowledgeBase& kb, const Iri& node, const ExperienceRecord& record);

bool has_skill(const KnowledgeBase& kb, const Iri& node, const Iri& skill);
std::optional<int> skill_level(const KnowledgeBase& kb, const Iri& node, const Iri& skill);
std::optional<int> ability_level(const KnowledgeBase& kb, const Iri& node, const Iri& ability);
bool has_knowledge(const KnowledgeBase& kb, const Iri& node, const Iri& knowledge);
std::vector<ExperienceRecord> experience_of(const KnowledgeBase& kb, const Iri& node);
std::vector<Iri> context_of(const KnowledgeBase& kb, const Iri& node);

// ---------------------------------------------------------------------------
// Text formats

// Resolves a file reference (relative to whatever the caller chooses) to its
// contents. Throws Error(Errc::io) on failure.
using FileLoader = std::function<std::string(std::string_view ref)>;

struct ProfileDocument {
  ServiceProfile profile;
  std::optional<Iri> provider;
};

//   SERVICE <name>
//   PROVIDER <node>
//   TYPE sensing|actuating|communicating|processing
//   TYPE composite <part>... [ADAPTATION]
//   INPUT <name> <type>          OUTPUT <name> <type>
//   PRECONDITION <s> <p> <o>     EFFECT ADD|REMOVE <s> <p> <o>
//   CONTEXT <iri>...             CAPABILITY <iri>
//   QOS reputation=<d> cost=<d> response_time=<d>
//   PARALLELISM <n>
//   LIMIT WINDOW <start> <end> | DISTANCE <meters> <anchor> | LOCATION <iri> | CONDITION <s> <p> <o>
ProfileDocument parse_profile(const KnowledgeBase& kb, std::string_view text);
std::string format_profile(const ServiceProfile& profile, const std::optional<Iri>& provider = std::nullopt);

struct HumanCapabilityDocument {
  HumanCapability capability;
  std::vector<Iri> context;
};

struct MachineCapabilityDocument {
  MachineCapability capability;
  std::vector<Iri> context;
};

//   SKILL <iri> <scale>          KNOWLEDGE <iri>...
//   ABILITY <iri> <scale>        PERFORMANCE <iri> <scale>
//   PREFERENCE <dimension> <value>
//   EDUCATION <iri>              CONTEXT <iri>...
//   EXPERIENCE <service> <requester> <rating> <time>
//   POTENTIAL <profile-ref> [SKILL <iri> <scale>] [KNOWLEDGE <iri>...] [EXPERIENCE <n>]
HumanCapabilityDocument parse_human_capability(const KnowledgeBase& kb, std::string_view text,
                                               const FileLoader& load = nullptr);
//   HARDWARE <iri>...   SOFTWARE <iri>...   PROGRAMMED_SKILL <iri>...
//   LEARNED <iri>...    CONTEXT <iri>...
MachineCapabilityDocument parse_machine_capability(const KnowledgeBase& kb, std::string_view text);

}  // namespace hcps
