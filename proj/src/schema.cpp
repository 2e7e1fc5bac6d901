#include "hcps/schema.hpp"

#include <algorithm>

#include "base_ontology.hpp"
#include "hcps/error.hpp"
#include "lexer.hpp"
#include "text_util.hpp"

namespace hcps {

using detail::LineCursor;
using detail::Token;

namespace {

Iri suffixed(const Iri& base, const std::string& suffix) { return Iri{base.prefix, base.local + "_" + suffix}; }

Iri entry_of(const Iri& cap, const Iri& term) { return suffixed(cap, term.local); }

Iri p(const char* local) { return iri(local); }

void check_scale(const ScaledTerm& t, const char* what) {
  if (t.scale < 1 || t.scale > 7)
    throw Error(Errc::invalid_capability, std::string(what) + " " + t.term.short_form() + " scale " +
                                              std::to_string(t.scale) + " outside 1..7");
}

void check_term(const KnowledgeBase& kb, const Iri& term, const char* cls) {
  if (!kb.has_type(term, iri(cls))) throw Error(Errc::unknown_taxonomy_term, term.short_form() + " is not a " + cls);
}

void check_rating(const Rational& rating) {
  if (rating < 0 || rating > 5) throw Error(Errc::rating_out_of_range, to_decimal_string(rating));
}

Literal decimal_literal(const Rational& r) {
  const std::string text = to_decimal_string(r);
  if (text.find('.') == std::string::npos) return Literal::decimal(text + ".0");
  return Literal::decimal(text);
}

std::optional<std::int64_t> int_value(const KnowledgeBase& kb, const Iri& s, const Iri& pred) {
  const auto v = kb.first_object(s, pred);
  if (!v) return std::nullopt;
  const auto* lit = std::get_if<Literal>(&*v);
  if (!lit || lit->kind == Literal::Kind::string) return std::nullopt;
  return static_cast<std::int64_t>(to_double(parse_decimal(lit->lexical)));
}

std::optional<Rational> decimal_value(const KnowledgeBase& kb, const Iri& s, const Iri& pred) {
  const auto v = kb.first_object(s, pred);
  if (!v) return std::nullopt;
  const auto* lit = std::get_if<Literal>(&*v);
  if (!lit || lit->kind == Literal::Kind::string) return std::nullopt;
  return parse_decimal(lit->lexical);
}

void ensure_typed(KnowledgeBase& kb, const Iri& individual, const char* cls) {
  kb.insert(individual, rdf_type(), iri(cls));
}

void write_scaled(KnowledgeBase& kb, const Iri& cap, const char* link, const ScaledTerm& t) {
  kb.insert(cap, p(link), t.term);
  const Iri entry = entry_of(cap, t.term);
  kb.insert(cap, p("hasScaleEntry"), entry);
  kb.insert(entry, p("scaleOf"), t.term);
  for (const auto& old : kb.objects(entry, p("scaleValue"))) kb.erase({entry, p("scaleValue"), old});
  kb.insert(entry, p("scaleValue"), Literal::integer(t.scale));
}

void write_context(KnowledgeBase& kb, const Iri& node, const std::vector<Iri>& context) {
  for (const auto& c : context) {
    kb.insert(node, p("hasContext"), c);
    ensure_typed(kb, c, "Context");
  }
}

std::set<std::string> pattern_vars(const std::vector<Pattern>& ps) {
  std::set<std::string> out;
  for (const auto& pt : ps)
    for (const auto& v : variables_of(pt)) out.insert(v);
  return out;
}

Taxonomy collect_taxonomy(const KnowledgeBase& kb) {
  auto members = [&](const char* cls) {
    const auto subs = kb.subjects(rdf_type(), iri(cls));
    return std::set<Iri>(subs.begin(), subs.end());
  };
  return Taxonomy{members("Skill"), members("Knowledge"), members("Ability"), members("PerformanceFactor"),
                  members("Education")};
}

void validate_potential(const KnowledgeBase& kb, const PotentialService& pot) {
  if (pot.unlock_rule.empty())
    throw Error(Errc::invalid_capability, "potential " + pot.template_profile.service_id.short_form() + " has no unlock rule");
  if (const auto problem = profile_problem(pot.template_profile); !problem.empty())
    throw Error(Errc::invalid_profile, problem);
  if (pot.unlock_rule.required_skill) {
    check_scale(*pot.unlock_rule.required_skill, "required skill");
    check_term(kb, pot.unlock_rule.required_skill->term, "Skill");
  }
  for (const auto& k : pot.unlock_rule.required_knowledge) check_term(kb, k, "Knowledge");
}

void write_potential(KnowledgeBase& kb, const Iri& cap, const PotentialService& pot) {
  const Iri node = suffixed(pot.template_profile.service_id, "potential");
  kb.insert(cap, p("hasPotential"), node);
  ensure_typed(kb, node, "PotentialService");
  if (const auto& s = pot.unlock_rule.required_skill) {
    kb.insert(node, p("requiresSkill"), s->term);
    kb.insert(node, p("requiredSkillLevel"), Literal::integer(s->scale));
  }
  for (const auto& k : pot.unlock_rule.required_knowledge) kb.insert(node, p("requiresKnowledge"), k);
  kb.insert(node, p("minExperienceCount"), Literal::integer(pot.unlock_rule.min_experience_count));
  kb.insert(node, p("templateProfile"), Literal::string(format_profile(pot.template_profile)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Base ontology and taxonomy

std::string_view base_ontology_text() { return detail::kBaseOntology; }

KnowledgeBase base_ontology() {
  static const KnowledgeBase kb = parse_document(detail::kBaseOntology);
  return kb;
}

const Taxonomy& taxonomy() {
  static const Taxonomy t = collect_taxonomy(base_ontology());
  return t;
}

Taxonomy taxonomy_of(const KnowledgeBase& kb) { return collect_taxonomy(kb); }

// ---------------------------------------------------------------------------
// Profiles

const char* to_string(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::sensing: return "sensing";
    case ServiceKind::actuating: return "actuating";
    case ServiceKind::communicating: return "communicating";
    case ServiceKind::processing: return "processing";
  }
  return "processing";
}

std::optional<ServiceKind> parse_service_kind(std::string_view text) {
  for (auto k : {ServiceKind::sensing, ServiceKind::actuating, ServiceKind::communicating, ServiceKind::processing})
    if (text == to_string(k)) return k;
  return std::nullopt;
}

Iri kind_class(ServiceKind kind) {
  switch (kind) {
    case ServiceKind::sensing: return iri("SensingService");
    case ServiceKind::actuating: return iri("ActuatingService");
    case ServiceKind::communicating: return iri("CommunicatingService");
    case ServiceKind::processing: return iri("ProcessingService");
  }
  return iri("ProcessingService");
}

Limitation Limitation::window(std::int64_t start, std::int64_t end) {
  Limitation l;
  l.kind = Kind::time_window;
  l.start = start;
  l.end = end;
  return l;
}

Limitation Limitation::distance(Rational meters, Iri anchor) {
  Limitation l;
  l.kind = Kind::max_distance;
  l.meters = meters;
  l.place = std::move(anchor);
  return l;
}

Limitation Limitation::location(Iri place) {
  Limitation l;
  l.kind = Kind::location;
  l.place = std::move(place);
  return l;
}

Limitation Limitation::when(Pattern condition) {
  Limitation l;
  l.kind = Kind::condition;
  l.condition = std::move(condition);
  return l;
}

std::string profile_problem(const ServiceProfile& profile) {
  const std::string id = profile.service_id.local.empty() ? "<unnamed>" : profile.service_id.short_form();
  if (profile.service_id.local.empty()) return "service id missing";
  if (profile.degree_of_parallelism < 1) return id + ": degree of parallelism must be at least 1";
  if (profile.service_type.composite && profile.service_type.parts.empty()) return id + ": composite service without parts";
  if (!profile.service_type.composite && profile.service_type.adaptation) return id + ": adaptation service must be composite";
  const auto& q = profile.properties.qos;
  if (q.reputation < 0 || q.reputation > 5) return id + ": reputation outside 0..5";
  if (q.cost < 0) return id + ": negative cost";
  if (q.response_time < 0) return id + ": negative response time";
  std::set<std::string> names;
  for (const auto& in : profile.inputs)
    if (!names.insert(in.name).second) return id + ": duplicate input " + in.name;
  for (const auto& l : profile.limitations) {
    if (l.kind == Limitation::Kind::time_window && l.start > l.end) return id + ": time window ends before it starts";
    if (l.kind == Limitation::Kind::max_distance && l.meters <= 0) return id + ": distance must be positive";
  }
  std::set<std::string> bound = pattern_vars(profile.preconditions);
  bound.insert(names.begin(), names.end());
  for (const char* v : kBuiltinVariables) bound.insert(v);
  for (const auto* effects : {&profile.effects_add, &profile.effects_remove})
    for (const auto& v : pattern_vars(*effects))
      if (!bound.count(v)) return id + ": effect variable ?" + v + " is not bound by an input or precondition";
  return {};
}

// ---------------------------------------------------------------------------
// Registration

Iri capability_of(const Iri& node) { return suffixed(node, "cap"); }

bool is_registered(const KnowledgeBase& kb, const Iri& node) {
  return kb.contains({node, p("hasCapability"), capability_of(node)});
}

bool is_machine(const KnowledgeBase& kb, const Iri& node) {
  return kb.has_type(capability_of(node), iri("MachineCapability"));
}

Iri register_human(KnowledgeBase& kb, const Iri& name, const HumanCapability& c, const std::vector<Iri>& context) {
  if (is_registered(kb, name) || !kb.describe(name).empty()) throw Error(Errc::duplicate_individual, name.short_form());
  for (const auto& s : c.skills) {
    check_scale(s, "skill");
    check_term(kb, s.term, "Skill");
  }
  for (const auto& a : c.abilities) {
    check_scale(a, "ability");
    check_term(kb, a.term, "Ability");
  }
  for (const auto& f : c.performance_factors) {
    check_scale(f, "performance factor");
    check_term(kb, f.term, "PerformanceFactor");
  }
  for (const auto& k : c.knowledge) check_term(kb, k, "Knowledge");
  if (c.education) check_term(kb, *c.education, "Education");
  for (const auto& pref : c.preferences)
    if (pref.dimension != "time" && pref.dimension != "location" && pref.dimension != "price")
      throw Error(Errc::invalid_capability, "preference dimension '" + pref.dimension + "'");
  for (const auto& e : c.experience) check_rating(e.rating);
  for (const auto& pot : c.potential) validate_potential(kb, pot);

  const Iri cap = capability_of(name);
  ensure_typed(kb, name, "PhysicalThing");
  kb.insert(name, p("hasCapability"), cap);
  ensure_typed(kb, cap, "HumanCapability");
  write_context(kb, name, context);
  for (const auto& s : c.skills) write_scaled(kb, cap, "hasHumanSkill", s);
  for (const auto& a : c.abilities) write_scaled(kb, cap, "hasAbility", a);
  for (const auto& f : c.performance_factors) write_scaled(kb, cap, "hasPerformanceFactor", f);
  for (const auto& k : c.knowledge) kb.insert(cap, p("hasHumanKnowledge"), k);
  if (c.education) kb.insert(cap, p("hasEducation"), *c.education);
  for (std::size_t i = 0; i < c.preferences.size(); ++i) {
    const Iri pref = suffixed(cap, "pref" + std::to_string(i + 1));
    kb.insert(cap, p("hasPreference"), pref);
    ensure_typed(kb, pref, "Preference");
    kb.insert(pref, p("preferenceDimension"), Literal::string(c.preferences[i].dimension));
    kb.insert(pref, p("preferenceValue"), Literal::string(c.preferences[i].value));
  }
  for (const auto& e : c.experience) add_experience(kb, name, e);
  for (const auto& pot : c.potential) write_potential(kb, cap, pot);
  return name;
}

Iri register_machine(KnowledgeBase& kb, const Iri& name, const MachineCapability& c, const std::vector<Iri>& context) {
  if (is_registered(kb, name) || !kb.describe(name).empty()) throw Error(Errc::duplicate_individual, name.short_form());
  for (const auto& s : c.programmed_skills) check_term(kb, s, "Skill");

  const Iri cap = capability_of(name);
  const Iri spec = suffixed(name, "spec");
  ensure_typed(kb, name, "Machine");
  kb.insert(name, p("hasCapability"), cap);
  ensure_typed(kb, cap, "MachineCapability");
  kb.insert(cap, p("hasSpecification"), spec);
  ensure_typed(kb, spec, "MachineSpecification");
  for (const auto& h : c.hardware) {
    kb.insert(spec, p("hasHardware"), h);
    ensure_typed(kb, h, "Hardware");
  }
  for (const auto& s : c.software) {
    kb.insert(spec, p("hasSoftware"), s);
    ensure_typed(kb, s, "Software");
  }
  for (const auto& s : c.programmed_skills) kb.insert(cap, p("hasMachineSkill"), s);
  for (const auto& k : c.learned_knowledge) kb.insert(cap, p("hasMachineKnowledge"), k);
  write_context(kb, name, context);
  return name;
}

void add_programmed_skill(KnowledgeBase& kb, const Iri& machine, const Iri& skill) {
  (void)kb;
  if (!is_registered(kb, machine) || !is_machine(kb, machine)) throw Error(Errc::unknown_individual, machine.short_form());
  throw Error(Errc::immutable_skill_set, machine.short_form() + " cannot gain " + skill.short_form() + " without reprogramming");
}

bool append_learned_knowledge(KnowledgeBase& kb, const Iri& machine, const Iri& fact) {
  if (!is_registered(kb, machine) || !is_machine(kb, machine)) throw Error(Errc::unknown_individual, machine.short_form());
  return kb.insert(capability_of(machine), p("hasMachineKnowledge"), fact);
}

void set_skill_level(KnowledgeBase& kb, const Iri& human, const Iri& skill, int scale) {
  if (!is_registered(kb, human) || is_machine(kb, human)) throw Error(Errc::unknown_individual, human.short_form());
  const ScaledTerm t{skill, scale};
  check_scale(t, "skill");
  check_term(kb, skill, "Skill");
  write_scaled(kb, capability_of(human), "hasHumanSkill", t);
}

void add_knowledge(KnowledgeBase& kb, const Iri& human, const Iri& knowledge) {
  if (!is_registered(kb, human) || is_machine(kb, human)) throw Error(Errc::unknown_individual, human.short_form());
  check_term(kb, knowledge, "Knowledge");
  kb.insert(capability_of(human), p("hasHumanKnowledge"), knowledge);
}

Iri add_experience(KnowledgeBase& kb, const Iri& node, const ExperienceRecord& r) {
  check_rating(r.rating);
  const Iri cap = capability_of(node);
  std::size_t n = kb.objects(cap, p("hasExperience")).size() + 1;
  Iri id;
  do {
    std::string num = std::to_string(n++);
    id = suffixed(cap, "exp" + std::string(num.size() < 4 ? 4 - num.size() : 0, '0') + num);
  } while (!kb.describe(id).empty());
  kb.insert(cap, p("hasExperience"), id);
  ensure_typed(kb, id, "Experience");
  kb.insert(id, p("experienceOfService"), r.service);
  kb.insert(id, p("ratedBy"), r.requester);
  kb.insert(id, p("hasRating"), decimal_literal(r.rating));
  kb.insert(id, p("atTime"), Literal::integer(r.timestamp));
  for (const auto& [name, score] : r.criteria)
    kb.insert(id, p("hasCriterionScore"), Literal::string(name + "=" + to_decimal_string(score)));
  return id;
}

bool has_skill(const KnowledgeBase& kb, const Iri& node, const Iri& skill) {
  const Iri cap = capability_of(node);
  return kb.contains({cap, p("hasHumanSkill"), skill}) || kb.contains({cap, p("hasMachineSkill"), skill});
}

std::optional<int> skill_level(const KnowledgeBase& kb, const Iri& node, const Iri& skill) {
  const Iri cap = capability_of(node);
  if (!kb.contains({cap, p("hasHumanSkill"), skill})) return std::nullopt;
  const auto v = int_value(kb, entry_of(cap, skill), p("scaleValue"));
  return v ? std::optional<int>(static_cast<int>(*v)) : std::nullopt;
}

std::optional<int> ability_level(const KnowledgeBase& kb, const Iri& node, const Iri& ability) {
  const Iri cap = capability_of(node);
  if (!kb.contains({cap, p("hasAbility"), ability})) return std::nullopt;
  const auto v = int_value(kb, entry_of(cap, ability), p("scaleValue"));
  return v ? std::optional<int>(static_cast<int>(*v)) : std::nullopt;
}

bool has_knowledge(const KnowledgeBase& kb, const Iri& node, const Iri& knowledge) {
  const Iri cap = capability_of(node);
  return kb.contains({cap, p("hasHumanKnowledge"), knowledge}) || kb.contains({cap, p("hasMachineKnowledge"), knowledge});
}

std::vector<ExperienceRecord> experience_of(const KnowledgeBase& kb, const Iri& node) {
  std::vector<ExperienceRecord> out;
  for (const auto& t : kb.objects(capability_of(node), p("hasExperience"))) {
    const Iri* id = as_iri(t);
    if (!id) continue;
    ExperienceRecord r;
    if (auto s = kb.first_object(*id, p("experienceOfService")); s && as_iri(*s)) r.service = *as_iri(*s);
    if (auto s = kb.first_object(*id, p("ratedBy")); s && as_iri(*s)) r.requester = *as_iri(*s);
    r.rating = decimal_value(kb, *id, p("hasRating")).value_or(Rational(0));
    r.timestamp = int_value(kb, *id, p("atTime")).value_or(0);
    for (const auto& c : kb.objects(*id, p("hasCriterionScore"))) {
      const auto* lit = std::get_if<Literal>(&c);
      if (!lit) continue;
      const auto eq = lit->lexical.find('=');
      if (eq == std::string::npos) continue;
      r.criteria[lit->lexical.substr(0, eq)] = parse_decimal(lit->lexical.substr(eq + 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Iri> context_of(const KnowledgeBase& kb, const Iri& node) {
  std::vector<Iri> out;
  for (const auto& t : kb.objects(node, p("hasContext")))
    if (const Iri* i = as_iri(t)) out.push_back(*i);
  return out;
}

// ---------------------------------------------------------------------------
// Text formats

ProfileDocument parse_profile(const KnowledgeBase& kb, std::string_view text) {
  ProfileDocument doc;
  ServiceProfile& prof = doc.profile;
  bool have_type = false;
  for (const auto& line : detail::tokenize(text)) {
    LineCursor cur(line);
    const std::size_t n = line.number;
    const Token& head = cur.next("directive");
    const std::string& d = head.text;
    if (d == "SERVICE") {
      prof.service_id = detail::name_token(kb, cur.next("service name"), n);
    } else if (d == "PROVIDER") {
      doc.provider = detail::name_token(kb, cur.next("provider"), n);
    } else if (d == "TYPE") {
      const Token& k = cur.next("service kind");
      have_type = true;
      if (k.text == "composite") {
        prof.service_type.composite = true;
        while (!cur.done()) {
          const Token& t = cur.next("part");
          if (t.text == "ADAPTATION") {
            prof.service_type.adaptation = true;
            break;
          }
          prof.service_type.parts.push_back(detail::name_token(kb, t, n));
        }
      } else {
        const auto kind = parse_service_kind(k.text);
        if (!kind) throw SyntaxError(n, k.column, "sensing, actuating, communicating, processing or composite");
        prof.service_type.kind = *kind;
      }
    } else if (d == "INPUT" || d == "OUTPUT") {
      const Token& name = cur.next("parameter name");
      if (name.quoted || !is_identifier(name.text)) throw SyntaxError(n, name.column, "parameter name");
      Parameter param{name.text, detail::name_token(kb, cur.next("parameter type"), n)};
      (d == "INPUT" ? prof.inputs : prof.outputs).push_back(std::move(param));
    } else if (d == "PRECONDITION") {
      prof.preconditions.push_back(detail::pattern_tokens(kb, cur.rest(), n));
    } else if (d == "EFFECT") {
      const Token& mode = cur.next("ADD or REMOVE");
      if (mode.text != "ADD" && mode.text != "REMOVE") throw SyntaxError(n, mode.column, "ADD or REMOVE");
      (mode.text == "ADD" ? prof.effects_add : prof.effects_remove).push_back(detail::pattern_tokens(kb, cur.rest(), n));
    } else if (d == "CONTEXT") {
      while (!cur.done()) prof.properties.context.push_back(detail::name_token(kb, cur.next("context"), n));
    } else if (d == "CAPABILITY") {
      prof.properties.capability_ref = detail::name_token(kb, cur.next("capability"), n);
    } else if (d == "QOS") {
      while (!cur.done()) {
        const Token& t = cur.next("key=value");
        const auto eq = t.text.find('=');
        const std::string key = t.text.substr(0, eq);
        const std::string value = eq == std::string::npos ? "" : t.text.substr(eq + 1);
        if (eq == std::string::npos || !(detail::looks_integer(value) || detail::looks_decimal(value)))
          throw SyntaxError(n, t.column, "reputation=, cost= or response_time=<decimal>");
        if (key == "reputation") prof.properties.qos.reputation = parse_decimal(value);
        else if (key == "cost") prof.properties.qos.cost = parse_decimal(value);
        else if (key == "response_time") prof.properties.qos.response_time = parse_decimal(value);
        else throw SyntaxError(n, t.column, "reputation, cost or response_time");
      }
    } else if (d == "PARALLELISM") {
      prof.degree_of_parallelism = cur.integer("integer");
    } else if (d == "LIMIT") {
      const Token& k = cur.next("limitation kind");
      if (k.text == "WINDOW") {
        const auto start = cur.integer("window start");
        prof.limitations.push_back(Limitation::window(start, cur.integer("window end")));
      } else if (k.text == "DISTANCE") {
        const Rational meters = cur.decimal("meters");
        prof.limitations.push_back(Limitation::distance(meters, detail::name_token(kb, cur.next("anchor"), n)));
      } else if (k.text == "LOCATION") {
        prof.limitations.push_back(Limitation::location(detail::name_token(kb, cur.next("location"), n)));
      } else if (k.text == "CONDITION") {
        prof.limitations.push_back(Limitation::when(detail::pattern_tokens(kb, cur.rest(), n)));
      } else {
        throw SyntaxError(n, k.column, "WINDOW, DISTANCE, LOCATION or CONDITION");
      }
    } else {
      throw SyntaxError(n, head.column, "profile directive");
    }
    cur.finish();
  }
  if (prof.service_id.local.empty()) throw SyntaxError(1, 1, "SERVICE");
  if (!have_type) throw SyntaxError(1, 1, "TYPE");
  return doc;
}

std::string format_profile(const ServiceProfile& prof, const std::optional<Iri>& provider) {
  std::string out = "SERVICE " + prof.service_id.short_form() + "\n";
  if (provider) out += "PROVIDER " + provider->short_form() + "\n";
  if (prof.service_type.composite) {
    out += "TYPE composite";
    for (const auto& part : prof.service_type.parts) out += " " + part.short_form();
    if (prof.service_type.adaptation) out += " ADAPTATION";
    out += "\n";
  } else {
    out += std::string("TYPE ") + to_string(prof.service_type.kind) + "\n";
  }
  for (const auto& in : prof.inputs) out += "INPUT " + in.name + " " + in.type.short_form() + "\n";
  for (const auto& o : prof.outputs) out += "OUTPUT " + o.name + " " + o.type.short_form() + "\n";
  for (const auto& pre : prof.preconditions) out += "PRECONDITION " + to_string(pre) + "\n";
  for (const auto& e : prof.effects_add) out += "EFFECT ADD " + to_string(e) + "\n";
  for (const auto& e : prof.effects_remove) out += "EFFECT REMOVE " + to_string(e) + "\n";
  if (!prof.properties.context.empty()) {
    out += "CONTEXT";
    for (const auto& c : prof.properties.context) out += " " + c.short_form();
    out += "\n";
  }
  if (!prof.properties.capability_ref.local.empty()) out += "CAPABILITY " + prof.properties.capability_ref.short_form() + "\n";
  const auto& q = prof.properties.qos;
  out += "QOS reputation=" + to_decimal_string(q.reputation) + " cost=" + to_decimal_string(q.cost) +
         " response_time=" + to_decimal_string(q.response_time) + "\n";
  out += "PARALLELISM " + std::to_string(prof.degree_of_parallelism) + "\n";
  for (const auto& l : prof.limitations) {
    switch (l.kind) {
      case Limitation::Kind::time_window:
        out += "LIMIT WINDOW " + std::to_string(l.start) + " " + std::to_string(l.end) + "\n";
        break;
      case Limitation::Kind::max_distance:
        out += "LIMIT DISTANCE " + to_decimal_string(l.meters) + " " + l.place.short_form() + "\n";
        break;
      case Limitation::Kind::location:
        out += "LIMIT LOCATION " + l.place.short_form() + "\n";
        break;
      case Limitation::Kind::condition:
        out += "LIMIT CONDITION " + to_string(l.condition) + "\n";
        break;
    }
  }
  return out;
}

HumanCapabilityDocument parse_human_capability(const KnowledgeBase& kb, std::string_view text, const FileLoader& load) {
  HumanCapabilityDocument doc;
  HumanCapability& c = doc.capability;
  for (const auto& line : detail::tokenize(text)) {
    LineCursor cur(line);
    const std::size_t n = line.number;
    const Token& head = cur.next("directive");
    const std::string& d = head.text;
    auto scaled = [&]() {
      const Iri term = detail::name_token(kb, cur.next("term"), n);
      return ScaledTerm{term, static_cast<int>(cur.integer("scale"))};
    };
    if (d == "SKILL") {
      c.skills.push_back(scaled());
    } else if (d == "ABILITY") {
      c.abilities.push_back(scaled());
    } else if (d == "PERFORMANCE") {
      c.performance_factors.push_back(scaled());
    } else if (d == "KNOWLEDGE") {
      do c.knowledge.push_back(detail::name_token(kb, cur.next("knowledge"), n));
      while (!cur.done());
    } else if (d == "PREFERENCE") {
      const Token& dim = cur.next("dimension");
      const Token& value = cur.next("value");
      c.preferences.push_back({dim.text, value.quoted ? detail::unquote(value, n) : value.text});
    } else if (d == "EDUCATION") {
      c.education = detail::name_token(kb, cur.next("education level"), n);
    } else if (d == "CONTEXT") {
      do doc.context.push_back(detail::name_token(kb, cur.next("context"), n));
      while (!cur.done());
    } else if (d == "EXPERIENCE") {
      ExperienceRecord r;
      r.service = detail::name_token(kb, cur.next("service"), n);
      r.requester = detail::name_token(kb, cur.next("requester"), n);
      r.rating = cur.decimal("rating");
      r.timestamp = cur.integer("time");
      c.experience.push_back(std::move(r));
    } else if (d == "POTENTIAL") {
      const Token& ref = cur.next("profile reference");
      if (!load) throw Error(Errc::io, "no loader for potential profile " + ref.text);
      PotentialService pot;
      pot.template_profile = parse_profile(kb, load(ref.quoted ? detail::unquote(ref, n) : ref.text)).profile;
      while (!cur.done()) {
        const Token& kw = cur.next("SKILL, KNOWLEDGE or EXPERIENCE");
        if (kw.text == "SKILL") {
          pot.unlock_rule.required_skill = scaled();
        } else if (kw.text == "KNOWLEDGE") {
          while (!cur.done() && cur.peek()->text != "SKILL" && cur.peek()->text != "EXPERIENCE")
            pot.unlock_rule.required_knowledge.push_back(detail::name_token(kb, cur.next("knowledge"), n));
        } else if (kw.text == "EXPERIENCE") {
          pot.unlock_rule.min_experience_count = cur.integer("experience count");
        } else {
          throw SyntaxError(n, kw.column, "SKILL, KNOWLEDGE or EXPERIENCE");
        }
      }
      c.potential.push_back(std::move(pot));
    } else {
      throw SyntaxError(n, head.column, "capability directive");
    }
    cur.finish();
  }
  return doc;
}

MachineCapabilityDocument parse_machine_capability(const KnowledgeBase& kb, std::string_view text) {
  MachineCapabilityDocument doc;
  MachineCapability& c = doc.capability;
  for (const auto& line : detail::tokenize(text)) {
    LineCursor cur(line);
    const std::size_t n = line.number;
    const Token& head = cur.next("directive");
    const std::string& d = head.text;
    std::vector<Iri>* target = nullptr;
    if (d == "HARDWARE") target = &c.hardware;
    else if (d == "SOFTWARE") target = &c.software;
    else if (d == "PROGRAMMED_SKILL") target = &c.programmed_skills;
    else if (d == "LEARNED") target = &c.learned_knowledge;
    else if (d == "CONTEXT") target = &doc.context;
    else throw SyntaxError(n, head.column, "machine capability directive");
    do target->push_back(detail::name_token(kb, cur.next("term"), n));
    while (!cur.done());
  }
  return doc;
}

}  // namespace hcps
