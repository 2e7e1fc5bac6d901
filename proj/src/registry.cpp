#include "hcps/registry.hpp"

#include <algorithm>

#include "hcps/error.hpp"

namespace hcps {

namespace {

Iri p(const char* local) { return iri(local); }

Iri part(const Iri& svc, const std::string& suffix) { return Iri{svc.prefix, svc.local + "_" + suffix}; }

std::string two_digits(std::size_t n) {
  std::string s = std::to_string(n);
  return s.size() < 2 ? "0" + s : s;
}

Literal decimal_literal(const Rational& r) {
  const std::string text = to_decimal_string(r);
  return Literal::decimal(text.find('.') == std::string::npos ? text + ".0" : text);
}

std::optional<Literal> literal_of(const KnowledgeBase& kb, const Iri& s, const Iri& pred) {
  const auto t = kb.first_object(s, pred);
  if (!t || !std::holds_alternative<Literal>(*t)) return std::nullopt;
  return std::get<Literal>(*t);
}

std::optional<std::string> string_value(const KnowledgeBase& kb, const Iri& s, const char* pred) {
  const auto lit = literal_of(kb, s, p(pred));
  if (!lit) return std::nullopt;
  return lit->lexical;
}

std::optional<Rational> number_value(const KnowledgeBase& kb, const Iri& s, const char* pred) {
  const auto lit = literal_of(kb, s, p(pred));
  if (!lit || lit->kind == Literal::Kind::string) return std::nullopt;
  return parse_decimal(lit->lexical);
}

std::vector<Iri> iri_objects(const KnowledgeBase& kb, const Iri& s, const char* pred) {
  std::vector<Iri> out;
  for (const auto& t : kb.objects(s, p(pred)))
    if (const Iri* i = as_iri(t)) out.push_back(*i);
  return out;
}

std::optional<Iri> iri_object(const KnowledgeBase& kb, const Iri& s, const char* pred) {
  auto all = iri_objects(kb, s, pred);
  if (all.empty()) return std::nullopt;
  return all.front();
}

const char* limitation_kind(Limitation::Kind k) {
  switch (k) {
    case Limitation::Kind::time_window: return "window";
    case Limitation::Kind::max_distance: return "distance";
    case Limitation::Kind::location: return "location";
    case Limitation::Kind::condition: return "condition";
  }
  return "condition";
}

void check_pattern_terms(const KnowledgeBase& kb, const Pattern& pt, const std::string& id) {
  if (const Iri* pred = std::get_if<Iri>(&pt.predicate); pred && *pred != rdf_type() && !kb.has_property(*pred))
    throw Error(Errc::invalid_profile, id + ": undeclared predicate " + pred->short_form() + " in " + to_string(pt));
}

std::int64_t to_int(const Rational& r) { return r.numerator() / r.denominator(); }

}  // namespace

const char* to_string(ServiceStatus status) {
  switch (status) {
    case ServiceStatus::available: return "available";
    case ServiceStatus::at_capacity: return "at_capacity";
    case ServiceStatus::withdrawn: return "withdrawn";
  }
  return "available";
}

// ---------------------------------------------------------------------------
// Graph encoding

void write_profile(KnowledgeBase& kb, const Iri& provider, const ServiceProfile& prof) {
  const Iri& svc = prof.service_id;
  const Iri profile = part(svc, "profile");
  const Iri type = part(svc, "type");
  const Iri property = part(svc, "prop");
  const Iri qos = part(svc, "qos");
  const Iri grounding = part(svc, "grounding");
  const Iri process = part(svc, "process");
  const Iri cap = prof.properties.capability_ref.local.empty() ? capability_of(provider) : prof.properties.capability_ref;

  kb.insert(svc, rdf_type(), p("Service"));
  if (is_machine(kb, provider)) kb.insert(svc, rdf_type(), p("MachineService"));
  kb.insert(svc, p("providedBy"), provider);
  kb.insert(provider, p("provides"), svc);
  kb.insert(provider, rdf_type(), p("ServiceProvider"));
  kb.insert(svc, p("presents"), profile);
  kb.insert(profile, rdf_type(), p("ServiceProfile"));
  kb.insert(svc, p("describedBy"), process);
  kb.insert(process, rdf_type(), p("ProcessModel"));
  kb.insert(svc, p("supports"), grounding);
  kb.insert(grounding, rdf_type(), p("ServiceGrounding"));
  kb.insert(grounding, p("groundingMailbox"), Literal::string("mailbox:" + svc.short_form()));
  kb.insert(svc, p("hasStatus"), Literal::string("available"));

  kb.insert(profile, p("hasServiceType"), type);
  if (prof.service_type.composite) {
    kb.insert(type, rdf_type(), p(prof.service_type.adaptation ? "AdaptationService" : "CompositeService"));
    for (const auto& part_svc : prof.service_type.parts) kb.insert(type, p("composedOf"), part_svc);
  } else {
    kb.insert(type, rdf_type(), p("AtomicService"));
    kb.insert(type, rdf_type(), kind_class(prof.service_type.kind));
  }
  kb.insert(profile, p("hasDegreeOfParallelism"), Literal::integer(prof.degree_of_parallelism));

  auto write_params = [&](const std::vector<Parameter>& params, const char* tag, const char* link, const char* cls) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const Iri node = part(svc, tag + two_digits(i + 1));
      kb.insert(profile, p(link), node);
      kb.insert(node, rdf_type(), p(cls));
      kb.insert(node, p("parameterName"), Literal::string(params[i].name));
      kb.insert(node, p("parameterType"), Literal::string(params[i].type.short_form()));
    }
  };
  write_params(prof.inputs, "in", "hasInput", "Input");
  write_params(prof.outputs, "out", "hasOutput", "Output");

  for (std::size_t i = 0; i < prof.preconditions.size(); ++i) {
    const Iri node = part(svc, "pre" + two_digits(i + 1));
    kb.insert(profile, p("hasPrecondition"), node);
    kb.insert(node, rdf_type(), p("Precondition"));
    kb.insert(node, p("patternText"), Literal::string(to_string(prof.preconditions[i])));
  }
  std::size_t effect_no = 0;
  for (const auto* group : {&prof.effects_add, &prof.effects_remove}) {
    const char* mode = group == &prof.effects_add ? "ADD" : "REMOVE";
    for (const auto& e : *group) {
      const Iri node = part(svc, "eff" + two_digits(++effect_no));
      kb.insert(profile, p("hasEffect"), node);
      kb.insert(node, rdf_type(), p("Effect"));
      kb.insert(node, p("effectMode"), Literal::string(mode));
      kb.insert(node, p("patternText"), Literal::string(to_string(e)));
    }
  }

  kb.insert(profile, p("hasProperty"), property);
  kb.insert(property, rdf_type(), p("Property"));
  kb.insert(property, p("includeCapability"), cap);
  for (const auto& c : prof.properties.context) {
    kb.insert(property, p("includeContext"), c);
    kb.insert(c, rdf_type(), p("Context"));
  }
  kb.insert(property, p("includeQoS"), qos);
  kb.insert(qos, rdf_type(), p("QoS"));
  kb.insert(qos, p("hasReputation"), decimal_literal(prof.properties.qos.reputation));
  kb.insert(qos, p("hasCost"), decimal_literal(prof.properties.qos.cost));
  kb.insert(qos, p("hasResponseTime"), decimal_literal(prof.properties.qos.response_time));

  for (std::size_t i = 0; i < prof.limitations.size(); ++i) {
    const Limitation& l = prof.limitations[i];
    const Iri node = part(svc, "lim" + two_digits(i + 1));
    kb.insert(profile, p("hasLimitation"), node);
    kb.insert(node, rdf_type(), p("Limitation"));
    kb.insert(node, p("limitationKind"), Literal::string(limitation_kind(l.kind)));
    switch (l.kind) {
      case Limitation::Kind::time_window:
        kb.insert(node, p("windowStart"), Literal::integer(l.start));
        kb.insert(node, p("windowEnd"), Literal::integer(l.end));
        break;
      case Limitation::Kind::max_distance:
        kb.insert(node, p("maxDistance"), decimal_literal(l.meters));
        kb.insert(node, p("limitsContext"), l.place);
        kb.insert(l.place, rdf_type(), p("Context"));
        break;
      case Limitation::Kind::location:
        kb.insert(node, p("limitsContext"), l.place);
        kb.insert(l.place, rdf_type(), p("Context"));
        break;
      case Limitation::Kind::condition:
        kb.insert(node, p("patternText"), Literal::string(to_string(l.condition)));
        break;
    }
  }
}

ServiceProfile read_profile(const KnowledgeBase& kb, const Iri& svc) {
  const auto profile_node = iri_object(kb, svc, "presents");
  if (!profile_node) throw Error(Errc::unknown_service, svc.short_form());
  const Iri& profile = *profile_node;
  ServiceProfile prof;
  prof.service_id = svc;

  if (const auto type = iri_object(kb, profile, "hasServiceType")) {
    if (kb.has_type(*type, p("CompositeService")) || kb.has_type(*type, p("AdaptationService"))) {
      prof.service_type.composite = true;
      prof.service_type.adaptation = kb.has_type(*type, p("AdaptationService"));
      prof.service_type.parts = iri_objects(kb, *type, "composedOf");
    } else {
      for (auto k : {ServiceKind::sensing, ServiceKind::actuating, ServiceKind::communicating, ServiceKind::processing})
        if (kb.has_type(*type, kind_class(k))) prof.service_type.kind = k;
    }
  }
  if (const auto dop = number_value(kb, profile, "hasDegreeOfParallelism")) prof.degree_of_parallelism = to_int(*dop);

  auto read_params = [&](const char* link) {
    std::vector<Parameter> out;
    for (const auto& node : iri_objects(kb, profile, link)) {
      Parameter param;
      param.name = string_value(kb, node, "parameterName").value_or(node.local);
      param.type = kb.resolve(string_value(kb, node, "parameterType").value_or("Thing"));
      out.push_back(std::move(param));
    }
    return out;
  };
  prof.inputs = read_params("hasInput");
  prof.outputs = read_params("hasOutput");

  for (const auto& node : iri_objects(kb, profile, "hasPrecondition"))
    if (auto text = string_value(kb, node, "patternText")) prof.preconditions.push_back(parse_pattern(kb, *text));
  for (const auto& node : iri_objects(kb, profile, "hasEffect")) {
    const auto text = string_value(kb, node, "patternText");
    if (!text) continue;
    auto& target = string_value(kb, node, "effectMode") == std::optional<std::string>("REMOVE") ? prof.effects_remove
                                                                                                 : prof.effects_add;
    target.push_back(parse_pattern(kb, *text));
  }

  if (const auto property = iri_object(kb, profile, "hasProperty")) {
    prof.properties.context = iri_objects(kb, *property, "includeContext");
    const auto cap = iri_object(kb, *property, "includeCapability");
    const auto provider = iri_object(kb, svc, "providedBy");
    if (cap && (!provider || *cap != capability_of(*provider))) prof.properties.capability_ref = *cap;
    if (const auto qos = iri_object(kb, *property, "includeQoS")) {
      prof.properties.qos.reputation = number_value(kb, *qos, "hasReputation").value_or(Rational(0));
      prof.properties.qos.cost = number_value(kb, *qos, "hasCost").value_or(Rational(0));
      prof.properties.qos.response_time = number_value(kb, *qos, "hasResponseTime").value_or(Rational(0));
    }
  }

  for (const auto& node : iri_objects(kb, profile, "hasLimitation")) {
    const std::string kind = string_value(kb, node, "limitationKind").value_or("");
    const auto place = iri_object(kb, node, "limitsContext");
    if (kind == "window") {
      prof.limitations.push_back(Limitation::window(to_int(number_value(kb, node, "windowStart").value_or(0)),
                                                    to_int(number_value(kb, node, "windowEnd").value_or(0))));
    } else if (kind == "distance" && place) {
      prof.limitations.push_back(Limitation::distance(number_value(kb, node, "maxDistance").value_or(0), *place));
    } else if (kind == "location" && place) {
      prof.limitations.push_back(Limitation::location(*place));
    } else if (kind == "condition") {
      if (auto text = string_value(kb, node, "patternText"))
        prof.limitations.push_back(Limitation::when(parse_pattern(kb, *text)));
    }
  }
  return prof;
}

std::vector<Iri> published_services(const KnowledgeBase& kb) {
  std::set<Iri> out;
  for (const auto& b : kb.match(Pattern{Variable{"s"}, p("presents"), Variable{"o"}}))
    if (const Iri* s = as_iri(b.at("s"))) out.insert(*s);
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Registry

Registry::Registry(KnowledgeBase kb) : kb_(std::move(kb)) {
  for (const auto& svc : published_services(kb_)) {
    ServiceRecord rec;
    rec.profile = read_profile(kb_, svc);
    if (auto provider = iri_object(kb_, svc, "providedBy")) rec.provider = *provider;
    if (string_value(kb_, svc, "hasStatus") == std::optional<std::string>("withdrawn"))
      rec.status = ServiceStatus::withdrawn;
    records_.emplace(svc, std::move(rec));
  }
}

Iri Registry::publish_service(const Iri& provider, const ServiceProfile& profile) {
  if (!is_registered(kb_, provider)) throw Error(Errc::unknown_provider, provider.short_form());
  const std::string id = profile.service_id.short_form();
  if (auto problem = profile_problem(profile); !problem.empty()) throw Error(Errc::invalid_profile, problem);
  if (records_.count(profile.service_id) || !kb_.describe(profile.service_id).empty())
    throw Error(Errc::invalid_profile, id + ": service id already in use");
  for (const auto& part_svc : profile.service_type.parts)
    if (!kb_.has_type(part_svc, p("Service")))
      throw Error(Errc::invalid_profile, id + ": part " + part_svc.short_form() + " is not a service");
  if (const Iri& cap = profile.properties.capability_ref; !cap.local.empty())
    if (!kb_.has_type(cap, p("HumanCapability")) && !kb_.has_type(cap, p("MachineCapability")))
      throw Error(Errc::invalid_profile, id + ": " + cap.short_form() + " is not a capability");
  for (const auto* group : {&profile.preconditions, &profile.effects_add, &profile.effects_remove})
    for (const auto& pt : *group) check_pattern_terms(kb_, pt, id);
  for (const auto& l : profile.limitations)
    if (l.kind == Limitation::Kind::condition) check_pattern_terms(kb_, l.condition, id);

  write_profile(kb_, provider, profile);
  std::lock_guard lock(counters_);
  records_[profile.service_id] = ServiceRecord{profile, provider, ServiceStatus::available, 0};
  return profile.service_id;
}

void Registry::set_status(const Iri& service, ServiceStatus status) {
  for (const auto& old : kb_.objects(service, p("hasStatus"))) kb_.erase({service, p("hasStatus"), old});
  kb_.insert(service, p("hasStatus"), Literal::string(to_string(status)));
}

void Registry::withdraw(const Iri& service) {
  std::lock_guard lock(counters_);
  auto it = records_.find(service);
  if (it == records_.end()) throw Error(Errc::unknown_service, service.short_form());
  it->second.status = ServiceStatus::withdrawn;
  set_status(service, ServiceStatus::withdrawn);
}

ServiceRecord Registry::record(const Iri& service) const {
  std::lock_guard lock(counters_);
  auto it = records_.find(service);
  if (it == records_.end()) throw Error(Errc::unknown_service, service.short_form());
  return it->second;
}

std::vector<Iri> Registry::services() const {
  std::lock_guard lock(counters_);
  std::vector<Iri> out;
  for (const auto& [svc, rec] : records_) out.push_back(svc);
  return out;
}

bool Registry::try_acquire(const Iri& service) {
  std::lock_guard lock(counters_);
  auto it = records_.find(service);
  if (it == records_.end()) throw Error(Errc::unknown_service, service.short_form());
  ServiceRecord& rec = it->second;
  if (rec.status == ServiceStatus::withdrawn || rec.active_invocations >= rec.profile.degree_of_parallelism) return false;
  if (++rec.active_invocations == rec.profile.degree_of_parallelism) rec.status = ServiceStatus::at_capacity;
  return true;
}

void Registry::release(const Iri& service) {
  std::lock_guard lock(counters_);
  auto it = records_.find(service);
  if (it == records_.end()) throw Error(Errc::unknown_service, service.short_form());
  ServiceRecord& rec = it->second;
  if (rec.active_invocations == 0) throw Error(Errc::invalid_state, service.short_form() + " has no active invocation");
  --rec.active_invocations;
  if (rec.status == ServiceStatus::at_capacity) rec.status = ServiceStatus::available;
}

void Registry::note_completed(const Iri& service, const Iri& consumer) {
  std::lock_guard lock(counters_);
  ++completed_[{service, consumer}];
}

std::int64_t Registry::completed_count(const Iri& service, const Iri& consumer) const {
  std::lock_guard lock(counters_);
  auto it = completed_.find({service, consumer});
  return it == completed_.end() ? 0 : it->second;
}

std::vector<Rational> Registry::ratings(const Iri& service) const {
  const auto provider = iri_object(kb_, service, "providedBy");
  if (!provider) throw Error(Errc::unknown_service, service.short_form());
  std::vector<Rational> out;
  for (const auto& e : experience_of(kb_, *provider))
    if (e.service == service) out.push_back(e.rating);
  return out;
}

Rational Registry::reputation(const Iri& service) const {
  const auto rec = record(service);
  const auto qos = iri_object(kb_, part(service, "prop"), "includeQoS");
  if (qos)
    if (auto v = number_value(kb_, *qos, "hasReputation")) return *v;
  return rec.profile.properties.qos.reputation;
}

Rational Registry::record_experience(const Iri& service, const Iri& requester, const Rational& rating,
                                     const std::map<std::string, Rational>& criteria, std::int64_t timestamp) {
  const auto rec = record(service);
  if (completed_count(service, requester) == 0)
    throw Error(Errc::no_completed_invocation,
                requester.short_form() + " has no completed invocation of " + service.short_form());
  if (rating < 0 || rating > 5) throw Error(Errc::rating_out_of_range, to_decimal_string(rating));
  add_experience(kb_, rec.provider, ExperienceRecord{service, requester, rating, criteria, timestamp});

  const auto all = ratings(service);
  Rational sum(0);
  for (const auto& r : all) sum += r;
  const Rational rep = round_half_up(sum / static_cast<std::int64_t>(all.size()), 2);
  const Iri qos = part(service, "qos");
  for (const auto& old : kb_.objects(qos, p("hasReputation"))) kb_.erase({qos, p("hasReputation"), old});
  kb_.insert(qos, p("hasReputation"), decimal_literal(rep));
  std::lock_guard lock(counters_);
  records_[service].profile.properties.qos.reputation = rep;
  return rep;
}

std::vector<Iri> Registry::unlock_potential(const Iri& human) {
  if (!is_registered(kb_, human) || is_machine(kb_, human)) throw Error(Errc::unknown_individual, human.short_form());
  const Iri cap = capability_of(human);
  const auto experience_count = static_cast<std::int64_t>(experience_of(kb_, human).size());
  std::vector<Iri> published;
  for (const auto& node : iri_objects(kb_, cap, "hasPotential")) {
    if (const auto skill = iri_object(kb_, node, "requiresSkill")) {
      const auto need = number_value(kb_, node, "requiredSkillLevel").value_or(1);
      const auto have = skill_level(kb_, human, *skill);
      if (!have || Rational(*have) < need) continue;
    }
    bool knows = true;
    for (const auto& k : iri_objects(kb_, node, "requiresKnowledge")) knows = knows && has_knowledge(kb_, human, k);
    if (!knows) continue;
    if (Rational(experience_count) < number_value(kb_, node, "minExperienceCount").value_or(0)) continue;
    const auto text = string_value(kb_, node, "templateProfile");
    if (!text) continue;
    const ServiceProfile profile = parse_profile(kb_, *text).profile;
    publish_service(human, profile);
    for (const auto& st : kb_.describe(node)) kb_.erase(st);
    kb_.erase({cap, p("hasPotential"), node});
    published.push_back(profile.service_id);
  }
  return published;
}

}  // namespace hcps
