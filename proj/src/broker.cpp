#include "hcps/broker.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "hcps/error.hpp"

namespace hcps {

namespace {

Iri p(const char* local) { return iri(local); }

std::string qname(const char* local) { return std::string(kDefaultPrefix) + ":" + local; }

std::optional<Rational> number_of(const KnowledgeBase& kb, const Iri& s, const char* pred) {
  const auto t = kb.first_object(s, p(pred));
  if (!t) return std::nullopt;
  const auto* lit = std::get_if<Literal>(&*t);
  if (!lit || lit->kind == Literal::Kind::string) return std::nullopt;
  return parse_decimal(lit->lexical);
}

bool within_distance(const KnowledgeBase& kb, const Iri& anchor, const Rational& meters, const Iri& consumer) {
  const auto ax = number_of(kb, anchor, "coordX");
  const auto ay = number_of(kb, anchor, "coordY");
  for (const auto& c : context_of(kb, consumer)) {
    if (c == anchor) return true;
    const auto cx = number_of(kb, c, "coordX");
    const auto cy = number_of(kb, c, "coordY");
    if (!ax || !ay || !cx || !cy) continue;
    const Rational dx = *cx - *ax;
    const Rational dy = *cy - *ay;
    if (dx * dx + dy * dy <= meters * meters) return true;
  }
  return false;
}

bool mentions(const Pattern& pt, const std::string& var) {
  const auto vars = variables_of(pt);
  return std::find(vars.begin(), vars.end(), var) != vars.end();
}

std::optional<Binding> solve(const KnowledgeBase& kb, const std::vector<Pattern>& patterns, std::size_t index,
                             const Binding& binding) {
  if (index == patterns.size()) return binding;
  for (const auto& m : kb.match(substitute(patterns[index], binding))) {
    Binding next = binding;
    next.insert(m.begin(), m.end());
    if (auto done = solve(kb, patterns, index + 1, next)) return done;
  }
  return std::nullopt;
}

std::optional<Statement> ground(const Pattern& pt, const Binding& binding) {
  const Pattern s = substitute(pt, binding);
  const Iri* subject = std::get_if<Iri>(&s.subject);
  const Iri* predicate = std::get_if<Iri>(&s.predicate);
  if (!subject || !predicate) return std::nullopt;
  if (const Iri* o = std::get_if<Iri>(&s.object)) return Statement{*subject, *predicate, *o};
  if (const Literal* o = std::get_if<Literal>(&s.object)) return Statement{*subject, *predicate, *o};
  return std::nullopt;
}

Binding situation(const ServiceRecord& rec, const std::optional<Iri>& consumer) {
  Binding b{{"service", rec.profile.service_id}, {"provider", rec.provider}};
  if (consumer) b["consumer"] = *consumer;
  return b;
}

std::vector<Iri> types_of(const std::vector<Parameter>& params) {
  std::vector<Iri> out;
  for (const auto& param : params) out.push_back(param.type);
  return out;
}

bool covers(const std::set<Iri>& have, const std::vector<Iri>& need) {
  return std::all_of(need.begin(), need.end(), [&](const Iri& t) { return have.count(t) != 0; });
}

// --- request text -----------------------------------------------------------

struct Word {
  std::string text;
  std::size_t column;
};

std::vector<Word> split_words(std::string_view text) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    Word w{{}, i + 1};
    bool quoted = false;
    for (; i < text.size() && (quoted || !std::isspace(static_cast<unsigned char>(text[i]))); ++i) {
      if (text[i] == '"') {
        quoted = !quoted;
        continue;
      }
      w.text += text[i];
    }
    if (quoted) throw SyntaxError(1, w.column, "closing quote");
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    out.push_back(value.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string join(const std::vector<Iri>& items) {
  std::string out;
  for (const auto& i : items) out += (out.empty() ? "" : ",") + i.short_form();
  return out;
}

}  // namespace

const char* to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::any: return "any";
    case ProviderKind::human: return "human";
    case ProviderKind::machine: return "machine";
  }
  return "any";
}

const char* to_string(InvocationState state) {
  switch (state) {
    case InvocationState::pending: return "pending";
    case InvocationState::running: return "running";
    case InvocationState::completed: return "completed";
    case InvocationState::failed: return "failed";
    case InvocationState::rejected: return "rejected";
  }
  return "pending";
}

bool DiscoveryRequest::has_criteria() const {
  return !required_skills.empty() || !required_knowledge.empty() || !required_abilities.empty() || service_kind ||
         !context.empty() || !context_patterns.empty() || io_signature || !qos.empty();
}

DiscoveryRequest parse_request(const KnowledgeBase& kb, std::string_view text) {
  DiscoveryRequest r;
  auto words = split_words(text);
  std::size_t i = 0;
  if (!words.empty() && words[0].text == "DISCOVER") ++i;
  for (; i < words.size(); ++i) {
    const Word& w = words[i];
    const auto eq = w.text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == w.text.size()) throw SyntaxError(1, w.column, "key=value");
    const std::string key = w.text.substr(0, eq);
    const std::string value = w.text.substr(eq + 1);
    auto resolve = [&](const std::string& name) {
      if (name.empty()) throw SyntaxError(1, w.column, "name");
      return kb.resolve(name);
    };
    auto scaled = [&](bool scale_required) {
      const auto colon = value.rfind(':');
      if (colon != std::string::npos && all_digits(value.substr(colon + 1)))
        return ScaledRequirement{resolve(value.substr(0, colon)), std::stoi(value.substr(colon + 1))};
      if (scale_required) throw SyntaxError(1, w.column, "<iri>:<min>");
      return ScaledRequirement{resolve(value), std::nullopt};
    };
    auto decimal = [&]() {
      try {
        return parse_decimal(value);
      } catch (const Error&) {
        throw SyntaxError(1, w.column, "decimal");
      }
    };
    if (key == "skill") {
      r.required_skills.push_back(scaled(false));
    } else if (key == "ability") {
      r.required_abilities.push_back(scaled(true));
    } else if (key == "knowledge") {
      for (const auto& k : split_list(value)) r.required_knowledge.push_back(resolve(k));
    } else if (key == "context") {
      for (const auto& c : split_list(value)) r.context.push_back(resolve(c));
    } else if (key == "where") {
      r.context_patterns.push_back(parse_pattern(kb, value));
    } else if (key == "kind") {
      r.service_kind = parse_service_kind(value);
      if (!r.service_kind) throw SyntaxError(1, w.column, "sensing, actuating, communicating or processing");
    } else if (key == "inputs" || key == "outputs") {
      if (!r.io_signature) r.io_signature = IoSignature{};
      auto& target = key == "inputs" ? r.io_signature->inputs : r.io_signature->outputs;
      for (const auto& t : split_list(value)) target.push_back(resolve(t));
    } else if (key == "qos.max_cost") {
      r.qos.max_cost = decimal();
    } else if (key == "qos.max_response_time") {
      r.qos.max_response_time = decimal();
    } else if (key == "qos.min_reputation") {
      r.qos.min_reputation = decimal();
    } else if (key == "provider") {
      if (value == "any") r.provider_kind = ProviderKind::any;
      else if (value == "human") r.provider_kind = ProviderKind::human;
      else if (value == "machine") r.provider_kind = ProviderKind::machine;
      else throw SyntaxError(1, w.column, "any, human or machine");
    } else if (key == "consumer") {
      r.consumer = resolve(value);
    } else if (key == "at") {
      if (!all_digits(value)) throw SyntaxError(1, w.column, "logical time");
      r.now = std::stoll(value);
    } else {
      throw SyntaxError(1, w.column, "discovery criterion");
    }
  }
  return r;
}

std::string format_request(const DiscoveryRequest& r) {
  std::string out = "DISCOVER";
  for (const auto& s : r.required_skills)
    out += " skill=" + s.term.short_form() + (s.min_scale ? ":" + std::to_string(*s.min_scale) : "");
  if (!r.required_knowledge.empty()) out += " knowledge=" + join(r.required_knowledge);
  for (const auto& a : r.required_abilities)
    out += " ability=" + a.term.short_form() + ":" + std::to_string(a.min_scale.value_or(1));
  if (r.service_kind) out += std::string(" kind=") + to_string(*r.service_kind);
  if (!r.context.empty()) out += " context=" + join(r.context);
  for (const auto& pt : r.context_patterns) out += " where=\"" + to_string(pt) + "\"";
  if (r.io_signature) {
    if (!r.io_signature->inputs.empty()) out += " inputs=" + join(r.io_signature->inputs);
    if (!r.io_signature->outputs.empty()) out += " outputs=" + join(r.io_signature->outputs);
  }
  if (r.qos.max_cost) out += " qos.max_cost=" + to_decimal_string(*r.qos.max_cost);
  if (r.qos.max_response_time) out += " qos.max_response_time=" + to_decimal_string(*r.qos.max_response_time);
  if (r.qos.min_reputation) out += " qos.min_reputation=" + to_decimal_string(*r.qos.min_reputation);
  if (r.provider_kind != ProviderKind::any) out += std::string(" provider=") + to_string(r.provider_kind);
  if (r.consumer) out += " consumer=" + r.consumer->short_form();
  if (r.now) out += " at=" + std::to_string(*r.now);
  return out;
}

Rational score(const Qos& qos, const BrokerPolicy& policy) {
  const Rational cost = std::min(qos.cost, policy.cost_max);
  const Rational time = std::min(qos.response_time, policy.time_max);
  return policy.w_reputation * (qos.reputation / 5) + policy.w_cost * (1 - cost / policy.cost_max) +
         policy.w_time * (1 - time / policy.time_max);
}

QueryAst compile(const DiscoveryRequest& r, ProviderKind which) {
  if (!r.has_criteria()) throw Error(Errc::empty_criteria, "discovery request has no criteria");
  const bool machine = which == ProviderKind::machine;
  QueryAst q;
  q.projected = {"service"};
  auto add = [&](std::string s, const char* pred, std::string o) {
    q.patterns.push_back(QueryPattern{std::move(s), qname(pred), std::move(o)});
  };
  add("?service", "presents", "?serviceprofile");
  add("?serviceprofile", "hasProperty", "?property");
  if (!r.required_skills.empty() || !r.required_knowledge.empty() || !r.required_abilities.empty())
    add("?property", "includeCapability", "?capability");
  if (!r.context.empty()) add("?property", "includeContext", "?context");

  std::vector<FilterExpr> filters;
  auto one_of = [](const std::string& var, const std::vector<Iri>& values) {
    std::vector<std::string> names;
    for (const auto& v : values) names.push_back(v.str());
    return names.size() == 1 ? FilterExpr::equals(var, names[0]) : FilterExpr::in(var, names);
  };
  if (!r.context.empty()) filters.push_back(one_of("context", r.context));
  for (std::size_t i = 0; i < r.required_skills.size(); ++i) {
    const std::string var = i == 0 ? "skill" : "skill" + std::to_string(i + 1);
    add("?capability", machine ? "hasMachineSkill" : "hasHumanSkill", "?" + var);
    filters.push_back(FilterExpr::equals(var, r.required_skills[i].term.str()));
  }
  if (!r.required_knowledge.empty()) {
    add("?capability", machine ? "hasMachineKnowledge" : "hasHumanKnowledge", "?knowledge");
    filters.push_back(one_of("knowledge", r.required_knowledge));
  }
  if (filters.size() == 1) q.filter = filters[0];
  else if (filters.size() > 1) q.filter = FilterExpr::conj(std::move(filters));
  return q;
}

std::vector<QueryAst> compile(const DiscoveryRequest& r) {
  std::vector<ProviderKind> kinds;
  if (r.provider_kind != ProviderKind::machine) kinds.push_back(ProviderKind::human);
  if (r.provider_kind != ProviderKind::human && r.required_abilities.empty()) kinds.push_back(ProviderKind::machine);
  if (kinds.empty()) kinds.push_back(ProviderKind::machine);
  std::vector<QueryAst> out;
  for (auto k : kinds) {
    QueryAst q = compile(r, k);
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
  }
  return out;
}

std::string limitation_failure(const KnowledgeBase& kb, const ServiceRecord& rec, const std::optional<Iri>& consumer,
                               const std::optional<std::int64_t>& now) {
  for (const auto& l : rec.profile.limitations) {
    switch (l.kind) {
      case Limitation::Kind::time_window:
        if (now && (*now < l.start || *now > l.end))
          return "limitation: time " + std::to_string(*now) + " outside window " + std::to_string(l.start) + ".." +
                 std::to_string(l.end);
        break;
      case Limitation::Kind::location:
        if (consumer) {
          const auto ctx = context_of(kb, *consumer);
          if (std::find(ctx.begin(), ctx.end(), l.place) == ctx.end())
            return "limitation: " + consumer->short_form() + " not at " + l.place.short_form();
        }
        break;
      case Limitation::Kind::max_distance:
        if (consumer && !within_distance(kb, l.place, l.meters, *consumer))
          return "limitation: " + consumer->short_form() + " farther than " + to_decimal_string(l.meters) + " from " +
                 l.place.short_form();
        break;
      case Limitation::Kind::condition:
        if (!consumer && mentions(l.condition, "consumer")) break;
        if (kb.match(substitute(l.condition, situation(rec, consumer))).empty())
          return "limitation: condition " + to_string(l.condition) + " does not hold";
        break;
    }
  }
  return {};
}

Broker::Broker(Registry& registry, BrokerPolicy policy) : registry_(registry), policy_(std::move(policy)) {}

RankedCandidates Broker::discover(const DiscoveryRequest& request) const {
  std::lock_guard lock(mu_);
  return discover_locked(request);
}

RankedCandidates Broker::discover_locked(const DiscoveryRequest& r) const {
  const KnowledgeBase& kb = registry_.kb();
  std::set<Iri> found;
  for (const auto& q : compile(r))
    for (const auto& t : evaluate(kb, q).column("service"))
      if (const Iri* svc = as_iri(t)) found.insert(*svc);

  RankedCandidates out;
  for (const auto& svc : found) {
    if (!registry_.has_service(svc)) continue;
    const ServiceRecord rec = registry_.record(svc);
    if (rec.status != ServiceStatus::available) continue;
    const ServiceProfile& prof = rec.profile;
    const bool machine = is_machine(kb, rec.provider);
    if ((r.provider_kind == ProviderKind::human && machine) || (r.provider_kind == ProviderKind::machine && !machine))
      continue;

    bool ok = true;
    for (const auto& s : r.required_skills) {
      if (!s.min_scale) continue;
      const auto level = skill_level(kb, rec.provider, s.term);
      ok = ok && level && *level >= *s.min_scale;
    }
    for (const auto& a : r.required_abilities) {
      const auto level = ability_level(kb, rec.provider, a.term);
      ok = ok && level && *level >= a.min_scale.value_or(1);
    }
    if (r.service_kind) ok = ok && !prof.service_type.composite && prof.service_type.kind == *r.service_kind;
    if (r.io_signature) {
      const std::set<Iri> offered(r.io_signature->inputs.begin(), r.io_signature->inputs.end());
      const auto produced = types_of(prof.outputs);
      ok = ok && covers(offered, types_of(prof.inputs)) &&
           covers(std::set<Iri>(produced.begin(), produced.end()), r.io_signature->outputs);
    }
    Qos qos = prof.properties.qos;
    qos.reputation = registry_.reputation(svc);
    if (r.qos.max_cost) ok = ok && qos.cost <= *r.qos.max_cost;
    if (r.qos.max_response_time) ok = ok && qos.response_time <= *r.qos.max_response_time;
    if (r.qos.min_reputation) ok = ok && qos.reputation >= *r.qos.min_reputation;
    for (const auto& pt : r.context_patterns)
      ok = ok && !kb.match(substitute(pt, situation(rec, r.consumer))).empty();
    ok = ok && limitation_failure(kb, rec, r.consumer, r.now).empty();
    if (!ok) continue;

    const Iri cap = prof.properties.capability_ref.local.empty() ? capability_of(rec.provider)
                                                                 : prof.properties.capability_ref;
    out.push_back(Candidate{svc, score(qos, policy_), {{"service", svc}, {"provider", rec.provider}, {"capability", cap}}});
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.service < b.service;
  });
  return out;
}

Invocation Broker::invoke(const Iri& service, const Iri& consumer, const std::map<std::string, Term>& inputs,
                          std::int64_t now) {
  std::lock_guard lock(mu_);
  const KnowledgeBase& kb = registry_.kb();
  if (!registry_.has_service(service)) throw Error(Errc::unknown_service, service.short_form());
  const ServiceRecord rec = registry_.record(service);

  std::set<std::string> expected;
  for (const auto& param : rec.profile.inputs) {
    expected.insert(param.name);
    auto it = inputs.find(param.name);
    if (it == inputs.end())
      throw Error(Errc::input_signature_mismatch, service.short_form() + ": missing input " + param.name);
    const Iri* value = as_iri(it->second);
    const bool fits = is_datatype(param.type) ? value == nullptr : value != nullptr && kb.has_type(*value, param.type);
    if (!fits)
      throw Error(Errc::input_signature_mismatch, service.short_form() + ": input " + param.name + " is not a " +
                                                      param.type.short_form());
  }
  for (const auto& [name, value] : inputs)
    if (!expected.count(name))
      throw Error(Errc::input_signature_mismatch, service.short_form() + ": unexpected input " + name);

  Invocation inv;
  inv.id = static_cast<std::int64_t>(log_.size()) + 1;
  inv.service = service;
  inv.consumer = consumer;
  inv.inputs = inputs;
  inv.started_at = now;
  Binding binding = situation(rec, consumer);
  for (const auto& [name, value] : inputs) binding[name] = value;

  auto reject = [&](std::string reason) {
    inv.state = InvocationState::rejected;
    inv.reason = std::move(reason);
    inv.bindings = binding;
    log_.push_back(inv);
    return inv;
  };
  if (rec.status == ServiceStatus::withdrawn) return reject("withdrawn");
  const auto solved = solve(kb, rec.profile.preconditions, 0, binding);
  if (!solved) return reject("precondition: not satisfied");
  if (auto why = limitation_failure(kb, rec, consumer, now); !why.empty()) return reject(why);
  if (!registry_.try_acquire(service)) return reject("at_capacity");
  inv.bindings = *solved;
  inv.state = InvocationState::running;
  log_.push_back(inv);
  return inv;
}

Invocation Broker::complete_invocation(const Invocation& invocation, Outcome outcome,
                                       const std::optional<Rational>& rating, std::int64_t now) {
  std::lock_guard lock(mu_);
  if (invocation.id < 1 || invocation.id > static_cast<std::int64_t>(log_.size()))
    throw Error(Errc::invalid_state, "unknown invocation " + std::to_string(invocation.id));
  Invocation& inv = log_[static_cast<std::size_t>(invocation.id - 1)];
  if (inv.state != InvocationState::running)
    throw Error(Errc::invalid_state, "invocation " + std::to_string(inv.id) + " is " + to_string(inv.state));
  if (rating && (*rating < 0 || *rating > 5)) throw Error(Errc::rating_out_of_range, to_decimal_string(*rating));

  const ServiceRecord rec = registry_.record(inv.service);
  if (outcome == Outcome::success) {
    std::vector<Statement> adds;
    std::vector<Statement> removes;
    bool grounded = true;
    for (const auto& pt : rec.profile.effects_add) {
      auto st = ground(pt, inv.bindings);
      grounded = grounded && st.has_value();
      if (st) adds.push_back(*st);
    }
    for (const auto& pt : rec.profile.effects_remove) {
      auto st = ground(pt, inv.bindings);
      grounded = grounded && st.has_value();
      if (st) removes.push_back(*st);
    }
    if (grounded) {
      KnowledgeBase& kb = registry_.kb();
      for (const auto& st : removes)
        if (kb.erase(st)) inv.retracted_effects.push_back(st);
      for (const auto& st : adds) {
        kb.insert(st);
        inv.applied_effects.push_back(st);
      }
      inv.state = InvocationState::completed;
    } else {
      inv.state = InvocationState::failed;
      inv.reason = "effect: not ground";
    }
  } else {
    inv.state = InvocationState::failed;
  }
  registry_.release(inv.service);
  if (inv.state == InvocationState::completed) {
    registry_.note_completed(inv.service, inv.consumer);
    if (rating) registry_.record_experience(inv.service, inv.consumer, *rating, {}, now);
  }
  return inv;
}

std::optional<std::vector<Iri>> Broker::compose(const std::vector<Iri>& available,
                                                const std::vector<Iri>& required) const {
  std::lock_guard lock(mu_);
  struct Step {
    Iri service;
    Rational score;
    std::vector<Iri> inputs;
    std::vector<Iri> outputs;
  };
  std::vector<Step> candidates;
  for (const auto& svc : registry_.services()) {
    const ServiceRecord rec = registry_.record(svc);
    if (rec.status == ServiceStatus::withdrawn) continue;
    Qos qos = rec.profile.properties.qos;
    qos.reputation = registry_.reputation(svc);
    candidates.push_back({svc, score(qos, policy_), types_of(rec.profile.inputs), types_of(rec.profile.outputs)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Step& a, const Step& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.service < b.service;
  });

  const std::set<Iri> given(available.begin(), available.end());
  std::set<Iri> have = given;
  std::vector<const Step*> plan;
  std::vector<bool> used(candidates.size(), false);
  bool changed = true;
  while (!covers(have, required) && changed) {
    changed = false;
    for (std::size_t i = 0; i < candidates.size() && !covers(have, required); ++i) {
      if (used[i] || !covers(have, candidates[i].inputs)) continue;
      used[i] = true;
      plan.push_back(&candidates[i]);
      have.insert(candidates[i].outputs.begin(), candidates[i].outputs.end());
      changed = true;
    }
  }
  if (!covers(have, required)) return std::nullopt;

  // keep only steps that feed a required output
  std::set<Iri> needed;
  for (const auto& t : required)
    if (!given.count(t)) needed.insert(t);
  std::vector<Iri> kept;
  for (auto it = plan.rbegin(); it != plan.rend(); ++it) {
    const Step& s = **it;
    const bool useful =
        std::any_of(s.outputs.begin(), s.outputs.end(), [&](const Iri& t) { return needed.count(t) != 0; });
    if (!useful) continue;
    for (const auto& t : s.outputs) needed.erase(t);
    for (const auto& t : s.inputs)
      if (!given.count(t)) needed.insert(t);
    kept.push_back(s.service);
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

std::vector<Invocation> Broker::invocations() const {
  std::lock_guard lock(mu_);
  return log_;
}

Invocation Broker::invocation(std::int64_t id) const {
  std::lock_guard lock(mu_);
  if (id < 1 || id > static_cast<std::int64_t>(log_.size()))
    throw Error(Errc::invalid_state, "unknown invocation " + std::to_string(id));
  return log_[static_cast<std::size_t>(id - 1)];
}

}  // namespace hcps
