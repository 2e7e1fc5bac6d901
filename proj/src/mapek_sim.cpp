#include "hcps/mapek_sim.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcps/error.hpp"
#include "hcps/reasoner.hpp"
#include "lexer.hpp"
#include "text_util.hpp"

namespace hcps {

using detail::LineCursor;
using detail::Token;

namespace {

constexpr std::string_view kVocabulary = R"(# chat agent vocabulary
CLASS QAPair
CLASS Topic
PROPERTY answersTopic DOMAIN QAPair RANGE Topic
PROPERTY answeredBy DOMAIN QAPair RANGE PhysicalThing
PROPERTY writtenBy DOMAIN QAPair RANGE PhysicalThing
PROPERTY learnedVia DOMAIN QAPair RANGE xsd:string
PROPERTY reportedTopic DOMAIN PhysicalThing RANGE Topic
)";

Iri p(const char* local) { return iri(local); }

std::vector<std::string> raw_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    out.emplace_back(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

bool is_declaration(const std::string& head) {
  return head == "@prefix" || head == "CLASS" || head == "PROPERTY" || head == "DISJOINT" || head == "AXIOM" ||
         head == "META";
}

std::string load_ref(const FileLoader& load, const Token& ref, std::size_t line) {
  if (!load) throw Error(Errc::io, "line " + std::to_string(line) + ": no loader for " + ref.text);
  return load(ref.quoted ? detail::unquote(ref, line) : ref.text);
}

std::vector<std::pair<std::string, std::string>> parse_with(LineCursor& cur) {
  std::vector<std::pair<std::string, std::string>> out;
  if (cur.done()) return out;
  cur.keyword("WITH");
  do {
    const Token& t = cur.next("name=value");
    const auto eq = t.text.find('=');
    if (t.quoted || eq == std::string::npos || eq == 0 || eq + 1 == t.text.size())
      throw SyntaxError(cur.number(), t.column, "name=value");
    out.emplace_back(t.text.substr(0, eq), t.text.substr(eq + 1));
  } while (!cur.done());
  return out;
}

Expectation::Step parse_step(const Token& t, std::size_t line) {
  Expectation::Step s;
  const auto at = t.text.find_first_of("=~");
  s.action = t.text.substr(0, at);
  if (s.action.empty()) throw SyntaxError(line, t.column, "trace action");
  if (at != std::string::npos) {
    s.match = t.text[at] == '=' ? Expectation::Step::Match::exact : Expectation::Step::Match::contains;
    s.detail = t.text.substr(at + 1);
  }
  return s;
}

// Replaces $name with its value; unknown names are left alone.
std::string substitute_vars(const std::string& text, const std::map<std::string, std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != '$') {
      out += text[i++];
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    auto it = vars.find(text.substr(i + 1, j - i - 1));
    out += it == vars.end() ? text.substr(i, j - i) : it->second;
    i = j;
  }
  return out;
}

std::string one_line(const std::string& text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

std::string describe(const SimEvent& e) {
  switch (e.kind) {
    case SimEvent::Kind::request: return "request " + e.target.short_form();
    case SimEvent::Kind::message:
      return "message " + e.text_id + " " + e.node.short_form() + "->" + e.target.short_form() +
             " sentiment=" + to_string(e.sentiment) + " topic=" + e.topic.short_form();
    case SimEvent::Kind::signal: return "signal " + e.signal_kind + " from " + e.node.short_form();
    case SimEvent::Kind::tick: return "tick";
  }
  return "tick";
}

std::map<std::string, std::string> event_vars(const Iri& node, const SimEvent& e) {
  std::map<std::string, std::string> v{{"node", node.short_form()}};
  if (e.kind == SimEvent::Kind::message) {
    v["from"] = e.node.short_form();
    v["to"] = e.target.short_form();
    v["topic"] = e.topic.short_form();
    v["sentiment"] = to_string(e.sentiment);
    v["text"] = e.text_id;
  } else if (e.kind == SimEvent::Kind::signal) {
    v["source"] = e.node.short_form();
    v["signal"] = e.signal_kind;
  }
  return v;
}

std::string trigger_text(const SimEvent& e) {
  if (e.kind == SimEvent::Kind::message) return std::string("sentiment=") + to_string(e.sentiment);
  return "signal=" + e.signal_kind;
}

std::string action_text(const RuleAction& a) {
  switch (a.kind) {
    case RuleAction::Kind::discover: return "DISCOVER " + a.request + (a.then_invoke ? " THEN INVOKE" : "");
    case RuleAction::Kind::invoke: return "INVOKE " + a.service.short_form();
    case RuleAction::Kind::complete:
      return std::string("COMPLETE ") + (a.outcome == Outcome::success ? "success" : "failure") +
             (a.rating ? " RATING " + to_decimal_string(*a.rating) : "");
  }
  return {};
}

std::string with_text(const std::vector<std::pair<std::string, std::string>>& with) {
  std::string out;
  for (const auto& [k, v] : with) out += " " + k + "=" + v;
  return out.empty() ? out : " WITH" + out;
}

std::string statement_text(const Statement& st) {
  return st.subject.short_form() + " " + st.predicate.short_form() + " " + to_string(st.object);
}

}  // namespace

const char* to_string(Sentiment s) {
  switch (s) {
    case Sentiment::neutral: return "neutral";
    case Sentiment::upset: return "upset";
    case Sentiment::satisfied: return "satisfied";
  }
  return "neutral";
}

std::optional<Sentiment> parse_sentiment(std::string_view text) {
  for (auto s : {Sentiment::neutral, Sentiment::upset, Sentiment::satisfied})
    if (text == to_string(s)) return s;
  return std::nullopt;
}

std::string_view simulator_vocabulary() { return kVocabulary; }

// ---------------------------------------------------------------------------
// Loading

Scenario load_scenario(std::string_view text, const FileLoader& load) {
  Scenario sc;
  sc.kb = base_ontology();
  parse_document_into(sc.kb, kVocabulary);
  const auto lines = detail::tokenize(text);
  const auto raws = raw_lines(text);

  // Nodes first so that directive order does not matter.
  std::set<Iri> nodes;
  for (const auto& line : lines) {
    if (line.tokens[0].text != "NODE") continue;
    LineCursor cur(line);
    cur.next("NODE");
    NodeSpec spec;
    spec.name = detail::name_token(sc.kb, cur.next("node name"), line.number);
    const Token& kind = cur.next("HUMAN or MACHINE");
    if (kind.text != "HUMAN" && kind.text != "MACHINE") throw SyntaxError(line.number, kind.column, "HUMAN or MACHINE");
    spec.machine = kind.text == "MACHINE";
    spec.capability_ref = cur.next("capability file or -").text;
    cur.finish();
    if (!nodes.insert(spec.name).second) throw Error(Errc::duplicate_individual, spec.name.short_form());
    sc.nodes.push_back(spec);
  }
  auto node_token = [&](LineCursor& cur, const char* what) {
    const Token& t = cur.next(what);
    const Iri n = detail::name_token(sc.kb, t, cur.number());
    if (!nodes.count(n))
      throw Error(Errc::unknown_node, "line " + std::to_string(cur.number()) + ": " + n.short_form());
    return n;
  };

  // Scenario documents: declarations now, facts after node registration.
  std::string facts;
  for (const auto& line : lines) {
    if (line.tokens[0].text != "KB") continue;
    LineCursor cur(line);
    cur.next("KB");
    const Token& ref = cur.next("kb file");
    cur.finish();
    const std::string doc = load_ref(load, ref, line.number);
    std::string decls;
    for (const auto& raw : raw_lines(doc)) {
      const auto toks = detail::tokenize_line(raw, 1);
      if (toks.empty()) continue;
      (is_declaration(toks[0].text) ? decls : facts) += raw + "\n";
    }
    parse_document_into(sc.kb, decls);
  }

  for (const auto& line : lines) {
    if (line.tokens[0].text != "NODE") continue;
    const NodeSpec* spec = nullptr;
    const Iri name = detail::name_token(sc.kb, line.tokens[1], line.number);
    for (const auto& n : sc.nodes)
      if (n.name == name) spec = &n;
    const Token& ref = line.tokens[3];
    if (spec->machine) {
      MachineCapabilityDocument doc;
      if (ref.text != "-") doc = parse_machine_capability(sc.kb, load_ref(load, ref, line.number));
      register_machine(sc.kb, spec->name, doc.capability, doc.context);
    } else {
      HumanCapabilityDocument doc;
      if (ref.text != "-") doc = parse_human_capability(sc.kb, load_ref(load, ref, line.number), load);
      register_human(sc.kb, spec->name, doc.capability, doc.context);
    }
  }
  parse_document_into(sc.kb, facts);

  std::int64_t seq = 0;
  for (const auto& line : lines) {
    LineCursor cur(line);
    const std::size_t n = line.number;
    const Token& head = cur.next("directive");
    const std::string& d = head.text;
    if (d == "NODE" || d == "KB") {
      continue;
    } else if (d == "SERVICE") {
      const Token& ref = cur.next("profile file");
      cur.finish();
      auto doc = parse_profile(sc.kb, load_ref(load, ref, n));
      if (!doc.provider)
        throw Error(Errc::invalid_profile, "line " + std::to_string(n) + ": profile " +
                                               doc.profile.service_id.short_form() + " names no PROVIDER");
      sc.services.push_back(std::move(doc));
    } else if (d == "KNOW") {
      const Iri node = node_token(cur, "node");
      const Pattern pt = detail::pattern_tokens(sc.kb, cur.rest(), n);
      const auto* s = std::get_if<Iri>(&pt.subject);
      const auto* pr = std::get_if<Iri>(&pt.predicate);
      if (!s || !pr || std::holds_alternative<Variable>(pt.object)) throw SyntaxError(n, head.column, "ground fact");
      Term o = std::holds_alternative<Iri>(pt.object) ? Term{std::get<Iri>(pt.object)} : Term{std::get<Literal>(pt.object)};
      sc.local_facts.emplace_back(node, Statement{*s, *pr, o});
    } else if (d == "AT") {
      SimEvent e;
      e.time = cur.integer("time");
      if (e.time < 0) throw SyntaxError(n, head.column, "non-negative time");
      e.seq = seq++;
      const Token& kind = cur.next("REQUEST, MESSAGE, SIGNAL or TICK");
      if (kind.text == "REQUEST") {
        e.kind = SimEvent::Kind::request;
        e.node = node_token(cur, "consumer");
        e.target = detail::name_token(sc.kb, cur.next("service"), n);
        e.with = parse_with(cur);
      } else if (kind.text == "MESSAGE") {
        e.kind = SimEvent::Kind::message;
        e.node = node_token(cur, "sender");
        e.target = node_token(cur, "recipient");
        e.text_id = cur.next("text id").text;
        cur.keyword("SENTIMENT");
        const Token& s = cur.next("sentiment");
        const auto sentiment = parse_sentiment(s.text);
        if (!sentiment) throw SyntaxError(n, s.column, "neutral, upset or satisfied");
        e.sentiment = *sentiment;
        cur.keyword("TOPIC");
        e.topic = detail::name_token(sc.kb, cur.next("topic"), n);
        sc.kb.insert(e.topic, rdf_type(), p("Topic"));
      } else if (kind.text == "SIGNAL") {
        e.kind = SimEvent::Kind::signal;
        e.node = node_token(cur, "source");
        e.signal_kind = cur.next("signal kind").text;
      } else if (kind.text == "TICK") {
        e.kind = SimEvent::Kind::tick;
      } else {
        throw SyntaxError(n, kind.column, "REQUEST, MESSAGE, SIGNAL or TICK");
      }
      cur.finish();
      sc.events.push_back(std::move(e));
    } else if (d == "RULE") {
      AnalyzeRule r;
      r.line = n;
      r.node = node_token(cur, "node");
      cur.keyword("ON");
      const Token& trig = cur.next("SIGNAL or SENTIMENT");
      if (trig.text == "SIGNAL") {
        r.trigger = AnalyzeRule::Trigger::signal;
        r.value = cur.next("signal kind").text;
      } else if (trig.text == "SENTIMENT") {
        r.trigger = AnalyzeRule::Trigger::sentiment;
        const Token& s = cur.next("sentiment");
        if (!parse_sentiment(s.text)) throw SyntaxError(n, s.column, "neutral, upset or satisfied");
        r.value = s.text;
      } else {
        throw SyntaxError(n, trig.column, "SIGNAL or SENTIMENT");
      }
      const Token* next = &cur.next("UNLESS or DO");
      if (next->text == "UNLESS") {
        for (int i = 0; i < 3; ++i) r.unless.push_back(cur.next("pattern term").text);
        next = &cur.next("DO");
      }
      if (next->text != "DO") throw SyntaxError(n, next->column, "DO");
      const Token& act = cur.next("DISCOVER, INVOKE or COMPLETE");
      if (act.text == "DISCOVER") {
        r.action.kind = RuleAction::Kind::discover;
        const std::string& raw = raws[n - 1];
        const std::size_t from = act.column - 1 + act.text.size();
        std::size_t to = std::string::npos;
        while (!cur.done()) {
          const Token& t = cur.next("criterion");
          if (t.text == "THEN") {
            to = t.column - 1;
            cur.keyword("INVOKE");
            r.action.then_invoke = true;
            r.action.with = parse_with(cur);
            break;
          }
        }
        std::string criteria = raw.substr(from, to == std::string::npos ? std::string::npos : to - from);
        if (auto hash = criteria.find('#'); hash != std::string::npos) criteria.erase(hash);
        r.action.request = one_line(criteria);
        if (r.action.request.empty()) throw SyntaxError(n, act.column, "discovery criteria");
      } else if (act.text == "INVOKE") {
        r.action.kind = RuleAction::Kind::invoke;
        r.action.service = detail::name_token(sc.kb, cur.next("service"), n);
        r.action.with = parse_with(cur);
      } else if (act.text == "COMPLETE") {
        r.action.kind = RuleAction::Kind::complete;
        const Token& o = cur.next("success or failure");
        if (o.text != "success" && o.text != "failure") throw SyntaxError(n, o.column, "success or failure");
        r.action.outcome = o.text == "success" ? Outcome::success : Outcome::failure;
        if (!cur.done()) {
          cur.keyword("RATING");
          r.action.rating = cur.decimal("rating");
        }
      } else {
        throw SyntaxError(n, act.column, "DISCOVER, INVOKE or COMPLETE");
      }
      cur.finish();
      sc.rules.push_back(std::move(r));
    } else if (d == "EXPECT") {
      Expectation x;
      const std::string& raw = raws[n - 1];
      x.text = one_line(raw.substr(0, raw.find('#')));
      const Token& kind = cur.next("COUNT or ORDER");
      if (kind.text == "COUNT") {
        x.kind = Expectation::Kind::count;
        x.steps.push_back(parse_step(cur.next("trace action"), n));
        x.count = cur.integer("count");
      } else if (kind.text == "ORDER") {
        x.kind = Expectation::Kind::order;
        do x.steps.push_back(parse_step(cur.next("trace action"), n));
        while (!cur.done());
      } else {
        throw SyntaxError(n, kind.column, "COUNT or ORDER");
      }
      cur.finish();
      sc.expectations.push_back(std::move(x));
    } else {
      throw SyntaxError(n, head.column, "scenario directive (KB, NODE, SERVICE, KNOW, AT, RULE, EXPECT)");
    }
  }
  std::stable_sort(sc.events.begin(), sc.events.end(),
                   [](const SimEvent& a, const SimEvent& b) { return std::tie(a.time, a.seq) < std::tie(b.time, b.seq); });
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  const std::filesystem::path file(path);
  const auto dir = file.parent_path();
  FileLoader loader = [dir](std::string_view ref) {
    const auto target = dir / std::string(ref);
    std::ifstream in(target);
    if (!in) throw Error(Errc::io, "cannot read " + target.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  return load_scenario(loader(file.filename().string()), loader);
}

// ---------------------------------------------------------------------------
// Trace

std::string TraceEntry::str() const {
  return std::to_string(time) + "\t" + node + "\t" + phase + "\t" + action + "\t" + detail;
}

std::string ScenarioTrace::str() const {
  std::string out;
  for (const auto& e : entries) out += e.str() + "\n";
  return out;
}

std::vector<TraceEntry> ScenarioTrace::with_action(std::string_view action) const {
  std::vector<TraceEntry> out;
  for (const auto& e : entries)
    if (e.action == action) out.push_back(e);
  return out;
}

bool matches(const Expectation::Step& step, const TraceEntry& entry) {
  if (entry.action != step.action) return false;
  switch (step.match) {
    case Expectation::Step::Match::any: return true;
    case Expectation::Step::Match::exact: return entry.detail == step.detail;
    case Expectation::Step::Match::contains: return entry.detail.find(step.detail) != std::string::npos;
  }
  return false;
}

bool check_expectation(const Expectation& e, const ScenarioTrace& trace) {
  if (e.kind == Expectation::Kind::count) {
    const auto n = std::count_if(trace.entries.begin(), trace.entries.end(),
                                 [&](const TraceEntry& t) { return matches(e.steps[0], t); });
    return n == e.count;
  }
  std::size_t next = 0;
  for (const auto& t : trace.entries)
    if (next < e.steps.size() && matches(e.steps[next], t)) ++next;
  return next == e.steps.size();
}

// ---------------------------------------------------------------------------
// Simulation

Simulation::Simulation(const Scenario& scenario) : scenario_(scenario) {
  registry_ = std::make_unique<Registry>(materialize(scenario.kb));
  for (const auto& doc : scenario.services) registry_->publish_service(*doc.provider, doc.profile);
  registry_->kb() = materialize(registry_->kb());
  broker_ = std::make_unique<Broker>(*registry_);

  KnowledgeBase empty = registry_->kb();
  for (const auto& st : std::vector<Statement>(empty.statements().begin(), empty.statements().end())) empty.erase(st);
  for (const auto& spec : scenario.nodes) {
    NodeLoop loop;
    loop.node = spec.name;
    loop.machine = spec.machine;
    loop.chat_agent = spec.machine && has_skill(registry_->kb(), spec.name, iri("Conversational_Response"));
    loop.local_knowledge = empty;
    loops_.emplace(spec.name, std::move(loop));
  }
  for (const auto& rule : scenario.rules) loops_.at(rule.node).rules.push_back(&rule);
  for (const auto& [node, st] : scenario.local_facts) loops_.at(node).local_knowledge.insert(st);
}

const NodeLoop& Simulation::loop(const Iri& node) const {
  auto it = loops_.find(node);
  if (it == loops_.end()) throw Error(Errc::unknown_node, node.short_form());
  return it->second;
}

std::vector<std::pair<Invocation, Iri>> Simulation::running() const {
  std::vector<std::pair<Invocation, Iri>> out;
  for (const auto& inv : broker_->invocations())
    if (inv.state == InvocationState::running) out.emplace_back(inv, registry_->record(inv.service).provider);
  return out;
}

void Simulation::deliver(const SimEvent& e) {
  auto push = [&](const Iri& node) {
    auto it = loops_.find(node);
    if (it == loops_.end()) throw Error(Errc::unknown_node, node.short_form());
    it->second.monitor_queue.push_back(e);
  };
  switch (e.kind) {
    case SimEvent::Kind::request:
    case SimEvent::Kind::signal: push(e.node); break;
    case SimEvent::Kind::tick: break;
    case SimEvent::Kind::message: {
      push(e.node);
      if (e.target != e.node) push(e.target);
      const auto sessions = running();
      for (auto& [node, loop] : loops_) {
        if (!loop.chat_agent || node == e.node || node == e.target) continue;
        const bool observes = std::any_of(sessions.begin(), sessions.end(), [&](const auto& s) {
          const Iri& consumer = s.first.consumer;
          const Iri& provider = s.second;
          return (provider == node && (consumer == e.node || consumer == e.target)) ||
                 (consumer == node && (provider == e.node || provider == e.target));
        });
        if (observes) loop.monitor_queue.push_back(e);
      }
      break;
    }
  }
}

bool Simulation::write(const Iri& node, const Statement& st, const std::string& tag) {
  if (!registry_->kb().insert(st)) return false;
  provenance_[st] = {node, tag};
  return true;
}

void Simulation::invoke(std::vector<TraceEntry>& out, NodeLoop& loop, const char* action, const Iri& service,
                        const std::vector<std::pair<std::string, std::string>>& with,
                        const std::map<std::string, std::string>& vars, std::int64_t now) {
  const std::string who = loop.node.short_form();
  try {
    std::map<std::string, Term> inputs;
    for (const auto& [k, v] : with) {
      const auto toks = detail::tokenize_line(substitute_vars(v, vars), 1);
      if (toks.size() != 1) throw SyntaxError(1, 1, "single input value for " + k);
      inputs[k] = detail::object_token(registry_->kb(), toks[0], 1);
    }
    const auto inv = broker_->invoke(service, loop.node, inputs, now);
    std::string detail = service.short_form() + " #" + std::to_string(inv.id) + " " + to_string(inv.state) +
                         " consumer=" + who;
    if (!inv.reason.empty()) detail += " reason=" + inv.reason;
    out.push_back({now, who, "execute", action, detail});
  } catch (const Error& e) {
    out.push_back({now, who, "execute", "error", std::string(action) + " " + service.short_form() + ": " + e.what()});
  }
}

void Simulation::chat(std::vector<TraceEntry>& out, NodeLoop& loop, const SimEvent& e, std::int64_t now) {
  if (e.kind != SimEvent::Kind::message || e.node == loop.node) return;
  const std::string who = loop.node.short_form();
  KnowledgeBase& kb = registry_->kb();
  auto lookup = [&](const Iri& topic) -> std::optional<std::pair<Iri, std::string>> {
    const Pattern pt{Variable{"qa"}, p("answersTopic"), topic};
    for (const auto* source : {&loop.local_knowledge, &kb}) {
      const auto hits = source->match(pt);
      if (!hits.empty())
        return std::make_pair(std::get<Iri>(hits.front().at("qa")), source == &kb ? "shared" : "local");
    }
    return std::nullopt;
  };
  const auto sessions = running();
  auto consumes_from = [&](const Iri& provider) {
    return std::any_of(sessions.begin(), sessions.end(),
                       [&](const auto& s) { return s.first.consumer == loop.node && s.second == provider; });
  };

  if (e.target == loop.node) {
    const auto hit = lookup(e.topic);
    out.push_back({now, who, "execute", "answer",
                   e.text_id + " " + e.topic.short_form() +
                       (hit ? " hit " + hit->first.short_form() + " from " + hit->second + " kb" : " miss")});
    const Statement fact{e.node, p("reportedTopic"), e.topic};
    if (write(loop.node, fact, "chat")) out.push_back({now, who, "execute", "write", statement_text(fact) + " tag=chat"});
  } else if (consumes_from(e.node)) {
    const Iri qa = iri("qa_" + e.topic.local + "_" + std::to_string(++qa_counter_));
    const std::vector<Statement> pair = {{qa, rdf_type(), p("QAPair")},
                                         {qa, p("answersTopic"), e.topic},
                                         {qa, p("answeredBy"), e.node},
                                         {qa, p("writtenBy"), loop.node},
                                         {qa, p("learnedVia"), Literal::string("adaptation")}};
    for (const auto& st : pair) write(loop.node, st, "adaptation");
    out.push_back({now, who, "execute", "adaptation",
                   qa.short_form() + " answersTopic " + e.topic.short_form() + " answeredBy " + e.node.short_form() +
                       " message=" + e.text_id + " tag=adaptation"});
  } else if (consumes_from(e.target)) {
    const auto hit = lookup(e.topic);
    out.push_back({now, who, "execute", "recommend",
                   e.text_id + " " + e.topic.short_form() + " to " + e.target.short_form() +
                       (hit ? " suggestion " + hit->first.short_form() : " no suggestion")});
  }
}

void Simulation::execute(std::vector<TraceEntry>& out, NodeLoop& loop, const AnalyzeRule& rule,
                         const std::map<std::string, std::string>& vars, std::int64_t now) {
  const std::string who = loop.node.short_form();
  const RuleAction& a = rule.action;
  switch (a.kind) {
    case RuleAction::Kind::discover: {
      try {
        DiscoveryRequest req = parse_request(registry_->kb(), substitute_vars(a.request, vars));
        if (!req.consumer) req.consumer = loop.node;
        if (!req.now) req.now = now;
        std::string queries;
        for (const auto& q : compile(req)) queries += (queries.empty() ? "" : " UNION ") + one_line(print_query(q));
        const auto found = broker_->discover(req);
        std::string result;
        for (const auto& c : found) result += (result.empty() ? "" : ",") + c.service.short_form();
        out.push_back({now, who, "execute", "discover",
                       format_request(req) + " | " + queries + " | " + (result.empty() ? "(none)" : result)});
        if (a.then_invoke && !found.empty()) invoke(out, loop, "invoke", found.front().service, a.with, vars, now);
      } catch (const Error& e) {
        out.push_back({now, who, "execute", "error", std::string("discover: ") + e.what()});
      }
      break;
    }
    case RuleAction::Kind::invoke: invoke(out, loop, "invoke", a.service, a.with, vars, now); break;
    case RuleAction::Kind::complete: {
      for (const auto& [inv, provider] : running()) {
        if (inv.consumer != loop.node) continue;
        try {
          const auto done = broker_->complete_invocation(inv, a.outcome, a.rating, now);
          std::string detail = inv.service.short_form() + " #" + std::to_string(inv.id) + " " + to_string(done.state) +
                               " on " + (vars.count("sentiment") ? "sentiment=" + vars.at("sentiment")
                                                                 : "signal=" + vars.at("signal"));
          for (const auto& st : done.applied_effects) {
            provenance_[st] = {loop.node, "effect"};
            detail += " +(" + statement_text(st) + ")";
          }
          for (const auto& st : done.retracted_effects) detail += " -(" + statement_text(st) + ")";
          out.push_back({now, who, "execute", "complete", detail});
          if (a.rating && done.state == InvocationState::completed)
            out.push_back({now, who, "execute", "rate",
                           who + " rates " + inv.service.short_form() + " of " + provider.short_form() + " " +
                               to_decimal_string(*a.rating) + " reputation=" +
                               format_fixed(registry_->reputation(inv.service), 2)});
        } catch (const Error& e) {
          out.push_back({now, who, "execute", "error", "complete " + inv.service.short_form() + ": " + e.what()});
        }
      }
      break;
    }
  }
}

std::vector<TraceEntry> Simulation::node_tick(const Iri& node, std::int64_t now) {
  auto it = loops_.find(node);
  if (it == loops_.end()) throw Error(Errc::unknown_node, node.short_form());
  NodeLoop& loop = it->second;
  const std::string who = node.short_form();
  std::vector<TraceEntry> out;
  const std::vector<SimEvent> queue = std::move(loop.monitor_queue);
  loop.monitor_queue.clear();

  // Monitor
  for (const auto& e : queue) out.push_back({now, who, "monitor", "receive", describe(e)});

  // Analyze
  struct Fired {
    const AnalyzeRule* rule;
    std::map<std::string, std::string> vars;
    std::string trigger;
  };
  std::vector<Fired> fired;
  for (const auto& e : queue) {
    for (const AnalyzeRule* r : loop.rules) {
      const bool hit = (r->trigger == AnalyzeRule::Trigger::signal && e.kind == SimEvent::Kind::signal &&
                        e.signal_kind == r->value) ||
                       (r->trigger == AnalyzeRule::Trigger::sentiment && e.kind == SimEvent::Kind::message &&
                        r->value == to_string(e.sentiment));
      if (!hit) continue;
      fired.push_back({r, event_vars(node, e), trigger_text(e)});
      out.push_back({now, who, "analyze", "fire", "rule@" + std::to_string(r->line) + " on " + trigger_text(e) +
                                                      (e.kind == SimEvent::Kind::message ? " topic=" + e.topic.short_form() : "")});
    }
  }

  // Plan: one plan per distinct goal, none when the goal is already known.
  std::vector<const Fired*> plans;
  std::set<std::string> goals;
  for (const auto& f : fired) {
    const std::string goal =
        substitute_vars(action_text(f.rule->action) + with_text(f.rule->action.with), f.vars);
    if (!goals.insert(goal).second) continue;
    if (!f.rule->unless.empty()) {
      std::string text;
      for (const auto& t : f.rule->unless) text += substitute_vars(t, f.vars) + " ";
      try {
        const Pattern pt = parse_pattern(registry_->kb(), text);
        if (!registry_->kb().match(pt).empty() || !loop.local_knowledge.match(pt).empty()) {
          out.push_back({now, who, "plan", "suppress", "rule@" + std::to_string(f.rule->line) + " goal known: " + one_line(text)});
          continue;
        }
      } catch (const Error& e) {
        out.push_back({now, who, "plan", "error", e.what()});
        continue;
      }
    }
    out.push_back({now, who, "plan", "plan", "rule@" + std::to_string(f.rule->line) + " " + goal});
    plans.push_back(&f);
  }

  // Execute
  for (const auto& e : queue) {
    if (e.kind == SimEvent::Kind::request) {
      invoke(out, loop, "allocate", e.target, e.with, event_vars(node, e), now);
    } else if (loop.chat_agent) {
      chat(out, loop, e, now);
    }
  }
  for (const Fired* f : plans) execute(out, loop, *f->rule, f->vars, now);
  return out;
}

const ScenarioTrace& Simulation::run() {
  const auto& events = scenario_.events;
  for (std::size_t i = 0; i < events.size();) {
    const std::int64_t now = events[i].time;
    for (; i < events.size() && events[i].time == now; ++i) deliver(events[i]);
    for (auto& [node, loop] : loops_) {
      auto entries = node_tick(node, now);
      trace_.entries.insert(trace_.entries.end(), entries.begin(), entries.end());
    }
  }
  return trace_;
}

bool SimulationResult::passed() const {
  return std::all_of(expectations.begin(), expectations.end(), [](const auto& e) { return e.second; });
}

SimulationResult simulate(const Scenario& scenario) {
  Simulation sim(scenario);
  SimulationResult result;
  result.trace = sim.run();
  for (const auto& x : scenario.expectations) result.expectations.emplace_back(x.text, check_expectation(x, result.trace));
  result.kb = sim.registry().kb();
  return result;
}

ScenarioTrace run_scenario(const Scenario& scenario) {
  Simulation sim(scenario);
  return sim.run();
}

}  // namespace hcps
