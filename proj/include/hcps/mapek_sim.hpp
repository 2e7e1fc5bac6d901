#pragma once
// Deterministic discrete-event simulator: one MAPE-K loop per node over a
// shared kb, with the broker above them. Scenarios are scripted in a line
// format and replayed on logical time.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcps/broker.hpp"
#include "hcps/kb.hpp"
#include "hcps/registry.hpp"
#include "hcps/schema.hpp"

namespace hcps {

enum class Sentiment { neutral, upset, satisfied };

const char* to_string(Sentiment s);
std::optional<Sentiment> parse_sentiment(std::string_view text);

struct SimEvent {
  enum class Kind { request, message, signal, tick };

  std::int64_t time = 0;
  std::int64_t seq = 0;
  Kind kind = Kind::tick;
  Iri node;     // request: consumer; message: sender; signal: source
  Iri target;   // request: service; message: recipient
  std::string text_id;
  Sentiment sentiment = Sentiment::neutral;
  Iri topic;
  std::string signal_kind;
  std::vector<std::pair<std::string, std::string>> with;  // request inputs
};

struct RuleAction {
  enum class Kind { discover, invoke, complete };

  Kind kind = Kind::discover;
  std::string request;  // discover: criteria text, may contain $variables
  bool then_invoke = false;
  Iri service;          // invoke
  std::vector<std::pair<std::string, std::string>> with;
  Outcome outcome = Outcome::success;  // complete
  std::optional<Rational> rating;      // complete
};

struct AnalyzeRule {
  enum class Trigger { signal, sentiment };

  std::size_t line = 0;  // identifies the rule in the trace
  Iri node;
  Trigger trigger = Trigger::signal;
  std::string value;                   // signal kind or sentiment
  std::vector<std::string> unless;     // three terms, may contain $variables
  RuleAction action;
};

struct Expectation {
  enum class Kind { count, order };
  struct Step {
    std::string action;
    enum class Match { any, exact, contains } match = Match::any;
    std::string detail;
  };

  Kind kind = Kind::count;
  std::vector<Step> steps;  // count: exactly one
  std::int64_t count = 0;
  std::string text;
};

struct NodeSpec {
  Iri name;
  bool machine = false;
  std::string capability_ref;  // "-" for none
};

struct Scenario {
  KnowledgeBase kb;  // base, vocabulary, nodes, scenario facts; services not yet published
  std::vector<NodeSpec> nodes;
  std::vector<ProfileDocument> services;
  std::vector<std::pair<Iri, Statement>> local_facts;  // KNOW lines
  std::vector<SimEvent> events;  // sorted by (time, seq)
  std::vector<AnalyzeRule> rules;
  std::vector<Expectation> expectations;
};

// Vocabulary the built-in chat agent reads and writes (QAPair, Topic,
// answersTopic, answeredBy, writtenBy, learnedVia, reportedTopic).
std::string_view simulator_vocabulary();

//   KB <ref>                                  scenario vocabulary and facts
//   NODE <iri> HUMAN|MACHINE <capability-ref>|-
//   SERVICE <profile-ref>                     profile must name its PROVIDER
//   KNOW <node> <s> <p> <o>                   seeds a node's local knowledge
//   AT <t> REQUEST <consumer> <service> [WITH k=v ...]
//   AT <t> MESSAGE <from> <to> <text-id> SENTIMENT <s> TOPIC <iri>
//   AT <t> SIGNAL <source> <kind>
//   AT <t> TICK
//   RULE <node> ON SIGNAL <kind>|SENTIMENT <s> [UNLESS <s> <p> <o>] DO <action>
//     action: DISCOVER <criteria> [THEN INVOKE [WITH k=v ...]]
//           | INVOKE <service> [WITH k=v ...]
//           | COMPLETE success|failure [RATING <d>]
//   EXPECT COUNT <action>[=detail|~substring] <n>
//   EXPECT ORDER <action>[=detail|~substring] ...
// Rule terms may use $node $from $to $topic $sentiment $text $source $signal.
// Throws SyntaxError, UnknownNode, and whatever loading the referenced files
// raises.
Scenario load_scenario(std::string_view text, const FileLoader& load = nullptr);
// References resolve relative to the scenario file's directory.
Scenario load_scenario_file(const std::string& path);

struct TraceEntry {
  std::int64_t time = 0;
  std::string node;
  std::string phase;  // monitor | analyze | plan | execute
  std::string action;
  std::string detail;

  bool operator==(const TraceEntry&) const = default;
  std::string str() const;  // tab separated
};

struct ScenarioTrace {
  std::vector<TraceEntry> entries;

  std::string str() const;
  std::vector<TraceEntry> with_action(std::string_view action) const;
};

bool matches(const Expectation::Step& step, const TraceEntry& entry);
bool check_expectation(const Expectation& e, const ScenarioTrace& trace);

struct NodeLoop {
  Iri node;
  bool machine = false;
  bool chat_agent = false;  // machine with Conversational_Response
  std::vector<SimEvent> monitor_queue;
  std::vector<const AnalyzeRule*> rules;
  KnowledgeBase local_knowledge;
};

class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Routes an event to the monitor queues of every node that observes it.
  void deliver(const SimEvent& event);
  // One Monitor-Analyze-Plan-Execute pass; returns the entries it produced.
  std::vector<TraceEntry> node_tick(const Iri& node, std::int64_t now);
  // Delivers every event, ticking all nodes (ascending Iri) once per
  // distinct time.
  const ScenarioTrace& run();

  const ScenarioTrace& trace() const { return trace_; }
  const NodeLoop& loop(const Iri& node) const;
  Registry& registry() { return *registry_; }
  Broker& broker() { return *broker_; }
  // Writing node and tag of every knowledge write made by the simulation.
  const std::map<Statement, std::pair<Iri, std::string>>& provenance() const { return provenance_; }

 private:
  void execute(std::vector<TraceEntry>& out, NodeLoop& loop, const AnalyzeRule& rule,
               const std::map<std::string, std::string>& vars, std::int64_t now);
  void chat(std::vector<TraceEntry>& out, NodeLoop& loop, const SimEvent& event, std::int64_t now);
  void invoke(std::vector<TraceEntry>& out, NodeLoop& loop, const char* action, const Iri& service,
              const std::vector<std::pair<std::string, std::string>>& with,
              const std::map<std::string, std::string>& vars, std::int64_t now);
  bool write(const Iri& node, const Statement& st, const std::string& tag);
  // Running invocations as (consumer, provider, service).
  std::vector<std::pair<Invocation, Iri>> running() const;

  const Scenario& scenario_;
  std::unique_ptr<Registry> registry_;
  std::unique_ptr<Broker> broker_;
  std::map<Iri, NodeLoop> loops_;
  ScenarioTrace trace_;
  std::map<Statement, std::pair<Iri, std::string>> provenance_;
  std::int64_t qa_counter_ = 0;
};

struct SimulationResult {
  ScenarioTrace trace;
  std::vector<std::pair<std::string, bool>> expectations;
  KnowledgeBase kb;

  bool passed() const;
};

SimulationResult simulate(const Scenario& scenario);
ScenarioTrace run_scenario(const Scenario& scenario);

}  // namespace hcps
