#include <algorithm>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "hcps/mapek_sim.hpp"
#include "hcps/query.hpp"

using namespace hcps;
using testing::code_of;

namespace {

const std::string kDir = std::string(HCPS_DATA_DIR) + "/scenarios/";

Scenario shipped(const char* name) { return load_scenario_file(kDir + name); }

std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (auto at = s.find(sep); at != std::string::npos; at = s.find(sep, pos)) {
    out.push_back(s.substr(pos, at - pos));
    pos = at + sep.size();
  }
  out.push_back(s.substr(pos));
  return out;
}

std::set<Iri> node_names(const Scenario& sc) {
  std::set<Iri> out;
  for (const auto& n : sc.nodes) out.insert(n.name);
  return out;
}

// Minimal chat world built in memory; files resolved from a map.
FileLoader map_loader(std::map<std::string, std::string> files) {
  return [files](std::string_view ref) {
    auto it = files.find(std::string(ref));
    if (it == files.end()) throw Error(Errc::io, std::string(ref));
    return it->second;
  };
}

const char* kMiniKb = "CLASS Patient\nINDIVIDUAL Adam TYPE Patient\nINDIVIDUAL known TYPE Topic\n"
                      "INDIVIDUAL qa1 TYPE QAPair\nFACT qa1 answersTopic known\n";

std::string mini_scenario(const std::string& events) {
  return "KB kb\nNODE Adam HUMAN -\nNODE Cathy MACHINE cathy\nNODE David HUMAN david\nSERVICE doc\n"
         "RULE Cathy ON SENTIMENT upset UNLESS ?qa answersTopic $topic DO DISCOVER skill=Complex_Problem_Solving "
         "provider=human\n" +
         events;
}

const std::map<std::string, std::string> kMiniFiles = {
    {"kb", kMiniKb},
    {"cathy", "PROGRAMMED_SKILL Conversational_Response\n"},
    {"david", "SKILL Complex_Problem_Solving 6\n"},
    {"doc", "SERVICE doctorService\nPROVIDER David\nTYPE processing\n"}};

}  // namespace

TEST_CASE("load_scenario reads the shipped fixtures") {
  const auto chat = shipped("scenario2_chat.scn");
  CHECK(node_names(chat) == std::set<Iri>{iri("Adam"), iri("Cathy"), iri("David")});
  std::set<Iri> services;
  for (const auto& s : chat.services) services.insert(s.profile.service_id);
  CHECK(services == std::set<Iri>{iri("chatbotService"), iri("chatDoctor")});

  const auto ecg = shipped("scenario1_ecg.scn");
  CHECK(node_names(ecg) == std::set<Iri>{iri("Andy"), iri("Sisy"), iri("EcgDev")});
  REQUIRE(!ecg.events.empty());
  CHECK(ecg.events[0].kind == SimEvent::Kind::signal);
  CHECK(ecg.events[0].signal_kind == "loss_of_signal");
  CHECK(ecg.events[0].node == iri("EcgDev"));
}

TEST_CASE("empty event list terminates immediately") {
  const auto sc = load_scenario("NODE Adam HUMAN -\n");
  CHECK(sc.events.empty());
  CHECK(run_scenario(sc).entries.empty());
  CHECK(simulate(sc).passed());
}

TEST_CASE("load_scenario errors") {
  CHECK_THROWS_AS(load_scenario("NODE Adam ROBOT -\n"), SyntaxError);
  CHECK_THROWS_AS(load_scenario("AT x SIGNAL Adam s\n"), SyntaxError);
  CHECK_THROWS_AS(load_scenario("BOGUS\n"), SyntaxError);
  CHECK(code_of([] { (void)load_scenario("NODE Adam HUMAN -\nAT 1 SIGNAL Bob lost\n"); }) == Errc::unknown_node);
  CHECK(code_of([] { (void)load_scenario("NODE A HUMAN -\nAT 1 MESSAGE A B m SENTIMENT upset TOPIC t\n"); }) ==
        Errc::unknown_node);
  CHECK(code_of([] { (void)load_scenario("RULE Ghost ON SIGNAL s DO COMPLETE success\n"); }) == Errc::unknown_node);
  CHECK_THROWS_AS(load_scenario("NODE A HUMAN -\nAT 1 MESSAGE A A m SENTIMENT grumpy TOPIC t\n"), SyntaxError);
}

TEST_CASE("events are ordered by time then sequence") {
  const auto sc = load_scenario("NODE A HUMAN -\nAT 5 SIGNAL A late\nAT 1 SIGNAL A early\nAT 5 SIGNAL A later\n");
  REQUIRE(sc.events.size() == 3);
  CHECK(sc.events[0].signal_kind == "early");
  CHECK(sc.events[1].signal_kind == "late");
  CHECK(sc.events[2].signal_kind == "later");
}

TEST_CASE("node_tick: empty queue yields nothing") {
  const auto sc = load_scenario(mini_scenario(""), map_loader(kMiniFiles));
  Simulation sim(sc);
  CHECK(sim.node_tick(iri("Cathy"), 0).empty());
  CHECK(sim.node_tick(iri("Adam"), 0).empty());
}

TEST_CASE("node_tick: upset message triggers one discovery") {
  const auto sc = load_scenario(mini_scenario(""), map_loader(kMiniFiles));
  Simulation sim(sc);
  SimEvent e;
  e.time = 1;
  e.kind = SimEvent::Kind::message;
  e.node = iri("Adam");
  e.target = iri("Cathy");
  e.text_id = "m";
  e.sentiment = Sentiment::upset;
  e.topic = iri("unknownTopic");
  sim.deliver(e);
  sim.deliver(e);  // same goal twice, one plan
  const auto out = sim.node_tick(iri("Cathy"), 1);
  std::vector<std::string> executed;
  for (const auto& t : out)
    if (t.phase == "execute" && t.action != "answer" && t.action != "write") executed.push_back(t.action);
  CHECK(executed == std::vector<std::string>{"discover"});
  const auto d = std::find_if(out.begin(), out.end(), [](const TraceEntry& t) { return t.action == "discover"; });
  REQUIRE(d != out.end());
  CHECK(split(d->detail, " | ").back() == "doctorService");
  CHECK(sim.node_tick(iri("Cathy"), 1).empty());
}

TEST_CASE("node_tick: goal already satisfied is suppressed") {
  const auto sc = load_scenario(mini_scenario(""), map_loader(kMiniFiles));
  Simulation sim(sc);
  SimEvent e;
  e.kind = SimEvent::Kind::message;
  e.node = iri("Adam");
  e.target = iri("Cathy");
  e.sentiment = Sentiment::upset;
  e.topic = iri("known");
  sim.deliver(e);
  const auto out = sim.node_tick(iri("Cathy"), 1);
  CHECK(std::none_of(out.begin(), out.end(), [](const TraceEntry& t) { return t.action == "discover"; }));
  CHECK(std::count_if(out.begin(), out.end(), [](const TraceEntry& t) { return t.action == "suppress"; }) == 1);
}

TEST_CASE("local knowledge also suppresses") {
  auto files = kMiniFiles;
  const auto sc = load_scenario(mini_scenario("KNOW Cathy qa9 answersTopic private\n"
                                              "AT 1 MESSAGE Adam Cathy m SENTIMENT upset TOPIC private\n"),
                                map_loader(files));
  const auto trace = run_scenario(sc);
  CHECK(trace.with_action("discover").empty());
  CHECK(trace.with_action("suppress").size() == 1);
  const auto answers = trace.with_action("answer");
  REQUIRE(answers.size() == 1);
  CHECK(answers[0].detail.find("hit qa9 from local kb") != std::string::npos);
}

TEST_CASE("scenario 2: expectations, single discovery, equivalent query") {
  const auto sc = shipped("scenario2_chat.scn");
  const auto result = simulate(sc);
  for (const auto& [text, ok] : result.expectations) CHECK_MESSAGE(ok, text);
  CHECK(result.passed());

  const auto discoveries = result.trace.with_action("discover");
  REQUIRE(discoveries.size() == 1);
  const auto parts = split(discoveries[0].detail, " | ");
  REQUIRE(parts.size() == 3);
  const auto queries = split(parts[1], " UNION ");
  REQUIRE(queries.size() == 1);
  CHECK(pattern_equivalent(parse_query(queries[0]), parse_query(testing::kScenario2Query)));
  CHECK(parts[2] == "chatDoctor");

  const auto invokes = result.trace.with_action("invoke");
  REQUIRE(invokes.size() == 1);
  CHECK(invokes[0].detail.rfind("chatDoctor", 0) == 0);
  CHECK(result.kb.contains({iri("Adam"), iri("advisedBy"), iri("David")}));
}

TEST_CASE("scenario 2: trace follows the narrative order") {
  const auto trace = run_scenario(shipped("scenario2_chat.scn"));
  Expectation order;
  order.kind = Expectation::Kind::order;
  auto step = [](const char* action, const char* detail) {
    return Expectation::Step{action, Expectation::Step::Match::contains, detail};
  };
  order.steps = {step("allocate", "chatbotService"),     step("answer", "hit"),
                 step("fire", "sentiment=upset"),        step("discover", "skill=Complex_Problem_Solving"),
                 step("invoke", "chatDoctor"),           step("adaptation", "tag=adaptation"),
                 step("complete", "sentiment=satisfied")};
  CHECK(check_expectation(order, trace));
}

TEST_CASE("scenario 2: adaptation writes are tagged and stop further discovery") {
  const auto sc = shipped("scenario2_chat.scn");
  Simulation sim(sc);
  const auto& trace = sim.run();
  const auto& kb = sim.registry().kb();
  const auto qa = kb.match(Pattern{Variable{"qa"}, iri("answeredBy"), iri("David")});
  REQUIRE(qa.size() == 1);
  const Iri pair = std::get<Iri>(qa[0].at("qa"));
  CHECK(kb.contains({pair, iri("answersTopic"), iri("headache")}));
  for (const auto& [st, origin] : sim.provenance())
    if (st.subject == pair) {
      CHECK(origin.first == iri("Cathy"));
      CHECK(origin.second == "adaptation");
    }

  std::int64_t adapted_at = -1;
  for (const auto& t : trace.entries)
    if (t.action == "adaptation") adapted_at = t.time;
  REQUIRE(adapted_at >= 0);
  for (const auto& t : trace.with_action("discover")) CHECK(t.time < adapted_at);
  const auto later = std::count_if(trace.entries.begin(), trace.entries.end(), [&](const TraceEntry& t) {
    return t.time > adapted_at && t.action == "answer" && t.detail.find("hit " + pair.short_form()) != std::string::npos;
  });
  CHECK(later >= 1);
}

TEST_CASE("traces are byte-identical across runs") {
  for (const char* name : {"scenario2_chat.scn", "scenario1_ecg.scn"}) {
    const auto a = run_scenario(shipped(name)).str();
    const auto b = run_scenario(shipped(name)).str();
    CHECK(!a.empty());
    CHECK(a == b);
  }
}

TEST_CASE("causality: answers only cite knowledge written earlier") {
  const auto sc = shipped("scenario2_chat.scn");
  const auto trace = run_scenario(sc);
  std::set<std::string> known;
  for (const auto& st : sc.kb.match(Pattern{Variable{"qa"}, iri("answersTopic"), Variable{"t"}}))
    known.insert(std::get<Iri>(st.at("qa")).short_form());
  for (const auto& t : trace.entries) {
    if (t.action == "adaptation") known.insert(t.detail.substr(0, t.detail.find(' ')));
    if (t.action == "answer" && t.detail.find(" hit ") != std::string::npos) {
      const auto rest = t.detail.substr(t.detail.find(" hit ") + 5);
      CHECK_MESSAGE(known.count(rest.substr(0, rest.find(' '))), t.str());
    }
  }
  for (std::size_t i = 1; i < trace.entries.size(); ++i) CHECK(trace.entries[i - 1].time <= trace.entries[i].time);
}

TEST_CASE("scenario 1: discovery by skill and context, mutual ratings") {
  const auto sc = shipped("scenario1_ecg.scn");
  Simulation sim(sc);
  const auto& trace = sim.run();
  CHECK(std::all_of(sc.expectations.begin(), sc.expectations.end(),
                    [&](const Expectation& x) { return check_expectation(x, trace); }));
  const auto discoveries = trace.with_action("discover");
  REQUIRE(discoveries.size() == 1);
  const auto parts = split(discoveries[0].detail, " | ");
  CHECK(pattern_equivalent(parse_query(split(parts[1], " UNION ")[0]), parse_query(testing::kScenario1Query)));
  CHECK(parts[2] == "actuatingBySisy");

  const auto rates = trace.with_action("rate");
  REQUIRE(rates.size() == 2);
  CHECK(rates[0].detail.rfind("Sisy rates ecgReading of EcgDev", 0) == 0);
  CHECK(rates[1].detail.rfind("EcgDev rates actuatingBySisy of Sisy", 0) == 0);
  CHECK(sim.registry().ratings(iri("ecgReading")).size() == 1);
  CHECK(sim.registry().ratings(iri("actuatingBySisy")).size() == 1);
  CHECK(sim.registry().kb().contains({iri("Andy"), iri("monitoredBy"), iri("Sisy")}));
}

TEST_CASE("failures become trace entries") {
  const auto sc = load_scenario(mini_scenario("AT 1 REQUEST Adam noSuchService\n"), map_loader(kMiniFiles));
  const auto trace = run_scenario(sc);
  const auto errors = trace.with_action("error");
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].node == "Adam");
}

TEST_CASE("expectation matching") {
  ScenarioTrace t;
  t.entries = {{1, "A", "execute", "discover", "x | y | s1"}, {2, "A", "execute", "invoke", "s1 #1 running"}};
  Expectation c{Expectation::Kind::count, {{"discover", Expectation::Step::Match::any, ""}}, 1, ""};
  CHECK(check_expectation(c, t));
  c.count = 2;
  CHECK(!check_expectation(c, t));
  Expectation o{Expectation::Kind::order,
                {{"invoke", Expectation::Step::Match::any, ""}, {"discover", Expectation::Step::Match::any, ""}},
                0,
                ""};
  CHECK(!check_expectation(o, t));
  std::swap(o.steps[0], o.steps[1]);
  CHECK(check_expectation(o, t));
  o.steps[1] = {"invoke", Expectation::Step::Match::exact, "s1"};
  CHECK(!check_expectation(o, t));
}
