#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "hcps/broker.hpp"
#include "hcps/query.hpp"

using namespace hcps;
using testing::code_of;

namespace {

DiscoveryRequest scenario2_request() {
  DiscoveryRequest r;
  r.required_skills = {{iri("Complex_Problem_Solving"), std::nullopt}};
  r.required_knowledge = {iri("Medicine_and_Dentistry"), iri("Therapy_and_Counseling")};
  return r;
}

DiscoveryRequest scenario1_request() {
  DiscoveryRequest r;
  r.required_skills = {{iri("Cardiac_output_CO_monitoring_units_or_accessories"), std::nullopt}};
  r.context = {iri("siteA")};
  return r;
}

std::vector<Iri> services_in(const RankedCandidates& c) {
  std::vector<Iri> out;
  for (const auto& x : c) out.push_back(x.service);
  return out;
}

ServiceProfile io_profile(const std::string& id, std::vector<std::string> in, std::vector<std::string> out) {
  ServiceProfile p;
  p.service_id = iri(id);
  p.service_type.kind = ServiceKind::processing;
  for (const auto& t : in) p.inputs.push_back({"i_" + t, iri(t)});
  for (const auto& t : out) p.outputs.push_back({"o_" + t, iri(t)});
  return p;
}

KnowledgeBase io_world(const std::vector<std::string>& types) {
  KnowledgeBase kb = testing::scenario_kb();
  for (const auto& t : types) kb.declare_class(iri(t));
  MachineCapability m;
  register_machine(kb, iri("M"), m, {});
  return kb;
}

}  // namespace

TEST_CASE("compiled requests match the reference discovery queries") {
  const auto q2 = compile(scenario2_request(), ProviderKind::human);
  CHECK(pattern_equivalent(q2, parse_query(testing::kScenario2Query)));
  CHECK(q2 == parse_query(print_query(q2)));
  const auto q1 = compile(scenario1_request(), ProviderKind::human);
  CHECK(pattern_equivalent(q1, parse_query(testing::kScenario1Query)));
  CHECK_FALSE(pattern_equivalent(q1, q2));

  auto human_only = scenario2_request();
  human_only.provider_kind = ProviderKind::human;
  REQUIRE(compile(human_only).size() == 1);
  CHECK(compile(scenario2_request()).size() == 2);
  const auto machine = compile(scenario2_request(), ProviderKind::machine);
  CHECK(print_query(machine).find("hasMachineSkill") != std::string::npos);

  CHECK(code_of([] { compile(DiscoveryRequest{}); }) == Errc::empty_criteria);
}

TEST_CASE("discovery on the scenario world") {
  Registry reg(testing::scenario_world());
  Broker broker(reg);
  const auto r2 = broker.discover(scenario2_request());
  CHECK(services_in(r2) == std::vector<Iri>{iri("chatDoctor")});
  CHECK(r2[0].bindings.at("provider") == Term{iri("David")});
  CHECK(r2[0].score == Rational(31, 40));  // 0.5*0.9 + 0.25*0.8 + 0.25*0.5
  CHECK(services_in(broker.discover(scenario1_request())) == std::vector<Iri>{iri("actuatingBySisy")});

  DiscoveryRequest none;
  none.required_skills = {{iri("Biology"), std::nullopt}};
  CHECK(broker.discover(none).empty());
  CHECK(code_of([&] { broker.discover(DiscoveryRequest{}); }) == Errc::empty_criteria);

  auto high = scenario2_request();
  high.required_skills[0].min_scale = 7;
  CHECK(broker.discover(high).empty());
  high.required_skills[0].min_scale = 6;
  CHECK(broker.discover(high).size() == 1);

  auto cheap = scenario2_request();
  cheap.qos.max_cost = Rational(10);
  CHECK(broker.discover(cheap).empty());

  DiscoveryRequest by_kind;
  by_kind.service_kind = ServiceKind::actuating;
  CHECK(services_in(broker.discover(by_kind)) == std::vector<Iri>{iri("actuatingBySisy")});
  by_kind.provider_kind = ProviderKind::machine;
  CHECK(broker.discover(by_kind).empty());

  DiscoveryRequest by_io;
  by_io.io_signature = IoSignature{{iri("Patient"), iri("Topic")}, {iri("Knowledge")}};
  CHECK(services_in(broker.discover(by_io)) == std::vector<Iri>{iri("chatDoctor")});
  by_io.io_signature->inputs = {iri("Patient")};
  CHECK(broker.discover(by_io).empty());

  DiscoveryRequest by_pattern;
  by_pattern.context_patterns = {Pattern{Variable{"provider"}, iri("hasContext"), iri("siteA")}};
  CHECK(services_in(broker.discover(by_pattern)) == std::vector<Iri>{iri("actuatingBySisy")});

  DiscoveryRequest by_ability;
  by_ability.required_abilities = {{iri("Oral_Comprehension"), 5}};
  CHECK(services_in(broker.discover(by_ability)) == std::vector<Iri>{iri("chatDoctor")});
  by_ability.required_abilities[0].min_scale = 6;
  CHECK(broker.discover(by_ability).empty());

  reg.withdraw(iri("chatDoctor"));
  CHECK(broker.discover(scenario2_request()).empty());
}

TEST_CASE("discovery honours limitations for the given situation") {
  KnowledgeBase world = testing::scenario_world();
  Registry reg(std::move(world));
  auto p = testing::chat_doctor_profile();
  p.service_id = iri("nightDoctor");
  p.limitations = {Limitation::window(20, 30), Limitation::distance(Rational(500), iri("siteA"))};
  reg.publish_service(iri("David"), p);
  Broker broker(reg);
  auto r = scenario2_request();
  CHECK(broker.discover(r).size() == 2);
  r.now = 10;
  CHECK(services_in(broker.discover(r)) == std::vector<Iri>{iri("chatDoctor")});
  r.now = 25;
  r.consumer = iri("Adam");  // siteB is exactly 500 from siteA
  CHECK(broker.discover(r).size() == 2);
  reg.kb().erase({iri("siteB"), iri("coordY"), Literal::decimal("400.0")});
  reg.kb().insert(iri("siteB"), iri("coordY"), Literal::decimal("400.5"));
  CHECK(services_in(broker.discover(r)) == std::vector<Iri>{iri("chatDoctor")});
}

TEST_CASE("request text form") {
  const auto kb = testing::scenario_kb();
  const auto r = parse_request(kb,
                               "DISCOVER skill=soa-hitlcps:Complex_Problem_Solving:4 "
                               "knowledge=Medicine_and_Dentistry,soa-hitlcps:Therapy_and_Counseling context=siteA "
                               "qos.min_reputation=3.5 provider=human at=12 where=\"?provider hasContext siteB\"");
  REQUIRE(r.required_skills.size() == 1);
  CHECK(r.required_skills[0].min_scale == 4);
  CHECK(r.required_knowledge.size() == 2);
  CHECK(r.qos.min_reputation == Rational(7, 2));
  CHECK(r.provider_kind == ProviderKind::human);
  CHECK(r.now == 12);
  CHECK(r.context_patterns.size() == 1);
  CHECK(parse_request(kb, format_request(r)) == r);
  CHECK(parse_request(kb, "skill=Monitoring").required_skills[0].min_scale == std::nullopt);

  auto full = scenario1_request();
  full.required_abilities = {{iri("Oral_Comprehension"), 3}};
  full.service_kind = ServiceKind::sensing;
  full.io_signature = IoSignature{{iri("Patient")}, {iri("Knowledge")}};
  full.qos.max_cost = Rational(5, 2);
  full.qos.max_response_time = Rational(10);
  full.consumer = iri("Adam");
  CHECK(parse_request(kb, format_request(full)) == full);

  for (const char* bad : {"DISCOVER skill", "color=red", "kind=flying", "provider=robot", "qos.max_cost=cheap",
                          "ability=Oral_Comprehension", "at=-1", "where=\"?a b\""}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_request(kb, bad); }) == Errc::syntax);
  }
  CHECK(code_of([&] { parse_request(kb, "skill=nope:Thing"); }) == Errc::unknown_prefix);
}

TEST_CASE("score function and ranking") {
  CHECK(score(Qos{Rational(5), Rational(0), Rational(0)}) == Rational(1));
  CHECK(score(Qos{Rational(0), Rational(100), Rational(60)}) == Rational(0));
  CHECK(score(Qos{Rational(0), Rational(1000), Rational(600)}) == Rational(0));
  BrokerPolicy pol;
  pol.w_reputation = 1;
  pol.w_cost = 0;
  pol.w_time = 0;
  CHECK(score(Qos{Rational(4), Rational(0), Rational(0)}, pol) == Rational(4, 5));

  KnowledgeBase kb = testing::scenario_kb();
  register_human(kb, iri("David"), testing::david_capability(), {});
  Registry reg(std::move(kb));
  for (const char* id : {"c", "a", "b"}) {
    auto p = testing::chat_doctor_profile();
    p.service_id = iri(id);
    p.properties.qos = {Rational(3), Rational(50), Rational(30)};
    reg.publish_service(iri("David"), p);
  }
  auto best = testing::chat_doctor_profile();
  best.service_id = iri("z");
  best.properties.qos = {Rational(5), Rational(0), Rational(0)};
  reg.publish_service(iri("David"), best);
  Broker broker(reg);
  CHECK(services_in(broker.discover(scenario2_request())) == std::vector<Iri>{iri("z"), iri("a"), iri("b"), iri("c")});
}

TEST_CASE("raising reputation never lowers rank") {
  std::mt19937 rng(5);
  for (int round = 0; round < 60; ++round) {
    KnowledgeBase kb = testing::scenario_kb();
    register_human(kb, iri("David"), testing::david_capability(), {});
    Registry reg(std::move(kb));
    const int n = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      auto p = testing::chat_doctor_profile();
      p.service_id = iri("s" + std::to_string(i));
      p.properties.qos = {Rational(static_cast<std::int64_t>(rng() % 6)), Rational(static_cast<std::int64_t>(rng() % 120)),
                          Rational(static_cast<std::int64_t>(rng() % 70))};
      reg.publish_service(iri("David"), p);
    }
    Broker broker(reg);
    const Iri target = iri("s" + std::to_string(rng() % n));
    auto rank_of = [&] {
      const auto ranked = services_in(broker.discover(scenario2_request()));
      return std::find(ranked.begin(), ranked.end(), target) - ranked.begin();
    };
    const auto before = rank_of();
    reg.note_completed(target, iri("Adam"));
    reg.record_experience(target, iri("Adam"), Rational(5));
    CHECK(rank_of() <= before);
  }
}

TEST_CASE("discovery is sound and complete against a direct oracle") {
  const std::vector<Iri> skills = {iri("Complex_Problem_Solving"), iri("Monitoring"), iri("Active_Listening")};
  const std::vector<Iri> knowledge = {iri("Medicine_and_Dentistry"), iri("Biology"), iri("Psychology")};
  const std::vector<Iri> sites = {iri("siteA"), iri("siteB")};
  std::mt19937 rng(21);
  std::size_t nonempty = 0;
  for (int round = 0; round < 120; ++round) {
    KnowledgeBase kb = testing::scenario_kb();
    struct Provider {
      Iri name;
      bool machine;
      std::map<Iri, int> skills;
      std::set<Iri> knowledge;
    };
    std::vector<Provider> providers;
    for (int i = 0; i < 4; ++i) {
      Provider pv{iri("P" + std::to_string(i)), rng() % 3 == 0, {}, {}};
      for (const auto& s : skills)
        if (rng() % 2) pv.skills[s] = pv.machine ? 0 : static_cast<int>(1 + rng() % 7);
      for (const auto& k : knowledge)
        if (rng() % 2) pv.knowledge.insert(k);
      if (pv.machine) {
        MachineCapability m;
        for (const auto& [s, lvl] : pv.skills) m.programmed_skills.push_back(s);
        m.learned_knowledge.assign(pv.knowledge.begin(), pv.knowledge.end());
        register_machine(kb, pv.name, m, {});
      } else {
        HumanCapability h;
        for (const auto& [s, lvl] : pv.skills) h.skills.push_back({s, lvl});
        h.knowledge.assign(pv.knowledge.begin(), pv.knowledge.end());
        register_human(kb, pv.name, h, {});
      }
      providers.push_back(pv);
    }
    Registry reg(std::move(kb));
    struct Published {
      Provider* provider;
      ServiceProfile profile;
      bool withdrawn;
    };
    std::vector<Published> published;
    for (int i = 0; i < 6; ++i) {
      ServiceProfile p;
      p.service_id = iri("svc" + std::to_string(i));
      p.service_type.kind = static_cast<ServiceKind>(rng() % 4);
      for (const auto& s : sites)
        if (rng() % 2) p.properties.context.push_back(s);
      p.properties.qos = {Rational(static_cast<std::int64_t>(rng() % 6)), Rational(static_cast<std::int64_t>(rng() % 50)),
                          Rational(static_cast<std::int64_t>(rng() % 20))};
      Provider& pv = providers[rng() % providers.size()];
      reg.publish_service(pv.name, p);
      const bool withdrawn = rng() % 6 == 0;
      if (withdrawn) reg.withdraw(p.service_id);
      published.push_back({&pv, p, withdrawn});
    }
    Broker broker(reg);

    DiscoveryRequest r;
    if (rng() % 2) r.required_skills.push_back({skills[rng() % 3], rng() % 2 ? std::optional<int>(1 + rng() % 7) : std::nullopt});
    if (rng() % 2) r.required_knowledge = {knowledge[rng() % 3]};
    if (rng() % 3 == 0) r.required_knowledge.push_back(knowledge[rng() % 3]);
    if (rng() % 2) r.context = {sites[rng() % 2]};
    if (rng() % 3 == 0) r.service_kind = static_cast<ServiceKind>(rng() % 4);
    if (rng() % 3 == 0) r.qos.max_cost = Rational(static_cast<std::int64_t>(rng() % 50));
    if (rng() % 4 == 0) r.qos.min_reputation = Rational(static_cast<std::int64_t>(rng() % 6));
    r.provider_kind = static_cast<ProviderKind>(rng() % 3);
    if (!r.has_criteria()) r.context = {sites[0]};

    std::vector<std::pair<Rational, Iri>> expected;
    for (const auto& pub : published) {
      const Provider& pv = *pub.provider;
      bool ok = !pub.withdrawn;
      if (r.provider_kind == ProviderKind::human) ok = ok && !pv.machine;
      if (r.provider_kind == ProviderKind::machine) ok = ok && pv.machine;
      for (const auto& s : r.required_skills) {
        auto it = pv.skills.find(s.term);
        ok = ok && it != pv.skills.end() && (!s.min_scale || (!pv.machine && it->second >= *s.min_scale));
      }
      if (!r.required_knowledge.empty())
        ok = ok && std::any_of(r.required_knowledge.begin(), r.required_knowledge.end(),
                               [&](const Iri& k) { return pv.knowledge.count(k) != 0; });
      const auto& ctx = pub.profile.properties.context;
      if (!r.context.empty()) ok = ok && std::find(ctx.begin(), ctx.end(), r.context[0]) != ctx.end();
      if (r.service_kind) ok = ok && pub.profile.service_type.kind == *r.service_kind;
      const auto& q = pub.profile.properties.qos;
      if (r.qos.max_cost) ok = ok && q.cost <= *r.qos.max_cost;
      if (r.qos.min_reputation) ok = ok && q.reputation >= *r.qos.min_reputation;
      if (!ok) continue;
      const Rational s = Rational(1, 2) * q.reputation / 5 + Rational(1, 4) * (1 - q.cost / 100) +
                         Rational(1, 4) * (1 - q.response_time / 60);
      expected.emplace_back(-s, pub.profile.service_id);
    }
    std::sort(expected.begin(), expected.end());
    std::vector<Iri> want;
    for (const auto& e : expected) want.push_back(e.second);
    CAPTURE(format_request(r));
    const auto got = broker.discover(r);
    CHECK(services_in(got) == want);
    for (std::size_t i = 0; i < got.size() && i < expected.size(); ++i) CHECK(got[i].score == -expected[i].first);
    if (!want.empty()) ++nonempty;
    CHECK(services_in(broker.discover(r)) == services_in(got));
  }
  CHECK(nonempty > 30);
}

TEST_CASE("invocation lifecycle") {
  Registry reg(testing::scenario_world());
  Broker broker(reg);
  const std::map<std::string, Term> inputs{{"patient", iri("Adam")}, {"topic", iri("headache")}};
  auto inv = broker.invoke(iri("chatDoctor"), iri("Cathy"), inputs, 1);
  CHECK(inv.state == InvocationState::running);
  CHECK(reg.record(iri("chatDoctor")).active_invocations == 1);
  CHECK(reg.record(iri("chatDoctor")).status == ServiceStatus::at_capacity);

  const auto second = broker.invoke(iri("chatDoctor"), iri("Cathy"), inputs, 1);
  CHECK(second.state == InvocationState::rejected);
  CHECK(second.reason == "at_capacity");
  CHECK(broker.discover(scenario2_request()).empty());

  const Statement advised{iri("Adam"), iri("advisedBy"), iri("David")};
  CHECK_FALSE(reg.kb().contains(advised));
  inv = broker.complete_invocation(inv, Outcome::success, Rational(5), 2);
  CHECK(inv.state == InvocationState::completed);
  CHECK(reg.kb().contains(advised));
  CHECK(inv.applied_effects == std::vector<Statement>{advised});
  CHECK(reg.reputation(iri("chatDoctor")) == Rational(5));
  CHECK(reg.record(iri("chatDoctor")).active_invocations == 0);
  CHECK(code_of([&] { broker.complete_invocation(inv, Outcome::success); }) == Errc::invalid_state);
  CHECK(code_of([&] { broker.complete_invocation(second, Outcome::success); }) == Errc::invalid_state);

  auto failing = broker.invoke(iri("chatDoctor"), iri("Cathy"), {{"patient", iri("Andy")}, {"topic", iri("headache")}}, 3);
  REQUIRE(failing.state == InvocationState::running);
  failing = broker.complete_invocation(failing, Outcome::failure, Rational(1));
  CHECK(failing.state == InvocationState::failed);
  CHECK_FALSE(reg.kb().contains({iri("Andy"), iri("advisedBy"), iri("David")}));
  CHECK(reg.record(iri("chatDoctor")).active_invocations == 0);
  CHECK(reg.ratings(iri("chatDoctor")).size() == 1);
  CHECK(broker.invocations().size() == 3);
  CHECK(broker.invocation(2).state == InvocationState::rejected);
}

TEST_CASE("invocation input checks") {
  Registry reg(testing::scenario_world());
  Broker broker(reg);
  CHECK(code_of([&] { broker.invoke(iri("ghost"), iri("Cathy"), {}, 0); }) == Errc::unknown_service);
  CHECK(code_of([&] { broker.invoke(iri("chatDoctor"), iri("Cathy"), {{"patient", iri("Adam")}}, 0); }) ==
        Errc::input_signature_mismatch);
  CHECK(code_of([&] {
          broker.invoke(iri("chatDoctor"), iri("Cathy"), {{"patient", iri("David")}, {"topic", iri("headache")}}, 0);
        }) == Errc::input_signature_mismatch);
  CHECK(code_of([&] {
          broker.invoke(iri("chatDoctor"), iri("Cathy"),
                        {{"patient", iri("Adam")}, {"topic", iri("headache")}, {"extra", Literal::integer(1)}}, 0);
        }) == Errc::input_signature_mismatch);
  CHECK(code_of([&] {
          broker.invoke(iri("chatDoctor"), iri("Cathy"), {{"patient", Literal::string("Adam")}, {"topic", iri("headache")}}, 0);
        }) == Errc::input_signature_mismatch);
  CHECK(broker.invocations().empty());
}

TEST_CASE("preconditions, limitations and remove effects") {
  KnowledgeBase world = testing::scenario_world();
  world.insert(iri("Andy"), iri("needsCare"), iri("siteA"));
  Registry reg(std::move(world));
  ServiceProfile p;
  p.service_id = iri("careRound");
  p.service_type.kind = ServiceKind::actuating;
  p.inputs = {{"patient", iri("Patient")}};
  p.preconditions = {Pattern{Variable{"patient"}, iri("needsCare"), Variable{"where"}},
                     Pattern{Variable{"provider"}, iri("hasContext"), Variable{"where"}}};
  p.effects_add = {Pattern{Variable{"patient"}, iri("monitoredBy"), Variable{"provider"}}};
  p.effects_remove = {Pattern{Variable{"patient"}, iri("needsCare"), Variable{"where"}}};
  p.limitations = {Limitation::window(0, 10), Limitation::location(iri("siteA"))};
  p.degree_of_parallelism = 4;
  reg.publish_service(iri("Sisy"), p);
  Broker broker(reg);

  auto late = broker.invoke(iri("careRound"), iri("EcgDev"), {{"patient", iri("Andy")}}, 11);
  CHECK(late.state == InvocationState::rejected);
  CHECK(late.reason.rfind("limitation", 0) == 0);
  auto far = broker.invoke(iri("careRound"), iri("Cathy"), {{"patient", iri("Andy")}}, 5);
  CHECK(far.state == InvocationState::rejected);
  CHECK(far.reason.rfind("limitation", 0) == 0);
  auto nothing_to_do = broker.invoke(iri("careRound"), iri("EcgDev"), {{"patient", iri("Adam")}}, 5);
  CHECK(nothing_to_do.state == InvocationState::rejected);
  CHECK(nothing_to_do.reason.rfind("precondition", 0) == 0);

  auto ok = broker.invoke(iri("careRound"), iri("EcgDev"), {{"patient", iri("Andy")}}, 5);
  REQUIRE(ok.state == InvocationState::running);
  CHECK(ok.bindings.at("where") == Term{iri("siteA")});
  ok = broker.complete_invocation(ok, Outcome::success);
  CHECK_FALSE(reg.kb().contains({iri("Andy"), iri("needsCare"), iri("siteA")}));
  CHECK(reg.kb().contains({iri("Andy"), iri("monitoredBy"), iri("Sisy")}));
  CHECK(ok.retracted_effects.size() == 1);
  CHECK(reg.completed_count(iri("careRound"), iri("EcgDev")) == 1);
  CHECK(reg.record(iri("careRound")).active_invocations == 0);
}

TEST_CASE("invocation counters are conserved under concurrency") {
  Registry reg(testing::scenario_world());
  auto p = testing::chat_doctor_profile();
  p.service_id = iri("pool");
  p.degree_of_parallelism = 3;
  reg.publish_service(iri("David"), p);
  Broker broker(reg);
  std::atomic<int> calls{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&, t] {
      std::mt19937 rng(static_cast<unsigned>(t));
      std::vector<Invocation> mine;
      for (int i = 0; i < 200; ++i) {
        if (!mine.empty() && rng() % 2) {
          broker.complete_invocation(mine.back(), rng() % 3 ? Outcome::success : Outcome::failure);
          mine.pop_back();
          continue;
        }
        ++calls;
        auto inv = broker.invoke(iri("pool"), iri("Cathy"), {{"patient", iri("Adam")}, {"topic", iri("headache")}}, i);
        if (inv.state == InvocationState::running) mine.push_back(inv);
        CHECK(reg.record(iri("pool")).active_invocations <= 3);
      }
      for (std::size_t i = 0; i < mine.size() / 2; ++i) broker.complete_invocation(mine[i], Outcome::success);
    });
  }
  for (auto& th : threads) th.join();
  const auto all = broker.invocations();
  CHECK(static_cast<int>(all.size()) == calls.load());
  const auto running = std::count_if(all.begin(), all.end(), [](const Invocation& i) { return i.state == InvocationState::running; });
  CHECK(reg.record(iri("pool")).active_invocations == running);
  CHECK(std::count_if(all.begin(), all.end(), [](const Invocation& i) { return i.state == InvocationState::rejected; }) > 0);
}

TEST_CASE("composition examples") {
  Registry reg(io_world({"x", "y", "z", "w"}));
  reg.publish_service(iri("M"), io_profile("A", {"x"}, {"y"}));
  reg.publish_service(iri("M"), io_profile("B", {"y"}, {"z"}));
  reg.publish_service(iri("M"), io_profile("Noise", {"x"}, {"w"}));
  Broker broker(reg);
  CHECK(broker.compose({iri("x")}, {iri("x")}) == std::vector<Iri>{});
  CHECK(broker.compose({iri("x")}, {iri("z")}) == std::vector<Iri>{iri("A"), iri("B")});
  CHECK(broker.compose({iri("y")}, {iri("z")}) == std::vector<Iri>{iri("B")});
  CHECK(broker.compose({iri("w")}, {iri("z")}) == std::nullopt);
  CHECK(broker.compose({iri("x")}, {iri("Topic")}) == std::nullopt);
  reg.withdraw(iri("B"));
  CHECK(broker.compose({iri("x")}, {iri("z")}) == std::nullopt);
}

TEST_CASE("composition plans replay against a random service pool") {
  std::vector<std::string> types;
  for (int i = 0; i < 7; ++i) types.push_back("t" + std::to_string(i));
  std::mt19937 rng(3);
  int plans = 0;
  int no_plans = 0;
  for (int round = 0; round < 300; ++round) {
    Registry reg(io_world(types));
    struct Sig {
      std::set<Iri> in, out;
    };
    std::map<Iri, Sig> sigs;
    const int n = 1 + static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> in, out;
      for (const auto& t : types) {
        if (rng() % 5 == 0) in.push_back(t);
        if (rng() % 4 == 0) out.push_back(t);
      }
      auto prof = io_profile("s" + std::to_string(i), in, out);
      reg.publish_service(iri("M"), prof);
      Sig s;
      for (const auto& t : in) s.in.insert(iri(t));
      for (const auto& t : out) s.out.insert(iri(t));
      sigs[prof.service_id] = s;
    }
    std::vector<Iri> available, required;
    for (const auto& t : types) {
      if (rng() % 4 == 0) available.push_back(iri(t));
      else if (rng() % 4 == 0) required.push_back(iri(t));
    }
    Broker broker(reg);
    const auto plan = broker.compose(available, required);

    // naive reachability over all services, ignoring order
    std::set<Iri> reach(available.begin(), available.end());
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& [svc, s] : sigs)
        if (std::includes(reach.begin(), reach.end(), s.in.begin(), s.in.end()))
          for (const auto& t : s.out) grew = reach.insert(t).second || grew;
    }
    const bool reachable = std::all_of(required.begin(), required.end(), [&](const Iri& t) { return reach.count(t); });
    CHECK(plan.has_value() == reachable);
    if (!plan) {
      ++no_plans;
      continue;
    }
    ++plans;
    std::set<Iri> have(available.begin(), available.end());
    std::set<Iri> seen;
    for (const auto& svc : *plan) {
      CHECK(seen.insert(svc).second);
      const auto& s = sigs.at(svc);
      CHECK(std::includes(have.begin(), have.end(), s.in.begin(), s.in.end()));
      have.insert(s.out.begin(), s.out.end());
    }
    CHECK(std::all_of(required.begin(), required.end(), [&](const Iri& t) { return have.count(t); }));
    CHECK(broker.compose(available, required) == plan);
  }
  CHECK(plans > 50);
  CHECK(no_plans > 20);
}
