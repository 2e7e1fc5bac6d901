#pragma once
// Scenario actors shared by the registry, broker and simulator tests.

#include <functional>

#include "doctest.h"
#include "hcps/error.hpp"
#include "hcps/reasoner.hpp"
#include "hcps/registry.hpp"
#include "hcps/schema.hpp"

namespace testing {

using namespace hcps;

inline Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an hcps::Error");
  return Errc::io;
}

inline const char* kScenario2Query =
    "SELECT ?service WHERE {\n"
    "  ?service soa-hitlcps:presents ?serviceprofile .\n"
    "  ?serviceprofile soa-hitlcps:hasProperty ?property .\n"
    "  ?property soa-hitlcps:includeCapability ?capability .\n"
    "  ?capability soa-hitlcps:hasHumanSkill ?skill .\n"
    "  ?capability soa-hitlcps:hasHumanKnowledge ?knowledge .\n"
    "  FILTER (?skill=soa-hitlcps:Complex_Problem_Solving && ?knowledge IN "
    "(soa-hitlcps:Medicine_and_Dentistry, soa-hitlcps:Therapy_and_Counseling))\n"
    "}";

inline const char* kScenario1Query =
    "SELECT ?service WHERE {\n"
    "  ?service soa-hitlcps:presents ?serviceprofile .\n"
    "  ?serviceprofile soa-hitlcps:hasProperty ?property .\n"
    "  ?property soa-hitlcps:includeCapability ?capability .\n"
    "  ?property soa-hitlcps:includeContext ?context .\n"
    "  ?capability soa-hitlcps:hasHumanSkill ?skill .\n"
    "  FILTER (?context=soa-hitlcps:siteA && ?skill=soa-hitlcps:Cardiac_output_CO_monitoring_units_or_accessories)\n"
    "}";

inline HumanCapability david_capability() {
  HumanCapability c;
  c.skills = {{iri("Complex_Problem_Solving"), 6}};
  c.knowledge = {iri("Medicine_and_Dentistry"), iri("Therapy_and_Counseling")};
  c.abilities = {{iri("Oral_Comprehension"), 5}};
  c.education = iri("Doctoral_Degree");
  return c;
}

inline HumanCapability sisy_capability() {
  HumanCapability c;
  c.skills = {{iri("Cardiac_output_CO_monitoring_units_or_accessories"), 5}, {iri("Monitoring"), 4}};
  c.knowledge = {iri("Medicine_and_Dentistry")};
  return c;
}

// Scenario-specific vocabulary lives in the scenario kb, not the base.
inline KnowledgeBase scenario_kb() {
  KnowledgeBase kb = base_ontology();
  parse_document_into(kb,
                      "CLASS Patient\n"
                      "CLASS Topic\n"
                      "PROPERTY advisedBy DOMAIN PhysicalThing RANGE PhysicalThing\n"
                      "PROPERTY monitoredBy DOMAIN PhysicalThing RANGE PhysicalThing\n"
                      "PROPERTY needsCare DOMAIN PhysicalThing RANGE Context\n"
                      "INDIVIDUAL headache TYPE Topic\n"
                      "INDIVIDUAL siteA TYPE Context\n"
                      "INDIVIDUAL siteB TYPE Context\n"
                      "FACT siteA coordX 0.0\n"
                      "FACT siteA coordY 0.0\n"
                      "FACT siteB coordX 300.0\n"
                      "FACT siteB coordY 400.0\n");
  return kb;
}

inline ServiceProfile chat_doctor_profile() {
  ServiceProfile p;
  p.service_id = iri("chatDoctor");
  p.service_type.kind = ServiceKind::processing;
  p.inputs = {{"patient", iri("Patient")}, {"topic", iri("Topic")}};
  p.outputs = {{"advice", iri("Knowledge")}};
  p.effects_add = {Pattern{Variable{"patient"}, iri("advisedBy"), Variable{"provider"}}};
  p.properties.qos = {Rational(45, 10), Rational(20), Rational(30)};
  return p;
}

inline ServiceProfile actuating_by_sisy_profile() {
  ServiceProfile p;
  p.service_id = iri("actuatingBySisy");
  p.service_type.kind = ServiceKind::actuating;
  p.inputs = {{"patient", iri("Patient")}};
  p.effects_add = {Pattern{Variable{"patient"}, iri("monitoredBy"), Variable{"provider"}}};
  p.properties.context = {iri("siteA")};
  p.properties.qos = {Rational(4), Rational(10), Rational(5)};
  return p;
}

// David (doctor), Sisy (nurse at siteA), Cathy (chatbot), EcgDev, Adam and
// Andy registered; chatDoctor and actuatingBySisy published.
inline KnowledgeBase scenario_world() {
  KnowledgeBase kb = scenario_kb();
  register_human(kb, iri("David"), david_capability(), {iri("siteB")});
  register_human(kb, iri("Sisy"), sisy_capability(), {iri("siteA")});
  MachineCapability cathy;
  cathy.software = {iri("chatEngine")};
  cathy.programmed_skills = {iri("Conversational_Response"), iri("Active_Listening")};
  register_machine(kb, iri("Cathy"), cathy, {iri("siteB")});
  MachineCapability ecg;
  ecg.hardware = {iri("ecgSensor")};
  ecg.programmed_skills = {iri("Monitoring")};
  register_machine(kb, iri("EcgDev"), ecg, {iri("siteA")});
  register_human(kb, iri("Adam"), {}, {iri("siteB")});
  register_human(kb, iri("Andy"), {}, {iri("siteA")});
  kb.insert(iri("Adam"), rdf_type(), iri("Patient"));
  kb.insert(iri("Andy"), rdf_type(), iri("Patient"));
  kb = materialize(kb);
  Registry reg(std::move(kb));
  reg.publish_service(iri("David"), chat_doctor_profile());
  reg.publish_service(iri("Sisy"), actuating_by_sisy_profile());
  reg.kb() = materialize(reg.kb());
  return reg.kb();
}

}  // namespace testing
