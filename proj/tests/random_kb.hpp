#pragma once
// Seeded random knowledge bases for oracle and property tests.

#include <random>
#include <string>
#include <vector>

#include "hcps/kb.hpp"

namespace hcps::testing {

struct RandomKbShape {
  int entities = 8;
  int predicates = 3;
  int classes = 3;
  int max_statements = 200;
};

inline std::vector<Iri> entity_pool(int n) {
  std::vector<Iri> out;
  for (int i = 0; i < n; ++i) out.push_back(iri("e" + std::to_string(i)));
  return out;
}

inline std::vector<Iri> predicate_pool(int n) {
  std::vector<Iri> out;
  for (int i = 0; i < n; ++i) out.push_back(iri("p" + std::to_string(i)));
  return out;
}

inline std::vector<Iri> class_pool(int n) {
  std::vector<Iri> out;
  for (int i = 0; i < n; ++i) out.push_back(iri("C" + std::to_string(i)));
  return out;
}

inline KnowledgeBase random_kb(std::mt19937& rng, const RandomKbShape& shape = {}) {
  KnowledgeBase kb;
  const auto entities = entity_pool(shape.entities);
  const auto predicates = predicate_pool(shape.predicates);
  const auto classes = class_pool(shape.classes);
  for (const auto& c : classes) kb.declare_class(c);
  for (const auto& p : predicates) kb.declare_property(p, classes[0], classes[0]);
  kb.declare_property(iri("score"), classes[0], Iri{"xsd", "integer"});

  std::uniform_int_distribution<int> count(0, shape.max_statements);
  std::uniform_int_distribution<int> ent(0, shape.entities - 1);
  std::uniform_int_distribution<int> pred(0, shape.predicates - 1);
  std::uniform_int_distribution<int> cls(0, shape.classes - 1);
  std::uniform_int_distribution<int> kind(0, 9);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int k = kind(rng);
    if (k < 2) {
      kb.insert(entities[ent(rng)], rdf_type(), classes[cls(rng)]);
    } else if (k == 2) {
      kb.insert(entities[ent(rng)], iri("score"), Literal::integer(ent(rng)));
    } else {
      kb.insert(entities[ent(rng)], predicates[pred(rng)], entities[ent(rng)]);
    }
  }
  return kb;
}

}  // namespace hcps::testing
