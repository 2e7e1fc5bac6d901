#pragma once
// Forward-chaining materialization, consistency checks and OntoClean
// validation over a KnowledgeBase.

#include <string>
#include <vector>

#include "hcps/kb.hpp"

namespace hcps {

struct DisjointnessViolation {
  Iri individual;
  Iri class_a;  // class_a < class_b
  Iri class_b;

  friend auto operator<=>(const DisjointnessViolation&, const DisjointnessViolation&) = default;
};

struct OntoCleanViolation {
  Iri child;
  Iri parent;
  std::string flag;  // the flag the child is missing: ~R ~U +I +U

  friend auto operator<=>(const OntoCleanViolation&, const OntoCleanViolation&) = default;
};

struct ConsistencyReport {
  std::vector<DisjointnessViolation> disjointness_violations;
  std::vector<Iri> unsatisfiable_classes;
  std::vector<OntoCleanViolation> ontoclean_violations;

  bool consistent() const {
    return disjointness_violations.empty() && unsatisfiable_classes.empty() && ontoclean_violations.empty();
  }
  // One `VIOLATION <kind> <subject> [<detail>...]` line per finding.
  std::string str() const;
};

// Least fixpoint of type inheritance, subclass transitivity and axiom
// application. The input is not modified.
[[nodiscard]] KnowledgeBase materialize(const KnowledgeBase& kb);

// Disjointness and unsatisfiable classes; materializes internally.
// ontoclean_violations is left empty.
ConsistencyReport check_consistency(const KnowledgeBase& kb);

// Applies the propagation rule to every subclass link of `kb` as given
// (pass the unmaterialized kb to check direct links only). Throws
// UnannotatedClass when a linked class has no record in `annotations`.
std::vector<OntoCleanViolation> check_ontoclean(const KnowledgeBase& kb,
                                                const std::vector<MetaAnnotation>& annotations);
// Uses the kb's own META records.
std::vector<OntoCleanViolation> check_ontoclean(const KnowledgeBase& kb);

std::string to_line(const OntoCleanViolation& v);
std::string to_line(const DisjointnessViolation& v);

}  // namespace hcps
