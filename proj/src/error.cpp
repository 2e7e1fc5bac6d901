#include "hcps/error.hpp"

namespace hcps {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::syntax: return "SyntaxError";
    case Errc::unknown_prefix: return "UnknownPrefix";
    case Errc::cyclic_subclass: return "CyclicSubclass";
    case Errc::conflicting_declaration: return "ConflictingDeclaration";
    case Errc::undeclared_term: return "UndeclaredTerm";
    case Errc::unbound_projection: return "UnboundProjection";
    case Errc::unbound_filter_var: return "UnboundFilterVar";
    case Errc::unannotated_class: return "UnannotatedClass";
    case Errc::duplicate_individual: return "DuplicateIndividual";
    case Errc::unknown_individual: return "UnknownIndividual";
    case Errc::unknown_taxonomy_term: return "UnknownTaxonomyTerm";
    case Errc::invalid_capability: return "InvalidCapability";
    case Errc::immutable_skill_set: return "ImmutableSkillSet";
    case Errc::unknown_provider: return "UnknownProvider";
    case Errc::invalid_profile: return "InvalidProfile";
    case Errc::no_completed_invocation: return "NoCompletedInvocation";
    case Errc::rating_out_of_range: return "RatingOutOfRange";
    case Errc::empty_criteria: return "EmptyCriteria";
    case Errc::unknown_service: return "UnknownService";
    case Errc::input_signature_mismatch: return "InputSignatureMismatch";
    case Errc::invalid_state: return "InvalidState";
    case Errc::empty_task_list: return "EmptyTaskList";
    case Errc::invalid_weights: return "InvalidWeights";
    case Errc::zero_relations: return "ZeroRelations";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::io: return "IoError";
  }
  return "Error";
}

}  // namespace hcps
