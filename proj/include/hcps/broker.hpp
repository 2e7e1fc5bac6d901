#pragma once
// Service broker: discovery requests compiled to queries, QoS ranking,
// guarded invocation with effects, and IO-chaining composition.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcps/decimal.hpp"
#include "hcps/kb.hpp"
#include "hcps/query.hpp"
#include "hcps/registry.hpp"
#include "hcps/schema.hpp"

namespace hcps {

enum class ProviderKind { any, human, machine };

const char* to_string(ProviderKind kind);

struct ScaledRequirement {
  Iri term;
  std::optional<int> min_scale;

  bool operator==(const ScaledRequirement&) const = default;
};

struct IoSignature {
  std::vector<Iri> inputs;   // types the consumer can supply
  std::vector<Iri> outputs;  // types the service must produce

  bool operator==(const IoSignature&) const = default;
};

struct QosConstraints {
  std::optional<Rational> max_cost;
  std::optional<Rational> max_response_time;
  std::optional<Rational> min_reputation;

  bool empty() const { return !max_cost && !max_response_time && !min_reputation; }
  bool operator==(const QosConstraints&) const = default;
};

struct DiscoveryRequest {
  std::vector<ScaledRequirement> required_skills;
  std::vector<Iri> required_knowledge;  // any of
  std::vector<ScaledRequirement> required_abilities;
  std::optional<ServiceKind> service_kind;
  std::vector<Iri> context;              // any of
  std::vector<Pattern> context_patterns;  // ?consumer ?provider ?service bound
  std::optional<IoSignature> io_signature;
  QosConstraints qos;
  ProviderKind provider_kind = ProviderKind::any;
  // Limitations are checked only for the parts of the situation given here.
  std::optional<Iri> consumer;
  std::optional<std::int64_t> now;

  bool has_criteria() const;
  bool operator==(const DiscoveryRequest&) const = default;
};

// DISCOVER skill=<iri>[:min] knowledge=<iri>,... ability=<iri>:<min> kind=<k>
//          context=<iri>,... where="<s> <p> <o>" inputs=<type>,... outputs=<type>,...
//          qos.max_cost=<d> qos.max_response_time=<d> qos.min_reputation=<d>
//          provider=any|human|machine consumer=<iri> at=<t>
DiscoveryRequest parse_request(const KnowledgeBase& kb, std::string_view text);
std::string format_request(const DiscoveryRequest& request);

struct BrokerPolicy {
  Rational w_reputation{1, 2};
  Rational w_cost{1, 4};
  Rational w_time{1, 4};
  Rational cost_max{100};
  Rational time_max{60};
};

Rational score(const Qos& qos, const BrokerPolicy& policy = {});

// One query per provider kind that can satisfy the request: human queries
// use hasHumanSkill / hasHumanKnowledge, machine queries the machine
// counterparts. Throws EmptyCriteria.
std::vector<QueryAst> compile(const DiscoveryRequest& request);
QueryAst compile(const DiscoveryRequest& request, ProviderKind which);

struct Candidate {
  Iri service;
  Rational score{0};
  Binding bindings;  // service, provider, capability

  bool operator==(const Candidate&) const = default;
};

using RankedCandidates = std::vector<Candidate>;

enum class InvocationState { pending, running, completed, failed, rejected };
enum class Outcome { success, failure };

const char* to_string(InvocationState state);

struct Invocation {
  std::int64_t id = 0;
  Iri service;
  Iri consumer;
  std::map<std::string, Term> inputs;
  InvocationState state = InvocationState::pending;
  std::string reason;  // rejected only
  Binding bindings;    // builtins, inputs and precondition variables
  std::vector<Statement> applied_effects;
  std::vector<Statement> retracted_effects;
  std::int64_t started_at = 0;
};

// Reason text for the first limitation of `service` that fails, empty when
// all hold. Kinds whose inputs are absent are not checked.
std::string limitation_failure(const KnowledgeBase& kb, const ServiceRecord& record,
                               const std::optional<Iri>& consumer, const std::optional<std::int64_t>& now);

class Broker {
 public:
  explicit Broker(Registry& registry, BrokerPolicy policy = {});

  Registry& registry() { return registry_; }
  const BrokerPolicy& policy() const { return policy_; }

  // Throws EmptyCriteria.
  RankedCandidates discover(const DiscoveryRequest& request) const;

  // Throws UnknownService, InputSignatureMismatch. Failed guards give a
  // rejected invocation, not an exception.
  Invocation invoke(const Iri& service, const Iri& consumer, const std::map<std::string, Term>& inputs,
                    std::int64_t now);
  // Throws InvalidState unless the invocation is running.
  Invocation complete_invocation(const Invocation& invocation, Outcome outcome,
                                 const std::optional<Rational>& rating = std::nullopt, std::int64_t now = 0);

  // Ordered services whose chained IO signatures turn `available` into every
  // type of `required`; nullopt when no plan exists.
  std::optional<std::vector<Iri>> compose(const std::vector<Iri>& available, const std::vector<Iri>& required) const;

  std::vector<Invocation> invocations() const;
  Invocation invocation(std::int64_t id) const;

 private:
  RankedCandidates discover_locked(const DiscoveryRequest& request) const;

  Registry& registry_;
  BrokerPolicy policy_;
  mutable std::mutex mu_;
  std::vector<Invocation> log_;
};

}  // namespace hcps
