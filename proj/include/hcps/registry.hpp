#pragma once
// Published services: lifecycle, capacity counters, ratings and reputation,
// potential-service unlocking. The kb is the source of truth for every
// profile; counters are runtime state.

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "hcps/decimal.hpp"
#include "hcps/kb.hpp"
#include "hcps/schema.hpp"

namespace hcps {

enum class ServiceStatus { available, at_capacity, withdrawn };

const char* to_string(ServiceStatus status);

struct ServiceRecord {
  ServiceProfile profile;
  Iri provider;
  ServiceStatus status = ServiceStatus::available;
  std::int64_t active_invocations = 0;
};

// Writes the profile graph for `service` (no validation).
void write_profile(KnowledgeBase& kb, const Iri& provider, const ServiceProfile& profile);
// Rebuilds a profile from the kb. Throws UnknownService.
ServiceProfile read_profile(const KnowledgeBase& kb, const Iri& service);
// Services with a `presents` link, ascending.
std::vector<Iri> published_services(const KnowledgeBase& kb);

class Registry {
 public:
  // Adopts services already present in `kb`.
  explicit Registry(KnowledgeBase kb);

  const KnowledgeBase& kb() const { return kb_; }
  KnowledgeBase& kb() { return kb_; }

  // Throws UnknownProvider, InvalidProfile.
  Iri publish_service(const Iri& provider, const ServiceProfile& profile);
  void withdraw(const Iri& service);

  bool has_service(const Iri& service) const { return records_.count(service) != 0; }
  // Throws UnknownService.
  ServiceRecord record(const Iri& service) const;
  std::vector<Iri> services() const;

  // Capacity bookkeeping; try_acquire fails when the service is withdrawn or
  // already serving degree_of_parallelism requests.
  bool try_acquire(const Iri& service);
  void release(const Iri& service);

  void note_completed(const Iri& service, const Iri& consumer);
  std::int64_t completed_count(const Iri& service, const Iri& consumer) const;

  // Throws NoCompletedInvocation, RatingOutOfRange. Returns the new
  // reputation: mean of all ratings of the service, 2 decimals half-up.
  Rational record_experience(const Iri& service, const Iri& requester, const Rational& rating,
                             const std::map<std::string, Rational>& criteria = {}, std::int64_t timestamp = 0);
  std::vector<Rational> ratings(const Iri& service) const;
  Rational reputation(const Iri& service) const;

  // Publishes every potential service of `human` whose unlock rule is met.
  std::vector<Iri> unlock_potential(const Iri& human);

 private:
  void set_status(const Iri& service, ServiceStatus status);

  KnowledgeBase kb_;
  std::map<Iri, ServiceRecord> records_;
  std::map<std::pair<Iri, Iri>, std::int64_t> completed_;
  mutable std::mutex counters_;
};

}  // namespace hcps
