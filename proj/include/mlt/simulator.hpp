#ifndef MLT_SIMULATOR_HPP
#define MLT_SIMULATOR_HPP

#include "mlt/agents.hpp"
#include "mlt/session.hpp"
#include "mlt/trust.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mlt {

struct BystanderSpec {
    std::string id;
    ReporterProfile profile;
    ProbeSchedule schedule;
};

struct ConsumerSpec {
    std::string id;
    ReporterProfile profile;
    double usage_start = 0.0;  // offsets from session start, seconds
    double usage_end = 0.0;
    double sample_interval = 60.0;
};

/// Everything needed to replay one service session deterministically.
struct Scenario {
    ServiceSession session;
    ProviderProfile provider;
    std::vector<BystanderSpec> bystanders;
    std::vector<ConsumerSpec> consumers;
    AggregationParams params;
    double query_time = 0.0;  // offset at which the new consumer aggregates
    std::uint64_t seed = 0;
};

/// Every broken scenario invariant, one message per violation, each naming
/// the offending reporter or field. Empty means valid.
std::vector<std::string> scenario_violations(const Scenario& scenario);

/// Throws ValidationError carrying scenario_violations() when non-empty.
void validate(const Scenario& scenario);

enum class EventKind { probe, consumer_sample };

struct TraceEvent {
    double offset = 0.0;
    std::string reporter_id;
    EventKind kind = EventKind::probe;
    double measured = 0.0;     // trust computed from the reporter's own observation
    double reported = 0.0;     // after the reporter's behaviour model
    std::optional<double> accumulated;  // consumer running value after this sample
};

struct SessionTrace {
    double query_time = 0.0;
    std::vector<TraceEvent> events;  // sorted by (offset, reporter_id)
    std::vector<AccumulatedReport> consumer_reports;
    std::vector<InstantaneousReport> bystander_reports;
    TrustBreakdown final_breakdown;
    double ground_truth_trust = 0.0;  // trust of the noise-free performance at query_time
};

/// Runs probes and consumer sampling up to query_time, then aggregates.
/// Throws ValidationError for an invalid scenario and NoEvidenceError when
/// nobody has reported by query_time.
SessionTrace run_scenario(const Scenario& scenario);

/// Calls `body(i)` for i in [0, n) on up to `jobs` threads (0 = hardware
/// concurrency). Bodies must write only to their own index.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

/// n independent runs; replication i uses seed + i. Result order is by index.
std::vector<SessionTrace> run_replications(const Scenario& scenario, std::size_t n, unsigned jobs = 0);

std::string to_string(EventKind kind);

}  // namespace mlt

#endif  // MLT_SIMULATOR_HPP
