#ifndef MLT_AGENTS_HPP
#define MLT_AGENTS_HPP

#include "mlt/session.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mlt {

/// Per-agent random stream. mt19937_64 gives the same sequence on every
/// platform for a given seed.
using Rng = std::mt19937_64;

/// Derives an independent stream from a master seed and a stream label.
Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index, std::uint64_t salt = 0);

enum class JitterModel { gaussian, uniform };

/// Ground-truth generator for one attribute.
struct AttributeGenerator {
    double mean = 0.0;
    double jitter_stddev = 0.0;
    double drift_per_hour = 0.0;  // signed, attribute units per hour
};

struct ProviderProfile {
    std::vector<AttributeGenerator> performance;  // one per schema attribute
    double honesty_gap = 0.0;  // promise overstates the true mean by this fraction
    JitterModel jitter = JitterModel::gaussian;

    /// Throws InvalidArgument when the generator count does not match the
    /// schema, a stddev or gap is negative, or a mean is not finite.
    void validate(const AttributeSchema& schema) const;
};

/// Noise-free performance at `offset` seconds: drifting mean with the gap
/// applied, clamped to the attribute range (ordinals rounded to a level).
PerformanceVector expected_performance(const ProviderProfile& profile, const SchemaPtr& schema,
                                       double offset);

/// One jittered draw of the provider's true performance at `offset`.
PerformanceVector sample_true_performance(const ProviderProfile& profile, const SchemaPtr& schema,
                                          double offset, Rng& rng);

enum class ReporterKind { honest, biased, malicious };
enum class MaliciousStrategy { random, inverted };

struct ReporterProfile {
    ReporterKind kind = ReporterKind::honest;
    double bias_offset = 0.0;                                   // biased only
    MaliciousStrategy malicious_strategy = MaliciousStrategy::random;  // malicious only

    static ReporterProfile honest() { return {}; }
    static ReporterProfile biased(double offset) { return {ReporterKind::biased, offset, {}}; }
    static ReporterProfile malicious(MaliciousStrategy s) { return {ReporterKind::malicious, 0.0, s}; }

    void validate() const;
};

/// Turns the trust a reporter actually measured into the trust it reports.
/// Only malicious-random consumes randomness.
double observe(const ReporterProfile& profile, double true_trust, Rng& rng);

struct ProbeSchedule {
    double first_offset = 0.0;  // seconds from session start
    double interval = 0.0;
    int count = 1;

    double last_offset() const { return first_offset + (count - 1) * interval; }
    /// Empty when the schedule fits inside a session of `session_duration` seconds.
    std::vector<std::string> violations(double session_duration) const;
};

std::string to_string(ReporterKind kind);
std::string to_string(MaliciousStrategy strategy);
std::string to_string(JitterModel model);

}  // namespace mlt

#endif  // MLT_AGENTS_HPP
