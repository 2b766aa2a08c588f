#include "mlt/agents.hpp"

#include "mlt/detail/format.hpp"
#include "mlt/error.hpp"

#include <algorithm>
#include <cmath>

namespace mlt {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

double clamp_to_attribute(const AttributeSpec& attr, double v) {
    if (attr.kind == AttributeKind::ordinal) {
        return std::clamp(std::round(v), static_cast<double>(attr.ordinal_base), attr.ordinal_max());
    }
    return std::max(0.0, v);
}

double drifting_mean(const AttributeGenerator& gen, double gap, double offset) {
    return gen.mean * (1.0 - gap) + gen.drift_per_hour * (offset / 3600.0);
}

std::string seconds(double v) { return detail::format_number(v) + " s"; }

}  // namespace

Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index, std::uint64_t salt) {
    std::seed_seq seq{lo32(master_seed), hi32(master_seed), lo32(stream_index),
                      hi32(stream_index), lo32(salt),        hi32(salt)};
    return Rng(seq);
}

void ProviderProfile::validate(const AttributeSchema& schema) const {
    if (performance.size() != schema.size()) {
        throw InvalidArgument("provider declares " + std::to_string(performance.size()) +
                              " performance generators for " + std::to_string(schema.size()) +
                              " attributes");
    }
    if (!(honesty_gap >= 0.0) || honesty_gap > 1.0) {
        throw InvalidArgument("provider honesty_gap must lie in [0, 1]");
    }
    for (std::size_t i = 0; i < performance.size(); ++i) {
        const auto& gen = performance[i];
        const auto& name = schema[i].name;
        if (!std::isfinite(gen.mean) || gen.mean < 0.0) {
            throw InvalidArgument("performance mean for '" + name + "' must be finite and >= 0");
        }
        if (!(gen.jitter_stddev >= 0.0) || !std::isfinite(gen.jitter_stddev)) {
            throw InvalidArgument("jitter_stddev for '" + name + "' must be >= 0");
        }
        if (!std::isfinite(gen.drift_per_hour)) {
            throw InvalidArgument("drift_per_hour for '" + name + "' must be finite");
        }
    }
}

PerformanceVector expected_performance(const ProviderProfile& profile, const SchemaPtr& schema,
                                       double offset) {
    Eigen::VectorXd values(static_cast<Eigen::Index>(schema->size()));
    for (std::size_t i = 0; i < schema->size(); ++i) {
        const double m = drifting_mean(profile.performance[i], profile.honesty_gap, offset);
        values(static_cast<Eigen::Index>(i)) = clamp_to_attribute((*schema)[i], m);
    }
    return PerformanceVector(schema, std::move(values));
}

PerformanceVector sample_true_performance(const ProviderProfile& profile, const SchemaPtr& schema,
                                          double offset, Rng& rng) {
    Eigen::VectorXd values(static_cast<Eigen::Index>(schema->size()));
    for (std::size_t i = 0; i < schema->size(); ++i) {
        const auto& gen = profile.performance[i];
        double v = drifting_mean(gen, profile.honesty_gap, offset);
        if (gen.jitter_stddev > 0.0) {
            if (profile.jitter == JitterModel::gaussian) {
                v += std::normal_distribution<double>(0.0, gen.jitter_stddev)(rng);
            } else {
                // Same variance as the gaussian: half-width sqrt(3) * stddev.
                const double half = std::sqrt(3.0) * gen.jitter_stddev;
                v += std::uniform_real_distribution<double>(-half, half)(rng);
            }
        }
        values(static_cast<Eigen::Index>(i)) = clamp_to_attribute((*schema)[i], v);
    }
    return PerformanceVector(schema, std::move(values));
}

void ReporterProfile::validate() const {
    switch (kind) {
        case ReporterKind::honest:
            if (bias_offset != 0.0) throw InvalidArgument("honest reporter must not carry a bias offset");
            break;
        case ReporterKind::biased:
            if (!(std::abs(bias_offset) <= 1.0)) {
                throw InvalidArgument("bias_offset must lie in [-1, 1]");
            }
            break;
        case ReporterKind::malicious:
            if (bias_offset != 0.0) throw InvalidArgument("malicious reporter must not carry a bias offset");
            break;
    }
}

double observe(const ReporterProfile& profile, double true_trust, Rng& rng) {
    if (!(true_trust >= 0.0 && true_trust <= 1.0)) {
        throw InvalidArgument("true trust must lie in [0, 1]");
    }
    switch (profile.kind) {
        case ReporterKind::honest:
            return true_trust;
        case ReporterKind::biased:
            return std::clamp(true_trust + profile.bias_offset, 0.0, 1.0);
        case ReporterKind::malicious:
            if (profile.malicious_strategy == MaliciousStrategy::inverted) return 1.0 - true_trust;
            return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    return true_trust;
}

std::vector<std::string> ProbeSchedule::violations(double session_duration) const {
    std::vector<std::string> out;
    if (!(first_offset > 0.0)) out.push_back("first_offset must be > 0");
    if (!(interval > 0.0)) out.push_back("interval must be > 0");
    if (count < 1) out.push_back("count must be >= 1");
    if (out.empty() && last_offset() > session_duration) {
        out.push_back("last probe at " + seconds(last_offset()) + " falls after the session end (" +
                      seconds(session_duration) + ")");
    }
    return out;
}

std::string to_string(ReporterKind kind) {
    switch (kind) {
        case ReporterKind::honest: return "honest";
        case ReporterKind::biased: return "biased";
        case ReporterKind::malicious: return "malicious";
    }
    return "?";
}

std::string to_string(MaliciousStrategy strategy) {
    return strategy == MaliciousStrategy::random ? "random" : "inverted";
}

std::string to_string(JitterModel model) {
    return model == JitterModel::gaussian ? "gaussian" : "uniform";
}

}  // namespace mlt
