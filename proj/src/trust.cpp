#include "mlt/trust.hpp"

#include <cmath>

namespace mlt {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_reports(std::span<const AccumulatedReport> consumers,
                   std::span<const InstantaneousReport> bystanders) {
    for (const auto& c : consumers) {
        if (!in_unit(c.trust)) {
            throw InvalidArgument("consumer '" + c.reporter_id + "' trust outside [0, 1]");
        }
    }
    for (const auto& b : bystanders) {
        if (!in_unit(b.trust)) {
            throw InvalidArgument("bystander '" + b.reporter_id + "' trust outside [0, 1]");
        }
    }
}

// sum(c * w * t), optionally divided by sum(c * w).
double group_term(const Eigen::VectorXd& cred, const Eigen::VectorXd& weight,
                  const Eigen::VectorXd& trust, AggregationMode mode) {
    const Eigen::ArrayXd mass = cred.array() * weight.array();
    const double weighted = (mass * trust.array()).sum();
    if (mode == AggregationMode::verbatim) return weighted;
    const double total = mass.sum();
    // Zero mass only arises when every member has zero weight or credibility;
    // fall back to the group's plain mean.
    return total > 0.0 ? weighted / total : trust.mean();
}

}  // namespace

void AggregationParams::validate() const {
    if (!in_unit(alpha)) throw InvalidArgument("alpha must lie in [0, 1]");
    if (!in_unit(beta)) throw InvalidArgument("beta must lie in [0, 1]");
}

double instantaneous_trust(const PerformanceVector& observation, const PerformanceVector& promise) {
    if (!observation.shares_schema_with(promise)) {
        throw InvalidArgument("observation and promise use different attribute schemas");
    }
    return instantaneous_trust(observation.values(), promise.values());
}

Weights<double> freshness_weights(std::span<const InstantaneousReport> reports) {
    Eigen::VectorXd offsets(static_cast<Eigen::Index>(reports.size()));
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!(reports[i].timestamp_offset >= 0.0)) {
            throw InvalidArgument("bystander '" + reports[i].reporter_id +
                                  "' has a negative timestamp offset");
        }
        offsets(static_cast<Eigen::Index>(i)) = reports[i].timestamp_offset;
    }
    return proportional_weights(offsets);
}

Eigen::VectorXd coverage_weights(std::span<const AccumulatedReport> reports) {
    Eigen::VectorXd durations(static_cast<Eigen::Index>(reports.size()));
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!(reports[i].coverage_duration > 0.0)) {
            throw InvalidArgument("consumer '" + reports[i].reporter_id +
                                  "' has a non-positive coverage duration");
        }
        durations(static_cast<Eigen::Index>(i)) = reports[i].coverage_duration;
    }
    return proportional_weights(durations).values;
}

double aggregate_basic(std::span<const AccumulatedReport> consumers,
                       std::span<const InstantaneousReport> bystanders) {
    const std::size_t n = consumers.size() + bystanders.size();
    if (n == 0) throw NoEvidenceError();
    check_reports(consumers, bystanders);
    double sum = 0.0;
    for (const auto& c : consumers) sum += c.trust;
    for (const auto& b : bystanders) sum += b.trust;
    return sum / static_cast<double>(n);
}

TrustBreakdown aggregate(std::span<const AccumulatedReport> consumers,
                         std::span<const InstantaneousReport> bystanders,
                         const AggregationParams& params, const AggregationOverrides& overrides) {
    params.validate();
    const auto nc = static_cast<Eigen::Index>(consumers.size());
    const auto nb = static_cast<Eigen::Index>(bystanders.size());
    if (nc + nb == 0) throw NoEvidenceError();
    check_reports(consumers, bystanders);

    Eigen::VectorXd pooled(nc + nb);
    for (Eigen::Index i = 0; i < nc; ++i) pooled(i) = consumers[static_cast<std::size_t>(i)].trust;
    for (Eigen::Index i = 0; i < nb; ++i) pooled(nc + i) = bystanders[static_cast<std::size_t>(i)].trust;

    const Eigen::VectorXd cred = overrides.unit_credibility
                                     ? Eigen::VectorXd::Ones(nc + nb).eval()
                                     : credibilities(pooled);

    TrustBreakdown out;
    Eigen::VectorXd consumer_weight;
    Eigen::VectorXd bystander_weight;
    if (nc > 0) {
        consumer_weight = overrides.uniform_weights
                              ? Eigen::VectorXd::Constant(nc, 1.0 / static_cast<double>(nc))
                              : coverage_weights(consumers);
        out.consumer_term = group_term(cred.head(nc), consumer_weight, pooled.head(nc), params.mode);
    }
    if (nb > 0) {
        if (overrides.uniform_weights) {
            bystander_weight = Eigen::VectorXd::Constant(nb, 1.0 / static_cast<double>(nb));
        } else {
            auto fresh = freshness_weights(bystanders);
            bystander_weight = std::move(fresh.values);
            out.degenerate_freshness = fresh.degenerate;
        }
        out.bystander_term = group_term(cred.tail(nb), bystander_weight, pooled.tail(nb), params.mode);
    }

    out.consumer_share = nc == 0 ? 0.0 : (nb == 0 ? 1.0 : params.beta);
    out.overall = out.consumer_share * out.consumer_term + (1.0 - out.consumer_share) * out.bystander_term;

    out.per_reporter.reserve(static_cast<std::size_t>(nc + nb));
    for (Eigen::Index i = 0; i < nc; ++i) {
        out.per_reporter.push_back({consumers[static_cast<std::size_t>(i)].reporter_id,
                                    ReporterRole::consumer, pooled(i), consumer_weight(i), cred(i)});
    }
    for (Eigen::Index i = 0; i < nb; ++i) {
        out.per_reporter.push_back({bystanders[static_cast<std::size_t>(i)].reporter_id,
                                    ReporterRole::bystander, pooled(nc + i), bystander_weight(i),
                                    cred(nc + i)});
    }
    return out;
}

}  // namespace mlt
