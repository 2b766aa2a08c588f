#ifndef MLT_TRUST_HPP
#define MLT_TRUST_HPP

// Session-local trust arithmetic. The vector kernels are templated on the
// Eigen expression type so they accept any dense column (VectorXd, VectorXf,
// maps, blocks); the report-level API below them works in double.

#include "mlt/error.hpp"
#include "mlt/session.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace mlt {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Mean over attributes of min(1, observed / promised).
///
/// Every promised element must be strictly positive; a zero promise makes the
/// ratio undefined and is rejected rather than silently skipped.
template <typename DerivedO, typename DerivedP>
typename DerivedO::Scalar instantaneous_trust(const Eigen::MatrixBase<DerivedO>& observed,
                                              const Eigen::MatrixBase<DerivedP>& promised) {
    using Scalar = typename DerivedO::Scalar;
    if (observed.size() != promised.size() || observed.size() == 0) {
        throw InvalidArgument("observation and promise must be non-empty and of equal length");
    }
    if ((promised.array() <= Scalar(0)).any()) {
        throw InvalidArgument("promise element is 0: observed/promised ratio is undefined");
    }
    if ((observed.array() < Scalar(0)).any()) {
        throw InvalidArgument("observation element is negative");
    }
    return (observed.array() / promised.array().template cast<Scalar>())
        .min(Scalar(1))
        .mean();
}

/// Schema-checked overload on performance vectors.
double instantaneous_trust(const PerformanceVector& observation, const PerformanceVector& promise);

/// One EWMA step: alpha * previous + (1 - alpha) * instantaneous.
template <typename Scalar>
Scalar update_accumulated(Scalar previous, Scalar instantaneous, Scalar alpha) {
    auto in_unit = [](Scalar v) { return v >= Scalar(0) && v <= Scalar(1); };
    if (!in_unit(previous) || !in_unit(instantaneous) || !in_unit(alpha)) {
        throw InvalidArgument("accumulated-trust update arguments must lie in [0, 1]");
    }
    return alpha * previous + (Scalar(1) - alpha) * instantaneous;
}

/// Folds the EWMA over a sequence; the first value seeds the accumulator.
template <typename Derived>
typename Derived::Scalar fold_accumulated(const Eigen::MatrixBase<Derived>& instantaneous,
                                          typename Derived::Scalar alpha) {
    if (instantaneous.size() == 0) {
        throw InvalidArgument("cannot accumulate an empty sequence");
    }
    auto acc = instantaneous(0);
    for (Eigen::Index i = 1; i < instantaneous.size(); ++i) {
        acc = update_accumulated(acc, instantaneous(i), alpha);
    }
    return acc;
}

template <typename Scalar>
struct Weights {
    VectorX<Scalar> values;
    bool degenerate = false;  // all inputs were zero; uniform weights substituted
};

/// amount_i / sum(amount). When every amount is zero the result falls back to
/// uniform weights and is flagged degenerate.
template <typename Derived>
Weights<typename Derived::Scalar> proportional_weights(const Eigen::MatrixBase<Derived>& amounts) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = amounts.size();
    if (n == 0) {
        throw InvalidArgument("cannot weight an empty report list");
    }
    if ((amounts.array() < Scalar(0)).any()) {
        throw InvalidArgument("weighting amounts must be non-negative");
    }
    const Scalar total = amounts.sum();
    if (total == Scalar(0)) {
        return {VectorX<Scalar>::Constant(n, Scalar(1) / static_cast<Scalar>(n)), true};
    }
    return {amounts / total, false};
}

/// 1 - |value - mean(values)| for every value.
template <typename Derived>
VectorX<typename Derived::Scalar> credibilities(const Eigen::MatrixBase<Derived>& values) {
    using Scalar = typename Derived::Scalar;
    if (values.size() == 0) {
        throw InvalidArgument("credibility needs at least one trust value");
    }
    if ((values.array() < Scalar(0)).any() || (values.array() > Scalar(1)).any()) {
        throw InvalidArgument("trust values must lie in [0, 1]");
    }
    const Scalar mean = values.mean();
    return (Scalar(1) - (values.array() - mean).abs()).matrix();
}

// ---------------------------------------------------------------------------
// Reports and aggregation

struct InstantaneousReport {
    std::string reporter_id;
    double trust = 0.0;
    double timestamp_offset = 0.0;  // seconds from session start
};

struct AccumulatedReport {
    std::string reporter_id;
    double trust = 0.0;
    double coverage_duration = 0.0;  // seconds
    int update_count = 1;
};

enum class AggregationMode { verbatim, normalized };

struct AggregationParams {
    double alpha = 0.7;  // EWMA weight on the previous accumulated value
    double beta = 0.5;   // consumer share; bystanders get 1 - beta
    AggregationMode mode = AggregationMode::verbatim;

    void validate() const;
};

/// Ablation switches. Neither is part of the normal scoring path.
struct AggregationOverrides {
    bool unit_credibility = false;  // treat every credibility as 1
    bool uniform_weights = false;   // replace freshness/coverage by 1/|group|
};

enum class ReporterRole { consumer, bystander };

struct ReporterContribution {
    std::string reporter_id;
    ReporterRole role = ReporterRole::bystander;
    double raw_trust = 0.0;
    double weight = 0.0;  // freshness for bystanders, coverage for consumers
    double credibility = 1.0;
};

struct TrustBreakdown {
    double overall = 0.0;
    double consumer_term = 0.0;
    double bystander_term = 0.0;
    double consumer_share = 0.0;  // effective beta after empty-group rescaling
    bool degenerate_freshness = false;
    std::vector<ReporterContribution> per_reporter;  // consumers first, then bystanders
};

Weights<double> freshness_weights(std::span<const InstantaneousReport> reports);
Eigen::VectorXd coverage_weights(std::span<const AccumulatedReport> reports);

/// Plain mean over every consumer and bystander trust value.
double aggregate_basic(std::span<const AccumulatedReport> consumers,
                       std::span<const InstantaneousReport> bystanders);

/// Credibility-, coverage- and freshness-weighted aggregate.
///
/// Credibilities are computed on the pooled raw values of both groups. In
/// verbatim mode each group term is sum(credibility * weight * trust); in
/// normalized mode that sum is divided by sum(credibility * weight), so a
/// unanimous report set scores exactly its common value. An empty group is
/// dropped and the other group's factor becomes 1.
TrustBreakdown aggregate(std::span<const AccumulatedReport> consumers,
                         std::span<const InstantaneousReport> bystanders,
                         const AggregationParams& params,
                         const AggregationOverrides& overrides = {});

}  // namespace mlt

#endif  // MLT_TRUST_HPP
