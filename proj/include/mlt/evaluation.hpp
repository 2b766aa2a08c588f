#ifndef MLT_EVALUATION_HPP
#define MLT_EVALUATION_HPP

#include "mlt/agents.hpp"
#include "mlt/simulator.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mlt {

enum class TrustLevel { lowly = 0, moderately = 1, highly = 2 };

inline constexpr std::array<TrustLevel, 3> kTrustLevels = {TrustLevel::lowly, TrustLevel::moderately,
                                                           TrustLevel::highly};

std::string to_string(TrustLevel level);

/// Half-open buckets: [0, low_cut) lowly, [low_cut, high_cut) moderately,
/// [high_cut, 1] highly.
struct Thresholds {
    double low_cut = 1.0 / 3.0;
    double high_cut = 2.0 / 3.0;

    void validate() const;
};

TrustLevel classify(double trust, const Thresholds& thresholds = {});

/// 3x3 confusion matrix indexed [actual][predicted].
class ConfusionCounts {
public:
    void add(TrustLevel actual, TrustLevel predicted);

    std::size_t correct(TrustLevel l) const;
    std::size_t detected(TrustLevel l) const;
    std::size_t actual(TrustLevel l) const;
    std::size_t correct_not(TrustLevel l) const;  // neither predicted nor actually l
    std::size_t samples() const noexcept { return samples_; }
    std::size_t cell(TrustLevel actual, TrustLevel predicted) const;

private:
    std::array<std::array<std::size_t, 3>, 3> cells_{};
    std::size_t samples_ = 0;
};

struct LevelMetrics {
    std::optional<double> precision;  // undefined when nothing was detected as the level
    std::optional<double> recall;     // undefined when no sample actually is the level
    double accuracy = 0.0;
};

enum class ExperimentKind { ablation, count_sweep, estimator_compare, full };

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(const std::string& name);

enum class Estimator { instantaneous, accumulated };

/// Which configuration a result belongs to. Fields irrelevant to the
/// experiment kind keep their defaults.
struct SweepPoint {
    ExperimentKind kind = ExperimentKind::full;
    std::size_t reporters = 0;
    double adversary_fraction = 0.0;
    bool credibility = true;
    std::optional<Estimator> estimator;
};

struct ExperimentResult {
    SweepPoint point;
    std::array<LevelMetrics, 3> per_level;
    double macro_precision = 0.0;  // mean over levels with a defined value
    double macro_recall = 0.0;
    double macro_accuracy = 0.0;
    double stderr_accuracy = 0.0;  // standard error of macro_accuracy over samples
    ConfusionCounts counts;
};

/// Per-level precision, recall and accuracy plus their macro means.
/// Throws InvalidArgument on empty or unequal-length input.
ExperimentResult score(std::span<const TrustLevel> predicted, std::span<const TrustLevel> actual);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::full;
    std::size_t replications = 1000;
    std::vector<double> adversary_fractions = {0.0, 0.25};
    MaliciousStrategy adversary_strategy = MaliciousStrategy::random;
    std::size_t max_reporters = 10;                   // count sweep covers 1..max_reporters
    std::pair<double, double> gap_range = {0.0, 1.0};  // provider honesty_gap drawn per replication
    Thresholds thresholds;
    unsigned jobs = 0;

    void validate() const;
};

/// Reporter roster for the count sweep: alternates bystander, consumer,
/// bystander, ... cycling through the base scenario's reporters, so the
/// roster for n is a prefix of the roster for n + 1.
Scenario with_reporter_count(const Scenario& base, std::size_t reporters);

/// Applies one replication's randomization: a provider honesty gap drawn from
/// spec.gap_range and each reporter turned adversarial with probability
/// `adversary_fraction`. The uniform draws depend only on (seed, reporter
/// position), so populations are nested across fractions and roster sizes.
Scenario randomize_replication(const Scenario& base, const ExperimentSpec& spec,
                               double adversary_fraction, std::size_t replication);

/// Runs the sweep and returns one result per sweep point. Ground truth for
/// every replication is the classified noise-free trust; predictions use the
/// normalized aggregate.
std::vector<ExperimentResult> run_experiment_suite(const Scenario& base, const ExperimentSpec& spec);

}  // namespace mlt

#endif  // MLT_EVALUATION_HPP
