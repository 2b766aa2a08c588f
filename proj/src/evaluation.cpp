#include "mlt/evaluation.hpp"

#include "mlt/error.hpp"

#include <cmath>
#include <numeric>

namespace mlt {

namespace {

constexpr std::uint64_t kGapSalt = 0x67617073;        // "gaps"
constexpr std::uint64_t kAdversarySalt = 0x61647673;  // "advs"

std::size_t idx(TrustLevel l) { return static_cast<std::size_t>(l); }

// Roster position used to key per-reporter randomization.
std::uint64_t bystander_position(std::size_t k) { return 2 * k; }
std::uint64_t consumer_position(std::size_t k) { return 2 * k + 1; }

std::string cycled_id(const std::string& id, std::size_t k, std::size_t pool) {
    return k < pool ? id : id + "~" + std::to_string(k / pool);
}

TrustLevel predict(const SessionTrace& trace, const AggregationParams& base_params,
                   const Thresholds& thresholds, bool credibility) {
    AggregationParams params = base_params;
    params.mode = AggregationMode::normalized;
    AggregationOverrides overrides;
    overrides.unit_credibility = !credibility;
    const auto breakdown = aggregate(trace.consumer_reports, trace.bystander_reports, params, overrides);
    return classify(breakdown.overall, thresholds);
}

struct LabelSet {
    std::vector<TrustLevel> predicted;
    std::vector<TrustLevel> actual;
};

ExperimentResult finish(const LabelSet& labels, SweepPoint point) {
    auto result = score(labels.predicted, labels.actual);
    result.point = point;
    return result;
}

// Runs `spec.replications` randomized traces of `scenario` and hands each to
// `fn(i, trace)`; fn must only touch slot i of its outputs.
template <typename Fn>
void for_each_replication(const Scenario& scenario, const ExperimentSpec& spec, double fraction, Fn&& fn) {
    parallel_for(spec.replications, spec.jobs, [&](std::size_t i) {
        const auto trace = run_scenario(randomize_replication(scenario, spec, fraction, i));
        fn(i, trace);
    });
}

}  // namespace

std::string to_string(TrustLevel level) {
    switch (level) {
        case TrustLevel::lowly: return "lowly";
        case TrustLevel::moderately: return "moderately";
        case TrustLevel::highly: return "highly";
    }
    return "?";
}

void Thresholds::validate() const {
    if (!(0.0 < low_cut && low_cut < high_cut && high_cut < 1.0)) {
        throw InvalidArgument("trust-level thresholds must satisfy 0 < low_cut < high_cut < 1");
    }
}

TrustLevel classify(double trust, const Thresholds& thresholds) {
    if (trust < thresholds.low_cut) return TrustLevel::lowly;
    if (trust < thresholds.high_cut) return TrustLevel::moderately;
    return TrustLevel::highly;
}

void ConfusionCounts::add(TrustLevel actual, TrustLevel predicted) {
    ++cells_[idx(actual)][idx(predicted)];
    ++samples_;
}

std::size_t ConfusionCounts::cell(TrustLevel actual, TrustLevel predicted) const {
    return cells_[idx(actual)][idx(predicted)];
}

std::size_t ConfusionCounts::correct(TrustLevel l) const { return cells_[idx(l)][idx(l)]; }

std::size_t ConfusionCounts::detected(TrustLevel l) const {
    std::size_t n = 0;
    for (const auto& row : cells_) n += row[idx(l)];
    return n;
}

std::size_t ConfusionCounts::actual(TrustLevel l) const {
    const auto& row = cells_[idx(l)];
    return std::accumulate(row.begin(), row.end(), std::size_t{0});
}

std::size_t ConfusionCounts::correct_not(TrustLevel l) const {
    return samples_ - detected(l) - actual(l) + correct(l);
}

ExperimentResult score(std::span<const TrustLevel> predicted, std::span<const TrustLevel> actual) {
    if (predicted.size() != actual.size()) {
        throw InvalidArgument("predicted and actual label lists differ in length");
    }
    if (predicted.empty()) {
        throw InvalidArgument("cannot score an empty label list");
    }

    ExperimentResult r;
    for (std::size_t i = 0; i < predicted.size(); ++i) r.counts.add(actual[i], predicted[i]);
    const auto n = static_cast<double>(r.counts.samples());

    double precision_sum = 0.0;
    double recall_sum = 0.0;
    int precision_levels = 0;
    int recall_levels = 0;
    for (auto level : kTrustLevels) {
        auto& m = r.per_level[idx(level)];
        const auto correct = static_cast<double>(r.counts.correct(level));
        if (const auto d = r.counts.detected(level); d > 0) {
            m.precision = correct / static_cast<double>(d);
            precision_sum += *m.precision;
            ++precision_levels;
        }
        if (const auto a = r.counts.actual(level); a > 0) {
            m.recall = correct / static_cast<double>(a);
            recall_sum += *m.recall;
            ++recall_levels;
        }
        m.accuracy = (correct + static_cast<double>(r.counts.correct_not(level))) / n;
        r.macro_accuracy += m.accuracy / 3.0;
    }
    r.macro_precision = precision_levels > 0 ? precision_sum / precision_levels : 0.0;
    r.macro_recall = recall_levels > 0 ? recall_sum / recall_levels : 0.0;

    // Each sample contributes 1 to the macro accuracy when classified
    // correctly and 1/3 otherwise (two levels see a mismatch).
    if (predicted.size() > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            const double s = predicted[i] == actual[i] ? 1.0 : 1.0 / 3.0;
            ss += (s - r.macro_accuracy) * (s - r.macro_accuracy);
        }
        r.stderr_accuracy = std::sqrt(ss / (n - 1.0) / n);
    }
    return r;
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ablation: return "ablation";
        case ExperimentKind::count_sweep: return "count-sweep";
        case ExperimentKind::estimator_compare: return "estimator-compare";
        case ExperimentKind::full: return "full";
    }
    return "?";
}

std::optional<ExperimentKind> parse_experiment_kind(const std::string& name) {
    for (auto k : {ExperimentKind::ablation, ExperimentKind::count_sweep, ExperimentKind::estimator_compare,
                   ExperimentKind::full}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

void ExperimentSpec::validate() const {
    if (replications < 1) throw InvalidArgument("replications must be >= 1");
    if (adversary_fractions.empty()) throw InvalidArgument("at least one adversary fraction is required");
    for (double f : adversary_fractions) {
        if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument("adversary fractions must lie in [0, 1]");
    }
    if (kind == ExperimentKind::count_sweep && max_reporters < 1) {
        throw InvalidArgument("count sweep needs max_reporters >= 1");
    }
    if (!(0.0 <= gap_range.first && gap_range.first <= gap_range.second && gap_range.second <= 1.0)) {
        throw InvalidArgument("gap_range must satisfy 0 <= low <= high <= 1");
    }
    thresholds.validate();
}

Scenario with_reporter_count(const Scenario& base, std::size_t reporters) {
    const std::size_t nb = base.bystanders.size();
    const std::size_t nc = base.consumers.size();
    if (reporters < 1) throw InvalidArgument("reporter count must be >= 1");
    if (nb + nc == 0) throw InvalidArgument("base scenario has no reporters to replicate");

    Scenario out = base;
    out.bystanders.clear();
    out.consumers.clear();
    for (std::size_t j = 0; j < reporters; ++j) {
        const bool take_bystander = nc == 0 || (nb > 0 && j % 2 == 0);
        if (take_bystander) {
            const std::size_t k = out.bystanders.size();
            auto b = base.bystanders[k % nb];
            b.id = cycled_id(b.id, k, nb);
            out.bystanders.push_back(std::move(b));
        } else {
            const std::size_t k = out.consumers.size();
            auto c = base.consumers[k % nc];
            c.id = cycled_id(c.id, k, nc);
            out.consumers.push_back(std::move(c));
        }
    }
    return out;
}

Scenario randomize_replication(const Scenario& base, const ExperimentSpec& spec, double adversary_fraction,
                               std::size_t replication) {
    Scenario s = base;
    s.seed = base.seed + replication;

    auto gap_rng = make_stream(s.seed, 0, kGapSalt);
    s.provider.honesty_gap =
        std::uniform_real_distribution<double>(spec.gap_range.first, spec.gap_range.second)(gap_rng);

    auto maybe_adversary = [&](ReporterProfile& profile, std::uint64_t position) {
        auto rng = make_stream(s.seed, position, kAdversarySalt);
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < adversary_fraction) {
            profile = ReporterProfile::malicious(spec.adversary_strategy);
        }
    };
    for (std::size_t k = 0; k < s.bystanders.size(); ++k) maybe_adversary(s.bystanders[k].profile, bystander_position(k));
    for (std::size_t k = 0; k < s.consumers.size(); ++k) maybe_adversary(s.consumers[k].profile, consumer_position(k));
    return s;
}

std::vector<ExperimentResult> run_experiment_suite(const Scenario& base, const ExperimentSpec& spec) {
    spec.validate();
    validate(base);
    const auto reps = spec.replications;
    const auto& th = spec.thresholds;
    const std::size_t roster = base.bystanders.size() + base.consumers.size();

    std::vector<ExperimentResult> results;
    for (double fraction : spec.adversary_fractions) {
        switch (spec.kind) {
            case ExperimentKind::full: {
                LabelSet labels{std::vector<TrustLevel>(reps), std::vector<TrustLevel>(reps)};
                for_each_replication(base, spec, fraction, [&](std::size_t i, const SessionTrace& t) {
                    labels.predicted[i] = predict(t, base.params, th, true);
                    labels.actual[i] = classify(t.ground_truth_trust, th);
                });
                results.push_back(finish(labels, {spec.kind, roster, fraction, true, std::nullopt}));
                break;
            }
            case ExperimentKind::ablation: {
                LabelSet with{std::vector<TrustLevel>(reps), std::vector<TrustLevel>(reps)};
                LabelSet without{std::vector<TrustLevel>(reps), std::vector<TrustLevel>(reps)};
                for_each_replication(base, spec, fraction, [&](std::size_t i, const SessionTrace& t) {
                    const auto truth = classify(t.ground_truth_trust, th);
                    with.predicted[i] = predict(t, base.params, th, true);
                    without.predicted[i] = predict(t, base.params, th, false);
                    with.actual[i] = without.actual[i] = truth;
                });
                results.push_back(finish(with, {spec.kind, roster, fraction, true, std::nullopt}));
                results.push_back(finish(without, {spec.kind, roster, fraction, false, std::nullopt}));
                break;
            }
            case ExperimentKind::count_sweep: {
                for (std::size_t n = 1; n <= spec.max_reporters; ++n) {
                    const auto scenario = with_reporter_count(base, n);
                    LabelSet labels{std::vector<TrustLevel>(reps), std::vector<TrustLevel>(reps)};
                    for_each_replication(scenario, spec, fraction, [&](std::size_t i, const SessionTrace& t) {
                        labels.predicted[i] = predict(t, base.params, th, true);
                        labels.actual[i] = classify(t.ground_truth_trust, th);
                    });
                    results.push_back(finish(labels, {spec.kind, n, fraction, true, std::nullopt}));
                }
                break;
            }
            case ExperimentKind::estimator_compare: {
                if (base.bystanders.empty() || base.consumers.empty()) {
                    throw InvalidArgument("estimator comparison needs at least one bystander and one consumer");
                }
                // Every report is classified on its own against the ground truth.
                std::vector<LabelSet> inst(reps);
                std::vector<LabelSet> acc(reps);
                for_each_replication(base, spec, fraction, [&](std::size_t i, const SessionTrace& t) {
                    const auto truth = classify(t.ground_truth_trust, th);
                    for (const auto& b : t.bystander_reports) {
                        inst[i].predicted.push_back(classify(b.trust, th));
                        inst[i].actual.push_back(truth);
                    }
                    for (const auto& c : t.consumer_reports) {
                        acc[i].predicted.push_back(classify(c.trust, th));
                        acc[i].actual.push_back(truth);
                    }
                });
                auto flatten = [](const std::vector<LabelSet>& parts) {
                    LabelSet all;
                    for (const auto& p : parts) {
                        all.predicted.insert(all.predicted.end(), p.predicted.begin(), p.predicted.end());
                        all.actual.insert(all.actual.end(), p.actual.begin(), p.actual.end());
                    }
                    return all;
                };
                results.push_back(finish(flatten(inst), {spec.kind, base.bystanders.size(), fraction, true,
                                                         Estimator::instantaneous}));
                results.push_back(finish(flatten(acc), {spec.kind, base.consumers.size(), fraction, true,
                                                        Estimator::accumulated}));
                break;
            }
        }
    }
    return results;
}

}  // namespace mlt
