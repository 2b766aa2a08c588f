#include "mlt/error.hpp"
#include "mlt/evaluation.hpp"
#include "mlt/scenario_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace mlt;
using doctest::Approx;

namespace {

using L = TrustLevel;

// Direct per-level accuracy: fraction of samples where "is level l" agrees
// between prediction and truth.
double level_accuracy(const std::vector<L>& p, const std::vector<L>& a, L l) {
    int agree = 0;
    for (std::size_t i = 0; i < p.size(); ++i) agree += (p[i] == l) == (a[i] == l);
    return static_cast<double>(agree) / static_cast<double>(p.size());
}

Scenario small_scenario() { return load_scenario(MLT_TEST_DATA_DIR "/small.json").scenario; }

}  // namespace

TEST_CASE("classification into trust levels") {
    CHECK(classify(0.0) == L::lowly);
    CHECK(classify(0.2) == L::lowly);
    CHECK(classify(1.0 / 3.0) == L::moderately);
    CHECK(classify(0.5) == L::moderately);
    CHECK(classify(2.0 / 3.0) == L::highly);
    CHECK(classify(0.93) == L::highly);
    CHECK(classify(1.0) == L::highly);
    CHECK(classify(0.45, {0.5, 0.8}) == L::lowly);

    auto prev = L::lowly;
    for (int k = 0; k <= 1000; ++k) {
        const auto now = classify(k / 1000.0);
        CHECK(static_cast<int>(now) >= static_cast<int>(prev));
        prev = now;
    }
    CHECK_THROWS_AS((Thresholds{0.7, 0.3}).validate(), InvalidArgument);
    CHECK_THROWS_AS((Thresholds{0.0, 0.3}).validate(), InvalidArgument);
}

TEST_CASE("score examples") {
    SUBCASE("perfect prediction") {
        const std::vector<L> labels{L::lowly, L::moderately, L::highly, L::highly};
        const auto r = score(labels, labels);
        CHECK(r.macro_accuracy == 1.0);
        CHECK(r.macro_precision == 1.0);
        CHECK(r.macro_recall == 1.0);
        CHECK(r.stderr_accuracy == 0.0);
    }
    SUBCASE("everything predicted highly on a half-highly set") {
        const std::vector<L> actual{L::highly, L::highly, L::lowly, L::lowly};
        const std::vector<L> predicted(4, L::highly);
        const auto r = score(predicted, actual);
        const auto& h = r.per_level[2];
        CHECK(*h.precision == Approx(0.5));
        CHECK(*h.recall == Approx(1.0));
        CHECK(h.accuracy == Approx(0.5));
        CHECK_FALSE(r.per_level[0].precision.has_value());
        CHECK(*r.per_level[0].recall == 0.0);
        CHECK_FALSE(r.per_level[1].recall.has_value());
        CHECK(r.per_level[1].accuracy == 1.0);
    }
    SUBCASE("swapped labels have zero recall") {
        const std::vector<L> actual{L::lowly, L::highly};
        const std::vector<L> predicted{L::highly, L::lowly};
        const auto r = score(predicted, actual);
        CHECK(*r.per_level[0].recall == 0.0);
        CHECK(*r.per_level[2].recall == 0.0);
        CHECK(r.macro_recall == 0.0);
    }
    SUBCASE("errors") {
        const std::vector<L> one{L::lowly};
        const std::vector<L> two{L::lowly, L::lowly};
        CHECK_THROWS_AS(score(one, two), InvalidArgument);
        CHECK_THROWS_AS(score(std::span<const L>{}, std::span<const L>{}), InvalidArgument);
    }
}

TEST_CASE("score agrees with direct counting and ignores sample order") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 37;
        std::vector<L> p(n), a(n);
        for (int i = 0; i < n; ++i) {
            p[i] = static_cast<L>(pick(rng));
            a[i] = static_cast<L>(pick(rng));
        }
        const auto r = score(p, a);
        double macro = 0.0;
        for (auto l : kTrustLevels) {
            const double acc = level_accuracy(p, a, l);
            CHECK(r.per_level[static_cast<int>(l)].accuracy == Approx(acc));
            macro += acc / 3.0;
            for (const auto& m : {r.per_level[static_cast<int>(l)].precision, r.per_level[static_cast<int>(l)].recall}) {
                if (m) {
                    CHECK(*m >= 0.0);
                    CHECK(*m <= 1.0);
                }
            }
        }
        CHECK(r.macro_accuracy == Approx(macro));
        CHECK(r.macro_accuracy >= 1.0 / 3.0 - 1e-12);
        CHECK(r.counts.samples() == static_cast<std::size_t>(n));

        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<L> ps, as;
        for (int i : order) {
            ps.push_back(p[i]);
            as.push_back(a[i]);
        }
        const auto shuffled = score(ps, as);
        CHECK(shuffled.macro_accuracy == Approx(r.macro_accuracy));
        CHECK(shuffled.macro_precision == Approx(r.macro_precision));
        CHECK(shuffled.macro_recall == Approx(r.macro_recall));
    }
}

TEST_CASE("experiment kind names round-trip") {
    for (auto k : {ExperimentKind::ablation, ExperimentKind::count_sweep, ExperimentKind::estimator_compare,
                   ExperimentKind::full}) {
        CHECK(parse_experiment_kind(to_string(k)) == k);
    }
    CHECK_FALSE(parse_experiment_kind("sweep").has_value());
}

TEST_CASE("reporter rosters grow by prefix") {
    const auto base = small_scenario();
    Scenario prev = with_reporter_count(base, 1);
    CHECK(prev.bystanders.size() == 1);
    CHECK(prev.consumers.empty());
    for (std::size_t n = 2; n <= 9; ++n) {
        const auto next = with_reporter_count(base, n);
        CHECK(next.bystanders.size() + next.consumers.size() == n);
        for (std::size_t i = 0; i < prev.bystanders.size(); ++i) CHECK(next.bystanders[i].id == prev.bystanders[i].id);
        for (std::size_t i = 0; i < prev.consumers.size(); ++i) CHECK(next.consumers[i].id == prev.consumers[i].id);
        CHECK(scenario_violations(next).empty());
        prev = next;
    }
    CHECK(prev.bystanders[2].id == "b1~1");
    CHECK_THROWS_AS(with_reporter_count(base, 0), InvalidArgument);
}

TEST_CASE("adversaries are nested across fractions") {
    const auto base = with_reporter_count(small_scenario(), 10);
    ExperimentSpec spec;
    auto malicious = [](const Scenario& s) {
        std::vector<bool> out;
        for (const auto& b : s.bystanders) out.push_back(b.profile.kind == ReporterKind::malicious);
        for (const auto& c : s.consumers) out.push_back(c.profile.kind == ReporterKind::malicious);
        return out;
    };
    for (std::size_t rep = 0; rep < 50; ++rep) {
        const auto low = randomize_replication(base, spec, 0.2, rep);
        const auto high = randomize_replication(base, spec, 0.6, rep);
        CHECK(low.provider.honesty_gap == high.provider.honesty_gap);
        CHECK(low.provider.honesty_gap >= 0.0);
        CHECK(low.provider.honesty_gap <= 1.0);
        const auto a = malicious(low), b = malicious(high);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK((!a[i] || b[i]));
        CHECK(malicious(randomize_replication(base, spec, 0.0, rep)) == malicious(base));
    }
}

TEST_CASE("small experiment suites") {
    const auto base = small_scenario();
    ExperimentSpec spec;
    spec.replications = 60;
    spec.adversary_fractions = {0.0, 0.5};
    spec.max_reporters = 4;

    spec.kind = ExperimentKind::full;
    auto full = run_experiment_suite(base, spec);
    REQUIRE(full.size() == 2);
    CHECK(full[0].counts.samples() == 60);
    CHECK(full[0].macro_accuracy > full[1].macro_accuracy - 0.2);

    spec.kind = ExperimentKind::ablation;
    auto ablation = run_experiment_suite(base, spec);
    REQUIRE(ablation.size() == 4);
    CHECK(ablation[0].point.credibility);
    CHECK_FALSE(ablation[1].point.credibility);

    spec.kind = ExperimentKind::count_sweep;
    auto sweep = run_experiment_suite(base, spec);
    REQUIRE(sweep.size() == 8);
    CHECK(sweep[3].point.reporters == 4);
    CHECK(sweep[4].point.adversary_fraction == 0.5);

    spec.kind = ExperimentKind::estimator_compare;
    auto est = run_experiment_suite(base, spec);
    REQUIRE(est.size() == 4);
    CHECK(est[0].point.estimator == Estimator::instantaneous);
    CHECK(est[1].point.estimator == Estimator::accumulated);

    // Identical runs give identical numbers regardless of thread count.
    spec.kind = ExperimentKind::full;
    spec.jobs = 1;
    const auto serial = run_experiment_suite(base, spec);
    CHECK(serial[1].macro_accuracy == full[1].macro_accuracy);

    spec.replications = 0;
    CHECK_THROWS_AS(run_experiment_suite(base, spec), InvalidArgument);
}
