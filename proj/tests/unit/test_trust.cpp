#include "mlt/trust.hpp"

#include <doctest.h>

#include <vector>

using namespace mlt;
using doctest::Approx;

namespace {

// Scalar reference for the capped-ratio mean.
double capped_ratio_mean(const std::vector<double>& observed, const std::vector<double>& promised) {
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double ratio = observed[i] / promised[i];
        sum += ratio < 1.0 ? ratio : 1.0;
    }
    return sum / static_cast<double>(observed.size());
}

std::vector<InstantaneousReport> probes_at(std::initializer_list<double> offsets) {
    std::vector<InstantaneousReport> out;
    int i = 0;
    for (double t : offsets) out.push_back({"b" + std::to_string(i++), 0.5, t});
    return out;
}

std::vector<AccumulatedReport> usage_of(std::initializer_list<double> durations) {
    std::vector<AccumulatedReport> out;
    int i = 0;
    for (double d : durations) out.push_back({"c" + std::to_string(i++), 0.5, d, 1});
    return out;
}

}  // namespace

TEST_CASE("instantaneous trust") {
    SUBCASE("worked WiFi example with a 0-based security scale") {
        const auto schema = make_schema({
            {"speed", AttributeKind::continuous, "mbps"},
            {"security", AttributeKind::ordinal, "", {"Low", "Medium", "High"}, 0},
            {"availability", AttributeKind::continuous, "%"},
        });
        const auto promise = numerize(schema, {10.0, std::string("Medium"), 90.0});
        const auto observed = numerize(schema, {9.0, std::string("High"), 80.0});
        CHECK(std::abs(instantaneous_trust(observed, promise) - 0.93) <= 0.005);
    }
    SUBCASE("observation equal to promise") {
        Eigen::Vector3d p(10, 2, 90);
        CHECK(instantaneous_trust(p, p) == 1.0);
    }
    SUBCASE("half speed, same security, half availability") {
        const double oracle = capped_ratio_mean({5, 2, 45}, {10, 2, 90});
        CHECK(oracle == Approx(2.0 / 3.0));
        CHECK(instantaneous_trust(Eigen::Vector3d(5, 2, 45), Eigen::Vector3d(10, 2, 90)) == Approx(oracle));
    }
    SUBCASE("accepts other scalar types and expressions") {
        Eigen::Vector2f o(1.0f, 4.0f), p(2.0f, 2.0f);
        CHECK(instantaneous_trust(o, p) == Approx(0.75));
        double raw[] = {3.0, 6.0, 9.0};
        Eigen::Map<Eigen::Vector3d> m(raw);
        CHECK(instantaneous_trust(m.head(2), Eigen::Vector2d(6, 6)) == Approx(0.75));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(instantaneous_trust(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0)), InvalidArgument);
        CHECK_THROWS_AS(instantaneous_trust(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(3)), InvalidArgument);

        const auto a = make_schema({{"x", AttributeKind::continuous}});
        const auto b = make_schema({{"y", AttributeKind::continuous}});
        CHECK_THROWS_AS(instantaneous_trust(PerformanceVector(a, Eigen::VectorXd::Ones(1)),
                                            PerformanceVector(b, Eigen::VectorXd::Ones(1))),
                        InvalidArgument);
    }
}

TEST_CASE("accumulated trust update") {
    CHECK(update_accumulated(0.4, 0.8, 0.0) == Approx(0.8));
    CHECK(update_accumulated(0.4, 0.8, 1.0) == Approx(0.4));
    CHECK(update_accumulated(0.4, 0.8, 0.7) == Approx(0.7 * 0.4 + 0.3 * 0.8));
    CHECK(update_accumulated(0.4, 0.8, 0.7) == Approx(0.52));
    CHECK_THROWS_AS(update_accumulated(1.2, 0.8, 0.5), InvalidArgument);
    CHECK_THROWS_AS(update_accumulated(0.2, -0.1, 0.5), InvalidArgument);
    CHECK_THROWS_AS(update_accumulated(0.2, 0.1, 1.5), InvalidArgument);

    Eigen::Vector3d seq(0.4, 0.8, 0.6);
    CHECK(fold_accumulated(seq, 0.7) == Approx(0.7 * (0.7 * 0.4 + 0.3 * 0.8) + 0.3 * 0.6));
    CHECK_THROWS_AS(fold_accumulated(Eigen::VectorXd(0), 0.7), InvalidArgument);
}

TEST_CASE("freshness weights") {
    const auto w = freshness_weights(probes_at({2 * 60.0, 8 * 60.0, 20 * 60.0}));
    CHECK_FALSE(w.degenerate);
    CHECK(std::abs(w.values(0) - 0.07) <= 0.005);
    CHECK(std::abs(w.values(1) - 0.27) <= 0.005);
    CHECK(std::abs(w.values(2) - 0.67) <= 0.005);

    CHECK(freshness_weights(probes_at({5.0})).values(0) == 1.0);

    const auto equal = freshness_weights(probes_at({10, 10, 10, 10}));
    for (int i = 0; i < 4; ++i) CHECK(equal.values(i) == Approx(10.0 / 40.0));

    const auto zeros = freshness_weights(probes_at({0, 0, 0}));
    CHECK(zeros.degenerate);
    CHECK(zeros.values.isApproxToConstant(1.0 / 3.0));

    CHECK_THROWS_AS(freshness_weights({}), InvalidArgument);
    CHECK_THROWS_AS(freshness_weights(probes_at({1.0, -1.0})), InvalidArgument);
}

TEST_CASE("coverage weights") {
    const auto w = coverage_weights(usage_of({45 * 60.0, 20 * 60.0, 5 * 60.0}));
    CHECK(std::abs(w(0) - 0.64) <= 0.005);
    CHECK(std::abs(w(1) - 0.29) <= 0.005);
    CHECK(std::abs(w(2) - 0.07) <= 0.005);
    CHECK(coverage_weights(usage_of({300.0}))(0) == 1.0);
    CHECK(coverage_weights(usage_of({30, 30})).isApprox(Eigen::Vector2d(30.0 / 60.0, 30.0 / 60.0)));

    CHECK_THROWS_AS(coverage_weights({}), InvalidArgument);
    CHECK_THROWS_AS(coverage_weights(usage_of({10.0, 0.0})), InvalidArgument);
}

TEST_CASE("credibilities") {
    Eigen::Vector4d four(0.9, 0.85, 1.0, 0.1);
    const auto c = credibilities(four);
    CHECK(c(0) == Approx(0.8125));
    CHECK(c(1) == Approx(0.8625));
    CHECK(c(2) == Approx(0.7125));
    CHECK(c(3) == Approx(0.3875));

    CHECK(credibilities(Eigen::Vector3d::Constant(0.42)).isApproxToConstant(1.0));

    const auto pair = credibilities(Eigen::Vector2d(0.0, 1.0));
    CHECK(pair(0) == Approx(1.0 - 0.5));
    CHECK(pair(1) == Approx(1.0 - 0.5));

    CHECK_THROWS_AS(credibilities(Eigen::VectorXd(0)), InvalidArgument);
    CHECK_THROWS_AS(credibilities(Eigen::Vector2d(0.5, 1.5)), InvalidArgument);
}

TEST_CASE("plain mean aggregate") {
    const std::vector<AccumulatedReport> one_consumer{{"c", 0.8, 60.0, 1}};
    const std::vector<InstantaneousReport> two_bystanders{{"a", 0.6, 10.0}, {"b", 0.4, 20.0}};
    CHECK(aggregate_basic(one_consumer, two_bystanders) == Approx((0.8 + 0.6 + 0.4) / 3.0));
    CHECK(aggregate_basic({}, std::vector<InstantaneousReport>{{"a", 0.3, 1.0}}) == Approx(0.3));

    const std::vector<AccumulatedReport> same{{"c1", 0.55, 10, 1}, {"c2", 0.55, 20, 1}};
    const std::vector<InstantaneousReport> same_b{{"b1", 0.55, 5}};
    CHECK(aggregate_basic(same, same_b) == Approx(0.55));

    CHECK_THROWS_AS(aggregate_basic({}, {}), NoEvidenceError);
}

TEST_CASE("weighted aggregate") {
    const std::vector<AccumulatedReport> consumer{{"c", 0.8, 1234.0, 5}};
    const std::vector<InstantaneousReport> bystander{{"b", 0.6, 77.0}};

    SUBCASE("one consumer and one bystander, verbatim") {
        // Chain the pieces by hand: pooled mean 0.7, both credibilities 0.9,
        // each group weight 1.
        const double mean = (0.8 + 0.6) / 2.0;
        const double cred_c = 1.0 - std::abs(0.8 - mean);
        const double cred_b = 1.0 - std::abs(0.6 - mean);
        const double oracle = 0.5 * cred_c * 1.0 * 0.8 + 0.5 * cred_b * 1.0 * 0.6;
        CHECK(oracle == Approx(0.63));

        const auto out = aggregate(consumer, bystander, {0.7, 0.5, AggregationMode::verbatim});
        CHECK(out.overall == Approx(oracle));
        REQUIRE(out.per_reporter.size() == 2);
        CHECK(out.per_reporter[0].role == ReporterRole::consumer);
        CHECK(out.per_reporter[0].credibility == Approx(0.9));
        CHECK(out.per_reporter[1].weight == Approx(1.0));
        CHECK(out.consumer_term == Approx(0.72));
        CHECK(out.bystander_term == Approx(0.54));
    }
    SUBCASE("unanimous reports in normalized mode") {
        for (double t : {0.0, 0.2, 0.77, 1.0}) {
            const std::vector<AccumulatedReport> cs{{"c1", t, 100, 1}, {"c2", t, 900, 1}};
            const std::vector<InstantaneousReport> bs{{"b1", t, 10}, {"b2", t, 20}, {"b3", t, 30}};
            CHECK(aggregate(cs, bs, {0.7, 0.3, AggregationMode::normalized}).overall == Approx(t));
        }
    }
    SUBCASE("bystanders only rescales beta") {
        const std::vector<InstantaneousReport> one{{"b", 0.7, 42.0}};
        const auto out = aggregate({}, one, {0.7, 0.5, AggregationMode::verbatim});
        CHECK(out.overall == Approx(0.7));
        CHECK(out.consumer_share == 0.0);
    }
    SUBCASE("consumers only rescales beta") {
        const auto out = aggregate(consumer, {}, {0.7, 0.2, AggregationMode::verbatim});
        CHECK(out.overall == Approx(0.8));
        CHECK(out.consumer_share == 1.0);
    }
    SUBCASE("credibility shrinks verbatim scores but not normalized ones") {
        const std::vector<InstantaneousReport> split{{"a", 0.2, 10}, {"b", 0.8, 10}};
        const double verbatim = aggregate({}, split, {0.7, 0.5, AggregationMode::verbatim}).overall;
        const double normalized = aggregate({}, split, {0.7, 0.5, AggregationMode::normalized}).overall;
        CHECK(verbatim == Approx(0.7 * 0.5));
        CHECK(normalized == Approx(0.5));
    }
    SUBCASE("all-zero freshness is flagged and uniform") {
        const std::vector<InstantaneousReport> at_start{{"a", 0.2, 0}, {"b", 0.6, 0}};
        const auto out = aggregate({}, at_start, {0.7, 0.5, AggregationMode::normalized});
        CHECK(out.degenerate_freshness);
        CHECK(out.per_reporter[0].weight == Approx(0.5));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(aggregate({}, {}, {}), NoEvidenceError);
        CHECK_THROWS_AS(aggregate(consumer, bystander, {1.5, 0.5, AggregationMode::verbatim}), InvalidArgument);
        CHECK_THROWS_AS(aggregate(consumer, bystander, {0.5, -0.1, AggregationMode::verbatim}), InvalidArgument);
        const std::vector<InstantaneousReport> bad{{"b", 1.2, 1.0}};
        CHECK_THROWS_AS(aggregate({}, bad, {}), InvalidArgument);
    }
}

TEST_CASE("credibility limits the pull of a single outlier") {
    // Four agreeing bystanders, then the same set plus one outlier reporting
    // last (largest freshness). Across a grid of outlier values the score
    // never moves further than the outlier's own distance from it. Verbatim
    // scores are shrunk by credibility, so they can shift even for an outlier
    // sitting on the old score; only the normalized form is a weighted mean.
    const std::vector<InstantaneousReport> base{{"a", 0.80, 600}, {"b", 0.82, 1200}, {"c", 0.78, 1800}, {"d", 0.85, 2400}};
    {
        const AggregationParams params{0.7, 0.5, AggregationMode::normalized};
        const double score_b = aggregate({}, base, params).overall;
        for (int k = 0; k <= 200; ++k) {
            const double outlier = k / 200.0;
            auto with = base;
            with.push_back({"x", outlier, 3000});
            const double score_a = aggregate({}, with, params).overall;
            CAPTURE(outlier);
            CHECK(std::abs(score_a - score_b) < std::abs(outlier - score_b) + 1e-12);
        }
    }
}
