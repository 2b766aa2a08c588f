#include "mlt/agents.hpp"
#include "mlt/error.hpp"
#include "mlt/trust.hpp"

#include <doctest.h>

#include <cmath>

using namespace mlt;
using doctest::Approx;

namespace {

SchemaPtr speed_security() {
    return make_schema({
        {"speed", AttributeKind::continuous, "mbps"},
        {"security", AttributeKind::ordinal, "", {"Low", "Medium", "High"}, 1},
    });
}

ProviderProfile steady(double speed, double gap, double stddev = 0.0, double drift = 0.0) {
    return {{{speed, stddev, drift}, {2.0, 0.0, 0.0}}, gap, JitterModel::gaussian};
}

}  // namespace

TEST_CASE("expected performance applies gap and drift") {
    const auto schema = speed_security();
    CHECK(expected_performance(steady(10, 0.1), schema, 0.0)(0) == Approx(9.0));
    CHECK(expected_performance(steady(10, 0.0, 0.0, -0.5), schema, 3600.0)(0) == Approx(9.5));
    CHECK(expected_performance(steady(10, 0.0, 0.0, -0.5), schema, 1800.0)(0) == Approx(9.75));

    // Zero gap, no jitter, no drift: the true performance is the promise.
    const auto promise = numerize(schema, {10.0, std::string("Medium")});
    Rng rng = make_stream(1, 0);
    const auto sample = sample_true_performance(steady(10, 0.0), schema, 500.0, rng);
    CHECK(sample.values() == promise.values());
    CHECK(instantaneous_trust(sample, promise) == 1.0);
}

TEST_CASE("samples are clamped into each attribute's range") {
    const auto schema = speed_security();
    ProviderProfile wild{{{1.0, 50.0, 0.0}, {2.0, 5.0, 0.0}}, 0.0, JitterModel::uniform};
    Rng rng = make_stream(3, 0);
    for (int i = 0; i < 2000; ++i) {
        const auto p = sample_true_performance(wild, schema, 10.0, rng);
        CHECK(p(0) >= 0.0);
        CHECK(p(1) >= 1.0);
        CHECK(p(1) <= 3.0);
        CHECK(p(1) == std::round(p(1)));
    }
}

TEST_CASE("jitter models share a variance") {
    const auto schema = make_schema({{"x", AttributeKind::continuous}});
    for (auto model : {JitterModel::gaussian, JitterModel::uniform}) {
        ProviderProfile p{{{100.0, 4.0, 0.0}}, 0.0, model};
        Rng rng = make_stream(5, 1);
        double sum = 0, sq = 0;
        const int n = 40000;
        for (int i = 0; i < n; ++i) {
            const double v = sample_true_performance(p, schema, 0.0, rng)(0);
            sum += v;
            sq += v * v;
        }
        const double mean = sum / n;
        const double var = sq / n - mean * mean;
        CAPTURE(to_string(model));
        CHECK(mean == Approx(100.0).epsilon(0.005));
        CHECK(std::sqrt(var) == Approx(4.0).epsilon(0.03));
    }
}

TEST_CASE("provider validation") {
    const auto schema = speed_security();
    CHECK_NOTHROW(steady(10, 0.3).validate(*schema));
    CHECK_THROWS_AS(steady(10, 1.5).validate(*schema), InvalidArgument);
    CHECK_THROWS_AS(steady(10, -0.1).validate(*schema), InvalidArgument);
    CHECK_THROWS_AS(steady(10, 0.0, -1.0).validate(*schema), InvalidArgument);
    ProviderProfile short_list{{{10, 0, 0}}, 0.0, JitterModel::gaussian};
    CHECK_THROWS_AS(short_list.validate(*schema), InvalidArgument);
}

TEST_CASE("reporter behaviour") {
    Rng rng = make_stream(0, 0);
    CHECK(observe(ReporterProfile::honest(), 0.8, rng) == 0.8);
    CHECK(observe(ReporterProfile::biased(-0.3), 0.8, rng) == Approx(0.5));
    CHECK(observe(ReporterProfile::biased(0.3), 0.8, rng) == 1.0);
    CHECK(observe(ReporterProfile::biased(-0.9), 0.8, rng) == 0.0);
    CHECK(observe(ReporterProfile::malicious(MaliciousStrategy::inverted), 0.8, rng) == Approx(0.2));
    for (int i = 0; i < 500; ++i) {
        const double v = observe(ReporterProfile::malicious(MaliciousStrategy::random), 0.8, rng);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK_THROWS_AS(observe(ReporterProfile::honest(), 1.1, rng), InvalidArgument);

    CHECK_THROWS_AS(ReporterProfile::biased(1.5).validate(), InvalidArgument);
    CHECK_THROWS_AS((ReporterProfile{ReporterKind::honest, 0.2, {}}).validate(), InvalidArgument);
    CHECK_NOTHROW(ReporterProfile::biased(-1.0).validate());
}

TEST_CASE("honest reporters round-trip the measured trust") {
    Rng rng = make_stream(8, 8);
    Rng probe = make_stream(9, 9);
    for (int i = 0; i < 1000; ++i) {
        const double t = std::uniform_real_distribution<double>(0.0, 1.0)(probe);
        CHECK(observe(ReporterProfile::honest(), t, rng) == t);
    }
}

TEST_CASE("streams are deterministic and distinct") {
    Rng a = make_stream(42, 3, 7), b = make_stream(42, 3, 7);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());

    Rng base = make_stream(42, 3, 7);
    Rng other_index = make_stream(42, 4, 7);
    Rng other_salt = make_stream(42, 3, 8);
    Rng other_seed = make_stream(43, 3, 7);
    const auto first = base();
    CHECK(first != other_index());
    CHECK(first != other_salt());
    CHECK(first != other_seed());
}

TEST_CASE("probe schedules must fit in the session") {
    ProbeSchedule ok{60, 600, 6};
    CHECK(ok.last_offset() == 3060);
    CHECK(ok.violations(3600).empty());

    ProbeSchedule late{600, 600, 10};
    const auto v = late.violations(3600);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "last probe at 6000 s falls after the session end (3600 s)");

    CHECK_FALSE(ProbeSchedule{0, 60, 2}.violations(3600).empty());
    CHECK_FALSE(ProbeSchedule{10, 0, 2}.violations(3600).empty());
    CHECK_FALSE(ProbeSchedule{10, 60, 0}.violations(3600).empty());
}
