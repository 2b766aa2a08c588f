#include "mlt/scenario_io.hpp"

#include "mlt/error.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace mlt {

namespace {

using nlohmann::json;

// Every object in the file is checked against its allowed key set so that a
// misspelled field is reported instead of silently defaulted.
void expect_keys(const json& obj, const std::string& where, std::initializer_list<const char*> required,
                 std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    std::set<std::string> allowed;
    for (const char* k : required) {
        allowed.insert(k);
        if (!obj.contains(k)) throw ConfigError(where + ": missing required field '" + k + "'");
    }
    for (const char* k : optional) allowed.insert(k);
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown field '" + key + "'");
    }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

template <typename T>
T get_or(const json& obj, const char* key, const std::string& where, T fallback) {
    return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

AttributeKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "continuous") return AttributeKind::continuous;
    if (s == "ordinal") return AttributeKind::ordinal;
    throw ConfigError(where + ": kind must be 'continuous' or 'ordinal'");
}

std::vector<AttributeSpec> parse_attributes(const json& arr) {
    if (!arr.is_array()) throw ConfigError("session.attributes: expected an array");
    std::vector<AttributeSpec> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "session.attributes[" + std::to_string(i) + "]";
        const auto& a = arr[i];
        expect_keys(a, where, {"name", "kind"}, {"unit", "levels", "ordinal_base", "direction"});
        AttributeSpec spec;
        spec.name = get<std::string>(a, "name", where);
        spec.kind = parse_kind(get<std::string>(a, "kind", where), where);
        spec.unit = get_or<std::string>(a, "unit", where, "");
        spec.ordinal_levels = get_or<std::vector<std::string>>(a, "levels", where, {});
        spec.ordinal_base = get_or<int>(a, "ordinal_base", where, 1);
        const auto direction = get_or<std::string>(a, "direction", where, "higher");
        if (direction != "higher" && direction != "lower") {
            throw ConfigError(where + ".direction: must be 'higher' or 'lower'");
        }
        spec.higher_is_better = direction == "higher";
        out.push_back(std::move(spec));
    }
    return out;
}

std::vector<RawValue> parse_raw_values(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw ConfigError(where + ": expected an array");
    std::vector<RawValue> out;
    for (const auto& v : arr) {
        if (v.is_string()) {
            out.emplace_back(v.get<std::string>());
        } else {
            out.emplace_back(number(v, where));
        }
    }
    return out;
}

ReporterProfile parse_behavior(const json& obj, const std::string& where) {
    expect_keys(obj, where, {"kind"}, {"bias_offset", "strategy"});
    const auto kind = get<std::string>(obj, "kind", where);
    if (kind == "honest") {
        if (obj.contains("bias_offset") || obj.contains("strategy")) {
            throw ConfigError(where + ": honest reporters take no bias_offset or strategy");
        }
        return ReporterProfile::honest();
    }
    if (kind == "biased") {
        if (obj.contains("strategy")) throw ConfigError(where + ": biased reporters take no strategy");
        return ReporterProfile::biased(get<double>(obj, "bias_offset", where));
    }
    if (kind == "malicious") {
        if (obj.contains("bias_offset")) throw ConfigError(where + ": malicious reporters take no bias_offset");
        const auto strategy = get_or<std::string>(obj, "strategy", where, "random");
        if (strategy == "random") return ReporterProfile::malicious(MaliciousStrategy::random);
        if (strategy == "inverted") return ReporterProfile::malicious(MaliciousStrategy::inverted);
        throw ConfigError(where + ".strategy: must be 'random' or 'inverted'");
    }
    throw ConfigError(where + ".kind: must be 'honest', 'biased' or 'malicious'");
}

ProviderProfile parse_provider(const json& obj, const AttributeSchema& schema) {
    const std::string where = "provider";
    expect_keys(obj, where, {"performance"}, {"honesty_gap", "jitter_model"});
    ProviderProfile p;
    p.honesty_gap = get_or<double>(obj, "honesty_gap", where, 0.0);
    const auto jitter = get_or<std::string>(obj, "jitter_model", where, "gaussian");
    if (jitter == "gaussian") {
        p.jitter = JitterModel::gaussian;
    } else if (jitter == "uniform") {
        p.jitter = JitterModel::uniform;
    } else {
        throw ConfigError(where + ".jitter_model: must be 'gaussian' or 'uniform'");
    }
    const auto& perf = obj.at("performance");
    if (!perf.is_array()) throw ConfigError(where + ".performance: expected an array");
    for (std::size_t i = 0; i < perf.size(); ++i) {
        const std::string w = where + ".performance[" + std::to_string(i) + "]";
        expect_keys(perf[i], w, {"mean"}, {"jitter_stddev", "drift_per_hour"});
        AttributeGenerator gen;
        const auto& mean = perf[i].at("mean");
        if (mean.is_string()) {
            if (i >= schema.size()) throw ConfigError(w + ": more generators than attributes");
            try {
                gen.mean = schema.level_value(i, mean.get<std::string>());
            } catch (const InvalidArgument& e) {
                throw ConfigError(w + ".mean: " + e.what());
            }
        } else {
            gen.mean = number(mean, w + ".mean");
        }
        gen.jitter_stddev = get_or<double>(perf[i], "jitter_stddev", w, 0.0);
        gen.drift_per_hour = get_or<double>(perf[i], "drift_per_hour", w, 0.0);
        p.performance.push_back(gen);
    }
    return p;
}

AggregationParams parse_aggregation(const json& obj) {
    const std::string where = "aggregation";
    expect_keys(obj, where, {}, {"alpha", "beta", "mode"});
    AggregationParams params;
    params.alpha = get_or<double>(obj, "alpha", where, params.alpha);
    params.beta = get_or<double>(obj, "beta", where, params.beta);
    const auto mode = get_or<std::string>(obj, "mode", where, "verbatim");
    if (mode == "verbatim") {
        params.mode = AggregationMode::verbatim;
    } else if (mode == "normalized") {
        params.mode = AggregationMode::normalized;
    } else {
        throw ConfigError(where + ".mode: must be 'verbatim' or 'normalized'");
    }
    return params;
}

ExperimentSpec parse_experiment(const json& obj) {
    const std::string where = "experiment";
    expect_keys(obj, where, {},
                {"replications", "adversary_fractions", "adversary_strategy", "max_reporters", "gap_range",
                 "thresholds"});
    ExperimentSpec spec;
    spec.replications = get_or<std::size_t>(obj, "replications", where, spec.replications);
    spec.adversary_fractions = get_or<std::vector<double>>(obj, "adversary_fractions", where, spec.adversary_fractions);
    const auto strategy = get_or<std::string>(obj, "adversary_strategy", where, "random");
    if (strategy == "random") {
        spec.adversary_strategy = MaliciousStrategy::random;
    } else if (strategy == "inverted") {
        spec.adversary_strategy = MaliciousStrategy::inverted;
    } else {
        throw ConfigError(where + ".adversary_strategy: must be 'random' or 'inverted'");
    }
    spec.max_reporters = get_or<std::size_t>(obj, "max_reporters", where, spec.max_reporters);
    if (obj.contains("gap_range")) {
        const auto r = get<std::vector<double>>(obj, "gap_range", where);
        if (r.size() != 2) throw ConfigError(where + ".gap_range: expected [low, high]");
        spec.gap_range = {r[0], r[1]};
    }
    if (obj.contains("thresholds")) {
        const auto t = get<std::vector<double>>(obj, "thresholds", where);
        if (t.size() != 2) throw ConfigError(where + ".thresholds: expected [low_cut, high_cut]");
        spec.thresholds = {t[0], t[1]};
    }
    return spec;
}

}  // namespace

ScenarioFile parse_scenario(const json& doc) {
    expect_keys(doc, "scenario", {"schema_version", "session", "provider", "query_time"},
                {"bystanders", "consumers", "aggregation", "seed", "experiment"});
    if (get<int>(doc, "schema_version", "scenario") != kScenarioSchemaVersion) {
        throw ConfigError("scenario.schema_version: unsupported version (expected " +
                          std::to_string(kScenarioSchemaVersion) + ")");
    }

    // Structural pass first: everything below must parse before any
    // invariant is judged.
    const auto& sj = doc.at("session");
    expect_keys(sj, "session", {"id", "start_time", "end_time", "attributes", "promise"},
                {"location", "provider_id", "service_type"});
    GeoPoint location;
    if (sj.contains("location")) {
        expect_keys(sj.at("location"), "session.location", {"lat", "lon"});
        location = {get<double>(sj.at("location"), "lat", "session.location"),
                    get<double>(sj.at("location"), "lon", "session.location")};
    }
    const auto attributes = parse_attributes(sj.at("attributes"));
    const auto raw_promise = parse_raw_values(sj.at("promise"), "session.promise");

    std::vector<BystanderSpec> bystanders;
    if (doc.contains("bystanders")) {
        const auto& arr = doc.at("bystanders");
        if (!arr.is_array()) throw ConfigError("bystanders: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "bystanders[" + std::to_string(i) + "]";
            expect_keys(arr[i], where, {"id", "schedule"}, {"behavior"});
            const auto& sched = arr[i].at("schedule");
            expect_keys(sched, where + ".schedule", {"first_offset", "interval", "count"});
            BystanderSpec b;
            b.id = get<std::string>(arr[i], "id", where);
            b.profile = arr[i].contains("behavior") ? parse_behavior(arr[i].at("behavior"), where + ".behavior")
                                                    : ReporterProfile::honest();
            b.schedule = {get<double>(sched, "first_offset", where), get<double>(sched, "interval", where),
                          get<int>(sched, "count", where)};
            bystanders.push_back(std::move(b));
        }
    }
    std::vector<ConsumerSpec> consumers;
    if (doc.contains("consumers")) {
        const auto& arr = doc.at("consumers");
        if (!arr.is_array()) throw ConfigError("consumers: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = "consumers[" + std::to_string(i) + "]";
            expect_keys(arr[i], where, {"id", "usage_start", "usage_end"}, {"sample_interval", "behavior"});
            ConsumerSpec c;
            c.id = get<std::string>(arr[i], "id", where);
            c.profile = arr[i].contains("behavior") ? parse_behavior(arr[i].at("behavior"), where + ".behavior")
                                                    : ReporterProfile::honest();
            c.usage_start = get<double>(arr[i], "usage_start", where);
            c.usage_end = get<double>(arr[i], "usage_end", where);
            c.sample_interval = get_or<double>(arr[i], "sample_interval", where, 60.0);
            consumers.push_back(std::move(c));
        }
    }
    const auto params = doc.contains("aggregation") ? parse_aggregation(doc.at("aggregation")) : AggregationParams{};
    const auto experiment = doc.contains("experiment") ? parse_experiment(doc.at("experiment")) : ExperimentSpec{};
    const double query_time = get<double>(doc, "query_time", "scenario");
    const auto seed = get_or<std::uint64_t>(doc, "seed", "scenario", 0);

    // Invariant pass.
    SchemaPtr schema;
    try {
        schema = make_schema(attributes);
    } catch (const InvalidArgument& e) {
        throw ValidationError({std::string("session.attributes: ") + e.what()});
    }
    std::optional<ServiceSession> session;
    try {
        auto promise = numerize(schema, raw_promise);
        session.emplace(get<std::string>(sj, "id", "session"), location, get<double>(sj, "start_time", "session"),
                        get<double>(sj, "end_time", "session"), get_or<std::string>(sj, "provider_id", "session", ""),
                        get_or<std::string>(sj, "service_type", "session", ""), std::move(promise));
    } catch (const InvalidArgument& e) {
        throw ValidationError({std::string("session: ") + e.what()});
    }

    ScenarioFile file{Scenario{std::move(*session), parse_provider(doc.at("provider"), *schema),
                               std::move(bystanders), std::move(consumers), params, query_time, seed},
                      experiment};

    auto problems = scenario_violations(file.scenario);
    try {
        file.experiment.validate();
    } catch (const InvalidArgument& e) {
        problems.push_back(std::string("experiment: ") + e.what());
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path.string() + "': file not found or unreadable");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(doc);
}

}  // namespace mlt
