#include "mlt/cli.hpp"

#include "mlt/error.hpp"
#include "mlt/scenario_io.hpp"
#include "mlt/trust.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mlt::cli {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); }

// Row cells for one result, matching csv_header(kind). Ablation, sweep and
// estimator results are one row each; full results expand into per-level
// rows followed by the macro row.
std::vector<std::vector<std::string>> rows_for(ExperimentKind kind, const ExperimentResult& r) {
    const auto frac = fixed6(r.point.adversary_fraction);
    const auto tail = std::vector<std::string>{fixed6(r.macro_accuracy), fixed6(r.macro_precision),
                                               fixed6(r.macro_recall), fixed6(r.stderr_accuracy)};
    auto row = [&](std::string lead, std::vector<std::string> rest) {
        std::vector<std::string> out{std::move(lead), frac};
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    };
    switch (kind) {
        case ExperimentKind::ablation:
            return {row(r.point.credibility ? "on" : "off", tail)};
        case ExperimentKind::count_sweep:
            return {row(std::to_string(r.point.reporters), tail)};
        case ExperimentKind::estimator_compare:
            return {row(r.point.estimator == Estimator::accumulated ? "accumulated" : "instantaneous", tail)};
        case ExperimentKind::full: {
            std::vector<std::vector<std::string>> out;
            const auto n = static_cast<double>(r.counts.samples());
            for (auto level : kTrustLevels) {
                const auto& m = r.per_level[static_cast<std::size_t>(level)];
                const double se = n > 1 ? std::sqrt(m.accuracy * (1.0 - m.accuracy) / (n - 1.0)) : 0.0;
                out.push_back(row(to_string(level), {fixed6(m.accuracy), fixed6(m.precision), fixed6(m.recall),
                                                     fixed6(se)}));
            }
            out.push_back(row("macro", tail));
            return out;
        }
    }
    return {};
}

std::vector<std::string> header_cells(ExperimentKind kind) {
    std::string lead;
    switch (kind) {
        case ExperimentKind::ablation: lead = "credibility"; break;
        case ExperimentKind::count_sweep: lead = "reporters"; break;
        case ExperimentKind::estimator_compare: lead = "estimator"; break;
        case ExperimentKind::full: lead = "level"; break;
    }
    return {lead, "adversary_frac", "accuracy", "precision", "recall", "stderr_accuracy"};
}

nlohmann::ordered_json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

struct Check {
    std::string name;
    std::vector<double> computed;
    std::vector<double> expected;
};

std::string list(const std::vector<double>& xs, int precision) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    if (xs.size() == 1) {
        os << xs.front();
        return os.str();
    }
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
    os << ']';
    return os.str();
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<Check> paper_checks() {
    // WiFi hotspot: speed, security with a 0-based Low/Medium/High scale, availability.
    const auto schema = make_schema({
        {"speed", AttributeKind::continuous, "mbps", {}, 1, true},
        {"security", AttributeKind::ordinal, "", {"Low", "Medium", "High"}, 0, true},
        {"availability", AttributeKind::continuous, "%", {}, 1, true},
    });
    const auto promise = numerize(schema, {10.0, std::string("Medium"), 90.0});
    const auto observation = numerize(schema, {9.0, std::string("High"), 80.0});

    const std::vector<InstantaneousReport> probes{{"A", 1.0, 2 * 60.0}, {"B", 1.0, 8 * 60.0}, {"C", 1.0, 20 * 60.0}};
    const std::vector<AccumulatedReport> usage{{"A", 1.0, 45 * 60.0, 1}, {"B", 1.0, 20 * 60.0, 1}, {"C", 1.0, 5 * 60.0, 1}};
    Eigen::VectorXd reported(4);
    reported << 0.9, 0.85, 1.0, 0.1;

    return {
        {"instantaneous", {instantaneous_trust(observation, promise)}, {0.93}},
        {"freshness", to_std(freshness_weights(probes).values), {0.07, 0.27, 0.67}},
        {"coverage", to_std(coverage_weights(usage)), {0.64, 0.29, 0.07}},
        {"credibility", to_std(credibilities(reported)), {0.8125, 0.8625, 0.7125, 0.3875}},
    };
}

bool write_output(const RunConfig& config, const std::string& payload, std::ostream& out, std::ostream& err) {
    if (!config.out) {
        out << payload;
        return true;
    }
    std::ofstream file(*config.out, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot open output file '" << config.out->string() << "'\n";
        return false;
    }
    file << payload;
    file.close();
    if (!file) {
        err << "error: failed writing output file '" << config.out->string() << "'\n";
        return false;
    }
    return true;
}

}  // namespace

std::optional<OutputFormat> parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    if (name == "table") return OutputFormat::table;
    return std::nullopt;
}

std::optional<std::uint64_t> parse_seed(const std::string& text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("MLT_SEED");
    if (raw == nullptr) return std::nullopt;
    return parse_seed(raw);
}

std::string csv_header(ExperimentKind kind) {
    std::string out;
    for (const auto& cell : header_cells(kind)) out += (out.empty() ? "" : ",") + cell;
    return out;
}

std::string render_csv(ExperimentKind kind, const std::vector<ExperimentResult>& results) {
    std::string out = csv_header(kind) + "\n";
    for (const auto& r : results) {
        for (const auto& row : rows_for(kind, r)) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
            out += "\n";
        }
    }
    return out;
}

std::string render_table(ExperimentKind kind, const std::vector<ExperimentResult>& results) {
    std::vector<std::vector<std::string>> rows{header_cells(kind)};
    for (const auto& r : results) {
        for (auto& row : rows_for(kind, r)) {
            for (auto& cell : row) {
                if (cell.empty()) cell = "-";
            }
            rows.push_back(std::move(row));
        }
    }
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream os;
    auto rule = [&] {
        for (std::size_t i = 0; i < width.size(); ++i) os << (i ? "-+-" : "") << std::string(width[i], '-');
        os << '\n';
    };
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            os << (i ? " | " : "") << rows[r][i];
            if (i + 1 < rows[r].size()) os << std::string(width[i] - rows[r][i].size(), ' ');
        }
        os << '\n';
        if (r == 0) rule();
    }
    return os.str();
}

std::string render_json(ExperimentKind kind, const ExperimentSpec& spec, std::uint64_t seed,
                        const std::vector<ExperimentResult>& results) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["experiment"] = to_string(kind);
    doc["seed"] = seed;
    doc["replications"] = spec.replications;
    doc["adversary_strategy"] = to_string(spec.adversary_strategy);
    doc["gap_range"] = {spec.gap_range.first, spec.gap_range.second};
    doc["thresholds"] = {spec.thresholds.low_cut, spec.thresholds.high_cut};
    doc["results"] = ordered_json::array();
    for (const auto& r : results) {
        ordered_json item;
        item["reporters"] = r.point.reporters;
        item["adversary_frac"] = r.point.adversary_fraction;
        if (kind == ExperimentKind::ablation) item["credibility"] = r.point.credibility;
        if (r.point.estimator) {
            item["estimator"] = *r.point.estimator == Estimator::accumulated ? "accumulated" : "instantaneous";
        }
        item["samples"] = r.counts.samples();
        item["accuracy"] = r.macro_accuracy;
        item["precision"] = r.macro_precision;
        item["recall"] = r.macro_recall;
        item["stderr_accuracy"] = r.stderr_accuracy;
        ordered_json levels;
        for (auto level : kTrustLevels) {
            const auto& m = r.per_level[static_cast<std::size_t>(level)];
            levels[to_string(level)] = {{"accuracy", m.accuracy},
                                        {"precision", optional_json(m.precision)},
                                        {"recall", optional_json(m.recall)},
                                        {"correct", r.counts.correct(level)},
                                        {"detected", r.counts.detected(level)},
                                        {"actual", r.counts.actual(level)},
                                        {"correct_not", r.counts.correct_not(level)}};
        }
        item["levels"] = std::move(levels);
        doc["results"].push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::optional<ScenarioFile> file;
    try {
        file = load_scenario(config.scenario);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) err << "violation: " << v << '\n';
        return kValidationError;
    }

    Scenario& scenario = file->scenario;
    ExperimentSpec spec = file->experiment;
    spec.kind = config.experiment;
    spec.jobs = config.jobs;
    if (config.replications) spec.replications = *config.replications;
    if (config.seed) {
        scenario.seed = *config.seed;
    } else if (auto env = seed_from_env()) {
        scenario.seed = *env;
    }

    std::vector<ExperimentResult> results;
    try {
        results = run_experiment_suite(scenario, spec);
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) err << "violation: " << v << '\n';
        return kValidationError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    std::string payload;
    switch (config.format) {
        case OutputFormat::csv: payload = render_csv(spec.kind, results); break;
        case OutputFormat::json: payload = render_json(spec.kind, spec, scenario.seed, results); break;
        case OutputFormat::table: payload = render_table(spec.kind, results); break;
    }
    return write_output(config, payload, out, err) ? kOk : kIoError;
}

int cmd_validate(const std::filesystem::path& scenario, std::ostream& out, std::ostream& err) {
    try {
        load_scenario(scenario);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) out << "violation: " << v << '\n';
        return kValidationError;
    }
    out << "OK\n";
    return kOk;
}

int cmd_paper_examples(const PaperExampleOptions& options, std::ostream& out) {
    constexpr double kTolerance = 0.005;
    auto checks = paper_checks();
    if (options.perturb) {
        auto it = std::find_if(checks.begin(), checks.end(), [&](const Check& c) { return c.name == *options.perturb; });
        if (it == checks.end()) {
            out << "error: unknown example '" << *options.perturb << "'\n";
            return kConfigError;
        }
        for (auto& e : it->expected) e += 0.1;
    }

    int passed = 0;
    for (const auto& c : checks) {
        bool ok = c.computed.size() == c.expected.size();
        for (std::size_t i = 0; ok && i < c.computed.size(); ++i) {
            ok = std::abs(c.computed[i] - c.expected[i]) <= kTolerance;
        }
        passed += ok ? 1 : 0;
        out << (ok ? "PASS " : "FAIL ") << c.name << ": computed " << list(c.computed, 6) << " expected "
            << list(c.expected, 4) << " (tolerance " << kTolerance << ")\n";
    }
    out << passed << "/" << checks.size() << " examples passed\n";
    return passed == static_cast<int>(checks.size()) ? kOk : kFailure;
}

}  // namespace mlt::cli
