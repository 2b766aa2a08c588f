#include "mlt/simulator.hpp"

#include "mlt/detail/format.hpp"
#include "mlt/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace mlt {

namespace {

using detail::format_number;

// Stream salts keep bystander and consumer streams disjoint for equal indices.
constexpr std::uint64_t kBystanderSalt = 0x62797374;  // "byst"
constexpr std::uint64_t kConsumerSalt = 0x636f6e73;   // "cons"

template <typename Fn>
void collect(std::vector<std::string>& out, const std::string& prefix, Fn&& fn) {
    try {
        fn();
    } catch (const InvalidArgument& e) {
        out.push_back(prefix + e.what());
    }
}

struct PendingEvent {
    double offset;
    const std::string* reporter_id;
    EventKind kind;
    std::size_t agent;  // index into bystanders or consumers
};

}  // namespace

std::vector<std::string> scenario_violations(const Scenario& s) {
    std::vector<std::string> out;
    const double duration = s.session.duration();

    collect(out, "provider: ", [&] { s.provider.validate(s.session.schema()); });
    collect(out, "aggregation: ", [&] { s.params.validate(); });

    if (!(s.query_time > 0.0) || s.query_time > duration) {
        out.push_back("query_time " + format_number(s.query_time) + " s lies outside the session (0, " +
                      format_number(duration) + "] s");
    }

    std::set<std::string> ids;
    auto check_id = [&](const std::string& role, const std::string& id) {
        if (id.empty()) {
            out.push_back(role + " with an empty id");
        } else if (!ids.insert(id).second) {
            out.push_back("duplicate reporter id '" + id + "'");
        }
    };

    for (const auto& b : s.bystanders) {
        check_id("bystander", b.id);
        const std::string prefix = "bystander '" + b.id + "': ";
        collect(out, prefix, [&] { b.profile.validate(); });
        for (const auto& v : b.schedule.violations(duration)) out.push_back(prefix + v);
    }
    for (const auto& c : s.consumers) {
        check_id("consumer", c.id);
        const std::string prefix = "consumer '" + c.id + "': ";
        collect(out, prefix, [&] { c.profile.validate(); });
        if (!(c.usage_start >= 0.0)) out.push_back(prefix + "usage_start must be >= 0");
        if (!(c.usage_end > c.usage_start)) out.push_back(prefix + "usage_end must be after usage_start");
        if (c.usage_end > duration) {
            out.push_back(prefix + "usage_end " + format_number(c.usage_end) +
                          " s falls after the session end (" + format_number(duration) + " s)");
        }
        if (!(c.sample_interval > 0.0)) out.push_back(prefix + "sample_interval must be > 0");
    }
    return out;
}

void validate(const Scenario& scenario) {
    if (auto problems = scenario_violations(scenario); !problems.empty()) {
        throw ValidationError(std::move(problems));
    }
}

SessionTrace run_scenario(const Scenario& s) {
    validate(s);
    const double query = s.query_time;
    const auto& schema = s.session.schema_ptr();
    const auto& promise = s.session.promise();

    std::vector<PendingEvent> pending;
    for (std::size_t i = 0; i < s.bystanders.size(); ++i) {
        const auto& b = s.bystanders[i];
        for (int k = 0; k < b.schedule.count; ++k) {
            const double t = b.schedule.first_offset + k * b.schedule.interval;
            if (t > query) break;
            pending.push_back({t, &b.id, EventKind::probe, i});
        }
    }
    for (std::size_t i = 0; i < s.consumers.size(); ++i) {
        const auto& c = s.consumers[i];
        const double end = std::min(c.usage_end, query);
        for (int k = 0;; ++k) {
            const double t = c.usage_start + k * c.sample_interval;
            if (t > end) break;
            pending.push_back({t, &c.id, EventKind::consumer_sample, i});
        }
    }
    std::stable_sort(pending.begin(), pending.end(), [](const PendingEvent& a, const PendingEvent& b) {
        if (a.offset != b.offset) return a.offset < b.offset;
        return *a.reporter_id < *b.reporter_id;
    });

    std::vector<Rng> bystander_rng;
    std::vector<Rng> consumer_rng;
    bystander_rng.reserve(s.bystanders.size());
    consumer_rng.reserve(s.consumers.size());
    for (std::size_t i = 0; i < s.bystanders.size(); ++i) bystander_rng.push_back(make_stream(s.seed, i, kBystanderSalt));
    for (std::size_t i = 0; i < s.consumers.size(); ++i) consumer_rng.push_back(make_stream(s.seed, i, kConsumerSalt));

    std::vector<std::optional<InstantaneousReport>> latest_probe(s.bystanders.size());
    std::vector<std::optional<double>> accumulated(s.consumers.size());
    std::vector<int> sample_count(s.consumers.size(), 0);

    SessionTrace trace;
    trace.query_time = query;
    trace.events.reserve(pending.size());
    for (const auto& ev : pending) {
        const bool is_probe = ev.kind == EventKind::probe;
        Rng& rng = is_probe ? bystander_rng[ev.agent] : consumer_rng[ev.agent];
        const auto& profile = is_probe ? s.bystanders[ev.agent].profile : s.consumers[ev.agent].profile;

        const auto observed = sample_true_performance(s.provider, schema, ev.offset, rng);
        const double measured = instantaneous_trust(observed, promise);
        const double reported = observe(profile, measured, rng);

        TraceEvent out{ev.offset, *ev.reporter_id, ev.kind, measured, reported, std::nullopt};
        if (is_probe) {
            latest_probe[ev.agent] = InstantaneousReport{*ev.reporter_id, reported, ev.offset};
        } else {
            auto& acc = accumulated[ev.agent];
            acc = acc ? update_accumulated(*acc, reported, s.params.alpha) : reported;
            ++sample_count[ev.agent];
            out.accumulated = acc;
        }
        trace.events.push_back(std::move(out));
    }

    for (std::size_t i = 0; i < s.consumers.size(); ++i) {
        const auto& c = s.consumers[i];
        const double coverage = std::min(query, c.usage_end) - c.usage_start;
        if (!accumulated[i] || coverage <= 0.0) continue;
        trace.consumer_reports.push_back({c.id, *accumulated[i], coverage, sample_count[i]});
    }
    for (auto& probe : latest_probe) {
        if (probe) trace.bystander_reports.push_back(std::move(*probe));
    }

    trace.final_breakdown = aggregate(trace.consumer_reports, trace.bystander_reports, s.params);
    trace.ground_truth_trust =
        instantaneous_trust(expected_performance(s.provider, schema, query), promise);
    return trace;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(jobs, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n && !failed; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

std::vector<SessionTrace> run_replications(const Scenario& scenario, std::size_t n, unsigned jobs) {
    if (n == 0) throw InvalidArgument("replication count must be >= 1");
    validate(scenario);
    std::vector<SessionTrace> traces(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        Scenario copy = scenario;
        copy.seed = scenario.seed + i;
        traces[i] = run_scenario(copy);
    });
    return traces;
}

std::string to_string(EventKind kind) {
    return kind == EventKind::probe ? "probe" : "consumer_sample";
}

}  // namespace mlt
