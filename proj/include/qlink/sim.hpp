#pragma once

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qlink/errors.hpp"
#include "qlink/event_queue.hpp"
#include "qlink/random.hpp"

namespace qlink {

/// When to end one replication. If both limits are set the run ends at
/// whichever is reached first.
struct StopRule {
    std::optional<std::int64_t> success_target;  // >= 1
    std::optional<double> duration;              // simulated seconds

    static StopRule successes(std::int64_t n) { return StopRule{n, std::nullopt}; }
    static StopRule sim_duration(double t) { return StopRule{std::nullopt, t}; }

    void validate() const {
        if (!success_target && !duration) throw DomainError("stop rule needs a success target or a duration");
        if (success_target && *success_target < 1) throw DomainError("success target must be >= 1");
        if (duration && !(*duration > 0.0)) throw DomainError("stop duration must be > 0");
    }
};

using TraceSink = std::function<void(double time, const char* node, EventKind kind, const std::string& detail)>;

struct RunOptions {
    TraceSink trace;                 // optional line sink; cheap no-op when empty
    std::uint64_t max_events = 0;    // 0 = unlimited; safety valve for tests
};

struct RunResult {
    std::int64_t successes = 0;
    double sim_time = 0.0;
    std::uint64_t events = 0;
    std::uint64_t digest = 0xcbf29ce484222325ULL;  // FNV-1a over popped events
    std::map<std::string, double> counters;

    double rate() const { return sim_time > 0.0 ? static_cast<double>(successes) / sim_time : 0.0; }
};

class Sim;

template <typename M>
RunResult run(M& machine, const StopRule& stop, const RunOptions& opts = {});

/// Facade handed to protocol machines: simulated clock, scheduling, success
/// accounting, tallies, trace lines. One Sim per single-threaded run.
class Sim {
  public:
    double now() const { return now_; }

    void schedule(double time, EventKind kind, std::int32_t slot = -1, std::int64_t tag = 0) {
        if (time < now_) throw SimError("attempt to schedule an event in the past");
        queue_.push(time, kind, slot, tag);
    }

    void record_success() { ++result_.successes; }

    double& counter(const std::string& name) { return result_.counters[name]; }

    bool tracing() const { return static_cast<bool>(opts_.trace); }
    void trace(const char* node, EventKind kind, const std::string& detail) {
        if (opts_.trace) opts_.trace(now_, node, kind, detail);
    }

  private:
    template <typename M>
    friend RunResult run(M&, const StopRule&, const RunOptions&);

    explicit Sim(RunOptions opts) : opts_(std::move(opts)) {}

    void fold_digest(const Event& e) {
        auto mix = [this](std::uint64_t v) {
            result_.digest ^= v;
            result_.digest *= 0x100000001b3ULL;
        };
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof e.time);
        std::memcpy(&bits, &e.time, sizeof bits);
        mix(bits);
        mix(static_cast<std::uint64_t>(e.kind));
        mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.slot)));
        mix(static_cast<std::uint64_t>(e.tag));
    }

    EventQueue queue_;
    RunOptions opts_;
    RunResult result_;
    double now_ = 0.0;
};

template <typename M>
concept ProtocolMachine = requires(M m, Sim& sim, const Event& e) {
    m.start(sim);
    m.handle(sim, e);
};

/// Drain the machine's event queue until the stop rule is met. Strictly
/// single threaded and deterministic: same machine state + same streams give
/// bit-identical results. Signals livelock if the queue dries up first.
template <typename M>
RunResult run(M& machine, const StopRule& stop, const RunOptions& opts) {
    static_assert(ProtocolMachine<M>);
    stop.validate();
    Sim sim(opts);
    machine.start(sim);
    for (;;) {
        if (stop.success_target && sim.result_.successes >= *stop.success_target) {
            // sim_time pins at the event that delivered the final success
            sim.result_.sim_time = sim.now_;
            break;
        }
        if (sim.queue_.empty()) {
            if (stop.duration) {
                sim.result_.sim_time = *stop.duration;  // nothing left to happen
                break;
            }
            throw SimError("livelock: no scheduled events while the stop rule is unmet");
        }
        if (stop.duration && sim.queue_.peek().time > *stop.duration) {
            sim.result_.sim_time = *stop.duration;
            break;
        }
        Event e = sim.queue_.pop();
        assert(e.time >= sim.now_);  // clock never moves backward
        sim.now_ = e.time;
        ++sim.result_.events;
        sim.fold_digest(e);
        machine.handle(sim, e);
        if (opts.max_events && sim.result_.events >= opts.max_events)
            throw SimError("event budget exhausted before the stop rule was met");
    }
    return sim.result_;
}

/// Monte Carlo estimate across replications.
struct RateEstimate {
    std::int64_t successes = 0;       // pooled
    double sim_time = 0.0;            // pooled
    double rate = 0.0;                // pooled successes / pooled sim_time, Hz
    std::optional<double> stderr_hz;  // sample sd of per-replication rates / sqrt(R); absent for R = 1
    int replications = 0;
    std::uint64_t seed = 0;
};

struct ReplicateDetail {
    std::vector<RunResult> runs;  // indexed by replication
};

/// Run R independent replications and merge. The factory is called as
/// factory(rep_index) and must produce a fresh machine whose streams are
/// derived from (seed, rep_index); replications are therefore independent
/// and can be executed on worker threads without shared mutable state.
/// Results are merged by replication index, so the estimate does not depend
/// on the thread count.
template <typename Factory>
RateEstimate replicate(Factory&& factory, const StopRule& stop, int replications,
                       std::uint64_t seed, int threads = 0, ReplicateDetail* detail = nullptr) {
    if (replications < 1) throw DomainError("replications must be >= 1");
    std::vector<RunResult> runs(static_cast<std::size_t>(replications));
    std::vector<std::string> errors(static_cast<std::size_t>(replications));

    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int workers = threads > 0 ? threads : hw;
    if (workers > replications) workers = replications;

    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            int rep = next.fetch_add(1);
            if (rep >= replications) return;
            try {
                auto machine = factory(rep);
                runs[static_cast<std::size_t>(rep)] = run(machine, stop);
            } catch (const std::exception& ex) {
                errors[static_cast<std::size_t>(rep)] = ex.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (int rep = 0; rep < replications; ++rep) {
        if (!errors[static_cast<std::size_t>(rep)].empty())
            throw SimError("replication " + std::to_string(rep) + ": " + errors[static_cast<std::size_t>(rep)]);
    }

    RateEstimate est;
    est.replications = replications;
    est.seed = seed;
    std::vector<double> rates;
    rates.reserve(runs.size());
    for (const auto& r : runs) {
        est.successes += r.successes;
        est.sim_time += r.sim_time;
        rates.push_back(r.rate());
    }
    est.rate = est.sim_time > 0.0 ? static_cast<double>(est.successes) / est.sim_time : 0.0;
    if (replications >= 2) {
        double mean = 0.0;
        for (double r : rates) mean += r;
        mean /= static_cast<double>(rates.size());
        double ss = 0.0;
        for (double r : rates) ss += (r - mean) * (r - mean);
        double sd = std::sqrt(ss / static_cast<double>(rates.size() - 1));
        est.stderr_hz = sd / std::sqrt(static_cast<double>(rates.size()));
    }
    if (detail) detail->runs = std::move(runs);
    return est;
}

}  // namespace qlink
