#pragma once

#include <cstdint>
#include <optional>

#include "qlink/protocol_mbk.hpp"
#include "qlink/protocol_mepl.hpp"
#include "qlink/protocol_mps.hpp"
#include "qlink/sim.hpp"

namespace qlink {

struct SimSettings {
    std::uint64_t seed = 1;
    int replications = 20;
    std::int64_t successes_per_replication = 2000;
    std::optional<double> duration;  // alternative stop rule, simulated seconds
    int threads = 0;                 // 0 = available parallelism
    bool granular = false;           // per-attempt stepping (forced by tracing)

    StopRule stop_rule() const {
        StopRule s;
        if (duration) {
            s.duration = duration;
        } else {
            s.success_target = successes_per_replication;
        }
        return s;
    }

    bool operator==(const SimSettings&) const = default;
};

template <typename M>
RateEstimate replicate_machine(const NetworkParams& params, const LinkGeometry& geom, const ProtocolConfig& cfg,
                               const SimSettings& sim, ReplicateDetail* detail) {
    auto factory = [&](int rep) {
        return M(params, geom, cfg, sim.seed, static_cast<std::uint64_t>(rep), sim.granular);
    };
    return replicate(factory, sim.stop_rule(), sim.replications, sim.seed, sim.threads, detail);
}

/// Monte Carlo rate estimate for the configured protocol.
inline RateEstimate simulate(const NetworkParams& params, const LinkGeometry& geom, const ProtocolConfig& cfg,
                             const SimSettings& sim, ReplicateDetail* detail = nullptr) {
    switch (cfg.protocol) {
        case Protocol::mbk: return replicate_machine<MbkMachine>(params, geom, cfg, sim, detail);
        case Protocol::mepl: return replicate_machine<MeplMachine>(params, geom, cfg, sim, detail);
        case Protocol::mps: return replicate_machine<MpsMachine>(params, geom, cfg, sim, detail);
    }
    throw DomainError("unknown protocol");
}

/// Single replication with full control over run options (tracing).
inline RunResult simulate_once(const NetworkParams& params, const LinkGeometry& geom, const ProtocolConfig& cfg,
                               const StopRule& stop, std::uint64_t seed, std::uint64_t replication,
                               bool granular, const RunOptions& opts = {}) {
    switch (cfg.protocol) {
        case Protocol::mbk: {
            MbkMachine m(params, geom, cfg, seed, replication, granular);
            return run(m, stop, opts);
        }
        case Protocol::mepl: {
            MeplMachine m(params, geom, cfg, seed, replication, granular);
            return run(m, stop, opts);
        }
        case Protocol::mps: {
            MpsMachine m(params, geom, cfg, seed, replication, granular);
            return run(m, stop, opts);
        }
    }
    throw DomainError("unknown protocol");
}

}  // namespace qlink
