#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qlink/protocols.hpp"

namespace qlink {

/// Multiplexed Barrett-Kok machine.
///
/// Both nodes emit a spin-entangled photon towards the midpoint station,
/// where a probabilistic Bell measurement heralds success with probability
/// eta^2 / 2; the verdict reaches the nodes t_c after emission. Each stored
/// attempt ties up one qubit until its herald returns, so min(N, N_max)
/// attempt slots cycle with period t_c, staggered t_c/n apart. Swap gates
/// are treated as instantaneous state transfers; their duration enters
/// through the N_max clamp (see mbk_qubit_limit).
///
/// Two execution modes with the same statistics:
///  - granular: every attempt is simulated and traced,
///  - jump: per-slot geometric jumps straight to the next success herald
///    (the production path; heavy loss makes per-attempt stepping
///    infeasible at long distances).
class MbkMachine {
  public:
    MbkMachine(const NetworkParams& params, const LinkGeometry& geom, const ProtocolConfig& cfg,
               std::uint64_t seed, std::uint64_t replication, bool granular)
        : granular_(granular),
          stream_(make_stream(seed, replication, StreamRole::midpoint)),
          node_(cfg.n_qubits) {
        params.validate();
        geom.validate();
        cfg.validate();
        if (cfg.protocol != Protocol::mbk) throw DomainError("MbkMachine needs an mbk config");
        tc_ = comm_time(params, geom);
        teg_ = params.t_eg;
        const double eff = transmission_efficiency(params, geom);
        p_success_ = eff * eff / 2.0;
        n_eff_ = effective_qubits(params, geom, cfg);
        spacing_ = tc_ / static_cast<double>(n_eff_);
        if (!granular_ && static_cast<double>(n_eff_) * teg_ > tc_)
            throw DomainError("mbk jump mode requires n_eff * t_eg <= t_c; run granular instead");
        slots_.resize(static_cast<std::size_t>(n_eff_));
        pending_attempts_.assign(static_cast<std::size_t>(n_eff_), 0.0);
    }

    int n_effective() const { return n_eff_; }

    void start(Sim& sim) {
        for (int k = 0; k < n_eff_; ++k) {
            const double t0 = static_cast<double>(k) * spacing_;
            if (granular_) {
                sim.schedule(t0, EventKind::attempt_start, k);
            } else {
                schedule_jump(sim, k, t0);
            }
        }
    }

    void handle(Sim& sim, const Event& e) {
        granular_ ? handle_granular(sim, e) : handle_jump(sim, e);
    }

  private:
    struct SlotState {
        std::int64_t attempt_id = -1;
        bool outcome = false;
        double launch_time = 0.0;
    };

    // --- jump mode -------------------------------------------------------

    // Launches on slot k recur with period t_c; attempt j heralds at
    // launch_base + j*t_c. The next success is attempt K ~ Geom(eta^2/2).
    void schedule_jump(Sim& sim, int k, double launch_base) {
        const double attempts = stream_.geometric(p_success_);
        pending_attempts_[static_cast<std::size_t>(k)] = attempts;
        sim.schedule(launch_base + attempts * tc_, EventKind::herald_arrival, k);
    }

    void handle_jump(Sim& sim, const Event& e) {
        if (e.kind == EventKind::herald_arrival) {
            sim.counter("attempts") += pending_attempts_[static_cast<std::size_t>(e.slot)];
            sim.schedule(sim.now(), EventKind::success, e.slot);
            return;
        }
        if (e.kind == EventKind::success) {
            sim.record_success();
            schedule_jump(sim, e.slot, sim.now());  // the slot's lattice continues
            return;
        }
        throw SimError("mbk jump mode: unexpected event kind");
    }

    // --- granular mode ---------------------------------------------------

    void handle_granular(Sim& sim, const Event& e) {
        auto& slot = slots_[static_cast<std::size_t>(e.slot)];
        switch (e.kind) {
            case EventKind::attempt_start: {
                if (node_.comm_busy_until > sim.now()) {
                    // communication qubit still emitting for another slot
                    sim.schedule(node_.comm_busy_until, EventKind::attempt_start, e.slot);
                    return;
                }
                node_.comm_busy_until = sim.now() + teg_;
                slot.attempt_id = next_attempt_id_++;
                slot.launch_time = sim.now();
                sim.counter("attempts") += 1;
                sim.trace("AB", e.kind, "slot=" + std::to_string(e.slot) + " attempt=" + std::to_string(slot.attempt_id));
                if (n_eff_ > 1) sim.schedule(sim.now() + teg_, EventKind::swap_complete, e.slot);
                sim.schedule(sim.now() + tc_ / 2.0, EventKind::photon_arrival, e.slot);
                sim.schedule(sim.now() + tc_, EventKind::herald_arrival, e.slot);
                return;
            }
            case EventKind::swap_complete: {
                int mem = node_.park(slot.attempt_id);
                sim.trace("AB", e.kind,
                          "attempt=" + std::to_string(slot.attempt_id) +
                              (mem >= 0 ? " mem=" + std::to_string(mem) : " held_on_comm") + " " + node_.summary());
                return;
            }
            case EventKind::photon_arrival: {
                // both photons reach the midpoint; the Bell measurement verdict
                // is decided here and travels back as the herald
                slot.outcome = stream_.bernoulli(p_success_);
                sim.trace("mid", e.kind,
                          "attempt=" + std::to_string(slot.attempt_id) + " bsm=" + (slot.outcome ? "ok" : "fail"));
                return;
            }
            case EventKind::herald_arrival: {
                if (n_eff_ > 1) {
                    node_.release(slot.attempt_id);
                    int hopped = node_.hop_comm_state();
                    if (hopped >= 0)
                        sim.trace("AB", EventKind::swap_complete, "hop mem=" + std::to_string(hopped) + " " + node_.summary());
                }
                sim.trace("AB", e.kind,
                          "attempt=" + std::to_string(slot.attempt_id) + " outcome=" + (slot.outcome ? "ok" : "fail") +
                              " " + node_.summary());
                if (slot.outcome) {
                    sim.schedule(sim.now(), EventKind::success, e.slot);
                } else {
                    sim.schedule(sim.now(), EventKind::attempt_start, e.slot);
                }
                return;
            }
            case EventKind::success: {
                sim.record_success();
                sim.trace("AB", e.kind, "attempt=" + std::to_string(slot.attempt_id));
                sim.schedule(sim.now(), EventKind::attempt_start, e.slot);
                return;
            }
            default:
                throw SimError("mbk granular mode: unexpected event kind");
        }
    }

    bool granular_;
    RandomStream stream_;
    NodeState node_;
    double tc_ = 0.0;
    double teg_ = 0.0;
    double p_success_ = 0.0;
    double spacing_ = 0.0;
    int n_eff_ = 1;
    std::int64_t next_attempt_id_ = 0;
    std::vector<SlotState> slots_;
    std::vector<double> pending_attempts_;
};

}  // namespace qlink
