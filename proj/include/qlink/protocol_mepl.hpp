#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qlink/protocols.hpp"

namespace qlink {

/// Multiplexed extreme-photon-loss machine.
///
/// Stage 1: all n = min(N, N_max) slots stream single-photon attempts, each
/// heralding a raw entangled state with probability eta. The first raw
/// success pins its state in a memory. Stage 2: the remaining n-1 slots keep
/// streaming (attempts already in flight count); the next raw success
/// completes the pair and a distillation round consumes both, succeeding
/// with probability 1/8. Afterwards every slot relaunches, staggered t_c/n
/// apart. A cutoff, when set, bounds how many stage-2 attempts a stored
/// state survives before it is discarded and stage 1 restarts.
///
/// Attempt lattice: a slot heralds t_c after each launch and relaunches on
/// failure, so after a (re)start at T0 the combined herald stream ticks at
/// T0 + t_c + (j-1) * t_c/n. During stage 2 the pinned slot's ticks drop out
/// of the stream. The jump mode samples the two geometric stage lengths
/// directly on this lattice; the granular mode walks it attempt by attempt.
class MeplMachine {
  public:
    MeplMachine(const NetworkParams& params, const LinkGeometry& geom, const ProtocolConfig& cfg,
                std::uint64_t seed, std::uint64_t replication, bool granular)
        : granular_(granular),
          stream_(make_stream(seed, replication, StreamRole::midpoint)),
          node_(cfg.n_qubits) {
        params.validate();
        geom.validate();
        cfg.validate();
        if (cfg.protocol != Protocol::mepl) throw DomainError("MeplMachine needs an mepl config");
        tc_ = comm_time(params, geom);
        teg_ = params.t_eg;
        p_raw_ = transmission_efficiency(params, geom);
        n_eff_ = effective_qubits(params, geom, cfg);
        spacing_ = tc_ / static_cast<double>(n_eff_);
        cutoff_ = cfg.cutoff;
        locc_delay_ = cfg.epl_locc_delay ? tc_ : 0.0;
        if (!granular_ && static_cast<double>(n_eff_) * teg_ > tc_)
            throw DomainError("mepl jump mode requires n_eff * t_eg <= t_c; run granular instead");
        slots_.resize(static_cast<std::size_t>(n_eff_));
    }

    int n_effective() const { return n_eff_; }

    void start(Sim& sim) { restart(sim, 0.0); }

    void handle(Sim& sim, const Event& e) {
        granular_ ? handle_granular(sim, e) : handle_jump(sim, e);
    }

  private:
    enum class Phase { stage1, stage2, resolving };

    // discard reasons carried in Event::tag
    static constexpr std::int64_t kDiscardDistill = 1;
    static constexpr std::int64_t kDiscardCutoff = 2;

    // --- shared cycle control ---------------------------------------------

    void restart(Sim& sim, double t0) {
        phase_ = Phase::stage1;
        pinned_slot_ = -1;
        ++epoch_;
        node_ = NodeState(static_cast<int>(node_.memories.size()) + 1);
        if (granular_) {
            for (int k = 0; k < n_eff_; ++k)
                sim.schedule(t0 + static_cast<double>(k) * spacing_, EventKind::attempt_start, k, epoch_);
        } else {
            jump_stage1(sim, t0);
        }
    }

    // --- jump mode ---------------------------------------------------------

    // j-th stage-2 herald after the pin: the full lattice ticks every
    // spacing, minus the pinned slot's ticks (every n-th, starting at t_c).
    double stage2_tick(double j) const {
        const double skips = std::floor((j - 1.0) / static_cast<double>(n_eff_ - 1));
        return (j + skips) * spacing_;
    }

    void jump_stage1(Sim& sim, double t0) {
        const double j = stream_.geometric(p_raw_);
        sim.counter("attempts") += j;
        sim.counter("raw_successes") += 1;
        pinned_slot_ = static_cast<int>(std::fmod(j - 1.0, static_cast<double>(n_eff_)));
        phase_ = Phase::stage2;
        sim.schedule(t0 + tc_ + (j - 1.0) * spacing_, EventKind::herald_arrival, pinned_slot_, 1);
    }

    void jump_stage2(Sim& sim, double h1) {
        const double j = stream_.geometric(p_raw_);
        if (cutoff_ && j > static_cast<double>(*cutoff_)) {
            const double c = static_cast<double>(*cutoff_);
            sim.counter("attempts") += c;
            sim.counter("stage2_attempts") += c;
            sim.schedule(h1 + stage2_tick(c), EventKind::discard, pinned_slot_, kDiscardCutoff);
            return;
        }
        sim.counter("attempts") += j;
        sim.counter("stage2_attempts") += j;
        sim.counter("raw_successes") += 1;
        const int slot = static_cast<int>(std::fmod(static_cast<double>(pinned_slot_) + stage2_tick(j) / spacing_,
                                                    static_cast<double>(n_eff_)));
        sim.schedule(h1 + stage2_tick(j), EventKind::herald_arrival, slot, 2);
    }

    void handle_jump(Sim& sim, const Event& e) {
        switch (e.kind) {
            case EventKind::herald_arrival:
                if (e.tag == 1) {  // first raw state pinned
                    jump_stage2(sim, sim.now());
                } else {  // second raw state ready: distill
                    resolve_distillation(sim);
                }
                return;
            case EventKind::success:
                sim.record_success();
                restart(sim, sim.now());
                return;
            case EventKind::discard:
                sim.counter(e.tag == kDiscardCutoff ? "discards_cutoff" : "discards_distill") += 1;
                restart(sim, sim.now());
                return;
            default:
                throw SimError("mepl jump mode: unexpected event kind");
        }
    }

    // Both raw states exist; draw the distillation coin. The verdict lands
    // after the optional classical-communication delay.
    void resolve_distillation(Sim& sim) {
        phase_ = Phase::resolving;
        sim.counter("distill_rounds") += 1;
        const bool ok = stream_.bernoulli(1.0 / 8.0);
        const double t_out = sim.now() + locc_delay_;
        if (ok) {
            sim.schedule(t_out, EventKind::success, pinned_slot_);
        } else {
            sim.schedule(t_out, EventKind::discard, pinned_slot_, kDiscardDistill);
        }
    }

    // --- granular mode -------------------------------------------------

    struct SlotState {
        std::int64_t attempt_id = -1;
        std::int64_t epoch = -1;  // stale events from before a restart are ignored
        bool outcome = false;
    };

    void relaunch(Sim& sim, int slot) { sim.schedule(sim.now(), EventKind::attempt_start, slot, epoch_); }

    void handle_granular(Sim& sim, const Event& e) {
        auto& slot = slots_[static_cast<std::size_t>(std::max<std::int32_t>(e.slot, 0))];
        switch (e.kind) {
            case EventKind::attempt_start: {
                if (e.tag != epoch_) return;  // voided by a restart
                if (node_.comm_busy_until > sim.now()) {
                    sim.schedule(node_.comm_busy_until, EventKind::attempt_start, e.slot, e.tag);
                    return;
                }
                node_.comm_busy_until = sim.now() + teg_;
                slot.attempt_id = next_attempt_id_++;
                slot.epoch = epoch_;
                sim.trace("AB", e.kind, "slot=" + std::to_string(e.slot) + " attempt=" + std::to_string(slot.attempt_id));
                sim.schedule(sim.now() + teg_, EventKind::swap_complete, e.slot, slot.attempt_id);
                sim.schedule(sim.now() + tc_ / 2.0, EventKind::photon_arrival, e.slot, slot.attempt_id);
                sim.schedule(sim.now() + tc_, EventKind::herald_arrival, e.slot, slot.attempt_id);
                return;
            }
            case EventKind::swap_complete: {
                if (slot.epoch != epoch_ || e.tag != slot.attempt_id) return;  // stale
                int mem = node_.park(slot.attempt_id);
                sim.trace("AB", e.kind,
                          "attempt=" + std::to_string(e.tag) +
                              (mem >= 0 ? " mem=" + std::to_string(mem) : " held_on_comm") + " " + node_.summary());
                return;
            }
            case EventKind::photon_arrival: {
                if (slot.epoch != epoch_ || e.tag != slot.attempt_id) return;  // stale
                slot.outcome = stream_.bernoulli(p_raw_);
                sim.trace("mid", e.kind,
                          "attempt=" + std::to_string(e.tag) + " click=" + (slot.outcome ? "1" : "0"));
                return;
            }
            case EventKind::herald_arrival:
                handle_granular_herald(sim, e, slot);
                return;
            case EventKind::success: {
                if (e.tag != epoch_) return;
                sim.record_success();
                sim.trace("AB", e.kind, "distilled");
                restart(sim, sim.now());
                return;
            }
            case EventKind::discard: {
                if (e.tag != epoch_) return;
                sim.counter(discard_reason_ == kDiscardCutoff ? "discards_cutoff" : "discards_distill") += 1;
                sim.trace("AB", e.kind, discard_reason_ == kDiscardCutoff ? "cutoff" : "distill_failed");
                restart(sim, sim.now());
                return;
            }
            default:
                throw SimError("mepl granular mode: unexpected event kind");
        }
    }

    void handle_granular_herald(Sim& sim, const Event& e, SlotState& slot) {
        if (slot.epoch != epoch_ || e.tag != slot.attempt_id) {
            sim.trace("AB", e.kind, "attempt=" + std::to_string(e.tag) + " stale");
            return;
        }
        if (phase_ == Phase::resolving) {
            // distillation outcome pending; this in-flight attempt is wasted
            node_.release(slot.attempt_id);
            slot.epoch = -1;
            sim.trace("AB", e.kind, "attempt=" + std::to_string(e.tag) + " ignored_during_distillation");
            return;
        }
        if (phase_ == Phase::stage1) {
            sim.counter("attempts") += 1;
            if (slot.outcome) {
                sim.counter("raw_successes") += 1;
                pinned_slot_ = e.slot;
                phase_ = Phase::stage2;
                attempts_since_stored_ = 0;
                int mem = node_.find(slot.attempt_id);
                if (mem < 0) throw SimError("mepl: raw state pinned while not memory-resident");
                node_.memories[static_cast<std::size_t>(mem)].status = MemorySlot::Status::holding_raw;
                sim.trace("AB", e.kind,
                          "attempt=" + std::to_string(e.tag) + " raw_success stored mem=" + std::to_string(mem) +
                              " " + node_.summary());
                // slot stays pinned; the other slots keep streaming
            } else {
                node_.release(slot.attempt_id);
                int hopped = node_.hop_comm_state();
                if (hopped >= 0)
                    sim.trace("AB", EventKind::swap_complete, "hop mem=" + std::to_string(hopped) + " " + node_.summary());
                sim.trace("AB", e.kind, "attempt=" + std::to_string(e.tag) + " fail " + node_.summary());
                relaunch(sim, e.slot);
            }
            return;
        }
        // stage 2
        sim.counter("attempts") += 1;
        sim.counter("stage2_attempts") += 1;
        ++attempts_since_stored_;
        if (int mem = pinned_memory(); mem >= 0)
            node_.memories[static_cast<std::size_t>(mem)].attempts_since_stored = attempts_since_stored_;
        if (slot.outcome) {
            sim.counter("raw_successes") += 1;
            node_.release(slot.attempt_id);
            sim.trace("AB", e.kind, "attempt=" + std::to_string(e.tag) + " raw_success pair_complete");
            sim.counter("distill_rounds") += 1;
            const bool ok = stream_.bernoulli(1.0 / 8.0);
            phase_ = Phase::resolving;
            const double t_out = sim.now() + locc_delay_;
            if (ok) {
                sim.schedule(t_out, EventKind::success, e.slot, epoch_);
            } else {
                discard_reason_ = kDiscardDistill;
                sim.schedule(t_out, EventKind::discard, e.slot, epoch_);
            }
            return;
        }
        node_.release(slot.attempt_id);
        int hopped = node_.hop_comm_state();
        if (hopped >= 0)
            sim.trace("AB", EventKind::swap_complete, "hop mem=" + std::to_string(hopped) + " " + node_.summary());
        sim.trace("AB", e.kind, "attempt=" + std::to_string(e.tag) + " fail " + node_.summary());
        if (cutoff_ && attempts_since_stored_ >= *cutoff_) {
            discard_reason_ = kDiscardCutoff;
            sim.schedule(sim.now(), EventKind::discard, e.slot, epoch_);
            return;
        }
        relaunch(sim, e.slot);
    }

    int pinned_memory() const {
        for (std::size_t i = 0; i < node_.memories.size(); ++i)
            if (node_.memories[i].status == MemorySlot::Status::holding_raw) return static_cast<int>(i);
        return -1;
    }

    bool granular_;
    RandomStream stream_;
    NodeState node_;
    double tc_ = 0.0;
    double teg_ = 0.0;
    double p_raw_ = 0.0;
    double spacing_ = 0.0;
    double locc_delay_ = 0.0;
    int n_eff_ = 2;
    std::optional<std::int64_t> cutoff_;

    Phase phase_ = Phase::stage1;
    int pinned_slot_ = -1;
    std::int64_t epoch_ = 0;
    std::int64_t next_attempt_id_ = 0;
    std::int64_t attempts_since_stored_ = 0;
    std::int64_t discard_reason_ = kDiscardDistill;
    std::vector<SlotState> slots_;
};

}  // namespace qlink
