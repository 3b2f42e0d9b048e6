#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "qlink/protocols.hpp"

namespace qlink {

/// Midpoint-source machine (low-n regime, one qubit per node).
///
/// A photon-pair source midway between the nodes fires every t_eg, emitting
/// a pair with probability p_em. Each node measures the incoming photon
/// against a locally generated one; conditional on emission each local Bell
/// measurement succeeds independently with probability eta/2, so a round
/// succeeds jointly with probability p_em * eta^2 / 4. Local outcomes are
/// known immediately; the partner's verdict arrives t_c later, which is when
/// a joint success is counted and when a local-only success is discarded.
/// Rounds never pause for pending verdicts, matching the n << 1 operating
/// regime where idle time is negligible.
class MpsMachine {
  public:
    MpsMachine(const NetworkParams& params, const LinkGeometry& geom, const ProtocolConfig& cfg,
               std::uint64_t seed, std::uint64_t replication, bool granular)
        : granular_(granular),
          source_(make_stream(seed, replication, StreamRole::midpoint)),
          node_a_(make_stream(seed, replication, StreamRole::node_a)),
          node_b_(make_stream(seed, replication, StreamRole::node_b)) {
        params.validate();
        geom.validate();
        cfg.validate();
        if (cfg.protocol != Protocol::mps) throw DomainError("MpsMachine needs an mps config");
        tc_ = comm_time(params, geom);
        teg_ = params.t_eg;
        p_em_ = cfg.p_em;
        const double eff = transmission_efficiency(params, geom);
        p_local_ = eff / 2.0;                      // per node, given emission
        p_joint_ = p_em_ * p_local_ * p_local_;    // per round
        // per non-joint round: exactly one node registers a local success
        p_single_given_nonjoint_ = p_em_ * p_local_ * (1.0 - p_local_) / (1.0 - p_joint_);
    }

    int n_effective() const { return 1; }

    void start(Sim& sim) {
        if (granular_) {
            sim.schedule(0.0, EventKind::attempt_start);
        } else {
            next_round_time_ = 0.0;
            schedule_jump(sim);
        }
    }

    void handle(Sim& sim, const Event& e) {
        granular_ ? handle_granular(sim, e) : handle_jump(sim, e);
    }

  private:
    // --- jump mode -------------------------------------------------------

    // Rounds tick every t_eg; the next joint success is K ~ Geom(p_joint)
    // rounds ahead. Local-only successes inside the gap are tallied from
    // their conditional rate (they do not alter the round cadence).
    void schedule_jump(Sim& sim) {
        const double k = source_.geometric(p_joint_);
        const double round_t = next_round_time_ + (k - 1.0) * teg_;
        sim.counter("rounds") += k;
        sim.counter("local_a") += node_a_.poisson((k - 1.0) * p_single_given_nonjoint_) + 1.0;
        sim.counter("local_b") += node_b_.poisson((k - 1.0) * p_single_given_nonjoint_) + 1.0;
        next_round_time_ = round_t + teg_;
        sim.schedule(round_t + tc_, EventKind::herald_arrival);
    }

    void handle_jump(Sim& sim, const Event& e) {
        if (e.kind == EventKind::herald_arrival) {
            sim.schedule(sim.now(), EventKind::success);
            return;
        }
        if (e.kind == EventKind::success) {
            sim.record_success();
            schedule_jump(sim);
            return;
        }
        throw SimError("mps jump mode: unexpected event kind");
    }

    // --- granular mode ---------------------------------------------------

    void handle_granular(Sim& sim, const Event& e) {
        switch (e.kind) {
            case EventKind::attempt_start: {
                sim.counter("rounds") += 1;
                if (source_.bernoulli(p_em_)) {
                    const bool a = node_a_.bernoulli(p_local_);
                    const bool b = node_b_.bernoulli(p_local_);
                    if (sim.tracing()) {
                        sim.trace("mid", e.kind, "pair_emitted");
                        sim.trace("A", EventKind::photon_arrival, a ? "bsm=ok" : "bsm=fail");
                        sim.trace("B", EventKind::photon_arrival, b ? "bsm=ok" : "bsm=fail");
                    }
                    if (a) sim.counter("local_a") += 1;
                    if (b) sim.counter("local_b") += 1;
                    if (a && b) {
                        sim.schedule(sim.now() + tc_, EventKind::herald_arrival, /*slot=*/-1, /*tag=*/1);
                    } else if (a || b) {
                        // the lone local success dies when the remote failure notice lands
                        sim.schedule(sim.now() + tc_, EventKind::discard, a ? 0 : 1);
                    }
                }
                sim.schedule(sim.now() + teg_, EventKind::attempt_start);
                return;
            }
            case EventKind::herald_arrival:
                sim.trace("AB", e.kind, "joint_success_confirmed");
                sim.schedule(sim.now(), EventKind::success);
                return;
            case EventKind::discard:
                sim.counter("local_discards") += 1;
                sim.trace(e.slot == 0 ? "A" : "B", e.kind, "remote_failure_notice");
                return;
            case EventKind::success:
                sim.record_success();
                sim.trace("AB", e.kind, "");
                return;
            default:
                throw SimError("mps granular mode: unexpected event kind");
        }
    }

    bool granular_;
    RandomStream source_;
    RandomStream node_a_;
    RandomStream node_b_;
    double tc_ = 0.0;
    double teg_ = 0.0;
    double p_em_ = 0.0;
    double p_local_ = 0.0;
    double p_joint_ = 0.0;
    double p_single_given_nonjoint_ = 0.0;
    double next_round_time_ = 0.0;
};

}  // namespace qlink
