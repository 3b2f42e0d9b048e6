#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlink/analytic.hpp"
#include "qlink/params.hpp"
#include "qlink/protocol_config.hpp"
#include "qlink/random.hpp"
#include "qlink/sim.hpp"

namespace qlink {

/// One local memory qubit.
struct MemorySlot {
    enum class Status { free_slot, pending_herald, holding_raw };
    Status status = Status::free_slot;
    std::int64_t attempt_id = -1;
    std::int64_t attempts_since_stored = 0;  // advances only while holding_raw
};

/// Occupancy ledger at one node: the communication qubit plus N-1 memories.
/// The two nodes of a link evolve in mirror image, so a single ledger stands
/// for both. At most one pending state may ride the communication qubit (the
/// newest attempt, when every memory is taken); it hops into the first
/// memory that frees up.
struct NodeState {
    double comm_busy_until = 0.0;
    std::vector<MemorySlot> memories;     // length N-1
    std::int32_t comm_held_attempt = -1;  // attempt parked on the comm qubit, -1 = none

    explicit NodeState(int n_qubits = 2) : memories(static_cast<std::size_t>(n_qubits > 0 ? n_qubits - 1 : 0)) {}

    int occupied() const {
        int n = 0;
        for (const auto& m : memories)
            if (m.status != MemorySlot::Status::free_slot) ++n;
        return n;
    }
    int free_count() const { return static_cast<int>(memories.size()) - occupied(); }

    // Park a pending attempt; returns the memory index or -1 when it stays
    // on the communication qubit.
    int park(std::int64_t attempt_id) {
        for (std::size_t i = 0; i < memories.size(); ++i) {
            if (memories[i].status == MemorySlot::Status::free_slot) {
                memories[i] = {MemorySlot::Status::pending_herald, attempt_id, 0};
                return static_cast<int>(i);
            }
        }
        comm_held_attempt = static_cast<std::int32_t>(attempt_id);
        return -1;
    }

    int find(std::int64_t attempt_id) const {
        for (std::size_t i = 0; i < memories.size(); ++i)
            if (memories[i].status != MemorySlot::Status::free_slot && memories[i].attempt_id == attempt_id)
                return static_cast<int>(i);
        return -1;
    }

    void release(std::int64_t attempt_id) {
        if (comm_held_attempt == attempt_id) {
            comm_held_attempt = -1;
            return;
        }
        int idx = find(attempt_id);
        if (idx >= 0) memories[static_cast<std::size_t>(idx)] = MemorySlot{};
    }

    // Move a comm-held state into a freed memory; returns the memory index
    // or -1 when there was nothing to move.
    int hop_comm_state() {
        if (comm_held_attempt < 0) return -1;
        for (std::size_t i = 0; i < memories.size(); ++i) {
            if (memories[i].status == MemorySlot::Status::free_slot) {
                memories[i] = {MemorySlot::Status::pending_herald, comm_held_attempt, 0};
                comm_held_attempt = -1;
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    std::string summary() const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "mem_occ=%d mem_free=%d comm_held=%d",
                      occupied(), free_count(), comm_held_attempt >= 0 ? 1 : 0);
        return buf;
    }
};

/// Effective qubit count a protocol machine will actually drive.
inline int effective_qubits(const NetworkParams& p, const LinkGeometry& g, const ProtocolConfig& cfg) {
    switch (cfg.protocol) {
        case Protocol::mbk: return std::min(cfg.n_qubits, mbk_qubit_limit(p, g));
        case Protocol::mepl: return std::min(cfg.n_qubits, mepl_qubit_limit(p, g));
        case Protocol::mps: return 1;
    }
    return 1;
}

}  // namespace qlink
