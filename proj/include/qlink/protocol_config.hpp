#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "qlink/errors.hpp"

namespace qlink {

enum class Protocol { mbk, mepl, mps };

inline const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::mbk: return "mbk";
        case Protocol::mepl: return "mepl";
        case Protocol::mps: return "mps";
    }
    return "?";
}

inline std::optional<Protocol> parse_protocol(const std::string& s) {
    if (s == "mbk") return Protocol::mbk;
    if (s == "mepl") return Protocol::mepl;
    if (s == "mps") return Protocol::mps;
    return std::nullopt;
}

/// Protocol selection plus the protocol-specific knobs.
struct ProtocolConfig {
    Protocol protocol = Protocol::mbk;
    int n_qubits = 2;                     // per node, communication qubit included
    double p_em = 0.01;                   // midpoint-source pair emission probability
    std::optional<std::int64_t> cutoff;   // mepl: stage-2 attempts a stored state survives; nullopt = unlimited
    bool epl_locc_delay = false;          // mepl: charge one extra t_c per distillation round

    void validate() const {
        switch (protocol) {
            case Protocol::mbk:
                if (n_qubits < 1) throw DomainError("mbk requires n_qubits >= 1");
                break;
            case Protocol::mepl:
                if (n_qubits < 2) throw DomainError("mepl requires n_qubits >= 2");
                if (cutoff && *cutoff < 1) throw DomainError("cutoff must be >= 1 or unlimited");
                break;
            case Protocol::mps:
                // runs on the communication qubit alone; n_qubits is ignored
                if (!(p_em > 0.0 && p_em <= 1.0) || !std::isfinite(p_em))
                    throw DomainError("mps requires p_em in (0,1]");
                break;
        }
    }

    /// Short label such as "mbk_N2" or "mps_p0.1", used in CSV headers.
    std::string label() const {
        char buf[64];
        if (protocol == Protocol::mps) {
            std::snprintf(buf, sizeof buf, "mps_p%g", p_em);
        } else {
            std::snprintf(buf, sizeof buf, "%s_N%d", to_string(protocol), n_qubits);
        }
        return buf;
    }

    bool operator==(const ProtocolConfig&) const = default;
};

}  // namespace qlink
