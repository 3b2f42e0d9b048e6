#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "qlink/params.hpp"
#include "qlink/protocol_config.hpp"

namespace qlink {

/// Closed-form rate prediction for one protocol at one operating point.
struct ProtocolRate {
    Protocol protocol = Protocol::mbk;
    double rate = 0.0;          // entanglement successes / s
    double attempt_rate = 0.0;  // protocol-level attempt throughput, 1/s
    int n_effective = 1;        // qubits actually exploited (<= requested N)
};

// ceil(x) guarded against 1-ulp float noise at exact integer boundaries
// (e.g. t_c/t_sg == 1 for d = 40 km with the defaults).
inline int ceil_ratio(double x) {
    if (!(x > 0.0)) return 1;
    double c = std::ceil(x - 1e-9);
    if (c < 1.0) return 1;
    if (c > 2147483000.0) return 2147483000;
    return static_cast<int>(c);
}

/// Largest useful qubit count per node for the multiplexed Barrett-Kok
/// protocol: ceil(t_c / t_sg). Loading a memory costs one swap gate, so at
/// most t_c/t_sg states fit into flight before the first herald returns.
inline int mbk_qubit_limit(const NetworkParams& p, const LinkGeometry& g) {
    return ceil_ratio(comm_time(p, g) / p.t_sg);
}

/// The EPL variant keeps one memory pinned on the stored raw state during
/// its second stage, so one extra qubit stays useful: ceil(t_c / t_sg) + 1.
inline int mepl_qubit_limit(const NetworkParams& p, const LinkGeometry& g) {
    return mbk_qubit_limit(p, g) + 1;
}

/// Multiplexed Barrett-Kok success rate. Attempts stream at n_eff / t_c and
/// each heralds on two-photon coincidence + Bell measurement, probability
/// eta^2 / 2:
///
///   R = (1/2) * min(N, N_max) * eta^2 / t_c
inline ProtocolRate mbk_rate(const NetworkParams& p, const LinkGeometry& g, int n_qubits) {
    if (n_qubits < 1) throw DomainError("mbk requires at least one qubit per node");
    const double tc = comm_time(p, g);
    const double eff = transmission_efficiency(p, g);
    const int n_eff = std::min(n_qubits, mbk_qubit_limit(p, g));
    ProtocolRate r;
    r.protocol = Protocol::mbk;
    r.n_effective = n_eff;
    r.attempt_rate = static_cast<double>(n_eff) / tc;
    r.rate = r.attempt_rate * eff * eff / 2.0;
    return r;
}

/// Multiplexed extreme-photon-loss success rate. Two single-click raw states
/// are built in sequence (stage times t_c/(eta*n) and t_c/(eta*(n-1))), then
/// distilled with probability 1/8:
///
///   R = n(n-1)/(2n-1) * eta / (8 t_c),  n = min(N, N_max)
///
/// N above N_max clamps rather than erroring: the extra qubits simply go
/// unused. (A serial variant that waits out a full herald round before the
/// second state would instead give eta / (16 t_c); the pipelined form above
/// is what this library models and simulates.)
inline ProtocolRate mepl_rate(const NetworkParams& p, const LinkGeometry& g, int n_qubits) {
    if (n_qubits < 2) throw DomainError("mepl requires at least two qubits per node");
    const double tc = comm_time(p, g);
    const double eff = transmission_efficiency(p, g);
    const int n_eff = std::min(n_qubits, mepl_qubit_limit(p, g));
    const double n = static_cast<double>(n_eff);
    ProtocolRate r;
    r.protocol = Protocol::mepl;
    r.n_effective = n_eff;
    // raw-attempt throughput averaged over the two stages: 2n(n-1)/((2n-1) t_c)
    r.attempt_rate = 2.0 * n * (n - 1.0) / ((2.0 * n - 1.0) * tc);
    r.rate = n * (n - 1.0) / (2.0 * n - 1.0) * eff / (8.0 * tc);
    return r;
}

/// Midpoint-source success rate in the low-n regime (single qubit per node,
/// rounds every t_eg; both local Bell measurements must succeed in the same
/// round):
///
///   R = p_em * eta^2 / (4 t_eg)
inline ProtocolRate mps_rate(const NetworkParams& p, const LinkGeometry& g, double p_em) {
    if (!(p_em > 0.0 && p_em <= 1.0) || !std::isfinite(p_em))
        throw DomainError("mps pair-emission probability must be in (0,1]");
    const double eff = transmission_efficiency(p, g);
    ProtocolRate r;
    r.protocol = Protocol::mps;
    r.n_effective = 1;
    r.attempt_rate = 1.0 / p.t_eg;
    r.rate = p_em * eff * eff / (4.0 * p.t_eg);
    return r;
}

/// Expected number of successful local Bell measurements per node per
/// communication time for the midpoint-source protocol:
///
///   n = (1/2) p_em * eta * t_c / t_eg
///
/// n << 1 means a single qubit per node keeps up with the success stream.
inline double expected_local_bsm_successes(const NetworkParams& p, const LinkGeometry& g, double p_em) {
    if (!(p_em > 0.0 && p_em <= 1.0) || !std::isfinite(p_em))
        throw DomainError("mps pair-emission probability must be in (0,1]");
    return 0.5 * p_em * transmission_efficiency(p, g) * comm_time(p, g) / p.t_eg;
}

/// Analytic rate for whichever protocol the config selects.
inline ProtocolRate rate_for(const NetworkParams& p, const LinkGeometry& g, const ProtocolConfig& cfg) {
    cfg.validate();
    switch (cfg.protocol) {
        case Protocol::mbk: return mbk_rate(p, g, cfg.n_qubits);
        case Protocol::mepl: return mepl_rate(p, g, cfg.n_qubits);
        case Protocol::mps: return mps_rate(p, g, cfg.p_em);
    }
    throw DomainError("unknown protocol");
}

/// Distance (meters) where the two analytic rate curves cross, found by
/// bisection to a relative tolerance of 1e-6 on distance. Returns nullopt
/// when the rate difference has no sign change over [lo, hi] (including the
/// degenerate identical-config case).
inline std::optional<double> crossover_distance(const NetworkParams& p,
                                                const ProtocolConfig& a, const ProtocolConfig& b,
                                                double lo_m, double hi_m) {
    if (!(lo_m > 0.0) || !(hi_m > lo_m)) throw DomainError("crossover bracket must satisfy 0 < lo < hi");
    auto diff = [&](double d) {
        LinkGeometry g{d};
        return rate_for(p, g, a).rate - rate_for(p, g, b).rate;
    };
    double flo = diff(lo_m);
    double fhi = diff(hi_m);
    if (flo == 0.0 && fhi == 0.0) return std::nullopt;  // curves coincide at both ends
    if (flo == 0.0) return lo_m;
    if (fhi == 0.0) return hi_m;
    if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;
    double lo = lo_m, hi = hi_m;
    while ((hi - lo) > 1e-6 * hi) {
        double mid = 0.5 * (lo + hi);
        double fm = diff(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qlink
