#pragma once

#include <cmath>
#include <string>

#include "qlink/errors.hpp"

namespace qlink {

inline constexpr double kDefaultOutcoupling = 0.3;
inline constexpr double kDefaultFreqConversion = 0.3;
inline constexpr double kDefaultAttenuationDbPerKm = 0.2;
inline constexpr double kDefaultEntGenTime = 1e-6;     // s
inline constexpr double kDefaultSwapGateTime = 200e-6; // s
inline constexpr double kDefaultFiberSpeed = 2e8;      // m/s

inline constexpr double microseconds(double us) { return us * 1e-6; }
inline constexpr double kilometers(double km) { return km * 1000.0; }

/// Hardware and fiber parameters shared by the analytic models and the
/// simulator. Immutable value type; the defaults are the near-term numbers
/// used throughout the bundled experiments.
struct NetworkParams {
    double p_out = kDefaultOutcoupling;          // node outcoupling efficiency
    double p_fc = kDefaultFreqConversion;        // frequency-conversion efficiency
    double alpha_db_per_km = kDefaultAttenuationDbPerKm;
    double t_eg = kDefaultEntGenTime;            // spin-photon entanglement generation time, s
    double t_sg = kDefaultSwapGateTime;          // communication-to-memory swap gate time, s
    double c_fiber = kDefaultFiberSpeed;         // signal speed in fiber, m/s

    void validate() const {
        auto bad = [](const std::string& what) { throw DomainError("invalid NetworkParams: " + what); };
        if (!(p_out > 0.0 && p_out <= 1.0) || !std::isfinite(p_out)) bad("p_out must be in (0,1]");
        if (!(p_fc > 0.0 && p_fc <= 1.0) || !std::isfinite(p_fc)) bad("p_fc must be in (0,1]");
        if (!(alpha_db_per_km >= 0.0) || !std::isfinite(alpha_db_per_km)) bad("alpha_db_per_km must be >= 0");
        if (!(t_eg > 0.0) || !std::isfinite(t_eg)) bad("t_eg must be > 0");
        if (!(t_sg > 0.0) || !std::isfinite(t_sg)) bad("t_sg must be > 0");
        if (!(c_fiber > 0.0) || !std::isfinite(c_fiber)) bad("c_fiber must be > 0");
    }

    bool operator==(const NetworkParams&) const = default;
};

/// Two nodes separated by `d` meters with the beam-splitter / photon-pair
/// station exactly midway. Asymmetric links are out of scope.
struct LinkGeometry {
    double d = 0.0;  // node separation, meters

    void validate() const {
        if (!std::isfinite(d) || d <= 0.0) throw DomainError("link distance must be finite and > 0");
    }

    static LinkGeometry from_km(double km) { return LinkGeometry{kilometers(km)}; }
    double d_km() const { return d / 1000.0; }

    bool operator==(const LinkGeometry&) const = default;
};

/// Lumped per-photon system transmission efficiency:
/// p_out * p_fc * 10^(-alpha * d_km / 20). The fiber term covers the d/2 run
/// from a node to the midpoint station; detector efficiency is folded into
/// the prefactors.
inline double transmission_efficiency(const NetworkParams& p, const LinkGeometry& g) {
    p.validate();
    g.validate();
    return p.p_out * p.p_fc * std::pow(10.0, -p.alpha_db_per_km * g.d_km() / 20.0);
}

/// Combined quantum + classical signalling time for one attempt round: d / c.
/// (Photon flight to the midpoint plus the herald's return.)
inline double comm_time(const NetworkParams& p, const LinkGeometry& g) {
    p.validate();
    g.validate();
    return g.d / p.c_fiber;
}

}  // namespace qlink
