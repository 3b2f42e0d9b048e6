#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "qlink/analytic.hpp"
#include "qlink/simulate.hpp"

namespace qlink {

struct McSettings {
    int replications = 20;
    std::int64_t successes_per_replication = 2000;
    std::uint64_t base_seed = 1;
    int threads = 0;
};

enum class SweepAxis { distance, n_qubits };

struct SweepSpec {
    SweepAxis axis = SweepAxis::distance;
    std::vector<double> points;  // km for distance, qubit counts for n_qubits
    double reference_km = 50.0;  // link distance used by qubit sweeps
    std::vector<ProtocolConfig> protocols;
    std::optional<McSettings> mc;  // absent = analytic only

    void validate() const {
        if (points.empty()) throw DomainError("sweep needs at least one point");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i] > points[i - 1])) throw DomainError("sweep points must be strictly increasing");
        if (protocols.empty()) throw DomainError("sweep needs at least one protocol config");
    }
};

struct SweepCell {
    ProtocolConfig cfg;
    std::optional<ProtocolRate> analytic;
    std::optional<RateEstimate> mc;
    std::string error;  // per-cell failure; the sweep continues
};

struct SweepRow {
    double axis_value = 0.0;
    double t_c = 0.0;  // s
    double eta = 0.0;
    int n_max_mbk = 0;
    int n_max_mepl = 0;
    std::vector<SweepCell> cells;  // aligned with SweepSpec::protocols
};

/// Seed for one Monte Carlo point, derived from the dynamics-relevant part
/// of the effective configuration. Configs that clamp to the same effective
/// machine (same protocol, distance, n_eff, knobs) therefore reuse the same
/// streams and produce bit-identical estimates; in particular the qubit
/// sweep is exactly flat past N_max. t_sg is deliberately excluded: it acts
/// only through n_eff.
inline std::uint64_t point_seed(std::uint64_t base_seed, const NetworkParams& p, const LinkGeometry& g,
                                const ProtocolConfig& cfg) {
    auto bits = [](double x) {
        std::uint64_t b;
        std::memcpy(&b, &x, sizeof b);
        return b;
    };
    std::uint64_t h = splitmix64(base_seed);
    auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
    mix(static_cast<std::uint64_t>(cfg.protocol));
    mix(static_cast<std::uint64_t>(effective_qubits(p, g, cfg)));
    mix(bits(g.d));
    mix(bits(p.p_out));
    mix(bits(p.p_fc));
    mix(bits(p.alpha_db_per_km));
    mix(bits(p.t_eg));
    mix(bits(p.c_fiber));
    if (cfg.protocol == Protocol::mps) mix(bits(cfg.p_em));
    if (cfg.protocol == Protocol::mepl) {
        mix(cfg.cutoff ? static_cast<std::uint64_t>(*cfg.cutoff) : ~0ULL);
        mix(cfg.epl_locc_delay ? 1 : 0);
    }
    return h;
}

inline SweepRow sweep_point(const NetworkParams& base_params, const SweepSpec& spec, double axis_value) {
    NetworkParams params = base_params;
    LinkGeometry geom;
    SweepRow row;
    row.axis_value = axis_value;
    for (const auto& proto : spec.protocols) {
        ProtocolConfig cfg = proto;
        if (spec.axis == SweepAxis::distance) {
            geom = LinkGeometry::from_km(axis_value);
        } else {
            geom = LinkGeometry::from_km(spec.reference_km);
            cfg.n_qubits = static_cast<int>(axis_value);
        }
        SweepCell cell;
        cell.cfg = cfg;
        try {
            cell.analytic = rate_for(params, geom, cfg);
            if (spec.mc) {
                SimSettings sim;
                sim.seed = point_seed(spec.mc->base_seed, params, geom, cfg);
                sim.replications = spec.mc->replications;
                sim.successes_per_replication = spec.mc->successes_per_replication;
                sim.threads = spec.mc->threads;
                cell.mc = simulate(params, geom, cfg, sim);
            }
        } catch (const std::exception& ex) {
            cell.error = ex.what();
        }
        row.cells.push_back(std::move(cell));
    }
    row.t_c = comm_time(params, geom);
    row.eta = transmission_efficiency(params, geom);
    row.n_max_mbk = mbk_qubit_limit(params, geom);
    row.n_max_mepl = mepl_qubit_limit(params, geom);
    return row;
}

inline std::vector<SweepRow> run_sweep(const NetworkParams& params, const SweepSpec& spec) {
    spec.validate();
    params.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.points.size());
    for (double v : spec.points) rows.push_back(sweep_point(params, spec, v));
    return rows;
}

inline std::vector<double> log_spaced_km(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("bad distance grid");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
    return out;
}

// -------------------------------------------------------------------------
// Figure-style experiments

/// Rate vs distance for the standard protocol set: mBK(N=2), mEPL(N=2),
/// MPS(p_em = 0.01) and MPS(p_em = 0.1).
struct DistanceSweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    double qubit_regime_boundary_km = 0.0;  // where t_c = t_sg
    NetworkParams params;
};

inline std::vector<ProtocolConfig> standard_protocol_set() {
    ProtocolConfig mbk{Protocol::mbk, 2, 0.01, std::nullopt, false};
    ProtocolConfig mepl{Protocol::mepl, 2, 0.01, std::nullopt, false};
    ProtocolConfig mps_lo{Protocol::mps, 2, 0.01, std::nullopt, false};
    ProtocolConfig mps_hi{Protocol::mps, 2, 0.1, std::nullopt, false};
    return {mbk, mepl, mps_lo, mps_hi};
}

inline DistanceSweepResult rate_vs_distance(const NetworkParams& params, std::optional<McSettings> mc,
                                            double lo_km = 10.0, double hi_km = 200.0, int points = 20) {
    DistanceSweepResult res;
    res.params = params;
    res.spec.axis = SweepAxis::distance;
    res.spec.points = log_spaced_km(lo_km, hi_km, points);
    res.spec.protocols = standard_protocol_set();
    res.spec.mc = mc;
    res.rows = run_sweep(params, res.spec);
    res.qubit_regime_boundary_km = params.c_fiber * params.t_sg / 1000.0;
    return res;
}

/// Expected local Bell-measurement successes per communication time, per
/// node, for the midpoint-source protocol.
struct LocalSuccessRow {
    double d_km = 0.0;
    double n_low = 0.0;   // p_em = 0.01
    double n_high = 0.0;  // p_em = 0.1
};

struct LocalSuccessSweepResult {
    std::vector<LocalSuccessRow> rows;
    double max_n_low = 0.0;
    double max_n_high = 0.0;
    double argmax_km = 0.0;  // for the p_em = 0.1 curve on the fine grid
};

inline LocalSuccessSweepResult local_bsm_vs_distance(const NetworkParams& params,
                                                     double lo_km = 10.0, double hi_km = 200.0, int points = 20,
                                                     double fine_lo_km = 1.0, double fine_hi_km = 300.0,
                                                     double fine_step_km = 1.0) {
    LocalSuccessSweepResult res;
    for (double d : log_spaced_km(lo_km, hi_km, points)) {
        LinkGeometry g = LinkGeometry::from_km(d);
        res.rows.push_back({d, expected_local_bsm_successes(params, g, 0.01),
                            expected_local_bsm_successes(params, g, 0.1)});
    }
    for (double d = fine_lo_km; d <= fine_hi_km + 1e-9; d += fine_step_km) {
        LinkGeometry g = LinkGeometry::from_km(d);
        const double hi = expected_local_bsm_successes(params, g, 0.1);
        if (hi > res.max_n_high) {
            res.max_n_high = hi;
            res.argmax_km = d;
        }
        res.max_n_low = std::max(res.max_n_low, expected_local_bsm_successes(params, g, 0.01));
    }
    return res;
}

/// mEPL rate vs qubit count at a fixed distance, one curve per swap-gate
/// time. The default t_sg set {200, 50, 25} us exhibits saturation at
/// N_max = 3, 6 and 11 for d = 50 km.
struct QubitSweepCurve {
    double t_sg = 0.0;  // s
    int saturation_n = 0;
    std::vector<SweepRow> rows;
};

struct QubitSweepResult {
    double d_km = 50.0;
    std::vector<QubitSweepCurve> curves;
};

inline QubitSweepResult rate_vs_qubits(const NetworkParams& base_params, std::optional<McSettings> mc,
                                       std::vector<double> t_sg_list = {200e-6, 50e-6, 25e-6},
                                       int n_lo = 2, int n_hi = 13, double d_km = 50.0) {
    if (n_lo < 2 || n_hi < n_lo) throw DomainError("qubit sweep needs 2 <= n_lo <= n_hi");
    QubitSweepResult res;
    res.d_km = d_km;
    for (double t_sg : t_sg_list) {
        NetworkParams params = base_params;
        params.t_sg = t_sg;
        SweepSpec spec;
        spec.axis = SweepAxis::n_qubits;
        spec.reference_km = d_km;
        for (int n = n_lo; n <= n_hi; ++n) spec.points.push_back(static_cast<double>(n));
        spec.protocols = {ProtocolConfig{Protocol::mepl, 2, 0.01, std::nullopt, false}};
        spec.mc = mc;
        QubitSweepCurve curve;
        curve.t_sg = t_sg;
        curve.saturation_n = mepl_qubit_limit(params, LinkGeometry::from_km(d_km));
        curve.rows = run_sweep(params, spec);
        res.curves.push_back(std::move(curve));
    }
    return res;
}

// -------------------------------------------------------------------------
// CSV output

namespace detail {

inline std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace detail

inline std::string distance_sweep_csv(const DistanceSweepResult& res) {
    std::string out = "d_km,t_c_us,eta,n_max_mbk,n_max_mepl";
    for (const auto& p : res.spec.protocols) {
        const std::string l = p.label();
        out += "," + l + "_analytic_hz," + l + "_n_eff";
        if (res.spec.mc) out += "," + l + "_mc_hz," + l + "_mc_stderr_hz," + l + "_mc_seed";
    }
    out += ",error\n";
    for (const auto& row : res.rows) {
        out += detail::csv_num(row.axis_value) + "," + detail::csv_num(row.t_c * 1e6) + "," +
               detail::csv_num(row.eta) + "," + std::to_string(row.n_max_mbk) + "," + std::to_string(row.n_max_mepl);
        std::string err;
        for (const auto& cell : row.cells) {
            if (!cell.error.empty()) {
                if (!err.empty()) err += "; ";
                err += cell.cfg.label() + ": " + cell.error;
            }
            out += ",";
            out += cell.analytic ? detail::csv_num(cell.analytic->rate) : "";
            out += ",";
            out += cell.analytic ? std::to_string(cell.analytic->n_effective) : "";
            if (res.spec.mc) {
                out += ",";
                out += cell.mc ? detail::csv_num(cell.mc->rate) : "";
                out += ",";
                out += cell.mc && cell.mc->stderr_hz ? detail::csv_num(*cell.mc->stderr_hz) : "";
                out += ",";
                out += cell.mc ? std::to_string(cell.mc->seed) : "";
            }
        }
        out += "," + err + "\n";
    }
    return out;
}

inline std::string distance_sweep_schema(const DistanceSweepResult& res) {
    std::string out;
    out += "d_km: node separation, km\n";
    out += "t_c_us: communication time d/c, microseconds\n";
    out += "eta: lumped per-photon transmission efficiency\n";
    out += "n_max_mbk: largest useful qubit count, multiplexed Barrett-Kok\n";
    out += "n_max_mepl: largest useful qubit count, multiplexed extreme-photon-loss\n";
    for (const auto& p : res.spec.protocols) {
        const std::string l = p.label();
        out += l + "_analytic_hz: closed-form success rate, Hz\n";
        out += l + "_n_eff: qubits actually exploited\n";
        if (res.spec.mc) {
            out += l + "_mc_hz: Monte Carlo success rate, Hz\n";
            out += l + "_mc_stderr_hz: standard error over replications, Hz\n";
            out += l + "_mc_seed: stream seed for this point\n";
        }
    }
    out += "error: per-protocol failures for this row, empty when clean\n";
    return out;
}

inline std::string local_bsm_csv(const LocalSuccessSweepResult& res) {
    std::string out = "d_km,n_p0.01,n_p0.1\n";
    for (const auto& r : res.rows)
        out += detail::csv_num(r.d_km) + "," + detail::csv_num(r.n_low) + "," + detail::csv_num(r.n_high) + "\n";
    return out;
}

inline std::string local_bsm_schema() {
    return "d_km: node separation, km\n"
           "n_p0.01: expected local BSM successes per t_c per node, p_em = 0.01\n"
           "n_p0.1: expected local BSM successes per t_c per node, p_em = 0.1\n";
}

inline std::string qubit_sweep_csv(const QubitSweepResult& res) {
    const bool has_mc = !res.curves.empty() && !res.curves.front().rows.empty() &&
                        res.curves.front().rows.front().cells.front().mc.has_value();
    std::string out = "t_sg_us,n_qubits,n_eff,saturation_n,analytic_hz";
    if (has_mc) out += ",mc_hz,mc_stderr_hz,mc_seed";
    out += ",error\n";
    for (const auto& curve : res.curves) {
        for (const auto& row : curve.rows) {
            const auto& cell = row.cells.front();
            out += detail::csv_num(curve.t_sg * 1e6) + "," + detail::csv_num(row.axis_value) + ",";
            out += cell.analytic ? std::to_string(cell.analytic->n_effective) : "";
            out += "," + std::to_string(curve.saturation_n) + ",";
            out += cell.analytic ? detail::csv_num(cell.analytic->rate) : "";
            if (has_mc) {
                out += ",";
                out += cell.mc ? detail::csv_num(cell.mc->rate) : "";
                out += ",";
                out += cell.mc && cell.mc->stderr_hz ? detail::csv_num(*cell.mc->stderr_hz) : "";
                out += ",";
                out += cell.mc ? std::to_string(cell.mc->seed) : "";
            }
            out += "," + cell.error + "\n";
        }
    }
    return out;
}

inline std::string qubit_sweep_schema() {
    return "t_sg_us: swap-gate time for this curve, microseconds\n"
           "n_qubits: configured qubits per node\n"
           "n_eff: qubits actually exploited\n"
           "saturation_n: qubit count beyond which the rate stops growing\n"
           "analytic_hz: closed-form mEPL success rate, Hz\n"
           "mc_hz: Monte Carlo success rate, Hz\n"
           "mc_stderr_hz: standard error over replications, Hz\n"
           "mc_seed: stream seed for this point\n"
           "error: failure for this row, empty when clean\n";
}

}  // namespace qlink
