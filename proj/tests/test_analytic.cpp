#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qlink/analytic.hpp"

using namespace qlink;
using Catch::Approx;

namespace {
const NetworkParams kTable;  // defaults
const LinkGeometry k50 = LinkGeometry::from_km(50);
}  // namespace

TEST_CASE("qubit limits") {
    // t_c/t_sg = 250/200 -> ceil = 2
    CHECK(mbk_qubit_limit(kTable, k50) == 2);
    // exact boundary: t_c = t_sg at 40 km -> 1
    CHECK(mbk_qubit_limit(kTable, LinkGeometry::from_km(40)) == 1);
    CHECK(mbk_qubit_limit(kTable, LinkGeometry::from_km(25)) == 1);
    CHECK(mepl_qubit_limit(kTable, k50) == 3);
    NetworkParams slow = kTable;
    slow.t_sg = 500e-6;
    CHECK(mepl_qubit_limit(slow, k50) == 2);  // ceil(0.5) + 1
    NetworkParams fast = kTable;
    fast.t_sg = 10e-6;
    CHECK(mepl_qubit_limit(fast, k50) == 26);  // ceil(25) + 1
    // t_sg -> 0 grows without bound; rate functions cap at the requested N
    NetworkParams instant = kTable;
    instant.t_sg = 1e-15;
    CHECK(mbk_qubit_limit(instant, k50) > 1000000);
    CHECK(mbk_rate(instant, k50, 4).n_effective == 4);
}

TEST_CASE("mbk rate point values") {
    // 0.5 * 2 * (0.09 * 10^-0.5)^2 / 250us = 3.24 Hz (eta^2 = 8.1e-4 exactly)
    auto r = mbk_rate(kTable, k50, 2);
    CHECK(r.rate == Approx(3.24).epsilon(1e-9));
    CHECK(r.n_effective == 2);
    CHECK(r.attempt_rate == Approx(8000.0).epsilon(1e-12));
    CHECK(r.attempt_rate >= r.rate);

    // N above the limit clamps
    auto clamped = mbk_rate(kTable, k50, 5);
    CHECK(clamped.rate == r.rate);
    CHECK(clamped.n_effective == 2);

    // eta -> 0 kills the rate
    NetworkParams dark = kTable;
    dark.alpha_db_per_km = 10.0;
    CHECK(mbk_rate(dark, LinkGeometry::from_km(400), 2).rate < 1e-100);

    CHECK_THROWS_AS(mbk_rate(kTable, k50, 0), DomainError);
}

TEST_CASE("mepl rate point values") {
    // (2*1/3) * eta / (8 * 250us) = 9.4868... Hz
    auto r2 = mepl_rate(kTable, k50, 2);
    CHECK(r2.rate == Approx(9.486832980505138).epsilon(1e-12));
    CHECK(r2.n_effective == 2);

    // N = 3: ratio N(N-1)/(2N-1) / (2/3) = 1.8
    auto r3 = mepl_rate(kTable, k50, 3);
    CHECK(r3.rate == Approx(17.076299364909246).epsilon(1e-12));
    CHECK(r3.rate == Approx(1.8 * r2.rate).epsilon(1e-12));

    // protocol minimum
    CHECK_THROWS_AS(mepl_rate(kTable, k50, 1), DomainError);
    CHECK_THROWS_AS(mepl_rate(kTable, k50, 0), DomainError);
}

TEST_CASE("mps rate point values") {
    CHECK(mps_rate(kTable, k50, 0.1).rate == Approx(20.25).epsilon(1e-12));
    CHECK(mps_rate(kTable, k50, 0.01).rate == Approx(2.025).epsilon(1e-12));
    CHECK(mps_rate(kTable, k50, 0.1).n_effective == 1);
    CHECK(mps_rate(kTable, k50, 0.1).attempt_rate == Approx(1e6).epsilon(1e-12));
    CHECK_THROWS_AS(mps_rate(kTable, k50, 0.0), DomainError);
    CHECK_THROWS_AS(mps_rate(kTable, k50, -0.5), DomainError);
    CHECK_THROWS_AS(mps_rate(kTable, k50, 1.5), DomainError);
}

TEST_CASE("expected local BSM successes") {
    // 0.5 * 0.1 * eta(50) * 250 = 0.3557...
    CHECK(expected_local_bsm_successes(kTable, k50, 0.1) == Approx(0.35575623676894275).epsilon(1e-12));
    // linear in p_em
    CHECK(expected_local_bsm_successes(kTable, k50, 0.01) ==
          Approx(0.1 * expected_local_bsm_successes(kTable, k50, 0.1)).epsilon(1e-12));
    // global maximum of d * 10^(-0.01 d) sits at d = 100/ln(10) km ~ 43.43
    double best = 0.0, best_d = 0.0;
    for (double d = 1.0; d <= 300.0; d += 0.05) {
        double n = expected_local_bsm_successes(kTable, LinkGeometry::from_km(d), 0.1);
        if (n > best) {
            best = n;
            best_d = d;
        }
    }
    CHECK(best == Approx(0.359).margin(0.004));
    CHECK(best_d == Approx(43.43).margin(0.1));
    CHECK(best < 1.0);
    CHECK_THROWS_AS(expected_local_bsm_successes(kTable, k50, 0.0), DomainError);
}

TEST_CASE("mbk multiplexing gain is linear then flat") {
    for (double d_km : {45.0, 50.0, 90.0, 150.0}) {  // t_sg <= t_c regime
        auto g = LinkGeometry::from_km(d_km);
        const int n_max = mbk_qubit_limit(kTable, g);
        const double base = mbk_rate(kTable, g, 1).rate;
        for (int n = 1; n <= n_max + 3; ++n)
            CHECK(mbk_rate(kTable, g, n).rate == Approx(std::min(n, n_max) * base).epsilon(1e-12));
    }
}

TEST_CASE("mepl rate monotone in N, constant beyond the limit") {
    auto g = LinkGeometry::from_km(120);  // N_max = 4
    const int n_max = mepl_qubit_limit(kTable, g);
    double prev = 0.0;
    for (int n = 2; n <= n_max + 4; ++n) {
        double r = mepl_rate(kTable, g, n).rate;
        CHECK(r >= prev);
        if (n > n_max) CHECK(r == mepl_rate(kTable, g, n_max).rate);
        prev = r;
    }
}

TEST_CASE("loss-exponent scaling of the three protocols") {
    // Remove the 1/t_c factor and the qubit count, then the log10 slope per
    // km must be -alpha/10 (two photons) or -alpha/20 (one photon).
    auto g1 = LinkGeometry::from_km(50);
    auto g2 = LinkGeometry::from_km(100);
    const double dd = 50.0;

    auto mbk_scaled = [&](const LinkGeometry& g) {
        auto r = mbk_rate(kTable, g, 2);
        return r.rate * comm_time(kTable, g) / r.n_effective;
    };
    CHECK((std::log10(mbk_scaled(g2)) - std::log10(mbk_scaled(g1))) / dd ==
          Approx(-kTable.alpha_db_per_km / 10.0).epsilon(1e-9));

    auto mepl_scaled = [&](const LinkGeometry& g) { return mepl_rate(kTable, g, 2).rate * comm_time(kTable, g); };
    CHECK((std::log10(mepl_scaled(g2)) - std::log10(mepl_scaled(g1))) / dd ==
          Approx(-kTable.alpha_db_per_km / 20.0).epsilon(1e-9));

    CHECK((std::log10(mps_rate(kTable, g2, 0.1).rate) - std::log10(mps_rate(kTable, g1, 0.1).rate)) / dd ==
          Approx(-kTable.alpha_db_per_km / 10.0).epsilon(1e-9));
}

TEST_CASE("rates scale as expected under parameter doubling") {
    CHECK(mps_rate(kTable, k50, 0.02).rate == Approx(2.0 * mps_rate(kTable, k50, 0.01).rate).epsilon(1e-12));
    NetworkParams slow_fiber = kTable;
    slow_fiber.c_fiber = kTable.c_fiber / 2.0;  // t_c doubles, N_max grows, n_eff = 2 unchanged
    CHECK(mbk_rate(slow_fiber, k50, 2).rate == Approx(0.5 * mbk_rate(kTable, k50, 2).rate).epsilon(1e-12));
    CHECK(mepl_rate(slow_fiber, k50, 2).rate == Approx(0.5 * mepl_rate(kTable, k50, 2).rate).epsilon(1e-12));
}

TEST_CASE("crossover: mepl(2) against mps(0.1)") {
    ProtocolConfig mepl{Protocol::mepl, 2, 0.01, std::nullopt, false};
    ProtocolConfig mps_hi{Protocol::mps, 2, 0.1, std::nullopt, false};
    auto d = crossover_distance(kTable, mepl, mps_hi, kilometers(10), kilometers(300));
    REQUIRE(d.has_value());
    const double d_km = *d / 1000.0;
    CHECK(d_km > 100.0);
    CHECK(d_km < 130.0);
    CHECK(d_km == Approx(121.486).margin(0.01));
    // the two curves really meet there
    LinkGeometry g{*d};
    CHECK(rate_for(kTable, g, mepl).rate == Approx(rate_for(kTable, g, mps_hi).rate).epsilon(1e-4));
    // symmetric in the argument order
    auto d_rev = crossover_distance(kTable, mps_hi, mepl, kilometers(10), kilometers(300));
    REQUIRE(d_rev.has_value());
    CHECK(*d_rev == Approx(*d).epsilon(1e-5));
}

TEST_CASE("crossover: no sign change reports none") {
    ProtocolConfig mbk{Protocol::mbk, 2, 0.01, std::nullopt, false};
    CHECK_FALSE(crossover_distance(kTable, mbk, mbk, kilometers(10), kilometers(300)).has_value());

    // mepl(2) dominates mps(0.01) across the whole bracket
    ProtocolConfig mepl{Protocol::mepl, 2, 0.01, std::nullopt, false};
    ProtocolConfig mps_lo{Protocol::mps, 2, 0.01, std::nullopt, false};
    CHECK_FALSE(crossover_distance(kTable, mepl, mps_lo, kilometers(10), kilometers(300)).has_value());
}

TEST_CASE("crossover rejects a bad bracket") {
    ProtocolConfig a{Protocol::mbk, 2, 0.01, std::nullopt, false};
    CHECK_THROWS_AS(crossover_distance(kTable, a, a, kilometers(50), kilometers(10)), DomainError);
}
