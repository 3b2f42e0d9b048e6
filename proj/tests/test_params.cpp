#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qlink/params.hpp"

using namespace qlink;

using Catch::Approx;

TEST_CASE("table defaults") {
    NetworkParams p;
    CHECK(p.p_out == 0.3);
    CHECK(p.p_fc == 0.3);
    CHECK(p.alpha_db_per_km == 0.2);
    CHECK(p.t_eg == 1e-6);
    CHECK(p.t_sg == 200e-6);
    CHECK(p.c_fiber == 2e8);
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("transmission efficiency point values") {
    NetworkParams p;
    // d -> 0+: only the prefactors remain, 0.3 * 0.3 = 0.09
    CHECK(transmission_efficiency(p, LinkGeometry{1e-6}) == Approx(0.09).epsilon(1e-9));
    // d = 50 km: 0.09 * 10^-0.5
    CHECK(transmission_efficiency(p, LinkGeometry::from_km(50)) ==
          Approx(0.028460498941515415).epsilon(1e-12));
    // lossless limit
    NetworkParams ideal = p;
    ideal.p_out = 1.0;
    ideal.p_fc = 1.0;
    ideal.alpha_db_per_km = 0.0;
    for (double d : {0.5, 50.0, 1000.0})
        CHECK(transmission_efficiency(ideal, LinkGeometry::from_km(d)) == 1.0);
}

TEST_CASE("transmission efficiency rejects bad distances") {
    NetworkParams p;
    CHECK_THROWS_AS(transmission_efficiency(p, LinkGeometry{0.0}), DomainError);
    CHECK_THROWS_AS(transmission_efficiency(p, LinkGeometry{-3.0}), DomainError);
    CHECK_THROWS_AS(transmission_efficiency(p, LinkGeometry{std::nan("")}), DomainError);
    CHECK_THROWS_AS(transmission_efficiency(p, LinkGeometry{INFINITY}), DomainError);
}

TEST_CASE("parameter validation") {
    NetworkParams p;
    p.p_out = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = NetworkParams{};
    p.p_fc = 1.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = NetworkParams{};
    p.alpha_db_per_km = -0.1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = NetworkParams{};
    p.t_sg = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = NetworkParams{};
    p.c_fiber = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("communication time anchors") {
    NetworkParams p;  // c_fiber = 2e8 m/s
    CHECK(comm_time(p, LinkGeometry::from_km(50)) == 2.5e-4);  // 250 us, exact
    CHECK(comm_time(p, LinkGeometry::from_km(100)) == Approx(5e-4).epsilon(1e-15));
    CHECK(comm_time(p, LinkGeometry::from_km(200)) == Approx(1e-3).epsilon(1e-15));
}

TEST_CASE("efficiency and timing properties") {
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::uniform_real_distribution<double> dist_km(1.0, 400.0);
    std::uniform_real_distribution<double> att(0.05, 0.5);

    for (int i = 0; i < 200; ++i) {
        NetworkParams p;
        p.p_out = unit(gen);
        p.p_fc = unit(gen);
        p.alpha_db_per_km = att(gen);
        double d1 = dist_km(gen);
        double d2 = dist_km(gen);
        if (d2 < d1) std::swap(d1, d2);
        if (d2 == d1) d2 += 1.0;
        auto g1 = LinkGeometry::from_km(d1);
        auto g2 = LinkGeometry::from_km(d2);

        // strictly decreasing in distance and attenuation
        CHECK(transmission_efficiency(p, g1) > transmission_efficiency(p, g2));
        NetworkParams worse = p;
        worse.alpha_db_per_km = p.alpha_db_per_km + 0.1;
        CHECK(transmission_efficiency(worse, g1) < transmission_efficiency(p, g1));

        // multiplicative in the prefactors
        NetworkParams unit_front = p;
        unit_front.p_out = 1.0;
        unit_front.p_fc = 1.0;
        CHECK(transmission_efficiency(p, g1) ==
              Approx(p.p_out * p.p_fc * transmission_efficiency(unit_front, g1)).epsilon(1e-12));

        // exponential-loss composition: eta(d1) * 10^(-alpha d2 / 20) = eta(d1 + d2)
        auto g12 = LinkGeometry::from_km(d1 + d2);
        CHECK(transmission_efficiency(p, g1) * std::pow(10.0, -p.alpha_db_per_km * d2 / 20.0) ==
              Approx(transmission_efficiency(p, g12)).epsilon(1e-12));

        // t_c strictly increasing and linear in d
        CHECK(comm_time(p, g1) < comm_time(p, g2));
        CHECK(comm_time(p, g12) == Approx(comm_time(p, g1) + comm_time(p, g2)).epsilon(1e-12));
    }
}
