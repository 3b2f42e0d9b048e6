#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "qlink/config.hpp"

using namespace qlink;

TEST_CASE("empty config is valid and gives the defaults") {
    std::istringstream in("");
    Config c = parse_config(in);
    CHECK(c == Config{});
    CHECK(c.params.p_out == 0.3);
    CHECK_FALSE(c.distance_km.has_value());
}

TEST_CASE("key = value lines with comments") {
    std::istringstream in(
        "# hardware\n"
        "p_out = 0.5\n"
        "t_sg_us = 25   # fast swap\n"
        "\n"
        "protocol = mepl\n"
        "n_qubits = 4\n"
        "cutoff = 100\n"
        "distance_km = 75\n");
    Config c = parse_config(in);
    CHECK(c.params.p_out == 0.5);
    CHECK(c.params.t_sg == Catch::Approx(25e-6));
    CHECK(c.proto.protocol == Protocol::mepl);
    CHECK(c.proto.n_qubits == 4);
    CHECK(c.proto.cutoff == 100);
    CHECK(c.distance_km == 75.0);
}

TEST_CASE("cutoff accepts 'unlimited'") {
    std::istringstream in("cutoff = 17\n");
    Config c = parse_config(in);
    CHECK(c.proto.cutoff == 17);
    std::istringstream in2("cutoff = unlimited\n");
    c = parse_config(in2, c);
    CHECK_FALSE(c.proto.cutoff.has_value());
}

TEST_CASE("parse errors are ConfigError with line numbers") {
    std::istringstream junk("p_out 0.5\n");
    CHECK_THROWS_AS(parse_config(junk), ConfigError);

    std::istringstream unknown("p_outt = 0.5\n");
    CHECK_THROWS_MATCHES(parse_config(unknown), ConfigError,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("unknown config key")));

    std::istringstream badnum("p_out = zero\n");
    CHECK_THROWS_AS(parse_config(badnum), ConfigError);

    std::istringstream badproto("protocol = bbm92\n");
    CHECK_THROWS_AS(parse_config(badproto), ConfigError);
}

TEST_CASE("later assignments win, so flag overrides are just reapplication") {
    std::istringstream file("p_em = 0.01\nprotocol = mps\n");
    Config c = parse_config(file);
    apply_config_entry(c, "p_em", "0.1");  // flag layer
    CHECK(c.proto.p_em == 0.1);
    CHECK(c.proto.protocol == Protocol::mps);
}

TEST_CASE("dump round-trips to an identical effective configuration") {
    Config base;
    std::istringstream dumped(dump_config(base));
    CHECK(parse_config(dumped) == base);

    Config custom;
    custom.params.p_out = 0.45;
    custom.params.t_eg = microseconds(0.5);
    custom.params.t_sg = microseconds(37.5);
    custom.proto.protocol = Protocol::mepl;
    custom.proto.n_qubits = 7;
    custom.proto.cutoff = 123;
    custom.proto.epl_locc_delay = true;
    custom.distance_km = 62.5;
    custom.sim.seed = 99;
    custom.sim.replications = 5;
    custom.sim.successes_per_replication = 123;
    std::istringstream dumped2(dump_config(custom));
    CHECK(parse_config(dumped2) == custom);
}

TEST_CASE("config hash tracks content") {
    Config a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.params.p_out = 0.31;
    CHECK(config_hash(a) != config_hash(b));
}
