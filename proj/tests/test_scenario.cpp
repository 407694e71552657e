#include "doctest.h"

#include <cstring>

#include "irc/scenario.hpp"
#include "irc/scenario_io.hpp"

using namespace irc;

TEST_CASE("pathloss gain closed form") {
    CHECK(pathloss_gain(10.0, 5.0, 2.0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(pathloss_gain(5.0, 5.0, 2.0).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pathloss_gain(0.1, 5.0, 2.0).real() == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(pathloss_gain(10.0, 5.0, 2.0).imag() == 0.0);
}

TEST_CASE("pathloss gain rejects nonpositive distance") {
    CHECK_THROWS_AS(pathloss_gain(0.0, 5.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(pathloss_gain(-1.0, 5.0, 2.0), std::domain_error);
    try {
        pathloss_gain(0.0, 5.0, 2.0);
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("eps") != std::string::npos);
    }
}

TEST_CASE("pathloss gain decreases with distance and is 1 at d0") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double d0 = rng.uniform(0.5, 10.0);
        const double g = rng.uniform(0.5, 4.0);
        const double a = rng.uniform(0.01, 50.0);
        const double b = a + rng.uniform(0.01, 50.0);
        CHECK(pathloss_gain(a, d0, g).real() > pathloss_gain(b, d0, g).real());
        CHECK(pathloss_gain(d0, d0, g).real() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("layout fills relay links with the height correction") {
    NodeLayout l;
    l.s1 = {0.0, 0.0};
    l.d1 = {10.0, 0.0};
    l.s2 = {0.0, -3.0};
    l.d2 = {10.0, -3.0};
    l.relay = {0.0, 0.0};  // planar distance 0 from s1
    l.eps = 0.1;
    l.d0 = 5.0;
    l.gamma = {2.0};
    Scenario s;
    s.bands.resize(1);
    s.normalize_params();
    apply_layout(s, l);
    CHECK(s.bands[0].h1r.real() == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("links at the reference distance have unit gain") {
    // coincident source pair and destination pair put every used link at d0
    NodeLayout l;
    l.s1 = l.s2 = {0.0, 0.0};
    l.d1 = l.d2 = {5.0, 0.0};
    l.eps = 0.3;
    l.d0 = 5.0;
    l.gamma = {2.0};
    const double planar = std::sqrt(5.0 * 5.0 - l.eps * l.eps);
    l.relay = {planar, 0.0};  // relay at 3D distance d0 from the sources
    Scenario s;
    s.bands.resize(1);
    s.normalize_params();
    apply_layout(s, l);
    CHECK(s.bands[0].h11.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.bands[0].h12.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.bands[0].h21.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.bands[0].h22.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.bands[0].h1r.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.bands[0].h2r.real() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("layout to scenario is deterministic") {
    NodeLayout l = canonical_embedding({11.5, 10.0, 11.0, 14.0});
    l.eps = 0.1;
    l.d0 = 5.0;
    l.gamma = {2.0, 2.5};
    l.relay = {1.0, 2.0};
    ScenarioParams p;
    p.relay_power = {10.0};
    const Scenario a = layout_to_scenario(l, p);
    const Scenario b = layout_to_scenario(l, p);
    REQUIRE(a.num_bands() == b.num_bands());
    for (int q = 0; q < a.num_bands(); ++q) {
        const auto& ba = a.bands[static_cast<std::size_t>(q)];
        const auto& bb = b.bands[static_cast<std::size_t>(q)];
        CHECK(std::memcmp(&ba, &bb, sizeof ba) == 0);
    }
}

TEST_CASE("canonical embedding reproduces its distance quadruple") {
    const EmbeddingDistances d{6.52, 6.73, 8.32, 6.64};
    const NodeLayout l = canonical_embedding(d);
    CHECK(dist(l.s1, l.d1) == doctest::Approx(d.d11).epsilon(1e-12));
    CHECK(dist(l.s2, l.d2) == doctest::Approx(d.d22).epsilon(1e-12));
    CHECK(dist(l.s1, l.d2) == doctest::Approx(d.d12).epsilon(1e-12));
    CHECK(dist(l.s2, l.d1) == doctest::Approx(d.d21).epsilon(1e-12));
}

TEST_CASE("validate reports violations instead of throwing") {
    Scenario s;
    s.bands.resize(1);
    s.normalize_params();
    s.df[0] = {0.6, 0.6, 0.5};
    auto v = validate(s);
    REQUIRE(!v.empty());
    bool tau = false;
    for (const auto& msg : v) tau |= msg.find("tau sum exceeds 1") != std::string::npos;
    CHECK(tau);

    Scenario zero_noise;
    zero_noise.bands.resize(1);
    zero_noise.normalize_params();
    zero_noise.bands[0].noise_d1 = 0.0;
    v = validate(zero_noise);
    bool noise = false;
    for (const auto& msg : v) noise |= msg.find("noise must be positive") != std::string::npos;
    CHECK(noise);
}

TEST_CASE("the three-equilibria reproduction scenario is well formed") {
    const Scenario s = fig_scenario(4).scenario;
    CHECK(validate(s).empty());
    CHECK(s.num_bands() == 2);
    CHECK(s.bands[1].h1r.real() == doctest::Approx(-3.1));
}

TEST_CASE("layout validation flags coincident nodes when the relay has no height") {
    NodeLayout l;
    l.s1 = {0.0, 0.0};
    l.d1 = {1.0, 0.0};
    l.s2 = {0.0, 1.0};
    l.d2 = {1.0, 1.0};
    l.relay = {0.0, 0.0};  // on top of s1
    l.eps = 0.0;
    l.d0 = 1.0;
    l.gamma = {2.0};
    CHECK(!validate(l).empty());
    l.eps = 0.1;  // a height resolves the singularity
    CHECK(validate(l).empty());

    NodeLayout direct = l;
    direct.d2 = direct.s1;  // a direct link of length zero is always invalid
    CHECK(!validate(direct).empty());
}

TEST_CASE("dbm conversion round-trips") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double dbm = rng.uniform(-40.0, 40.0);
        CHECK(linear_to_dbm(dbm_to_linear(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
        const double lin = rng.uniform(1e-4, 1e4);
        CHECK(dbm_to_linear(linear_to_dbm(lin)) == doctest::Approx(lin).epsilon(1e-12));
    }
}
