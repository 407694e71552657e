#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "irc/game.hpp"
#include "irc/scenario_io.hpp"

using namespace irc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(IRCSIM_CLI_PATH) + " " + args + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("generation is deterministic per seed and family") {
    for (const std::string& family : gen_families()) {
        const auto a = gen_scenario(family, 12345);
        const auto b = gen_scenario(family, 12345);
        CHECK(a.dump() == b.dump());
        if (family.rfind("random", 0) == 0) {
            const auto c = gen_scenario(family, 54321);
            CHECK(a.dump() != c.dump());
        }
    }
    CHECK_THROWS_AS(gen_scenario("no-such-family", 1), ScenarioError);
}

TEST_CASE("every generated config loads and validates") {
    for (const std::string& family : gen_families()) {
        const bool random = family.rfind("random", 0) == 0;
        const int seeds = random ? 100 : 1;
        for (int seed = 0; seed < seeds; ++seed) {
            const LoadedScenario ls = scenario_from_json(gen_scenario(family, 7 + seed));
            CHECK(validate(ls.scenario).empty());
        }
    }
}

TEST_CASE("the three-equilibria config carries the exact gain list") {
    const auto j = gen_scenario("fig4-canonical", 0);
    const auto& rb = j.at("bands").at(1);
    CHECK(rb.at("h1r").get<double>() == -3.1);
    CHECK(rb.at("h2r").get<double>() == 2.22);
    CHECK(rb.at("hr1").get<double>() == -3.12);
    CHECK(rb.at("hr2").get<double>() == 1.16);
    CHECK(rb.at("h11").get<double>() == 2.76);
    const auto& ic = j.at("bands").at(0);
    CHECK(ic.at("h11").get<double>() == 14.15);
    CHECK(ic.at("h21").get<double>() == 0.0);
    // rho_r = 2 enters only through the saturating value of the fixed gain
    const double a = rb.at("af").at("gain").get<double>();
    CHECK(a == doctest::Approx(std::sqrt(2.0 / (9.61 + 3.0 * 4.9284 + 1.0))).epsilon(1e-10));
}

TEST_CASE("scenario json round trip preserves the model") {
    RandomSpec spec;
    spec.q = 2;
    spec.protocol = Protocol::EF;
    spec.time_sharing = true;
    const Scenario s = random_scenario(spec, 77);
    const LoadedScenario back = scenario_from_json(scenario_to_json(s));
    const PowerAllocation th{{0.4, 0.5}, {0.2, 0.7}};
    for (int user : {1, 2})
        CHECK(utility(back.scenario, th, user) ==
              doctest::Approx(utility(s, th, user)).epsilon(1e-9));
}

TEST_CASE("powers parse from dbm or linear forms") {
    nlohmann::json j = gen_scenario("fig4-canonical", 0);
    j["p1"] = {{"dbm", 20.0}};
    j["p2"] = {{"linear", 3.5}};
    const Scenario s = scenario_from_json(j).scenario;
    CHECK(s.p1 == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(s.p2 == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("gains parse from bare reals or re/im objects") {
    nlohmann::json j = gen_scenario("fig4-canonical", 0);
    j["bands"][0]["h11"] = {{"re", 1.5}, {"im", -2.0}};
    const Scenario s = scenario_from_json(j).scenario;
    CHECK(s.bands[0].h11.real() == 1.5);
    CHECK(s.bands[0].h11.imag() == -2.0);
}

TEST_CASE("invalid configs throw with the violation list") {
    nlohmann::json j = gen_scenario("fig4-canonical", 0);
    j["bands"][0]["noise1"] = 0.0;
    j["bands"][1]["df"] = {{"tau1", 0.7}, {"tau2", 0.7}, {"nu", 0.5}};
    bool threw = false;
    try {
        scenario_from_json(j);
    } catch (const ScenarioError& e) {
        threw = true;
        bool noise = false, tau = false;
        for (const auto& v : e.violations()) {
            noise |= v.find("noise must be positive") != std::string::npos;
            tau |= v.find("tau sum exceeds 1") != std::string::npos;
        }
        CHECK(noise);
        CHECK(tau);
    }
    CHECK(threw);
}

TEST_CASE("numbers are printed with 12 significant digits") {
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
    CHECK(format_number(2.0) == "2");
    CHECK(round_number(1.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cli: gen is byte-identical per seed and drives the analysis subcommands") {
    REQUIRE(run_cli("gen --family fig4-canonical --out /tmp/ircsim_t_fig4.json") == 0);
    REQUIRE(run_cli("gen --family fig4-canonical --out /tmp/ircsim_t_fig4b.json") == 0);
    CHECK(slurp("/tmp/ircsim_t_fig4.json") == slurp("/tmp/ircsim_t_fig4b.json"));

    REQUIRE(run_cli("gen --family random-complex --seed 9 --out /tmp/ircsim_t_r9.json") == 0);
    REQUIRE(run_cli("gen --family random-complex --seed 9 --out /tmp/ircsim_t_r9b.json") == 0);
    CHECK(slurp("/tmp/ircsim_t_r9.json") == slurp("/tmp/ircsim_t_r9b.json"));

    // enumeration finds the three equilibria of the reproduction scenario
    REQUIRE(run_cli("ne --analytic --scenario /tmp/ircsim_t_fig4.json --out /tmp/ircsim_t_ne.json") == 0);
    const std::string ne = slurp("/tmp/ircsim_t_ne.json");
    CHECK(ne.find("\"cardinality\": \"three\"") != std::string::npos);
    CHECK(ne.find("unstable") != std::string::npos);

    // rates and af-gain emit machine-readable output
    REQUIRE(run_cli("rates --scenario /tmp/ircsim_t_fig4.json --band 1 --out /tmp/ircsim_t_rates.json") == 0);
    CHECK(slurp("/tmp/ircsim_t_rates.json").find("\"r1\"") != std::string::npos);
    REQUIRE(run_cli("af-gain --scenario /tmp/ircsim_t_fig4.json --band 1 --user 1 "
                    "--out /tmp/ircsim_t_gain.json") == 0);
    CHECK(slurp("/tmp/ircsim_t_gain.json").find("\"candidates\"") != std::string::npos);

    // cournot trajectories re-run bit-identically
    REQUIRE(run_cli("cournot --scenario /tmp/ircsim_t_fig4.json --start 0.1,0.9 "
                    "--max-iter 500 --out /tmp/ircsim_t_c1.csv") == 0);
    REQUIRE(run_cli("cournot --scenario /tmp/ircsim_t_fig4.json --start 0.1,0.9 "
                    "--max-iter 500 --out /tmp/ircsim_t_c2.csv") == 0);
    const std::string traj = slurp("/tmp/ircsim_t_c1.csv");
    CHECK(traj == slurp("/tmp/ircsim_t_c2.csv"));
    CHECK(traj.rfind("iteration,theta1_0,theta1_1,theta2_0,theta2_1,u1,u2", 0) == 0);

    REQUIRE(run_cli("basin --scenario /tmp/ircsim_t_fig4.json --resolution 11 "
                    "--out /tmp/ircsim_t_basin.csv") == 0);
    CHECK(slurp("/tmp/ircsim_t_basin.csv").rfind("theta1_0,theta2_0,ne_index", 0) == 0);
}

TEST_CASE("cli: exit codes distinguish bad configs from missing subjects") {
    std::ofstream bad("/tmp/ircsim_t_bad.json");
    bad << "{\"p1\": 1, \"p2\": 1, \"protocol\": \"DF\", \"bands\": "
           "[{\"noise1\": 0}]}";
    bad.close();
    CHECK(run_cli("rates --scenario /tmp/ircsim_t_bad.json") == 1);

    std::ofstream garbled("/tmp/ircsim_t_garbled.json");
    garbled << "{not json";
    garbled.close();
    CHECK(run_cli("rates --scenario /tmp/ircsim_t_garbled.json") == 1);

    CHECK(run_cli("rates --scenario /tmp/ircsim_t_missing.json") == 1);
    CHECK(run_cli("gen --family bogus") == 1);
}

TEST_CASE("cli: sweeps emit one row per grid point") {
    REQUIRE(run_cli("gen --family fig7-canonical --out /tmp/ircsim_t_fig7.json") == 0);
    REQUIRE(run_cli("sweep-nu --scenario /tmp/ircsim_t_fig7.json --resolution 5 "
                    "--out /tmp/ircsim_t_nu.csv") == 0);
    const std::string csv = slurp("/tmp/ircsim_t_nu.csv");
    int lines = 0;
    for (char ch : csv) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == 6);  // header + 5 points
    REQUIRE(run_cli("gen --family fig2-canonical --out /tmp/ircsim_t_fig2.json") == 0);
    REQUIRE(run_cli("dominance-map --scenario /tmp/ircsim_t_fig2.json --nx 6 --ny 5 "
                    "--out /tmp/ircsim_t_dom.csv") == 0);
    const std::string dom = slurp("/tmp/ircsim_t_dom.csv");
    lines = 0;
    for (char ch : dom) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == 31);  // header + 30 cells

    REQUIRE(run_cli("gen --family fig5-canonical --out /tmp/ircsim_t_fig5.json") == 0);
    REQUIRE(run_cli("sweep-gain --scenario /tmp/ircsim_t_fig5.json --resolution 4 "
                    "--policy analytic --format json --out /tmp/ircsim_t_gain.json") == 0);
    const std::string gain = slurp("/tmp/ircsim_t_gain.json");
    CHECK(gain.find("\"best\"") != std::string::npos);
    CHECK(gain.find("\"sweep\"") != std::string::npos);

    REQUIRE(run_cli("gen --family fig6-canonical --out /tmp/ircsim_t_fig6.json") == 0);
    REQUIRE(run_cli("sweep-position --scenario /tmp/ircsim_t_fig6.json --resolution 3 "
                    "--extent 8 --out /tmp/ircsim_t_pos.csv") == 0);
    const std::string pos = slurp("/tmp/ircsim_t_pos.csv");
    lines = 0;
    for (char ch : pos) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == 10);  // header + 3x3 grid
    CHECK(pos.rfind("x,y,converged", 0) == 0);
}

TEST_CASE("cli: cournot json summary and the simultaneous-update flag") {
    REQUIRE(run_cli("gen --family fig4-canonical --out /tmp/ircsim_t_fig4c.json") == 0);
    REQUIRE(run_cli("cournot --scenario /tmp/ircsim_t_fig4c.json --format json "
                    "--out /tmp/ircsim_t_cj.json") == 0);
    const std::string j = slurp("/tmp/ircsim_t_cj.json");
    CHECK(j.find("\"converged\": true") != std::string::npos);
    CHECK(j.find("\"theta1\"") != std::string::npos);
    REQUIRE(run_cli("cournot --scenario /tmp/ircsim_t_fig4c.json --simultaneous "
                    "--format json --out /tmp/ircsim_t_cs.json") == 0);
    CHECK(slurp("/tmp/ircsim_t_cs.json").find("\"iterations\"") != std::string::npos);
}
