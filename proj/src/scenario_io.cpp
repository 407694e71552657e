#include "irc/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "irc/rates.hpp"

namespace irc {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round_number(double v) {
    return std::strtod(format_number(v).c_str(), nullptr);
}

namespace {

// powers: bare number (linear), {"linear": x}, or {"dbm": x}
double parse_power(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_object()) {
        if (j.contains("linear")) return j.at("linear").get<double>();
        if (j.contains("dbm")) return dbm_to_linear(j.at("dbm").get<double>());
    }
    throw ScenarioError(what + ": expected a number, {\"linear\": x} or {\"dbm\": x}");
}

// gains: bare real or {"re": a, "im": b}
ComplexGain parse_gain(const json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_object())
        return {j.value("re", 0.0), j.value("im", 0.0)};
    throw ScenarioError(what + ": expected a real number or {\"re\": a, \"im\": b}");
}

json gain_to_json(const ComplexGain& g) {
    if (g.imag() == 0.0) return round_number(g.real());
    return json{{"re", round_number(g.real())}, {"im", round_number(g.imag())}};
}

Protocol parse_protocol(const std::string& name) {
    if (name == "DF") return Protocol::DF;
    if (name == "EF") return Protocol::EF;
    if (name == "AF") return Protocol::AF;
    if (name == "AF_FIXED") return Protocol::AF_FIXED;
    throw ScenarioError("unknown protocol '" + name + "'");
}

Vec2 parse_vec(const json& j, const std::string& what) {
    if (j.is_array() && j.size() == 2)
        return {j[0].get<double>(), j[1].get<double>()};
    throw ScenarioError(what + ": expected [x, y]");
}

NodeLayout parse_layout(const json& j) {
    NodeLayout l;
    l.s1 = parse_vec(j.at("s1"), "layout.s1");
    l.s2 = parse_vec(j.at("s2"), "layout.s2");
    l.d1 = parse_vec(j.at("d1"), "layout.d1");
    l.d2 = parse_vec(j.at("d2"), "layout.d2");
    l.relay = parse_vec(j.at("relay"), "layout.relay");
    l.eps = j.value("eps", 0.0);
    l.d0 = j.value("d0", 1.0);
    l.gamma = j.at("gamma").get<std::vector<double>>();
    if (j.contains("relay_bands"))
        for (bool on : j.at("relay_bands").get<std::vector<bool>>())
            l.relay_on.push_back(on ? 1 : 0);
    return l;
}

}  // namespace

LoadedScenario scenario_from_json(const json& j) {
    LoadedScenario out;
    Scenario& s = out.scenario;
    try {
        s.protocol = parse_protocol(j.value("protocol", std::string("AF")));
        s.time_sharing = j.value("time_sharing", false);
        s.p1 = parse_power(j.at("p1"), "p1");
        s.p2 = parse_power(j.at("p2"), "p2");
        const std::string gd = j.value("gain_denominator", std::string("allocated"));
        if (gd != "allocated" && gd != "full")
            throw ScenarioError("gain_denominator must be 'allocated' or 'full'");
        s.gain_denominator_full = (gd == "full");
        s.ef_case_select = j.value("ef_case_select", false);

        if (j.contains("layout")) out.layout = parse_layout(j.at("layout"));

        if (!j.contains("bands") || !j.at("bands").is_array() || j.at("bands").empty())
            throw ScenarioError("config needs a non-empty 'bands' array");
        const json& jb = j.at("bands");
        s.bands.resize(jb.size());
        s.normalize_params();
        for (std::size_t q = 0; q < jb.size(); ++q) {
            const json& e = jb[q];
            BandChannel& b = s.bands[q];
            auto g = [&](const char* key, ComplexGain& dst) {
                if (e.contains(key)) dst = parse_gain(e.at(key), key);
            };
            g("h11", b.h11), g("h12", b.h12), g("h21", b.h21), g("h22", b.h22);
            g("h1r", b.h1r), g("h2r", b.h2r), g("hr1", b.hr1), g("hr2", b.hr2);
            if (e.contains("noise1")) b.noise_d1 = parse_power(e.at("noise1"), "noise1");
            if (e.contains("noise2")) b.noise_d2 = parse_power(e.at("noise2"), "noise2");
            if (e.contains("noise_r")) b.noise_r = parse_power(e.at("noise_r"), "noise_r");
            if (e.contains("relay_power"))
                b.relay_power = parse_power(e.at("relay_power"), "relay_power");
            if (e.contains("df")) {
                const json& d = e.at("df");
                s.df[q] = {d.value("tau1", 0.0), d.value("tau2", 0.0), d.value("nu", 0.5)};
            }
            if (e.contains("ef_nu")) s.ef_nu[q] = e.at("ef_nu").get<double>();
            if (e.contains("af")) {
                const json& a = e.at("af");
                const std::string mode = a.value("mode", std::string("saturating"));
                if (mode == "saturating")
                    s.af[q] = {true, 0.0};
                else if (mode == "fixed")
                    s.af[q] = {false, a.value("gain", 0.0)};
                else
                    throw ScenarioError("af.mode must be 'saturating' or 'fixed'");
            } else if (s.protocol == Protocol::AF_FIXED) {
                s.af[q] = {false, 0.0};
            }
            if (e.contains("ts")) {
                const json& t = e.at("ts");
                s.time_sharing = true;
                if (s.ts.size() != s.bands.size()) s.ts.resize(s.bands.size());
                s.ts[q] = {t.value("alpha1", 1.0), t.value("alpha2", 1.0),
                           t.value("beta1", 1.0), t.value("beta2", 1.0)};
            }
        }
        if (s.time_sharing && s.ts.size() != s.bands.size()) s.ts.resize(s.bands.size());

        if (out.layout) {
            if (out.layout->num_bands() != s.num_bands())
                throw ScenarioError("layout gamma count must match the bands array");
            const auto geo = validate(*out.layout);
            if (!geo.empty()) throw ScenarioError("invalid layout", geo);
            apply_layout(s, *out.layout);
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed config: ") + e.what());
    }
    const auto violations = validate(s);
    if (!violations.empty()) throw ScenarioError("invalid scenario", violations);
    return out;
}

LoadedScenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["protocol"] = protocol_name(s.protocol);
    if (s.time_sharing) j["time_sharing"] = true;
    j["p1"] = round_number(s.p1);
    j["p2"] = round_number(s.p2);
    if (s.gain_denominator_full) j["gain_denominator"] = "full";
    if (s.ef_case_select) j["ef_case_select"] = true;
    json bands = json::array();
    for (int q = 0; q < s.num_bands(); ++q) {
        const BandChannel& b = s.bands[static_cast<std::size_t>(q)];
        const std::size_t k = static_cast<std::size_t>(q);
        json e;
        e["h11"] = gain_to_json(b.h11);
        e["h12"] = gain_to_json(b.h12);
        e["h21"] = gain_to_json(b.h21);
        e["h22"] = gain_to_json(b.h22);
        e["h1r"] = gain_to_json(b.h1r);
        e["h2r"] = gain_to_json(b.h2r);
        e["hr1"] = gain_to_json(b.hr1);
        e["hr2"] = gain_to_json(b.hr2);
        e["noise1"] = round_number(b.noise_d1);
        e["noise2"] = round_number(b.noise_d2);
        e["noise_r"] = round_number(b.noise_r);
        e["relay_power"] = round_number(b.relay_power);
        e["df"] = {{"tau1", round_number(s.df[k].tau1)},
                   {"tau2", round_number(s.df[k].tau2)},
                   {"nu", round_number(s.df[k].nu)}};
        e["ef_nu"] = round_number(s.ef_nu[k]);
        if (s.af[k].saturating)
            e["af"] = {{"mode", "saturating"}};
        else
            e["af"] = {{"mode", "fixed"}, {"gain", round_number(s.af[k].fixed_gain)}};
        if (s.time_sharing)
            e["ts"] = {{"alpha1", round_number(s.ts[k].alpha1)},
                       {"alpha2", round_number(s.ts[k].alpha2)},
                       {"beta1", round_number(s.ts[k].beta1)},
                       {"beta2", round_number(s.ts[k].beta2)}};
        bands.push_back(e);
    }
    j["bands"] = bands;
    return j;
}

json layout_to_json(const NodeLayout& l) {
    json j;
    auto vec = [](const Vec2& v) { return json::array({round_number(v.x), round_number(v.y)}); };
    j["s1"] = vec(l.s1);
    j["s2"] = vec(l.s2);
    j["d1"] = vec(l.d1);
    j["d2"] = vec(l.d2);
    j["relay"] = vec(l.relay);
    j["eps"] = round_number(l.eps);
    j["d0"] = round_number(l.d0);
    j["gamma"] = l.gamma;
    if (!l.relay_on.empty()) {
        json r = json::array();
        for (auto on : l.relay_on) r.push_back(on != 0);
        j["relay_bands"] = r;
    }
    return j;
}

NodeLayout canonical_embedding(const EmbeddingDistances& d) {
    NodeLayout l;
    l.s1 = {-d.d11 / 2.0, 0.0};
    l.d1 = {d.d11 / 2.0, 0.0};
    // S2 sits northwest of D1 at the required distance
    const double c45 = std::sqrt(0.5);
    l.s2 = {l.d1.x - d.d21 * c45, d.d21 * c45};
    // D2 closes the two remaining distance constraints; larger-x intersection
    const double cd = dist(l.s1, l.s2);
    const double r1 = d.d12, r2 = d.d22;
    if (cd < std::fabs(r1 - r2) || cd > r1 + r2)
        throw ScenarioError("canonical embedding infeasible for these distances");
    const double a = (cd * cd + r1 * r1 - r2 * r2) / (2.0 * cd);
    const double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
    const double ux = (l.s2.x - l.s1.x) / cd, uy = (l.s2.y - l.s1.y) / cd;
    const Vec2 base{l.s1.x + a * ux, l.s1.y + a * uy};
    const Vec2 p1{base.x - h * uy, base.y + h * ux};
    const Vec2 p2{base.x + h * uy, base.y - h * ux};
    l.d2 = (p1.x > p2.x || (p1.x == p2.x && p1.y >= p2.y)) ? p1 : p2;
    return l;
}

Scenario random_scenario(const RandomSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    Scenario s;
    s.bands.resize(static_cast<std::size_t>(spec.q));
    s.protocol = spec.protocol;
    s.time_sharing = spec.time_sharing;
    s.normalize_params();
    s.p1 = rng.uniform(1.0, 20.0);
    s.p2 = rng.uniform(1.0, 20.0);

    auto gain = [&]() -> ComplexGain {
        if (spec.complex_gains) return {rng.normal(), rng.normal()};
        return {std::fabs(rng.normal()) + 0.1, 0.0};
    };
    for (int q = 0; q < spec.q; ++q) {
        const std::size_t k = static_cast<std::size_t>(q);
        BandChannel& b = s.bands[k];
        b.h11 = gain();
        b.h12 = gain();
        b.h21 = gain();
        b.h22 = gain();
        b.h1r = gain();
        b.h2r = gain();
        b.hr1 = gain();
        b.hr2 = gain();
        b.noise_d1 = rng.uniform(0.5, 2.0);
        b.noise_d2 = rng.uniform(0.5, 2.0);
        b.noise_r = rng.uniform(0.5, 2.0);
        b.relay_power = spec.zero_relay_power ? 0.0 : rng.uniform(0.5, 10.0);
        if (spec.df_nonnegative_cross) {
            auto fix = [](const ComplexGain& hii, ComplexGain& hri) {
                if (hii.real() * hri.real() + hii.imag() * hri.imag() < 0.0) hri = -hri;
            };
            fix(b.h11, b.hr1);
            fix(b.h22, b.hr2);
        }
        DfParams& d = s.df[k];
        d.nu = rng.uniform(0.05, 0.95);
        if (spec.tau_max > 0.0) {
            d.tau1 = rng.uniform(0.0, spec.tau_max);
            d.tau2 = rng.uniform(0.0, spec.tau_max);
            if (d.tau1 + d.tau2 > 1.0) {
                const double f = 1.0 / (d.tau1 + d.tau2);
                d.tau1 *= f;
                d.tau2 *= f;
            }
        }
        s.ef_nu[k] = rng.uniform(0.05, 0.95);
        const double amax = saturating_gain(b, s.p1, s.p2);
        s.af[k] = {spec.protocol == Protocol::AF, rng.uniform(0.05, 1.0) * amax};
        if (spec.time_sharing) {
            TsParams& t = s.ts[k];
            t.alpha1 = rng.uniform(0.2, 1.0);
            t.alpha2 = rng.uniform(0.2, 1.0);
            const double lo = std::max(0.0, t.alpha1 + t.alpha2 - 1.0);
            const double hi = std::min(t.alpha1, t.alpha2);
            const double o = rng.uniform(lo, hi);
            t.beta2 = o / t.alpha1;
            t.beta1 = o / t.alpha2;
        }
    }
    return s;
}

namespace {

json fig2_config() {
    NodeLayout l = canonical_embedding({11.5, 10.0, 11.0, 14.0});
    l.eps = 0.1;
    l.d0 = 5.0;
    l.gamma = {2.0};
    l.relay = {0.0, 2.5};  // placeholder; dominance maps sweep the relay
    json j;
    j["schema_version"] = kSchemaVersion;
    j["protocol"] = "AF";
    j["p1"] = 10.0;
    j["p2"] = 10.0;
    j["layout"] = layout_to_json(l);
    j["bands"] = json::array({json{{"noise1", 1.0},
                                   {"noise2", 1.0},
                                   {"noise_r", 1.0},
                                   {"relay_power", 10.0},
                                   {"ef_nu", 0.5}}});
    return j;
}

json fig4_config() {
    // Two bands: a plain interference channel and a relay band. Fixed
    // amplification on the relay band saturates the power constraint at full
    // per-band powers; rho_r = 2 enters only through that value.
    const double p1 = 1.0, p2 = 3.0, pr = 2.0;
    BandChannel irc_band;
    irc_band.h11 = {2.76, 0.0};
    irc_band.h12 = {5.64, 0.0};
    irc_band.h21 = {-3.55, 0.0};
    irc_band.h22 = {-1.61, 0.0};
    irc_band.h1r = {-3.1, 0.0};
    irc_band.h2r = {2.22, 0.0};
    irc_band.hr1 = {-3.12, 0.0};
    irc_band.hr2 = {1.16, 0.0};
    irc_band.relay_power = pr;
    const double a_sat = saturating_gain(irc_band, p1, p2);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["protocol"] = "AF_FIXED";
    j["p1"] = p1;
    j["p2"] = p2;
    json ic;
    ic["h11"] = 14.15;
    ic["h12"] = 3.4;
    ic["h21"] = 0.0;
    ic["h22"] = 1.38;
    ic["h1r"] = 0.0;
    ic["h2r"] = 0.0;
    ic["hr1"] = 0.0;
    ic["hr2"] = 0.0;
    ic["relay_power"] = 0.0;
    ic["af"] = {{"mode", "fixed"}, {"gain", 0.0}};
    json rb;
    rb["h11"] = 2.76;
    rb["h12"] = 5.64;
    rb["h21"] = -3.55;
    rb["h22"] = -1.61;
    rb["h1r"] = -3.1;
    rb["h2r"] = 2.22;
    rb["hr1"] = -3.12;
    rb["hr2"] = 1.16;
    rb["relay_power"] = pr;
    rb["af"] = {{"mode", "fixed"}, {"gain", round_number(a_sat)}};
    j["bands"] = json::array({ic, rb});
    return j;
}

// Shared geometry of the Stackelberg reproduction scenarios: a relay band in
// parallel with a plain interference band.
json stackelberg_config(double eps, double g1, double g2, double p1_dbm,
                        double p2_dbm, double pr_dbm, double n1_dbm, double n2_dbm,
                        double nr_dbm, Vec2 relay, const char* protocol) {
    NodeLayout l = canonical_embedding({6.52, 6.73, 8.32, 6.64});
    l.eps = eps;
    l.d0 = 1.0;
    l.gamma = {g1, g2};
    l.relay_on = {1, 0};
    l.relay = relay;
    json j;
    j["schema_version"] = kSchemaVersion;
    j["protocol"] = protocol;
    j["p1"] = json{{"dbm", p1_dbm}};
    j["p2"] = json{{"dbm", p2_dbm}};
    j["layout"] = layout_to_json(l);
    json relay_band;
    relay_band["noise1"] = json{{"dbm", n1_dbm}};
    relay_band["noise2"] = json{{"dbm", n2_dbm}};
    relay_band["noise_r"] = json{{"dbm", nr_dbm}};
    relay_band["relay_power"] = json{{"dbm", pr_dbm}};
    relay_band["df"] = {{"tau1", 0.0}, {"tau2", 0.0}, {"nu", 0.5}};
    relay_band["ef_nu"] = 0.5;
    json ic_band;
    ic_band["noise1"] = json{{"dbm", n1_dbm}};
    ic_band["noise2"] = json{{"dbm", n2_dbm}};
    ic_band["noise_r"] = json{{"dbm", nr_dbm}};
    ic_band["relay_power"] = 0.0;
    j["bands"] = json::array({relay_band, ic_band});
    return j;
}

}  // namespace

json gen_scenario(const std::string& family, std::uint64_t seed) {
    if (family == "random-complex") {
        RandomSpec spec;
        spec.q = 2;
        spec.protocol = Protocol::AF_FIXED;
        json j = scenario_to_json(random_scenario(spec, seed));
        return j;
    }
    if (family == "random-real-pathloss") {
        Rng rng(seed);
        NodeLayout l;
        auto vec = [&]() { return Vec2{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)}; };
        l.s1 = vec();
        l.s2 = vec();
        l.d1 = vec();
        l.d2 = vec();
        l.relay = vec();
        l.eps = 0.5;
        l.d0 = 1.0;
        l.gamma = {2.0, 2.5};
        json j;
        j["schema_version"] = kSchemaVersion;
        j["protocol"] = "DF";
        j["p1"] = round_number(rng.uniform(1.0, 20.0));
        j["p2"] = round_number(rng.uniform(1.0, 20.0));
        j["layout"] = layout_to_json(l);
        json band;
        band["noise1"] = 1.0;
        band["noise2"] = 1.0;
        band["noise_r"] = 1.0;
        band["relay_power"] = round_number(rng.uniform(0.5, 10.0));
        band["df"] = {{"tau1", 0.0}, {"tau2", 0.0}, {"nu", 0.5}};
        band["ef_nu"] = 0.5;
        j["bands"] = json::array({band, band});
        return j;
    }
    if (family == "fig2-canonical") return fig2_config();
    if (family == "fig4-canonical") return fig4_config();
    if (family == "fig5-canonical")
        return stackelberg_config(0.5, 2.0, 2.0, 20, 23, 22, 10, 9, 7, {5.0, 2.0},
                                  "AF_FIXED");
    if (family == "fig6-canonical")
        return stackelberg_config(1.0, 2.5, 2.0, 20, 17, 22, 10, 9, 7, {0.0, 0.0}, "AF");
    if (family == "fig7-canonical")
        return stackelberg_config(1.0, 2.5, 2.0, 22, 17, 23, 7, 9, 0, {0.0, 0.0}, "DF");
    throw ScenarioError("unknown generation family '" + family + "'");
}

std::vector<std::string> gen_families() {
    return {"random-complex",  "random-real-pathloss", "fig2-canonical",
            "fig4-canonical",  "fig5-canonical",       "fig6-canonical",
            "fig7-canonical"};
}

LoadedScenario fig_scenario(int fig) {
    return scenario_from_json(gen_scenario("fig" + std::to_string(fig) + "-canonical", 0));
}

}  // namespace irc
