#include "irc/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "irc/rates.hpp"

namespace irc {

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::DF: return "DF";
        case Protocol::EF: return "EF";
        case Protocol::AF: return "AF";
        case Protocol::AF_FIXED: return "AF_FIXED";
    }
    return "?";
}

void Scenario::normalize_params() {
    const std::size_t q = bands.size();
    df.resize(q);
    ef_nu.resize(q, 0.5);
    af.resize(q);
    if (time_sharing) ts.resize(q);
}

ComplexGain pathloss_gain(double distance, double d0, double gamma) {
    if (!(d0 > 0.0)) throw std::domain_error("pathloss: reference distance must be > 0");
    if (!(distance > 0.0))
        throw std::domain_error(
            "pathloss: distance must be > 0 (give the relay a nonzero height eps "
            "to keep relay links off the singularity)");
    return {std::pow(distance / d0, -gamma / 2.0), 0.0};
}

void apply_layout(Scenario& s, const NodeLayout& layout) {
    const int q = layout.num_bands();
    if (s.num_bands() != q)
        throw std::invalid_argument("apply_layout: band count mismatch");

    const double d11 = dist(layout.s1, layout.d1);
    const double d12 = dist(layout.s1, layout.d2);
    const double d21 = dist(layout.s2, layout.d1);
    const double d22 = dist(layout.s2, layout.d2);
    // relay links get the height correction
    auto relay_dist = [&](const Vec2& a) {
        return std::hypot(dist(a, layout.relay), layout.eps);
    };
    const double d1r = relay_dist(layout.s1);
    const double d2r = relay_dist(layout.s2);
    const double dr1 = relay_dist(layout.d1);
    const double dr2 = relay_dist(layout.d2);

    for (int k = 0; k < q; ++k) {
        BandChannel& b = s.bands[static_cast<std::size_t>(k)];
        const double g = layout.gamma[static_cast<std::size_t>(k)];
        b.h11 = pathloss_gain(d11, layout.d0, g);
        b.h12 = pathloss_gain(d12, layout.d0, g);
        b.h21 = pathloss_gain(d21, layout.d0, g);
        b.h22 = pathloss_gain(d22, layout.d0, g);
        if (layout.band_has_relay(k)) {
            b.h1r = pathloss_gain(d1r, layout.d0, g);
            b.h2r = pathloss_gain(d2r, layout.d0, g);
            b.hr1 = pathloss_gain(dr1, layout.d0, g);
            b.hr2 = pathloss_gain(dr2, layout.d0, g);
        } else {
            b.h1r = b.h2r = b.hr1 = b.hr2 = ComplexGain{0.0, 0.0};
            b.relay_power = 0.0;
        }
    }
}

namespace {

template <typename T>
T broadcast(const std::vector<T>& v, std::size_t k, const char* what) {
    if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty");
    if (v.size() == 1) return v[0];
    if (k >= v.size()) throw std::invalid_argument(std::string(what) + ": bad band count");
    return v[k];
}

}  // namespace

Scenario layout_to_scenario(const NodeLayout& layout, const ScenarioParams& params) {
    Scenario s;
    const std::size_t q = static_cast<std::size_t>(layout.num_bands());
    s.bands.resize(q);
    s.p1 = params.p1;
    s.p2 = params.p2;
    s.protocol = params.protocol;
    s.time_sharing = params.time_sharing;
    s.gain_denominator_full = params.gain_denominator_full;
    s.ef_case_select = params.ef_case_select;
    for (std::size_t k = 0; k < q; ++k) {
        BandChannel& b = s.bands[k];
        b.noise_d1 = broadcast(params.noise_d1, k, "noise_d1");
        b.noise_d2 = broadcast(params.noise_d2, k, "noise_d2");
        b.noise_r = broadcast(params.noise_r, k, "noise_r");
        b.relay_power = broadcast(params.relay_power, k, "relay_power");
    }
    s.normalize_params();
    auto fill = [&](auto& dst, const auto& src) {
        if (src.empty()) return;
        for (std::size_t k = 0; k < q; ++k) dst[k] = broadcast(src, k, "params");
    };
    fill(s.df, params.df);
    fill(s.ef_nu, params.ef_nu);
    fill(s.af, params.af);
    if (s.time_sharing) fill(s.ts, params.ts);
    apply_layout(s, layout);
    return s;
}

namespace {

bool finite(const ComplexGain& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

void check_unit(std::vector<std::string>& out, double v, const std::string& name) {
    if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v))
        out.push_back(name + " must lie in [0,1], got " + std::to_string(v));
}

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> out;
    if (s.bands.empty()) {
        out.push_back("scenario must have at least one band");
        return out;
    }
    if (!(s.p1 >= 0.0) || !std::isfinite(s.p1)) out.push_back("p1 must be >= 0");
    if (!(s.p2 >= 0.0) || !std::isfinite(s.p2)) out.push_back("p2 must be >= 0");

    const std::size_t q = s.bands.size();
    auto sized = [&](std::size_t n) { return n == q; };
    if (!sized(s.df.size()) || !sized(s.ef_nu.size()) || !sized(s.af.size()) ||
        (s.time_sharing && !sized(s.ts.size()))) {
        out.push_back("per-band parameter vectors must match the band count");
        return out;
    }

    for (std::size_t k = 0; k < q; ++k) {
        const BandChannel& b = s.bands[k];
        const std::string at = "band " + std::to_string(k) + ": ";
        for (const ComplexGain* g : {&b.h11, &b.h12, &b.h21, &b.h22, &b.h1r, &b.h2r,
                                     &b.hr1, &b.hr2})
            if (!finite(*g)) out.push_back(at + "gain must be finite");
        if (!(b.noise_d1 > 0.0)) out.push_back(at + "noise must be positive (N1)");
        if (!(b.noise_d2 > 0.0)) out.push_back(at + "noise must be positive (N2)");
        if (!(b.noise_r > 0.0)) out.push_back(at + "noise must be positive (Nr)");
        if (!(b.relay_power >= 0.0)) out.push_back(at + "relay power must be >= 0");

        const DfParams& d = s.df[k];
        check_unit(out, d.tau1, at + "tau1");
        check_unit(out, d.tau2, at + "tau2");
        check_unit(out, d.nu, at + "df nu");
        if (d.tau1 + d.tau2 > 1.0 + 1e-12) out.push_back(at + "tau sum exceeds 1");
        check_unit(out, s.ef_nu[k], at + "ef nu");
        if (!s.af[k].saturating && !(s.af[k].fixed_gain >= 0.0))
            out.push_back(at + "fixed amplification gain must be >= 0");
        if (s.time_sharing)
            for (const std::string& v : validate(s.ts[k])) out.push_back(at + v);
    }
    return out;
}

std::vector<std::string> validate(const NodeLayout& l) {
    std::vector<std::string> out;
    if (!(l.d0 > 0.0)) out.push_back("layout: d0 must be > 0");
    if (!(l.eps >= 0.0)) out.push_back("layout: eps must be >= 0");
    if (l.gamma.empty()) out.push_back("layout: at least one band (gamma) required");
    if (!l.relay_on.empty() && l.relay_on.size() != l.gamma.size())
        out.push_back("layout: relay_on size must match gamma");
    if (l.eps == 0.0) {
        for (const Vec2* n : {&l.s1, &l.s2, &l.d1, &l.d2})
            if (dist(*n, l.relay) == 0.0)
                out.push_back("layout: node coincides with the relay and eps = 0");
    }
    auto planar = [&](const Vec2& a, const Vec2& b, const char* name) {
        if (dist(a, b) == 0.0)
            out.push_back(std::string("layout: coincident nodes on a direct link (") +
                          name + ")");
    };
    planar(l.s1, l.d1, "s1-d1");
    planar(l.s1, l.d2, "s1-d2");
    planar(l.s2, l.d1, "s2-d1");
    planar(l.s2, l.d2, "s2-d2");
    return out;
}

}  // namespace irc
