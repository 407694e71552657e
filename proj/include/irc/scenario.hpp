#pragma once

// Network description for the two-user multi-band interference relay channel:
// per-band link gains, noise levels, relay power, protocol parameters, and the
// geometry-to-gain conversion used by the reproduction scripts.

#include <cstdint>
#include <string>
#include <vector>

#include "irc/common.hpp"

namespace irc {

enum class Protocol { DF, EF, AF, AF_FIXED };

const char* protocol_name(Protocol p);

// One frequency band. hij is the gain from source i to destination j, hir from
// source i to the relay, hri from the relay to destination i.
struct BandChannel {
    ComplexGain h11{1.0, 0.0}, h12{0.0, 0.0}, h21{0.0, 0.0}, h22{1.0, 0.0};
    ComplexGain h1r{0.0, 0.0}, h2r{0.0, 0.0}, hr1{0.0, 0.0}, hr2{0.0, 0.0};
    double noise_d1 = 1.0;    // N1, linear
    double noise_d2 = 1.0;    // N2, linear
    double noise_r = 1.0;     // Nr, linear
    double relay_power = 0.0; // Pr on this band, linear
};

// Cooperation degrees and relay power split for decode-and-forward. nu is the
// relay fraction for user 1; user 2 gets 1 - nu.
struct DfParams {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double nu = 0.5;
};

struct AfGainMode {
    bool saturating = true;   // gain saturates the relay power constraint
    double fixed_gain = 0.0;  // used when !saturating
};

// Coordinated time-sharing schedule: user i transmits a fraction alpha_i of
// the frame at power P_i/alpha_i and is interfered during a fraction beta_j of
// its own window. Feasibility requires beta1*alpha2 == beta2*alpha1.
struct TsParams {
    double alpha1 = 1.0, alpha2 = 1.0;
    double beta1 = 1.0, beta2 = 1.0;
};

struct Scenario {
    std::vector<BandChannel> bands;
    double p1 = 1.0, p2 = 1.0;  // total transmit powers, linear
    Protocol protocol = Protocol::AF;
    bool time_sharing = false;
    std::vector<DfParams> df;   // per band
    std::vector<double> ef_nu;  // per band
    std::vector<AfGainMode> af; // per band
    std::vector<TsParams> ts;   // per band, used when time_sharing

    // Saturating AF gain computed from total powers instead of the per-band
    // allocated powers. Off by default: the gain tracks what the relay
    // actually receives.
    bool gain_denominator_full = false;

    // Multi-band EF utility with per-band receiver-quality case selection
    // instead of the always-achievable no-cancellation rates. Off by default;
    // see rates.hpp.
    bool ef_case_select = false;

    int num_bands() const { return static_cast<int>(bands.size()); }
    double power(int user) const { return user == 1 ? p1 : p2; }

    // Protocol parameter vectors sized to the band count with defaults.
    void normalize_params();
};

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline double dist(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Planar node positions. The relay sits at height eps off the node plane, so
// relay-link distances are sqrt(planar^2 + eps^2) and never hit the pathloss
// singularity as long as eps > 0.
struct NodeLayout {
    Vec2 s1, s2, d1, d2;
    Vec2 relay;
    double eps = 0.0;
    double d0 = 1.0;                    // reference distance
    std::vector<double> gamma;          // per-band pathloss exponent
    std::vector<std::uint8_t> relay_on; // per band; empty = relay on every band

    int num_bands() const { return static_cast<int>(gamma.size()); }
    bool band_has_relay(int q) const {
        return relay_on.empty() || relay_on[static_cast<std::size_t>(q)] != 0;
    }
};

// |h| = (d/d0)^(-gamma/2), phase zero. Throws std::domain_error for d <= 0.
ComplexGain pathloss_gain(double distance, double d0, double gamma);

// Fills every gain of `s` from pairwise distances. Direct links use planar
// distance; relay links apply the eps height correction. Bands the relay does
// not serve get zero relay gains and zero relay power. Band counts must match.
void apply_layout(Scenario& s, const NodeLayout& layout);

// Everything geometry cannot provide when building a scenario from a layout.
// Per-band vectors of size 1 broadcast to all bands.
struct ScenarioParams {
    double p1 = 1.0, p2 = 1.0;
    std::vector<double> noise_d1{1.0}, noise_d2{1.0}, noise_r{1.0};
    std::vector<double> relay_power{0.0};
    Protocol protocol = Protocol::AF;
    bool time_sharing = false;
    std::vector<DfParams> df;
    std::vector<double> ef_nu;
    std::vector<AfGainMode> af;
    std::vector<TsParams> ts;
    bool gain_denominator_full = false;
    bool ef_case_select = false;
};

Scenario layout_to_scenario(const NodeLayout& layout, const ScenarioParams& params);

// Checks every type invariant and returns all violations (empty = ok).
// Never throws on bad user input.
std::vector<std::string> validate(const Scenario& s);
std::vector<std::string> validate(const NodeLayout& l);

}  // namespace irc
