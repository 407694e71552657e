#pragma once

// Stackelberg leader sweeps: the relay operator fixes one knob (amplification
// gain, power split nu, or position), the transmitters play the power
// allocation game to equilibrium, and the sweep records the equilibrium
// sum-rate per leader value. Also the single-band protocol dominance map.

#include <optional>
#include <vector>

#include "irc/af_analytic.hpp"
#include "irc/game.hpp"

namespace irc {

enum class LeaderVariable { Amplification, Nu, RelayPosition };

enum class EquilibriumPolicy {
    CournotCanonical,  // numerical Cournot from the uniform allocation
    CournotMultiStart, // corner + center starts, best sum-rate equilibrium kept
    Analytic           // exact affine iteration (fixed-gain AF, Q = 2 only)
};

struct SweepSpec {
    LeaderVariable variable = LeaderVariable::Nu;
    int resolution = 21;        // scalar points, or per axis for positions
    double lo = 0.0, hi = 1.0;  // scalar range
    double half_extent = 10.0;  // position sweeps cover [-L, L]^2
    EquilibriumPolicy policy = EquilibriumPolicy::CournotCanonical;
    int max_iter = 1000;
    double tol = 1e-6;
    BrOptions br{};
};

struct SweepPoint {
    double x = 0.0, y = 0.0;  // leader value; y used by position sweeps
    bool converged = false;
    PowerAllocation ne;
    double u1 = 0.0, u2 = 0.0;
    double sum_rate() const { return u1 + u2; }
    int iterations = 0;
    int distinct_ne = 1;  // > 1 when multi-start found several equilibria
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepPoint> points;
};

// Rebuilds the scenario for each leader value (regenerating pathloss gains on
// position sweeps), computes the followers' equilibrium, and records rates.
// Per-point non-convergence is recorded and the sweep continues. Position
// sweeps require a layout.
SweepResult sweep(const SweepSpec& spec, const Scenario& base,
                  const NodeLayout* layout = nullptr);

struct BestLeader {
    double x = 0.0, y = 0.0;
    double sum_rate = 0.0;
};

// Argmax of sum-rate over converged points; ties keep the smallest leader
// value (lexicographic for positions). Throws when nothing converged.
BestLeader best_leader_value(const SweepResult& r);

// ---- Protocol dominance over relay positions (single band, no game) ----

enum class ProtoLabel { DF = 0, EF = 1, AF = 2 };  // tie precedence order

const char* proto_label_name(ProtoLabel l);

struct DominanceCell {
    double xr = 0.0, yr = 0.0;
    ProtoLabel label = ProtoLabel::DF;
    double sum_df = 0.0, sum_ef = 0.0, sum_af = 0.0;
};

struct DominanceOptions {
    std::vector<double> tau_grid{0.0, 0.25, 0.5};            // DF, per user
    std::vector<double> nu_grid{0.0, 0.25, 0.5, 0.75, 1.0};  // DF and EF
    double tie_tol = 1e-6;  // rates this close are a tie; precedence decides
    // Pinned EF split for cut evaluations. Asymmetric on purpose: at 1/2 the
    // two receivers carry the same relative relay-interference load at the
    // decodability frontier and the sum-rate jump cancels to second order.
    double cut_nu = 0.75;
};

struct DominanceGrid {
    double x_lo = -1.0, x_hi = 1.0;
    double y_lo = -1.0, y_hi = 1.0;
    int nx = 30, ny = 30;
};

// Per relay position: each protocol's best full-power sum-rate (DF over the
// tau/nu grid, EF over the nu grid, AF with the saturating gain) and the
// winning label. Row-major over the grid, x fastest.
std::vector<DominanceCell> dominance_map(const NodeLayout& layout,
                                         const ScenarioParams& params,
                                         const DominanceGrid& grid,
                                         const DominanceOptions& opts = {});

// Same evaluation along a horizontal cut y = y_cut, with the EF split pinned
// to opts.cut_nu so the bi-level case frontier shows up as a rate jump.
std::vector<DominanceCell> dominance_cut(const NodeLayout& layout,
                                         const ScenarioParams& params,
                                         double y_cut, double x_lo, double x_hi,
                                         int n, const DominanceOptions& opts = {});

}  // namespace irc
