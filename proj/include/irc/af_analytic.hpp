#pragma once

// Closed-form analysis of the two-band fixed-gain ZDSAF game. With full power
// use (theta on band 1, 1-theta on band 2) each user's best response is a
// clamped affine function of the opponent's fraction, so the equilibrium set
// can be enumerated exactly: one, two, three, or a segment of equilibria,
// each classified by the best-response slope product.

#include <optional>
#include <utility>
#include <vector>

#include "irc/game.hpp"

namespace irc {

// Best-response line coefficients: BR_i clamps F_i(theta_j) =
// (-c_ij * theta_j + d_i) / c_ii to [0, 1].
struct BrCoefficients {
    double c11 = 0.0, c22 = 0.0;  // > 0 except degenerate channels
    double c12 = 0.0, c21 = 0.0;  // >= 0
    double d1 = 0.0, d2 = 0.0;
};

// The printed d_i expression carries relay self-noise terms whose gain power
// is ambiguous; the squared reading matches the rate formula's a^2 |hri|^2
// noise term and cross-validates against the numerical best response.
enum class DReading { Squared, Literal };

// Requires Q = 2 and fixed amplification gains. Throws std::domain_error on
// degenerate channels (some c_ii = 0) or unsupported scenarios.
BrCoefficients br_coefficients(const Scenario& s,
                               DReading reading = DReading::Squared);

// Clamped affine best response of `user` to the opponent's fraction.
double br_affine(const BrCoefficients& c, int user, double theta_opponent);

enum class NeKind { Interior, Border, SegmentMember };
enum class NeStability { Stable, Unstable, Neutral };

struct NePoint {
    double theta1 = 0.0, theta2 = 0.0;
    NeKind kind = NeKind::Border;
    NeStability stability = NeStability::Stable;
    double slope_product = 0.0;
};

enum class NeCardinality { One, Two, Three, Infinite };

struct NeSet {
    std::vector<NePoint> points;  // segment endpoints when infinite
    NeCardinality cardinality = NeCardinality::One;
    std::optional<std::pair<NePoint, NePoint>> segment;
};

// Full equilibrium enumeration. Sign cases of (d1, d2) and the saturation
// cases F_i(1) >= 1 give immediate unique equilibria; the remaining case
// enumerates the fixed points of the piecewise-affine best-response
// composition exactly, including the superposed-line continuum. Coincidence
// configurations (two equilibria, segment) are detected at 1e-12.
NeSet enumerate_ne(const BrCoefficients& c);

// Intersection of the two unclamped best-response lines (may land outside
// [0,1]^2; the caller interprets). Throws on parallel lines.
std::pair<double, double> interior_ne(const BrCoefficients& c);

// Slope product |dBR1/dtheta2 * dBR2/dtheta1| at the point: zero where a best
// response is clamped in a neighborhood, c_ij/c_ii where it is interior; a
// clamp boundary passing exactly through the point reports the larger
// one-sided product. Stable < 1, unstable > 1, neutral at 1 (within 1e-12).
std::pair<NeStability, double> stability(const BrCoefficients& c, double theta1,
                                         double theta2);

struct BasinCell {
    double theta1 = 0.0, theta2 = 0.0;  // initial state (cell center)
    int ne_index = -1;                  // index into NeSet.points; -1 not converged,
                                        // -2 converged inside a segment
    int iterations = 0;
};

// Runs the exact clamped-affine Cournot iteration from every cell of a
// resolution x resolution grid of initial states and labels each cell with
// the equilibrium it reaches.
std::vector<BasinCell> basin_map(const BrCoefficients& c, const NeSet& ne,
                                 int resolution);

// One exact alternating best-response update (user 1 first).
std::pair<double, double> affine_cournot_step(const BrCoefficients& c, double t1,
                                              double t2);

}  // namespace irc
