#pragma once

// Optimal ZDSAF amplification gain for one user's rate. The rate as a
// function of the gain a is C(|m a + n|^2 / (|p a + q|^2 + s a^2 + 1)); its
// stationary points are the real roots of a quadratic, and the optimum over
// [0, a_max] is the best of {0, a_max, interior roots}.

#include <utility>
#include <vector>

#include "irc/rates.hpp"

namespace irc {

struct GainParams {
    ComplexGain m, n, p, q;
    double s = 0.0;

    // Composites for `user`'s rate on a band, normalized by that user's noise
    // so that af_rate(a) equals rate_af(b, p1, p2, a) for the same user.
    static GainParams for_user(const BandChannel& b, double p1, double p2, int user);
};

// Rate of the parameterized user at amplification gain a.
double af_rate(const GainParams& gp, double a);

struct GainSolution {
    double optimum = 0.0;
    std::vector<std::pair<double, double>> candidates;  // (gain, rate)
    double discriminant = 0.0;
};

// Real stationary points of the rate (0, 1 or 2 of them). A degenerate
// quadratic coefficient (relative magnitude below 1e-14) falls back to the
// linear equation; if that degenerates too there are no roots.
std::vector<double> critical_points(const GainParams& gp);

// Argmax of the user rate over [0, a_max]; ties pick the smallest gain.
GainSolution optimal_gain(const GainParams& gp, double a_max);

// Numerical argmax of R1(a) + R2(a) over [0, a_max]: grid scan of grid_n
// points, then golden-section refinement on the best bracket.
double sum_rate_gain(const BandChannel& b, double p1, double p2, double a_max,
                     int grid_n);

}  // namespace irc
