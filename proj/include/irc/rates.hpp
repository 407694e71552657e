#pragma once

// Closed-form single-band achievable rates for the three relaying protocols
// (decode-and-forward, bi-level compression estimate-and-forward, zero-delay
// scalar amplify-and-forward) plus the coordinated time-sharing wrapper.
// All powers are linear; rates are bits per channel use.

#include <functional>

#include "irc/scenario.hpp"

namespace irc {

struct RatePair {
    double r1 = 0.0;
    double r2 = 0.0;
    double sum() const { return r1 + r2; }
    double get(int user) const { return user == 1 ? r1 : r2; }
};

// Result of the bi-level EF evaluation. case_id identifies which receiver (if
// any) can decode and cancel the relay signal intended for the other one:
//   1 -> destination 1 cancels, 2 -> destination 2 cancels, 3 -> neither.
// nwz1/nwz2 are the Wyner-Ziv compression noise powers, set to their lower
// bounds with equality; +inf when the corresponding relay path is absent.
struct EfCaseResult {
    int case_id = 3;
    double nwz1 = 0.0;
    double nwz2 = 0.0;
    RatePair rates;
};

// DF rates: min of the relay-decoding constraint and the destination rate.
// tau_i is source i's cooperation degree, nu the relay fraction for user 1
// (user 2 gets 1 - nu). A band with no source-relay links and no relay power
// degrades to direct transmission (the decoding constraint is vacuous).
RatePair rate_df(const BandChannel& b, double p1, double p2, double tau1,
                 double tau2, double nu);

// Bi-level EF with receiver-quality case selection. Ties select case 1.
EfCaseResult rate_ef(const BandChannel& b, double p1, double p2, double nu);

// Bi-level EF where each destination treats the relay signal intended for the
// other destination as noise. Always achievable (no decodability condition)
// and concave in each user's own power, which is what the power-allocation
// game needs; rate_ef dominates it pointwise.
RatePair rate_ef_no_cancel(const BandChannel& b, double p1, double p2, double nu);

// ZDSAF rates for a given amplification gain.
RatePair rate_af(const BandChannel& b, double p1, double p2, double gain);

// Gain saturating the relay power constraint: sqrt(Pr / E|Yr|^2) for the
// actual per-band transmit powers p1, p2.
double saturating_gain(const BandChannel& b, double p1, double p2);

// Inner protocol evaluator for time sharing: (p1, p2) -> rates at those powers.
using RateFn = std::function<RatePair(double, double)>;

// Coordinated time-sharing wrapper around any single-band protocol. alpha_i=0
// silences user i (rate 0, not an error).
RatePair rate_ts(double p1, double p2, const TsParams& ts, const RateFn& inner);

// TsParams feasibility: range checks, the beta1*alpha2 == beta2*alpha1
// identity, and overlap within [max(0, a1+a2-1), min(a1, a2)].
std::vector<std::string> validate(const TsParams& ts);

}  // namespace irc
