#include "irc/rates.hpp"

#include <cmath>
#include <limits>

namespace irc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 2 Re(a * conj(b))
double cross_re(const ComplexGain& a, const ComplexGain& b) {
    return 2.0 * (a.real() * b.real() + a.imag() * b.imag());
}

}  // namespace

RatePair rate_df(const BandChannel& b, double p1, double p2, double tau1,
                 double tau2, double nu) {
    const double nu1 = nu, nu2 = 1.0 - nu;
    const double pr = b.relay_power;
    const double g11 = mag2(b.h11), g12 = mag2(b.h12), g21 = mag2(b.h21),
                 g22 = mag2(b.h22);
    const double g1r = mag2(b.h1r), g2r = mag2(b.h2r), gr1 = mag2(b.hr1),
                 gr2 = mag2(b.hr2);

    // destination rate: own signal plus the relay's cooperation signal against
    // the other pair's superposition and noise
    auto dest = [&](double gii, double gji, double gri, const ComplexGain& hii,
                    const ComplexGain& hji, const ComplexGain& hri, double pi,
                    double pj, double ti, double tj, double ni, double nj,
                    double noise) {
        const double num =
            gii * pi + gri * ni * pr + cross_re(hii, hri) * std::sqrt(ti * pi * ni * pr);
        const double den =
            gji * pj + gri * nj * pr + cross_re(hji, hri) * std::sqrt(tj * pj * nj * pr) +
            noise;
        return capacity(num / den);
    };
    const double rd1 = dest(g11, g21, gr1, b.h11, b.h21, b.hr1, p1, p2, tau1, tau2,
                            nu1, nu2, b.noise_d1);
    const double rd2 = dest(g22, g12, gr2, b.h22, b.h12, b.hr2, p2, p1, tau2, tau1,
                            nu2, nu1, b.noise_d2);

    // A band the relay neither hears nor powers degrades to direct
    // transmission; the decoding constraint is vacuous there.
    if (g1r == 0.0 && g2r == 0.0 && pr == 0.0) return {rd1, rd2};

    const double rr1 = capacity(g1r * (1.0 - tau1) * p1 / (g2r * (1.0 - tau2) * p2 + b.noise_r));
    const double rr2 = capacity(g2r * (1.0 - tau2) * p2 / (g1r * (1.0 - tau1) * p1 + b.noise_r));
    return {std::min(rr1, rd1), std::min(rr2, rd2)};
}

namespace {

// One user's bi-level EF rate: direct path with the partially-suppressed
// interference plus the Wyner-Ziv relay path. `interf` is the relay
// cooperation signal this destination cannot cancel; nwz = +inf means the
// relay path for this user is absent and only the direct term survives.
double ef_user_rate(double own, double cross, double own_r, double cross_r,
                    double nr, double ni, double nwz, double interf) {
    if (!std::isfinite(nwz))
        return capacity(own / (ni + interf + cross));
    const double t1 = own / (ni + interf + cross * (nr + nwz) / (cross_r + nr + nwz));
    const double t2 =
        own_r / (nr + nwz + cross_r * (interf + ni) / (cross + interf + ni));
    return capacity(t1 + t2);
}

// Compression-noise lower bound, set with equality. `base` is the variance of
// what the destination already observes (own + cross + uncancelled relay
// signal + noise); a is E|Yr|^2 and amod2 = |A_i|^2 the squared relay/receive
// covariance composite. Positive by Cauchy-Schwarz whenever noises are.
double ef_nwz(double base, double a, double amod2, double relay_path) {
    if (relay_path <= 0.0) return kInf;
    return (base * a - amod2) / relay_path;
}

struct EfParts {
    double own1, cross1, own1r, cross1r;  // user-1 composites
    double own2, cross2, own2r, cross2r;  // user-2 composites
    double a, a1m2, a2m2;                 // E|Yr|^2 and |A_i|^2
    double q1, q2;                        // |hr_i|^2 nu_i Pr (quantization powers)
    double i1, i2;                        // uncancelled relay interference terms
};

EfParts ef_parts(const BandChannel& b, double p1, double p2, double nu) {
    EfParts e{};
    const double nu1 = nu, nu2 = 1.0 - nu;
    e.own1 = mag2(b.h11) * p1;
    e.cross1 = mag2(b.h21) * p2;
    e.own1r = mag2(b.h1r) * p1;
    e.cross1r = mag2(b.h2r) * p2;
    e.own2 = mag2(b.h22) * p2;
    e.cross2 = mag2(b.h12) * p1;
    e.own2r = mag2(b.h2r) * p2;
    e.cross2r = mag2(b.h1r) * p1;
    e.a = mag2(b.h1r) * p1 + mag2(b.h2r) * p2 + b.noise_r;
    e.a1m2 = mag2(b.h11 * std::conj(b.h1r) * p1 + b.h21 * std::conj(b.h2r) * p2);
    e.a2m2 = mag2(b.h12 * std::conj(b.h1r) * p1 + b.h22 * std::conj(b.h2r) * p2);
    e.q1 = mag2(b.hr1) * nu1 * b.relay_power;
    e.q2 = mag2(b.hr2) * nu2 * b.relay_power;
    e.i1 = mag2(b.hr1) * nu2 * b.relay_power;  // signal meant for user 2, seen at D1
    e.i2 = mag2(b.hr2) * nu1 * b.relay_power;  // signal meant for user 1, seen at D2
    return e;
}

RatePair ef_rates_for_case(const BandChannel& b, const EfParts& e, int case_id,
                           double* nwz1_out, double* nwz2_out) {
    // cancelled interference vanishes from both the rate and the compression
    // noise conditioning
    const double i1 = (case_id == 1) ? 0.0 : e.i1;
    const double i2 = (case_id == 2) ? 0.0 : e.i2;
    const double w1 = ef_nwz(e.own1 + e.cross1 + i1 + b.noise_d1, e.a, e.a1m2, e.q1);
    const double w2 = ef_nwz(e.own2 + e.cross2 + i2 + b.noise_d2, e.a, e.a2m2, e.q2);
    RatePair r;
    r.r1 = ef_user_rate(e.own1, e.cross1, e.own1r, e.cross1r, b.noise_r, b.noise_d1,
                        w1, i1);
    r.r2 = ef_user_rate(e.own2, e.cross2, e.own2r, e.cross2r, b.noise_r, b.noise_d2,
                        w2, i2);
    if (nwz1_out) *nwz1_out = w1;
    if (nwz2_out) *nwz2_out = w2;
    return r;
}

}  // namespace

EfCaseResult rate_ef(const BandChannel& b, double p1, double p2, double nu) {
    const EfParts e = ef_parts(b, p1, p2, nu);

    // Which destination decodes the relay signal meant for the other one:
    // D1 can take user 2's signal iff it sees it at least as well as D2 does
    // (both rated against everything else as noise), and symmetrically.
    const double d1_sees_u2 = e.i1 / (e.own1 + e.cross1 + e.q1 + b.noise_d1);
    const double d2_sees_u2 = e.q2 / (e.own2 + e.cross2 + e.i2 + b.noise_d2);
    const double d2_sees_u1 = e.i2 / (e.own2 + e.cross2 + e.q2 + b.noise_d2);
    const double d1_sees_u1 = e.q1 / (e.own1 + e.cross1 + e.i1 + b.noise_d1);

    EfCaseResult out;
    if (d1_sees_u2 >= d2_sees_u2)
        out.case_id = 1;
    else if (d2_sees_u1 >= d1_sees_u1)
        out.case_id = 2;
    else
        out.case_id = 3;
    out.rates = ef_rates_for_case(b, e, out.case_id, &out.nwz1, &out.nwz2);
    return out;
}

RatePair rate_ef_no_cancel(const BandChannel& b, double p1, double p2, double nu) {
    const EfParts e = ef_parts(b, p1, p2, nu);
    return ef_rates_for_case(b, e, 3, nullptr, nullptr);
}

RatePair rate_af(const BandChannel& b, double p1, double p2, double gain) {
    auto user = [&](const ComplexGain& hir, const ComplexGain& hii,
                    const ComplexGain& hjr, const ComplexGain& hji,
                    const ComplexGain& hri, double pi, double pj, double ni) {
        const double num = mag2(gain * hir * hri + hii) * pi;
        const double den = mag2(gain * hjr * hri + hji) * pj +
                           gain * gain * mag2(hri) * b.noise_r + ni;
        return capacity(num / den);
    };
    return {user(b.h1r, b.h11, b.h2r, b.h21, b.hr1, p1, p2, b.noise_d1),
            user(b.h2r, b.h22, b.h1r, b.h12, b.hr2, p2, p1, b.noise_d2)};
}

double saturating_gain(const BandChannel& b, double p1, double p2) {
    return std::sqrt(b.relay_power /
                     (mag2(b.h1r) * p1 + mag2(b.h2r) * p2 + b.noise_r));
}

RatePair rate_ts(double p1, double p2, const TsParams& ts, const RateFn& inner) {
    RatePair out{0.0, 0.0};
    const double a1 = ts.alpha1, a2 = ts.alpha2;
    // overlap window needs both users on the air
    const bool overlap = a1 > 0.0 && a2 > 0.0 && ts.beta1 > 0.0 && ts.beta2 > 0.0;
    RatePair both{0.0, 0.0};
    if (overlap) both = inner(p1 / a1, p2 / a2);
    if (a1 > 0.0) {
        const double b2 = (a2 > 0.0) ? ts.beta2 : 0.0;
        out.r1 = a1 * (1.0 - b2) * inner(p1 / a1, 0.0).r1 +
                 (overlap ? a1 * b2 * both.r1 : 0.0);
    }
    if (a2 > 0.0) {
        const double b1 = (a1 > 0.0) ? ts.beta1 : 0.0;
        out.r2 = a2 * (1.0 - b1) * inner(0.0, p2 / a2).r2 +
                 (overlap ? a2 * b1 * both.r2 : 0.0);
    }
    return out;
}

std::vector<std::string> validate(const TsParams& ts) {
    std::vector<std::string> out;
    auto unit = [&](double v, const char* n) {
        if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v))
            out.push_back(std::string("ts ") + n + " must lie in [0,1]");
    };
    unit(ts.alpha1, "alpha1");
    unit(ts.alpha2, "alpha2");
    unit(ts.beta1, "beta1");
    unit(ts.beta2, "beta2");
    if (!out.empty()) return out;
    if (std::fabs(ts.beta1 * ts.alpha2 - ts.beta2 * ts.alpha1) > 1e-12)
        out.push_back("ts schedule must satisfy beta1*alpha2 == beta2*alpha1");
    const double o = ts.beta1 * ts.alpha2;  // shared on-air time
    const double lo = std::max(0.0, ts.alpha1 + ts.alpha2 - 1.0);
    const double hi = std::min(ts.alpha1, ts.alpha2);
    if (o < lo - 1e-12 || o > hi + 1e-12)
        out.push_back("ts overlap is not schedulable within a unit frame");
    return out;
}

}  // namespace irc
