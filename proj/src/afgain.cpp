#include "irc/afgain.hpp"

#include <algorithm>
#include <cmath>

namespace irc {

GainParams GainParams::for_user(const BandChannel& b, double p1, double p2,
                                int user) {
    GainParams gp;
    const bool u1 = (user == 1);
    const ComplexGain hii = u1 ? b.h11 : b.h22;
    const ComplexGain hji = u1 ? b.h21 : b.h12;
    const ComplexGain hir = u1 ? b.h1r : b.h2r;
    const ComplexGain hjr = u1 ? b.h2r : b.h1r;
    const ComplexGain hri = u1 ? b.hr1 : b.hr2;
    const double ni = u1 ? b.noise_d1 : b.noise_d2;
    const double pi = u1 ? p1 : p2;
    const double pj = u1 ? p2 : p1;
    // everything normalized by the user's own noise so af_rate == rate_af
    const double ri = std::sqrt(pi / ni);
    const double rj = std::sqrt(pj / ni);
    gp.m = hir * hri * ri;
    gp.n = hii * ri;
    gp.p = hjr * hri * rj;
    gp.q = hji * rj;
    gp.s = mag2(hri) * b.noise_r / ni;
    return gp;
}

double af_rate(const GainParams& gp, double a) {
    const double num = mag2(gp.m * a + gp.n);
    const double den = mag2(gp.p * a + gp.q) + gp.s * a * a + 1.0;
    return capacity(num / den);
}

namespace {

double re_prod(const ComplexGain& a, const ComplexGain& b) {
    return a.real() * b.real() + a.imag() * b.imag();  // Re(a * conj(b))
}

struct Quad {
    double a, b, c;
};

Quad rate_derivative_numerator(const GainParams& gp) {
    const double m2 = mag2(gp.m), n2 = mag2(gp.n), p2 = mag2(gp.p), q2 = mag2(gp.q);
    const double mn = re_prod(gp.m, gp.n);
    const double pq = re_prod(gp.p, gp.q);
    return {m2 * pq - (p2 + gp.s) * mn,
            m2 * (q2 + 1.0) - n2 * (p2 + gp.s),
            (q2 + 1.0) * mn - n2 * pq};
}

}  // namespace

std::vector<double> critical_points(const GainParams& gp) {
    const Quad k = rate_derivative_numerator(gp);
    const double scale = std::max({std::fabs(k.a), std::fabs(k.b), std::fabs(k.c)});
    if (scale == 0.0) return {};
    if (std::fabs(k.a) < 1e-14 * scale) {
        if (std::fabs(k.b) < 1e-14 * scale) return {};
        return {-k.c / k.b};
    }
    const double disc = k.b * k.b - 4.0 * k.a * k.c;
    if (disc < 0.0) return {};
    const double sd = std::sqrt(disc);
    // numerically stable form; avoids cancellation between -b and the radical
    const double qn = -0.5 * (k.b + std::copysign(sd, k.b));
    double r1, r2;
    if (qn != 0.0) {
        r1 = qn / k.a;
        r2 = k.c / qn;
    } else {
        r1 = 0.0;
        r2 = -k.b / k.a;
    }
    if (r1 > r2) std::swap(r1, r2);
    if (r1 == r2) return {r1};
    return {r1, r2};
}

GainSolution optimal_gain(const GainParams& gp, double a_max) {
    GainSolution out;
    const Quad k = rate_derivative_numerator(gp);
    out.discriminant = k.b * k.b - 4.0 * k.a * k.c;

    std::vector<double> cand{0.0, a_max};
    for (double r : critical_points(gp))
        if (r > 0.0 && r < a_max) cand.push_back(r);
    std::sort(cand.begin(), cand.end());

    out.optimum = cand.front();
    double best = -1.0;
    for (double a : cand) {
        const double r = af_rate(gp, a);
        out.candidates.emplace_back(a, r);
        if (r > best) {  // ties keep the smallest gain
            best = r;
            out.optimum = a;
        }
    }
    return out;
}

namespace {

// Golden-section maximization of f on [lo, hi] down to window width tol.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double sum_rate_gain(const BandChannel& b, double p1, double p2, double a_max,
                     int grid_n) {
    const GainParams g1 = GainParams::for_user(b, p1, p2, 1);
    const GainParams g2 = GainParams::for_user(b, p1, p2, 2);
    auto f = [&](double a) { return af_rate(g1, a) + af_rate(g2, a); };

    int best = 0;
    double best_val = f(0.0);
    const double step = a_max / (grid_n - 1);
    for (int i = 1; i < grid_n; ++i) {
        const double v = f(i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = std::max(0.0, (best - 1) * step);
    const double hi = std::min(a_max, (best + 1) * step);
    const double refined = golden_max(f, lo, hi, 1e-10 * std::max(1.0, a_max));
    // grid winner stands if refinement did not actually help
    return f(refined) >= best_val ? refined : best * step;
}

}  // namespace irc
