#include "irc/af_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irc {

namespace {

constexpr double kCoincide = 1e-12;  // exact-coincidence tolerance

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

BrCoefficients br_coefficients(const Scenario& s, DReading reading) {
    if (s.num_bands() != 2)
        throw std::domain_error("br_coefficients: requires exactly two bands");
    for (int q = 0; q < 2; ++q)
        if (s.af[static_cast<std::size_t>(q)].saturating)
            throw std::domain_error("br_coefficients: requires fixed amplification gains");

    const BandChannel& b1 = s.bands[0];
    const BandChannel& b2 = s.bands[1];
    const double a1g = s.af[0].fixed_gain;
    const double a2g = s.af[1].fixed_gain;

    BrCoefficients c;
    // For each user: per-band signal composite K, interference composite Kt,
    // and effective noise sigma, everything normalized by the user's own
    // noise. The stationary point of C(K1 x r / (Kt1 y r' + s1)) +
    // C(K2 (1-x) r / (Kt2 (1-y) r' + s2)) in x is the affine F_i.
    auto row = [&](int user, double& cii, double& cij, double& di) {
        const bool u1 = (user == 1);
        auto parts = [&](const BandChannel& b, double ag, double& k, double& kt,
                         double& sig, double& ni) {
            const ComplexGain hii = u1 ? b.h11 : b.h22;
            const ComplexGain hji = u1 ? b.h21 : b.h12;
            const ComplexGain hir = u1 ? b.h1r : b.h2r;
            const ComplexGain hjr = u1 ? b.h2r : b.h1r;
            const ComplexGain hri = u1 ? b.hr1 : b.hr2;
            ni = u1 ? b.noise_d1 : b.noise_d2;
            k = mag2(ag * hir * hri + hii);
            kt = mag2(ag * hjr * hri + hji);
            const double relay_noise = reading == DReading::Squared
                                           ? ag * ag * mag2(hri)
                                           : ag * mag2(hri);
            sig = relay_noise * b.noise_r / ni + 1.0;
        };
        double k1, kt1, s1, n1, k2, kt2, s2, n2;
        parts(b1, a1g, k1, kt1, s1, n1);
        parts(b2, a2g, k2, kt2, s2, n2);
        const double pi = u1 ? s.p1 : s.p2;
        const double pj = u1 ? s.p2 : s.p1;
        const double a1 = k1 * pi / n1;  // own-signal slopes per band
        const double a2 = k2 * pi / n2;
        const double i1 = kt1 * pj / n1;  // interference slopes per band
        const double i2 = kt2 * pj / n2;
        cii = 2.0 * a1 * a2;
        cij = a1 * i2 + a2 * i1;
        di = a1 * (i2 + s2 + a2) - a2 * s1;
    };
    row(1, c.c11, c.c12, c.d1);
    row(2, c.c22, c.c21, c.d2);
    if (!(c.c11 > 0.0) || !(c.c22 > 0.0))
        throw std::domain_error(
            "br_coefficients: degenerate channel (zero own-signal composite), best "
            "responses undefined");
    return c;
}

double br_affine(const BrCoefficients& c, int user, double theta_opponent) {
    const double cii = user == 1 ? c.c11 : c.c22;
    const double cij = user == 1 ? c.c12 : c.c21;
    const double di = user == 1 ? c.d1 : c.d2;
    if (!(cii > 0.0)) throw std::domain_error("br_affine: degenerate coefficients");
    const double f = (di - cij * theta_opponent) / cii;
    if (f >= 1.0) return 1.0;
    if (f > 0.0) return f;
    return 0.0;
}

std::pair<double, double> interior_ne(const BrCoefficients& c) {
    const double det = c.c11 * c.c22 - c.c12 * c.c21;
    const double scale = std::max(std::fabs(c.c11 * c.c22), std::fabs(c.c12 * c.c21));
    if (std::fabs(det) <= kCoincide * scale)
        throw std::domain_error("interior_ne: parallel best-response lines");
    return {(c.c22 * c.d1 - c.c12 * c.d2) / det, (c.c11 * c.d2 - c.c21 * c.d1) / det};
}

std::pair<NeStability, double> stability(const BrCoefficients& c, double t1,
                                         double t2) {
    // slope of BR_i in a neighborhood: 0 where clamped, c_ij/c_ii where the
    // affine part is active; an exact clamp boundary reports the larger
    // one-sided slope
    auto slope = [&](double cii, double cij, double di, double opp) {
        const double f = (di - cij * opp) / cii;
        const double interior = cij / cii;
        if (std::fabs(f) <= kCoincide || std::fabs(f - 1.0) <= kCoincide)
            return interior;  // boundary: worse one-sided slope
        if (f < 0.0 || f > 1.0) return 0.0;
        return interior;
    };
    const double s1 = slope(c.c11, c.c12, c.d1, t2);
    const double s2 = slope(c.c22, c.c21, c.d2, t1);
    const double prod = std::fabs(s1 * s2);
    if (std::fabs(prod - 1.0) <= kCoincide) return {NeStability::Neutral, prod};
    return {prod < 1.0 ? NeStability::Stable : NeStability::Unstable, prod};
}

namespace {

NePoint make_point(const BrCoefficients& c, double t1, double t2, NeKind kind) {
    NePoint p;
    p.theta1 = clamp01(t1);
    p.theta2 = clamp01(t2);
    p.kind = kind;
    auto [st, prod] = stability(c, p.theta1, p.theta2);
    p.stability = st;
    p.slope_product = prod;
    return p;
}

NeKind classify(const BrCoefficients& c, double t1, double t2) {
    const double f1 = (c.d1 - c.c12 * t2) / c.c11;
    const double f2 = (c.d2 - c.c21 * t1) / c.c22;
    const bool inner = t1 > kCoincide && t1 < 1.0 - kCoincide && t2 > kCoincide &&
                       t2 < 1.0 - kCoincide && f1 > kCoincide && f1 < 1.0 - kCoincide &&
                       f2 > kCoincide && f2 < 1.0 - kCoincide;
    return inner ? NeKind::Interior : NeKind::Border;
}

NeSet single(const BrCoefficients& c, double t1, double t2) {
    NeSet out;
    out.points.push_back(make_point(c, t1, t2, classify(c, t1, t2)));
    out.cardinality = NeCardinality::One;
    return out;
}

// Fixed points of g = BR1 o BR2 on [0,1]. g is continuous, nondecreasing and
// piecewise affine; breakpoints come from the clamp transitions of both best
// responses. An affine piece of slope 1 lying on the diagonal is the
// superposed-line continuum.
NeSet enumerate_case4d(const BrCoefficients& c) {
    auto br2 = [&](double x) { return br_affine(c, 2, x); };
    auto g = [&](double x) { return br_affine(c, 1, br2(x)); };

    std::vector<double> bp{0.0, 1.0};
    auto push = [&](double x) {
        if (x > 0.0 && x < 1.0) bp.push_back(x);
    };
    if (c.c21 > 0.0) {
        push((c.d2 - c.c22) / c.c21);  // F2 crosses 1
        push(c.d2 / c.c21);            // F2 crosses 0
        if (c.c12 > 0.0) {
            // BR1's clamps in terms of x, via y(x) = F2(x)
            const double y_hi = (c.d1 - c.c11) / c.c12;  // F1 crosses 1
            const double y_lo = c.d1 / c.c12;            // F1 crosses 0
            push((c.d2 - c.c22 * y_hi) / c.c21);
            push((c.d2 - c.c22 * y_lo) / c.c21);
        }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double a, double b) { return std::fabs(a - b) <= 1e-15; }),
             bp.end());

    std::vector<double> fixed;
    std::optional<std::pair<double, double>> segment_x;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double a = bp[i], b = bp[i + 1];
        if (b - a <= 1e-15) continue;
        const double ga = g(a), gb = g(b);
        const double slope = (gb - ga) / (b - a);
        if (std::fabs(slope - 1.0) <= kCoincide) {
            if (std::fabs(ga - a) <= 1e-9) segment_x = {a, b};  // continuum piece
            continue;
        }
        const double x = a + (ga - a) / (1.0 - slope);
        if (x >= a - kCoincide && x <= b + kCoincide) fixed.push_back(std::clamp(x, a, b));
    }
    std::sort(fixed.begin(), fixed.end());
    fixed.erase(std::unique(fixed.begin(), fixed.end(),
                            [](double a, double b) {
                                return std::fabs(a - b) <= kCoincide * (1.0 + std::fabs(a));
                            }),
                fixed.end());

    NeSet out;
    if (segment_x) {
        auto endpoint = [&](double x) {
            return make_point(c, x, br2(x), NeKind::SegmentMember);
        };
        NePoint lo = endpoint(segment_x->first);
        NePoint hi = endpoint(segment_x->second);
        out.points = {lo, hi};
        out.segment = {lo, hi};
        out.cardinality = NeCardinality::Infinite;
        return out;
    }
    for (double x : fixed)
        out.points.push_back(make_point(c, x, br2(x), classify(c, x, br2(x))));
    switch (out.points.size()) {
        case 1: out.cardinality = NeCardinality::One; break;
        case 2: out.cardinality = NeCardinality::Two; break;
        default: out.cardinality = NeCardinality::Three; break;
    }
    return out;
}

}  // namespace

NeSet enumerate_ne(const BrCoefficients& c) {
    if (!(c.c11 > 0.0) || !(c.c22 > 0.0))
        throw std::domain_error("enumerate_ne: degenerate coefficients");

    // sign cases: a user with d_i <= 0 never transmits on band 1
    if (c.d1 <= 0.0 && c.d2 <= 0.0) return single(c, 0.0, 0.0);
    if (c.d1 <= 0.0) return single(c, 0.0, clamp01(c.d2 / c.c22));
    if (c.d2 <= 0.0) return single(c, clamp01(c.d1 / c.c11), 0.0);

    // saturation cases: a best response pinned at full band-1 power
    const double f1_at_1 = (c.d1 - c.c12) / c.c11;
    const double f2_at_1 = (c.d2 - c.c21) / c.c22;
    if (f1_at_1 >= 1.0 && f2_at_1 >= 1.0) return single(c, 1.0, 1.0);
    if (f1_at_1 >= 1.0) return single(c, 1.0, clamp01(f2_at_1));
    if (f2_at_1 >= 1.0) return single(c, clamp01(f1_at_1), 1.0);

    return enumerate_case4d(c);
}

std::pair<double, double> affine_cournot_step(const BrCoefficients& c,
                                              [[maybe_unused]] double t1, double t2) {
    // user 1 responds to the opponent's current fraction, user 2 to the fresh
    // one; the previous t1 is displaced without being read
    const double n1 = br_affine(c, 1, t2);
    const double n2 = br_affine(c, 2, n1);
    return {n1, n2};
}

std::vector<BasinCell> basin_map(const BrCoefficients& c, const NeSet& ne,
                                 int resolution) {
    std::vector<BasinCell> cells;
    cells.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int j = 0; j < resolution; ++j) {
        for (int i = 0; i < resolution; ++i) {
            BasinCell cell;
            cell.theta1 = (i + 0.5) / resolution;
            cell.theta2 = (j + 0.5) / resolution;
            double x = cell.theta1, y = cell.theta2;
            bool converged = false;
            int it = 0;
            for (; it < 1000; ++it) {
                auto [nx, ny] = affine_cournot_step(c, x, y);
                if (std::fabs(nx - x) < 1e-12 && std::fabs(ny - y) < 1e-12) {
                    x = nx;
                    y = ny;
                    converged = true;
                    break;
                }
                x = nx;
                y = ny;
            }
            cell.iterations = it;
            cell.ne_index = -1;
            if (converged) {
                for (std::size_t k = 0; k < ne.points.size(); ++k) {
                    if (std::fabs(ne.points[k].theta1 - x) < 1e-6 &&
                        std::fabs(ne.points[k].theta2 - y) < 1e-6) {
                        cell.ne_index = static_cast<int>(k);
                        break;
                    }
                }
                if (cell.ne_index < 0 && ne.segment) cell.ne_index = -2;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

}  // namespace irc
