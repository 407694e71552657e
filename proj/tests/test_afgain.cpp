#include "doctest.h"

#include <cmath>

#include "irc/afgain.hpp"
#include "oracles.hpp"

using namespace irc;

namespace {

GainParams real_params(double m, double n, double p, double q, double s) {
    GainParams gp;
    gp.m = {m, 0.0};
    gp.n = {n, 0.0};
    gp.p = {p, 0.0};
    gp.q = {q, 0.0};
    gp.s = s;
    return gp;
}

GainParams random_params(Rng& rng, bool complex_gains) {
    GainParams gp;
    auto g = [&]() -> ComplexGain {
        if (complex_gains) return {rng.normal(), rng.normal()};
        double v = rng.normal();
        if (v == 0.0) v = 0.3;
        return {v, 0.0};
    };
    gp.m = g();
    gp.n = g();
    gp.p = g();
    gp.q = g();
    gp.s = rng.uniform(0.0, 4.0);
    return gp;
}

double quad_residual(const GainParams& gp, double a) {
    // coefficients recomputed independently of the implementation
    const double m2 = std::norm(gp.m), n2v = std::norm(gp.n), p2 = std::norm(gp.p),
                 q2 = std::norm(gp.q);
    const double mn = (gp.m * std::conj(gp.n)).real();
    const double pq = (gp.p * std::conj(gp.q)).real();
    const double A = m2 * pq - (p2 + gp.s) * mn;
    const double B = m2 * (q2 + 1.0) - n2v * (p2 + gp.s);
    const double C = (q2 + 1.0) * mn - n2v * pq;
    return A * a * a + B * a + C;
}

}  // namespace

TEST_CASE("critical points of the worked quadratic") {
    // 10 a^2 - 99 a - 10 = 0 -> {-0.1, 10}
    const GainParams gp = real_params(-1.0, 10.0, 0.0, 0.0, 1.0);
    const auto roots = critical_points(gp);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(roots[1] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("with no interference one root is -n/m") {
    Rng rng(71);
    for (int i = 0; i < 50; ++i) {
        double m = rng.normal(), n = rng.normal();
        if (std::fabs(m) < 0.05) m = 0.5;
        const GainParams gp = real_params(m, n, 0.0, 0.0, rng.uniform(0.0, 3.0));
        const auto roots = critical_points(gp);
        bool found = false;
        for (double r : roots) found |= std::fabs(r - (-n / m)) <= 1e-9 * (1.0 + std::fabs(n / m));
        CHECK(found);
    }
}

TEST_CASE("degenerate quadratic falls back to the linear root") {
    // n = 0 kills both the quadratic and constant coefficients; root 0 remains
    const GainParams gp = real_params(1.3, 0.0, 0.7, 0.0, 0.5);
    const auto roots = critical_points(gp);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(0.0));
}

TEST_CASE("roots satisfy the quadratic and are stationary points of the rate") {
    Rng rng(73);
    int stationary_checked = 0;
    for (int i = 0; i < 400; ++i) {
        const GainParams gp = random_params(rng, i % 2 == 0);
        for (double r : critical_points(gp)) {
            CHECK(std::fabs(quad_residual(gp, r)) <= 1e-10 * (1.0 + r * r));
            if (r > 1e-3 && r < 1e3) {
                const double h = 1e-6 * (1.0 + std::fabs(r));
                const double deriv =
                    (af_rate(gp, r + h) - af_rate(gp, r - h)) / (2.0 * h);
                CHECK(std::fabs(deriv) <= 1e-6);
                ++stationary_checked;
            }
        }
    }
    CHECK(stationary_checked > 50);
}

TEST_CASE("real-gain closed forms for both critical points") {
    Rng rng(79);
    for (int i = 0; i < 300; ++i) {
        const GainParams gp = random_params(rng, false);
        const double m = gp.m.real(), n = gp.n.real(), p = gp.p.real(), q = gp.q.real();
        const double s = gp.s;
        const double den2 = m * q * p - p * p * n - n * s;
        if (std::fabs(m) < 1e-6 || std::fabs(den2) < 1e-6) continue;
        const auto roots = critical_points(gp);
        if (roots.size() != 2) continue;
        double c1 = -n / m;
        double c2 = -(m * q * q + m - p * q * n) / den2;
        if (c1 > c2) std::swap(c1, c2);
        CHECK(roots[0] == doctest::Approx(c1).epsilon(1e-9));
        CHECK(roots[1] == doctest::Approx(c2).epsilon(1e-9));
    }
}

TEST_CASE("optimal gain picks the right candidate") {
    // decreasing on [0, 2]: interior root 10 is beyond a_max
    const GainParams dec = real_params(-1.0, 10.0, 0.0, 0.0, 1.0);
    const GainSolution s1 = optimal_gain(dec, 2.0);
    CHECK(s1.optimum == doctest::Approx(0.0));

    // relay-only link: the rate is strictly increasing
    const GainParams inc = real_params(2.0, 0.0, 0.0, 0.0, 1.0);
    const GainSolution s2 = optimal_gain(inc, 5.0);
    CHECK(s2.optimum == doctest::Approx(5.0));

    for (const auto& sol : {s1, s2}) {
        bool member = false;
        double best = -1.0;
        for (auto [a, r] : sol.candidates) {
            member |= a == sol.optimum;
            best = std::max(best, r);
        }
        CHECK(member);
        CHECK(af_rate(dec, s1.optimum) >= 0.0);
        CHECK(best >= 0.0);
    }
}

TEST_CASE("the stationary-point discriminant is never negative") {
    // the SINR has the same limit at +-infinity, so a real stationary point
    // always exists; the no-real-roots branch of the candidate analysis can
    // only be hit by a degenerate (constant) rate
    Rng rng(83);
    for (int i = 0; i < 2000; ++i) {
        const GainParams gp = random_params(rng, i % 2 == 0);
        const GainSolution sol = optimal_gain(gp, 2.5);
        CHECK(sol.discriminant >= -1e-12);
    }
}

TEST_CASE("without interior stationary points the optimum is an endpoint") {
    Rng rng(84);
    int monotone_up = 0, monotone_down = 0;
    for (int i = 0; i < 2000 && (monotone_up < 25 || monotone_down < 25); ++i) {
        const GainParams gp = random_params(rng, true);
        const double a_max = rng.uniform(0.1, 3.0);
        bool interior = false;
        for (double r : critical_points(gp)) interior |= r > 0.0 && r < a_max;
        if (interior) continue;
        const GainSolution sol = optimal_gain(gp, a_max);
        const double r0 = af_rate(gp, 0.0), r1 = af_rate(gp, a_max);
        if (r1 > r0) {
            CHECK(sol.optimum == doctest::Approx(a_max));
            ++monotone_up;
        } else if (r0 > r1) {
            CHECK(sol.optimum == doctest::Approx(0.0));
            ++monotone_down;
        }
    }
    CHECK(monotone_up >= 25);
    CHECK(monotone_down >= 25);
}

TEST_CASE("candidate set beats a dense grid") {
    Rng rng(89);
    for (int i = 0; i < 300; ++i) {
        const GainParams gp = random_params(rng, i % 2 == 0);
        const double a_max = rng.uniform(0.1, 10.0);
        const GainSolution sol = optimal_gain(gp, a_max);
        const auto [ga, gr] = oracle::gain_grid_argmax(gp, a_max, 10000);
        CHECK(af_rate(gp, sol.optimum) >= gr - 1e-9);
    }
}

TEST_CASE("rate approaches its horizontal asymptote") {
    // the deviation decays like 1/a with an O(|params|) constant
    Rng rng(97);
    for (int i = 0; i < 100; ++i) {
        const GainParams gp = random_params(rng, true);
        const double asym = capacity(std::norm(gp.m) / (std::norm(gp.p) + gp.s));
        CHECK(std::fabs(af_rate(gp, 1e6) - asym) <= 1e-4);
        CHECK(std::fabs(af_rate(gp, 1e9) - asym) <= 1e-6);
    }
}

TEST_CASE("consistency with the band rate formula") {
    Rng rng(101);
    for (int i = 0; i < 100; ++i) {
        BandChannel b;
        auto g = [&]() -> ComplexGain { return {rng.normal(), rng.normal()}; };
        b.h11 = g();
        b.h12 = g();
        b.h21 = g();
        b.h22 = g();
        b.h1r = g();
        b.h2r = g();
        b.hr1 = g();
        b.hr2 = g();
        b.noise_d1 = rng.uniform(0.5, 2.0);
        b.noise_d2 = rng.uniform(0.5, 2.0);
        b.noise_r = rng.uniform(0.5, 2.0);
        const double p1 = rng.uniform(0.1, 10.0), p2 = rng.uniform(0.1, 10.0);
        const double a = rng.uniform(0.0, 3.0);
        const RatePair r = rate_af(b, p1, p2, a);
        CHECK(af_rate(GainParams::for_user(b, p1, p2, 1), a) ==
              doctest::Approx(r.r1).epsilon(1e-13));
        CHECK(af_rate(GainParams::for_user(b, p1, p2, 2), a) ==
              doctest::Approx(r.r2).epsilon(1e-13));
    }
}

TEST_CASE("sum-rate gain search") {
    Rng rng(103);
    // swap-symmetric channel: the shared individual optimum maximizes the sum
    BandChannel b;
    b.h11 = b.h22 = {1.0, 0.0};
    b.h12 = b.h21 = {0.4, 0.0};
    b.h1r = b.h2r = {0.8, 0.0};
    b.hr1 = b.hr2 = {0.9, 0.0};
    b.relay_power = 5.0;
    const double amax = saturating_gain(b, 4.0, 4.0);
    const double a_sum = sum_rate_gain(b, 4.0, 4.0, amax, 2001);
    const GainSolution ind = optimal_gain(GainParams::for_user(b, 4.0, 4.0, 1), amax);
    CHECK(a_sum == doctest::Approx(ind.optimum).epsilon(1e-4));

    // random bands against a brute-force grid
    for (int i = 0; i < 25; ++i) {
        BandChannel rb;
        auto g = [&]() -> ComplexGain { return {rng.normal(), 0.0}; };
        rb.h11 = g();
        rb.h12 = g();
        rb.h21 = g();
        rb.h22 = g();
        rb.h1r = g();
        rb.h2r = g();
        rb.hr1 = g();
        rb.hr2 = g();
        rb.relay_power = rng.uniform(0.5, 10.0);
        const double p1 = rng.uniform(0.1, 10.0), p2 = rng.uniform(0.1, 10.0);
        const double am = saturating_gain(rb, p1, p2);
        const double got = sum_rate_gain(rb, p1, p2, am, 4001);
        const GainParams q1 = GainParams::for_user(rb, p1, p2, 1);
        const GainParams q2 = GainParams::for_user(rb, p1, p2, 2);
        double best_a = 0.0, best_v = -1.0;
        for (int k = 0; k < 1000000; ++k) {
            const double a = am * k / 999999.0;
            const double v = af_rate(q1, a) + af_rate(q2, a);
            if (v > best_v) {
                best_v = v;
                best_a = a;
            }
        }
        CHECK(std::fabs(got - best_a) <= 1e-4 * std::max(1.0, am));
    }
}
