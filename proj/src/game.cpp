#include "irc/game.hpp"

#include <algorithm>
#include <cmath>

namespace irc {

bool PowerAllocation::valid(double slack) const {
    auto ok = [&](const std::vector<double>& t) {
        double sum = 0.0;
        for (double v : t) {
            if (!(v >= 0.0 && v <= 1.0 + slack) || !std::isfinite(v)) return false;
            sum += v;
        }
        return sum <= 1.0 + slack;
    };
    return !theta1.empty() && theta1.size() == theta2.size() && ok(theta1) && ok(theta2);
}

double max_norm_distance(const PowerAllocation& a, const PowerAllocation& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.theta1.size(); ++i)
        m = std::max(m, std::fabs(a.theta1[i] - b.theta1[i]));
    for (std::size_t i = 0; i < a.theta2.size(); ++i)
        m = std::max(m, std::fabs(a.theta2[i] - b.theta2[i]));
    return m;
}

double band_rate_user(const Scenario& s, int q, int user, double x, double y) {
    const BandChannel& b = s.bands[static_cast<std::size_t>(q)];
    const double p_own = x * s.power(user);
    const double p_opp = y * s.power(user == 1 ? 2 : 1);
    const double p1 = user == 1 ? p_own : p_opp;
    const double p2 = user == 1 ? p_opp : p_own;

    auto inner = [&](double a1, double a2) -> RatePair {
        switch (s.protocol) {
            case Protocol::DF: {
                const DfParams& d = s.df[static_cast<std::size_t>(q)];
                return rate_df(b, a1, a2, d.tau1, d.tau2, d.nu);
            }
            case Protocol::EF: {
                const double nu = s.ef_nu[static_cast<std::size_t>(q)];
                if (s.ef_case_select) return rate_ef(b, a1, a2, nu).rates;
                return rate_ef_no_cancel(b, a1, a2, nu);
            }
            case Protocol::AF:
            case Protocol::AF_FIXED: {
                const AfGainMode& m = s.af[static_cast<std::size_t>(q)];
                double gain = m.fixed_gain;
                if (m.saturating)
                    gain = s.gain_denominator_full ? saturating_gain(b, s.p1, s.p2)
                                                   : saturating_gain(b, a1, a2);
                return rate_af(b, a1, a2, gain);
            }
        }
        return {};
    };

    if (s.time_sharing)
        return rate_ts(p1, p2, s.ts[static_cast<std::size_t>(q)], inner).get(user);
    return inner(p1, p2).get(user);
}

double utility(const Scenario& s, const std::vector<double>& own,
               const std::vector<double>& opp, int user) {
    double u = 0.0;
    for (int q = 0; q < s.num_bands(); ++q)
        u += band_rate_user(s, q, user, own[static_cast<std::size_t>(q)],
                            opp[static_cast<std::size_t>(q)]);
    return u;
}

double utility(const Scenario& s, const PowerAllocation& theta, int user) {
    return utility(s, theta.theta(user), theta.theta(user == 1 ? 2 : 1), user);
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

struct Peak {
    double x = 0.0;
    double value = 0.0;
};

template <typename F>
Peak golden_refine(F&& f, double lo, double hi, double tol) {
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
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

// Coarse scan for local maxima, golden refinement of the best brackets.
// Returns refined peaks plus both endpoints, best first.
template <typename F>
std::vector<Peak> line_maxima(F&& f, double lo, double hi, int grid, double tol,
                              int keep) {
    std::vector<Peak> peaks;
    if (!(hi > lo)) {
        peaks.push_back({lo, f(lo)});
        return peaks;
    }
    grid = std::max(grid, 3);
    std::vector<double> val(static_cast<std::size_t>(grid));
    const double step = (hi - lo) / (grid - 1);
    for (int i = 0; i < grid; ++i)
        val[static_cast<std::size_t>(i)] = f(lo + i * step);

    std::vector<int> locals;
    for (int i = 0; i < grid; ++i) {
        const double left = i > 0 ? val[static_cast<std::size_t>(i - 1)] : -HUGE_VAL;
        const double right =
            i + 1 < grid ? val[static_cast<std::size_t>(i + 1)] : -HUGE_VAL;
        if (val[static_cast<std::size_t>(i)] >= left &&
            val[static_cast<std::size_t>(i)] >= right)
            locals.push_back(i);
    }
    std::stable_sort(locals.begin(), locals.end(), [&](int a, int b) {
        return val[static_cast<std::size_t>(a)] > val[static_cast<std::size_t>(b)];
    });
    if (static_cast<int>(locals.size()) > keep) locals.resize(static_cast<std::size_t>(keep));

    for (int i : locals) {
        const double a = std::max(lo, lo + (i - 1) * step);
        const double b = std::min(hi, lo + (i + 1) * step);
        peaks.push_back(golden_refine(f, a, b, tol));
    }
    peaks.push_back({lo, val.front()});
    peaks.push_back({hi, val.back()});
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.value > b.value; });
    return peaks;
}

// exact simplex projection of the raw optimizer output
void project_simplex(std::vector<double>& x) {
    double sum = 0.0;
    for (double& v : x) {
        v = std::clamp(v, 0.0, 1.0);
        sum += v;
    }
    if (sum > 1.0)
        for (double& v : x) v /= sum;
}

std::vector<double> best_response_q1(const Scenario& s,
                                     const std::vector<double>& opp, int user,
                                     const BrOptions& o) {
    auto f = [&](double x) { return band_rate_user(s, 0, user, x, opp[0]); };
    auto peaks = line_maxima(f, 0.0, 1.0, o.coarse_grid, o.refine_tol, o.multi_start);
    std::vector<double> out{peaks.front().x};
    project_simplex(out);
    return out;
}

std::vector<double> best_response_q2(const Scenario& s,
                                     const std::vector<double>& opp, int user,
                                     const BrOptions& o) {
    auto f1 = [&](double x) { return band_rate_user(s, 0, user, x, opp[0]); };
    auto f2 = [&](double x) { return band_rate_user(s, 1, user, x, opp[1]); };

    const auto peaks1 = line_maxima(f1, 0.0, 1.0, o.coarse_grid, o.refine_tol, o.multi_start);
    const auto peaks2 = line_maxima(f2, 0.0, 1.0, o.coarse_grid, o.refine_tol, o.multi_start);

    double best = -HUGE_VAL;
    double bx = 0.0, by = 0.0;
    // separable candidates: any feasible pair of per-band local maxima
    for (const Peak& a : peaks1)
        for (const Peak& b : peaks2) {
            if (a.x + b.x > 1.0) continue;
            const double v = a.value + b.value;
            if (v > best) {
                best = v;
                bx = a.x;
                by = b.x;
            }
        }
    // the full-power face theta + theta' = 1, where the budget binds
    auto g = [&](double t) { return f1(t) + f2(1.0 - t); };
    const auto face = line_maxima(g, 0.0, 1.0, o.coarse_grid, o.refine_tol, o.multi_start);
    if (face.front().value > best) {
        bx = face.front().x;
        by = 1.0 - face.front().x;
    }
    std::vector<double> out{bx, by};
    project_simplex(out);
    return out;
}

std::vector<double> best_response_qn(const Scenario& s,
                                     const std::vector<double>& opp, int user,
                                     const BrOptions& o) {
    const int q = s.num_bands();
    auto f = [&](int k, double x) { return band_rate_user(s, k, user, x, opp[static_cast<std::size_t>(k)]); };
    auto total = [&](const std::vector<double>& x) {
        double u = 0.0;
        for (int k = 0; k < q; ++k) u += f(k, x[static_cast<std::size_t>(k)]);
        return u;
    };

    // projected coordinate ascent with pairwise budget transfers
    auto ascend = [&](std::vector<double> x) {
        const int small_grid = 33;
        for (int sweep = 0; sweep < 80; ++sweep) {
            double moved = 0.0;
            double sum = 0.0;
            for (double v : x) sum += v;
            for (int k = 0; k < q; ++k) {
                double& xk = x[static_cast<std::size_t>(k)];
                const double budget = std::min(1.0, xk + (1.0 - sum));
                auto fk = [&](double v) { return f(k, v); };
                const Peak p = line_maxima(fk, 0.0, budget, small_grid, o.refine_tol, 3).front();
                if (p.value > fk(xk)) {
                    moved = std::max(moved, std::fabs(p.x - xk));
                    sum += p.x - xk;
                    xk = p.x;
                }
            }
            for (int a = 0; a < q; ++a)
                for (int b = a + 1; b < q; ++b) {
                    double& xa = x[static_cast<std::size_t>(a)];
                    double& xb = x[static_cast<std::size_t>(b)];
                    const double lo = std::max(-xa, xb - 1.0);
                    const double hi = std::min(xb, 1.0 - xa);
                    if (hi - lo < o.refine_tol) continue;
                    auto h = [&](double t) { return f(a, xa + t) + f(b, xb - t); };
                    const Peak p = line_maxima(h, lo, hi, small_grid, o.refine_tol, 3).front();
                    if (p.value > h(0.0)) {
                        moved = std::max(moved, std::fabs(p.x));
                        xa += p.x;
                        xb -= p.x;
                    }
                }
            if (moved < o.refine_tol) break;
        }
        project_simplex(x);
        return x;
    };

    std::vector<std::vector<double>> starts;
    starts.push_back(std::vector<double>(static_cast<std::size_t>(q), 1.0 / q));
    starts.push_back(std::vector<double>(static_cast<std::size_t>(q), 0.0));
    for (int k = 0; k < std::min(q, 6); ++k) {
        std::vector<double> e(static_cast<std::size_t>(q), 0.0);
        e[static_cast<std::size_t>(k)] = 1.0;
        starts.push_back(std::move(e));
    }

    std::vector<double> best;
    double best_val = -HUGE_VAL;
    for (const auto& s0 : starts) {
        std::vector<double> x = ascend(s0);
        const double v = total(x);
        if (v > best_val) {
            best_val = v;
            best = x;
        }
    }
    return best;
}

}  // namespace

std::vector<double> best_response(const Scenario& s,
                                  const std::vector<double>& opponent_theta,
                                  int user, const BrOptions& opts) {
    const int q = s.num_bands();
    const BrMethod method =
        opts.method.value_or(q <= 2 ? BrMethod::GridGolden : BrMethod::CoordinateAscent);
    if (method == BrMethod::CoordinateAscent && q >= 2)
        return best_response_qn(s, opponent_theta, user, opts);
    switch (q) {
        case 1: return best_response_q1(s, opponent_theta, user, opts);
        case 2: return best_response_q2(s, opponent_theta, user, opts);
        default: return best_response_qn(s, opponent_theta, user, opts);
    }
}

CournotTrace cournot(const Scenario& s, const PowerAllocation& initial,
                     int max_iter, double tol, const BrOptions& opts,
                     bool simultaneous) {
    CournotTrace trace;
    PowerAllocation state = initial;
    trace.states.push_back(state);
    for (int round = 1; round <= max_iter; ++round) {
        PowerAllocation next = state;
        if (simultaneous) {
            next.theta1 = best_response(s, state.theta2, 1, opts);
            next.theta2 = best_response(s, state.theta1, 2, opts);
        } else {
            next.theta1 = best_response(s, state.theta2, 1, opts);
            next.theta2 = best_response(s, next.theta1, 2, opts);
        }
        const double delta = max_norm_distance(next, state);
        state = next;
        trace.states.push_back(state);
        trace.iterations = round;
        if (delta < tol) {
            trace.converged = true;
            trace.fixed_point = state;
            break;
        }
    }
    return trace;
}

NeCheck verify_ne(const Scenario& s, const PowerAllocation& theta, double tol,
                  const BrOptions& opts) {
    NeCheck out;
    const std::vector<double> br1 = best_response(s, theta.theta2, 1, opts);
    const std::vector<double> br2 = best_response(s, theta.theta1, 2, opts);
    out.improve1 = std::max(0.0, utility(s, br1, theta.theta2, 1) -
                                     utility(s, theta.theta1, theta.theta2, 1));
    out.improve2 = std::max(0.0, utility(s, br2, theta.theta1, 2) -
                                     utility(s, theta.theta2, theta.theta1, 2));
    out.pass = out.improve1 <= tol && out.improve2 <= tol;
    return out;
}

ConcavityResult concavity_certificate(const Scenario& s, int user,
                                      const std::vector<double>& opponent_theta,
                                      int samples, double tol, double h) {
    ConcavityResult out;
    for (int q = 0; q < s.num_bands(); ++q) {
        auto f = [&](double x) {
            return band_rate_user(s, q, user, x, opponent_theta[static_cast<std::size_t>(q)]);
        };
        for (int k = 0; k < samples; ++k) {
            const double x = h + (1.0 - 2.0 * h) * k / (samples - 1);
            const double d2 = f(x - h) - 2.0 * f(x) + f(x + h);
            if (d2 > tol) {
                out.certified = false;
                out.band = q;
                out.theta = x;
                out.second_difference = d2;
                return out;
            }
        }
    }
    return out;
}

DfCondition df_condition(const Scenario& s) {
    for (int q = 0; q < s.num_bands(); ++q) {
        const BandChannel& b = s.bands[static_cast<std::size_t>(q)];
        auto re = [](const ComplexGain& a, const ComplexGain& c) {
            return a.real() * c.real() + a.imag() * c.imag();
        };
        if (re(b.h11, b.hr1) < 0.0) return {false, q, 1};
        if (re(b.h22, b.hr2) < 0.0) return {false, q, 2};
    }
    return {};
}

}  // namespace irc
