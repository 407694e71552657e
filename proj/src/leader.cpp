#include "irc/leader.hpp"

#include <cmath>
#include <stdexcept>

namespace irc {

const char* proto_label_name(ProtoLabel l) {
    switch (l) {
        case ProtoLabel::DF: return "DF";
        case ProtoLabel::EF: return "EF";
        case ProtoLabel::AF: return "AF";
    }
    return "?";
}

namespace {

Scenario with_leader_value(const Scenario& base, const NodeLayout* layout,
                           LeaderVariable var, double x, double y) {
    Scenario s = base;
    switch (var) {
        case LeaderVariable::Amplification:
            // bands without relay links are unaffected by the gain
            for (auto& m : s.af) {
                m.saturating = false;
                m.fixed_gain = x;
            }
            break;
        case LeaderVariable::Nu:
            for (auto& d : s.df) d.nu = x;
            for (auto& nu : s.ef_nu) nu = x;
            break;
        case LeaderVariable::RelayPosition: {
            if (!layout)
                throw std::invalid_argument("position sweep requires a node layout");
            NodeLayout moved = *layout;
            moved.relay = {x, y};
            apply_layout(s, moved);
            break;
        }
    }
    return s;
}

struct EqOutcome {
    bool converged = false;
    PowerAllocation ne;
    int iterations = 0;
    int distinct = 1;
};

EqOutcome equilibrium(const Scenario& s, const SweepSpec& spec) {
    const int q = s.num_bands();
    EqOutcome out;
    if (spec.policy == EquilibriumPolicy::Analytic) {
        // exact affine iteration; fixed-gain AF with two bands only
        const BrCoefficients c = br_coefficients(s);
        double t1 = 0.5, t2 = 0.5;
        for (int it = 1; it <= spec.max_iter; ++it) {
            auto [n1, n2] = affine_cournot_step(c, t1, t2);
            const double d = std::max(std::fabs(n1 - t1), std::fabs(n2 - t2));
            t1 = n1;
            t2 = n2;
            out.iterations = it;
            if (d < spec.tol) {
                out.converged = true;
                break;
            }
        }
        out.ne = {{t1, 1.0 - t1}, {t2, 1.0 - t2}};
        return out;
    }

    std::vector<PowerAllocation> starts{PowerAllocation::uniform(q)};
    if (spec.policy == EquilibriumPolicy::CournotMultiStart) {
        auto corner = [&](int k) {
            std::vector<double> v(static_cast<std::size_t>(q), 0.0);
            if (k >= 0) v[static_cast<std::size_t>(k)] = 1.0;
            return v;
        };
        const std::vector<double> uni(static_cast<std::size_t>(q), 1.0 / q);
        for (int k1 : {0, q - 1})
            for (int k2 : {0, q - 1}) starts.push_back({corner(k1), corner(k2)});
        starts.push_back({corner(-1), corner(-1)});
        starts.push_back({corner(0), uni});
        starts.push_back({uni, corner(0)});
        starts.push_back({corner(-1), uni});
    }

    double best_sum = -HUGE_VAL;
    std::vector<PowerAllocation> found;
    for (const auto& s0 : starts) {
        const CournotTrace t = cournot(s, s0, spec.max_iter, spec.tol, spec.br);
        if (!t.converged) continue;
        const PowerAllocation& fp = *t.fixed_point;
        bool fresh = true;
        for (const auto& other : found)
            if (max_norm_distance(fp, other) < 10.0 * spec.tol) fresh = false;
        if (fresh) found.push_back(fp);
        const double sum = utility(s, fp, 1) + utility(s, fp, 2);
        if (!out.converged || sum > best_sum) {
            best_sum = sum;
            out.converged = true;
            out.ne = fp;
            out.iterations = t.iterations;
        }
    }
    out.distinct = static_cast<int>(found.size());
    if (!out.converged) out.ne = PowerAllocation::uniform(q);
    return out;
}

}  // namespace

SweepResult sweep(const SweepSpec& spec, const Scenario& base,
                  const NodeLayout* layout) {
    SweepResult result;
    result.spec = spec;
    const int n = std::max(spec.resolution, 2);

    auto run_point = [&](double x, double y) {
        const Scenario s = with_leader_value(base, layout, spec.variable, x, y);
        const EqOutcome eq = equilibrium(s, spec);
        SweepPoint p;
        p.x = x;
        p.y = y;
        p.converged = eq.converged;
        p.ne = eq.ne;
        p.iterations = eq.iterations;
        p.distinct_ne = eq.distinct;
        if (eq.converged) {
            p.u1 = utility(s, eq.ne, 1);
            p.u2 = utility(s, eq.ne, 2);
        }
        result.points.push_back(std::move(p));
    };

    if (spec.variable == LeaderVariable::RelayPosition) {
        const double l = spec.half_extent;
        for (int i = 0; i < n; ++i) {
            const double x = -l + 2.0 * l * i / (n - 1);
            for (int j = 0; j < n; ++j) {
                const double y = -l + 2.0 * l * j / (n - 1);
                run_point(x, y);
            }
        }
    } else {
        for (int i = 0; i < n; ++i)
            run_point(spec.lo + (spec.hi - spec.lo) * i / (n - 1), 0.0);
    }
    return result;
}

BestLeader best_leader_value(const SweepResult& r) {
    const SweepPoint* best = nullptr;
    for (const SweepPoint& p : r.points) {
        if (!p.converged) continue;
        if (!best || p.sum_rate() > best->sum_rate()) best = &p;  // first max wins ties
    }
    if (!best) throw std::runtime_error("best_leader_value: no converged sweep point");
    return {best->x, best->y, best->sum_rate()};
}

namespace {

struct ProtoSums {
    double df = 0.0, ef = 0.0, af = 0.0;
};

// Full-power single-band sum rates of the three protocols at one relay
// position. DF searches its tau/nu grid, EF its nu grid (or a pinned nu),
// AF saturates the relay power constraint.
ProtoSums protocol_sums(const Scenario& proto, const DominanceOptions& opts,
                        double pinned_ef_nu) {
    const BandChannel& b = proto.bands[0];
    const double p1 = proto.p1, p2 = proto.p2;
    ProtoSums out;

    for (double t1 : opts.tau_grid)
        for (double t2 : opts.tau_grid) {
            if (t1 + t2 > 1.0) continue;
            for (double nu : opts.nu_grid)
                out.df = std::max(out.df, rate_df(b, p1, p2, t1, t2, nu).sum());
        }
    if (pinned_ef_nu >= 0.0) {
        out.ef = rate_ef(b, p1, p2, pinned_ef_nu).rates.sum();
    } else {
        for (double nu : opts.nu_grid)
            out.ef = std::max(out.ef, rate_ef(b, p1, p2, nu).rates.sum());
    }
    out.af = rate_af(b, p1, p2, saturating_gain(b, p1, p2)).sum();
    return out;
}

DominanceCell make_cell(const NodeLayout& layout, const ScenarioParams& params,
                        double xr, double yr, const DominanceOptions& opts,
                        double pinned_ef_nu) {
    NodeLayout at = layout;
    at.relay = {xr, yr};
    const Scenario s = layout_to_scenario(at, params);
    const ProtoSums sums = protocol_sums(s, opts, pinned_ef_nu);

    DominanceCell cell;
    cell.xr = xr;
    cell.yr = yr;
    cell.sum_df = sums.df;
    cell.sum_ef = sums.ef;
    cell.sum_af = sums.af;
    // argmax with the fixed precedence DF > EF > AF on ties
    const double best = std::max({sums.df, sums.ef, sums.af});
    if (sums.df >= best - opts.tie_tol)
        cell.label = ProtoLabel::DF;
    else if (sums.ef >= best - opts.tie_tol)
        cell.label = ProtoLabel::EF;
    else
        cell.label = ProtoLabel::AF;
    return cell;
}

}  // namespace

std::vector<DominanceCell> dominance_map(const NodeLayout& layout,
                                         const ScenarioParams& params,
                                         const DominanceGrid& grid,
                                         const DominanceOptions& opts) {
    if (layout.num_bands() != 1)
        throw std::invalid_argument("dominance_map: single-band layouts only");
    std::vector<DominanceCell> cells;
    cells.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);
    for (int j = 0; j < grid.ny; ++j) {
        const double y = grid.y_lo + (grid.y_hi - grid.y_lo) * j / (grid.ny - 1);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x_lo + (grid.x_hi - grid.x_lo) * i / (grid.nx - 1);
            cells.push_back(make_cell(layout, params, x, y, opts, -1.0));
        }
    }
    return cells;
}

std::vector<DominanceCell> dominance_cut(const NodeLayout& layout,
                                         const ScenarioParams& params,
                                         double y_cut, double x_lo, double x_hi,
                                         int n, const DominanceOptions& opts) {
    if (layout.num_bands() != 1)
        throw std::invalid_argument("dominance_cut: single-band layouts only");
    std::vector<DominanceCell> cells;
    cells.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (n - 1);
        cells.push_back(make_cell(layout, params, x, y_cut, opts, opts.cut_nu));
    }
    return cells;
}

}  // namespace irc
