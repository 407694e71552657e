// ircsim: achievable rates and power-allocation game analysis for two-user
// multi-band interference relay channels.
//
// Subcommands: rates, af-gain, ne, cournot, basin, sweep-gain, sweep-nu,
// sweep-position, dominance-map, gen. All numeric output uses 12 significant
// digits; runs are deterministic for a fixed option set.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "irc/af_analytic.hpp"
#include "irc/afgain.hpp"
#include "irc/leader.hpp"
#include "irc/scenario_io.hpp"

using nlohmann::json;
using namespace irc;

namespace {

struct CommonOpts {
    std::string scenario_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 0;
    double tol = 1e-6;
    std::string gain_denominator;  // empty = keep scenario setting
    std::string d_reading = "squared";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_scenario = true) {
    auto* s = cmd->add_option("--scenario", o.scenario_path, "scenario JSON file");
    if (needs_scenario) s->required();
    cmd->add_option("--out", o.out_path, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", o.seed, "seed for randomized generation");
    cmd->add_option("--tol", o.tol, "tolerance override");
    cmd->add_option("--gain-denominator", o.gain_denominator,
                    "saturating-gain denominator: allocated or full")
        ->check(CLI::IsMember({"allocated", "full"}));
    cmd->add_option("--d-reading", o.d_reading,
                    "analytic d_i relay-noise reading: squared or literal")
        ->check(CLI::IsMember({"squared", "literal"}));
}

LoadedScenario load(const CommonOpts& o) {
    LoadedScenario ls = load_scenario(o.scenario_path);
    if (o.gain_denominator == "full") ls.scenario.gain_denominator_full = true;
    if (o.gain_denominator == "allocated") ls.scenario.gain_denominator_full = false;
    return ls;
}

DReading reading_of(const CommonOpts& o) {
    return o.d_reading == "literal" ? DReading::Literal : DReading::Squared;
}

void write_output(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out_path);
    if (!out) throw std::runtime_error("cannot write " + o.out_path);
    out << text;
}

json ne_point_json(const NePoint& p) {
    json j;
    j["theta1"] = round_number(p.theta1);
    j["theta2"] = round_number(p.theta2);
    j["kind"] = p.kind == NeKind::Interior
                    ? "interior"
                    : (p.kind == NeKind::Border ? "border" : "segment");
    j["stability"] = p.stability == NeStability::Stable
                         ? "stable"
                         : (p.stability == NeStability::Unstable ? "unstable" : "neutral");
    j["slope_product"] = round_number(p.slope_product);
    return j;
}

std::string csv_row(const std::vector<double>& vals) {
    std::ostringstream os;
    for (std::size_t i = 0; i < vals.size(); ++i)
        os << (i ? "," : "") << format_number(vals[i]);
    return os.str();
}

std::vector<double> parse_theta_group(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    return vals;
}

// "a,b;c,d" = per-user band fractions. For two bands a single scalar x per
// user means (x, 1-x).
PowerAllocation parse_state(const std::string& text, int q) {
    std::vector<std::vector<double>> groups;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) groups.push_back(parse_theta_group(part));
    if (groups.size() == 1 && groups[0].size() == 2 && q == 2)
        groups = {{groups[0][0]}, {groups[0][1]}};  // two scalars, one per user
    if (groups.size() != 2) throw std::runtime_error("state needs two user groups");
    auto expand = [&](std::vector<double> v) {
        if (static_cast<int>(v.size()) == 1 && q == 2) return std::vector<double>{v[0], 1.0 - v[0]};
        if (static_cast<int>(v.size()) != q)
            throw std::runtime_error("state group size must match the band count");
        return v;
    };
    return {expand(groups[0]), expand(groups[1])};
}

json sweep_summary(const SweepResult& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    int converged = 0;
    for (const auto& p : r.points) converged += p.converged ? 1 : 0;
    j["points"] = static_cast<int>(r.points.size());
    j["converged"] = converged;
    if (converged > 0) {
        const BestLeader best = best_leader_value(r);
        j["best"] = {{"value", round_number(best.x)},
                     {"sum_rate", round_number(best.sum_rate)}};
        if (r.spec.variable == LeaderVariable::RelayPosition)
            j["best"]["value_y"] = round_number(best.y);
    }
    return j;
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    const bool pos = r.spec.variable == LeaderVariable::RelayPosition;
    const int q = r.points.empty() ? 0 : static_cast<int>(r.points[0].ne.theta1.size());
    os << (pos ? "x,y" : "value") << ",converged";
    for (int u = 1; u <= 2; ++u)
        for (int k = 0; k < q; ++k) os << ",theta" << u << "_" << k;
    os << ",u1,u2,sum\n";
    for (const auto& p : r.points) {
        std::vector<double> row;
        row.push_back(p.x);
        if (pos) row.push_back(p.y);
        os << csv_row(row) << "," << (p.converged ? 1 : 0);
        for (double v : p.ne.theta1) os << "," << format_number(v);
        for (double v : p.ne.theta2) os << "," << format_number(v);
        os << "," << format_number(p.u1) << "," << format_number(p.u2) << ","
           << format_number(p.u1 + p.u2) << "\n";
    }
    return os.str();
}

void emit_sweep(const CommonOpts& o, const SweepResult& r) {
    if (o.format == "json") {
        json j = sweep_summary(r);
        json pts = json::array();
        for (const auto& p : r.points) {
            json e;
            e["value"] = round_number(p.x);
            if (r.spec.variable == LeaderVariable::RelayPosition)
                e["value_y"] = round_number(p.y);
            e["converged"] = p.converged;
            e["u1"] = round_number(p.u1);
            e["u2"] = round_number(p.u2);
            e["sum_rate"] = round_number(p.u1 + p.u2);
            pts.push_back(e);
        }
        j["sweep"] = pts;
        write_output(o, j.dump(2) + "\n");
        return;
    }
    write_output(o, sweep_csv(r));
    if (!o.out_path.empty()) std::cout << sweep_summary(r).dump(2) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"two-user interference relay channel simulator"};
    app.require_subcommand(1);

    CommonOpts o;

    // rates
    auto* c_rates = app.add_subcommand("rates", "single-band achievable rates");
    int band = 0;
    add_common(c_rates, o);
    c_rates->add_option("--band", band, "band index");
    c_rates->callback([&] {
        Scenario s = load(o).scenario;
        if (band < 0 || band >= s.num_bands()) throw std::runtime_error("bad band index");
        // single-band analysis reports the receiver-quality-selected EF rates
        s.ef_case_select = true;
        const BandChannel& b = s.bands[static_cast<std::size_t>(band)];
        const std::size_t k = static_cast<std::size_t>(band);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["protocol"] = protocol_name(s.protocol);
        j["band"] = band;
        j["time_sharing"] = s.time_sharing;
        j["r1"] = round_number(band_rate_user(s, band, 1, 1.0, 1.0));
        j["r2"] = round_number(band_rate_user(s, band, 2, 1.0, 1.0));
        switch (s.protocol) {
            case Protocol::DF: {
                const DfParams& d = s.df[k];
                j["tau1"] = d.tau1;
                j["tau2"] = d.tau2;
                j["nu"] = d.nu;
                break;
            }
            case Protocol::EF: {
                const EfCaseResult r = rate_ef(b, s.p1, s.p2, s.ef_nu[k]);
                j["case"] = r.case_id;
                j["nwz1"] = std::isfinite(r.nwz1) ? json(round_number(r.nwz1)) : json("inf");
                j["nwz2"] = std::isfinite(r.nwz2) ? json(round_number(r.nwz2)) : json("inf");
                j["nu"] = s.ef_nu[k];
                break;
            }
            case Protocol::AF:
            case Protocol::AF_FIXED: {
                j["gain"] = round_number(s.af[k].saturating
                                             ? saturating_gain(b, s.p1, s.p2)
                                             : s.af[k].fixed_gain);
                break;
            }
        }
        write_output(o, j.dump(2) + "\n");
    });

    // af-gain
    auto* c_afgain = app.add_subcommand("af-gain", "optimal amplification gain for one user");
    int user = 1;
    double a_max = -1.0;
    add_common(c_afgain, o);
    c_afgain->add_option("--band", band, "band index");
    c_afgain->add_option("--user", user, "user index (1 or 2)")->check(CLI::IsMember({1, 2}));
    c_afgain->add_option("--a-max", a_max, "gain upper bound (default: saturating gain)");
    c_afgain->callback([&] {
        const Scenario s = load(o).scenario;
        const BandChannel& b = s.bands.at(static_cast<std::size_t>(band));
        const double amax = a_max >= 0.0 ? a_max : saturating_gain(b, s.p1, s.p2);
        const GainParams gp = GainParams::for_user(b, s.p1, s.p2, user);
        const GainSolution sol = optimal_gain(gp, amax);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["band"] = band;
        j["user"] = user;
        j["a_max"] = round_number(amax);
        j["discriminant"] = round_number(sol.discriminant);
        json cands = json::array();
        for (auto [a, r] : sol.candidates)
            cands.push_back({{"gain", round_number(a)}, {"rate", round_number(r)}});
        j["candidates"] = cands;
        j["optimum"] = round_number(sol.optimum);
        j["optimum_rate"] = round_number(af_rate(gp, sol.optimum));
        write_output(o, j.dump(2) + "\n");
    });

    // ne
    auto* c_ne = app.add_subcommand("ne", "verify an equilibrium or enumerate analytically");
    std::string theta_text;
    bool analytic = false;
    add_common(c_ne, o);
    c_ne->add_option("--theta", theta_text, "state to verify, e.g. 0.3,0.7;0.5,0.5");
    c_ne->add_flag("--analytic", analytic, "exact enumeration (fixed-gain AF, Q=2)");
    c_ne->callback([&] {
        const Scenario s = load(o).scenario;
        json j;
        j["schema_version"] = kSchemaVersion;
        if (analytic) {
            const NeSet ne = enumerate_ne(br_coefficients(s, reading_of(o)));
            j["cardinality"] = ne.cardinality == NeCardinality::One
                                   ? "one"
                                   : ne.cardinality == NeCardinality::Two
                                         ? "two"
                                         : ne.cardinality == NeCardinality::Three
                                               ? "three"
                                               : "infinite";
            json pts = json::array();
            for (const NePoint& p : ne.points) pts.push_back(ne_point_json(p));
            j["points"] = pts;
            if (ne.segment)
                j["segment"] = {ne_point_json(ne.segment->first),
                                ne_point_json(ne.segment->second)};
        } else {
            if (theta_text.empty()) throw std::runtime_error("ne: --theta or --analytic required");
            const PowerAllocation state = parse_state(theta_text, s.num_bands());
            const NeCheck chk = verify_ne(s, state, o.tol);
            j["pass"] = chk.pass;
            j["improve1"] = round_number(chk.improve1);
            j["improve2"] = round_number(chk.improve2);
            j["tol"] = o.tol;
        }
        write_output(o, j.dump(2) + "\n");
    });

    // cournot
    auto* c_cournot = app.add_subcommand("cournot", "best-response dynamics");
    std::string start_text;
    int max_iter = 1000;
    bool simultaneous = false;
    add_common(c_cournot, o);
    c_cournot->add_option("--start", start_text, "initial state (default: uniform)");
    c_cournot->add_option("--max-iter", max_iter, "round limit");
    c_cournot->add_flag("--simultaneous", simultaneous, "simultaneous updates");
    c_cournot->callback([&] {
        const Scenario s = load(o).scenario;
        const int q = s.num_bands();
        const PowerAllocation init =
            start_text.empty() ? PowerAllocation::uniform(q) : parse_state(start_text, q);
        const CournotTrace trace = cournot(s, init, max_iter, o.tol, {}, simultaneous);
        if (o.format == "json") {
            json j;
            j["schema_version"] = kSchemaVersion;
            j["converged"] = trace.converged;
            j["iterations"] = trace.iterations;
            if (trace.fixed_point) {
                j["theta1"] = trace.fixed_point->theta1;
                j["theta2"] = trace.fixed_point->theta2;
                j["u1"] = round_number(utility(s, *trace.fixed_point, 1));
                j["u2"] = round_number(utility(s, *trace.fixed_point, 2));
            }
            write_output(o, j.dump(2) + "\n");
            return;
        }
        std::ostringstream os;
        os << "iteration";
        for (int u = 1; u <= 2; ++u)
            for (int k = 0; k < q; ++k) os << ",theta" << u << "_" << k;
        os << ",u1,u2\n";
        for (std::size_t i = 0; i < trace.states.size(); ++i) {
            os << i;
            const PowerAllocation& st = trace.states[i];
            for (double v : st.theta1) os << "," << format_number(v);
            for (double v : st.theta2) os << "," << format_number(v);
            os << "," << format_number(utility(s, st, 1)) << ","
               << format_number(utility(s, st, 2)) << "\n";
        }
        write_output(o, os.str());
    });

    // basin
    auto* c_basin = app.add_subcommand("basin", "basins of attraction of the affine dynamics");
    int resolution = 101;
    add_common(c_basin, o);
    c_basin->add_option("--resolution", resolution, "cells per axis");
    c_basin->callback([&] {
        const Scenario s = load(o).scenario;
        const BrCoefficients c = br_coefficients(s, reading_of(o));
        const NeSet ne = enumerate_ne(c);
        const auto cells = basin_map(c, ne, resolution);
        std::ostringstream os;
        os << "theta1_0,theta2_0,ne_index\n";
        for (const BasinCell& cell : cells)
            os << format_number(cell.theta1) << "," << format_number(cell.theta2) << ","
               << cell.ne_index << "\n";
        write_output(o, os.str());
    });

    // sweeps
    SweepSpec spec;
    bool have_lo = false, have_hi = false;
    std::string policy = "cournot";
    auto add_sweep = [&](CLI::App* cmd, bool scalar) {
        add_common(cmd, o);
        cmd->add_option("--resolution", spec.resolution, "sweep points (per axis)");
        if (scalar) {
            cmd->add_option("--lo", spec.lo, "range start")->each([&](const std::string&) {
                have_lo = true;
            });
            cmd->add_option("--hi", spec.hi, "range end")->each([&](const std::string&) {
                have_hi = true;
            });
        } else {
            cmd->add_option("--extent", spec.half_extent, "half side of the square");
        }
        cmd->add_option("--max-iter", spec.max_iter, "cournot round limit");
        cmd->add_option("--policy", policy, "cournot, multi, or analytic")
            ->check(CLI::IsMember({"cournot", "multi", "analytic"}));
    };
    auto apply_policy = [&] {
        spec.policy = policy == "analytic" ? EquilibriumPolicy::Analytic
                      : policy == "multi"  ? EquilibriumPolicy::CournotMultiStart
                                           : EquilibriumPolicy::CournotCanonical;
    };

    auto* c_sg = app.add_subcommand("sweep-gain", "fixed amplification gain sweep");
    add_sweep(c_sg, true);
    c_sg->callback([&] {
        apply_policy();
        const LoadedScenario ls = load(o);
        spec.variable = LeaderVariable::Amplification;
        spec.tol = o.tol;
        if (!have_lo) spec.lo = 0.0;
        if (!have_hi) {
            // default range ends at the gain saturating the relay constraint
            double hi = 0.0;
            for (const BandChannel& b : ls.scenario.bands)
                if (b.relay_power > 0.0)
                    hi = std::max(hi, saturating_gain(b, ls.scenario.p1, ls.scenario.p2));
            spec.hi = hi > 0.0 ? hi : 1.0;
        }
        emit_sweep(o, sweep(spec, ls.scenario, ls.layout ? &*ls.layout : nullptr));
    });

    auto* c_sn = app.add_subcommand("sweep-nu", "relay power split sweep");
    add_sweep(c_sn, true);
    c_sn->callback([&] {
        apply_policy();
        const LoadedScenario ls = load(o);
        spec.variable = LeaderVariable::Nu;
        spec.tol = o.tol;
        if (!have_lo) spec.lo = 0.0;
        if (!have_hi) spec.hi = 1.0;
        emit_sweep(o, sweep(spec, ls.scenario, ls.layout ? &*ls.layout : nullptr));
    });

    auto* c_sp = app.add_subcommand("sweep-position", "relay position sweep");
    add_sweep(c_sp, false);
    c_sp->callback([&] {
        apply_policy();
        const LoadedScenario ls = load(o);
        if (!ls.layout) throw std::runtime_error("sweep-position needs a layout-based scenario");
        spec.variable = LeaderVariable::RelayPosition;
        spec.tol = o.tol;
        emit_sweep(o, sweep(spec, ls.scenario, &*ls.layout));
    });

    // dominance-map
    auto* c_dom = app.add_subcommand("dominance-map", "best protocol per relay position");
    DominanceGrid grid;
    DominanceOptions dopts;
    double cut_y = 0.0;
    bool have_cut = false;
    bool have_grid_x = false, have_grid_y = false;
    add_common(c_dom, o);
    c_dom->add_option("--nx", grid.nx, "grid columns");
    c_dom->add_option("--ny", grid.ny, "grid rows");
    c_dom->add_option("--x-lo", grid.x_lo)->each([&](const std::string&) { have_grid_x = true; });
    c_dom->add_option("--x-hi", grid.x_hi)->each([&](const std::string&) { have_grid_x = true; });
    c_dom->add_option("--y-lo", grid.y_lo)->each([&](const std::string&) { have_grid_y = true; });
    c_dom->add_option("--y-hi", grid.y_hi)->each([&](const std::string&) { have_grid_y = true; });
    c_dom->add_option("--cut-y", cut_y, "evaluate a horizontal cut instead of the map")
        ->each([&](const std::string&) { have_cut = true; });
    c_dom->add_option("--cut-nu", dopts.cut_nu, "pinned EF split on the cut");
    c_dom->callback([&] {
        const LoadedScenario ls = load(o);
        if (!ls.layout) throw std::runtime_error("dominance-map needs a layout-based scenario");
        const NodeLayout& layout = *ls.layout;
        // parameters travel through the scenario; rebuild them for the map
        ScenarioParams params;
        params.p1 = ls.scenario.p1;
        params.p2 = ls.scenario.p2;
        const BandChannel& b0 = ls.scenario.bands[0];
        params.noise_d1 = {b0.noise_d1};
        params.noise_d2 = {b0.noise_d2};
        params.noise_r = {b0.noise_r};
        params.relay_power = {b0.relay_power};
        params.protocol = Protocol::AF;
        if (!have_grid_x) {
            grid.x_lo = -4.0 * layout.d0;
            grid.x_hi = 4.0 * layout.d0;
        }
        if (!have_grid_y) {
            grid.y_lo = -3.0 * layout.d0;
            grid.y_hi = 4.0 * layout.d0;
        }
        NodeLayout single = layout;
        single.gamma = {layout.gamma[0]};
        single.relay_on.clear();
        std::vector<DominanceCell> cells;
        if (have_cut)
            cells = dominance_cut(single, params, cut_y, grid.x_lo, grid.x_hi, grid.nx, dopts);
        else
            cells = dominance_map(single, params, grid, dopts);
        std::ostringstream os;
        os << "x,y,sum_df,sum_ef,sum_af,label\n";
        for (const DominanceCell& cell : cells)
            os << format_number(cell.xr) << "," << format_number(cell.yr) << ","
               << format_number(cell.sum_df) << "," << format_number(cell.sum_ef) << ","
               << format_number(cell.sum_af) << "," << proto_label_name(cell.label) << "\n";
        write_output(o, os.str());
    });

    // gen
    auto* c_gen = app.add_subcommand("gen", "deterministic scenario generation");
    std::string family = "random-complex";
    add_common(c_gen, o, /*needs_scenario=*/false);
    c_gen->add_option("--family", family, "generation family");
    c_gen->callback([&] {
        const json j = gen_scenario(family, o.seed);
        write_output(o, j.dump(2) + "\n");
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const std::string& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        // scenario does not fit the requested analysis (wrong band count,
        // degenerate channel, ...)
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
