#pragma once

// The non-cooperative power-allocation game: each transmitter splits its
// power budget across the Q bands (simplex strategy) to maximize its own sum
// rate. Numerical best responses, Cournot tatonnement, equilibrium
// verification and a per-band concavity certificate for the existence
// theorems.

#include <optional>
#include <string>
#include <vector>

#include "irc/rates.hpp"

namespace irc {

struct PowerAllocation {
    std::vector<double> theta1, theta2;  // per-band power fractions

    static PowerAllocation uniform(int q) {
        return {std::vector<double>(q, 1.0 / q), std::vector<double>(q, 1.0 / q)};
    }
    std::vector<double>& theta(int user) { return user == 1 ? theta1 : theta2; }
    const std::vector<double>& theta(int user) const {
        return user == 1 ? theta1 : theta2;
    }
    bool valid(double slack = 1e-12) const;
};

double max_norm_distance(const PowerAllocation& a, const PowerAllocation& b);

enum class BrMethod {
    GridGolden,       // per-band scans + full-power face search (1 or 2 bands)
    CoordinateAscent  // multi-start projected coordinate ascent (any band count)
};

struct BrOptions {
    int coarse_grid = 101;     // points per dimension in the initial scan
    double refine_tol = 1e-8;  // golden-section window on theta
    int multi_start = 5;       // brackets kept for refinement
    // default: GridGolden up to two bands, CoordinateAscent above
    std::optional<BrMethod> method;
};

// Rate of `user` on band q when the own power fraction is x and the
// opponent's is y. This is the game's per-band utility term; the multi-band
// utility is band-separable in each user's own strategy.
double band_rate_user(const Scenario& s, int q, int user, double x, double y);

double utility(const Scenario& s, const PowerAllocation& theta, int user);
double utility(const Scenario& s, const std::vector<double>& own,
               const std::vector<double>& opp, int user);

// Maximizes the user's utility over {theta in [0,1]^Q, sum <= 1} against a
// fixed opponent strategy. Q <= 2 uses per-band scans plus a search along the
// full-power face; Q >= 3 uses multi-start projected coordinate ascent with
// pairwise transfer moves. The output satisfies the simplex invariant exactly.
std::vector<double> best_response(const Scenario& s,
                                  const std::vector<double>& opponent_theta,
                                  int user, const BrOptions& opts = {});

struct CournotTrace {
    std::vector<PowerAllocation> states;  // trajectory, initial state first
    bool converged = false;
    std::optional<PowerAllocation> fixed_point;
    int iterations = 0;
};

// Alternating best responses, user 1 then user 2 each round (simultaneous
// update behind the flag). Stops when the max-norm round change drops below
// tol; non-convergence is a reported outcome, not an error.
CournotTrace cournot(const Scenario& s, const PowerAllocation& initial,
                     int max_iter = 1000, double tol = 1e-8,
                     const BrOptions& opts = {}, bool simultaneous = false);

struct NeCheck {
    bool pass = false;
    double improve1 = 0.0, improve2 = 0.0;
    double max_improvement() const { return std::max(improve1, improve2); }
};

// A state is an equilibrium when neither user's best response improves its
// utility by more than tol.
NeCheck verify_ne(const Scenario& s, const PowerAllocation& theta, double tol,
                  const BrOptions& opts = {});

struct ConcavityResult {
    bool certified = true;
    // witness when violated
    int band = -1;
    double theta = 0.0;
    double second_difference = 0.0;
};

// Certifies concavity of each per-band rate in the user's own fraction by
// sampling second central differences (step h) at `samples` interior points.
ConcavityResult concavity_certificate(const Scenario& s, int user,
                                      const std::vector<double>& opponent_theta,
                                      int samples = 33, double tol = 1e-7,
                                      double h = 1e-3);

struct DfCondition {
    bool holds = true;
    int band = -1;  // first violation when !holds
    int user = 0;
};

// Sign condition Re(h_ii * conj(h_ri)) >= 0 for every user and band; the
// source and relay signals superpose constructively at the destination.
DfCondition df_condition(const Scenario& s);

}  // namespace irc
