#pragma once

// Scenario (de)serialization and deterministic scenario generation, including
// the canonical embeddings used by the reproduction scripts. JSON schema:
// powers accept {"dbm": x} or {"linear": x} (or a bare linear number), gains
// accept {"re": a, "im": b} or a bare real.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "irc/scenario.hpp"

namespace irc {

inline constexpr int kSchemaVersion = 1;

// Raised on malformed or invalid configs; carries the validation violations.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(const std::string& what, std::vector<std::string> violations = {})
        : std::runtime_error(what), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

struct LoadedScenario {
    Scenario scenario;
    std::optional<NodeLayout> layout;  // present when the config was geometric
};

LoadedScenario scenario_from_json(const nlohmann::json& j);
LoadedScenario load_scenario(const std::string& path);

nlohmann::json scenario_to_json(const Scenario& s);
nlohmann::json layout_to_json(const NodeLayout& l);

// Canonical planar embedding for the source/destination distance quadruple
// (d11, d22, d12, d21): S1-D1 horizontal and centered on the origin, S2 on
// the circle of radius d21 around D1 at 225 degrees, D2 the larger-x
// intersection of the two remaining distance circles.
struct EmbeddingDistances {
    double d11 = 1.0, d22 = 1.0, d12 = 1.0, d21 = 1.0;
};
NodeLayout canonical_embedding(const EmbeddingDistances& d);

// Deterministic random scenario generation for tests and the CLI.
struct RandomSpec {
    int q = 2;
    Protocol protocol = Protocol::AF_FIXED;
    bool time_sharing = false;
    bool complex_gains = true;        // false: positive real magnitudes
    bool df_nonnegative_cross = false; // enforce Re(h_ii conj(h_ri)) >= 0
    bool zero_relay_power = false;
    double tau_max = 0.0;             // DF cooperation degrees drawn up to this
};
Scenario random_scenario(const RandomSpec& spec, std::uint64_t seed);

// Generation families for the `gen` subcommand. figN-canonical families emit
// the documented embeddings; random families are seeded and deterministic.
// Throws ScenarioError for unknown families.
nlohmann::json gen_scenario(const std::string& family, std::uint64_t seed);
std::vector<std::string> gen_families();

// Ready-built reproduction scenarios (the figN-canonical families, loaded).
LoadedScenario fig_scenario(int fig);  // fig in {2, 4, 5, 6, 7}

// Formats a double with 12 significant digits (all CLI numeric output).
std::string format_number(double v);
// Rounds to the 12-significant-digit value that format_number prints.
double round_number(double v);

}  // namespace irc
