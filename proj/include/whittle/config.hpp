#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "whittle/sim.hpp"
#include "whittle/thompson.hpp"

namespace whittle {

// Configuration problems carry the offending field so the CLI can name it.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& field, const std::string& message)
        : std::runtime_error("config field '" + field + "': " + message), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

struct GeneratorSpec {
    int n = 0;
    int type_b = 0;
    std::uint64_t seed = 0;
};

struct LearningSpec {
    // either a shared product grid over candidate values...
    std::vector<double> grid_p;
    std::vector<double> grid_rho0;
    std::vector<double> grid_rho1;  // empty = rho1 known (taken from each arm)
    // ...or explicit per-arm candidate lists
    std::vector<std::vector<Candidate>> grids;
    std::vector<std::vector<double>> prior;  // empty = uniform
    PolicyKind base_policy = PolicyKind::Whittle;
    bool resample_all = false;
};

// Parsed experiment file. Sections are optional; each subcommand checks for
// the pieces it needs.
struct ExperimentConfig {
    int schema_version = 1;
    std::vector<ArmModel> arms;  // explicit or produced by the generator
    std::optional<GeneratorSpec> generator;
    std::vector<double> initial_beliefs;  // empty means unspecified
    std::optional<Criterion> criterion;
    std::vector<PolicyKind> policies;  // "both" expands to whittle + myopic
    std::optional<long> horizon;
    std::vector<std::uint64_t> seeds;
    std::string output;
    bool svg = false;
    std::optional<LearningSpec> learning;

    // Assembled simulation config; throws ConfigError when a needed section
    // is missing.
    SimConfig sim_config(PolicyKind policy) const;
    LearningConfig learning_config() const;
};

// Strict parse: unknown keys are rejected at every level, schema_version must
// be 1, and every arm is validated before any computation runs.
ExperimentConfig parse_config(const std::string& json_text, const std::string& source_name);
ExperimentConfig load_config(const std::string& path);

// Round-trip support: serialize a config back to canonical JSON.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace whittle
