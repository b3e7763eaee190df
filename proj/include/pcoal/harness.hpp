#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace pcoal {

enum class Command { Rates, XiMatrix, FiniteMc, ScalingFit, Simulate, Forward, Gclt };

std::string to_string(Command command);
Command parse_command(const std::string& name);

/// One run of the harness. Fields not used by a command are ignored.
struct ExperimentConfig {
    Command command = Command::Rates;
    double alpha = 1.5;
    double beta = 0.0;
    std::optional<double> theta;  // selects the gamma(θ) partition in finite-mc
    std::int64_t N = 100;
    std::vector<std::int64_t> N_grid;
    int i_max = 10;
    int replicas = 10000;
    std::uint64_t seed = 1;
    std::string output_path;  // empty: standard output
    std::string family = "auto";  // simulate: kingman | bs | beta | xi | auto (from alpha)
    int n0 = 10;
    int generations = 100;
    std::string estimator = "conditional";  // scaling-fit: conditional | occupancy
    bool trajectory = false;  // simulate: dump one trajectory instead of the functional table

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    bool operator==(const ExperimentConfig&) const = default;
};

/// Bad user input; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks the command's parameter regime before any sampling; throws ConfigError.
void validate(const ExperimentConfig& config);

struct CommandOutput {
    std::string provenance;  // "# seed=..., params=..., version=..."
    std::string body;        // CSV header and rows
    std::vector<std::string> warnings;
    std::string text() const;
};

/// Runs one command. Throws ConfigError for invalid input.
CommandOutput run_command(const ExperimentConfig& config);

/// Exit code contract: 0 success, 2 invalid configuration, 1 any other failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

std::string version();

}  // namespace pcoal
