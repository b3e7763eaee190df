#include "pcoal/harness.hpp"

#include <cmath>
#include <sstream>

#include "pcoal/coalescent_sim.hpp"
#include "pcoal/finite_coalescent.hpp"
#include "pcoal/forward_model.hpp"
#include "pcoal/limit_rates.hpp"
#include "pcoal/parallel.hpp"
#include "pcoal/samplers.hpp"
#include "pcoal/scaling_fit.hpp"

#ifndef PCOAL_VERSION
#define PCOAL_VERSION "unknown"
#endif

namespace pcoal {

std::string version() { return PCOAL_VERSION; }

namespace {

struct CommandName {
    Command command;
    const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::Rates, "rates"},           {Command::XiMatrix, "xi-matrix"}, {Command::FiniteMc, "finite-mc"},
    {Command::ScalingFit, "scaling-fit"}, {Command::Simulate, "simulate"}, {Command::Forward, "forward"},
    {Command::Gclt, "gclt"},
};

const std::vector<std::int64_t> kDefaultGrid = {100, 316, 1000, 3162, 10000};

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

Params checked_params(const ExperimentConfig& c) {
    try {
        return Params::make(c.alpha, c.beta);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::string resolved_family(const ExperimentConfig& c) {
    if (c.family != "auto") return c.family;
    if (c.alpha < 1.0) return "xi";
    if (c.alpha == 1.0) return "bs";
    if (c.alpha < 2.0) return "beta";
    return "kingman";
}

std::vector<std::int64_t> grid_or(const ExperimentConfig& c, std::vector<std::int64_t> fallback) {
    return c.N_grid.empty() ? fallback : c.N_grid;
}

std::string body_rates(const ExperimentConfig& c) {
    const Params p = checked_params(c);
    std::ostringstream os;
    if (p.alpha < 1.0)
        xi_transition_matrix(p, c.i_max).write_csv(os);
    else
        lambda_rate_table(p, c.i_max).write_csv(os);
    return os.str();
}

std::string body_finite_mc(const ExperimentConfig& c, std::vector<std::string>& warnings) {
    std::ostringstream os;
    os.precision(12);
    os << "family,N,beta,c_N,stderr,ess,replicas,reference\n";
    const auto grid = grid_or(c, {c.N});
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const PartitionModel model = c.theta ? PartitionModel::gamma(*c.theta, grid[g], c.beta)
                                             : PartitionModel::pareto(c.alpha, grid[g], c.beta);
        if (model.weight_variance_warning()) warnings.push_back("beta >= alpha/2 + 1: weights may have infinite variance");
        const WeightedEstimate e = estimate_c_N(model, c.replicas, derive_seed(c.seed, g));
        if (e.degenerate) warnings.push_back("degenerate weights at N=" + std::to_string(grid[g]));
        double reference = std::nan("");
        if (c.theta)
            reference = gamma_family_c_N(*c.theta, grid[g]);
        else if (grid[g] >= 3)
            reference = c_N_asymptotic(Params{c.alpha, c.beta}, grid[g]).value;
        os << (c.theta ? "gamma" : "pareto") << ',' << grid[g] << ',' << c.beta << ',' << e.value << ',' << e.std_error
           << ',' << e.ess << ',' << e.replicas << ',' << reference << '\n';
    }
    return os.str();
}

std::string body_scaling_fit(const ExperimentConfig& c, std::vector<std::string>& warnings) {
    const Params p = checked_params(c);
    const auto est = c.estimator == "occupancy" ? CnEstimator::Occupancy : CnEstimator::Conditional;
    const ScalingFit fit = scaling_fit(p, grid_or(c, kDefaultGrid), c.replicas, c.seed, est);
    if (fit.noisy) warnings.push_back("Monte Carlo noise dominates: slope CI wider than |slope|");
    std::ostringstream os;
    os.precision(12);
    os << "kind,N,value,stderr\n";
    for (const auto& pt : fit.points) os << "point," << pt.N << ',' << pt.c.value << ',' << pt.c.std_error << '\n';
    os << "slope,," << fit.slope << ',' << fit.slope_stderr << '\n';
    os << "slope_ci_low,," << fit.ci_low << ",\n";
    os << "slope_ci_high,," << fit.ci_high << ",\n";
    os << "prefactor,," << fit.prefactor << ",\n";
    os << "r_squared,," << fit.r_squared << ",\n";
    os << "noisy,," << (fit.noisy ? 1 : 0) << ",\n";
    return os.str();
}

std::string body_simulate(const ExperimentConfig& c) {
    const std::string family = resolved_family(c);
    std::ostringstream os;
    if (family == "xi") {
        const Params p = checked_params(c);
        const RateTable matrix = xi_transition_matrix(p, std::max(2, c.n0));
        if (c.trajectory) {
            RngStream rng(c.seed, 0);
            write_trajectory_csv(os, simulate_xi(matrix, c.n0, rng).trajectory);
            return os.str();
        }
        RatioAccumulator steps, collisions;
        for (int r = 0; r < c.replicas; ++r) {
            RngStream rng(c.seed, static_cast<std::uint64_t>(r));
            const XiRun run = simulate_xi(matrix, c.n0, rng);
            steps.add(static_cast<double>(run.steps), 1.0);
            collisions.add(static_cast<double>(run.collisions), 1.0);
        }
        std::vector<FunctionalRow> rows;
        const double nan = std::nan("");
        const auto s = steps.finish(), k = collisions.finish();
        rows.push_back({"xi", c.n0, "steps", s.value, s.std_error, nan, nan});
        rows.push_back({"xi", c.n0, "collisions", k.value, k.std_error, nan, nan});
        write_functional_csv(os, rows);
        return os.str();
    }
    CoalescentFamily fam = family == "kingman" ? CoalescentFamily::kingman()
                           : family == "bs"    ? CoalescentFamily::bolthausen_sznitman()
                                               : CoalescentFamily::beta(c.alpha, c.beta);
    if (c.trajectory) {
        RngStream rng(c.seed, 0);
        write_trajectory_csv(os, simulate_lambda(JumpKernel::from_params(fam.params, std::max(2, c.n0)), c.n0, rng).trajectory);
        return os.str();
    }
    write_functional_csv(os, functional_scaling_report(fam, {c.n0}, c.replicas, c.seed));
    return os.str();
}

std::string body_forward(const ExperimentConfig& c) {
    ForwardConfig f{c.N, c.alpha, c.generations, {}};
    RngStream rng(c.seed, 0);
    std::ostringstream os;
    write_forward_csv(os, simulate_forward(f, rng));
    return os.str();
}

std::string body_gclt(const ExperimentConfig& c) {
    std::ostringstream os;
    os.precision(12);
    os << "alpha,N,a_N,b_N,C_alpha,regime,mean,mean_stderr,variance,q05,median,q95\n";
    for (std::int64_t n : grid_or(c, {c.N})) {
        const GcltConstants k = gclt_constants(c.alpha, n);
        const SumStats s = standardized_sum_stats(c.alpha, n, c.replicas, c.seed);
        os << c.alpha << ',' << n << ',' << k.centering << ',' << k.scaling << ',' << k.c_alpha << ','
           << to_string(k.regime) << ',' << s.mean << ',' << s.mean_stderr << ',' << s.variance << ',' << s.q05 << ','
           << s.median << ',' << s.q95 << '\n';
    }
    return os.str();
}

}  // namespace

std::string to_string(Command command) {
    for (const auto& c : kCommands)
        if (c.command == command) return c.name;
    return "unknown";
}

Command parse_command(const std::string& name) {
    for (const auto& c : kCommands)
        if (name == c.name) return c.command;
    throw ConfigError("unknown command: " + name);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["command"] = to_string(command);
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["theta"] = theta ? nlohmann::json(*theta) : nlohmann::json(nullptr);
    j["N"] = N;
    j["N_grid"] = N_grid;
    j["i_max"] = i_max;
    j["replicas"] = replicas;
    j["seed"] = seed;
    j["output_path"] = output_path;
    j["family"] = family;
    j["n0"] = n0;
    j["generations"] = generations;
    j["estimator"] = estimator;
    j["trajectory"] = trajectory;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    try {
        if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("beta")) c.beta = j.at("beta").get<double>();
        if (j.contains("theta") && !j.at("theta").is_null()) c.theta = j.at("theta").get<double>();
        if (j.contains("N")) c.N = j.at("N").get<std::int64_t>();
        if (j.contains("N_grid")) c.N_grid = j.at("N_grid").get<std::vector<std::int64_t>>();
        if (j.contains("i_max")) c.i_max = j.at("i_max").get<int>();
        if (j.contains("replicas")) c.replicas = j.at("replicas").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
        if (j.contains("family")) c.family = j.at("family").get<std::string>();
        if (j.contains("n0")) c.n0 = j.at("n0").get<int>();
        if (j.contains("generations")) c.generations = j.at("generations").get<int>();
        if (j.contains("estimator")) c.estimator = j.at("estimator").get<std::string>();
        if (j.contains("trajectory")) c.trajectory = j.at("trajectory").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config field: ") + e.what());
    }
    return c;
}

void validate(const ExperimentConfig& c) {
    require(std::isfinite(c.alpha) && std::isfinite(c.beta), "alpha and beta must be finite");
    switch (c.command) {
        case Command::Rates:
            checked_params(c);
            require(c.i_max >= 2, "i_max must be >= 2");
            require(c.alpha >= 1.0 || c.i_max <= 30, "i_max must be <= 30 for the xi matrix");
            break;
        case Command::XiMatrix:
            checked_params(c);
            require(c.alpha < 1.0, "xi-matrix needs alpha in [0, 1)");
            require(c.i_max >= 1 && c.i_max <= 30, "i_max must be in [1, 30]");
            break;
        case Command::FiniteMc:
            if (c.theta) {
                require(*c.theta > 0.0, "theta must be positive");
            } else {
                require(c.alpha > 0.0, "alpha must be positive");
                checked_params(c);
            }
            require(c.replicas >= 1000, "replicas must be >= 1000");
            for (auto n : grid_or(c, {c.N})) require(n >= 1, "N must be >= 1");
            break;
        case Command::ScalingFit:
            require(c.alpha > 0.0, "alpha must be positive");
            checked_params(c);
            require(grid_or(c, kDefaultGrid).size() >= 4, "N grid needs at least 4 points");
            for (auto n : grid_or(c, kDefaultGrid)) require(n >= 3, "grid values must be >= 3");
            require(c.replicas >= 1000, "replicas must be >= 1000");
            require(c.estimator == "conditional" || c.estimator == "occupancy",
                    "estimator must be conditional or occupancy");
            break;
        case Command::Simulate: {
            const std::string fam = resolved_family(c);
            require(fam == "kingman" || fam == "bs" || fam == "beta" || fam == "xi",
                    "family must be kingman, bs, beta, xi or auto");
            require(c.n0 >= 1, "n0 must be >= 1");
            require(c.replicas >= 2 || c.trajectory, "replicas must be >= 2");
            if (fam == "xi") {
                checked_params(c);
                require(c.alpha < 1.0, "xi family needs alpha in [0, 1)");
                require(c.n0 <= 30, "xi simulation needs n0 <= 30");
            }
            if (fam == "beta") {
                checked_params(c);
                require(c.alpha > 1.0 && c.alpha < 2.0, "beta family needs alpha in (1, 2)");
            }
            break;
        }
        case Command::Forward:
            require(c.alpha > 0.0, "alpha must be positive");
            require(c.N >= 2, "N must be >= 2");
            require(c.generations >= 1, "generations must be >= 1");
            break;
        case Command::Gclt:
            require(c.alpha > 0.0, "alpha must be positive");
            require(c.replicas >= 1000, "replicas must be >= 1000");
            for (auto n : grid_or(c, {c.N})) {
                require(n >= 1, "N must be >= 1");
                require(c.alpha != 2.0 || n >= 2, "alpha = 2 needs N >= 2");
            }
            break;
    }
}

std::string CommandOutput::text() const {
    std::string out = provenance;
    for (const auto& w : warnings) out += "# warning: " + w + "\n";
    return out + body;
}

CommandOutput run_command(const ExperimentConfig& config) {
    validate(config);
    CommandOutput out;
    out.provenance = "# seed=" + std::to_string(config.seed) + ", params=" + config.to_json().dump() +
                     ", version=" + version() + "\n";
    switch (config.command) {
        case Command::Rates: out.body = body_rates(config); break;
        case Command::XiMatrix: {
            std::ostringstream os;
            xi_transition_matrix(checked_params(config), config.i_max).write_csv(os);
            out.body = os.str();
            break;
        }
        case Command::FiniteMc: out.body = body_finite_mc(config, out.warnings); break;
        case Command::ScalingFit: out.body = body_scaling_fit(config, out.warnings); break;
        case Command::Simulate: out.body = body_simulate(config); break;
        case Command::Forward: out.body = body_forward(config); break;
        case Command::Gclt: out.body = body_gclt(config); break;
    }
    return out;
}

}  // namespace pcoal
