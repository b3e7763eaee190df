// pcoal: command-line front end for the coalescent library.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pcoal/harness.hpp"

namespace {

struct Flags {
    std::string config_path;
    double alpha = 0.0, beta = 0.0, theta = 0.0;
    std::int64_t N = 0;
    std::vector<std::int64_t> N_grid;
    int i_max = 0, replicas = 0, n0 = 0, generations = 0;
    std::uint64_t seed = 0;
    std::string out, format = "csv", family, estimator;
    bool trajectory = false;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pareto-partition coalescents, their limits, and the forward selection model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pcoal::version());

    Flags f;
    std::map<std::string, CLI::Option*> opts;
    const char* names[] = {"rates", "xi-matrix", "finite-mc", "scaling-fit", "simulate", "forward", "gclt"};
    std::vector<CLI::App*> subs;
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        subs.push_back(sub);
        sub->add_option("--config", f.config_path, "JSON experiment config; flags override its fields");
        sub->add_option("--alpha", f.alpha);
        sub->add_option("--beta", f.beta);
        sub->add_option("--theta", f.theta, "finite-mc: use the gamma(theta) partition");
        sub->add_option("--N", f.N);
        sub->add_option("--N-grid", f.N_grid)->delimiter(',');
        sub->add_option("--i-max", f.i_max);
        sub->add_option("--replicas", f.replicas);
        sub->add_option("--seed", f.seed);
        sub->add_option("--out", f.out);
        sub->add_option("--format", f.format)->check(CLI::IsMember({"csv"}));
        sub->add_option("--family", f.family, "simulate: kingman | bs | beta | xi | auto");
        sub->add_option("--n0", f.n0);
        sub->add_option("--generations", f.generations);
        sub->add_option("--estimator", f.estimator, "scaling-fit: conditional | occupancy");
        sub->add_flag("--trajectory", f.trajectory, "simulate: dump one trajectory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pcoal::kExitInvalid;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        pcoal::ExperimentConfig config;
        if (!f.config_path.empty()) {
            std::ifstream in(f.config_path);
            if (!in) throw pcoal::ConfigError("cannot read config " + f.config_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw pcoal::ConfigError(std::string("invalid JSON: ") + e.what());
            }
            config = pcoal::ExperimentConfig::from_json(j);
        }
        config.command = pcoal::parse_command(sub->get_name());
        auto given = [&](const char* flag) { return sub->count(flag) > 0; };
        if (given("--alpha")) config.alpha = f.alpha;
        if (given("--beta")) config.beta = f.beta;
        if (given("--theta")) config.theta = f.theta;
        if (given("--N")) config.N = f.N;
        if (given("--N-grid")) config.N_grid = f.N_grid;
        if (given("--i-max")) config.i_max = f.i_max;
        if (given("--replicas")) config.replicas = f.replicas;
        if (given("--seed")) config.seed = f.seed;
        if (given("--out")) config.output_path = f.out;
        if (given("--family")) config.family = f.family;
        if (given("--n0")) config.n0 = f.n0;
        if (given("--generations")) config.generations = f.generations;
        if (given("--estimator")) config.estimator = f.estimator;
        if (given("--trajectory")) config.trajectory = f.trajectory;

        const pcoal::CommandOutput result = pcoal::run_command(config);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        if (config.output_path.empty()) {
            std::cout << result.text();
        } else {
            std::ofstream out(config.output_path);
            if (!out) throw std::runtime_error("cannot write " + config.output_path);
            out << result.text();
        }
        return pcoal::kExitOk;
    } catch (const pcoal::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pcoal::kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pcoal::kExitFailure;
    }
}
