// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pcoal/coalescent_sim.hpp"
#include "pcoal/finite_coalescent.hpp"
#include "pcoal/forward_model.hpp"
#include "pcoal/harness.hpp"
#include "pcoal/limit_rates.hpp"
#include "pcoal/parallel.hpp"
#include "pcoal/samplers.hpp"
#include "pcoal/scaling_fit.hpp"
#include "pcoal/specfun.hpp"
#include "rate_oracle.hpp"

using namespace pcoal;

namespace {

struct Report {
    bool ok = true;
    std::ostringstream detail;

    void check(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

bool within(double value, double target, double tol) { return std::fabs(value - target) <= tol; }

double combined(const WeightedEstimate& a, const WeightedEstimate& b) { return std::hypot(a.std_error, b.std_error); }

struct Moments {
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    void add(double x) {
        sum += x;
        sum2 += x * x;
        ++n;
    }
    double mean() const { return sum / n; }
    double se() const { return std::sqrt(std::max(0.0, sum2 / n - mean() * mean()) / (n - 1)); }
};

void criterion1(Report& r) {
    double worst = 0.0, worst_leading = 0.0;
    for (double theta : {0.5, 1.0, 2.0})
        for (std::int64_t N : {10, 100, 1000}) {
            const auto e = estimate_c_N(PartitionModel::gamma(theta, N), 100000, derive_seed(101, N * 10 + theta * 2));
            const double z = (e.value - gamma_family_c_N(theta, N)) / e.std_error;
            const double z_leading = (e.value - gamma_family_c_N_leading(theta, N)) / e.std_error;
            worst = std::max(worst, std::fabs(z));
            worst_leading = std::max(worst_leading, std::fabs(z_leading));
            r.check(std::fabs(z) <= 3.0, "theta=" + std::to_string(theta) + " N=" + std::to_string(N));
        }
    r.detail << "max |z| vs exact (1+θ)/(Nθ+1) = " << worst << "; vs leading order (1+θ)/(θN) = " << worst_leading;
}

void criterion2(Report& r) {
    const auto mc = estimate_transition_rows(PartitionModel::pareto(0.5, 10000), 5, 50000, 201);
    const auto exact = xi_transition_matrix({0.5, 0.0}, 5);
    double worst = 0.0;
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= i; ++j) {
            const auto& e = mc.at(i, j);
            const double gap = std::fabs(e.value - exact.at(i, j));
            worst = std::max(worst, gap);
            r.check(gap <= std::max(3.0 * e.std_error, 0.01), "P(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    r.detail << "max |MC - exact| over i <= 5 = " << worst;
}

void criterion3(Report& r) {
    const Params pairs[] = {{0.5, 0.0}, {0.5, -1.0}, {0.8, 0.4}};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& p = pairs[k];
        const auto e = estimate_c_N(PartitionModel::pareto(p.alpha, 10000, p.beta), 20000, derive_seed(301, k));
        const double target = (1.0 - p.alpha) / (1.0 - p.beta);
        r.detail << "(" << p.alpha << "," << p.beta << "): " << e.value << " vs " << target << "; ";
        r.check(within(e.value, target, 0.02), "c_inf");
    }
}

void criterion4(Report& r) {
    const std::vector<std::int64_t> grid = {100, 316, 1000, 3162, 10000};
    std::uint64_t seed = 401;
    for (double alpha : {1.25, 1.5, 1.75}) {
        const auto fit = scaling_fit({alpha, 0.0}, grid, 2000, seed++);
        r.detail << "α=" << alpha << " slope " << fit.slope << " (target " << -(alpha - 1.0) << "); ";
        r.check(within(fit.slope, -(alpha - 1.0), 0.07), "beta slope");
    }
    const auto three = scaling_fit({3.0, 0.0}, grid, 2000, seed++);
    r.detail << "α=3 slope " << three.slope << ", prefactor " << three.prefactor << " (target 4/3); ";
    r.check(within(three.slope, -1.0, 0.05), "alpha 3 slope");
    r.check(std::fabs(three.prefactor / (4.0 / 3.0) - 1.0) <= 0.15, "alpha 3 prefactor");

    const double L = std::log(1e5);
    const auto bs = estimate_c_N_conditional(PartitionModel::pareto(1.0, 100000), 2000, seed++);
    r.detail << "α=1 c·lnN " << bs.value * L << "; ";
    r.check(bs.value * L >= 0.7 && bs.value * L <= 1.3, "alpha 1");
    const auto crit = estimate_c_N_conditional(PartitionModel::pareto(2.0, 100000), 2000, seed++);
    r.detail << "α=2 c·N/lnN " << crit.value * 1e5 / L;
    r.check(crit.value * 1e5 / L >= 0.35 && crit.value * 1e5 / L <= 0.7, "alpha 2");
}

void criterion5(Report& r) {
    const Params pairs[] = {{1.0, 0.0}, {1.0, -1.0}, {1.25, 0.0}, {1.5, 0.0}, {1.5, 0.75}, {1.75, -1.0}};
    double quad = 0.0, loss = 0.0, moment = 0.0, rows = 0.0;
    for (const auto& p : pairs)
        for (int i = 2; i <= 10; ++i) {
            for (int j = 1; j < i; ++j) {
                const double v = lambda_rate(p, i, j);
                quad = std::max(quad, std::fabs(v - oracle::quad_lambda_ij(p, i, j)) / std::max(1.0, v));
                double s = 0.0;
                for (int l = 0; l <= j - 1; ++l)
                    s += ((l % 2) ? -1.0 : 1.0) * oracle::binom(j - 1, l) * lambda_rate(p, i - j + 1 + l, 1);
                moment = std::max(moment, std::fabs(oracle::binom(i, j - 1) * s - v) / std::max(1.0, v));
            }
            const double lam = total_rate(p, i), ri = block_loss_rate(p, i), eu = mean_first_collision_size(p, i);
            quad = std::max(quad, std::fabs(lam - oracle::quad_total(p, i)) / std::max(1.0, lam));
            quad = std::max(quad, std::fabs(ri - oracle::quad_block_loss(p, i)) / std::max(1.0, ri));
            quad = std::max(quad, std::fabs(eu - oracle::quad_mean_collision(p, i)));
            loss = std::max(loss, std::fabs(ri - lam * (eu - 1.0)) / std::max(1.0, ri));
        }
    for (double a : {0.1, 0.5, 0.9})
        for (double b : {0.0, -1.0, 0.5 * a}) {
            const auto t = xi_transition_matrix({a, b}, 12);
            for (int i = 1; i <= 12; ++i) rows = std::max(rows, std::fabs(t.total(i) - 1.0));
        }
    for (double b : {-0.5, -1.0, -2.0}) {
        const auto t = stirling_case_matrix(b, 10);
        for (int i = 1; i <= 10; ++i) rows = std::max(rows, std::fabs(t.total(i) - 1.0));
    }
    r.detail << "quadrature " << quad << ", r = λ(EU-1) " << loss << ", moment form " << moment << ", row sums " << rows;
    r.check(quad <= 1e-8, "quadrature");
    r.check(loss <= 1e-10, "block loss identity");
    r.check(moment <= 1e-9, "moment form");
    r.check(rows <= 1e-10, "row sums");
}

void criterion6(Report& r) {
    const auto kernel = JumpKernel::from_params({3.0, 0.0}, 100);
    Moments height, external;
    bool collisions_exact = true;
    for (int k = 0; k < 100000; ++k) {
        RngStream a(601, k), b(602, k);
        const auto small = simulate_lambda(kernel, 20, a);
        const auto large = simulate_lambda(kernel, 100, b);
        height.add(small.functionals.height);
        external.add(large.functionals.external_length);
        collisions_exact = collisions_exact && small.functionals.collisions == 19 && large.functionals.collisions == 99;
    }
    r.detail << "mean τ_20 " << height.mean() << " ± " << height.se() << ", mean L^e_100 " << external.mean();
    r.check(std::fabs(height.mean() - 1.9) <= 3.0 * height.se(), "height");
    r.check(collisions_exact, "C = i - 1");
    r.check(std::fabs(external.mean() / 2.0 - 1.0) <= 0.15, "external length");
}

void criterion7(Report& r) {
    // Exact E C_i from tests/oracles/bs_collisions.py.
    const struct {
        int n, replicas;
        double exact;
    } sizes[] = {{1000, 2000, 184.95114966842627}, {10000, 400, 1297.8359899135883}};
    const auto kernel = JumpKernel::from_params({1.0, 0.0}, 10000);
    double ratio[2];
    for (int s = 0; s < 2; ++s) {
        Moments c;
        for (int k = 0; k < sizes[s].replicas; ++k) {
            RngStream rng(701 + s, k);
            c.add(static_cast<double>(simulate_lambda(kernel, sizes[s].n, rng).functionals.collisions));
        }
        const double scale = sizes[s].n / std::log(static_cast<double>(sizes[s].n));
        ratio[s] = c.mean() / scale;
        r.detail << "i=" << sizes[s].n << " C/(i/ln i) " << ratio[s] << " ± " << c.se() / scale << " (exact "
                 << sizes[s].exact / scale << "); ";
        r.check(ratio[s] >= 0.6 && ratio[s] <= 1.4, "ratio band");
        r.check(std::fabs(c.mean() - sizes[s].exact) <= 3.0 * c.se(), "exact mean");
    }
    r.check(std::fabs(ratio[1] - 1.0) < std::fabs(ratio[0] - 1.0), "trend toward 1");
}

void criterion8(Report& r) {
    const auto s = standardized_sum_stats(3.0, 10000, 10000, 801);
    r.detail << "α=3 mean " << s.mean << " ± " << s.mean_stderr << ", variance " << s.variance << "; ";
    r.check(std::fabs(s.mean) <= 3.0 * s.mean_stderr, "normal mean");
    r.check(std::fabs(s.variance - 1.0) <= 0.05, "normal variance");
    // Median of Σ_N grows like N^{1/α} = N².
    std::vector<double> x, y;
    for (std::int64_t N : {10, 100, 1000, 10000}) {
        const auto sums = pareto_partial_sums(0.5, N, 10000, derive_seed(802, N));
        x.push_back(std::log(static_cast<double>(N)));
        y.push_back(std::log(empirical_quantile(sums, 0.5)));
    }
    const double mx = (x[0] + x[1] + x[2] + x[3]) / 4.0, my = (y[0] + y[1] + y[2] + y[3]) / 4.0;
    double sxy = 0.0, sxx = 0.0;
    for (int k = 0; k < 4; ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    const double exponent = sxy / sxx;
    r.detail << "α=0.5 median exponent " << exponent << " (target 2)";
    r.check(std::fabs(exponent / 2.0 - 1.0) <= 0.15, "median exponent");
}

void criterion9(Report& r) {
    std::uint64_t seed = 901;
    for (std::int64_t N : {100, 10000}) {
        WeightedEstimate speeds[2];
        for (int a = 0; a < 2; ++a) {
            const double alpha = a + 1.0;
            speeds[a] = speed_estimate({N, alpha, 100, {}}, 200, seed);
            const auto direct = mean_log_power_sum(N, alpha, 10000, seed + 1);
            const double target = (-digamma(N + 1.0) + direct.value) / alpha;
            const double tol = 3.0 * std::hypot(speeds[a].std_error, direct.std_error / alpha);
            r.detail << "N=" << N << " α=" << alpha << " speed " << speeds[a].value << " vs " << target << "; ";
            r.check(std::fabs(speeds[a].value - target) <= tol, "speed oracle");
        }
        r.check(std::fabs(speeds[1].value - 0.5 * speeds[0].value) <= std::hypot(speeds[1].std_error, 0.5 * speeds[0].std_error),
                "alpha proportionality");
        seed += 2;
    }
    const auto m = holder_moment_identity({100, 1.0, 1, {}}, 0.5, 3, 100000, seed++);
    r.detail << "moment identity " << m.direct.value << " vs " << m.factored.value << "; ";
    r.check(std::fabs(m.direct.value - m.factored.value) <= 3.0 * combined(m.direct, m.factored), "moment identity");
    const auto f = fittest_stats({100, 2.0, 1, {}}, 200000, seed++);
    r.detail << "Fréchet median " << f.median << ", mean " << f.mean;
    r.check(std::fabs(f.median - 1.0 / std::sqrt(std::log(2.0))) <= 3.0 * f.median_stderr, "Fréchet median");
    r.check(std::fabs(f.mean - std::sqrt(std::numbers::pi)) <= 3.0 * f.mean_stderr, "Fréchet mean");
}

void criterion10(Report& r) {
    const std::int64_t N = 100;
    const int R = 50000;
    const auto reference = estimate_c_N(PartitionModel::pareto(1.0, N), R, 1001);
    for (double alpha : {0.7, 1.5}) {
        const auto plain = estimate_c_N_from_source(ancestor_segment_source({N, alpha, 1, {}}, SamplingMode::Plain), R,
                                                    derive_seed(1002, static_cast<std::uint64_t>(alpha * 10)));
        r.detail << "plain α=" << alpha << " " << plain.value << " vs " << reference.value << "; ";
        r.check(std::fabs(plain.value - reference.value) <= 3.0 * combined(plain, reference), "plain mode");
    }
    const auto distorted =
        estimate_c_N_from_source(ancestor_segment_source({N, 1.5, 1, {}}, SamplingMode::Distorted), R, 1003);
    const auto target = estimate_c_N(PartitionModel::pareto(1.5, N), R, 1004);
    r.detail << "distorted " << distorted.value << " vs " << target.value;
    r.check(std::fabs(distorted.value - target.value) <= 3.0 * combined(distorted, target), "distorted mode");
}

void criterion11(Report& r) {
    std::vector<ExperimentConfig> configs;
    auto add = [&](Command c, auto&& edit) {
        ExperimentConfig cfg;
        cfg.command = c;
        cfg.seed = 1101;
        edit(cfg);
        configs.push_back(cfg);
    };
    add(Command::FiniteMc, [](ExperimentConfig& c) { c.alpha = 1.5; c.beta = 0.5; c.N_grid = {50, 500}; c.replicas = 5000; });
    add(Command::FiniteMc, [](ExperimentConfig& c) { c.theta = 1.0; c.replicas = 5000; });
    add(Command::ScalingFit, [](ExperimentConfig& c) { c.alpha = 1.5; c.N_grid = {100, 316, 1000, 3162}; c.replicas = 1000; });
    add(Command::Simulate, [](ExperimentConfig& c) { c.family = "bs"; c.n0 = 200; c.replicas = 500; });
    add(Command::Simulate, [](ExperimentConfig& c) { c.alpha = 0.5; c.n0 = 20; c.replicas = 2000; });
    add(Command::Forward, [](ExperimentConfig& c) { c.N = 100; c.generations = 50; });
    add(Command::Gclt, [](ExperimentConfig& c) { c.alpha = 1.5; c.N = 1000; c.replicas = 2000; });
    const int workers = worker_count();
    int identical = 0;
    for (const auto& cfg : configs) {
        set_worker_count(1);
        const std::string a = run_command(cfg).body;
        set_worker_count(std::max(2, workers));
        const std::string b = run_command(cfg).body;
        const std::string c = run_command(cfg).body;
        if (a == b && b == c) ++identical;
        r.check(a == b && b == c, to_string(cfg.command));
    }
    set_worker_count(workers);
    r.detail << identical << "/" << configs.size() << " CSV bodies byte-identical across reruns and worker counts";
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Report&)>>> criteria = {
        {"gamma oracle", criterion1},          {"xi-limit agreement", criterion2},
        {"c_inf limit", criterion3},           {"scaling exponents", criterion4},
        {"rate algebra", criterion5},          {"kingman functionals", criterion6},
        {"bolthausen-sznitman trends", criterion7}, {"gclt regimes", criterion8},
        {"forward model", criterion9},         {"genealogy correspondence", criterion10},
        {"determinism", criterion11},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Report report;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[k].second(report);
        } catch (const std::exception& e) {
            report.ok = false;
            report.detail << " [exception: " << e.what() << "]";
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !report.ok;
        std::printf("%s criterion %zu (%s): %s (%.1f s)\n", report.ok ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    report.detail.str().c_str(), seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
