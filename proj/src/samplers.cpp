#include "pcoal/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pcoal/estimate.hpp"
#include "pcoal/parallel.hpp"
#include "pcoal/specfun.hpp"

namespace pcoal {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

}  // namespace

double pareto_from_uniform(double alpha, double u) { return std::exp(-std::log(u) / alpha); }

double pareto_sample(double alpha, RngStream& rng) {
    require_positive(alpha, "alpha");
    return pareto_from_uniform(alpha, rng.uniform_open());
}

double gamma_sample(double theta, RngStream& rng) {
    require_positive(theta, "theta");
    std::gamma_distribution<double> dist(theta, 1.0);
    return dist(rng);
}

std::vector<double> poisson_arrivals(int count, RngStream& rng) {
    if (count < 1) throw std::invalid_argument("poisson_arrivals: count must be >= 1");
    std::vector<double> tau(static_cast<std::size_t>(count));
    double t = 0.0;
    for (auto& point : tau) {
        t += rng.exponential();
        point = t;
    }
    return tau;
}

double frechet_from_arrival(double alpha, double tau) { return std::exp(-std::log(tau) / alpha); }

double frechet_sample(double alpha, RngStream& rng) {
    require_positive(alpha, "alpha");
    return frechet_from_arrival(alpha, rng.exponential());
}

std::string to_string(StableRegime regime) {
    switch (regime) {
        case StableRegime::OneSided: return "stable(0,1)";
        case StableRegime::Cauchy: return "cauchy(1)";
        case StableRegime::Skewed: return "stable(1,2)";
        case StableRegime::Critical: return "critical(2)";
        case StableRegime::Normal: return "normal(>2)";
    }
    return "unknown";
}

GcltConstants gclt_constants(double alpha, std::int64_t N) {
    require_positive(alpha, "alpha");
    if (N < 1) throw std::invalid_argument("gclt_constants: N must be >= 1");
    const double n = static_cast<double>(N);
    const double mu = alpha / (alpha - 1.0);
    GcltConstants out{};
    if (alpha == 1.0) {
        out.regime = StableRegime::Cauchy;
        out.c_alpha = std::numbers::pi / 2.0;
        out.scaling = out.c_alpha * n;
        out.centering = n * std::log(n) + n * (1.0 - kEulerGamma - std::log(2.0 / std::numbers::pi));
    } else if (alpha == 2.0) {
        if (N < 2) throw std::invalid_argument("gclt_constants: alpha = 2 needs N >= 2 (b_N = sqrt(N ln N))");
        out.regime = StableRegime::Critical;
        out.c_alpha = 1.0;  // b_N = (N ln N)^{1/2} carries no separate constant
        out.scaling = std::sqrt(n * std::log(n));
        out.centering = n * mu;
    } else if (alpha > 2.0) {
        out.regime = StableRegime::Normal;
        out.c_alpha = std::sqrt(alpha / (alpha - 2.0) - mu * mu);
        out.scaling = out.c_alpha * std::sqrt(n);
        out.centering = n * mu;
    } else {
        // Γ(1-α) cos(πα/2) is positive on (0,1) and on (1,2).
        const SignedLog g = log_abs_gamma(1.0 - alpha);
        const double cosine = std::cos(std::numbers::pi * alpha / 2.0);
        const double base = g.sign * std::exp(g.log_abs) * cosine;
        out.c_alpha = std::pow(base, 1.0 / alpha);
        out.scaling = out.c_alpha * std::pow(n, 1.0 / alpha);
        if (alpha < 1.0) {
            out.regime = StableRegime::OneSided;
            out.centering = 0.0;
        } else {
            out.regime = StableRegime::Skewed;
            out.centering = n * mu;
        }
    }
    return out;
}

std::vector<double> pareto_partial_sums(double alpha, std::int64_t N, int replicas, std::uint64_t seed) {
    require_positive(alpha, "alpha");
    if (N < 1 || replicas < 1) throw std::invalid_argument("pareto_partial_sums: need N >= 1 and replicas >= 1");
    std::vector<double> sums(static_cast<std::size_t>(replicas));
    parallel_for(block_count(sums.size()), [&](std::size_t b) {
        const std::size_t first = b * kReplicaBlock;
        const std::size_t last = std::min(sums.size(), first + kReplicaBlock);
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            double total = 0.0;
            for (std::int64_t n = 0; n < N; ++n) total += pareto_from_uniform(alpha, rng.uniform_open());
            sums[r] = total;
        }
    });
    return sums;
}

double empirical_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

SumStats standardized_sum_stats(double alpha, std::int64_t N, int replicas, std::uint64_t seed) {
    if (replicas < 1000) throw std::invalid_argument("standardized_sum_stats: replicas must be >= 1000");
    const GcltConstants k = gclt_constants(alpha, N);
    std::vector<double> z = pareto_partial_sums(alpha, N, replicas, seed);
    for (auto& v : z) v = (v - k.centering) / k.scaling;

    RatioAccumulator acc;
    for (double v : z) acc.add(v, 1.0);
    const WeightedEstimate mean = acc.finish();
    double ss = 0.0;
    for (double v : z) ss += (v - mean.value) * (v - mean.value);

    SumStats out{};
    out.replicas = replicas;
    out.mean = mean.value;
    out.mean_stderr = mean.std_error;
    out.variance = replicas > 1 ? ss / (replicas - 1) : 0.0;
    std::sort(z.begin(), z.end());
    out.q05 = empirical_quantile(z, 0.05);
    out.median = empirical_quantile(z, 0.5);
    out.q95 = empirical_quantile(z, 0.95);
    return out;
}

}  // namespace pcoal
