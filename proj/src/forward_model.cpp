#include "pcoal/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "pcoal/parallel.hpp"
#include "pcoal/samplers.hpp"
#include "pcoal/specfun.hpp"

namespace pcoal {

void ForwardConfig::validate() const {
    if (N < 2) throw std::invalid_argument("forward model: N must be >= 2");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("forward model: alpha must be positive");
    if (generations < 1) throw std::invalid_argument("forward model: generations must be >= 1");
    if (!initial_fitnesses.empty()) {
        if (static_cast<std::int64_t>(initial_fitnesses.size()) != N)
            throw std::invalid_argument("forward model: need N initial fitnesses");
        for (double x : initial_fitnesses)
            if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("forward model: fitnesses must be positive");
    }
}

namespace {

double log_sum_exp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// Arrivals τ_1..τ_{N+1}; the state update only needs these.
void draw_arrivals(std::int64_t N, RngStream& rng, std::vector<double>& tau) {
    tau.resize(static_cast<std::size_t>(N) + 1);
    double t = 0.0;
    for (auto& x : tau) {
        t += rng.exponential();
        x = t;
    }
}

}  // namespace

ForwardState initial_state(const ForwardConfig& config) {
    config.validate();
    ForwardState s;
    const double n = static_cast<double>(config.N);
    if (config.initial_fitnesses.empty()) {
        s.log_global = std::log(n) / config.alpha;
        s.log_fittest = 0.0;
    } else {
        std::vector<double> scaled;
        scaled.reserve(config.initial_fitnesses.size());
        for (double x : config.initial_fitnesses) scaled.push_back(config.alpha * std::log(x));
        s.log_global = log_sum_exp(scaled) / config.alpha;
        s.log_fittest = std::log(*std::max_element(config.initial_fitnesses.begin(), config.initial_fitnesses.end()));
    }
    s.log_holder_mean = s.log_global - std::log(n) / config.alpha;
    return s;
}

ForwardState step(const ForwardState& state, const ForwardConfig& config, RngStream& rng, StepMode mode) {
    std::vector<double> tau;
    draw_arrivals(config.N, rng, tau);
    const double inv_alpha = 1.0 / config.alpha;
    const double tau_last = tau.back();
    ForwardState next = state;
    next.k = state.k + 1;
    if (mode == StepMode::Recursion) {
        double power_sum = 0.0;  // Σ X_n^α with X_n^α = τ_{N+1}/τ_n
        for (std::int64_t n = 0; n < config.N; ++n) power_sum += tau_last / tau[static_cast<std::size_t>(n)];
        const double increment = -inv_alpha * std::log(tau_last) + inv_alpha * std::log(power_sum);
        next.log_global = state.log_global + increment;
    } else {
        // ln x_(n) = ln x_{N,α}(k) - ln τ_n / α, then ln x_{N,α}(k+1) = (1/α) ln Σ x_(n)^α.
        std::vector<double> scaled(static_cast<std::size_t>(config.N));
        for (std::size_t n = 0; n < scaled.size(); ++n)
            scaled[n] = config.alpha * (state.log_global - inv_alpha * std::log(tau[n]));
        next.log_global = log_sum_exp(scaled) * inv_alpha;
    }
    next.log_increments.push_back(next.log_global - state.log_global);
    next.log_holder_mean = next.log_global - std::log(static_cast<double>(config.N)) * inv_alpha;
    next.log_fittest = state.log_global - inv_alpha * std::log(tau.front());
    return next;
}

std::vector<ForwardState> simulate_forward(const ForwardConfig& config, RngStream& rng, StepMode mode) {
    std::vector<ForwardState> states{initial_state(config)};
    states.reserve(static_cast<std::size_t>(config.generations) + 1);
    // Increments are moved forward so only the last state holds the full history;
    // keeping a copy in every state would be quadratic in the number of generations.
    for (int k = 0; k < config.generations; ++k) {
        ForwardState next = step(states.back(), config, rng, mode);
        states.back().log_increments.clear();
        states.back().log_increments.shrink_to_fit();
        states.push_back(std::move(next));
    }
    return states;
}

void write_forward_csv(std::ostream& os, const std::vector<ForwardState>& states) {
    os << "k,log_global,log_holder_mean,log_fittest\n";
    const auto old = os.precision(12);
    for (const auto& s : states)
        os << s.k << ',' << s.log_global << ',' << s.log_holder_mean << ',' << s.log_fittest << '\n';
    os.precision(old);
}

WeightedEstimate speed_estimate(const ForwardConfig& config, int replicas, std::uint64_t seed) {
    config.validate();
    if (config.generations < 100) throw std::invalid_argument("speed_estimate: generations must be >= 100");
    if (replicas < 2) throw std::invalid_argument("speed_estimate: replicas must be >= 2");
    const ForwardState start = initial_state(config);
    auto block = [&](std::size_t first, std::size_t last) {
        RatioAccumulator acc;
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            ForwardState s = start;
            for (int k = 0; k < config.generations; ++k) {
                s = step(s, config, rng);
                s.log_increments.clear();
            }
            acc.add(s.log_holder_mean / config.generations, 1.0);
        }
        return acc;
    };
    return reduce_replicas<RatioAccumulator>(static_cast<std::size_t>(replicas), block,
                                             std::plus<RatioAccumulator>(), RatioAccumulator{})
        .finish();
}

WeightedEstimate mean_log_power_sum(std::int64_t N, double alpha, int replicas, std::uint64_t seed) {
    if (N < 1 || !(alpha > 0.0) || replicas < 2) throw std::invalid_argument("mean_log_power_sum: bad arguments");
    auto block = [&](std::size_t first, std::size_t last) {
        RatioAccumulator acc;
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            double s = 0.0;
            for (std::int64_t n = 0; n < N; ++n) s += std::pow(pareto_from_uniform(alpha, rng.uniform_open()), alpha);
            acc.add(std::log(s), 1.0);
        }
        return acc;
    };
    return reduce_replicas<RatioAccumulator>(static_cast<std::size_t>(replicas), block,
                                             std::plus<RatioAccumulator>(), RatioAccumulator{})
        .finish();
}

double pressure(double alpha, std::int64_t N, double beta) {
    if (!(alpha > 0.0) || N < 3) throw std::domain_error("pressure: need alpha > 0 and N >= 3");
    if (!(beta < alpha)) throw std::domain_error("pressure: beta < alpha required");
    const double L = std::log(static_cast<double>(N));
    const double LL = std::log(L);
    return -(beta / alpha) * LL - (beta / (alpha * L)) * (digamma(1.0 - beta / alpha) - LL - 1.0);
}

double pressure_derivative(double alpha, std::int64_t N, double beta, double h) {
    return (pressure(alpha, N, beta + h) - pressure(alpha, N, beta - h)) / (2.0 * h);
}

LegendreResult legendre(double alpha, std::int64_t N, double a) {
    double lo = -50.0, hi = alpha - 1e-6;
    auto g = [&](double b) { return a * b - pressure(alpha, N, b); };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    while (hi - lo > 1e-8) {
        if (g1 > g2) {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = g(x2);
        }
    }
    const double b = 0.5 * (lo + hi);
    if (b < -50.0 + 1e-6 || b > alpha - 1e-6 - 1e-6)
        throw std::domain_error("legendre: optimum not bracketed in [-50, alpha); a is outside the range of F_N'");
    return {g(b), b};
}

FittestStats fittest_stats(const ForwardConfig& config, int replicas, std::uint64_t seed) {
    config.validate();
    if (replicas < 2) throw std::invalid_argument("fittest_stats: replicas must be >= 2");
    const ForwardState start = initial_state(config);
    std::vector<double> ratio(static_cast<std::size_t>(replicas));
    parallel_for(block_count(ratio.size()), [&](std::size_t b) {
        const std::size_t first = b * kReplicaBlock;
        const std::size_t last = std::min(ratio.size(), first + kReplicaBlock);
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            const ForwardState next = step(start, config, rng);
            ratio[r] = std::exp(next.log_fittest - start.log_global);
        }
    });
    FittestStats out{};
    out.replicas = replicas;
    out.mean_available = config.alpha > 1.0;
    if (out.mean_available) {
        RatioAccumulator acc;
        for (double v : ratio) acc.add(v, 1.0);
        const WeightedEstimate e = acc.finish();
        out.mean = e.value;
        out.mean_stderr = e.std_error;
    } else {
        out.mean = out.mean_stderr = std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(ratio.begin(), ratio.end());
    const double band = 0.5 / std::sqrt(static_cast<double>(replicas));
    out.median = empirical_quantile(ratio, 0.5);
    out.median_stderr = 0.5 * (empirical_quantile(ratio, 0.5 + band) - empirical_quantile(ratio, 0.5 - band));
    return out;
}

std::vector<double> ancestor_sampling_probs(const ForwardConfig& config, SamplingMode mode, RngStream& rng) {
    config.validate();
    std::vector<double> tau;
    draw_arrivals(config.N, rng, tau);
    std::vector<double> p(static_cast<std::size_t>(config.N));
    const double tau_last = tau.back();
    double total = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double x_pow_alpha = tau_last / tau[n];
        p[n] = mode == SamplingMode::Plain ? x_pow_alpha : std::pow(x_pow_alpha, 1.0 / config.alpha);
        total += p[n];
    }
    for (auto& v : p) v /= total;
    return p;
}

SegmentSource ancestor_segment_source(const ForwardConfig& config, SamplingMode mode) {
    config.validate();
    return [config, mode](RngStream& rng, std::vector<double>& sizes) {
        sizes = ancestor_sampling_probs(config, mode, rng);
    };
}

double power_gamma_moment(std::int64_t N, double alpha, double beta) {
    const double n1 = static_cast<double>(N) + 1.0;
    if (!(n1 - beta / alpha > 0.0)) throw std::domain_error("power_gamma_moment: need N + 1 > beta / alpha");
    return std::exp(log_gamma(n1 - beta / alpha) - log_gamma(n1));
}

MomentIdentity holder_moment_identity(const ForwardConfig& config, double beta, int k, int replicas,
                                      std::uint64_t seed) {
    config.validate();
    if (k < 1 || replicas < 2) throw std::invalid_argument("holder_moment_identity: need k >= 1 and replicas >= 2");
    const ForwardState start = initial_state(config);
    const double inv_alpha = 1.0 / config.alpha;

    auto run = [&](auto&& sample, std::uint64_t stream_seed) {
        auto block = [&](std::size_t first, std::size_t last) {
            RatioAccumulator acc;
            for (std::size_t r = first; r < last; ++r) {
                RngStream rng(stream_seed, r);
                acc.add(sample(rng), 1.0);
            }
            return acc;
        };
        return reduce_replicas<RatioAccumulator>(static_cast<std::size_t>(replicas), block,
                                                 std::plus<RatioAccumulator>(), RatioAccumulator{})
            .finish();
    };

    MomentIdentity out;
    out.direct = run(
        [&](RngStream& rng) {
            ForwardState s = start;
            for (int g = 0; g < k; ++g) s = step(s, config, rng);
            return std::exp(beta * s.log_holder_mean);
        },
        derive_seed(seed, 1));
    // Independent samplers: x* from a gamma(N+1) variate, Σ X^α from inverse-CDF Pareto draws.
    const WeightedEstimate star = run(
        [&](RngStream& rng) {
            return std::exp(-beta * inv_alpha * std::log(gamma_sample(static_cast<double>(config.N) + 1.0, rng)));
        },
        derive_seed(seed, 2));
    const WeightedEstimate sums = run(
        [&](RngStream& rng) {
            double s = 0.0;
            for (std::int64_t n = 0; n < config.N; ++n) s += std::pow(pareto_from_uniform(config.alpha, rng.uniform_open()), config.alpha);
            return std::exp(beta * inv_alpha * std::log(s));
        },
        derive_seed(seed, 3));
    WeightedEstimate factor = product(star, sums);
    WeightedEstimate power = factor;
    power.value = std::pow(factor.value, k);
    power.std_error = k * std::pow(factor.value, k - 1) * factor.std_error;
    const double c0 = std::exp(beta * start.log_holder_mean);
    power.value *= c0;
    power.std_error *= c0;
    out.factored = power;
    return out;
}

}  // namespace pcoal
