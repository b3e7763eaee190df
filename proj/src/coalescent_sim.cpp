#include "pcoal/coalescent_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "pcoal/estimate.hpp"
#include "pcoal/parallel.hpp"
#include "pcoal/specfun.hpp"

namespace pcoal {

JumpKernel JumpKernel::from_table(const RateTable& rates) {
    if (rates.kind() != TableKind::Rates) throw std::invalid_argument("JumpKernel: rates table required");
    JumpKernel k;
    k.mode_ = Mode::Dense;
    k.i_max_ = rates.i_max();
    k.totals_.assign(static_cast<std::size_t>(k.i_max_) + 1, 0.0);
    k.cumulative_.resize(static_cast<std::size_t>(k.i_max_) + 1);
    for (int i = 2; i <= k.i_max_; ++i) {
        auto& row = k.cumulative_[static_cast<std::size_t>(i)];
        double run = 0.0;
        for (int j = 1; j < i; ++j) {
            run += rates.at(i, j);
            row.push_back(run);
        }
        k.totals_[static_cast<std::size_t>(i)] = run;
    }
    return k;
}

JumpKernel JumpKernel::from_params(const Params& params, int i_max) {
    params.validate();
    if (params.alpha < 1.0) throw std::domain_error("JumpKernel: xi regime has no jump rates");
    if (i_max < 2) throw std::invalid_argument("JumpKernel: i_max must be >= 2");
    JumpKernel k;
    k.mode_ = params.kingman_limit() ? Mode::Kingman : Mode::Beta;
    k.i_max_ = i_max;
    k.params_ = params;
    k.totals_.assign(static_cast<std::size_t>(i_max) + 1, 0.0);
    for (int i = 2; i <= i_max; ++i) k.totals_[static_cast<std::size_t>(i)] = total_rate(params, i);
    return k;
}

int JumpKernel::sample_target(int i, RngStream& rng) const {
    const double target = rng.uniform_open() * total(i);
    switch (mode_) {
        case Mode::Kingman: return i - 1;
        case Mode::Dense: {
            const auto& row = cumulative_[static_cast<std::size_t>(i)];
            const auto it = std::upper_bound(row.begin(), row.end(), target);
            const int j = static_cast<int>(it - row.begin()) + 1;
            return std::min(j, i - 1);
        }
        case Mode::Beta: {
            // Walk merger sizes k = 2, 3, ... with the ratio recurrence; small k carry most mass.
            const double a = params_.alpha, b = params_.beta;
            double w = std::exp(log_binomial(i, 2) + log_beta(2.0 - a, i - 2 + a - b) - log_beta(2.0 - a, a - b));
            double run = 0.0;
            for (int k = 2; k <= i; ++k) {
                run += w;
                if (target < run) return i - k + 1;
                if (k < i) w *= (static_cast<double>(i - k) / (k + 1)) * ((k - a) / (i - k - 1 + a - b));
            }
            return 1;
        }
    }
    return i - 1;
}

LambdaRun simulate_lambda(const JumpKernel& kernel, int n0, RngStream& rng, std::int64_t max_events) {
    if (n0 < 1) throw std::invalid_argument("simulate_lambda: n0 must be >= 1");
    if (n0 > kernel.i_max()) throw std::invalid_argument("simulate_lambda: n0 exceeds the rate table");
    LambdaRun run;
    auto& f = run.functionals;
    auto& traj = run.trajectory;
    std::int64_t singletons = n0, others = 0;
    bool tagged_external = true;
    double t = 0.0;
    traj.states.push_back({0.0, n0});
    while (singletons + others > 1) {
        if (traj.events >= max_events) {
            traj.truncated = true;
            break;
        }
        const int i = static_cast<int>(singletons + others);
        const double hold = rng.exponential() / kernel.total(i);
        t += hold;
        f.total_length += i * hold;
        f.external_length += static_cast<double>(singletons) * hold;
        if (tagged_external) f.random_external_branch += hold;

        const int j = kernel.sample_target(i, rng);
        const int k = i - j + 1;
        // Hypergeometric count of singletons among the k merging blocks.
        std::int64_t s_left = singletons, n_left = i, hit = 0;
        for (int draw = 0; draw < k; ++draw) {
            if (rng.uniform_open() * static_cast<double>(n_left) < static_cast<double>(s_left)) {
                ++hit;
                --s_left;
            }
            --n_left;
        }
        if (tagged_external && hit > 0 && rng.uniform_open() * static_cast<double>(singletons) < static_cast<double>(hit))
            tagged_external = false;
        singletons -= hit;
        others = others - (k - hit) + 1;
        ++f.collisions;
        ++traj.events;
        traj.states.push_back({t, singletons + others});
    }
    f.height = t;
    return run;
}

LambdaRun simulate_lambda(const RateTable& rates, int n0, RngStream& rng, std::int64_t max_events) {
    return simulate_lambda(JumpKernel::from_table(rates), n0, rng, max_events);
}

XiRun simulate_xi(const RateTable& matrix, int n0, RngStream& rng, std::int64_t max_steps) {
    if (matrix.kind() != TableKind::Probabilities) throw std::invalid_argument("simulate_xi: probability matrix required");
    if (n0 < 1 || n0 > matrix.i_max()) throw std::invalid_argument("simulate_xi: n0 outside the matrix");
    XiRun run;
    auto& traj = run.trajectory;
    int i = n0;
    traj.states.push_back({0.0, i});
    while (i > 1) {
        if (run.steps >= max_steps) {
            traj.truncated = true;
            break;
        }
        const double target = rng.uniform_open() * matrix.total(i);
        double acc = 0.0;
        int j = i;
        for (int c = 1; c <= i; ++c) {
            acc += matrix.at(i, c);
            if (target < acc) {
                j = c;
                break;
            }
        }
        ++run.steps;
        if (j < i) ++run.collisions;
        i = j;
        traj.states.push_back({static_cast<double>(run.steps), i});
    }
    traj.events = run.steps;
    return run;
}

CoalescentFamily CoalescentFamily::kingman() { return {FamilyKind::Kingman, Params{3.0, 0.0}}; }
CoalescentFamily CoalescentFamily::bolthausen_sznitman() { return {FamilyKind::BolthausenSznitman, Params{1.0, 0.0}}; }
CoalescentFamily CoalescentFamily::beta(double alpha, double beta) {
    const Params p = Params::make(alpha, beta);
    if (!(alpha > 1.0 && alpha < 2.0)) throw std::domain_error("beta family needs alpha in (1, 2)");
    return {FamilyKind::Beta, p};
}

std::string CoalescentFamily::name() const {
    switch (kind) {
        case FamilyKind::Kingman: return "kingman";
        case FamilyKind::BolthausenSznitman: return "bs";
        case FamilyKind::Beta: return "beta(" + std::to_string(params.alpha) + "," + std::to_string(params.beta) + ")";
    }
    return "unknown";
}

namespace {

struct FunctionalSums {
    RatioAccumulator acc[5];
    FunctionalSums& operator+=(const FunctionalSums& o) {
        for (int q = 0; q < 5; ++q) acc[q] += o.acc[q];
        return *this;
    }
};

double reference_for(FamilyKind kind, double alpha, int n, int q) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double x = n;
    switch (kind) {
        case FamilyKind::Kingman: {
            const double refs[5] = {2.0 * (1.0 - 1.0 / x), 2.0 * std::log(x), 2.0, x - 1.0, 1.0 / x};
            return refs[q];
        }
        case FamilyKind::BolthausenSznitman: {
            const double refs[5] = {std::log(std::log(x)), x / std::log(x), nan, x / std::log(x), 1.0 / std::log(x)};
            return refs[q];
        }
        case FamilyKind::Beta: {
            const double refs[5] = {nan, std::pow(x, 2.0 - alpha), std::pow(x, 2.0 - alpha), nan, std::pow(x, 1.0 - alpha)};
            return refs[q];
        }
    }
    return nan;
}

}  // namespace

std::vector<FunctionalRow> functional_scaling_report(const CoalescentFamily& family, const std::vector<int>& sizes,
                                                     int replicas, std::uint64_t seed) {
    if (sizes.empty() || replicas < 2) throw std::invalid_argument("functional_scaling_report: need sizes and replicas >= 2");
    for (std::size_t s = 1; s < sizes.size(); ++s)
        if (sizes[s] <= sizes[s - 1]) throw std::invalid_argument("functional_scaling_report: sizes must increase");
    const JumpKernel kernel = JumpKernel::from_params(family.params, std::max(2, sizes.back()));
    static const char* names[5] = {"height", "total_length", "external_length", "collisions", "external_branch"};
    std::vector<FunctionalRow> rows;
    for (int n : sizes) {
        const std::uint64_t size_seed = seed + static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ULL;
        auto block = [&](std::size_t first, std::size_t last) {
            FunctionalSums sums;
            for (std::size_t r = first; r < last; ++r) {
                RngStream rng(size_seed, r);
                const auto f = simulate_lambda(kernel, n, rng).functionals;
                const double v[5] = {f.height, f.total_length, f.external_length, static_cast<double>(f.collisions),
                                     f.random_external_branch};
                for (int q = 0; q < 5; ++q) sums.acc[q].add(v[q], 1.0);
            }
            return sums;
        };
        const FunctionalSums total = reduce_replicas<FunctionalSums>(
            static_cast<std::size_t>(replicas), block, [](FunctionalSums a, const FunctionalSums& b) { return a += b; },
            FunctionalSums{});
        for (int q = 0; q < 5; ++q) {
            const WeightedEstimate e = total.acc[q].finish();
            const double ref = reference_for(family.kind, family.params.alpha, n, q);
            rows.push_back({family.name(), n, names[q], e.value, e.std_error, ref, e.value / ref});
        }
    }
    return rows;
}

void write_functional_csv(std::ostream& os, const std::vector<FunctionalRow>& rows) {
    os << "family,n0,functional,mean,stderr,reference,ratio\n";
    const auto old = os.precision(12);
    for (const auto& r : rows)
        os << r.family << ',' << r.n0 << ',' << r.functional << ',' << r.mean << ',' << r.std_error << ','
           << r.reference << ',' << r.ratio << '\n';
    os.precision(old);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
    os << "time_or_step,blocks\n";
    const auto old = os.precision(12);
    for (const auto& s : trajectory.states) os << s.time << ',' << s.blocks << '\n';
    os.precision(old);
}

}  // namespace pcoal
