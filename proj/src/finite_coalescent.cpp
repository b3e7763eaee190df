#include "pcoal/finite_coalescent.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pcoal/parallel.hpp"
#include "pcoal/samplers.hpp"
#include "pcoal/specfun.hpp"

namespace pcoal {

namespace {

void require_replicas(int replicas) {
    if (replicas < 1000) throw std::invalid_argument("replicas must be >= 1000");
}

std::vector<RatioAccumulator> add_elementwise(std::vector<RatioAccumulator> lhs,
                                              const std::vector<RatioAccumulator>& rhs) {
    for (std::size_t k = 0; k < lhs.size(); ++k) lhs[k] += rhs[k];
    return lhs;
}

// Offset of P_{i,j} in a packed lower triangle, 1 <= j <= i.
std::size_t tri(int i, int j) {
    return static_cast<std::size_t>(i) * (i - 1) / 2 + static_cast<std::size_t>(j - 1);
}

int distinct_prefix_counts(const std::vector<std::int64_t>& seg, std::vector<int>& j_of_i) {
    // j_of_i[i] = number of distinct segments among the first i points.
    j_of_i.assign(seg.size() + 1, 0);
    int distinct = 0;
    for (std::size_t p = 0; p < seg.size(); ++p) {
        bool seen = false;
        for (std::size_t q = 0; q < p && !seen; ++q) seen = seg[q] == seg[p];
        if (!seen) ++distinct;
        j_of_i[p + 1] = distinct;
    }
    return distinct;
}

}  // namespace

PartitionModel PartitionModel::pareto(double alpha, std::int64_t N, double beta) {
    PartitionModel m{PartitionFamily::Pareto, alpha, N, beta};
    m.validate();
    return m;
}

PartitionModel PartitionModel::gamma(double theta, std::int64_t N, double beta) {
    PartitionModel m{PartitionFamily::Gamma, theta, N, beta};
    m.validate();
    return m;
}

void PartitionModel::validate() const {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    if (family == PartitionFamily::Pareto) {
        if (!(shape > 0.0) || !std::isfinite(shape)) throw std::invalid_argument("alpha must be positive");
        if (shape < 2.0 && !(beta < shape)) throw std::invalid_argument("beta < alpha required");
    } else if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw std::invalid_argument("theta must be positive");
    }
}

bool PartitionModel::weight_variance_warning() const {
    return family == PartitionFamily::Pareto && shape >= 2.0 && beta >= shape / 2.0 + 1.0;
}

double PartitionModel::reference_log_total() const {
    const double n = static_cast<double>(N);
    if (family == PartitionFamily::Gamma) return std::log(n * shape);
    if (shape > 1.0) return std::log(n * shape / (shape - 1.0));
    if (shape == 1.0) return std::log(n * std::max(1.0, std::log(n)));
    return std::log(n) / shape;
}

std::string PartitionModel::describe() const {
    std::ostringstream os;
    os << (family == PartitionFamily::Pareto ? "pareto(alpha=" : "gamma(theta=") << shape << ") N=" << N
       << " beta=" << beta;
    return os.str();
}

double draw_partition(const PartitionModel& model, RngStream& rng, std::vector<double>& sizes) {
    sizes.resize(static_cast<std::size_t>(model.N));
    double total = 0.0;
    if (model.family == PartitionFamily::Pareto) {
        const double inv_alpha = 1.0 / model.shape;
        for (auto& x : sizes) {
            x = std::exp(-std::log(rng.uniform_open()) * inv_alpha);
            total += x;
        }
    } else {
        std::gamma_distribution<double> dist(model.shape, 1.0);
        for (auto& x : sizes) {
            x = dist(rng);
            total += x;
        }
    }
    return std::log(total);
}

void locate_points(const std::vector<double>& sizes, int points, RngStream& rng,
                   std::vector<double>& cumulative, std::vector<std::int64_t>& segment_of_point) {
    cumulative.resize(sizes.size());
    double run = 0.0;
    for (std::size_t n = 0; n < sizes.size(); ++n) {
        run += sizes[n];
        cumulative[n] = run;
    }
    segment_of_point.resize(static_cast<std::size_t>(points));
    const auto last = static_cast<std::int64_t>(sizes.size()) - 1;
    for (auto& seg : segment_of_point) {
        const double target = rng.uniform_open() * run;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        seg = std::min<std::int64_t>(it - cumulative.begin(), last);
    }
}

MergerOutcome occupancy_of(const std::vector<std::int64_t>& segment_of_point, int i) {
    std::vector<std::int64_t> hit(segment_of_point.begin(), segment_of_point.begin() + i);
    std::sort(hit.begin(), hit.end());
    MergerOutcome out;
    out.i = i;
    for (std::size_t p = 0; p < hit.size();) {
        std::size_t q = p;
        while (q < hit.size() && hit[q] == hit[p]) ++q;
        out.occupancy.push_back(static_cast<int>(q - p));
        p = q;
    }
    std::sort(out.occupancy.begin(), out.occupancy.end(), std::greater<>());
    return out;
}

MergerDraw draw_merger(const PartitionModel& model, int i, RngStream& rng) {
    model.validate();
    if (i < 2) throw std::invalid_argument("draw_merger: i must be >= 2");
    std::vector<double> sizes, cumulative;
    std::vector<std::int64_t> seg;
    const double log_total = draw_partition(model, rng, sizes);
    locate_points(sizes, i, rng, cumulative, seg);
    MergerDraw d;
    d.outcome = occupancy_of(seg, i);
    d.log_weight = model.beta * log_total;
    d.weight = std::exp(d.log_weight);
    return d;
}

TransitionEstimates::TransitionEstimates(int i_max, std::vector<WeightedEstimate> entries)
    : i_max_(i_max), entries_(std::move(entries)) {}

const WeightedEstimate& TransitionEstimates::at(int i, int j) const {
    if (i < 1 || i > i_max_ || j < 1 || j > i) throw std::out_of_range("TransitionEstimates::at");
    return entries_[tri(i, j)];
}

TransitionEstimates estimate_transition_rows(const PartitionModel& model, int i_max, int replicas,
                                             std::uint64_t seed) {
    model.validate();
    require_replicas(replicas);
    if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
    const std::size_t cells = tri(i_max, i_max) + 1;
    const double ref = model.reference_log_total();

    auto block = [&](std::size_t first, std::size_t last) {
        std::vector<RatioAccumulator> acc(cells);
        std::vector<double> sizes, cumulative;
        std::vector<std::int64_t> seg;
        std::vector<int> j_of_i;
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            const double log_total = draw_partition(model, rng, sizes);
            locate_points(sizes, i_max, rng, cumulative, seg);
            distinct_prefix_counts(seg, j_of_i);
            const double w = std::exp(model.beta * (log_total - ref));
            for (int i = 1; i <= i_max; ++i)
                for (int j = 1; j <= i; ++j) acc[tri(i, j)].add_weighted(j_of_i[i] == j ? 1.0 : 0.0, w);
        }
        return acc;
    };
    const auto total = reduce_replicas<std::vector<RatioAccumulator>>(
        static_cast<std::size_t>(replicas), block, add_elementwise, std::vector<RatioAccumulator>(cells));
    std::vector<WeightedEstimate> entries;
    entries.reserve(cells);
    for (const auto& a : total) entries.push_back(a.finish());
    return TransitionEstimates(i_max, std::move(entries));
}

WeightedEstimate estimate_p_ij(const PartitionModel& model, int i, int j, int replicas, std::uint64_t seed) {
    if (i < 1 || j < 1 || j > i) throw std::invalid_argument("estimate_p_ij: need 1 <= j <= i");
    model.validate();
    require_replicas(replicas);
    const double ref = model.reference_log_total();
    auto block = [&](std::size_t first, std::size_t last) {
        RatioAccumulator acc;
        std::vector<double> sizes, cumulative;
        std::vector<std::int64_t> seg;
        std::vector<int> j_of_i;
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            const double log_total = draw_partition(model, rng, sizes);
            locate_points(sizes, i, rng, cumulative, seg);
            const int hit = distinct_prefix_counts(seg, j_of_i);
            acc.add_weighted(hit == j ? 1.0 : 0.0, std::exp(model.beta * (log_total - ref)));
        }
        return acc;
    };
    return reduce_replicas<RatioAccumulator>(static_cast<std::size_t>(replicas), block,
                                             std::plus<RatioAccumulator>(), RatioAccumulator{})
        .finish();
}

WeightedEstimate estimate_c_N(const PartitionModel& model, int replicas, std::uint64_t seed) {
    return estimate_p_ij(model, 2, 1, replicas, seed);
}

WeightedEstimate estimate_moment_form(const PartitionModel& model, int i, int j, int replicas,
                                      std::uint64_t seed) {
    model.validate();
    require_replicas(replicas);
    if (model.beta != 0.0) throw std::invalid_argument("estimate_moment_form: beta = 0 required");
    if (i < 1 || i > 8 || j < 1 || j > i) throw std::invalid_argument("estimate_moment_form: need 1 <= j <= i <= 8");
    if (j > model.N) throw std::invalid_argument("estimate_moment_form: need j <= N");
    const double log_choose_nj = log_binomial(static_cast<double>(model.N), j);
    if (log_choose_nj > 600.0) throw std::invalid_argument("estimate_moment_form: C(N, j) overflows");
    const double choose_nj = std::exp(log_choose_nj);

    auto block = [&](std::size_t first, std::size_t last) {
        RatioAccumulator acc;
        std::vector<double> sizes;
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            const double total = std::exp(draw_partition(model, rng, sizes));
            double f = 0.0;
            for (int l = 1; l <= j; ++l) {
                const std::int64_t runs = model.N / l;
                double moment = 0.0;
                for (std::int64_t b = 0; b < runs; ++b) {
                    double s = 0.0;
                    for (int t = 0; t < l; ++t) s += sizes[static_cast<std::size_t>(b * l + t)];
                    moment += std::pow(s / total, i);
                }
                moment /= static_cast<double>(runs);
                const double sign = ((j - l) % 2 == 0) ? 1.0 : -1.0;
                f += sign * std::exp(log_binomial(j, l)) * moment;
            }
            acc.add(choose_nj * f, 1.0);
        }
        return acc;
    };
    WeightedEstimate est = reduce_replicas<RatioAccumulator>(static_cast<std::size_t>(replicas), block,
                                                             std::plus<RatioAccumulator>(), RatioAccumulator{})
                               .finish();
    est.high_variance = est.std_error > std::fabs(est.value);
    return est;
}

double pareto_pair_kernel(double alpha, double beta, double s) {
    if (!(alpha > 0.0) || !(s >= 0.0)) throw std::invalid_argument("pareto_pair_kernel: bad arguments");
    if (!(beta < alpha + 2.0)) throw std::invalid_argument("pareto_pair_kernel: integral diverges");
    boost::math::quadrature::tanh_sinh<double> quad;
    const double c = std::max(s, 1.0);
    const double ratio = s / c;
    // Tail x >= c, substituted x = c / w; the integrand is w^{α-β-1}(1 + ratio w)^{β-2}.
    const double tail = std::pow(c, beta - alpha) *
                        quad.integrate([&](double w) {
                            return std::pow(w, alpha - beta - 1.0) * std::pow(1.0 + ratio * w, beta - 2.0);
                        }, 0.0, 1.0, 1e-12);
    double body = 0.0;
    if (c > 1.0) {
        // 1 <= x <= c on a log scale: x = e^t.
        body = quad.integrate([&](double t) {
            const double x = std::exp(t);
            return std::exp(t * (2.0 - alpha)) * std::pow(x + s, beta - 2.0);
        }, 0.0, std::log(c), 1e-12);
    }
    return alpha * (body + tail);
}

WeightedEstimate estimate_c_N_conditional(const PartitionModel& model, int replicas, std::uint64_t seed) {
    model.validate();
    require_replicas(replicas);
    if (model.family != PartitionFamily::Pareto)
        throw std::invalid_argument("estimate_c_N_conditional: Pareto family only");
    const double alpha = model.shape;
    const double beta = model.beta;
    const double ref = model.reference_log_total();
    const double n = static_cast<double>(model.N);
    const double inv_alpha = 1.0 / alpha;

    auto block = [&](std::size_t first, std::size_t last) {
        RatioAccumulator acc;
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            double s = 0.0;
            for (std::int64_t k = 1; k < model.N; ++k) s += std::exp(-std::log(rng.uniform_open()) * inv_alpha);
            const double a = n * pareto_pair_kernel(alpha, beta, s) * std::exp(-beta * ref);
            double b = 1.0;
            if (beta != 0.0) {
                const double x1 = std::exp(-std::log(rng.uniform_open()) * inv_alpha);
                b = std::exp(beta * (std::log(x1 + s) - ref));
            }
            acc.add(a, b);
        }
        return acc;
    };
    return reduce_replicas<RatioAccumulator>(static_cast<std::size_t>(replicas), block,
                                             std::plus<RatioAccumulator>(), RatioAccumulator{})
        .finish();
}

WeightedEstimate estimate_c_N_from_source(const SegmentSource& source, int replicas, std::uint64_t seed) {
    require_replicas(replicas);
    auto block = [&](std::size_t first, std::size_t last) {
        RatioAccumulator acc;
        std::vector<double> sizes, cumulative;
        std::vector<std::int64_t> seg;
        for (std::size_t r = first; r < last; ++r) {
            RngStream rng(seed, r);
            source(rng, sizes);
            if (sizes.empty()) throw std::invalid_argument("segment source produced no segments");
            locate_points(sizes, 2, rng, cumulative, seg);
            acc.add(seg[0] == seg[1] ? 1.0 : 0.0, 1.0);
        }
        return acc;
    };
    return reduce_replicas<RatioAccumulator>(static_cast<std::size_t>(replicas), block,
                                             std::plus<RatioAccumulator>(), RatioAccumulator{})
        .finish();
}

Trajectory run_discrete_coalescent(const PartitionModel& model, int n0, RngStream& rng, std::int64_t max_steps) {
    model.validate();
    if (n0 < 2 && model.N > 1) throw std::invalid_argument("run_discrete_coalescent: n0 must be >= 2");
    if (n0 > model.N && model.N > 1) throw std::invalid_argument("run_discrete_coalescent: n0 must be <= N");
    if (n0 < 1) throw std::invalid_argument("run_discrete_coalescent: n0 must be >= 1");
    Trajectory traj;
    traj.states.push_back({0.0, n0});
    std::vector<double> sizes, cumulative;
    std::vector<std::int64_t> seg;
    std::int64_t blocks = n0;
    while (blocks > 1) {
        if (traj.events >= max_steps) {
            traj.truncated = true;
            break;
        }
        draw_partition(model, rng, sizes);
        locate_points(sizes, static_cast<int>(blocks), rng, cumulative, seg);
        std::sort(seg.begin(), seg.end());
        blocks = std::unique(seg.begin(), seg.end()) - seg.begin();
        ++traj.events;
        traj.states.push_back({static_cast<double>(traj.events), blocks});
    }
    return traj;
}

}  // namespace pcoal
