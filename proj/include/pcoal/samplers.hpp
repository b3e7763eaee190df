#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcoal/rng.hpp"

namespace pcoal {

/// Inverse-CDF map for Pareto(alpha): x = u^{-1/alpha}.
double pareto_from_uniform(double alpha, double u);

double pareto_sample(double alpha, RngStream& rng);

/// gamma(theta) with unit scale.
double gamma_sample(double theta, RngStream& rng);

/// The first `count` points of a rate-one Poisson process on the half line.
std::vector<double> poisson_arrivals(int count, RngStream& rng);

/// Fréchet variate with CDF exp(-x^{-alpha}), obtained as tau^{-1/alpha}, tau ~ exp(1).
double frechet_sample(double alpha, RngStream& rng);
double frechet_from_arrival(double alpha, double tau);

enum class StableRegime { OneSided, Cauchy, Skewed, Critical, Normal };

std::string to_string(StableRegime regime);

struct GcltConstants {
    double centering;  // a_N
    double scaling;    // b_N
    double c_alpha;
    StableRegime regime;
};

/// Centering and scaling for the generalized central limit theorem of Pareto sums.
/// For alpha = 1 the centering is the asymptotic N ln N + N(1 - γ - ln(2/π)).
GcltConstants gclt_constants(double alpha, std::int64_t N);

/// Raw partial sums Σ_N for `replicas` independent replicas; replica r uses stream (seed, r).
std::vector<double> pareto_partial_sums(double alpha, std::int64_t N, int replicas, std::uint64_t seed);

struct SumStats {
    double mean;
    double mean_stderr;
    double variance;
    double q05;
    double median;
    double q95;
    int replicas;
};

/// Summary of (Σ_N - a_N) / b_N across replicas.
SumStats standardized_sum_stats(double alpha, std::int64_t N, int replicas, std::uint64_t seed);

/// Empirical quantile with linear interpolation; `values` is copied and sorted.
double empirical_quantile(std::vector<double> values, double p);

}  // namespace pcoal
