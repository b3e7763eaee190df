#pragma once

#include <cstdint>

namespace pcoal {

/// Ratio estimate Σa / Σb over replicas, e.g. a self-normalized importance
/// sampling estimate with a = w·f and b = w.
struct WeightedEstimate {
    double value = 0.0;
    double std_error = 0.0;  // delta method
    std::int64_t replicas = 0;
    double ess = 0.0;     // (Σb)² / Σb²
    bool degenerate = false;  // ess < 1% of replicas
    bool high_variance = false;  // stderr exceeds |value|
};

/// Running sums for a ratio estimator. Merging is associative; callers fold
/// partial accumulators in a fixed order to keep results reproducible.
struct RatioAccumulator {
    double sum_a = 0.0;
    double sum_b = 0.0;
    double sum_aa = 0.0;
    double sum_ab = 0.0;
    double sum_bb = 0.0;
    std::int64_t count = 0;

    void add(double a, double b) {
        sum_a += a;
        sum_b += b;
        sum_aa += a * a;
        sum_ab += a * b;
        sum_bb += b * b;
        ++count;
    }

    /// Self-normalized form: value f with weight w.
    void add_weighted(double f, double w) { add(w * f, w); }

    RatioAccumulator& operator+=(const RatioAccumulator& other);

    WeightedEstimate finish() const;
};

RatioAccumulator operator+(RatioAccumulator lhs, const RatioAccumulator& rhs);

/// Product of independent estimates with first-order error propagation.
WeightedEstimate product(const WeightedEstimate& x, const WeightedEstimate& y);

}  // namespace pcoal
