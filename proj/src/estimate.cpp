#include "pcoal/estimate.hpp"

#include <algorithm>
#include <cmath>

namespace pcoal {

RatioAccumulator& RatioAccumulator::operator+=(const RatioAccumulator& other) {
    sum_a += other.sum_a;
    sum_b += other.sum_b;
    sum_aa += other.sum_aa;
    sum_ab += other.sum_ab;
    sum_bb += other.sum_bb;
    count += other.count;
    return *this;
}

RatioAccumulator operator+(RatioAccumulator lhs, const RatioAccumulator& rhs) {
    lhs += rhs;
    return lhs;
}

WeightedEstimate RatioAccumulator::finish() const {
    WeightedEstimate est;
    est.replicas = count;
    if (count == 0 || sum_b == 0.0) return est;
    const double r = sum_a / sum_b;
    est.value = r;
    // Σ (a - r b)² expanded; clamp tiny negative values from cancellation.
    const double resid = std::max(0.0, sum_aa - 2.0 * r * sum_ab + r * r * sum_bb);
    const double n = static_cast<double>(count);
    const double correction = count > 1 ? n / (n - 1.0) : 1.0;
    est.std_error = std::sqrt(correction * resid) / std::fabs(sum_b);
    est.ess = sum_bb > 0.0 ? sum_b * sum_b / sum_bb : 0.0;
    est.ess = std::min(est.ess, n);
    est.degenerate = est.ess < 0.01 * n;
    return est;
}

WeightedEstimate product(const WeightedEstimate& x, const WeightedEstimate& y) {
    WeightedEstimate out;
    out.value = x.value * y.value;
    out.std_error = std::hypot(x.std_error * y.value, y.std_error * x.value);
    out.replicas = std::min(x.replicas, y.replicas);
    out.ess = std::min(x.ess, y.ess);
    out.degenerate = x.degenerate || y.degenerate;
    return out;
}

}  // namespace pcoal
