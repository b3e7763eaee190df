#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcoal/estimate.hpp"
#include "pcoal/limit_rates.hpp"

namespace pcoal {

struct ScalingPoint {
    std::int64_t N;
    WeightedEstimate c;
};

struct ScalingFit {
    Regime regime;
    std::string predictor;  // "ln N", "ln ln N" or "ln N - ln ln N"
    double slope;
    double slope_stderr;
    double ci_low;   // 95%
    double ci_high;
    double prefactor;  // exp(intercept)
    double r_squared;
    bool noisy;  // CI width exceeds |slope|
    std::vector<ScalingPoint> points;
};

/// Predictor the regime's c_N law is linear in (against ln c_N).
double scaling_predictor(Regime regime, std::int64_t N);
std::string scaling_predictor_name(Regime regime);

/// Weighted least squares of ln ĉ_N on the predictor, weights 1/var(ln ĉ_N) ≈ (c/stderr)².
ScalingFit fit_scaling(Regime regime, std::vector<ScalingPoint> points);

enum class CnEstimator { Occupancy, Conditional };

/// Estimates c_N on the grid for Pareto(alpha) with size-bias beta and fits.
/// Grid point g uses seed derive_seed(seed, g).
ScalingFit scaling_fit(const Params& params, const std::vector<std::int64_t>& N_grid, int replicas, std::uint64_t seed,
                       CnEstimator estimator = CnEstimator::Conditional);

}  // namespace pcoal
