#include "pcoal/scaling_fit.hpp"

#include <cmath>
#include <stdexcept>

#include "pcoal/finite_coalescent.hpp"
#include "pcoal/rng.hpp"

namespace pcoal {

double scaling_predictor(Regime regime, std::int64_t N) {
    const double ln_n = std::log(static_cast<double>(N));
    switch (regime) {
        case Regime::BolthausenSznitman: return std::log(ln_n);
        case Regime::Critical: return ln_n - std::log(ln_n);
        default: return ln_n;
    }
}

std::string scaling_predictor_name(Regime regime) {
    switch (regime) {
        case Regime::BolthausenSznitman: return "ln ln N";
        case Regime::Critical: return "ln N - ln ln N";
        default: return "ln N";
    }
}

ScalingFit fit_scaling(Regime regime, std::vector<ScalingPoint> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_scaling: need at least 3 grid points");
    double sw = 0.0, sx = 0.0, sy = 0.0;
    std::vector<double> x, y, w;
    for (const auto& p : points) {
        if (!(p.c.value > 0.0) || !(p.c.std_error > 0.0))
            throw std::invalid_argument("fit_scaling: every point needs a positive estimate and stderr");
        const double rel = p.c.std_error / p.c.value;
        x.push_back(scaling_predictor(regime, p.N));
        y.push_back(std::log(p.c.value));
        w.push_back(1.0 / (rel * rel));
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        sw += w[k];
        sx += w[k] * x[k];
        sy += w[k] * y[k];
    }
    const double xbar = sx / sw, ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += w[k] * (x[k] - xbar) * (x[k] - xbar);
        sxy += w[k] * (x[k] - xbar) * (y[k] - ybar);
        syy += w[k] * (y[k] - ybar) * (y[k] - ybar);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_scaling: grid points must differ");
    ScalingFit fit{};
    fit.regime = regime;
    fit.predictor = scaling_predictor_name(regime);
    fit.slope = sxy / sxx;
    const double intercept = ybar - fit.slope * xbar;
    fit.prefactor = std::exp(intercept);
    // Weights are known inverse variances, so the slope variance is 1/Sxx.
    fit.slope_stderr = std::sqrt(1.0 / sxx);
    fit.ci_low = fit.slope - 1.96 * fit.slope_stderr;
    fit.ci_high = fit.slope + 1.96 * fit.slope_stderr;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.noisy = (fit.ci_high - fit.ci_low) > std::fabs(fit.slope);
    fit.points = std::move(points);
    return fit;
}

ScalingFit scaling_fit(const Params& params, const std::vector<std::int64_t>& N_grid, int replicas, std::uint64_t seed,
                       CnEstimator estimator) {
    params.validate();
    if (N_grid.size() < 4) throw std::invalid_argument("scaling fit needs at least 4 grid points");
    if (params.alpha <= 0.0) throw std::invalid_argument("scaling fit needs alpha > 0");
    std::vector<ScalingPoint> points;
    for (std::size_t g = 0; g < N_grid.size(); ++g) {
        const PartitionModel model = PartitionModel::pareto(params.alpha, N_grid[g], params.beta);
        const std::uint64_t s = derive_seed(seed, g);
        const WeightedEstimate c = estimator == CnEstimator::Conditional ? estimate_c_N_conditional(model, replicas, s)
                                                                         : estimate_c_N(model, replicas, s);
        points.push_back({N_grid[g], c});
    }
    return fit_scaling(params.regime(), std::move(points));
}

}  // namespace pcoal
