#pragma once

// Quadrature oracle for the beta(2-α, α-β) Λ-coalescent rates, independent of
// the closed forms in the library. Shared by the unit and acceptance tests.

#include <cmath>
#include <functional>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pcoal/limit_rates.hpp"

namespace oracle {

using pcoal::Params;

// ∫_0^1 g(u, 1-u) Λ(du) for Λ = beta(2-α, α-β), by tanh-sinh quadrature.
// The complement 1-u is taken from the quadrature's own endpoint distance.
inline double lambda_integral(const Params& p, const std::function<double(double, double)>& g) {
    boost::math::quadrature::tanh_sinh<double> quad;
    const double a = 2.0 - p.alpha, b = p.alpha - p.beta;
    const double log_norm = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto f = [&](double u, double uc) {
        const double v = uc > 0.0 ? uc : 1.0 - u;
        return g(u, v) * std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log(v) - log_norm);
    };
    return quad.integrate(f, 0.0, 1.0, 1e-13);
}

inline double binom(int n, int k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

// Σ_{k>=2} c_k C(i,k) u^{k-2} (1-u)^{i-k}: the small-u form of the integrands below.
inline double binomial_tail(int i, double u, double v, const std::function<double(int)>& c) {
    double s = 0.0;
    for (int k = 2; k <= i; ++k) s += c(k) * binom(i, k) * std::pow(u, k - 2) * std::pow(v, i - k);
    return s;
}

inline double quad_lambda_ij(const Params& p, int i, int j) {
    const int k = i - j + 1;
    return binom(i, k) * lambda_integral(p, [&](double u, double v) { return std::pow(u, k - 2) * std::pow(v, i - k); });
}

inline double quad_total(const Params& p, int i) {
    return lambda_integral(p, [&](double u, double v) {
        if (u < 0.05) return binomial_tail(i, u, v, [](int) { return 1.0; });
        return (1.0 - std::pow(v, i) - i * u * std::pow(v, i - 1)) / (u * u);
    });
}

inline double quad_block_loss(const Params& p, int i) {
    return lambda_integral(p, [&](double u, double v) {
        if (u < 0.05) return binomial_tail(i, u, v, [](int k) { return k - 1.0; });
        return (u * i - 1.0 + std::pow(v, i)) / (u * u);
    });
}

inline double quad_mean_collision(const Params& p, int i) {
    const double integral = lambda_integral(p, [&](double u, double) {
        return -std::expm1((i - 1) * std::log1p(-u)) / u;
    });
    return i * integral / quad_total(p, i);
}

}  // namespace oracle
