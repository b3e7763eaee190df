#include "pcoal/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pcoal {

namespace {

constexpr double kShift = 10.0;

// Stirling series for ln Γ(x), valid once x >= kShift (error well below 1e-16).
double stirling_log_gamma(double x) {
    constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // B_{2k} / (2k (2k-1)) for k = 1..8
    const double series =
        inv * (1.0 / 12.0 +
        inv2 * (-1.0 / 360.0 +
        inv2 * (1.0 / 1260.0 +
        inv2 * (-1.0 / 1680.0 +
        inv2 * (1.0 / 1188.0 +
        inv2 * (-691.0 / 360360.0 +
        inv2 * (1.0 / 156.0 +
        inv2 * (-3617.0 / 122400.0))))))));
    return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

std::string show(double x) { return std::to_string(x); }

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + show(x));
    if (std::isinf(x)) return x;
    if (x >= kShift) return stirling_log_gamma(x);
    double product = 1.0;
    double y = x;
    while (y < kShift) {
        product *= y;
        y += 1.0;
    }
    return stirling_log_gamma(y) - std::log(product);
}

SignedLog log_abs_gamma(double x) {
    if (x > 0.0) return {log_gamma(x), 1};
    if (x == std::floor(x)) throw DomainError("log_abs_gamma: pole at " + show(x));
    // Reflection: Γ(x) Γ(1-x) = π / sin(πx); reduce the sine argument first.
    const double reduced = x - std::round(x);
    const double s = std::sin(std::numbers::pi * reduced);
    const int parity = static_cast<long long>(std::round(x)) % 2 == 0 ? 1 : -1;
    const double sine = parity * s;
    return {std::log(std::numbers::pi) - std::log(std::fabs(sine)) - log_gamma(1.0 - x),
            sine > 0.0 ? 1 : -1};
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: argument must be positive, got " + show(x));
    double acc = 0.0;
    while (x < kShift) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    // Σ B_{2k} / (2k x^{2k}), k = 1..6
    const double series =
        inv2 * (1.0 / 12.0 -
        inv2 * (1.0 / 120.0 -
        inv2 * (1.0 / 252.0 -
        inv2 * (1.0 / 240.0 -
        inv2 * (1.0 / 132.0 -
        inv2 * (691.0 / 32760.0))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("log_beta: arguments must be positive, got " + show(a) + ", " + show(b));
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_binomial(double n, double k) {
    if (k < 0.0 || k > n) throw DomainError("log_binomial: need 0 <= k <= n");
    if (k == 0.0 || k == n) return 0.0;
    return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

}  // namespace pcoal
