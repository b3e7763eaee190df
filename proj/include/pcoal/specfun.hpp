#pragma once

#include <stdexcept>

namespace pcoal {

/// Thrown when a special function is evaluated outside its domain or at a pole.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct SignedLog {
    double log_abs;
    int sign;
};

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// ln Γ(x) for x > 0. Stirling series after shifting the argument above 10.
double log_gamma(double x);

/// ln|Γ(x)| and sign Γ(x) for any x that is not a non-positive integer.
SignedLog log_abs_gamma(double x);

/// ψ(x) = Γ'(x)/Γ(x), x > 0.
double digamma(double x);

double log_beta(double a, double b);

/// ln C(n, k) for real n >= k >= 0.
double log_binomial(double n, double k);

}  // namespace pcoal
