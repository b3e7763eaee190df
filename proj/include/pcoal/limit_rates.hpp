#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pcoal {

enum class Regime { Xi, BolthausenSznitman, Beta, Critical, Kingman };

std::string to_string(Regime regime);

/// (alpha, beta) with beta < alpha whenever alpha < 2.
struct Params {
    double alpha = 1.0;
    double beta = 0.0;

    /// Validates and returns; throws std::invalid_argument("beta < alpha required") etc.
    static Params make(double alpha, double beta);
    void validate() const;
    Regime regime() const;
    /// True for alpha >= 2, whose limit is Kingman.
    bool kingman_limit() const { return alpha >= 2.0; }
};

enum class TableKind { Rates, Probabilities };

/// Triangular table indexed 1 <= j <= i <= i_max. Rate tables leave j = i empty.
class RateTable {
public:
    RateTable(TableKind kind, int i_max);

    TableKind kind() const { return kind_; }
    int i_max() const { return i_max_; }
    double at(int i, int j) const;
    void set(int i, int j, double value);
    /// Row total: λ_i for rates (j < i), Σ_j P_{i,j} for probabilities.
    double total(int i) const;

    /// CSV with header "i,j,value".
    void write_csv(std::ostream& os) const;

private:
    std::size_t index(int i, int j) const;
    TableKind kind_;
    int i_max_;
    std::vector<double> entries_;
};

/// λ_{i,j} = C(i, j-1) B(i-j+1-α, α-β+j-1) / B(2-α, α-β) for α ∈ [1, 2).
double lambda_rate(const Params& params, int i, int j);

/// Row λ_{i,1..i-1} (index j-1) by the ratio recurrence over merger size; O(i).
std::vector<double> lambda_row(const Params& params, int i);

double kingman_rate(int i, int j);

/// λ_i, r(i) = Σ (i-j) λ_{i,j}, and E(U_i) = 1 + r(i)/λ_i; Kingman for alpha >= 2.
double total_rate(const Params& params, int i);
double block_loss_rate(const Params& params, int i);
double mean_first_collision_size(const Params& params, int i);

/// Partial sums Σ_{i=2}^{m} 1/r(i) for m = 2..M (element m-2).
std::vector<double> comes_down_diagnostic(const Params& params, int M);

/// Continuous-time rate table for beta, Bolthausen-Sznitman, or Kingman (alpha >= 2) regimes.
RateTable lambda_rate_table(const Params& params, int i_max);

/// Exact Poisson-Dirichlet(α, -β) transition matrix, α ∈ (0, 1), i_max <= 30.
/// α = 0 delegates to stirling_case_matrix.
RateTable xi_transition_matrix(const Params& params, int i_max);

/// Probability φ_j of the specific (i_1, ..., i_j)-merger.
double xi_merger_prob(const Params& params, const std::vector<int>& composition);

/// α = 0, β < 0: P_{i,j} = (-β)^j Γ(-β)/Γ(i-β) s_{i,j} with unsigned Stirling numbers of the first kind.
RateTable stirling_case_matrix(double beta, int i_max);

/// Unsigned Stirling numbers of the first kind, s[i][j] for 0 <= j <= i <= n.
std::vector<std::vector<double>> stirling_first_kind(int n);

struct CNAsymptotic {
    double value;
    Regime regime;
};

/// Leading-order c_N, N >= 3.
CNAsymptotic c_N_asymptotic(const Params& params, std::int64_t N);

/// Exact c_N = N E S_1² = (1 + θ)/(Nθ + 1) for the gamma(θ) partition.
double gamma_family_c_N(double theta, std::int64_t N);
/// Its leading order (1 + θ)/(θ N).
double gamma_family_c_N_leading(double theta, std::int64_t N);

}  // namespace pcoal
