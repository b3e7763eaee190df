#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pcoal/estimate.hpp"
#include "pcoal/finite_coalescent.hpp"
#include "pcoal/rng.hpp"

namespace pcoal {

struct ForwardConfig {
    std::int64_t N = 2;
    double alpha = 1.0;
    int generations = 1;
    std::vector<double> initial_fitnesses;  // empty means all ones

    void validate() const;
};

struct ForwardState {
    int k = 0;
    double log_global = 0.0;       // ln x_{N,α}(k) = (1/α) ln Σ x_n^α
    double log_holder_mean = 0.0;  // log_global - ln N / α
    double log_fittest = 0.0;      // ln x_(1)(k)
    std::vector<double> log_increments;
};

/// Recursion: only ln x_{N,α} is propagated. Explicit: all N selected fitnesses
/// x_{N,α}(k) τ_n^{-1/α} are materialized and summed. Both consume the same variates.
enum class StepMode { Recursion, Explicit };

ForwardState initial_state(const ForwardConfig& config);

/// One generation: arrivals τ_1 < ... < τ_{N+1} give x* = τ_{N+1}^{-1/α} and
/// the Pareto(α) variates X_n^α = τ_{N+1}/τ_n of the selected offspring.
ForwardState step(const ForwardState& state, const ForwardConfig& config, RngStream& rng,
                  StepMode mode = StepMode::Recursion);

/// States for k = 0..generations. The last state carries all log increments;
/// earlier states carry none.
std::vector<ForwardState> simulate_forward(const ForwardConfig& config, RngStream& rng,
                                           StepMode mode = StepMode::Recursion);

/// CSV "k,log_global,log_holder_mean,log_fittest".
void write_forward_csv(std::ostream& os, const std::vector<ForwardState>& states);

/// Mean over replicas of (1/k) ln⟨x⟩(k) at k = generations >= 100.
WeightedEstimate speed_estimate(const ForwardConfig& config, int replicas, std::uint64_t seed);

/// Direct-sampling estimate of E ln Σ_{n<=N} X_n^α with X_n = U^{-1/α}.
WeightedEstimate mean_log_power_sum(std::int64_t N, double alpha, int replicas, std::uint64_t seed);

/// F_N(β) = -(β/α) ln ln N - (β/(α ln N)) (ψ(1 - β/α) - ln ln N - 1), β < α, N >= 3.
double pressure(double alpha, std::int64_t N, double beta);
/// Central difference of pressure.
double pressure_derivative(double alpha, std::int64_t N, double beta, double h = 1e-6);

struct LegendreResult {
    double value;      // a β* - F_N(β*)
    double beta_star;  // F_N'(β*) = a
};

/// Stationary value of a β - F_N(β) over β ∈ [-50, α - 1e-6] by golden-section
/// search (tolerance 1e-8 in β). Throws std::domain_error if the optimum hits the bracket.
LegendreResult legendre(double alpha, std::int64_t N, double a);

struct FittestStats {
    double mean;           // NaN unless alpha > 1
    double mean_stderr;
    double median;
    double median_stderr;  // half-width of the order-statistic band at ±1/(2√n)
    bool mean_available;
    int replicas;
};

/// x_(1)(k+1) / x_{N,α}(k) across replicas, one generation each.
FittestStats fittest_stats(const ForwardConfig& config, int replicas, std::uint64_t seed);

enum class SamplingMode { Plain, Distorted };

/// Parent-choice probabilities for one generation: X_n^α / Σ X^α (plain) or X_n / Σ X (distorted).
std::vector<double> ancestor_sampling_probs(const ForwardConfig& config, SamplingMode mode, RngStream& rng);

/// The same vectors as a segment source for the finite-coalescent estimators.
SegmentSource ancestor_segment_source(const ForwardConfig& config, SamplingMode mode);

/// E x*^β = Γ(N + 1 - β/α) / Γ(N + 1).
double power_gamma_moment(std::int64_t N, double alpha, double beta);

struct MomentIdentity {
    WeightedEstimate direct;    // E ⟨x⟩(k)^β from trajectories
    WeightedEstimate factored;  // ⟨x⟩(0)^β [E x*^β E (Σ X^α)^{β/α}]^k from independent samples
};

/// Both sides of the β-moment identity for the Hölder mean after k generations.
MomentIdentity holder_moment_identity(const ForwardConfig& config, double beta, int k, int replicas,
                                      std::uint64_t seed);

}  // namespace pcoal
