#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pcoal/block_state.hpp"
#include "pcoal/estimate.hpp"
#include "pcoal/rng.hpp"

namespace pcoal {

enum class PartitionFamily { Pareto, Gamma };

/// Random partition of the unit interval into N segments X_n / Σ_N, with
/// one-step probabilities size-biased by Σ_N^beta.
struct PartitionModel {
    PartitionFamily family = PartitionFamily::Pareto;
    double shape = 1.0;  // alpha for Pareto, theta for gamma
    std::int64_t N = 1;
    double beta = 0.0;

    static PartitionModel pareto(double alpha, std::int64_t N, double beta = 0.0);
    static PartitionModel gamma(double theta, std::int64_t N, double beta = 0.0);

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    /// Heuristic for Pareto with alpha >= 2: the weight Σ^beta likely has infinite variance.
    bool weight_variance_warning() const;

    /// A deterministic typical value of ln Σ_N; weights are stored as
    /// exp(beta (ln Σ - reference)) so they stay O(1).
    double reference_log_total() const;

    std::string describe() const;
};

/// How i sample points fell onto the segments.
struct MergerOutcome {
    int i = 0;
    std::vector<int> occupancy;  // points per hit segment, descending
    int j() const { return static_cast<int>(occupancy.size()); }
};

struct MergerDraw {
    MergerOutcome outcome;
    double weight = 1.0;      // Σ_N^beta
    double log_weight = 0.0;  // beta ln Σ_N
};

/// Fills `sizes` with X_1..X_N and returns ln Σ_N.
double draw_partition(const PartitionModel& model, RngStream& rng, std::vector<double>& sizes);

/// Segment index hit by each of `points` uniforms thrown on the partition with
/// unnormalized sizes. `cumulative` is scratch space.
void locate_points(const std::vector<double>& sizes, int points, RngStream& rng,
                   std::vector<double>& cumulative, std::vector<std::int64_t>& segment_of_point);

/// Occupancy of the first i located points.
MergerOutcome occupancy_of(const std::vector<std::int64_t>& segment_of_point, int i);

MergerDraw draw_merger(const PartitionModel& model, int i, RngStream& rng);

/// Estimates P_{i,j} for all 1 <= j <= i <= i_max from one set of replicas.
/// Points are nested: the sample of size i is the first i of i_max points.
class TransitionEstimates {
public:
    TransitionEstimates(int i_max, std::vector<WeightedEstimate> entries);
    int i_max() const { return i_max_; }
    const WeightedEstimate& at(int i, int j) const;

private:
    int i_max_;
    std::vector<WeightedEstimate> entries_;
};

// Replica r of every estimator uses RngStream(seed, r). Replicas must be >= 1000.

WeightedEstimate estimate_p_ij(const PartitionModel& model, int i, int j, int replicas, std::uint64_t seed);
TransitionEstimates estimate_transition_rows(const PartitionModel& model, int i_max, int replicas,
                                             std::uint64_t seed);
WeightedEstimate estimate_c_N(const PartitionModel& model, int replicas, std::uint64_t seed);

/// P_{i,j} through C(N,j) Σ_l (-1)^{j-l} C(j,l) E((S_1+...+S_l)^i), beta = 0, i <= 8.
/// Each moment is averaged over disjoint runs of l segments, which is unbiased by exchangeability.
WeightedEstimate estimate_moment_form(const PartitionModel& model, int i, int j, int replicas,
                                      std::uint64_t seed);

/// c_N for the Pareto family with X_1 integrated out analytically given the
/// other N-1 variates. Same target as estimate_c_N with far smaller variance
/// when alpha >= 2, where the pair-hit indicator is a rare event.
WeightedEstimate estimate_c_N_conditional(const PartitionModel& model, int replicas, std::uint64_t seed);

/// α ∫_1^∞ x^{1-α} (x+s)^{β-2} dx, the conditional mean of N^{-1} Σ^β S_1² given Σ_{n>=2} X_n = s.
double pareto_pair_kernel(double alpha, double beta, double s);

/// Supplies unnormalized segment sizes for one replica (beta = 0 estimators).
using SegmentSource = std::function<void(RngStream&, std::vector<double>&)>;

WeightedEstimate estimate_c_N_from_source(const SegmentSource& source, int replicas, std::uint64_t seed);

/// Pathwise block counts, one fresh unbiased partition per generation, until one block remains.
Trajectory run_discrete_coalescent(const PartitionModel& model, int n0, RngStream& rng,
                                   std::int64_t max_steps = 10'000'000);

}  // namespace pcoal
