#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcoal/block_state.hpp"
#include "pcoal/limit_rates.hpp"
#include "pcoal/rng.hpp"

namespace pcoal {

inline constexpr std::int64_t kMaxEvents = 10'000'000;

/// Jump law of a block-counting Λ-coalescent: total rate λ_i and the target j.
/// Built from a dense rate table, or from Params with rows generated on demand
/// (needed for i in the thousands, where a dense table would not fit).
class JumpKernel {
public:
    static JumpKernel from_table(const RateTable& rates);
    static JumpKernel from_params(const Params& params, int i_max);

    int i_max() const { return i_max_; }
    double total(int i) const { return totals_[static_cast<std::size_t>(i)]; }
    int sample_target(int i, RngStream& rng) const;

private:
    enum class Mode { Dense, Kingman, Beta };
    Mode mode_ = Mode::Dense;
    int i_max_ = 0;
    Params params_{};
    std::vector<double> totals_;                  // index i
    std::vector<std::vector<double>> cumulative_; // dense mode: row i, cumulative over j = 1..i-1
};

struct TreeFunctionals {
    double height = 0.0;                 // τ_{n,1}
    double total_length = 0.0;           // L_n
    double external_length = 0.0;        // L^e_n
    std::int64_t collisions = 0;         // C_n
    double random_external_branch = 0.0; // l_n, external branch of one tagged leaf
};

struct LambdaRun {
    Trajectory trajectory;
    TreeFunctionals functionals;
};

/// Gillespie simulation tracking singleton and non-singleton blocks; merger
/// participants are allocated hypergeometrically among all blocks.
LambdaRun simulate_lambda(const JumpKernel& kernel, int n0, RngStream& rng, std::int64_t max_events = kMaxEvents);
LambdaRun simulate_lambda(const RateTable& rates, int n0, RngStream& rng, std::int64_t max_events = kMaxEvents);

struct XiRun {
    Trajectory trajectory;
    std::int64_t steps = 0;       // steps to absorption
    std::int64_t collisions = 0;  // steps with j < i
};

XiRun simulate_xi(const RateTable& matrix, int n0, RngStream& rng, std::int64_t max_steps = kMaxEvents);

/// One row per (family, n0, functional): empirical mean, its standard error,
/// the leading-order reference (NaN where none is known) and the ratio.
struct FunctionalRow {
    std::string family;
    int n0;
    std::string functional;
    double mean;
    double std_error;
    double reference;
    double ratio;
};

enum class FamilyKind { Kingman, BolthausenSznitman, Beta };

struct CoalescentFamily {
    FamilyKind kind = FamilyKind::Kingman;
    Params params{3.0, 0.0};

    static CoalescentFamily kingman();
    static CoalescentFamily bolthausen_sznitman();
    static CoalescentFamily beta(double alpha, double beta);
    std::string name() const;
};

/// Means of the tree functionals at each size; trajectory r of size n uses
/// RngStream(seed, r) with seed offset by n.
std::vector<FunctionalRow> functional_scaling_report(const CoalescentFamily& family, const std::vector<int>& sizes,
                                                     int replicas, std::uint64_t seed);

/// CSV "family,n0,functional,mean,stderr,reference,ratio".
void write_functional_csv(std::ostream& os, const std::vector<FunctionalRow>& rows);

/// CSV "time_or_step,blocks".
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace pcoal
