#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "pcoal/coalescent_sim.hpp"
#include "pcoal/limit_rates.hpp"

using namespace pcoal;

namespace {

struct Moments {
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    void add(double x) {
        sum += x;
        sum2 += x * x;
        ++n;
    }
    double mean() const { return sum / n; }
    double se() const { return std::sqrt(std::max(0.0, sum2 / n - mean() * mean()) / (n - 1)); }
    bool near(double target, double sigmas = 3.0) const { return std::fabs(mean() - target) <= sigmas * se(); }
};

// E l_i: hold exp(λ_i); the tagged singleton survives a jump to j with probability (j-1)/i
// and then continues as one of j blocks.
std::vector<double> tagged_branch_means(const Params& p, int i_max) {
    std::vector<double> e(i_max + 1, 0.0);
    for (int i = 2; i <= i_max; ++i) {
        const double lam = total_rate(p, i);
        double v = 1.0 / lam;
        for (int j = 2; j < i; ++j) {
            const double rate = p.kingman_limit() ? kingman_rate(i, j) : lambda_rate(p, i, j);
            v += rate / lam * (j - 1.0) / i * e[j];
        }
        e[i] = v;
    }
    return e;
}

}  // namespace

TEST_CASE("kingman pair: exponential height and L = L^e on every path") {
    const auto table = lambda_rate_table({3.0, 0.0}, 2);
    Moments h;
    for (int r = 0; r < 20000; ++r) {
        RngStream rng(1, r);
        const auto run = simulate_lambda(table, 2, rng);
        h.add(run.functionals.height);
        CHECK(run.functionals.collisions == 1);
        CHECK(run.functionals.total_length == run.functionals.external_length);
        CHECK(run.functionals.total_length == doctest::Approx(2.0 * run.functionals.height).epsilon(1e-15));
    }
    CHECK(h.near(1.0));
}

TEST_CASE("kingman: height, lengths and collisions") {
    const auto kernel = JumpKernel::from_params({3.0, 0.0}, 20);
    Moments h, L, Le, l;
    for (int r = 0; r < 100000; ++r) {
        RngStream rng(2, r);
        const auto run = simulate_lambda(kernel, 20, rng);
        CHECK(run.functionals.collisions == 19);
        h.add(run.functionals.height);
        L.add(run.functionals.total_length);
        Le.add(run.functionals.external_length);
        l.add(run.functionals.random_external_branch);
    }
    CHECK(h.near(1.9));
    double harmonic = 0.0;
    for (int k = 1; k < 20; ++k) harmonic += 1.0 / k;
    CHECK(L.near(2.0 * harmonic));
    CHECK(Le.near(2.0));
    CHECK(l.near(2.0 / 20.0));
}

TEST_CASE("functional invariants along paths") {
    const Params families[] = {{3.0, 0.0}, {1.0, 0.0}, {1.5, 0.0}, {1.2, -1.0}};
    for (const auto& p : families) {
        const auto kernel = JumpKernel::from_params(p, 60);
        for (int r = 0; r < 500; ++r) {
            RngStream rng(3, r);
            const auto run = simulate_lambda(kernel, 60, rng);
            const auto& f = run.functionals;
            CHECK(f.external_length <= f.total_length);
            CHECK(f.height <= f.total_length);
            CHECK(f.collisions <= 59);
            CHECK(f.random_external_branch <= f.height);
            CHECK(!run.trajectory.truncated);
            CHECK(run.trajectory.states.front().blocks == 60);
            CHECK(run.trajectory.states.back().blocks == 1);
            CHECK(run.trajectory.events == f.collisions);
            for (std::size_t s = 1; s < run.trajectory.states.size(); ++s) {
                CHECK(run.trajectory.states[s].blocks < run.trajectory.states[s - 1].blocks);
                CHECK(run.trajectory.states[s].time >= run.trajectory.states[s - 1].time);
            }
        }
    }
}

TEST_CASE("one-step distribution matches the normalized rate row") {
    const Params p{1.5, 0.0};
    const int i = 8;
    const int R = 100000;
    const auto table = lambda_rate_table(p, i);
    const auto kernel = JumpKernel::from_params(p, i);
    for (int variant = 0; variant < 2; ++variant) {
        std::vector<int> counts(i, 0);
        for (int r = 0; r < R; ++r) {
            RngStream rng(4 + variant, r);
            const int j = variant == 0 ? simulate_lambda(table, i, rng, 1).trajectory.states.at(1).blocks
                                       : kernel.sample_target(i, rng);
            ++counts[j];
        }
        for (int j = 1; j < i; ++j) {
            const double prob = lambda_rate(p, i, j) / total_rate(p, i);
            const double se = std::sqrt(prob * (1.0 - prob) / R);
            CHECK(std::fabs(counts[j] / static_cast<double>(R) - prob) <= 3.0 * se);
        }
    }
}

TEST_CASE("tagged external branch agrees with its recursion") {
    for (const Params& p : {Params{3.0, 0.0}, Params{1.5, 0.0}}) {
        const auto oracle = tagged_branch_means(p, 10);
        if (p.kingman_limit()) {
            CHECK(oracle[2] == doctest::Approx(1.0));
            CHECK(oracle[3] == doctest::Approx(2.0 / 3.0));
        }
        const auto kernel = JumpKernel::from_params(p, 10);
        for (int i = 2; i <= 10; ++i) {
            Moments l;
            for (int r = 0; r < 40000; ++r) {
                RngStream rng(6 + i, r);
                l.add(simulate_lambda(kernel, i, rng).functionals.random_external_branch);
            }
            CAPTURE(i);
            CHECK(l.near(oracle[i]));
        }
    }
}

TEST_CASE("bolthausen-sznitman collisions match the exact mean") {
    // E C_n from the first-step recursion E C_i = 1 + Σ_j P(i→j) E C_j (tests/oracles).
    const auto kernel = JumpKernel::from_params({1.0, 0.0}, 1000);
    const struct {
        int n;
        double exact;
        int replicas;
    } cases[] = {{50, 17.9623371, 20000}, {1000, 184.951149668, 2000}};
    for (const auto& c : cases) {
        Moments C;
        for (int r = 0; r < c.replicas; ++r) {
            RngStream rng(30, r);
            C.add(static_cast<double>(simulate_lambda(kernel, c.n, rng).functionals.collisions));
        }
        CAPTURE(c.n);
        CHECK(C.near(c.exact));
    }
    // The recursion itself, for small n.
    const Params bs{1.0, 0.0};
    std::vector<double> e(51, 0.0);
    for (int i = 2; i <= 50; ++i) {
        double v = 1.0;
        for (int j = 2; j < i; ++j) v += lambda_rate(bs, i, j) / total_rate(bs, i) * e[j];
        e[i] = v;
    }
    CHECK(e[50] == doctest::Approx(17.9623371).epsilon(1e-8));
}

TEST_CASE("dense table and on-demand kernel agree in law") {
    const Params p{1.25, -0.5};
    const auto table = lambda_rate_table(p, 30);
    const auto kernel = JumpKernel::from_params(p, 30);
    CHECK(kernel.total(30) == doctest::Approx(JumpKernel::from_table(table).total(30)).epsilon(1e-12));
    Moments a, b;
    for (int r = 0; r < 20000; ++r) {
        RngStream r1(40, r), r2(41, r);
        a.add(simulate_lambda(table, 30, r1).functionals.total_length);
        b.add(simulate_lambda(kernel, 30, r2).functionals.total_length);
    }
    CHECK(std::fabs(a.mean() - b.mean()) <= 3.0 * std::hypot(a.se(), b.se()));
}

TEST_CASE("simulate_lambda errors and caps") {
    const auto table = lambda_rate_table({1.5, 0.0}, 5);
    RngStream rng(50, 0);
    CHECK_THROWS(simulate_lambda(table, 6, rng));
    CHECK_THROWS(JumpKernel::from_params({0.5, 0.0}, 10));
    CHECK_THROWS(simulate_lambda(xi_transition_matrix({0.5, 0.0}, 5), 3, rng));
    const auto capped = simulate_lambda(table, 5, rng, 1);
    CHECK(capped.trajectory.events == 1);
    CHECK((capped.trajectory.truncated || capped.trajectory.states.back().blocks == 1));
}

TEST_CASE("simulate_xi") {
    const auto m = xi_transition_matrix({0.5, 0.0}, 12);
    Moments steps;
    for (int r = 0; r < 20000; ++r) {
        RngStream rng(60, r);
        const auto run = simulate_xi(m, 2, rng);
        steps.add(static_cast<double>(run.steps));
        CHECK(run.collisions == 1);
    }
    CHECK(steps.near(2.0));

    RngStream rng(61, 0);
    const auto none = simulate_xi(m, 1, rng);
    CHECK(none.steps == 0);
    CHECK(none.collisions == 0);

    for (int r = 0; r < 2000; ++r) {
        RngStream path_rng(62, r);
        const auto run = simulate_xi(m, 12, path_rng);
        const auto& s = run.trajectory.states;
        CHECK(s.front().blocks == 12);
        CHECK(s.back().blocks == 1);
        CHECK(run.steps == static_cast<std::int64_t>(s.size()) - 1);
        std::int64_t collisions = 0;
        for (std::size_t k = 1; k < s.size(); ++k) {
            CHECK(s[k].blocks <= s[k - 1].blocks);
            collisions += s[k].blocks < s[k - 1].blocks;
        }
        CHECK(run.collisions == collisions);
    }
    CHECK_THROWS(simulate_xi(m, 13, rng));
    CHECK_THROWS(simulate_xi(lambda_rate_table({1.5, 0.0}, 5), 3, rng));
}

TEST_CASE("functional scaling report") {
    const auto king = functional_scaling_report(CoalescentFamily::kingman(), {50, 200}, 4000, 70);
    CHECK(king.size() == 10);
    for (const auto& row : king) {
        if (row.functional == "total_length") {
            CHECK(row.ratio > 0.7);
            CHECK(row.ratio < 1.3);
        }
        if (row.functional == "external_length") CHECK(std::fabs(row.mean - 2.0) < 0.3);
        if (row.functional == "collisions") CHECK(row.mean == row.n0 - 1);
    }
    // L_i / (2 ln i) = H_{i-1} / ln i drifts down toward 1.
    CHECK(king[1].functional == "total_length");
    CHECK(king[6].functional == "total_length");
    CHECK(king[6].ratio < king[1].ratio);

    CHECK_THROWS(functional_scaling_report(CoalescentFamily::kingman(), {200, 50}, 100, 1));
    CHECK_THROWS(CoalescentFamily::beta(2.5, 0.0));

    std::ostringstream os;
    write_functional_csv(os, king);
    CHECK(os.str().rfind("family,n0,functional,mean,stderr,reference,ratio\n", 0) == 0);

    const auto a = functional_scaling_report(CoalescentFamily::beta(1.5, 0.0), {20, 40}, 200, 71);
    const auto b = functional_scaling_report(CoalescentFamily::beta(1.5, 0.0), {20, 40}, 200, 71);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].mean == b[k].mean);
}

TEST_CASE("trajectory csv") {
    Trajectory t;
    t.states = {{0.0, 3}, {0.5, 1}};
    std::ostringstream os;
    write_trajectory_csv(os, t);
    CHECK(os.str() == "time_or_step,blocks\n0,3\n0.5,1\n");
}
