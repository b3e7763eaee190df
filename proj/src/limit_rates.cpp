#include "pcoal/limit_rates.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "pcoal/specfun.hpp"

namespace pcoal {

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::Xi: return "xi";
        case Regime::BolthausenSznitman: return "bs";
        case Regime::Beta: return "beta";
        case Regime::Critical: return "critical";
        case Regime::Kingman: return "kingman";
    }
    return "unknown";
}

Params Params::make(double alpha, double beta) {
    Params p{alpha, beta};
    p.validate();
    return p;
}

void Params::validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    if (alpha < 2.0 && !(beta < alpha)) throw std::invalid_argument("beta < alpha required");
}

Regime Params::regime() const {
    if (alpha < 1.0) return Regime::Xi;
    if (alpha == 1.0) return Regime::BolthausenSznitman;
    if (alpha < 2.0) return Regime::Beta;
    if (alpha == 2.0) return Regime::Critical;
    return Regime::Kingman;
}

RateTable::RateTable(TableKind kind, int i_max) : kind_(kind), i_max_(i_max) {
    if (i_max < 1) throw std::invalid_argument("RateTable: i_max must be >= 1");
    entries_.assign(static_cast<std::size_t>(i_max) * (i_max + 1) / 2, 0.0);
}

std::size_t RateTable::index(int i, int j) const {
    const int j_hi = kind_ == TableKind::Rates ? i - 1 : i;
    if (i < 1 || i > i_max_ || j < 1 || j > j_hi) throw std::out_of_range("RateTable: index out of range");
    return static_cast<std::size_t>(i) * (i - 1) / 2 + static_cast<std::size_t>(j - 1);
}

double RateTable::at(int i, int j) const { return entries_[index(i, j)]; }

void RateTable::set(int i, int j, double value) { entries_[index(i, j)] = value; }

double RateTable::total(int i) const {
    const int j_hi = kind_ == TableKind::Rates ? i - 1 : i;
    double s = 0.0;
    for (int j = 1; j <= j_hi; ++j) s += at(i, j);
    return s;
}

void RateTable::write_csv(std::ostream& os) const {
    os << "i,j,value\n";
    const auto old = os.precision(12);
    for (int i = 1; i <= i_max_; ++i) {
        const int j_hi = kind_ == TableKind::Rates ? i - 1 : i;
        for (int j = 1; j <= j_hi; ++j) os << i << ',' << j << ',' << at(i, j) << '\n';
    }
    os.precision(old);
}

namespace {

void require_lambda_regime(const Params& p) {
    p.validate();
    if (p.alpha < 1.0 || p.alpha >= 2.0)
        throw std::domain_error("Lambda-coalescent rates need alpha in [1, 2) (" + to_string(p.regime()) + " regime)");
}

void require_rate_regime(const Params& p) {
    p.validate();
    if (p.alpha < 1.0) throw std::domain_error("continuous-time rates are undefined in the xi regime");
}

}  // namespace

double lambda_rate(const Params& params, int i, int j) {
    require_lambda_regime(params);
    if (i < 2 || j < 1 || j >= i) throw std::domain_error("lambda_rate: need 1 <= j < i");
    const double a = params.alpha, b = params.beta;
    return std::exp(log_binomial(i, j - 1) + log_beta(i - j + 1 - a, a - b + j - 1) - log_beta(2.0 - a, a - b));
}

std::vector<double> lambda_row(const Params& params, int i) {
    require_lambda_regime(params);
    if (i < 2) throw std::domain_error("lambda_row: need i >= 2");
    const double a = params.alpha, b = params.beta;
    std::vector<double> row(static_cast<std::size_t>(i - 1));
    // w(k) is the rate of a k-merger, k = i - j + 1.
    double w = std::exp(log_binomial(i, 2) + log_beta(2.0 - a, i - 2 + a - b) - log_beta(2.0 - a, a - b));
    for (int k = 2; k <= i; ++k) {
        row[static_cast<std::size_t>(i - k)] = w;
        if (k < i) w *= (static_cast<double>(i - k) / (k + 1)) * ((k - a) / (i - k - 1 + a - b));
    }
    return row;
}

double kingman_rate(int i, int j) {
    if (i < 2 || j < 1 || j >= i) throw std::domain_error("kingman_rate: need 1 <= j < i");
    return j == i - 1 ? 0.5 * i * (i - 1.0) : 0.0;
}

double total_rate(const Params& params, int i) {
    require_rate_regime(params);
    if (i < 2) throw std::domain_error("total_rate: need i >= 2");
    if (params.kingman_limit()) return 0.5 * i * (i - 1.0);
    double s = 0.0;
    for (double v : lambda_row(params, i)) s += v;
    return s;
}

double block_loss_rate(const Params& params, int i) {
    require_rate_regime(params);
    if (i < 2) throw std::domain_error("block_loss_rate: need i >= 2");
    if (params.kingman_limit()) return 0.5 * i * (i - 1.0);
    const auto row = lambda_row(params, i);
    double s = 0.0;
    for (int j = 1; j < i; ++j) s += (i - j) * row[static_cast<std::size_t>(j - 1)];
    return s;
}

double mean_first_collision_size(const Params& params, int i) {
    return 1.0 + block_loss_rate(params, i) / total_rate(params, i);
}

std::vector<double> comes_down_diagnostic(const Params& params, int M) {
    require_rate_regime(params);
    if (M < 2) throw std::domain_error("comes_down_diagnostic: need M >= 2");
    std::vector<double> partial;
    partial.reserve(static_cast<std::size_t>(M - 1));
    double s = 0.0;
    for (int i = 2; i <= M; ++i) {
        s += 1.0 / block_loss_rate(params, i);
        partial.push_back(s);
    }
    return partial;
}

RateTable lambda_rate_table(const Params& params, int i_max) {
    require_rate_regime(params);
    RateTable table(TableKind::Rates, i_max);
    for (int i = 2; i <= i_max; ++i) {
        if (params.kingman_limit()) {
            table.set(i, i - 1, kingman_rate(i, i - 1));
            continue;
        }
        const auto row = lambda_row(params, i);
        for (int j = 1; j < i; ++j) table.set(i, j, row[static_cast<std::size_t>(j - 1)]);
    }
    return table;
}

RateTable xi_transition_matrix(const Params& params, int i_max) {
    params.validate();
    if (params.alpha >= 1.0) throw std::domain_error("xi_transition_matrix: need alpha in [0, 1)");
    if (i_max < 1 || i_max > 30) throw std::domain_error("xi_transition_matrix: i_max must be in [1, 30]");
    if (params.alpha == 0.0) return stirling_case_matrix(params.beta, i_max);
    const double a = params.alpha, b = params.beta;

    // g(m) = Γ(m-α) / (Γ(1-α) m!); D[j][n] sums Π g(i_l) over compositions of n into j parts.
    std::vector<double> g(static_cast<std::size_t>(i_max) + 1, 0.0);
    for (int m = 1; m <= i_max; ++m) g[m] = std::exp(log_gamma(m - a) - log_gamma(1.0 - a) - log_gamma(m + 1.0));
    std::vector<std::vector<double>> D(static_cast<std::size_t>(i_max) + 1,
                                       std::vector<double>(static_cast<std::size_t>(i_max) + 1, 0.0));
    for (int n = 1; n <= i_max; ++n) D[1][n] = g[n];
    for (int j = 2; j <= i_max; ++j)
        for (int n = j; n <= i_max; ++n) {
            double s = 0.0;
            for (int m = 1; m <= n - j + 1; ++m) s += g[m] * D[j - 1][n - m];
            D[j][n] = s;
        }

    RateTable table(TableKind::Probabilities, i_max);
    const double ratio = b / a;
    const double log_front = log_gamma(1.0 - b) - log_gamma(1.0 - ratio);
    for (int i = 1; i <= i_max; ++i)
        for (int j = 1; j <= i; ++j) {
            const double log_pref = log_gamma(i + 1.0) - log_gamma(j + 1.0) + (j - 1) * std::log(a) + log_front +
                                    log_gamma(j - ratio) - log_gamma(i - b);
            table.set(i, j, std::exp(log_pref) * D[j][i]);
        }
    return table;
}

double xi_merger_prob(const Params& params, const std::vector<int>& composition) {
    params.validate();
    if (params.alpha <= 0.0 || params.alpha >= 1.0) throw std::domain_error("xi_merger_prob: need alpha in (0, 1)");
    if (composition.empty()) throw std::domain_error("xi_merger_prob: empty composition");
    const double a = params.alpha, b = params.beta;
    const int j = static_cast<int>(composition.size());
    int i = 0;
    double log_prod = 0.0;
    for (int part : composition) {
        if (part < 1) throw std::domain_error("xi_merger_prob: parts must be >= 1");
        i += part;
        log_prod += log_gamma(part - a);
    }
    // c_{j,α,β} = Π_{l=1}^{j} Γ((l-1)α + 1 - β) / (Γ(1-α) Γ(lα - β))
    double log_c = 0.0;
    for (int l = 1; l <= j; ++l) log_c += log_gamma((l - 1) * a + 1.0 - b) - log_gamma(1.0 - a) - log_gamma(l * a - b);
    return std::exp(log_c + log_gamma(a * j - b) - log_gamma(i - b) + log_prod);
}

std::vector<std::vector<double>> stirling_first_kind(int n) {
    std::vector<std::vector<double>> s(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    s[0][0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= i + 1; ++j) s[i + 1][j] = s[i][j - 1] + i * s[i][j];
    return s;
}

RateTable stirling_case_matrix(double beta, int i_max) {
    if (!(beta < 0.0)) throw std::domain_error("stirling_case_matrix: beta < 0 required");
    if (i_max < 1 || i_max > 30) throw std::domain_error("stirling_case_matrix: i_max must be in [1, 30]");
    const auto s = stirling_first_kind(i_max);
    RateTable table(TableKind::Probabilities, i_max);
    const double log_neg_beta = std::log(-beta);
    const double log_gamma_neg_beta = log_gamma(-beta);
    for (int i = 1; i <= i_max; ++i)
        for (int j = 1; j <= i; ++j)
            table.set(i, j, std::exp(j * log_neg_beta + log_gamma_neg_beta - log_gamma(i - beta) + std::log(s[i][j])));
    return table;
}

CNAsymptotic c_N_asymptotic(const Params& params, std::int64_t N) {
    params.validate();
    if (N < 3) throw std::domain_error("c_N_asymptotic: need N >= 3");
    const double n = static_cast<double>(N);
    const double a = params.alpha;
    const Regime regime = params.regime();
    switch (regime) {
        case Regime::Xi: return {(1.0 - a) / (1.0 - params.beta), regime};
        case Regime::BolthausenSznitman: return {1.0 / std::log(n), regime};
        case Regime::Beta: {
            const double mu = a / (a - 1.0);
            const double log_v = std::log(a) - a * std::log(mu) + log_beta(2.0 - a, a - params.beta) - (a - 1.0) * std::log(n);
            return {std::exp(log_v), regime};
        }
        case Regime::Critical: return {0.5 * std::log(n) / n, regime};
        case Regime::Kingman: {
            const double mu = a / (a - 1.0);
            const double rho = a / (a - 2.0);
            return {rho / (mu * mu) / n, regime};
        }
    }
    throw std::logic_error("unreachable");
}

double gamma_family_c_N(double theta, std::int64_t N) {
    if (!(theta > 0.0) || N < 1) throw std::invalid_argument("gamma_family_c_N: need theta > 0, N >= 1");
    return (1.0 + theta) / (theta * static_cast<double>(N) + 1.0);
}

double gamma_family_c_N_leading(double theta, std::int64_t N) {
    if (!(theta > 0.0) || N < 1) throw std::invalid_argument("gamma_family_c_N_leading: need theta > 0, N >= 1");
    return (1.0 + theta) / (theta * static_cast<double>(N));
}

}  // namespace pcoal
