#include "rwalk/moments.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rwalk/format.hpp"
#include "rwalk/gamma_ratio.hpp"

namespace rwalk {

namespace {

void check_args(double p, std::uint64_t n_max) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("moments: p must lie in [0,1]");
    if (n_max == 0) throw std::invalid_argument("moments: n_max must be >= 1");
}

void require_second_moment(const StepDistribution& dist, Truncation rule) {
    if (!dist.m2().is_finite() && rule == Truncation::None) throw std::domain_error("second moment required");
}

// E Z_k and E Z_k^2 for k = 1..n_max.
struct Innovations {
    std::vector<long double> m1;
    std::vector<long double> m2;
};

Innovations innovations(const StepDistribution& dist, Truncation rule, std::uint64_t n_max, bool second) {
    Innovations z;
    z.m1.resize(n_max);
    if (second) z.m2.resize(n_max);
    if (rule == Truncation::None) {
        const long double m1 = dist.m1();
        const long double m2 = second ? static_cast<long double>(dist.m2().value()) : 0.0L;
        for (std::uint64_t k = 0; k < n_max; ++k) {
            z.m1[k] = m1;
            if (second) z.m2[k] = m2;
        }
        return z;
    }
    for (std::uint64_t k = 1; k <= n_max; ++k) {
        z.m1[k - 1] = dist.truncated_moment(1, rule, k);
        if (second) z.m2[k - 1] = dist.truncated_moment(2, rule, k);
    }
    return z;
}

std::vector<double> mean_recursion(const Innovations& z, double p, double sign) {
    const auto n_max = z.m1.size();
    std::vector<double> out(n_max);
    long double mean = z.m1[0];
    out[0] = static_cast<double>(mean);
    const long double pl = p;
    for (std::size_t n = 1; n < n_max; ++n) {
        const long double nl = static_cast<long double>(n);
        mean = ((nl + sign * pl) / nl) * mean + (1.0L - pl) * z.m1[n];
        out[n] = static_cast<double>(mean);
    }
    return out;
}

// Shared by both signs: E Z^_{n+1}^2 = (p/n) sum_{k<=n} E Z^_k^2 + (1-p) E Z_{n+1}^2.
std::vector<long double> innovation_second_moments(const Innovations& z, double p) {
    const auto n_max = z.m2.size();
    std::vector<long double> e2(n_max);
    e2[0] = z.m2[0];
    long double running = e2[0];
    const long double pl = p;
    for (std::size_t n = 1; n < n_max; ++n) {
        e2[n] = (pl / static_cast<long double>(n)) * running + (1.0L - pl) * z.m2[n];
        running += e2[n];
    }
    return e2;
}

std::vector<double> variance_recursion(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max,
                                       double sign) {
    check_args(p, n_max);
    require_second_moment(dist, rule);
    const auto z = innovations(dist, rule, n_max, true);
    const auto e2 = innovation_second_moments(z, p);
    const long double pl = p;
    std::vector<double> out(n_max);
    long double var = z.m2[0] - z.m1[0] * z.m1[0];
    long double mean = z.m1[0];
    long double sum_e2 = e2[0];
    out[0] = static_cast<double>(var);
    for (std::size_t n = 1; n < n_max; ++n) {
        const long double nl = static_cast<long double>(n);
        const long double cond_mean = sign * (pl / nl) * mean + (1.0L - pl) * z.m1[n];
        const long double b = (pl / nl) * sum_e2 + (1.0L - pl) * z.m2[n] - cond_mean * cond_mean;
        var = ((nl + 2.0L * sign * pl) / nl) * var + b;
        mean = mean + cond_mean;
        sum_e2 += e2[n];
        out[n] = static_cast<double>(var);
    }
    return out;
}

}  // namespace

std::vector<double> mean_positive(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max) {
    check_args(p, n_max);
    if (rule == Truncation::None) {
        std::vector<double> out(n_max);
        for (std::uint64_t n = 1; n <= n_max; ++n) out[n - 1] = dist.m1() * static_cast<double>(n);
        return out;
    }
    return mean_recursion(innovations(dist, rule, n_max, false), p, 1.0);
}

std::vector<double> mean_negative(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max) {
    check_args(p, n_max);
    return mean_recursion(innovations(dist, rule, n_max, false), p, -1.0);
}

std::vector<double> second_moment_innovation(const StepDistribution& dist, double p, Truncation rule,
                                             std::uint64_t n_max) {
    check_args(p, n_max);
    require_second_moment(dist, rule);
    const auto e2 = innovation_second_moments(innovations(dist, rule, n_max, true), p);
    return {e2.begin(), e2.end()};
}

std::vector<double> var_positive(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max) {
    return variance_recursion(dist, p, rule, n_max, 1.0);
}

std::vector<double> var_negative(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max) {
    return variance_recursion(dist, p, rule, n_max, -1.0);
}

namespace {

void check_jn(double p, std::uint64_t j, std::uint64_t n) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    if (j == 0) throw std::invalid_argument("j must be >= 1");
    if (j > n) throw std::invalid_argument("j must not exceed n");
}

double root_probability(double p, std::uint64_t j) { return j == 1 ? 1.0 : 1.0 - p; }

}  // namespace

double expected_occupancy(double p, std::uint64_t j, std::uint64_t n) {
    check_jn(p, j, n);
    return root_probability(p, j) * growth_factor(p, j, n);
}

double expected_delta(double p, std::uint64_t j, std::uint64_t n) {
    check_jn(p, j, n);
    return root_probability(p, j) * growth_factor(-p, j, n);
}

double expected_delta2(double p, std::uint64_t j, std::uint64_t n) {
    check_jn(p, j, n);
    const long double pl = p;
    long double occupancy = root_probability(p, j);
    long double delta2 = occupancy;
    for (std::uint64_t k = j; k < n; ++k) {
        const long double kl = static_cast<long double>(k);
        delta2 = ((kl - 2.0L * pl) / kl) * delta2 + (pl / kl) * occupancy;
        occupancy *= (kl + pl) / kl;
    }
    return static_cast<double>(delta2);
}

MomentTable moment_table(const StepDistribution& dist, double p, Sign sign, Truncation rule,
                         const std::vector<std::uint64_t>& grid) {
    if (grid.empty()) throw std::invalid_argument("moment_table: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == 0 || (i > 0 && grid[i] <= grid[i - 1])) {
            throw std::invalid_argument("moment_table: grid must be strictly increasing and >= 1");
        }
    }
    const auto n_max = grid.back();
    const bool positive = sign == Sign::Positive;
    const auto mean = positive ? mean_positive(dist, p, rule, n_max) : mean_negative(dist, p, rule, n_max);
    const auto var = positive ? var_positive(dist, p, rule, n_max) : var_negative(dist, p, rule, n_max);
    const auto e2 = second_moment_innovation(dist, p, rule, n_max);
    MomentTable table;
    table.grid = grid;
    table.sign = sign;
    table.truncation = rule;
    table.p = p;
    for (auto n : grid) {
        table.mean_S.push_back(mean[n - 1]);
        table.var_S.push_back(var[n - 1]);
        table.mean_Z2.push_back(e2[n - 1]);
    }
    return table;
}

double regime_normalized_variance(double var, std::uint64_t n, double p, Sign sign) {
    const double nd = static_cast<double>(n);
    if (sign == Sign::Negative || p < 0.5) return var / nd;
    if (p == 0.5) return n == 1 ? std::numeric_limits<double>::quiet_NaN() : var / (nd * std::log(nd));
    return var / std::pow(nd, 2.0 * p);
}

std::string variance_regime(double p, Sign sign) {
    if (sign == Sign::Negative || p < 0.5) return "diffusive n";
    if (p == 0.5) return "critical n log n";
    return "super-diffusive O(n^{2p})";
}

void write_moment_csv(std::ostream& out, const MomentTable& table) {
    out << "n,mean,var,regime_normalized_var\n";
    for (std::size_t i = 0; i < table.grid.size(); ++i) {
        const auto n = table.grid[i];
        out << n << ',' << format_double(table.mean_S[i]) << ',' << format_double(table.var_S[i]) << ','
            << format_double(regime_normalized_variance(table.var_S[i], n, table.p, table.sign)) << '\n';
    }
}

// ---------------------------------------------------------------------------

double BSequence::operator()(std::uint64_t n) const {
    return c == 0.0 ? limit : limit + c * std::pow(static_cast<double>(n), -r);
}

RecursionSolution recursion_solve(double x, const BSequence& b, double a1, std::uint64_t n_max) {
    if (n_max < 2) throw std::invalid_argument("recursion_solve: n_max must be >= 2");
    RecursionSolution sol;
    sol.x = x;
    sol.n_max = n_max;
    sol.iterates.resize(n_max);
    long double a = a1;
    sol.iterates[0] = a1;
    for (std::uint64_t n = 1; n < n_max; ++n) {
        const long double nl = static_cast<long double>(n);
        a = ((nl + x) / nl) * a + b(n + 1);
        sol.iterates[n] = static_cast<double>(a);
    }

    const double n = static_cast<double>(n_max);
    const double an = sol.iterates.back();
    if (x < 1.0) {
        sol.asymptotic = AsymptoticClass::Linear;
        sol.label = "b n / (1 - x)";
        sol.ratio = an / (b.limit * n / (1.0 - x));
    } else if (x == 1.0) {
        sol.asymptotic = AsymptoticClass::NLogN;
        sol.label = "b n log n";
        sol.ratio = an / (b.limit * n * std::log(n));
    } else {
        sol.asymptotic = AsymptoticClass::PowerX;
        sol.label = "O(n^x)";
        sol.ratio = an / std::pow(n, x);
        const auto tenth = std::max<std::uint64_t>(n_max / 10, 1);
        sol.drift = sol.ratio / (sol.iterates[tenth - 1] / std::pow(static_cast<double>(tenth), x));
    }

    // Independent evaluation through the product kernel.
    std::vector<std::uint64_t> checks{std::min<std::uint64_t>(10, n_max), std::max<std::uint64_t>(n_max / 10, 1),
                                      n_max};
    for (auto m : checks) {
        long double kernel = static_cast<long double>(a1) * growth_factor(x, 1, m);
        for (std::uint64_t j = 2; j <= m; ++j) kernel += static_cast<long double>(b(j)) * growth_factor(x, j, m);
        const double ref = static_cast<double>(kernel);
        const double err = ref == 0.0 ? std::fabs(sol.iterates[m - 1])
                                      : std::fabs(sol.iterates[m - 1] - ref) / std::fabs(ref);
        sol.kernel_error = std::max(sol.kernel_error, err);
    }
    return sol;
}

}  // namespace rwalk
