#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwalk/distribution.hpp"
#include "rwalk/types.hpp"

namespace rwalk {

// Exact finite-n moments of the truncated walks S*(n) = Z^_1 + ... + Z^_n.
// Every function returns a vector v with v[n-1] the value at n, n = 1..n_max.

/// E S^*(n): the mean recursion with factor (n+p)/n; m1 * n when untruncated.
std::vector<double> mean_positive(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max);
/// E S_check*(n): the mean recursion with factor (n-p)/n.
std::vector<double> mean_negative(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max);
/// E Z^_n^2, identical for both signs. Throws std::domain_error("second moment
/// required") when m2 is infinite and rule is None.
std::vector<double> second_moment_innovation(const StepDistribution& dist, double p, Truncation rule,
                                             std::uint64_t n_max);
std::vector<double> var_positive(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max);
std::vector<double> var_negative(const StepDistribution& dist, double p, Truncation rule, std::uint64_t n_max);

/// E N_j(n). j = 1 starts from E N_1(1) = 1, j >= 2 from 1 - p.
double expected_occupancy(double p, std::uint64_t j, std::uint64_t n);
/// E Delta_j(n), same starting values as expected_occupancy.
double expected_delta(double p, std::uint64_t j, std::uint64_t n);
/// E Delta_j(n)^2 by the exact recursion, O(n - j).
double expected_delta2(double p, std::uint64_t j, std::uint64_t n);

struct MomentTable {
    std::vector<std::uint64_t> grid;
    std::vector<double> mean_S;
    std::vector<double> var_S;
    std::vector<double> mean_Z2;
    Sign sign = Sign::Positive;
    Truncation truncation = Truncation::None;
    double p = 0.0;
};

/// Tabulates the recursions on `grid` (sorted, values in 1..n_max).
MomentTable moment_table(const StepDistribution& dist, double p, Sign sign, Truncation rule,
                         const std::vector<std::uint64_t>& grid);

/// var / n in the diffusive cases, var / (n log n) for the critical positive
/// walk (NaN at n = 1) and var / n^{2p} for the super-diffusive positive walk.
double regime_normalized_variance(double var, std::uint64_t n, double p, Sign sign);
/// "diffusive n", "critical n log n" or "super-diffusive O(n^{2p})".
std::string variance_regime(double p, Sign sign);

/// CSV with columns n,mean,var,regime_normalized_var.
void write_moment_csv(std::ostream& out, const MomentTable& table);

// ---------------------------------------------------------------------------
// Solver for a_{n+1} = ((n + x) / n) a_n + b_{n+1}.

/// b_n = limit + c * n^(-r).
struct BSequence {
    double limit = 1.0;
    double c = 0.0;
    double r = 1.0;

    double operator()(std::uint64_t n) const;
};

enum class AsymptoticClass { Linear, NLogN, PowerX };

struct RecursionSolution {
    double x = 0.0;
    std::uint64_t n_max = 0;
    std::vector<double> iterates;  // iterates[n-1] = a_n
    AsymptoticClass asymptotic = AsymptoticClass::Linear;
    /// "b n / (1 - x)", "b n log n" or "O(n^x)".
    std::string label;
    /// a_n divided by the class prediction at n_max (b n/(1-x) or b n ln n);
    /// for PowerX, a_n / n^x at n_max.
    double ratio = 0.0;
    /// PowerX only: (a_n / n^x at n_max) / (same at n_max / 10).
    double drift = 1.0;
    /// max over checked n of |iterate - kernel sum| / |kernel sum|, where the
    /// kernel sum is a_1 gamma_{1,n}(x) + sum_j b_j gamma_{j,n}(x).
    double kernel_error = 0.0;
};

RecursionSolution recursion_solve(double x, const BSequence& b, double a1, std::uint64_t n_max);

}  // namespace rwalk
