#pragma once

// Brute-force enumeration of every (epsilon, U, X) history of a short walk.
// Shares no code with the simulator or the moment recursions.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rwalk/distribution.hpp"
#include "rwalk/types.hpp"

namespace rwalk {

inline constexpr std::uint64_t kOracleMaxSteps = 9;
/// Functionals of the forest alone skip the X branches.
inline constexpr std::uint64_t kOracleMaxStepsGenealogy = 10;

struct ExactOutcome {
    double value = 0.0;
    long double probability = 0.0L;
};

/// Law of a real functional: distinct values in increasing order.
class ExactLaw {
public:
    explicit ExactLaw(std::vector<ExactOutcome> outcomes) : outcomes_(std::move(outcomes)) {}

    const std::vector<ExactOutcome>& outcomes() const noexcept { return outcomes_; }
    long double total() const noexcept;
    /// E[V^k].
    long double moment(int k) const noexcept;
    long double mean() const noexcept { return moment(1); }
    long double variance() const noexcept;

private:
    std::vector<ExactOutcome> outcomes_;
};

enum class FunctionalKind {
    WalkValue,        // S(n)
    LastInnovation,   // the n-th step of the walk, Z^_n or Z_check_n
    Occupancy,        // N_j(n)
    SignedOccupancy,  // Delta_j(n)
};

struct Functional {
    FunctionalKind kind = FunctionalKind::WalkValue;
    std::uint64_t j = 0;

    static Functional walk_value() { return {FunctionalKind::WalkValue, 0}; }
    static Functional last_innovation() { return {FunctionalKind::LastInnovation, 0}; }
    static Functional occupancy(std::uint64_t j) { return {FunctionalKind::Occupancy, j}; }
    static Functional signed_occupancy(std::uint64_t j) { return {FunctionalKind::SignedOccupancy, j}; }

    bool genealogy_only() const noexcept {
        return kind == FunctionalKind::Occupancy || kind == FunctionalKind::SignedOccupancy;
    }

    /// "S", "Z", "N:<j>", "Delta:<j>".
    std::string to_string() const;
    static Functional parse(std::string_view text);
};

/// Exact law of `f` after n steps, enumerating epsilon_2..epsilon_n, U_2..U_n
/// and (unless f is a forest functional) X_1..X_n with their probabilities.
/// Truncation is applied to fresh steps at birth. Throws std::invalid_argument
/// when n exceeds the bound or the law lacks finite support.
ExactLaw enumerate_exact(const StepDistribution& dist, double p, Sign sign, Truncation rule, std::uint64_t n,
                         const Functional& f);

}  // namespace rwalk
