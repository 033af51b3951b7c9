#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rwalk/rng.hpp"
#include "rwalk/types.hpp"

namespace rwalk {

/// A real number or +infinity, with the infinity carried as a flag.
class ExtendedReal {
public:
    static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
    static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

    bool is_finite() const noexcept { return !infinite_; }
    /// Throws std::domain_error when infinite.
    double value() const;
    std::string to_string() const;

    friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

private:
    ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
    double value_;
    bool infinite_;
};

struct Rademacher {};
struct Gaussian {
    double mean = 0.0;
    double sd = 1.0;
};
/// Takes value `a` with probability `prob_a`, otherwise `b`.
struct TwoPoint {
    double a = 0.0;
    double b = 0.0;
    double prob_a = 0.5;
};
struct Constant {
    double c = 0.0;
};
/// Survival function (scale/x)^alpha for x >= scale.
struct Pareto {
    double alpha = 2.0;
    double scale = 1.0;
};

using DistributionKind = std::variant<Rademacher, Gaussian, TwoPoint, Constant, Pareto>;

/// One atom of a finite-support law.
struct Atom {
    double value;
    double probability;
};

// Per-kind samplers. Kept as free functions so the walk loop can be
// instantiated once per kind.
inline double draw(const Rademacher&, RandomStream& rng) noexcept { return rng.sign(); }
inline double draw(const Gaussian& g, RandomStream& rng) noexcept {
    return g.mean + g.sd * rng.normal();
}
inline double draw(const TwoPoint& t, RandomStream& rng) noexcept {
    return rng.uniform() < t.prob_a ? t.a : t.b;
}
inline double draw(const Constant& c, RandomStream&) noexcept { return c.c; }
inline double draw(const Pareto& d, RandomStream& rng) noexcept {
    return d.scale * std::pow(1.0 - rng.uniform(), -1.0 / d.alpha);
}

/// Step law of the walk together with its analytic moments m1 = E X, m2 = E X^2.
class StepDistribution {
public:
    /// Validates parameters and computes the moments. Throws std::invalid_argument.
    explicit StepDistribution(DistributionKind kind);

    static StepDistribution rademacher() { return StepDistribution(Rademacher{}); }
    static StepDistribution gaussian(double mean, double sd) { return StepDistribution(Gaussian{mean, sd}); }
    static StepDistribution two_point(double a, double b, double prob_a) {
        return StepDistribution(TwoPoint{a, b, prob_a});
    }
    static StepDistribution constant(double c) { return StepDistribution(Constant{c}); }
    static StepDistribution pareto(double alpha, double scale) { return StepDistribution(Pareto{alpha, scale}); }

    /// Parses "rademacher", "gaussian:MEAN,SD", "twopoint:A,B,PROB_A",
    /// "constant:C" or "pareto:ALPHA,SCALE".
    static StepDistribution parse(std::string_view text);
    /// Canonical text form accepted by parse(); round-trips exactly.
    std::string to_string() const;

    const DistributionKind& kind() const noexcept { return kind_; }
    double m1() const noexcept { return m1_; }
    const ExtendedReal& m2() const noexcept { return m2_; }
    /// Var X. Throws std::domain_error("second moment required") when m2 is infinite.
    double sigma2() const;

    double sample(RandomStream& rng) const {
        return std::visit([&](const auto& k) { return draw(k, rng); }, kind_);
    }

    bool has_finite_support() const noexcept;
    /// Atoms with positive probability. Throws for continuous laws.
    std::vector<Atom> support() const;

    /// E[X^k 1{|X| <= level}] for k in 0..4; level may be +infinity.
    /// Returns +infinity when the untruncated moment diverges.
    double truncated_moment(int k, double level) const;
    /// E[Z_n^k] with Z_n = X_n 1{|X_n| <= t_n}. Atoms use the same boundary
    /// test as the simulator.
    double truncated_moment(int k, Truncation rule, std::uint64_t n) const;

private:
    DistributionKind kind_;
    double m1_ = 0.0;
    ExtendedReal m2_ = ExtendedReal::finite(0.0);
};

/// Constants of the counterbalanced walk: mu_check = (1-p)m1/(1+p),
/// sigma_check2 = m2 - mu_check^2, sigma2 = m2 - m1^2.
struct DerivedConstants {
    double mu_check;
    double sigma_check2;
    double sigma2;
};

DerivedConstants derived_constants(const StepDistribution& dist, double p);

}  // namespace rwalk
