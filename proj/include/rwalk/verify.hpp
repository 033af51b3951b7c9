#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rwalk/distribution.hpp"
#include "rwalk/types.hpp"

namespace rwalk {

enum class CheckId {
    LlnPos,
    LlnNeg,
    VarRegimes,
    CltMarginalPos,
    CltMarginalNeg,
    FcltCovPos,
    FcltCovNeg,
    CriticalMarginal,
    LilBand,
    MartingaleConditions,
    MomentInequality,
};

/// "LLN-pos", "LLN-neg", "Var-regimes", "CLT-marginal-pos", ...
std::string to_string(CheckId id);
CheckId parse_check_id(std::string_view text);
std::vector<CheckId> all_checks();

struct CheckSpec {
    CheckId id = CheckId::LlnPos;
    StepDistribution dist = StepDistribution::rademacher();
    double p = 0.25;
    /// Used by checks that are not tied to one sign by their id.
    Sign sign = Sign::Positive;
    Truncation truncation = Truncation::None;
    std::uint64_t n = 100'000;
    std::uint64_t replicas = 1000;
    std::uint64_t seed = 1;
    /// 0.01 or 0.05.
    double level = 0.01;
    /// Replaces the statistical band of LLN checks by a fixed half-width.
    std::optional<double> abs_tolerance;
    /// Times t in (0, 1] (critical check, covariance grid).
    std::vector<double> times;
    /// Threshold constant of the martingale conditions.
    double c = 1.0;
    /// Moment order 2m of the moment inequality, m in {1, 2}.
    int m = 1;
    /// Worker threads; never changes a result.
    unsigned parallelism = 1;

    /// Throws std::invalid_argument for an inconsistent spec.
    void validate() const;
};

/// Desk-scale defaults for each check.
CheckSpec default_check_spec(CheckId id);

/// One pass/fail condition: passed iff lower <= statistic <= upper.
struct Criterion {
    std::string name;
    double statistic = 0.0;
    double target = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double standard_error = 0.0;
    bool passed = false;
};

struct VerificationReport {
    CheckSpec spec;
    std::string regime;
    /// The first entry is the headline statistic.
    std::vector<Criterion> criteria;
    bool passed = false;
    std::string notes;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();

    const Criterion& primary() const { return criteria.at(0); }
};

VerificationReport check_lln(const CheckSpec& spec);
VerificationReport check_variance_regimes(const CheckSpec& spec);
VerificationReport check_clt_marginal(const CheckSpec& spec);
VerificationReport check_critical(const CheckSpec& spec);
VerificationReport check_fclt_covariance(const CheckSpec& spec);
VerificationReport check_lil_band(const CheckSpec& spec);
VerificationReport check_martingale_conditions(const CheckSpec& spec);
VerificationReport check_moment_inequality(const CheckSpec& spec);

/// Dispatches on spec.id.
VerificationReport run_check(const CheckSpec& spec);

/// Smallest D with P(K > (sqrt(R) + 0.12 + 0.11/sqrt(R)) D) <= level.
double ks_critical_value(std::uint64_t sample_size, double level);

/// Frozen band for the LIL check: median(M*/constant) >= median_lower and
/// q95(M*/constant) <= q95_upper.
struct LilBand {
    double calibrated_median = 0.0;
    double calibrated_q95 = 0.0;
    double median_lower = 0.0;
    double q95_upper = 0.0;
    bool frozen = false;
};

LilBand lil_band(Sign sign, double p, unsigned first_exp, unsigned horizon_exp);

nlohmann::ordered_json spec_to_json(const CheckSpec& spec);
nlohmann::ordered_json report_to_json(const VerificationReport& report);
/// Fixed-width text table, one row per criterion.
std::string reports_table(const std::vector<VerificationReport>& reports);

}  // namespace rwalk
