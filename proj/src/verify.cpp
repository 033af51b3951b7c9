#include "rwalk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rwalk/detail/walk_loop.hpp"
#include "rwalk/format.hpp"
#include "rwalk/gamma_ratio.hpp"
#include "rwalk/limits.hpp"
#include "rwalk/moments.hpp"
#include "rwalk/oracle.hpp"
#include "rwalk/parallel.hpp"
#include "rwalk/stats.hpp"
#include "rwalk/walk.hpp"

namespace rwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CheckName {
    CheckId id;
    const char* name;
};

constexpr CheckName kCheckNames[] = {
    {CheckId::LlnPos, "LLN-pos"},
    {CheckId::LlnNeg, "LLN-neg"},
    {CheckId::VarRegimes, "Var-regimes"},
    {CheckId::CltMarginalPos, "CLT-marginal-pos"},
    {CheckId::CltMarginalNeg, "CLT-marginal-neg"},
    {CheckId::FcltCovPos, "FCLT-cov-pos"},
    {CheckId::FcltCovNeg, "FCLT-cov-neg"},
    {CheckId::CriticalMarginal, "Critical-marginal"},
    {CheckId::LilBand, "LIL-band"},
    {CheckId::MartingaleConditions, "Martingale-conditions"},
    {CheckId::MomentInequality, "Moment-inequality"},
};

// Replica r of check `id` uses stream (seed, base(id) + r + 1), so two checks
// run with the same seed never share a stream.
std::uint64_t stream_base(CheckId id) { return (static_cast<std::uint64_t>(id) + 1) << 40; }

constexpr std::uint64_t kBootstrapStream = 0xB0075000ull << 32;

}  // namespace

std::string to_string(CheckId id) {
    for (const auto& c : kCheckNames) {
        if (c.id == id) return c.name;
    }
    return "?";
}

CheckId parse_check_id(std::string_view text) {
    for (const auto& c : kCheckNames) {
        if (text == c.name) return c.id;
    }
    std::string known;
    for (const auto& c : kCheckNames) known += std::string(known.empty() ? "" : ", ") + c.name;
    throw std::invalid_argument("unknown check '" + std::string(text) + "' (known: " + known + ")");
}

std::vector<CheckId> all_checks() {
    std::vector<CheckId> ids;
    for (const auto& c : kCheckNames) ids.push_back(c.id);
    return ids;
}

void CheckSpec::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("check: p must lie in [0,1]");
    if (n == 0) throw std::invalid_argument("check: n must be positive");
    if (replicas == 0) throw std::invalid_argument("check: replicas must be positive");
    if (level != 0.01 && level != 0.05) throw std::invalid_argument("check: level must be 0.01 or 0.05");
    if (abs_tolerance && !(*abs_tolerance > 0.0)) throw std::invalid_argument("check: abs_tolerance must be positive");
    for (double t : times) {
        if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("check: times must lie in (0,1]");
    }
    if (!(c > 0.0)) throw std::invalid_argument("check: c must be positive");
    if (m != 1 && m != 2) throw std::invalid_argument("check: m must be 1 or 2");
}

CheckSpec default_check_spec(CheckId id) {
    CheckSpec s;
    s.id = id;
    switch (id) {
        case CheckId::LlnPos:
            s.dist = StepDistribution::gaussian(1.0, 1.0);
            s.p = 0.5;
            s.replicas = 200;
            break;
        case CheckId::LlnNeg:
            s.dist = StepDistribution::constant(1.0);
            s.p = 1.0 / 3.0;
            s.sign = Sign::Negative;
            s.replicas = 200;
            break;
        case CheckId::VarRegimes: break;
        case CheckId::CltMarginalPos: break;
        case CheckId::CltMarginalNeg:
            s.p = 0.5;
            s.sign = Sign::Negative;
            break;
        case CheckId::FcltCovPos: s.times = {0.25, 0.5, 1.0}; break;
        case CheckId::FcltCovNeg:
            s.p = 0.5;
            s.sign = Sign::Negative;
            s.times = {0.25, 0.5, 1.0};
            break;
        case CheckId::CriticalMarginal:
            s.p = 0.5;
            s.times = {1.0, 0.5};
            break;
        case CheckId::LilBand:
            s.n = std::uint64_t{1} << 20;
            s.replicas = 200;
            break;
        case CheckId::MartingaleConditions:
            s.truncation = Truncation::Sqrt;
            s.replicas = 100;
            break;
        case CheckId::MomentInequality:
            s.dist = StepDistribution::two_point(0.0, 3.0, 0.5);
            s.p = 0.5;
            s.truncation = Truncation::Sqrt;
            s.n = 5;
            s.replicas = 10'000;
            break;
    }
    return s;
}

double ks_critical_value(std::uint64_t sample_size, double level) {
    const double root = std::sqrt(static_cast<double>(sample_size));
    const double factor = root + 0.12 + 0.11 / root;
    double lo = 0.0;
    double hi = 5.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_survival(mid) > level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi / factor;
}

namespace {

Criterion make_criterion(std::string name, double statistic, double target, double lower, double upper, double se) {
    Criterion c{std::move(name), statistic, target, lower, upper, se, false};
    c.passed = std::isfinite(statistic) && statistic >= lower && statistic <= upper;
    return c;
}

Criterion symmetric_criterion(std::string name, double statistic, double target, double half_width, double se) {
    return make_criterion(std::move(name), statistic, target, target - half_width, target + half_width, se);
}

VerificationReport finish(VerificationReport report) {
    report.passed = !report.criteria.empty() &&
                    std::all_of(report.criteria.begin(), report.criteria.end(), [](const Criterion& c) { return c.passed; });
    return report;
}

void require_interior(const CheckSpec& spec) {
    if (spec.p >= 1.0) throw std::invalid_argument(to_string(spec.id) + ": p = 1 is a degenerate endpoint");
}

double sigma(const StepDistribution& dist) { return std::sqrt(dist.sigma2()); }

double sigma_check(const StepDistribution& dist, double p) { return std::sqrt(derived_constants(dist, p).sigma_check2); }

std::vector<double> exact_means(const CheckSpec& spec, Sign sign) {
    return sign == Sign::Positive ? mean_positive(spec.dist, spec.p, spec.truncation, spec.n)
                                  : mean_negative(spec.dist, spec.p, spec.truncation, spec.n);
}

std::vector<double> exact_variances(const CheckSpec& spec, Sign sign) {
    return sign == Sign::Positive ? var_positive(spec.dist, spec.p, spec.truncation, spec.n)
                                  : var_negative(spec.dist, spec.p, spec.truncation, spec.n);
}

// samples[r][k] = S(checkpoints[k]) of replica r.
std::vector<std::vector<double>> simulate_replicas(const CheckSpec& spec, Sign sign,
                                                   const std::vector<std::uint64_t>& checkpoints,
                                                   std::uint64_t first_stream) {
    WalkConfig cfg;
    cfg.p = spec.p;
    cfg.sign = sign;
    cfg.truncation = spec.truncation;
    cfg.horizon = spec.n;
    cfg.seed = spec.seed;
    cfg.checkpoints = checkpoints;
    cfg.validate();
    return parallel_map(spec.replicas, spec.parallelism, [&](std::uint64_t r) {
        auto rng = rng_stream(spec.seed, first_stream + r + 1);
        std::vector<double> values(checkpoints.size());
        detail::run_walk(spec.dist, cfg, checkpoints, values.data(), rng, detail::NoObserver{});
        return values;
    });
}

std::vector<double> column(const std::vector<std::vector<double>>& samples, std::size_t k) {
    std::vector<double> out(samples.size());
    for (std::size_t r = 0; r < samples.size(); ++r) out[r] = samples[r][k];
    return out;
}

// Sorted distinct floor(n t), each >= 1.
std::vector<std::uint64_t> time_indices(std::uint64_t n, const std::vector<double>& times) {
    std::vector<std::uint64_t> idx;
    for (double t : times) {
        const auto m = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * t));
        if (m == 0) throw std::invalid_argument("time grid point maps to index 0; increase n");
        idx.push_back(m);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

std::size_t position(const std::vector<std::uint64_t>& idx, std::uint64_t m) {
    return static_cast<std::size_t>(std::lower_bound(idx.begin(), idx.end(), m) - idx.begin());
}

Criterion ks_criterion(const std::string& name, const std::vector<double>& values, double variance, double level,
                       nlohmann::ordered_json& details) {
    const auto ks = ks_normal(values, 0.0, variance);
    const auto mom = moments_of(values);
    const double crit = ks_critical_value(values.size(), level);
    details[name] = {{"ks_statistic", ks.statistic},
                     {"ks_p_value", ks.p_value},
                     {"ks_critical_value", crit},
                     {"target_variance", variance},
                     {"sample_mean", mom.mean()},
                     {"sample_variance", mom.variance()},
                     {"sample_variance_se", mom.variance_se()}};
    return make_criterion(name, ks.statistic, 0.0, 0.0, crit, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------

VerificationReport check_lln(const CheckSpec& spec) {
    spec.validate();
    require_interior(spec);
    const Sign sign = spec.id == CheckId::LlnNeg ? Sign::Negative : Sign::Positive;
    VerificationReport report;
    report.spec = spec;
    report.spec.sign = sign;
    report.spec.truncation = Truncation::None;
    report.regime = variance_regime(spec.p, sign);
    const double m1 = spec.dist.m1();
    const double limit = sign == Sign::Positive ? m1 : (1.0 - spec.p) / (1.0 + spec.p) * m1;

    const auto samples = simulate_replicas(report.spec, sign, {spec.n}, stream_base(spec.id));
    auto ratios = column(samples, 0);
    const double nd = static_cast<double>(spec.n);
    for (auto& v : ratios) v /= nd;
    double abs_dev = 0.0;
    for (double v : ratios) abs_dev += std::fabs(v - limit);
    abs_dev /= static_cast<double>(ratios.size());
    report.details["limit"] = limit;
    report.details["mean_abs_deviation"] = abs_dev;

    if (spec.dist.m2().is_finite()) {
        const double exact_mean = exact_means(report.spec, sign).back() / nd;
        const double exact_sd = std::sqrt(exact_variances(report.spec, sign).back()) / nd;
        const double se = exact_sd / std::sqrt(static_cast<double>(spec.replicas));
        const double bias = std::fabs(exact_mean - limit);
        const double stat = moments_of(ratios).mean();
        const double half = spec.abs_tolerance ? *spec.abs_tolerance : 5.0 * se + bias;
        report.criteria.push_back(symmetric_criterion("replica mean of S(n)/n", stat, limit, half, se));
        report.details["exact_mean_over_n"] = exact_mean;
        report.details["bias_allowance"] = bias;
        report.notes = spec.abs_tolerance ? "fixed half-width band" : "band: 5 SE (exact variance) + |E S(n)/n - limit|";
    } else {
        const double med = median(ratios);
        const double iqr = quantile(ratios, 0.75) - quantile(ratios, 0.25);
        const double se = 1.2533 * (iqr / 1.349) / std::sqrt(static_cast<double>(ratios.size()));
        const double half = spec.abs_tolerance ? *spec.abs_tolerance : 4.0 * se;
        report.criteria.push_back(symmetric_criterion("replica median of S(n)/n", med, limit, half, se));
        report.details["interquartile_range"] = iqr;
        report.notes = "infinite variance: median-based band";
    }
    return finish(std::move(report));
}

VerificationReport check_variance_regimes(const CheckSpec& spec) {
    spec.validate();
    require_interior(spec);
    const Sign sign = spec.sign;
    VerificationReport report;
    report.spec = spec;
    report.regime = variance_regime(spec.p, sign);

    const auto exact = exact_variances(spec, sign).back();
    const auto samples = simulate_replicas(spec, sign, {spec.n}, stream_base(spec.id));
    const auto mom = moments_of(column(samples, 0));
    const double norm = regime_normalized_variance(1.0, spec.n, spec.p, sign);
    const double stat = mom.variance() * norm;
    const double se = mom.variance_se() * norm;
    report.criteria.push_back(
        symmetric_criterion("Monte Carlo var vs exact recursion (normalized)", stat, exact * norm, 4.0 * se, se));

    // Secondary, informational: the asymptotic constant.
    double asymptotic = std::numeric_limits<double>::quiet_NaN();
    if (sign == Sign::Negative) {
        asymptotic = derived_constants(spec.dist, spec.p).sigma_check2 / (2.0 * spec.p + 1.0);
    } else if (spec.p < 0.5) {
        asymptotic = spec.dist.sigma2() / (1.0 - 2.0 * spec.p);
    } else if (spec.p == 0.5) {
        asymptotic = spec.dist.sigma2();
    }
    report.details["exact_normalized_variance"] = exact * norm;
    if (std::isfinite(asymptotic) && spec.truncation == Truncation::None) {
        const double gap = exact * norm / asymptotic - 1.0;
        report.details["asymptotic_normalized_variance"] = asymptotic;
        report.details["asymptotic_relative_gap"] = gap;
        report.details["asymptotic_within_3pct"] = std::fabs(gap) <= 0.03;
    }
    report.notes = "pass/fail uses the exact recursion; the asymptotic constant is reported only";
    return finish(std::move(report));
}

VerificationReport check_critical(const CheckSpec& spec) {
    spec.validate();
    if (spec.p != 0.5) throw std::invalid_argument("Critical-marginal: p must equal 1/2");
    if (!(spec.n >= 2)) throw std::invalid_argument("Critical-marginal: n must be >= 2");
    VerificationReport report;
    report.spec = spec;
    report.spec.id = CheckId::CriticalMarginal;
    report.spec.sign = Sign::Positive;
    if (report.spec.times.empty()) report.spec.times = {1.0, 0.5};
    report.regime = variance_regime(spec.p, Sign::Positive);

    const auto idx = time_indices(spec.n, report.spec.times);
    const auto samples = simulate_replicas(report.spec, Sign::Positive, idx, stream_base(CheckId::CriticalMarginal));
    const auto means = exact_means(report.spec, Sign::Positive);
    const double nd = static_cast<double>(spec.n);
    const auto variances = exact_variances(report.spec, Sign::Positive);
    const double scale = sigma(spec.dist) * std::sqrt(nd * std::log(nd));
    for (double t : report.spec.times) {
        const auto m = static_cast<std::uint64_t>(std::floor(nd * t));
        auto values = column(samples, position(idx, m));
        for (auto& v : values) v = (v - means[m - 1]) / scale;
        const std::string name = "KS at t=" + format_double(t) + " vs Normal(0," + format_double(t) + ")";
        report.criteria.push_back(ks_criterion(name, values, t, spec.level, report.details));
        // Informational: the same sample against its exact finite-n variance.
        const double exact = variances[m - 1] / (scale * scale);
        const auto ks = ks_normal(values, 0.0, exact);
        report.details[name]["exact_variance"] = exact;
        report.details[name]["ks_statistic_exact_variance"] = ks.statistic;
        report.details[name]["ks_p_value_exact_variance"] = ks.p_value;
        const auto mom = moments_of(values);
        report.details[name]["sample_excess_kurtosis"] = mom.central(4) / std::pow(mom.central(2), 2) - 3.0;
    }
    report.notes = "S([nt]) centered by its exact mean and scaled by sigma sqrt(n log n)";
    return finish(std::move(report));
}

VerificationReport check_clt_marginal(const CheckSpec& spec) {
    spec.validate();
    const Sign sign = spec.id == CheckId::CltMarginalNeg ? Sign::Negative : Sign::Positive;
    if (sign == Sign::Positive && spec.p == 0.5) {
        auto routed = spec;
        routed.id = CheckId::CriticalMarginal;
        auto report = check_critical(routed);
        report.notes += "; routed from CLT-marginal-pos at p = 1/2";
        return report;
    }
    if (sign == Sign::Positive && spec.p > 0.5) {
        throw std::invalid_argument("CLT-marginal-pos: no sqrt(n) Gaussian limit for p > 1/2");
    }
    require_interior(spec);
    VerificationReport report;
    report.spec = spec;
    report.spec.sign = sign;
    report.regime = variance_regime(spec.p, sign);

    const auto samples = simulate_replicas(report.spec, sign, {spec.n}, stream_base(spec.id));
    const double mean = exact_means(report.spec, sign).back();
    auto values = column(samples, 0);
    const double root = std::sqrt(static_cast<double>(spec.n));
    for (auto& v : values) v = (v - mean) / root;
    const double target = sign == Sign::Positive ? spec.dist.sigma2() / (1.0 - 2.0 * spec.p)
                                                 : derived_constants(spec.dist, spec.p).sigma_check2 / (2.0 * spec.p + 1.0);
    report.criteria.push_back(
        ks_criterion("KS vs Normal(0," + format_double(target) + ")", values, target, spec.level, report.details));
    report.notes = "S(n) centered by its exact mean and scaled by sqrt(n)";
    return finish(std::move(report));
}

VerificationReport check_fclt_covariance(const CheckSpec& spec) {
    spec.validate();
    const Sign sign = spec.id == CheckId::FcltCovNeg ? Sign::Negative : Sign::Positive;
    if (sign == Sign::Positive && !(spec.p < 0.5)) throw std::invalid_argument("FCLT-cov-pos: p must be < 1/2");
    require_interior(spec);
    VerificationReport report;
    report.spec = spec;
    report.spec.sign = sign;
    if (report.spec.times.empty()) report.spec.times = {0.25, 0.5, 1.0};
    report.regime = variance_regime(spec.p, sign);

    auto times = report.spec.times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const auto idx = time_indices(spec.n, times);
    const auto samples = simulate_replicas(report.spec, sign, idx, stream_base(spec.id));
    const auto means = exact_means(report.spec, sign);
    const double nd = static_cast<double>(spec.n);
    const double scale = (sign == Sign::Positive ? sigma(spec.dist) : sigma_check(spec.dist, spec.p)) * std::sqrt(nd);
    const auto kind = sign == Sign::Positive ? ProcessKind::NoiseReinforcedBM : ProcessKind::CounterbalancedBM;

    // Normalized path values per time.
    std::vector<std::vector<double>> x(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto m = static_cast<std::uint64_t>(std::floor(nd * times[i]));
        x[i] = column(samples, position(idx, m));
        for (auto& v : x[i]) v = (v - means[m - 1]) / scale;
    }

    constexpr int kResamples = 200;
    const auto R = spec.replicas;
    std::vector<std::vector<std::uint64_t>> picks(kResamples, std::vector<std::uint64_t>(R));
    for (int b = 0; b < kResamples; ++b) {
        auto rng = rng_stream(spec.seed, kBootstrapStream + static_cast<std::uint64_t>(b));
        for (auto& pick : picks[b]) pick = rng.below(R);
    }
    auto cells = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i; j < times.size(); ++j) {
            const double target = covariance(kind, spec.p, times[i], times[j]);
            const double emp = sample_covariance(x[i], x[j]);
            std::vector<double> boot(kResamples);
            std::vector<double> xi(R), xj(R);
            for (int b = 0; b < kResamples; ++b) {
                for (std::uint64_t r = 0; r < R; ++r) {
                    xi[r] = x[i][picks[b][r]];
                    xj[r] = x[j][picks[b][r]];
                }
                boot[b] = sample_covariance(xi, xj);
            }
            const double se = std::sqrt(moments_of(boot).variance());
            const std::string name = "cov(" + format_double(times[i]) + "," + format_double(times[j]) + ")";
            report.criteria.push_back(symmetric_criterion(name, emp, target, 4.0 * se, se));
        }
    }
    report.notes = "cells pass within 4 bootstrap SE (200 resamples)";
    return finish(std::move(report));
}

LilBand lil_band(Sign sign, double p, unsigned first_exp, unsigned horizon_exp) {
    // Frozen from calibrate_lil_band(..., 14, 20, 200000 replicas, seed 1).
    struct Frozen {
        Sign sign;
        double p;
        double median;
        double q95;
    };
    static constexpr Frozen kFrozen[] = {
        {Sign::Positive, 0.25, 0.3399, 1.0070},
        {Sign::Negative, 0.5, 0.5149, 1.0868},
        {Sign::Positive, 0.0, 0.4332, 1.0542},
        {Sign::Negative, 0.0, 0.4332, 1.0542},
    };
    LilBand band;
    bool found = false;
    if (first_exp == 14 && horizon_exp == 20) {
        for (const auto& f : kFrozen) {
            if (f.sign == sign && f.p == p) {
                band.calibrated_median = f.median;
                band.calibrated_q95 = f.q95;
                band.frozen = true;
                found = true;
            }
        }
    }
    if (!found) {
        LilRegime regime = LilRegime::Negative;
        if (sign == Sign::Positive) regime = p == 0.5 ? LilRegime::PositiveCritical : LilRegime::PositiveDiffusive;
        const auto cal = calibrate_lil_band(regime, p, first_exp, horizon_exp, 200'000, 1);
        band.calibrated_median = cal.median_ratio;
        band.calibrated_q95 = cal.q95_ratio;
    }
    band.median_lower = 0.75 * band.calibrated_median;
    band.q95_upper = 1.25 * std::max(1.0, band.calibrated_q95);
    return band;
}

VerificationReport check_lil_band(const CheckSpec& spec) {
    spec.validate();
    require_interior(spec);
    if (spec.replicas < 200) throw std::invalid_argument("LIL-band: needs at least 200 replicas");
    LilRegime regime = LilRegime::Negative;
    if (spec.sign == Sign::Positive) {
        if (spec.p > 0.5) throw std::invalid_argument("LIL-band: positive walk needs p <= 1/2");
        regime = spec.p == 0.5 ? LilRegime::PositiveCritical : LilRegime::PositiveDiffusive;
    }
    const auto horizon_exp = static_cast<unsigned>(std::floor(std::log2(static_cast<double>(spec.n))));
    if (horizon_exp < 10) throw std::invalid_argument("LIL-band: n must be >= 1024");
    const unsigned first_exp = horizon_exp - 6;

    VerificationReport report;
    report.spec = spec;
    report.regime = to_string(regime);
    const auto env = lil_envelope(regime, spec.p, spec.dist);
    std::vector<std::uint64_t> idx;
    for (unsigned k = first_exp; k <= horizon_exp; ++k) idx.push_back(std::uint64_t{1} << k);
    const auto samples = simulate_replicas(spec, spec.sign, idx, stream_base(spec.id));
    const auto means = exact_means(spec, spec.sign);

    std::vector<double> ratios(samples.size());
    for (std::size_t r = 0; r < samples.size(); ++r) {
        double best = -kInf;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            best = std::max(best, (samples[r][k] - means[idx[k] - 1]) / env.scale(idx[k]));
        }
        ratios[r] = best / env.constant;
    }
    const auto band = lil_band(spec.sign, spec.p, first_exp, horizon_exp);
    const double med = median(ratios);
    const double q95 = quantile(ratios, 0.95);
    report.criteria.push_back(make_criterion("median of M*/constant", med, band.calibrated_median, band.median_lower, kInf, 0.0));
    report.criteria.push_back(make_criterion("q95 of M*/constant", q95, band.calibrated_q95, -kInf, band.q95_upper, 0.0));
    report.details["constant"] = env.constant;
    report.details["first_exponent"] = first_exp;
    report.details["horizon_exponent"] = horizon_exp;
    report.details["band_frozen"] = band.frozen;
    report.details["fixed_band_median_ok"] = med >= 0.4;
    report.details["fixed_band_q95_ok"] = q95 <= 1.25;
    report.notes =
        "property-based: an almost-sure limsup is not reproducible at finite n; M* is the max over dyadic "
        "checkpoints and the band is a heuristic calibrated on the Gaussian limit";
    return finish(std::move(report));
}

namespace {

struct MartingaleReplica {
    double ratio = 0.0;
    std::vector<double> lindeberg;  // condition (ii) partial sums at the decade points
    std::vector<double> fourth;     // condition (iii)
};

}  // namespace

VerificationReport check_martingale_conditions(const CheckSpec& spec) {
    spec.validate();
    require_interior(spec);
    if (spec.truncation != Truncation::Sqrt) {
        throw std::invalid_argument("Martingale-conditions: truncation must be sqrt");
    }
    if (spec.sign == Sign::Positive && !(spec.p < 0.5)) {
        throw std::invalid_argument("Martingale-conditions: positive walk needs p < 1/2");
    }
    if (spec.n < 100) throw std::invalid_argument("Martingale-conditions: n must be >= 100");
    VerificationReport report;
    report.spec = spec;
    report.regime = variance_regime(spec.p, spec.sign);

    const bool positive = spec.sign == Sign::Positive;
    const GammaRatioSeq a(positive ? spec.p : -spec.p, spec.n);
    const auto var = exact_variances(spec, spec.sign);
    std::vector<double> s(spec.n);
    std::vector<double> ez(spec.n);
    for (std::uint64_t k = 1; k <= spec.n; ++k) {
        s[k - 1] = a(k) * std::sqrt(var[k - 1]);
        ez[k - 1] = spec.dist.truncated_moment(1, Truncation::Sqrt, k);
    }
    std::vector<std::uint64_t> decades;
    for (std::uint64_t d = 10; d < spec.n; d *= 10) decades.push_back(d);
    decades.push_back(spec.n);

    WalkConfig cfg;
    cfg.p = spec.p;
    cfg.sign = spec.sign;
    cfg.truncation = Truncation::Sqrt;
    cfg.horizon = spec.n;
    const std::vector<std::uint64_t> last{spec.n};
    const double sign = positive ? 1.0 : -1.0;
    const double c = spec.c;
    const double p = spec.p;

    const auto runs = parallel_map(spec.replicas, spec.parallelism, [&](std::uint64_t r) {
        auto rng = rng_stream(spec.seed, stream_base(spec.id) + r + 1);
        MartingaleReplica out;
        double sum_y2 = 0.0;
        double lindeberg = 0.0;
        double fourth = 0.0;
        std::size_t next = 0;
        double final_value = 0.0;
        auto observe = [&](std::uint64_t k, double step, double previous) {
            const double cond =
                k == 1 ? ez[0] : sign * (p / static_cast<double>(k - 1)) * previous + (1.0 - p) * ez[k - 1];
            const double y = a(k) * (step - cond);
            sum_y2 += y * y;
            const double sk = s[k - 1];
            if (sk > 0.0) {
                const double ay = std::fabs(y);
                if (ay > c * sk) {
                    lindeberg += ay / sk;
                } else {
                    const double q = y / sk;
                    fourth += q * q * q * q;
                }
            }
            if (next < decades.size() && decades[next] == k) {
                out.lindeberg.push_back(lindeberg);
                out.fourth.push_back(fourth);
                ++next;
            }
        };
        detail::run_walk(spec.dist, cfg, last, &final_value, rng, observe);
        out.ratio = sum_y2 / (s.back() * s.back());
        return out;
    });

    std::vector<double> ratios(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) ratios[r] = runs[r].ratio;
    const auto mom = moments_of(ratios);
    report.criteria.push_back(
        symmetric_criterion("(i) s_n^-2 sum Y_k^2, replica mean", mom.mean(), 1.0, 0.05, mom.mean_se()));

    auto curve = [&](auto member) {
        std::vector<double> mean(decades.size(), 0.0);
        for (const auto& run : runs) {
            for (std::size_t d = 0; d < decades.size(); ++d) mean[d] += (run.*member)[d];
        }
        for (auto& v : mean) v /= static_cast<double>(runs.size());
        return mean;
    };
    auto plateau = [&](const std::vector<double>& partial) {
        if (partial.size() < 2 || partial.back() == 0.0) return 0.0;
        return (partial.back() - partial[partial.size() - 2]) / partial.back();
    };
    const auto lindeberg = curve(&MartingaleReplica::lindeberg);
    const auto fourth = curve(&MartingaleReplica::fourth);
    report.criteria.push_back(make_criterion("(ii) relative increment over last decade", plateau(lindeberg), 0.0, -kInf, 0.01, 0.0));
    report.criteria.push_back(make_criterion("(iii) relative increment over last decade", plateau(fourth), 0.0, -kInf, 0.01, 0.0));

    auto curve_json = nlohmann::ordered_json::array();
    for (std::size_t d = 0; d < decades.size(); ++d) {
        curve_json.push_back({{"n", decades[d]}, {"condition_ii", lindeberg[d]}, {"condition_iii", fourth[d]}});
    }
    report.details["partial_sums"] = curve_json;
    report.details["s_n"] = s.back();
    report.notes =
        "(ii)/(iii) are plateau diagnostics, a necessary-condition check only: summability cannot be concluded at "
        "finite n";
    return finish(std::move(report));
}

VerificationReport check_moment_inequality(const CheckSpec& spec) {
    spec.validate();
    VerificationReport report;
    report.spec = spec;
    report.regime = variance_regime(spec.p, spec.sign);
    const int k = 2 * spec.m;
    const double base = spec.dist.truncated_moment(k, spec.truncation, spec.n);
    report.details["E_Z_n^2m"] = base;

    if (spec.n <= 7 && spec.dist.has_finite_support()) {
        const auto pos = enumerate_exact(spec.dist, spec.p, Sign::Positive, spec.truncation, spec.n,
                                         Functional::last_innovation());
        const auto neg = enumerate_exact(spec.dist, spec.p, Sign::Negative, spec.truncation, spec.n,
                                         Functional::last_innovation());
        const double mp = static_cast<double>(pos.moment(k));
        const double mn = static_cast<double>(neg.moment(k));
        report.criteria.push_back(make_criterion("exact E[Zpos^2m] - E[Zneg^2m]", mp - mn, 0.0, -1e-12, 1e-12, 0.0));
        report.criteria.push_back(make_criterion("exact E[Zpos^2m] - E[Z^2m]", mp - base, 0.0, -kInf, 1e-12, 0.0));
        report.details["method"] = "exact enumeration";
        report.details["positive_moment"] = mp;
        report.details["negative_moment"] = mn;
        return finish(std::move(report));
    }

    WalkConfig cfg;
    cfg.p = spec.p;
    cfg.truncation = spec.truncation;
    cfg.horizon = spec.n;
    const std::vector<std::uint64_t> last{spec.n};
    auto last_step = [&](Sign sign, std::uint64_t stream) {
        cfg.sign = sign;
        return parallel_map(spec.replicas, spec.parallelism, [&, cfg](std::uint64_t r) {
            auto rng = rng_stream(spec.seed, stream + r + 1);
            double final_value = 0.0;
            double z = 0.0;
            detail::run_walk(spec.dist, cfg, last, &final_value, rng, [&](std::uint64_t i, double step, double) {
                if (i == cfg.horizon) z = step;
            });
            return std::pow(z, k);
        });
    };
    // Independent streams for the two signs: on shared draws the two even
    // moments coincide path by path.
    const auto pos = moments_of(last_step(Sign::Positive, stream_base(spec.id)));
    const auto neg = moments_of(last_step(Sign::Negative, stream_base(spec.id) + spec.replicas));
    const double se_diff = std::hypot(pos.mean_se(), neg.mean_se());
    report.criteria.push_back(symmetric_criterion("MC E[Zpos^2m] - E[Zneg^2m]", pos.mean() - neg.mean(), 0.0, 4.0 * se_diff, se_diff));
    report.criteria.push_back(make_criterion("MC E[Zpos^2m] - E[Z^2m]", pos.mean() - base, 0.0, -kInf, 4.0 * pos.mean_se(), pos.mean_se()));
    report.criteria.push_back(make_criterion("MC E[Zneg^2m] - E[Z^2m]", neg.mean() - base, 0.0, -kInf, 4.0 * neg.mean_se(), neg.mean_se()));
    report.details["method"] = "Monte Carlo";
    report.details["positive_moment"] = pos.mean();
    report.details["negative_moment"] = neg.mean();
    return finish(std::move(report));
}

VerificationReport run_check(const CheckSpec& spec) {
    switch (spec.id) {
        case CheckId::LlnPos:
        case CheckId::LlnNeg: return check_lln(spec);
        case CheckId::VarRegimes: return check_variance_regimes(spec);
        case CheckId::CltMarginalPos:
        case CheckId::CltMarginalNeg: return check_clt_marginal(spec);
        case CheckId::FcltCovPos:
        case CheckId::FcltCovNeg: return check_fclt_covariance(spec);
        case CheckId::CriticalMarginal: return check_critical(spec);
        case CheckId::LilBand: return check_lil_band(spec);
        case CheckId::MartingaleConditions: return check_martingale_conditions(spec);
        case CheckId::MomentInequality: return check_moment_inequality(spec);
    }
    throw std::invalid_argument("unknown check");
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

}  // namespace

nlohmann::ordered_json spec_to_json(const CheckSpec& spec) {
    nlohmann::ordered_json j;
    j["check"] = to_string(spec.id);
    j["distribution"] = spec.dist.to_string();
    j["p"] = spec.p;
    j["sign"] = to_string(spec.sign);
    j["truncation"] = to_string(spec.truncation);
    j["n"] = spec.n;
    j["replicas"] = spec.replicas;
    j["seed"] = spec.seed;
    j["level"] = spec.level;
    if (spec.abs_tolerance) j["abs_tolerance"] = *spec.abs_tolerance;
    if (!spec.times.empty()) j["times"] = spec.times;
    j["c"] = spec.c;
    j["m"] = spec.m;
    return j;
}

nlohmann::ordered_json report_to_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["check"] = to_string(report.spec.id);
    j["seed"] = report.spec.seed;
    j["passed"] = report.passed;
    j["regime"] = report.regime;
    const auto& head = report.primary();
    j["statistic"] = number(head.statistic);
    j["target"] = number(head.target);
    j["standard_error"] = number(head.standard_error);
    auto criteria = nlohmann::ordered_json::array();
    for (const auto& c : report.criteria) {
        criteria.push_back({{"name", c.name},
                            {"statistic", number(c.statistic)},
                            {"target", number(c.target)},
                            {"lower", number(c.lower)},
                            {"upper", number(c.upper)},
                            {"standard_error", number(c.standard_error)},
                            {"passed", c.passed}});
    }
    j["criteria"] = criteria;
    j["notes"] = report.notes;
    j["spec"] = spec_to_json(report.spec);
    j["details"] = report.details;
    return j;
}

std::string reports_table(const std::vector<VerificationReport>& reports) {
    std::ostringstream out;
    auto fmt = [](double v) {
        if (!std::isfinite(v)) return format_double(v);
        std::ostringstream s;
        s << std::setprecision(6) << v;
        return s.str();
    };
    out << std::left << std::setw(24) << "check" << std::setw(50) << "criterion" << std::setw(14) << "statistic"
        << std::setw(28) << "band" << "result\n";
    for (const auto& r : reports) {
        for (const auto& c : r.criteria) {
            out << std::setw(24) << to_string(r.spec.id) << std::setw(50) << c.name << std::setw(14) << fmt(c.statistic)
                << std::setw(28) << ("[" + fmt(c.lower) + ", " + fmt(c.upper) + "]") << (c.passed ? "PASS" : "FAIL")
                << '\n';
        }
    }
    return out.str();
}

}  // namespace rwalk
