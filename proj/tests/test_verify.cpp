#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rwalk/limits.hpp"
#include "rwalk/verify.hpp"
#include "rwalk/walk.hpp"

using namespace rwalk;

namespace {

CheckSpec small(CheckId id) {
    auto s = default_check_spec(id);
    s.n = 10'000;
    s.replicas = 400;
    return s;
}

}  // namespace

TEST_CASE("check names round trip") {
    for (auto id : all_checks()) CHECK(parse_check_id(to_string(id)) == id);
    CHECK(all_checks().size() == 11);
    CHECK_THROWS_WITH_AS(parse_check_id("LLN"), doctest::Contains("unknown check 'LLN'"), std::invalid_argument);
}

TEST_CASE("KS critical value tracks the asymptotic Kolmogorov quantile") {
    // Asymptotic quantiles 1.6276 (1%) and 1.3581 (5%).
    CHECK(ks_critical_value(10'000, 0.01) * 100.0 == doctest::Approx(1.6276).epsilon(2e-3));
    CHECK(ks_critical_value(10'000, 0.05) * 100.0 == doctest::Approx(1.3581).epsilon(2e-3));
    CHECK(ks_critical_value(100, 0.01) < 1.6276 / 10.0);
}

TEST_CASE("frozen LIL bands reproduce their calibration") {
    struct Case {
        Sign sign;
        double p;
        LilRegime regime;
    };
    for (const auto& c : {Case{Sign::Positive, 0.25, LilRegime::PositiveDiffusive},
                          Case{Sign::Negative, 0.5, LilRegime::Negative},
                          Case{Sign::Positive, 0.0, LilRegime::PositiveDiffusive}}) {
        const auto band = lil_band(c.sign, c.p, 14, 20);
        CHECK(band.frozen);
        const auto live = calibrate_lil_band(c.regime, c.p, 14, 20, 200'000, 1);
        CHECK(band.calibrated_median == doctest::Approx(live.median_ratio).epsilon(0.01));
        CHECK(band.calibrated_q95 == doctest::Approx(live.q95_ratio).epsilon(0.01));
        CHECK(band.median_lower == doctest::Approx(0.75 * band.calibrated_median));
        CHECK(band.q95_upper == doctest::Approx(1.25 * std::max(1.0, band.calibrated_q95)));
    }
    CHECK_FALSE(lil_band(Sign::Positive, 0.1, 10, 16).frozen);
}

TEST_CASE("classical walk at p = 0 passes the checks") {
    for (auto id : {CheckId::LlnPos, CheckId::LlnNeg, CheckId::VarRegimes, CheckId::CltMarginalPos,
                    CheckId::CltMarginalNeg, CheckId::FcltCovPos, CheckId::FcltCovNeg}) {
        auto s = small(id);
        s.p = 0.0;
        const auto r = run_check(s);
        INFO(to_string(id));
        CHECK(r.passed);
    }
}

TEST_CASE("default checks pass at reduced size") {
    for (auto id : {CheckId::LlnPos, CheckId::LlnNeg, CheckId::VarRegimes, CheckId::CltMarginalPos,
                    CheckId::CltMarginalNeg, CheckId::FcltCovPos, CheckId::FcltCovNeg, CheckId::CriticalMarginal,
                    CheckId::MartingaleConditions, CheckId::MomentInequality}) {
        auto s = small(id);
        if (id == CheckId::MomentInequality) s.n = 5;
        const auto r = run_check(s);
        INFO(to_string(id));
        CHECK(r.passed);
        CHECK_FALSE(r.criteria.empty());
    }
}

TEST_CASE("moment inequality by Monte Carlo and martingale conditions for the negative walk") {
    auto s = default_check_spec(CheckId::MomentInequality);
    s.dist = StepDistribution::gaussian(0.5, 1.0);
    s.n = 2'000;
    s.replicas = 2'000;
    s.m = 2;
    const auto r = check_moment_inequality(s);
    CHECK(r.details["method"] == "Monte Carlo");
    CHECK(r.passed);

    auto m = default_check_spec(CheckId::MartingaleConditions);
    m.sign = Sign::Negative;
    m.p = 0.5;
    m.n = 10'000;
    m.replicas = 50;
    CHECK(check_martingale_conditions(m).passed);
}

TEST_CASE("CLT-marginal-pos at p = 1/2 is routed to the critical check") {
    auto s = small(CheckId::CltMarginalPos);
    s.p = 0.5;
    const auto r = run_check(s);
    CHECK(r.spec.id == CheckId::CriticalMarginal);
    CHECK(r.criteria.size() == 2);
}

TEST_CASE("a band narrower than the Monte Carlo error fails") {
    auto s = small(CheckId::LlnPos);
    s.abs_tolerance = 1e-7;
    const auto r = run_check(s);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.primary().passed);
}

TEST_CASE("reports do not depend on parallelism") {
    for (auto id : {CheckId::FcltCovNeg, CheckId::MartingaleConditions, CheckId::LlnPos}) {
        auto s = small(id);
        s.replicas = 200;
        s.parallelism = 1;
        const auto a = report_to_json(run_check(s)).dump();
        s.parallelism = 4;
        const auto b = report_to_json(run_check(s)).dump();
        CHECK(a == b);
    }
}

TEST_CASE("report json carries the check parameters and writes infinities as strings") {
    auto s = default_check_spec(CheckId::LilBand);
    s.replicas = 200;
    s.n = 1 << 14;
    const auto j = report_to_json(run_check(s));
    CHECK(j["check"] == "LIL-band");
    CHECK(j["spec"]["n"] == 1 << 14);
    CHECK(j["criteria"][0]["upper"] == "inf");
    CHECK(j["criteria"][1]["lower"] == "-inf");
    CHECK_FALSE(j["spec"].contains("parallelism"));
}

TEST_CASE("checks refuse specs outside their domain") {
    auto lln = small(CheckId::LlnNeg);
    lln.p = 1.0;
    CHECK_THROWS_AS(run_check(lln), std::invalid_argument);

    auto clt = small(CheckId::CltMarginalPos);
    clt.p = 0.7;
    CHECK_THROWS_AS(run_check(clt), std::invalid_argument);

    auto crit = small(CheckId::CriticalMarginal);
    crit.p = 0.4;
    CHECK_THROWS_AS(run_check(crit), std::invalid_argument);

    auto mart = small(CheckId::MartingaleConditions);
    mart.truncation = Truncation::None;
    CHECK_THROWS_WITH_AS(run_check(mart), doctest::Contains("truncation"), std::invalid_argument);

    auto lil = small(CheckId::LilBand);
    lil.replicas = 100;
    CHECK_THROWS_AS(run_check(lil), std::invalid_argument);

    auto level = small(CheckId::VarRegimes);
    level.level = 0.1;
    CHECK_THROWS_AS(run_check(level), std::invalid_argument);

    auto var = small(CheckId::VarRegimes);
    var.dist = StepDistribution::pareto(1.5, 1.0);
    CHECK_THROWS_WITH_AS(run_check(var), "second moment required", std::domain_error);
}

TEST_CASE("affine change of the step law acts linearly on the positive walk") {
    WalkConfig cfg;
    cfg.p = 0.4;
    cfg.horizon = 2'000;
    cfg.checkpoints = {500, 2'000};
    auto rng = rng_stream(12, 1);
    const auto run = simulate_with_genealogy(StepDistribution::rademacher(), cfg, rng);
    const double mean = 1.5;
    const double scale = 2.0;
    std::vector<double> mapped;
    for (const auto& rec : run.records) mapped.push_back(rec.x ? mean + scale * *rec.x : 0.0);
    const auto shifted = replay(run.records, mapped, Sign::Positive, cfg.checkpoints);
    for (std::size_t k = 0; k < cfg.checkpoints.size(); ++k) {
        const double n = static_cast<double>(cfg.checkpoints[k]);
        CHECK(shifted.walk_values[k].second == doctest::Approx(mean * n + scale * run.path.walk_values[k].second).epsilon(1e-14));
    }
}
