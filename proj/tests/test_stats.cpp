#include <cmath>
#include <vector>

#include "doctest.h"
#include "rwalk/monte_carlo.hpp"
#include "rwalk/parallel.hpp"
#include "rwalk/stats.hpp"

using namespace rwalk;

TEST_CASE("merged moments match a direct two-pass computation") {
    auto rng = rng_stream(4, 4);
    std::vector<double> xs(1001);
    for (auto& x : xs) x = 3.0 + rng.normal() * 2.0 + (rng.uniform() < 0.1 ? 5.0 : 0.0);
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double c2 = 0, c3 = 0, c4 = 0;
    for (double x : xs) {
        const double d = x - mean;
        c2 += d * d;
        c3 += d * d * d;
        c4 += d * d * d * d;
    }
    const auto n = static_cast<double>(xs.size());
    const auto m = moments_of(xs);
    CHECK(m.count() == xs.size());
    CHECK(m.mean() == doctest::Approx(mean).epsilon(1e-13));
    CHECK(m.variance() == doctest::Approx(c2 / (n - 1)).epsilon(1e-12));
    CHECK(m.central(3) == doctest::Approx(c3 / n).epsilon(1e-10));
    CHECK(m.central(4) == doctest::Approx(c4 / n).epsilon(1e-11));

    Moments seq;
    for (double x : xs) seq.add(x);
    CHECK(seq.variance() == doctest::Approx(m.variance()).epsilon(1e-12));
}

TEST_CASE("kolmogorov distribution tail") {
    CHECK(kolmogorov_survival(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
    CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-10));
    CHECK(kolmogorov_survival(1.2) == doctest::Approx(0.11224966667072497).epsilon(1e-10));
    CHECK(kolmogorov_survival(1.36) == doctest::Approx(0.049485876755377876).epsilon(1e-10));
    CHECK(kolmogorov_survival(1.63) == doctest::Approx(0.009846364888486529).epsilon(1e-9));
    CHECK(kolmogorov_survival(2.5) == doctest::Approx(7.453306344157342e-06).epsilon(1e-8));
    CHECK(normal_cdf(1.3) == doctest::Approx(0.9031995154143897).epsilon(1e-14));
}

TEST_CASE("KS rejection rate on true normals is close to the level") {
    // 500 meta-trials of 10^4 standard normals at the 1% level.
    const auto rejected = parallel_map(500, default_parallelism(), [](std::uint64_t t) {
        auto rng = rng_stream(31337, t + 1);
        std::vector<double> xs(10'000);
        for (auto& x : xs) x = rng.normal();
        return ks_normal(xs, 0.0, 1.0).p_value < 0.01 ? 1 : 0;
    });
    int count = 0;
    for (int r : rejected) count += r;
    const double rate = count / 500.0;
    CHECK(rate >= 0.005);
    CHECK(rate <= 0.02);
}

TEST_CASE("KS detects a wrong variance") {
    auto rng = rng_stream(8, 8);
    std::vector<double> xs(10'000);
    for (auto& x : xs) x = 1.2 * rng.normal();
    CHECK(ks_normal(xs, 0.0, 1.0).p_value < 1e-6);
    CHECK(ks_normal(xs, 0.0, 1.44).p_value > 0.01);
}

TEST_CASE("quantiles") {
    const std::vector<double> xs{5, 1, 4, 2, 3};
    CHECK(median(xs) == 3.0);
    CHECK(quantile(xs, 0.0) == 1.0);
    CHECK(quantile(xs, 1.0) == 5.0);
    CHECK(quantile(xs, 0.9) == doctest::Approx(4.6));
    CHECK(sample_covariance(xs, xs) == doctest::Approx(2.5));
}

TEST_CASE("monte carlo results do not depend on parallelism") {
    WalkConfig cfg;
    cfg.p = 0.4;
    cfg.horizon = 2000;
    cfg.seed = 99;
    cfg.checkpoints = {500, 1000, 2000};
    StatisticSpec spec;
    spec.track_max = true;
    spec.keep_samples = true;
    const auto g = StepDistribution::gaussian(0.1, 1.0);
    const auto a = monte_carlo(g, cfg, 257, spec, 1);
    const auto b = monte_carlo(g, cfg, 257, spec, 4);
    REQUIRE(a.checkpoints.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(a.checkpoints[k].normalized.mean() == b.checkpoints[k].normalized.mean());
        CHECK(a.checkpoints[k].normalized.variance() == b.checkpoints[k].normalized.variance());
        CHECK(a.checkpoints[k].raw.central(4) == b.checkpoints[k].raw.central(4));
    }
    CHECK(a.maximum.mean() == b.maximum.mean());
    CHECK(a.samples == b.samples);
}

TEST_CASE("a single replica reproduces the single path") {
    WalkConfig cfg;
    cfg.p = 0.7;
    cfg.sign = Sign::Negative;
    cfg.horizon = 5000;
    cfg.seed = 12;
    cfg.checkpoints = {100, 5000};
    const auto r = StepDistribution::rademacher();
    const auto summary = monte_carlo(r, cfg, 1, StatisticSpec{Normalization::None}, 3);
    auto rng = rng_stream(12, 1);
    const auto path = simulate(r, cfg, rng);
    CHECK(summary.checkpoints[0].raw.mean() == path.walk_values[0].second);
    CHECK(summary.checkpoints[1].normalized.mean() == path.final_value);
    CHECK(summary.checkpoints[1].normalized.variance() == 0.0);
    CHECK(summary.repeated_fraction == path.repeated_fraction);
}
