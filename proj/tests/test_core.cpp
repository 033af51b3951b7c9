#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "rwalk/distribution.hpp"
#include "rwalk/format.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/types.hpp"

using namespace rwalk;

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block(C{~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
    auto a = rng_stream(42, 7);
    auto b = rng_stream(42, 7);
    auto c = rng_stream(42, 8);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs |= x != c.next_u64();
    }
    CHECK(differs);
}

TEST_CASE("first draws are pinned across platforms") {
    // The stream is a pure function of (seed, id, index); pin the first words.
    auto s = rng_stream(0, 0);
    const auto expected = Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(s.next_u64() == (std::uint64_t{expected[0]} | std::uint64_t{expected[1]} << 32));
    CHECK(s.next_u64() == (std::uint64_t{expected[2]} | std::uint64_t{expected[3]} << 32));
}

TEST_CASE("neighbouring streams are uncorrelated") {
    auto a = rng_stream(2024, 1);
    auto b = rng_stream(2024, 2);
    const int n = 1'000'000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform();
        const double y = b.uniform();
        sa += x;
        sb += y;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
    CHECK(std::fabs(corr) < 0.01);
}

TEST_CASE("bounded integers are uniform") {
    auto s = rng_stream(5, 5);
    std::vector<int> counts(7, 0);
    const int n = 700'000;
    for (int i = 0; i < n; ++i) ++counts[s.below(7)];
    double chi2 = 0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    CHECK(chi2 < 22.46);  // chi-square(6) 0.999 quantile
}

TEST_CASE("signs are fair and bounds are respected") {
    auto s = rng_stream(9, 3);
    int sum = 0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) sum += s.sign();
    CHECK(std::abs(sum) < 5 * 1000);  // 5 standard deviations
    for (int i = 0; i < 1000; ++i) {
        CHECK(s.below(1) == 0);
        CHECK(s.below(0x100000000ull) < 0x100000000ull);
        CHECK(s.below(0x300000001ull) < 0x300000001ull);
    }
    // Large bounds draw from 64-bit words: the top third must be reachable.
    bool high = false;
    for (int i = 0; i < 100; ++i) high |= s.below(0x300000000ull) >= 0x200000000ull;
    CHECK(high);
    CHECK_FALSE(s.bernoulli(0.0));
    CHECK(s.bernoulli(1.0));
}

TEST_CASE("distribution moments") {
    const auto r = StepDistribution::rademacher();
    CHECK(r.m1() == 0.0);
    CHECK(r.m2() == ExtendedReal::finite(1.0));

    const auto c = StepDistribution::constant(1.0);
    CHECK(c.m1() == 1.0);
    CHECK(c.m2().value() == 1.0);

    const auto par = StepDistribution::pareto(1.5, 1.0);
    CHECK(par.m1() == doctest::Approx(3.0));
    CHECK_FALSE(par.m2().is_finite());
    CHECK_THROWS_AS(par.sigma2(), std::domain_error);

    // Independent check of the Pareto means by quadrature of the survival
    // function: E X = scale + int_scale^inf (scale/x)^alpha dx. With
    // x = scale / v^2 the tail integral becomes int_0^1 2 scale v^(2 alpha - 3) dv.
    for (double alpha : {1.5, 2.5, 4.0}) {
        const double scale = 1.0;
        const int steps = 200'000;
        double tail = 0;
        for (int i = 0; i < steps; ++i) {
            const double v = (i + 0.5) / steps;
            tail += 2 * scale * std::pow(v, 2 * alpha - 3) / steps;
        }
        CHECK(StepDistribution::pareto(alpha, scale).m1() == doctest::Approx(scale + tail).epsilon(1e-8));
    }

    CHECK_THROWS_AS(StepDistribution::pareto(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(StepDistribution::gaussian(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(StepDistribution::two_point(0.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("derived constants") {
    auto d = derived_constants(StepDistribution::rademacher(), 0.5);
    CHECK(d.mu_check == 0.0);
    CHECK(d.sigma_check2 == 1.0);

    d = derived_constants(StepDistribution::constant(1.0), 1.0 / 3.0);
    CHECK(d.mu_check == doctest::Approx(0.5));
    CHECK(d.sigma_check2 == doctest::Approx(0.75));

    d = derived_constants(StepDistribution::gaussian(0.0, 1.0), 0.25);
    CHECK(d.sigma2 == 1.0);
    CHECK(d.mu_check == 0.0);

    const auto tp = StepDistribution::two_point(-1.0, 4.0, 0.3);
    CHECK(derived_constants(tp, 0.0).mu_check == doctest::Approx(tp.m1()));
    CHECK(derived_constants(tp, 1.0).mu_check == 0.0);
    for (double p : {0.0, 0.2, 0.7, 1.0}) {
        const auto k = derived_constants(tp, p);
        CHECK(k.sigma_check2 >= 0.0);
        CHECK(k.sigma2 >= 0.0);
    }

    try {
        derived_constants(StepDistribution::pareto(1.5, 1.0), 0.3);
        FAIL("expected an error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()) == "second moment required");
    }
}

TEST_CASE("sample moments agree with declared moments") {
    const std::vector<StepDistribution> laws{
        StepDistribution::rademacher(), StepDistribution::gaussian(0.5, 2.0),
        StepDistribution::two_point(0.0, 3.0, 0.5), StepDistribution::constant(-2.0),
        StepDistribution::pareto(4.5, 1.0)};
    std::uint64_t id = 1;
    for (const auto& law : laws) {
        auto s = rng_stream(77, id++);
        const int n = 1'000'000;
        double s1 = 0, s2 = 0, s4 = 0;
        for (int i = 0; i < n; ++i) {
            const double x = law.sample(s);
            s1 += x;
            s2 += x * x;
            s4 += x * x * x * x;
        }
        const double m1 = s1 / n;
        const double m2 = s2 / n;
        const double se1 = std::sqrt(std::max(m2 - m1 * m1, 0.0) / n);
        const double se2 = std::sqrt(std::max(s4 / n - m2 * m2, 0.0) / n);
        CHECK(std::fabs(m1 - law.m1()) <= 5 * se1 + 1e-12);
        CHECK(std::fabs(m2 - law.m2().value()) <= 5 * se2 + 1e-12);
    }
}

TEST_CASE("distribution text round trip") {
    for (const char* text : {"rademacher", "gaussian:0.5,2", "twopoint:0,3,0.5", "constant:1", "pareto:1.5,1"}) {
        const auto d = StepDistribution::parse(text);
        CHECK(StepDistribution::parse(d.to_string()).to_string() == d.to_string());
    }
    CHECK_THROWS(StepDistribution::parse("cauchy"));
    CHECK_THROWS(StepDistribution::parse("gaussian:1"));
}

TEST_CASE("truncated moments") {
    const auto tp = StepDistribution::two_point(0.0, 3.0, 0.5);
    // t_n = sqrt(n): the atom 3 survives from n = 9 on.
    CHECK(tp.truncated_moment(2, Truncation::Sqrt, 8) == 0.0);
    CHECK(tp.truncated_moment(2, Truncation::Sqrt, 9) == doctest::Approx(4.5));
    CHECK(tp.truncated_moment(1, Truncation::None, 1) == doctest::Approx(1.5));

    const auto g = StepDistribution::gaussian(0.0, 1.0);
    CHECK(g.truncated_moment(2, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));
    CHECK(g.truncated_moment(0, 1.0) == doctest::Approx(0.6826894921370859));
    // E[X^2; |X| <= 1] = P(|X|<=1) - 2 phi(1)
    CHECK(g.truncated_moment(2, 1.0) == doctest::Approx(0.6826894921370859 - 2 * 0.24197072451914337));

    const auto par = StepDistribution::pareto(1.5, 1.0);
    // E[X^2; X <= L] = alpha/(2-alpha) (L^(2-alpha) - 1)
    CHECK(par.truncated_moment(2, 100.0) == doctest::Approx(3.0 * (10.0 - 1.0)));
    CHECK(std::isinf(par.truncated_moment(2, std::numeric_limits<double>::infinity())));
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(parse_double("1/3") == doctest::Approx(1.0 / 3.0));
    CHECK(parse_double(format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK_THROWS(parse_double("abc"));
}
