// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-rwalk> <scratch-dir> [criterion numbers...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rwalk/moments.hpp"
#include "rwalk/oracle.hpp"
#include "rwalk/parallel.hpp"
#include "rwalk/verify.hpp"
#include "rwalk/walk.hpp"

using namespace rwalk;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        passed = passed && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "[failed] ") + what;
    }
};

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

unsigned workers() { return default_parallelism(); }

std::string criterion_text(const VerificationReport& r) {
    std::string s;
    for (const auto& c : r.criteria) {
        if (!s.empty()) s += ", ";
        s += c.name + " = " + num(c.statistic) + (c.passed ? "" : " (out of band)");
    }
    return s;
}

VerificationReport run(CheckSpec spec) {
    spec.parallelism = workers();
    return run_check(spec);
}

// 1. Exhaustive enumeration against the moment recursions, n <= 7.
Outcome oracle_equivalence() {
    struct Law {
        StepDistribution dist;
        Truncation rule;
    };
    const std::vector<Law> laws{{StepDistribution::rademacher(), Truncation::None},
                                {StepDistribution::two_point(0.0, 3.0, 0.5), Truncation::Sqrt},
                                {StepDistribution::two_point(-1.0, 2.5, 0.4), Truncation::None}};
    double worst = 0.0;
    auto track = [&worst](long double exact, double recursion) {
        worst = std::max(worst, std::fabs(static_cast<double>(exact) - recursion));
    };
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        for (std::uint64_t n = 1; n <= 7; ++n) {
            for (const auto& law : laws) {
                const auto pos = enumerate_exact(law.dist, p, Sign::Positive, law.rule, n, Functional::walk_value());
                const auto neg = enumerate_exact(law.dist, p, Sign::Negative, law.rule, n, Functional::walk_value());
                track(pos.mean(), mean_positive(law.dist, p, law.rule, n).back());
                track(pos.variance(), var_positive(law.dist, p, law.rule, n).back());
                track(neg.mean(), mean_negative(law.dist, p, law.rule, n).back());
                track(neg.variance(), var_negative(law.dist, p, law.rule, n).back());
            }
            const auto rad = StepDistribution::rademacher();
            for (std::uint64_t j = 1; j <= n; ++j) {
                const auto occ = enumerate_exact(rad, p, Sign::Positive, Truncation::None, n, Functional::occupancy(j));
                const auto del = enumerate_exact(rad, p, Sign::Positive, Truncation::None, n, Functional::signed_occupancy(j));
                track(occ.mean(), expected_occupancy(p, j, n));
                track(del.mean(), expected_delta(p, j, n));
                track(del.moment(2), expected_delta2(p, j, n));
            }
        }
    }
    Outcome o;
    o.require(worst <= 1e-10, "max |oracle - recursion| = " + num(worst, 3) + " (tolerance 1e-10)");
    return o;
}

// 2. Sum_j N_j X_j = S^(n) and Sum_j Delta_j X_j = S_check(n) on every realization.
Outcome representation_identity() {
    std::uint64_t mismatches = 0;
    std::uint64_t realizations = 0;
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        for (Sign sign : {Sign::Positive, Sign::Negative}) {
            WalkConfig cfg;
            cfg.p = p;
            cfg.sign = sign;
            cfg.horizon = 500;
            const auto bad = parallel_map(1000, workers(), [&](std::uint64_t r) {
                auto rng = rng_stream(20'240'601, r + 1);
                const auto run = simulate_with_genealogy(StepDistribution::rademacher(), cfg, rng);
                double total = 0.0;
                for (const auto& tree : run.forest.trees()) {
                    const double x = *run.records[tree.root - 1].x;
                    total += (sign == Sign::Positive ? static_cast<double>(tree.occupancy())
                                                     : static_cast<double>(tree.delta())) *
                             x;
                }
                return total == run.path.final_value ? 0 : 1;
            });
            for (int b : bad) mismatches += static_cast<std::uint64_t>(b);
            realizations += bad.size();
        }
    }
    Outcome o;
    o.require(mismatches == 0,
              std::to_string(mismatches) + " mismatches over " + std::to_string(realizations) + " realizations (n = 500)");
    return o;
}

// 3. Law of large numbers.
Outcome lln() {
    Outcome o;
    auto neg = default_check_spec(CheckId::LlnNeg);
    neg.dist = StepDistribution::constant(1.0);
    neg.p = 1.0 / 3.0;
    neg.n = 1'000'000;
    neg.replicas = 1;
    neg.abs_tolerance = 0.01;
    const auto a = run(neg);
    o.require(a.passed, "Constant(1) negative p=1/3 single path S(n)/n = " + num(a.primary().statistic, 6) +
                            " (target 0.5 +- 0.01)");

    auto pos = default_check_spec(CheckId::LlnPos);
    pos.dist = StepDistribution::pareto(1.5, 1.0);
    pos.p = 0.3;
    pos.n = 1'000'000;
    pos.replicas = 1000;
    pos.abs_tolerance = 0.1;
    const auto b = run(pos);
    o.require(b.passed, "Pareto(1.5,1) positive p=0.3 median S(n)/n = " + num(b.primary().statistic, 6) +
                            " (target 3 +- 0.1)");
    return o;
}

// 4. Variance phase transition.
Outcome variance_regimes() {
    Outcome o;
    const auto rad = StepDistribution::rademacher();
    const std::uint64_t n = 1'000'000;
    const double nd = static_cast<double>(n);
    const double diffusive = var_positive(rad, 0.25, Truncation::None, n).back() / nd;
    o.require(std::fabs(diffusive / 2.0 - 1.0) <= 0.01, "p=0.25 var/n = " + num(diffusive, 6) + " (2 +- 1%)");
    const double critical = var_positive(rad, 0.5, Truncation::None, n).back() / (nd * std::log(nd));
    o.require(std::fabs(critical - 1.0) <= 0.05, "p=0.5 var/(n ln n) = " + num(critical, 6) + " (1 +- 5%)");
    const double negative = var_negative(rad, 0.5, Truncation::None, n).back() / nd;
    o.require(std::fabs(negative / 0.5 - 1.0) <= 0.01, "negative p=0.5 var/n = " + num(negative, 6) + " (0.5 +- 1%)");

    struct Case {
        double p;
        Sign sign;
    };
    for (const auto& c : {Case{0.25, Sign::Positive}, Case{0.5, Sign::Positive}, Case{0.5, Sign::Negative}}) {
        auto spec = default_check_spec(CheckId::VarRegimes);
        spec.p = c.p;
        spec.sign = c.sign;
        spec.n = 100'000;
        spec.replicas = 10'000;
        const auto r = run(spec);
        const auto& k = r.primary();
        o.require(r.passed, "MC " + to_string(c.sign) + " p=" + num(c.p) + ": " + num(k.statistic) + " vs " +
                                num(k.target) + " (|diff| = " + num(std::fabs(k.statistic - k.target) / k.standard_error, 2) +
                                " SE <= 4)");
    }
    return o;
}

// 5. Marginal CLT and limit-process covariance.
Outcome clt_and_covariance() {
    Outcome o;
    for (auto id : {CheckId::CltMarginalPos, CheckId::CltMarginalNeg, CheckId::FcltCovPos, CheckId::FcltCovNeg}) {
        auto spec = default_check_spec(id);
        spec.n = 100'000;
        spec.replicas = 10'000;
        spec.level = 0.01;
        if (id == CheckId::FcltCovPos || id == CheckId::FcltCovNeg) spec.times = {0.25, 0.5, 1.0};
        const auto r = run(spec);
        o.require(r.passed, to_string(id) + " p=" + num(spec.p) + ": " + criterion_text(r));
    }
    return o;
}

// 6. Critical regime, p = 1/2.
Outcome critical() {
    auto spec = default_check_spec(CheckId::CriticalMarginal);
    spec.n = 1'000'000;
    spec.replicas = 10'000;
    spec.times = {1.0};
    spec.level = 0.01;
    const auto r = run(spec);
    Outcome o;
    o.require(r.passed, "KS D = " + num(r.primary().statistic) + " (critical " + num(r.primary().upper) + ", 1% level), p-value " +
                            num(r.details.begin()->at("ks_p_value").get<double>(), 3));
    return o;
}

// 7. LIL band with frozen calibrated bands.
Outcome lil() {
    Outcome o;
    struct Case {
        Sign sign;
        double p;
    };
    for (const auto& c : {Case{Sign::Positive, 0.25}, Case{Sign::Negative, 0.5}, Case{Sign::Positive, 0.0}}) {
        auto spec = default_check_spec(CheckId::LilBand);
        spec.sign = c.sign;
        spec.p = c.p;
        spec.n = std::uint64_t{1} << 20;
        spec.replicas = 200;
        const auto r = run(spec);
        o.require(r.passed, to_string(c.sign) + " p=" + num(c.p) + ": median " + num(r.criteria[0].statistic, 3) + " >= " +
                                num(r.criteria[0].lower, 3) + ", q95 " + num(r.criteria[1].statistic, 3) + " <= " +
                                num(r.criteria[1].upper, 3));
    }
    return o;
}

// 8. Even innovation moments: equality across signs, domination by the i.i.d. moment.
Outcome moment_inequality() {
    Outcome o;
    std::uint64_t exact_cases = 0;
    std::uint64_t exact_failures = 0;
    for (const auto& law : {StepDistribution::two_point(0.0, 3.0, 0.5), StepDistribution::two_point(-2.0, 4.0, 0.3),
                            StepDistribution::two_point(1.0, 2.5, 0.6)}) {
        for (double p : {0.25, 0.5, 0.9}) {
            for (std::uint64_t n = 1; n <= 7; ++n) {
                for (int m : {1, 2}) {
                    auto spec = default_check_spec(CheckId::MomentInequality);
                    spec.dist = law;
                    spec.p = p;
                    spec.n = n;
                    spec.m = m;
                    spec.truncation = Truncation::Sqrt;
                    ++exact_cases;
                    if (!run(spec).passed) ++exact_failures;
                }
            }
        }
    }
    o.require(exact_failures == 0, "exact: " + std::to_string(exact_cases - exact_failures) + "/" +
                                       std::to_string(exact_cases) + " TwoPoint cases hold");
    for (int m : {1, 2}) {
        auto spec = default_check_spec(CheckId::MomentInequality);
        spec.dist = StepDistribution::gaussian(0.0, 1.0);
        spec.p = 0.5;
        spec.n = 10'000;
        spec.m = m;
        spec.replicas = 10'000;
        spec.truncation = Truncation::Sqrt;
        const auto r = run(spec);
        o.require(r.passed, "Gaussian MC m=" + std::to_string(m) + ": " + criterion_text(r));
    }
    return o;
}

// 9. Recursion solver asymptotic classes at n = 10^6.
Outcome recursion_classes() {
    Outcome o;
    const std::uint64_t n = 1'000'000;
    const auto below = recursion_solve(0.5, BSequence{1.0}, 1.0, n);
    const double an_over_n = below.iterates.back() / static_cast<double>(n);
    o.require(std::fabs(an_over_n - 2.0) <= 0.01, "x=0.5: a_n/n = " + num(an_over_n, 6) + " (2 +- 0.01)");
    const auto at_one = recursion_solve(1.0, BSequence{1.0}, 1.0, n);
    o.require(std::fabs(at_one.ratio - 1.0) <= 0.01,
              "x=1: a_n/(n ln n) = " + num(at_one.ratio, 6) + " (1 +- 0.01), exact kernel agreement " +
                  num(at_one.kernel_error, 2));
    const auto above = recursion_solve(1.5, BSequence{1.0}, 1.0, n);
    o.require(above.asymptotic == AsymptoticClass::PowerX && std::fabs(above.drift - 1.0) <= 0.01,
              "x=1.5: (a_n/n^x) drift over the last decade = " + num(above.drift, 6) + " (1 +- 0.01)");
    return o;
}

// 10. Martingale CLT conditions at p = 0.25.
Outcome martingale() {
    auto spec = default_check_spec(CheckId::MartingaleConditions);
    spec.p = 0.25;
    spec.n = 1'000'000;
    spec.replicas = 100;
    const auto r = run(spec);
    Outcome o;
    o.require(r.passed, criterion_text(r));
    return o;
}

// 11. CLI outputs are byte-identical across reruns and parallelism.
std::string g_cli;
std::filesystem::path g_scratch;

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    Outcome o;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"simulate", "simulate --distribution gaussian:0.5,1 --p 0.3 -n 20000 --replicas 64"},
        {"moments", "moments --p 0.5 --sign negative -n 100000"},
        {"oracle", "oracle --p 0.4 -n 5 --distribution twopoint:0,3,0.5 --truncation sqrt"},
        {"limits", "limits --process counterbalanced --p 0.5 --replicas 32"},
        {"verify", "verify --checks LLN-pos,FCLT-cov-neg,Martingale-conditions -n 20000 --replicas 200"},
    };
    std::filesystem::create_directories(g_scratch);
    for (const auto& [name, args] : commands) {
        std::vector<std::string> outputs;
        for (const char* par : {"1", "4", "4"}) {
            const auto path = g_scratch / (name + "_" + par + "_" + std::to_string(outputs.size()) + ".out");
            const std::string cmd =
                g_cli + " " + args + " --seed 11 --parallelism " + par + " -o " + path.string() + " > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            if (status != 0) o.require(false, name + " exit status " + std::to_string(status));
            outputs.push_back(slurp(path));
        }
        const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[1] == outputs[2];
        o.require(same, name + (same ? " identical" : " differs") + " (" + std::to_string(outputs[0].size()) + " bytes)");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <path-to-rwalk> <scratch-dir> [criterion numbers...]\n");
        return 2;
    }
    g_cli = argv[1];
    g_scratch = argv[2];
    std::set<int> selected;
    for (int i = 3; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"representation identity", representation_identity},
        {"law of large numbers", lln},
        {"variance phase transition", variance_regimes},
        {"marginal CLT and covariance", clt_and_covariance},
        {"critical regime", critical},
        {"LIL band", lil},
        {"even moment inequality", moment_inequality},
        {"recursion classes", recursion_classes},
        {"martingale conditions", martingale},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.contains(number)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += outcome.passed ? 0 : 1;
        std::printf("%s C%d %s: %s [%.1f s]\n", outcome.passed ? "PASS" : "FAIL", number, criteria[i].first.c_str(),
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
