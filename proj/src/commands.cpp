#include "rwalk/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rwalk/format.hpp"
#include "rwalk/limits.hpp"
#include "rwalk/moments.hpp"
#include "rwalk/monte_carlo.hpp"
#include "rwalk/oracle.hpp"
#include "rwalk/parallel.hpp"
#include "rwalk/verify.hpp"

namespace rwalk {

namespace {

constexpr double kOracleTolerance = 1e-10;

WalkConfig walk_config(const RunConfig& cfg) {
    WalkConfig w;
    w.p = cfg.p;
    w.sign = cfg.sign;
    w.truncation = cfg.truncation;
    w.horizon = cfg.n;
    w.seed = cfg.seed;
    w.checkpoints = cfg.checkpoints;
    return w;
}

}  // namespace

int cmd_simulate(const RunConfig& config, std::ostream& out) {
    const auto cfg = config.resolved();
    const auto dist = cfg.step_distribution();
    StatisticSpec stat;
    stat.normalization = cfg.normalization;
    stat.centering = *cfg.centering;
    stat.keep_samples = true;
    const auto summary = monte_carlo(dist, walk_config(cfg), cfg.replicas, stat, cfg.parallelism);

    out << config_comment_block(cfg) << "replica,n,S,normalized_S\n";
    for (std::uint64_t r = 0; r < summary.samples.size(); ++r) {
        for (std::size_t k = 0; k < cfg.checkpoints.size(); ++k) {
            const double s = summary.samples[r][k];
            out << r + 1 << ',' << cfg.checkpoints[k] << ',' << format_double(s) << ','
                << format_double(normalize(s, cfg.checkpoints[k], stat)) << '\n';
        }
    }
    return 0;
}

int cmd_moments(const RunConfig& config, std::ostream& out) {
    const auto cfg = config.resolved();
    const auto table = moment_table(cfg.step_distribution(), cfg.p, cfg.sign, cfg.truncation, cfg.checkpoints);
    out << config_comment_block(cfg);
    write_moment_csv(out, table);
    return 0;
}

int cmd_oracle(const RunConfig& config, std::ostream& out) {
    const auto cfg = config.resolved();
    if (cfg.n > kOracleMaxSteps) {
        throw ConfigError("oracle: n must be <= " + std::to_string(kOracleMaxSteps));
    }
    const auto dist = cfg.step_distribution();
    if (!dist.has_finite_support()) throw ConfigError("oracle: distribution must have finite support");
    const auto n = cfg.n;

    double worst = 0.0;
    auto entries = nlohmann::ordered_json::array();
    auto compare = [&](nlohmann::ordered_json& checks, const char* quantity, long double exact, double recursion) {
        const double err = std::fabs(static_cast<double>(exact) - recursion);
        worst = std::max(worst, err);
        checks.push_back({{"quantity", quantity},
                          {"exact", static_cast<double>(exact)},
                          {"recursion", recursion},
                          {"abs_error", err}});
    };

    for (const auto& name : cfg.functionals) {
        const auto f = Functional::parse(name);
        if (f.genealogy_only() && (f.j < 1 || f.j > n)) {
            throw ConfigError("oracle: functional " + name + " needs 1 <= j <= n");
        }
        const std::vector<Sign> signs =
            f.genealogy_only() ? std::vector<Sign>{Sign::Positive} : std::vector<Sign>{Sign::Positive, Sign::Negative};
        for (Sign sign : signs) {
            const auto law = enumerate_exact(dist, cfg.p, sign, cfg.truncation, n, f);
            nlohmann::ordered_json entry;
            entry["functional"] = f.to_string();
            if (!f.genealogy_only()) entry["sign"] = to_string(sign);
            auto outcomes = nlohmann::ordered_json::array();
            for (const auto& o : law.outcomes()) {
                outcomes.push_back({{"value", o.value}, {"probability", static_cast<double>(o.probability)}});
            }
            entry["law"] = outcomes;
            entry["mean"] = static_cast<double>(law.mean());
            entry["variance"] = static_cast<double>(law.variance());
            auto checks = nlohmann::ordered_json::array();
            switch (f.kind) {
                case FunctionalKind::WalkValue: {
                    const bool pos = sign == Sign::Positive;
                    compare(checks, "mean", law.mean(),
                            (pos ? mean_positive : mean_negative)(dist, cfg.p, cfg.truncation, n).back());
                    compare(checks, "variance", law.variance(),
                            (pos ? var_positive : var_negative)(dist, cfg.p, cfg.truncation, n).back());
                    break;
                }
                case FunctionalKind::LastInnovation:
                    compare(checks, "second_moment", law.moment(2),
                            second_moment_innovation(dist, cfg.p, cfg.truncation, n).back());
                    break;
                case FunctionalKind::Occupancy:
                    compare(checks, "mean", law.mean(), expected_occupancy(cfg.p, f.j, n));
                    break;
                case FunctionalKind::SignedOccupancy:
                    compare(checks, "mean", law.mean(), expected_delta(cfg.p, f.j, n));
                    compare(checks, "second_moment", law.moment(2), expected_delta2(cfg.p, f.j, n));
                    break;
            }
            entry["cross_checks"] = checks;
            entries.push_back(std::move(entry));
        }
    }

    nlohmann::ordered_json report;
    report["config"] = config_json(cfg);
    report["max_discrepancy"] = worst;
    report["tolerance"] = kOracleTolerance;
    report["passed"] = worst <= kOracleTolerance;
    report["functionals"] = entries;
    out << report.dump(2) << '\n';
    return worst <= kOracleTolerance ? 0 : 1;
}

int cmd_limits(const RunConfig& config, std::ostream& out) {
    const auto cfg = config.resolved();
    const auto paths = parallel_map(cfg.replicas, cfg.parallelism, [&](std::uint64_t r) {
        auto rng = rng_stream(cfg.seed, r + 1);
        if (cfg.process == "noise-reinforced") return sample_noise_reinforced_bm(cfg.p, cfg.grid, rng);
        if (cfg.process == "counterbalanced") return sample_counterbalanced_bm(cfg.p, cfg.grid, rng);
        return sample_bm(cfg.grid, rng);
    });
    out << config_comment_block(cfg);
    write_paths_csv(out, paths);
    return 0;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& table) {
    const auto cfg = config.resolved();
    std::vector<CheckSpec> specs;
    for (const auto& name : cfg.checks) {
        auto spec = default_check_spec(parse_check_id(name));
        spec.seed = cfg.seed;
        spec.level = cfg.level;
        spec.parallelism = cfg.parallelism;
        if (cfg.is_explicit("distribution")) spec.dist = cfg.step_distribution();
        if (cfg.is_explicit("p")) spec.p = cfg.p;
        if (cfg.is_explicit("sign")) spec.sign = cfg.sign;
        if (cfg.is_explicit("truncation")) spec.truncation = cfg.truncation;
        if (cfg.is_explicit("n")) spec.n = cfg.n;
        if (cfg.is_explicit("replicas")) spec.replicas = cfg.replicas;
        specs.push_back(std::move(spec));
    }
    std::vector<VerificationReport> reports;
    for (const auto& spec : specs) {
        try {
            reports.push_back(run_check(spec));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(to_string(spec.id) + ": " + e.what());
        } catch (const std::domain_error& e) {
            throw ConfigError(to_string(spec.id) + ": " + e.what());
        }
    }
    const bool passed = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
    nlohmann::ordered_json doc;
    doc["config"] = config_json(cfg);
    doc["passed"] = passed;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    doc["reports"] = arr;
    out << doc.dump(2) << '\n';
    table << reports_table(reports);
    return passed ? 0 : 1;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& table) {
    cfg.validate();
    try {
        switch (cfg.command) {
            case Command::Simulate: return cmd_simulate(cfg, out);
            case Command::Moments: return cmd_moments(cfg, out);
            case Command::Oracle: return cmd_oracle(cfg, out);
            case Command::Limits: return cmd_limits(cfg, out);
            case Command::Verify: return cmd_verify(cfg, out, table);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    return 2;
}

}  // namespace rwalk
