#include "rwalk/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rwalk/format.hpp"
#include "rwalk/stats.hpp"

namespace rwalk {

std::string to_string(ProcessKind kind) {
    switch (kind) {
        case ProcessKind::StandardBM: return "standard-bm";
        case ProcessKind::NoiseReinforcedBM: return "noise-reinforced-bm";
        case ProcessKind::CounterbalancedBM: return "counterbalanced-bm";
    }
    return "?";
}

std::string to_string(LilRegime regime) {
    switch (regime) {
        case LilRegime::PositiveDiffusive: return "positive-diffusive";
        case LilRegime::PositiveCritical: return "positive-critical";
        case LilRegime::Negative: return "negative";
    }
    return "?";
}

namespace {

void check_grid(std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
            throw std::invalid_argument("grid times must be finite and >= 0");
        }
        if (i > 0 && grid[i] < grid[i - 1]) throw std::invalid_argument("grid must be sorted");
    }
}

// W evaluated at the (sorted) times u.
std::vector<double> brownian_values(std::span<const double> u, RandomStream& rng) {
    std::vector<double> w(u.size());
    double last_time = 0.0;
    double last_value = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double dt = u[i] - last_time;
        if (dt > 0.0) last_value += std::sqrt(dt) * rng.normal();
        w[i] = last_value;
        last_time = u[i];
    }
    return w;
}

void check_noise_reinforced(double p) {
    if (!(p >= 0.0)) throw std::invalid_argument("noise-reinforced BM: p must be >= 0");
    if (!(p < 0.5)) throw std::domain_error("diffusive regime only");
}

void check_counterbalanced(double p) {
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("counterbalanced BM: p must lie in [0,1)");
}

}  // namespace

GaussianPath sample_bm(std::span<const double> grid, RandomStream& rng) {
    check_grid(grid);
    GaussianPath path;
    path.grid.assign(grid.begin(), grid.end());
    path.values = brownian_values(grid, rng);
    return path;
}

GaussianPath sample_noise_reinforced_bm(double p, std::span<const double> grid, RandomStream& rng) {
    check_noise_reinforced(p);
    check_grid(grid);
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = std::pow(grid[i], 1.0 - 2.0 * p);
    const auto w = brownian_values(u, rng);
    GaussianPath path{ProcessKind::NoiseReinforcedBM, p, {grid.begin(), grid.end()}, std::vector<double>(grid.size())};
    const double norm = 1.0 / std::sqrt(1.0 - 2.0 * p);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        path.values[i] = grid[i] == 0.0 ? 0.0 : std::pow(grid[i], p) * norm * w[i];
    }
    return path;
}

GaussianPath sample_counterbalanced_bm(double p, std::span<const double> grid, RandomStream& rng) {
    check_counterbalanced(p);
    check_grid(grid);
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = std::pow(grid[i], 2.0 * p + 1.0);
    const auto w = brownian_values(u, rng);
    GaussianPath path{ProcessKind::CounterbalancedBM, p, {grid.begin(), grid.end()}, std::vector<double>(grid.size())};
    const double norm = 1.0 / std::sqrt(2.0 * p + 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        path.values[i] = grid[i] == 0.0 ? 0.0 : std::pow(grid[i], -p) * norm * w[i];
    }
    return path;
}

double covariance(ProcessKind kind, double p, double s, double t) {
    if (!(s >= 0.0 && t >= 0.0)) throw std::invalid_argument("covariance: times must be >= 0");
    if (s > t) std::swap(s, t);
    switch (kind) {
        case ProcessKind::StandardBM: return s;
        case ProcessKind::NoiseReinforcedBM:
            check_noise_reinforced(p);
            if (s == 0.0) return 0.0;
            return std::pow(t, p) * std::pow(s, 1.0 - p) / (1.0 - 2.0 * p);
        case ProcessKind::CounterbalancedBM:
            check_counterbalanced(p);
            if (s == 0.0) return 0.0;
            return std::pow(s, 1.0 + p) * std::pow(t, -p) / (2.0 * p + 1.0);
    }
    return 0.0;
}

void write_paths_csv(std::ostream& out, std::span<const GaussianPath> paths, std::uint64_t first_id) {
    out << "t,value,replica\n";
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& path = paths[r];
        for (std::size_t i = 0; i < path.grid.size(); ++i) {
            out << format_double(path.grid[i]) << ',' << format_double(path.values[i]) << ',' << (first_id + r)
                << '\n';
        }
    }
}

double LilEnvelope::scale(std::uint64_t n) const {
    if (n < n0) throw std::domain_error("LIL scale undefined below n0 = " + std::to_string(n0));
    const double nd = static_cast<double>(n);
    const double l = std::log(nd);
    if (regime == LilRegime::PositiveCritical) return std::sqrt(2.0 * nd * l * std::log(std::log(l)));
    return std::sqrt(2.0 * nd * std::log(l));
}

LilEnvelope lil_envelope(LilRegime regime, double p, const StepDistribution& dist) {
    LilEnvelope env;
    env.regime = regime;
    switch (regime) {
        case LilRegime::PositiveDiffusive:
            if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("positive diffusive LIL needs p in [0, 1/2)");
            env.constant = std::sqrt(dist.sigma2() / (1.0 - 2.0 * p));
            env.n0 = 3;
            break;
        case LilRegime::PositiveCritical:
            if (p != 0.5) throw std::invalid_argument("critical LIL needs p = 1/2");
            env.constant = std::sqrt(dist.sigma2());
            env.n0 = 16;
            break;
        case LilRegime::Negative: {
            if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("negative LIL needs p in [0, 1)");
            const auto k = derived_constants(dist, p);
            env.constant = std::sqrt(k.sigma_check2 / (2.0 * p + 1.0));
            env.n0 = 3;
            break;
        }
    }
    return env;
}

LilCalibration calibrate_lil_band(LilRegime regime, double p, unsigned first_exp, unsigned horizon_exp,
                                  std::uint64_t replicas, std::uint64_t seed) {
    if (first_exp < 4 || first_exp > horizon_exp || horizon_exp > 62) {
        throw std::invalid_argument("calibrate_lil_band: need 4 <= first_exp <= horizon_exp <= 62");
    }
    if (replicas == 0) throw std::invalid_argument("calibrate_lil_band: replicas must be >= 1");
    const auto env = lil_envelope(regime, p, StepDistribution::rademacher());
    const double horizon = std::ldexp(1.0, static_cast<int>(horizon_exp));

    // Limit of the standardized walk at n_k = 2^k, expressed through a
    // Gaussian process on [0, 1]: S(n_k) ~ sqrt(N) B(n_k / N) in the diffusive
    // cases and S(n_k) ~ sqrt(n_k log N) W(log n_k / log N) when critical.
    std::vector<double> grid;
    std::vector<double> factor;
    for (unsigned k = first_exp; k <= horizon_exp; ++k) {
        const double n = std::ldexp(1.0, static_cast<int>(k));
        const double s = env.scale(static_cast<std::uint64_t>(n));
        if (regime == LilRegime::PositiveCritical) {
            grid.push_back(static_cast<double>(k) / horizon_exp);
            factor.push_back(std::sqrt(n * std::log(horizon)) / s);
        } else {
            grid.push_back(n / horizon);
            factor.push_back(std::sqrt(horizon) / s);
        }
    }
    std::vector<double> ratios(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r) {
        auto rng = rng_stream(seed, r + 1);
        GaussianPath path;
        switch (regime) {
            case LilRegime::PositiveDiffusive: path = sample_noise_reinforced_bm(p, grid, rng); break;
            case LilRegime::PositiveCritical: path = sample_bm(grid, rng); break;
            case LilRegime::Negative: path = sample_counterbalanced_bm(p, grid, rng); break;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i) best = std::max(best, path.values[i] * factor[i]);
        ratios[r] = best / env.constant;
    }
    return {median(ratios), quantile(ratios, 0.95), replicas};
}

}  // namespace rwalk
