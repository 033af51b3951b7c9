#include "rwalk/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rwalk/parallel.hpp"

namespace rwalk {

double normalize(double value, std::uint64_t n, const StatisticSpec& spec) noexcept {
    const double nd = static_cast<double>(n);
    const double centered = value - spec.centering * nd;
    switch (spec.normalization) {
        case Normalization::Linear: return centered / nd;
        case Normalization::Sqrt: return centered / std::sqrt(nd);
        case Normalization::None: break;
    }
    return centered;
}

namespace {

struct ReplicaOutcome {
    std::vector<double> values;
    double repeated_fraction = 0.0;
};

}  // namespace

SampleSummary monte_carlo(const StepDistribution& dist, const WalkConfig& cfg, std::uint64_t replicas,
                          const StatisticSpec& spec, unsigned parallelism) {
    if (replicas == 0) throw std::invalid_argument("monte_carlo: replicas must be >= 1");
    cfg.validate();
    const auto checkpoints = cfg.resolved_checkpoints();

    auto outcomes = parallel_map(replicas, parallelism, [&](std::uint64_t r) {
        auto rng = rng_stream(cfg.seed, r + 1);
        const auto path = simulate(dist, cfg, rng);
        ReplicaOutcome out;
        out.values.reserve(path.walk_values.size());
        for (const auto& [n, v] : path.walk_values) out.values.push_back(v);
        out.repeated_fraction = path.repeated_fraction;
        return out;
    });

    SampleSummary summary;
    summary.replicas = replicas;
    summary.checkpoints.resize(checkpoints.size());
    std::vector<Moments> raw(replicas);
    std::vector<Moments> normalized(replicas);
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        for (std::uint64_t r = 0; r < replicas; ++r) {
            raw[r] = Moments{};
            raw[r].add(outcomes[r].values[k]);
            normalized[r] = Moments{};
            normalized[r].add(normalize(outcomes[r].values[k], checkpoints[k], spec));
        }
        summary.checkpoints[k] = {checkpoints[k], merge_pairwise(raw), merge_pairwise(normalized)};
    }
    if (spec.track_max) {
        for (std::uint64_t r = 0; r < replicas; ++r) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < checkpoints.size(); ++k) {
                best = std::max(best, normalize(outcomes[r].values[k], checkpoints[k], spec));
            }
            raw[r] = Moments{};
            raw[r].add(best);
        }
        summary.maximum = merge_pairwise(raw);
    }
    std::vector<Moments> fractions(replicas);
    for (std::uint64_t r = 0; r < replicas; ++r) fractions[r].add(outcomes[r].repeated_fraction);
    summary.repeated_fraction = merge_pairwise(fractions).mean();
    if (spec.keep_samples) {
        summary.samples.reserve(replicas);
        for (auto& o : outcomes) summary.samples.push_back(std::move(o.values));
    }
    return summary;
}

}  // namespace rwalk
