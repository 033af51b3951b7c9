#pragma once

#include <cstdint>
#include <vector>

#include "rwalk/distribution.hpp"
#include "rwalk/stats.hpp"
#include "rwalk/walk.hpp"

namespace rwalk {

/// How the per-checkpoint value S(n) is normalized: (S(n) - centering * n) / d(n).
enum class Normalization { None, Linear, Sqrt };

struct StatisticSpec {
    Normalization normalization = Normalization::Sqrt;
    double centering = 0.0;
    /// Track max over checkpoints of the normalized value per replica.
    bool track_max = false;
    /// Keep the raw S(n) of every replica and checkpoint.
    bool keep_samples = false;
};

struct CheckpointSummary {
    std::uint64_t n = 0;
    Moments raw;         // S(n)
    Moments normalized;  // normalized S(n)
};

struct SampleSummary {
    std::uint64_t replicas = 0;
    std::vector<CheckpointSummary> checkpoints;
    /// Present when track_max: moments of the per-replica maximum.
    Moments maximum;
    /// Present when keep_samples: samples[r][k] = S(checkpoint k) of replica r.
    std::vector<std::vector<double>> samples;
    /// Mean fraction of repeated steps.
    double repeated_fraction = 0.0;
};

double normalize(double value, std::uint64_t n, const StatisticSpec& spec) noexcept;

/// Runs replica r on stream (cfg.seed, r + 1) for r = 0..replicas-1 and
/// merges their statistics in a fixed pairwise tree. The result is
/// bit-identical for every value of `parallelism`.
SampleSummary monte_carlo(const StepDistribution& dist, const WalkConfig& cfg, std::uint64_t replicas,
                          const StatisticSpec& spec, unsigned parallelism);

}  // namespace rwalk
