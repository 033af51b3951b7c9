#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rwalk/distribution.hpp"
#include "rwalk/rng.hpp"

namespace rwalk {

enum class ProcessKind { StandardBM, NoiseReinforcedBM, CounterbalancedBM };

std::string to_string(ProcessKind kind);

struct GaussianPath {
    ProcessKind kind = ProcessKind::StandardBM;
    double p = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
};

/// W on `grid` (non-decreasing, all >= 0). W(0) = 0 is implied when 0 is
/// absent. Throws std::invalid_argument for an unsorted or negative grid.
GaussianPath sample_bm(std::span<const double> grid, RandomStream& rng);

/// t^p / sqrt(1 - 2p) W(t^{1-2p}) for p in [0, 1/2).
/// Throws std::domain_error("diffusive regime only") for p >= 1/2.
GaussianPath sample_noise_reinforced_bm(double p, std::span<const double> grid, RandomStream& rng);

/// t^{-p} / sqrt(2p + 1) W(t^{2p+1}) for p in [0, 1), 0 at t = 0.
GaussianPath sample_counterbalanced_bm(double p, std::span<const double> grid, RandomStream& rng);

/// E[B(s) B(t)] in closed form, symmetric in (s, t).
double covariance(ProcessKind kind, double p, double s, double t);

/// CSV rows "t,value,replica" for each path, replica ids starting at first_id.
void write_paths_csv(std::ostream& out, std::span<const GaussianPath> paths, std::uint64_t first_id = 1);

enum class LilRegime { PositiveDiffusive, PositiveCritical, Negative };

std::string to_string(LilRegime regime);

struct LilEnvelope {
    LilRegime regime = LilRegime::PositiveDiffusive;
    double constant = 0.0;
    /// Smallest n at which scale(n) is defined and increasing.
    std::uint64_t n0 = 3;

    /// sqrt(2 n log log n), or sqrt(2 n log n log log log n) when critical.
    double scale(std::uint64_t n) const;
};

/// Throws std::invalid_argument for a regime-inappropriate p and
/// std::domain_error("second moment required") for infinite m2.
LilEnvelope lil_envelope(LilRegime regime, double p, const StepDistribution& dist);

/// Distribution of M* / constant, M* = max_k (S(2^k) - E S(2^k)) / scale(2^k)
/// over k = first_exp..horizon_exp, evaluated on the Gaussian limit of the
/// standardized walk (sigma = 1) instead of the walk itself.
struct LilCalibration {
    double median_ratio = 0.0;
    double q95_ratio = 0.0;
    std::uint64_t replicas = 0;
};

LilCalibration calibrate_lil_band(LilRegime regime, double p, unsigned first_exp, unsigned horizon_exp,
                                  std::uint64_t replicas, std::uint64_t seed);

}  // namespace rwalk
