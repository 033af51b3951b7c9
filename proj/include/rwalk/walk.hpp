#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rwalk/distribution.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/types.hpp"

namespace rwalk {

struct WalkConfig {
    double p = 0.0;
    Sign sign = Sign::Positive;
    Truncation truncation = Truncation::None;
    std::uint64_t horizon = 1;
    std::uint64_t seed = 1;
    /// Strictly increasing, last entry <= horizon. Empty means {horizon}.
    std::vector<std::uint64_t> checkpoints;

    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;
    /// Checkpoints with the empty-list default applied.
    std::vector<std::uint64_t> resolved_checkpoints() const;
};

struct PathResult {
    std::vector<std::pair<std::uint64_t, double>> walk_values;
    double final_value = 0.0;
    std::uint64_t step_count = 0;
    /// Fraction of steps 2..n that repeated a past step.
    double repeated_fraction = 0.0;
};

/// One step of a realization. `u` is set iff epsilon == 1, `x` iff epsilon == 0.
/// `x` holds the innovation as used by the walk, i.e. after truncation.
struct StepRecord {
    std::uint64_t index = 0;
    int epsilon = 0;
    std::optional<std::uint64_t> u;
    std::optional<double> x;
};

/// The genealogical forest: one tree per fresh step j, holding every later
/// step whose repeat chain leads back to j.
struct GenealogyTree {
    std::uint64_t root = 0;
    std::vector<std::uint64_t> vertices;  // increasing, starts with root
    std::uint64_t even_count = 0;
    std::uint64_t odd_count = 0;

    std::uint64_t occupancy() const noexcept { return even_count + odd_count; }
    std::int64_t delta() const noexcept {
        return static_cast<std::int64_t>(even_count) - static_cast<std::int64_t>(odd_count);
    }
};

class GenealogyForest {
public:
    explicit GenealogyForest(std::uint64_t horizon = 0) : horizon_(horizon) {}

    std::uint64_t horizon() const noexcept { return horizon_; }
    const std::vector<GenealogyTree>& trees() const noexcept { return trees_; }
    /// Tree rooted at j, or nullptr when step j was a repeat.
    const GenealogyTree* tree(std::uint64_t j) const;
    /// N_j(n); zero when j is not a root.
    std::uint64_t occupancy(std::uint64_t j) const;
    /// Delta_j(n) = Even - Odd; zero when j is not a root.
    std::int64_t delta(std::uint64_t j) const;

private:
    friend class GenealogyBuilder;
    std::uint64_t horizon_;
    std::vector<GenealogyTree> trees_;
    std::vector<std::uint32_t> tree_of_root_;  // index+1 into trees_, 0 if none
};

struct GenealogyRun {
    PathResult path;
    GenealogyForest forest;
    std::vector<StepRecord> records;
};

/// Direct recursion for X^_n: fresh with probability 1-p, otherwise a copy of
/// X^_{U_n}, U_n uniform on {1..n-1}. Requires cfg.sign == Positive.
PathResult simulate_positive(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng);
/// As simulate_positive with the copied step negated. Requires cfg.sign == Negative.
PathResult simulate_negative(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng);
/// Dispatches on cfg.sign. Both signs consume the stream identically, so the
/// same stream realizes the positive and negative walks on shared draws.
PathResult simulate(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng);

/// Builds the forest online and keeps every step record; O(horizon) memory.
/// Consumes the stream exactly like simulate().
GenealogyRun simulate_with_genealogy(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng);

class ReplayError : public std::invalid_argument {
public:
    ReplayError(std::uint64_t index, const std::string& what)
        : std::invalid_argument("record " + std::to_string(index) + ": " + what), index_(index) {}
    /// 1-based position of the first offending record.
    std::uint64_t index() const noexcept { return index_; }

private:
    std::uint64_t index_;
};

/// Recomputes a walk from its records. Throws ReplayError on malformed input.
PathResult replay(std::span<const StepRecord> records, Sign sign, std::span<const std::uint64_t> checkpoints);
/// Same, with fresh_values[k-1] replacing record k's innovation for every fresh step k.
PathResult replay(std::span<const StepRecord> records, std::span<const double> fresh_values, Sign sign,
                  std::span<const std::uint64_t> checkpoints);

/// Binary trace of step records, little-endian:
///   bytes 0-7   magic "RWTRACE1"
///   bytes 8-11  u32 format version (1)
///   bytes 12-15 u32 reserved (0)
///   bytes 16-23 u64 record count
///   per record: u8 epsilon, u64 u (0 when fresh), f64 x (0 when repeated)
void write_trace(std::ostream& out, std::span<const StepRecord> records);
std::vector<StepRecord> read_trace(std::istream& in);

}  // namespace rwalk
