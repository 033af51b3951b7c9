#include "rwalk/walk.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "rwalk/detail/walk_loop.hpp"

namespace rwalk {

void WalkConfig::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("walk config: p must lie in [0,1]");
    if (horizon == 0) throw std::invalid_argument("walk config: horizon must be positive");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] == 0) throw std::invalid_argument("walk config: checkpoints must be >= 1");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
            throw std::invalid_argument("walk config: checkpoints must be strictly increasing");
        }
    }
    if (!checkpoints.empty() && checkpoints.back() > horizon) {
        throw std::invalid_argument("walk config: last checkpoint exceeds horizon");
    }
}

std::vector<std::uint64_t> WalkConfig::resolved_checkpoints() const {
    if (checkpoints.empty()) return {horizon};
    return checkpoints;
}

namespace {

PathResult run_path(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng) {
    cfg.validate();
    const auto checkpoints = cfg.resolved_checkpoints();
    std::vector<double> values(checkpoints.size());
    const auto out = detail::run_walk(dist, cfg, checkpoints, values.data(), rng, detail::NoObserver{});
    PathResult result;
    result.walk_values.reserve(checkpoints.size());
    for (std::size_t i = 0; i < checkpoints.size(); ++i) result.walk_values.emplace_back(checkpoints[i], values[i]);
    result.final_value = out.final_value;
    result.step_count = cfg.horizon;
    result.repeated_fraction =
        cfg.horizon > 1 ? static_cast<double>(out.repeats) / static_cast<double>(cfg.horizon - 1) : 0.0;
    return result;
}

}  // namespace

PathResult simulate_positive(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng) {
    if (cfg.sign != Sign::Positive) throw std::invalid_argument("simulate_positive: config sign is negative");
    return run_path(dist, cfg, rng);
}

PathResult simulate_negative(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng) {
    if (cfg.sign != Sign::Negative) throw std::invalid_argument("simulate_negative: config sign is positive");
    return run_path(dist, cfg, rng);
}

PathResult simulate(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng) {
    return run_path(dist, cfg, rng);
}

// ---------------------------------------------------------------------------
// Genealogy

const GenealogyTree* GenealogyForest::tree(std::uint64_t j) const {
    if (j == 0 || j > tree_of_root_.size() || tree_of_root_[j - 1] == 0) return nullptr;
    return &trees_[tree_of_root_[j - 1] - 1];
}

std::uint64_t GenealogyForest::occupancy(std::uint64_t j) const {
    const auto* t = tree(j);
    return t ? t->occupancy() : 0;
}

std::int64_t GenealogyForest::delta(std::uint64_t j) const {
    const auto* t = tree(j);
    return t ? t->delta() : 0;
}

class GenealogyBuilder {
public:
    explicit GenealogyBuilder(std::uint64_t horizon) : forest_(horizon) {
        forest_.tree_of_root_.assign(horizon, 0);
        tree_index_.reserve(horizon);
        odd_.reserve(horizon);
    }

    void add_root(std::uint64_t k) {
        forest_.trees_.push_back(GenealogyTree{k, {k}, 1, 0});
        forest_.tree_of_root_[k - 1] = static_cast<std::uint32_t>(forest_.trees_.size());
        tree_index_.push_back(static_cast<std::uint32_t>(forest_.trees_.size() - 1));
        odd_.push_back(0);
    }

    // Vertex k hangs below vertex u; its depth parity flips.
    void add_child(std::uint64_t k, std::uint64_t u) {
        const auto t = tree_index_[u - 1];
        const auto parity = static_cast<std::uint8_t>(odd_[u - 1] ^ 1);
        auto& tree = forest_.trees_[t];
        tree.vertices.push_back(k);
        if (parity) {
            ++tree.odd_count;
        } else {
            ++tree.even_count;
        }
        tree_index_.push_back(t);
        odd_.push_back(parity);
    }

    GenealogyForest take() { return std::move(forest_); }

private:
    GenealogyForest forest_;
    std::vector<std::uint32_t> tree_index_;
    std::vector<std::uint8_t> odd_;
};

GenealogyRun simulate_with_genealogy(const StepDistribution& dist, const WalkConfig& cfg, RandomStream& rng) {
    cfg.validate();
    if (cfg.horizon > 0xFFFFFFFFull) throw std::invalid_argument("simulate_with_genealogy: horizon too large");
    const auto checkpoints = cfg.resolved_checkpoints();
    const bool unit = std::holds_alternative<Rademacher>(dist.kind());

    GenealogyRun run;
    run.records.reserve(cfg.horizon);
    GenealogyBuilder builder(cfg.horizon);
    std::vector<double> steps;
    steps.reserve(cfg.horizon);
    detail::CompensatedSum walk;
    std::uint64_t repeats = 0;
    std::size_t next_cp = 0;

    auto fresh = [&](std::uint64_t n) {
        // Same draw as the direct loop: one sign bit for Rademacher, else a sample.
        return unit ? static_cast<double>(rng.sign()) : truncate(dist.sample(rng), cfg.truncation, n);
    };

    for (std::uint64_t n = 1; n <= cfg.horizon; ++n) {
        StepRecord rec;
        rec.index = n;
        double step = 0.0;
        if (n >= 2 && rng.bernoulli(cfg.p)) {
            const std::uint64_t u = rng.below(n - 1) + 1;
            rec.epsilon = 1;
            rec.u = u;
            step = cfg.sign == Sign::Positive ? steps[u - 1] : -steps[u - 1];
            builder.add_child(n, u);
            ++repeats;
        } else {
            step = fresh(n);
            rec.x = step;
            builder.add_root(n);
        }
        steps.push_back(step);
        walk.add(step);
        run.records.push_back(rec);
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == n) {
            run.path.walk_values.emplace_back(n, walk.value());
            ++next_cp;
        }
    }
    run.path.final_value = walk.value();
    run.path.step_count = cfg.horizon;
    run.path.repeated_fraction =
        cfg.horizon > 1 ? static_cast<double>(repeats) / static_cast<double>(cfg.horizon - 1) : 0.0;
    run.forest = builder.take();
    return run;
}

// ---------------------------------------------------------------------------
// Replay

PathResult replay(std::span<const StepRecord> records, std::span<const double> fresh_values, Sign sign,
                  std::span<const std::uint64_t> checkpoints) {
    if (!fresh_values.empty() && fresh_values.size() != records.size()) {
        throw std::invalid_argument("replay: fresh_values must have one entry per record");
    }
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i] <= checkpoints[i - 1]) throw std::invalid_argument("replay: checkpoints must increase");
    }
    if (!checkpoints.empty() && (checkpoints.front() == 0 || checkpoints.back() > records.size())) {
        throw std::invalid_argument("replay: checkpoint outside the recorded horizon");
    }

    std::vector<double> steps(records.size());
    detail::CompensatedSum walk;
    PathResult result;
    std::uint64_t repeats = 0;
    std::size_t next_cp = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        const std::uint64_t n = i + 1;
        if (rec.index != n) throw ReplayError(n, "index out of sequence");
        if (rec.epsilon == 0) {
            if (!rec.x || rec.u) throw ReplayError(n, "fresh step must carry x and no u");
            steps[i] = fresh_values.empty() ? *rec.x : fresh_values[i];
        } else if (rec.epsilon == 1) {
            if (n == 1) throw ReplayError(n, "first step must be fresh");
            if (!rec.u || rec.x) throw ReplayError(n, "repeated step must carry u and no x");
            if (*rec.u < 1 || *rec.u >= n) throw ReplayError(n, "u must lie in [1, n-1]");
            steps[i] = sign == Sign::Positive ? steps[*rec.u - 1] : -steps[*rec.u - 1];
            ++repeats;
        } else {
            throw ReplayError(n, "epsilon must be 0 or 1");
        }
        walk.add(steps[i]);
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == n) {
            result.walk_values.emplace_back(n, walk.value());
            ++next_cp;
        }
    }
    result.final_value = walk.value();
    result.step_count = records.size();
    result.repeated_fraction =
        records.size() > 1 ? static_cast<double>(repeats) / static_cast<double>(records.size() - 1) : 0.0;
    return result;
}

PathResult replay(std::span<const StepRecord> records, Sign sign, std::span<const std::uint64_t> checkpoints) {
    return replay(records, std::span<const double>{}, sign, checkpoints);
}

// ---------------------------------------------------------------------------
// Trace files

namespace {

constexpr std::array<char, 8> kTraceMagic{'R', 'W', 'T', 'R', 'A', 'C', 'E', '1'};
constexpr std::uint32_t kTraceVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits = 0;
    if constexpr (std::is_same_v<T, double>) {
        bits = std::bit_cast<std::uint64_t>(value);
    } else {
        bits = static_cast<std::uint64_t>(value);
    }
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw std::runtime_error("trace: unexpected end of file");
    }
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= std::uint64_t{bytes[i]} << (8 * i);
    if constexpr (std::is_same_v<T, double>) {
        return std::bit_cast<double>(bits);
    } else {
        return static_cast<T>(bits);
    }
}

}  // namespace

void write_trace(std::ostream& out, std::span<const StepRecord> records) {
    out.write(kTraceMagic.data(), kTraceMagic.size());
    put_le<std::uint32_t>(out, kTraceVersion);
    put_le<std::uint32_t>(out, 0);
    put_le<std::uint64_t>(out, records.size());
    for (const auto& rec : records) {
        put_le<std::uint8_t>(out, static_cast<std::uint8_t>(rec.epsilon));
        put_le<std::uint64_t>(out, rec.u.value_or(0));
        put_le<double>(out, rec.x.value_or(0.0));
    }
    if (!out) throw std::runtime_error("trace: write failed");
}

std::vector<StepRecord> read_trace(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kTraceMagic) {
        throw std::runtime_error("trace: bad magic");
    }
    const auto version = get_le<std::uint32_t>(in);
    if (version != kTraceVersion) throw std::runtime_error("trace: unsupported version " + std::to_string(version));
    get_le<std::uint32_t>(in);
    const auto count = get_le<std::uint64_t>(in);
    std::vector<StepRecord> records;
    records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
    for (std::uint64_t i = 0; i < count; ++i) {
        StepRecord rec;
        rec.index = i + 1;
        rec.epsilon = get_le<std::uint8_t>(in);
        const auto u = get_le<std::uint64_t>(in);
        const auto x = get_le<double>(in);
        if (rec.epsilon == 1) {
            rec.u = u;
        } else {
            rec.x = x;
        }
        records.push_back(rec);
    }
    return records;
}

}  // namespace rwalk
