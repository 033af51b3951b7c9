#pragma once

// The simulation hot loop, instantiated once per step-law kind and observer.

#include <cmath>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "rwalk/distribution.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/walk.hpp"

namespace rwalk::detail {

struct NoObserver {
    void operator()(std::uint64_t, double, double) const noexcept {}
};

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <class Kind>
inline constexpr bool kUnitSteps = std::is_same_v<Kind, Rademacher>;

template <class Storage>
std::vector<Storage>& history_buffer(std::uint64_t size) {
    thread_local std::vector<Storage> buffer;
    if (buffer.size() < size) buffer.resize(size);
    return buffer;
}

struct LoopOutput {
    double final_value = 0.0;
    std::uint64_t repeats = 0;
};

/// Runs one path of length cfg.horizon. checkpoint_values[i] receives S(checkpoints[i]).
/// `observe(n, step_n, S(n-1))` is called for every step when not NoObserver.
template <class Kind, class Observer>
LoopOutput run_walk(const Kind& kind, double p, Sign sign, Truncation rule, std::uint64_t horizon,
                    std::span<const std::uint64_t> checkpoints, double* checkpoint_values, RandomStream& rng,
                    Observer&& observe) {
    constexpr bool kUnit = kUnitSteps<Kind>;
    constexpr bool kObserved = !std::is_same_v<std::decay_t<Observer>, NoObserver>;
    using Storage = std::conditional_t<kUnit, std::int8_t, double>;
    using Sum = std::conditional_t<kUnit, std::int64_t, CompensatedSum>;

    auto& history = history_buffer<Storage>(horizon);
    Sum walk{};
    auto walk_value = [&walk]() -> double {
        if constexpr (kUnit) {
            return static_cast<double>(walk);
        } else {
            return walk.value();
        }
    };
    auto accumulate = [&walk](Storage step) {
        if constexpr (kUnit) {
            walk += step;
        } else {
            walk.add(step);
        }
    };

    std::size_t next_cp = 0;
    const std::size_t cp_count = checkpoints.size();
    std::uint64_t repeats = 0;

    // Step 1 is always fresh.
    {
        Storage step;
        if constexpr (kUnit) {
            step = static_cast<Storage>(rng.sign());
        } else {
            step = truncate(draw(kind, rng), rule, 1);
        }
        if constexpr (kObserved) observe(std::uint64_t{1}, static_cast<double>(step), 0.0);
        history[0] = step;
        accumulate(step);
        if (next_cp < cp_count && checkpoints[next_cp] == 1) checkpoint_values[next_cp++] = walk_value();
    }

    const bool negative = sign == Sign::Negative;
    for (std::uint64_t n = 2; n <= horizon; ++n) {
        Storage step;
        if (rng.bernoulli(p)) {
            step = history[rng.below(n - 1)];
            if (negative) step = -step;
            ++repeats;
        } else if constexpr (kUnit) {
            step = static_cast<Storage>(rng.sign());
        } else {
            step = truncate(draw(kind, rng), rule, n);
        }
        if constexpr (kObserved) observe(n, static_cast<double>(step), walk_value());
        history[n - 1] = step;
        accumulate(step);
        if (next_cp < cp_count && checkpoints[next_cp] == n) checkpoint_values[next_cp++] = walk_value();
    }
    return {walk_value(), repeats};
}

/// Visits the step-law alternative once, then runs the typed loop.
template <class Observer>
LoopOutput run_walk(const StepDistribution& dist, const WalkConfig& cfg, std::span<const std::uint64_t> checkpoints,
                    double* checkpoint_values, RandomStream& rng, Observer&& observe) {
    return std::visit(
        [&](const auto& kind) {
            return run_walk(kind, cfg.p, cfg.sign, cfg.truncation, cfg.horizon, checkpoints, checkpoint_values, rng,
                            observe);
        },
        dist.kind());
}

}  // namespace rwalk::detail
