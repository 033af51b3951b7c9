// Soft performance gate: one path of 10^7 steps within one second.

#include <chrono>
#include <cstdio>

#include "rwalk/walk.hpp"

int main() {
    using clock = std::chrono::steady_clock;
    rwalk::WalkConfig cfg;
    cfg.p = 0.25;
    cfg.horizon = 10'000'000;
    int failures = 0;
    for (const char* law : {"rademacher", "gaussian:0,1"}) {
        const auto dist = rwalk::StepDistribution::parse(law);
        auto rng = rwalk::rng_stream(1, 1);
        rwalk::simulate(dist, cfg, rng);  // warm the history buffer
        const auto start = clock::now();
        const auto result = rwalk::simulate(dist, cfg, rng);
        const double seconds = std::chrono::duration<double>(clock::now() - start).count();
        const bool ok = seconds < 1.0;
        failures += ok ? 0 : 1;
        std::printf("%s %-14s 1e7 steps in %.3f s (S = %.6g)\n", ok ? "PASS" : "FAIL", law, seconds,
                    result.final_value);
    }
    return failures == 0 ? 0 : 1;
}
