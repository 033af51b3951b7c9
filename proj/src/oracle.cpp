#include "rwalk/oracle.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rwalk {

long double ExactLaw::total() const noexcept {
    long double t = 0.0L;
    for (const auto& o : outcomes_) t += o.probability;
    return t;
}

long double ExactLaw::moment(int k) const noexcept {
    long double m = 0.0L;
    for (const auto& o : outcomes_) {
        long double v = 1.0L;
        for (int i = 0; i < k; ++i) v *= o.value;
        m += o.probability * v;
    }
    return m;
}

long double ExactLaw::variance() const noexcept {
    const long double m = mean();
    long double v = 0.0L;
    for (const auto& o : outcomes_) v += o.probability * (o.value - m) * (o.value - m);
    return v;
}

std::string Functional::to_string() const {
    switch (kind) {
        case FunctionalKind::WalkValue: return "S";
        case FunctionalKind::LastInnovation: return "Z";
        case FunctionalKind::Occupancy: return "N:" + std::to_string(j);
        case FunctionalKind::SignedOccupancy: return "Delta:" + std::to_string(j);
    }
    return "?";
}

Functional Functional::parse(std::string_view text) {
    if (text == "S") return walk_value();
    if (text == "Z") return last_innovation();
    const auto colon = text.find(':');
    if (colon != std::string_view::npos) {
        const auto head = text.substr(0, colon);
        const auto tail = text.substr(colon + 1);
        std::uint64_t j = 0;
        const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), j);
        if (ec == std::errc{} && ptr == tail.data() + tail.size() && j >= 1) {
            if (head == "N") return occupancy(j);
            if (head == "Delta") return signed_occupancy(j);
        }
    }
    throw std::invalid_argument("unknown functional '" + std::string(text) + "' (expected S, Z, N:<j> or Delta:<j>)");
}

namespace {

struct Enumerator {
    double p;
    bool negative;
    Truncation rule;
    std::uint64_t n;
    Functional f;
    std::vector<Atom> atoms;  // empty when X is not enumerated

    // State of the partial history, 1-based.
    std::array<double, kOracleMaxStepsGenealogy + 1> step{};
    std::array<std::uint64_t, kOracleMaxStepsGenealogy + 1> root{};
    std::array<int, kOracleMaxStepsGenealogy + 1> depth_parity{};
    std::map<double, long double> law;

    void leaf(long double prob) {
        double v = 0.0;
        switch (f.kind) {
            case FunctionalKind::WalkValue:
                for (std::uint64_t k = 1; k <= n; ++k) v += step[k];
                break;
            case FunctionalKind::LastInnovation: v = step[n]; break;
            case FunctionalKind::Occupancy:
            case FunctionalKind::SignedOccupancy:
                for (std::uint64_t k = 1; k <= n; ++k) {
                    if (root[k] != f.j) continue;
                    const bool even = depth_parity[k] == 0;
                    v += (f.kind == FunctionalKind::Occupancy || even) ? 1.0 : -1.0;
                }
                break;
        }
        law[v] += prob;
    }

    void fresh(std::uint64_t k, long double prob) {
        root[k] = k;
        depth_parity[k] = 0;
        if (atoms.empty()) {
            step[k] = 0.0;
            visit(k + 1, prob);
            return;
        }
        for (const auto& a : atoms) {
            step[k] = within_truncation(a.value, rule, k) ? a.value : 0.0;
            visit(k + 1, prob * a.probability);
        }
    }

    void visit(std::uint64_t k, long double prob) {
        if (prob == 0.0L) return;
        if (k > n) {
            leaf(prob);
            return;
        }
        if (k == 1) {
            fresh(1, prob);
            return;
        }
        fresh(k, prob * (1.0L - static_cast<long double>(p)));
        const long double pick = static_cast<long double>(p) / static_cast<long double>(k - 1);
        for (std::uint64_t u = 1; u < k; ++u) {
            step[k] = negative ? -step[u] : step[u];
            root[k] = root[u];
            depth_parity[k] = 1 - depth_parity[u];
            visit(k + 1, prob * pick);
        }
    }
};

}  // namespace

ExactLaw enumerate_exact(const StepDistribution& dist, double p, Sign sign, Truncation rule, std::uint64_t n,
                         const Functional& f) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("enumerate_exact: p must lie in [0,1]");
    if (n == 0) throw std::invalid_argument("enumerate_exact: n must be >= 1");
    const auto limit = f.genealogy_only() ? kOracleMaxStepsGenealogy : kOracleMaxSteps;
    if (n > limit) {
        throw std::invalid_argument("enumerate_exact: n = " + std::to_string(n) + " exceeds the bound " +
                                    std::to_string(limit) + " for functional " + f.to_string());
    }
    if (f.genealogy_only() && (f.j == 0 || f.j > n)) {
        throw std::invalid_argument("enumerate_exact: need 1 <= j <= n");
    }
    Enumerator e{p, sign == Sign::Negative, rule, n, f, {}, {}, {}, {}, {}};
    if (!f.genealogy_only()) {
        if (!dist.has_finite_support()) {
            throw std::invalid_argument("enumerate_exact: " + dist.to_string() + " does not have finite support");
        }
        e.atoms = dist.support();
    }
    e.visit(1, 1.0L);
    std::vector<ExactOutcome> outcomes;
    outcomes.reserve(e.law.size());
    for (const auto& [v, prob] : e.law) outcomes.push_back({v, prob});
    return ExactLaw(std::move(outcomes));
}

}  // namespace rwalk
