#include "rwalk/distribution.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rwalk/format.hpp"

namespace rwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double phi(double x) {
    if (std::isinf(x)) return 0.0;
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// P(lo <= Y <= hi) for standard normal Y, avoiding cancellation in either tail.
double normal_mass(double lo, double hi) {
    constexpr double r = std::numbers::sqrt2;
    if (lo >= 0.0) return 0.5 * (std::erfc(lo / r) - std::erfc(hi / r));
    if (hi <= 0.0) return 0.5 * (std::erfc(-hi / r) - std::erfc(-lo / r));
    return 1.0 - 0.5 * std::erfc(-lo / r) - 0.5 * std::erfc(hi / r);
}

// x^k phi(x), zero at +-infinity.
double tail_term(double x, int k) {
    if (std::isinf(x)) return 0.0;
    return ipow(x, k) * phi(x);
}

// E[X^k 1{|X| <= level}] for X ~ N(mean, sd^2).
double gaussian_truncated_moment(const Gaussian& g, int k, double level) {
    const double lo = std::isinf(level) ? -kInf : (-level - g.mean) / g.sd;
    const double hi = std::isinf(level) ? kInf : (level - g.mean) / g.sd;
    // I[i] = E[Y^i 1{lo <= Y <= hi}], Y standard normal.
    double partial[5];
    partial[0] = normal_mass(lo, hi);
    partial[1] = tail_term(lo, 0) - tail_term(hi, 0);
    for (int i = 2; i <= k; ++i) {
        partial[i] = (i - 1) * partial[i - 2] + tail_term(lo, i - 1) - tail_term(hi, i - 1);
    }
    double total = 0.0;
    for (int i = 0; i <= k; ++i) {
        total += binomial(k, i) * ipow(g.mean, k - i) * ipow(g.sd, i) * partial[i];
    }
    return total;
}

double pareto_truncated_moment(const Pareto& d, int k, double level) {
    const double a = d.alpha;
    const double s = d.scale;
    if (std::isinf(level)) {
        if (k == 0) return 1.0;
        if (k >= a) return kInf;
        return a * std::pow(s, k) / (a - k);
    }
    if (level < s) return 0.0;
    if (k == 0) return 1.0 - std::pow(s / level, a);
    if (static_cast<double>(k) == a) return a * std::pow(s, a) * std::log(level / s);
    return a * std::pow(s, a) * (std::pow(level, k - a) - std::pow(s, k - a)) / (k - a);
}

}  // namespace

double ExtendedReal::value() const {
    if (infinite_) throw std::domain_error("second moment required");
    return value_;
}

std::string ExtendedReal::to_string() const { return infinite_ ? "inf" : format_double(value_); }

StepDistribution::StepDistribution(DistributionKind kind) : kind_(kind) {
    std::visit(Overloaded{
                   [&](const Rademacher&) {
                       m1_ = 0.0;
                       m2_ = ExtendedReal::finite(1.0);
                   },
                   [&](const Gaussian& g) {
                       require(std::isfinite(g.mean), "gaussian: mean must be finite");
                       require(std::isfinite(g.sd) && g.sd > 0.0, "gaussian: sd must be > 0");
                       m1_ = g.mean;
                       m2_ = ExtendedReal::finite(g.mean * g.mean + g.sd * g.sd);
                   },
                   [&](const TwoPoint& t) {
                       require(std::isfinite(t.a) && std::isfinite(t.b), "twopoint: values must be finite");
                       require(t.prob_a >= 0.0 && t.prob_a <= 1.0, "twopoint: prob_a must lie in [0,1]");
                       m1_ = t.prob_a * t.a + (1.0 - t.prob_a) * t.b;
                       m2_ = ExtendedReal::finite(t.prob_a * t.a * t.a + (1.0 - t.prob_a) * t.b * t.b);
                   },
                   [&](const Constant& c) {
                       require(std::isfinite(c.c), "constant: value must be finite");
                       m1_ = c.c;
                       m2_ = ExtendedReal::finite(c.c * c.c);
                   },
                   [&](const Pareto& d) {
                       require(d.alpha > 1.0 && std::isfinite(d.alpha),
                               "pareto: alpha must be > 1 (E|X| < inf is required)");
                       require(d.scale > 0.0 && std::isfinite(d.scale), "pareto: scale must be > 0");
                       m1_ = d.alpha * d.scale / (d.alpha - 1.0);
                       m2_ = d.alpha > 2.0 ? ExtendedReal::finite(d.alpha * d.scale * d.scale / (d.alpha - 2.0))
                                           : ExtendedReal::infinity();
                   },
               },
               kind_);
    if (m2_.is_finite() && m2_.value() - m1_ * m1_ < -1e-12 * m2_.value()) {
        throw std::logic_error("step distribution: inconsistent moments");
    }
}

double StepDistribution::sigma2() const {
    const double v = m2_.value() - m1_ * m1_;
    return v < 0.0 ? 0.0 : v;
}

bool StepDistribution::has_finite_support() const noexcept {
    return std::holds_alternative<Rademacher>(kind_) || std::holds_alternative<TwoPoint>(kind_) ||
           std::holds_alternative<Constant>(kind_);
}

std::vector<Atom> StepDistribution::support() const {
    std::vector<Atom> atoms;
    auto add = [&](double v, double prob) {
        if (prob <= 0.0) return;
        for (auto& atom : atoms) {
            if (atom.value == v) {
                atom.probability += prob;
                return;
            }
        }
        atoms.push_back({v, prob});
    };
    std::visit(Overloaded{
                   [&](const Rademacher&) {
                       add(1.0, 0.5);
                       add(-1.0, 0.5);
                   },
                   [&](const TwoPoint& t) {
                       add(t.a, t.prob_a);
                       add(t.b, 1.0 - t.prob_a);
                   },
                   [&](const Constant& c) { add(c.c, 1.0); },
                   [&](const auto&) {
                       throw std::invalid_argument("support: " + to_string() + " is not finitely supported");
                   },
               },
               kind_);
    return atoms;
}

double StepDistribution::truncated_moment(int k, double level) const {
    if (k < 0 || k > 4) throw std::invalid_argument("truncated_moment: order must be in 0..4");
    if (const auto* g = std::get_if<Gaussian>(&kind_)) return gaussian_truncated_moment(*g, k, level);
    if (const auto* d = std::get_if<Pareto>(&kind_)) return pareto_truncated_moment(*d, k, level);
    double total = 0.0;
    for (const auto& atom : support()) {
        if (std::fabs(atom.value) <= level) total += atom.probability * ipow(atom.value, k);
    }
    return total;
}

double StepDistribution::truncated_moment(int k, Truncation rule, std::uint64_t n) const {
    if (!has_finite_support()) return truncated_moment(k, truncation_level(rule, n));
    if (k < 0 || k > 4) throw std::invalid_argument("truncated_moment: order must be in 0..4");
    double total = 0.0;
    for (const auto& atom : support()) {
        if (within_truncation(atom.value, rule, n)) total += atom.probability * ipow(atom.value, k);
    }
    return total;
}

std::string StepDistribution::to_string() const {
    return std::visit(
        Overloaded{
            [](const Rademacher&) { return std::string("rademacher"); },
            [](const Gaussian& g) { return "gaussian:" + format_double(g.mean) + "," + format_double(g.sd); },
            [](const TwoPoint& t) {
                return "twopoint:" + format_double(t.a) + "," + format_double(t.b) + "," + format_double(t.prob_a);
            },
            [](const Constant& c) { return "constant:" + format_double(c.c); },
            [](const Pareto& d) { return "pareto:" + format_double(d.alpha) + "," + format_double(d.scale); },
        },
        kind_);
}

StepDistribution StepDistribution::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (true) {
            const auto comma = rest.find(',');
            args.push_back(parse_double(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }
    auto expect = [&](std::size_t count, const char* usage) {
        if (args.size() != count) throw std::invalid_argument(std::string("distribution: expected ") + usage);
    };
    if (name == "rademacher") {
        expect(0, "'rademacher'");
        return rademacher();
    }
    if (name == "gaussian" || name == "normal") {
        expect(2, "'gaussian:MEAN,SD'");
        return gaussian(args[0], args[1]);
    }
    if (name == "twopoint") {
        expect(3, "'twopoint:A,B,PROB_A'");
        return two_point(args[0], args[1], args[2]);
    }
    if (name == "constant") {
        expect(1, "'constant:C'");
        return constant(args[0]);
    }
    if (name == "pareto") {
        expect(2, "'pareto:ALPHA,SCALE'");
        return pareto(args[0], args[1]);
    }
    throw std::invalid_argument("unknown distribution '" + std::string(text) + "'");
}

DerivedConstants derived_constants(const StepDistribution& dist, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("derived_constants: p must lie in [0,1]");
    const double m2 = dist.m2().value();
    const double m1 = dist.m1();
    const double mu_check = (1.0 - p) * m1 / (1.0 + p);
    return {mu_check, m2 - mu_check * mu_check, dist.sigma2()};
}

}  // namespace rwalk
