#include "pelve/multipelve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pelve/detail/bisection.hpp"
#include "pelve/measures.hpp"

namespace pelve {

namespace {

constexpr double kWeightSumTol = 1e-12;
constexpr double kInvPhi = 0.61803398874989484820;

void require_nonempty(std::span<const RiskObject> risks) {
    if (risks.empty()) throw DomainError("multi-PELVE needs at least one risk");
}

void require_matching(std::span<const RiskObject> risks, const Weights& weights) {
    require_nonempty(risks);
    if (weights.size() != risks.size())
        throw DomainError("weights and risks differ in length (" + std::to_string(weights.size()) +
                          " vs " + std::to_string(risks.size()) + ")");
}

double es_at(const RiskObject& risk, double c, double level) {
    return es(risk, std::min(c * level, 1.0));
}

std::vector<double> vars_at(std::span<const RiskObject> risks, double level) {
    std::vector<double> v;
    v.reserve(risks.size());
    for (const auto& r : risks) v.push_back(var(r, level));
    return v;
}

double objective(std::span<const RiskObject> risks, const Weights& weights,
                 std::span<const double> vars, double level, double c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < risks.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const double d = es_at(risks[i], c, level) - vars[i];
        sum += weights[i] * d * d;
    }
    return std::sqrt(sum);
}

}  // namespace

// ------------------------------------------------------------------ weights

Weights::Weights(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("weights must be non-empty");
    double sum = 0.0;
    for (double w : values_) {
        if (!(w >= 0.0 && w <= 1.0)) throw DomainError("each weight must lie in [0,1]");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTol) throw DomainError("weights must sum to 1");
}

Weights Weights::equal(std::size_t n) {
    if (n == 0) throw DomainError("weights must be non-empty");
    return Weights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Weights Weights::proportional(std::span<const double> scores) {
    std::vector<double> w(scores.begin(), scores.end());
    double total = 0.0;
    for (double s : w) {
        if (!(s > 0.0)) throw DomainError("weight scores must be positive");
        total += s;
    }
    for (double& s : w) s /= total;
    // Absorb rounding so the simplex check holds exactly.
    const double drift = std::accumulate(w.begin(), w.end(), 0.0) - 1.0;
    w[std::max_element(w.begin(), w.end()) - w.begin()] -= drift;
    return Weights(std::move(w));
}

Weights Weights::inverse_proportional(std::span<const double> scores) {
    std::vector<double> inv;
    inv.reserve(scores.size());
    for (double s : scores) {
        if (!(s > 0.0)) throw DomainError("weight scores must be positive");
        inv.push_back(1.0 / s);
    }
    return proportional(inv);
}

double apply(AggregationFn g, double x) {
    return g == AggregationFn::identity ? x : std::max(0.0, x);
}

AggregationFn parse_aggregation(const std::string& name) {
    if (name == "identity") return AggregationFn::identity;
    if (name == "pospart" || name == "positive_part") return AggregationFn::positive_part;
    throw DomainError("unknown aggregation function '" + name + "'");
}

std::string to_string(AggregationFn g) {
    return g == AggregationFn::identity ? "identity" : "positive_part";
}

// ------------------------------------------------------------------ methods

PelveValue a_pelve(std::span<const RiskObject> risks, double level, const Weights& weights, double tol) {
    require_matching(risks, weights);
    double sum = 0.0;
    for (std::size_t i = 0; i < risks.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const auto p = pelve(risks[i], level, tol);
        if (!p.is_finite()) return PelveValue::infinite();
        sum += weights[i] * p.value();
    }
    return PelveValue::finite(sum);
}

PelveValue wc_pelve(std::span<const RiskObject> risks, double level, double tol) {
    require_nonempty(risks);
    double worst = 1.0;
    for (const auto& r : risks) {
        const auto p = pelve(r, level, tol);
        if (!p.is_finite()) return PelveValue::infinite();
        worst = std::max(worst, p.value());
    }
    return PelveValue::finite(worst);
}

PelveValue wc_pelve_by_definition(std::span<const RiskObject> risks, double level, double tol) {
    require_nonempty(risks);
    check_open_level(level);
    const auto vars = vars_at(risks, level);
    std::vector<double> slack(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        slack[i] = tol * (1.0 + std::abs(vars[i]));
        if (-mean(risks[i]) - vars[i] > slack[i]) return PelveValue::infinite();
    }
    auto all_hold = [&](double c) {
        for (std::size_t i = 0; i < risks.size(); ++i)
            if (es_at(risks[i], c, level) - vars[i] > slack[i]) return false;
        return true;
    };
    const double c_max = 1.0 / level;
    const auto bracket = detail::leftmost_true(all_hold, 1.0, c_max, tol);
    return PelveValue::finite(bracket ? bracket->lo : c_max);
}

double mse_objective(std::span<const RiskObject> risks, double level, const Weights& weights, double c) {
    require_matching(risks, weights);
    check_open_level(level);
    const auto vars = vars_at(risks, level);
    return objective(risks, weights, vars, level, c);
}

MsePelveResult mse_pelve(std::span<const RiskObject> risks, double level, const Weights& weights,
                         const MseOptions& options) {
    require_matching(risks, weights);
    check_open_level(level);
    if (options.grid_size < 64) throw DomainError("mse_pelve: grid_size must be at least 64");
    if (!(options.plateau_tol >= 0.0)) throw DomainError("mse_pelve: plateau_tol must be non-negative");

    const auto vars = vars_at(risks, level);
    auto obj = [&](double c) { return objective(risks, weights, vars, level, c); };

    const double c_max = 1.0 / level;
    const std::size_t n = options.grid_size;
    const double step = (c_max - 1.0) / static_cast<double>(n - 1);
    auto grid_point = [&](std::size_t j) { return j + 1 == n ? c_max : 1.0 + step * static_cast<double>(j); };

    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j) values[j] = obj(grid_point(j));
    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());

    // Golden-section refinement between the neighbours of the best grid point.
    double a = grid_point(best == 0 ? 0 : best - 1);
    double b = grid_point(std::min(best + 1, n - 1));
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = obj(x1), f2 = obj(x2);
    while (b - a > 1e-13 * std::max(1.0, std::abs(a))) {
        if (f1 <= f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - kInvPhi * (b - a), f1 = obj(x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + kInvPhi * (b - a), f2 = obj(x2);
        }
    }
    double c_min = grid_point(best);
    double f_min = values[best];
    for (auto [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
        if (f < f_min) c_min = x, f_min = f;
    }

    const double threshold = f_min + options.plateau_tol * (1.0 + f_min);
    auto inside = [&](double c) { return obj(c) <= threshold; };
    const double edge_tol = 1e-13 * c_max;

    // Left edge: walk grid points below c_min while they stay inside.
    double left = 1.0;
    {
        double inner = c_min;
        std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor((c_min - 1.0) / step));
        if (j >= 0 && grid_point(static_cast<std::size_t>(j)) >= c_min) --j;
        for (; j >= 0; --j) {
            const double cj = grid_point(static_cast<std::size_t>(j));
            if (values[static_cast<std::size_t>(j)] > threshold) {
                // Leftmost inside point in [cj, inner]; inside() is false at cj.
                const auto br = detail::leftmost_true(inside, cj, inner, edge_tol);
                left = br ? br->hi : inner;
                break;
            }
            inner = cj;
        }
        if (j < 0) left = 1.0;
    }

    // Right edge, mirrored.
    double right = c_max;
    {
        double inner = c_min;
        std::size_t j = static_cast<std::size_t>(std::ceil((c_min - 1.0) / step));
        if (j < n && grid_point(j) <= c_min) ++j;
        for (; j < n; ++j) {
            const double cj = grid_point(j);
            if (values[j] > threshold) {
                // Rightmost inside point in [inner, cj], via the mirrored predicate.
                auto outside = [&](double c) { return !inside(c); };
                const auto br = detail::leftmost_true(outside, inner, cj, edge_tol);
                right = br ? br->lo : inner;
                break;
            }
            inner = cj;
        }
        if (j >= n) right = c_max;
    }

    return {left, left, right, f_min};
}

PelveValue sys_pelve(std::span<const RiskObject> risks, double level, AggregationFn g, double tol) {
    require_nonempty(risks);
    check_open_level(level);
    double rhs = 0.0;
    double at_mean = 0.0;
    for (const auto& r : risks) {
        rhs += apply(g, var(r, level));
        at_mean += apply(g, -mean(r));
    }
    const double slack = tol * (1.0 + std::abs(rhs));
    // Finite iff sum g(ES_1) = sum g(E[-X_i]) stays below the VaR aggregate.
    if (at_mean - rhs > slack) return PelveValue::infinite();

    auto holds = [&](double c) {
        double lhs = 0.0;
        for (const auto& r : risks) lhs += apply(g, es_at(r, c, level));
        return lhs - rhs <= slack;
    };
    const double c_max = 1.0 / level;
    const auto bracket = detail::leftmost_true(holds, 1.0, c_max, tol);
    return PelveValue::finite(bracket ? bracket->lo : c_max);
}

}  // namespace pelve
