#include "pelve/pelve.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "pelve/csv.hpp"
#include "pelve/detail/bisection.hpp"
#include "pelve/measures.hpp"

namespace pelve {

PelveValue pelve(const RiskObject& risk, double level, double tol) {
    check_open_level(level);
    if (!(tol > 0.0)) throw DomainError("pelve: tolerance must be positive");

    const double target = var(risk, level);
    const double slack = tol * (1.0 + std::abs(target));
    // Finite iff E[-X] <= VaR_l(X).
    if (-mean(risk) - target > slack) return PelveValue::infinite();

    const double c_max = 1.0 / level;
    auto holds = [&](double c) { return es(risk, std::min(c * level, 1.0)) - target <= slack; };
    const auto bracket = detail::leftmost_true(holds, 1.0, c_max, tol);
    // Equality case of the existence condition: solvable at the right endpoint.
    if (!bracket) return PelveValue::finite(c_max);
    return PelveValue::finite(bracket->lo);
}

PelveCurve pelve_curve(const RiskObject& risk, std::span<const double> grid, double tol) {
    PelveCurve curve;
    curve.tol = tol;
    curve.levels.assign(grid.begin(), grid.end());
    for (std::size_t j = 1; j < curve.levels.size(); ++j) {
        if (!(curve.levels[j] > curve.levels[j - 1]))
            throw DomainError("pelve_curve: grid must be strictly increasing");
    }
    curve.values.reserve(grid.size());
    for (double level : curve.levels) curve.values.push_back(pelve(risk, level, tol));
    return curve;
}

std::vector<CurveJump> continuity_diagnostic(const PelveCurve& curve, double jump_threshold) {
    std::vector<CurveJump> jumps;
    for (std::size_t j = 0; j + 1 < curve.values.size(); ++j) {
        const double a = curve.values[j].value();
        const double b = curve.values[j + 1].value();
        const bool both_infinite = std::isinf(a) && std::isinf(b);
        if (both_infinite) continue;
        if (std::isinf(a) || std::isinf(b) || std::abs(b - a) > jump_threshold)
            jumps.push_back({j, curve.levels[j], curve.levels[j + 1], a, b});
    }
    return jumps;
}

std::vector<double> log_grid(double a, double b, std::size_t n) {
    if (!(a > 0.0 && b < 1.0 && a <= b)) throw DomainError("log_grid: need 0 < a <= b < 1");
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> grid(n);
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t j = 0; j < n; ++j)
        grid[j] = std::exp(la + (lb - la) * static_cast<double>(j) / static_cast<double>(n - 1));
    grid.front() = a;
    grid.back() = b;
    return grid;
}

void write_pelve_curve_csv(std::ostream& out, const PelveCurve& curve) {
    csv::Table t;
    t.header = {"level", "pelve"};
    t.columns.resize(2);
    t.columns[0] = curve.levels;
    for (const auto& v : curve.values) t.columns[1].push_back(v.value());
    csv::write(out, t);
}

PelveCurve read_pelve_curve_csv(std::istream& in) {
    const auto t = csv::read(in);
    PelveCurve curve;
    curve.levels = t.column("level");
    for (double v : t.column("pelve"))
        curve.values.push_back(std::isinf(v) ? PelveValue::infinite() : PelveValue::finite(v));
    return curve;
}

}  // namespace pelve
