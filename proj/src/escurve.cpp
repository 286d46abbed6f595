#include "pelve/escurve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pelve/detail/bisection.hpp"

namespace pelve {

namespace {

double scaled_tol(const EsCurveTable& table, double tol) {
    double biggest = 0.0;
    for (double v : table.values()) biggest = std::max(biggest, std::abs(v));
    return tol * (1.0 + biggest);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Checks that u -> -f(u) - u f'(u) is increasing on a probe grid and that
// t f(t) shrinks towards 0.
void require_es_curve(const EsCurveRisk::Fn& f, const EsCurveRisk::Fn& df, const char* who) {
    constexpr int kProbe = 2000;
    double prev = -f(0.5 / kProbe) - 0.5 / kProbe * df(0.5 / kProbe);
    for (int j = 1; j < kProbe; ++j) {
        const double t = (j + 0.5) / kProbe;
        const double q = -f(t) - t * df(t);
        if (q < prev - 1e-9 * (1.0 + std::abs(prev))) {
            throw DomainError(std::string(who) + ": derived quantile -f(t) - t f'(t) decreases near t = " +
                              fmt(t) + "; not an ES curve");
        }
        prev = q;
    }
    const double far = std::abs(1e-4 * f(1e-4));
    const double near = std::abs(1e-12 * f(1e-12));
    if (!std::isfinite(near) || near > 0.5 * far + 1e-9) {
        throw DomainError(std::string(who) + ": t f(t) does not vanish as t -> 0; not an ES curve");
    }
}

}  // namespace

CurveValidation validate_es_curve(const EsCurveTable& table, double tol) {
    const std::size_t n = table.size();
    if (n < 3) throw DomainError("validate_es_curve: need at least 3 tabulated levels");
    const double eps = scaled_tol(table, tol);
    CurveValidation result;

    // (i) F(0+) = 0 is compatible with the table iff the chord extrapolation of
    // F to zero does not fall below 0 (F concave with F(0) = 0).
    const double t1 = table.level(0), t2 = table.level(1);
    const double slope12 = (table.scaled(1) - table.scaled(0)) / (t2 - t1);
    const double f0 = table.scaled(0) - t1 * slope12;
    if (f0 < -eps) {
        result.accepted = false;
        result.violations.push_back({CurveViolation::Condition::scaled_limit_at_zero, 0.0, t2,
                                     "t*f(t) extrapolates to " + fmt(f0) +
                                         " at t = 0; the scaled curve cannot vanish at 0"});
    }

    // (ii) slopes of -F increase.
    std::vector<double> slope(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j)
        slope[j] = -(table.scaled(j + 1) - table.scaled(j)) / (table.level(j + 1) - table.level(j));

    std::size_t j = 0;
    while (j + 1 < slope.size()) {
        if (slope[j + 1] >= slope[j] - eps) {
            ++j;
            continue;
        }
        const std::size_t first = j;
        while (j + 1 < slope.size() && slope[j + 1] < slope[j] - eps) ++j;
        // The first slope that drops belongs to the segment starting at knot first + 1.
        const double from = table.level(first + 1);
        const double to = table.level(j + 1);
        result.accepted = false;
        result.violations.push_back({CurveViolation::Condition::slope_monotonicity, from, to,
                                     "slope of -t*f(t) decreases on (" + fmt(from) + ", " + fmt(to) +
                                         "]; -f - t f' must be increasing"});
    }
    return result;
}

std::string to_string(ShapeClass::Kind kind) {
    switch (kind) {
        case ShapeClass::Kind::strictly_decreasing: return "strictly_decreasing";
        case ShapeClass::Kind::constant_then_strictly_decreasing: return "constant_then_strictly_decreasing";
        case ShapeClass::Kind::invalid: return "invalid";
    }
    return "invalid";
}

ShapeClass classify_shape(const EsCurveTable& table, double tol) {
    const std::size_t n = table.size();
    if (n == 0) return {ShapeClass::Kind::invalid};
    const double eps = scaled_tol(table, tol);

    std::size_t flat = 0;
    while (flat + 1 < n && std::abs(table.value(flat + 1) - table.value(0)) <= eps) ++flat;
    if (flat + 1 == n) return {ShapeClass::Kind::constant_then_strictly_decreasing, table.level(n - 1)};

    for (std::size_t j = flat; j + 1 < n; ++j) {
        // A constant or increasing stretch after the curve started to fall.
        if (table.value(j + 1) >= table.value(j) - eps) return {ShapeClass::Kind::invalid};
    }
    if (flat == 0) return {ShapeClass::Kind::strictly_decreasing};
    return {ShapeClass::Kind::constant_then_strictly_decreasing, table.level(flat)};
}

RiskObject quantile_from_es_curve(EsCurveRisk::Fn f, EsCurveRisk::Fn df) {
    require_es_curve(f, df, "quantile_from_es_curve");
    return EsCurveRisk(std::move(f), std::move(df));
}

MseCounterexample build_mse_counterexample(const MseCounterexampleParams& p) {
    auto fail = [](const std::string& what) { throw DomainError("mse counterexample: " + what); };
    if (!(p.level > 0.0 && p.level < 1.0)) fail("level must lie in (0,1)");
    if (!(p.c > 0.0)) fail("c must be positive");
    if (!(p.d > 0.0 && p.d < 1.0)) fail("d must lie in (0,1)");
    if (!(p.omega1 > 0.0 && p.omega1 < 1.0)) fail("omega1 must lie in (0,1)");
    if (!(p.w > 0.0 && p.w < 1.0)) fail("w must lie in (0,1)");
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) fail("epsilon must lie in (0,1)");
    if (!(p.level > p.epsilon)) fail("requires level > epsilon");

    const double lam = p.level;
    const double ratio = (1.0 - p.omega1) / p.omega1;
    auto g = [](double t) { return 1.0 - t * t; };
    auto dg = [](double t) { return -2.0 * t; };
    const double var_g = g(lam) + lam * dg(lam);

    // t_g*: g(t_g*) = g(l) + l g'(l); g is decreasing and g(l) > var_g.
    auto below = [&](double t) { return g(t) <= var_g; };
    const auto root = detail::leftmost_true(below, lam, 1.0, 1e-14);
    if (!root) fail("no t_g* in (level, 1]: g(1) exceeds the VaR value of g");
    const double t_star = 0.5 * (root->lo + root->hi);

    if (!(p.u > t_star && p.u <= 1.0)) fail("requires u in (t_g*, 1]");
    if (!(p.s > t_star && p.s < p.u)) fail("requires s in (t_g*, u)");
    const double c = p.c;
    auto rad = [c, ratio, var_g](double t) {
        const double e = (1.0 - t * t) - var_g;
        return c - ratio * e * e;
    };
    if (!(rad(p.u) > 0.0)) fail("requires c - (w2/w1)(g(u) - g(l) - l g'(l))^2 > 0");

    auto ft = [&](double t) { return p.d + std::sqrt(rad(t)); };
    auto dft = [&](double t) { return -ratio * (g(t) - var_g) * dg(t) / std::sqrt(rad(t)); };

    const double s = p.s, u = p.u, d = p.d;
    const double left = lam - p.epsilon;
    const double t_mixed = p.w * left + (1.0 - p.w) * s;
    const double fs = ft(s), dfs = dft(s), fu = ft(u), dfu = dft(u);
    const double a = t_mixed * (dfs * t_mixed + fs - dfs * s - d);

    auto f = [=](double t) {
        if (t < left) return a / left + d;
        if (t < t_mixed) return a / t + d;
        if (t < s) return dfs * t + fs - dfs * s;
        if (t < u) return d + std::sqrt(rad(t));
        return dfu * t + fu - dfu * u;
    };
    auto df = [=](double t) {
        if (t < left) return 0.0;
        if (t < t_mixed) return -a / (t * t);
        if (t < s) return dfs;
        if (t < u) return -ratio * ((1.0 - t * t) - var_g) * (-2.0 * t) / std::sqrt(rad(t));
        return dfu;
    };

    require_es_curve(f, df, "mse counterexample f");

    MseCounterexample out{EsCurveRisk(f, df), EsCurveRisk(g, dg), t_star, t_mixed, a,
                          f(lam) + lam * df(lam), var_g};
    return out;
}

}  // namespace pelve
