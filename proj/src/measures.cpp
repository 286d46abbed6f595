#include "pelve/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pelve/csv.hpp"

namespace pelve {

namespace {

constexpr double kQuadratureTol = 1e-12;

void check_es_level(double level) {
    if (!(level > 0.0 && level <= 1.0)) throw DomainError("ES level must lie in (0,1]");
}

double empirical_es(const EmpiricalRisk& risk, double level) {
    const auto m = risk.size();
    const double md = static_cast<double>(m);
    // Number of atoms lying entirely below the level.
    auto full = static_cast<std::size_t>(std::floor(md * level));
    full = std::min(full, m);
    double integral = risk.lower_sum(full) / md;
    if (full < m) {
        const double rest = level - static_cast<double>(full) / md;
        if (rest > 0.0) integral += rest * risk.sorted()[full];
    }
    return -integral / level;
}

// q_X^+(1 - v); exact complement for parametric families.
double quantile_complement(const RiskObject& risk, double v) {
    if (const auto* p = std::get_if<ParametricRisk>(&risk)) return p->upper_quantile_complement(v);
    // 1 - v rounds to 1 for tiny v; stay on the largest double below 1.
    return upper_quantile(risk, std::min(1.0 - v, std::nextafter(1.0, 0.0)));
}

// One engine per thread: the abscissa tables grow lazily.
boost::math::quadrature::tanh_sinh<double>& integrator() {
    thread_local boost::math::quadrature::tanh_sinh<double> engine(15);
    return engine;
}

// Smallest positive argument handed to a quantile function.
constexpr double kTiny = 1e-300;

double parametric_es(const ParametricRisk& risk, double level) {
    const auto [p0, p1, p2] = risk.params();
    switch (risk.family()) {
        case Family::constant:
            return -p0;
        case Family::normal: {
            if (level == 1.0) return -p0;
            static const boost::math::normal_distribution<double> z;
            const double q = boost::math::quantile(z, level);
            return -p0 + p1 * boost::math::pdf(z, q) / level;
        }
        case Family::pareto_loss:
            return p1 * p0 / (p0 - 1.0) * std::pow(level, -1.0 / p0);
        case Family::gpd_loss: {
            const double ll = std::log(level);
            if (p0 == 0.0) return p1 + p2 * (1.0 - ll);
            // nu + (beta/xi) * (l^-xi / (1-xi) - 1)
            return p1 + p2 / p0 * (std::exp(-p0 * ll) / (1.0 - p0) - 1.0);
        }
        default:
            return es_by_quadrature(risk, level);
    }
}

}  // namespace

double var(const RiskObject& risk, double level) {
    check_open_level(level);
    return -upper_quantile(risk, level);
}

double es_by_quadrature(const RiskObject& risk, double level) {
    check_es_level(level);
    auto& engine = integrator();
    // Lower part (0, min(l, 1/2)]: the left endpoint may be singular, tanh-sinh
    // clusters nodes there double-exponentially.
    const double split = std::min(level, 0.5);
    auto lower = [&risk](double u) { return upper_quantile(risk, std::max(u, kTiny)); };
    double integral = engine.integrate(lower, 0.0, split, kQuadratureTol);
    if (level > 0.5) {
        // Upper part written in v = 1 - u so a singularity at u = 1 is resolved
        // without cancellation.
        auto upper = [&risk](double v) { return quantile_complement(risk, std::max(v, kTiny)); };
        integral += engine.integrate(upper, 1.0 - level, 0.5, kQuadratureTol);
    }
    return -integral / level;
}

double es(const RiskObject& risk, double level) {
    check_es_level(level);
    struct Visitor {
        double level;
        double operator()(const EmpiricalRisk& r) const { return empirical_es(r, level); }
        double operator()(const ParametricRisk& r) const { return parametric_es(r, level); }
        double operator()(const EsCurveRisk& r) const { return r.es(level); }
    };
    return std::visit(Visitor{level}, risk);
}

ReserveStat reserve_stat(const RiskObject& risk, double level) {
    return {var(risk, level), es(risk, level), level};
}

EsCurveTable es_curve(const RiskObject& risk, std::span<const double> levels) {
    std::vector<double> grid(levels.begin(), levels.end());
    std::vector<double> values;
    values.reserve(grid.size());
    for (double t : grid) values.push_back(es(risk, t));
    return EsCurveTable(std::move(grid), std::move(values));
}

void write_es_curve_csv(std::ostream& out, const EsCurveTable& table) {
    csv::Table t;
    t.header = {"level", "es"};
    t.columns = {{table.levels().begin(), table.levels().end()},
                 {table.values().begin(), table.values().end()}};
    csv::write(out, t);
}

EsCurveTable read_es_curve_csv(std::istream& in) {
    const auto t = csv::read(in);
    return EsCurveTable(t.column("level"), t.column("es"));
}

}  // namespace pelve
