#include "pelve/riskobj.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace pelve {

namespace {

namespace bm = boost::math;

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

double standard_normal_quantile(double u) {
    static const bm::normal_distribution<double> z(0.0, 1.0);
    return bm::quantile(z, u);
}

}  // namespace

void check_open_level(double u, const char* what) {
    if (!(u > 0.0 && u < 1.0)) {
        std::ostringstream os;
        os << what << " must lie in (0,1), got " << u;
        throw DomainError(os.str());
    }
}

EsCurveTable::EsCurveTable(std::vector<double> levels, std::vector<double> values,
                           std::optional<std::vector<double>> derivatives)
    : levels_(std::move(levels)), values_(std::move(values)), derivatives_(std::move(derivatives)) {
    require(!levels_.empty(), "ES curve table is empty");
    require(levels_.size() == values_.size(), "ES curve table: levels/values size mismatch");
    if (derivatives_) {
        require(derivatives_->size() == levels_.size(),
                "ES curve table: derivatives size mismatch");
    }
    for (std::size_t j = 0; j < levels_.size(); ++j) {
        require(levels_[j] > 0.0 && levels_[j] <= 1.0, "ES curve table: level outside (0,1]");
        if (j > 0) {
            require(levels_[j] > levels_[j - 1], "ES curve table: levels must be strictly increasing");
        }
    }
}

bool EsCurveTable::is_decreasing(double tol) const {
    for (std::size_t j = 1; j < values_.size(); ++j)
        if (values_[j] > values_[j - 1] + tol) return false;
    return true;
}

// ---------------------------------------------------------------- empirical

EmpiricalRisk::EmpiricalRisk(std::vector<double> samples) {
    require(!samples.empty(), "empirical risk needs at least one sample");
    for (double x : samples) require(std::isfinite(x), "empirical samples must be finite");
    std::sort(samples.begin(), samples.end());
    auto data = std::make_shared<Data>();
    data->prefix.resize(samples.size() + 1);
    data->prefix[0] = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) data->prefix[k + 1] = data->prefix[k] + samples[k];
    data->sorted = std::move(samples);
    data_ = std::move(data);
}

double EmpiricalRisk::upper_quantile(double u) const {
    const auto m = size();
    auto k = static_cast<std::size_t>(std::floor(static_cast<double>(m) * u));
    return data_->sorted[std::min(k, m - 1)];
}

double EmpiricalRisk::mean() const { return data_->prefix.back() / static_cast<double>(size()); }

// --------------------------------------------------------------- parametric

std::string to_string(Family family) {
    switch (family) {
        case Family::normal: return "normal";
        case Family::student_t: return "student_t";
        case Family::gamma_loss: return "gamma_loss";
        case Family::lognormal_loss: return "lognormal_loss";
        case Family::pareto_loss: return "pareto_loss";
        case Family::gpd_loss: return "gpd_loss";
        case Family::constant: return "constant";
    }
    return "unknown";
}

ParametricRisk ParametricRisk::normal(double mu, double sigma) {
    require(std::isfinite(mu), "normal: mu must be finite");
    require(sigma > 0.0 && std::isfinite(sigma), "normal: sigma must be positive");
    return {Family::normal, {mu, sigma, 0.0}};
}

ParametricRisk ParametricRisk::student_t(double nu, double mu, double sigma) {
    require(nu > 0.0, "student_t: degrees of freedom must be positive");
    if (!(nu > 1.0)) throw InfiniteMeanError("student_t: nu <= 1 has no finite mean");
    require(std::isfinite(mu), "student_t: mu must be finite");
    require(sigma > 0.0 && std::isfinite(sigma), "student_t: sigma must be positive");
    return {Family::student_t, {nu, mu, sigma}};
}

ParametricRisk ParametricRisk::gamma_loss(double shape, double scale) {
    require(shape > 0.0 && std::isfinite(shape), "gamma: shape k must be positive");
    require(scale > 0.0 && std::isfinite(scale), "gamma: scale s must be positive");
    return {Family::gamma_loss, {shape, scale, 0.0}};
}

ParametricRisk ParametricRisk::lognormal_loss(double mu, double sigma) {
    require(std::isfinite(mu), "lognormal: mu must be finite");
    require(sigma > 0.0 && std::isfinite(sigma), "lognormal: sigma must be positive");
    return {Family::lognormal_loss, {mu, sigma, 0.0}};
}

ParametricRisk ParametricRisk::pareto_loss(double gamma, double scale) {
    require(gamma > 0.0, "pareto: tail index must be positive");
    if (!(gamma > 1.0)) throw InfiniteMeanError("pareto: tail index <= 1 has no finite mean");
    require(scale > 0.0 && std::isfinite(scale), "pareto: scale must be positive");
    return {Family::pareto_loss, {gamma, scale, 0.0}};
}

ParametricRisk ParametricRisk::gpd_loss(double xi, double nu, double beta) {
    require(std::isfinite(xi), "gpd: shape must be finite");
    if (!(xi < 1.0)) throw InfiniteMeanError("gpd: shape xi >= 1 has no finite mean");
    require(std::isfinite(nu), "gpd: location must be finite");
    require(beta > 0.0 && std::isfinite(beta), "gpd: scale beta must be positive");
    return {Family::gpd_loss, {xi, nu, beta}};
}

ParametricRisk ParametricRisk::constant(double value) {
    require(std::isfinite(value), "constant: value must be finite");
    return {Family::constant, {value, 0.0, 0.0}};
}

Orientation ParametricRisk::orientation() const {
    switch (family_) {
        case Family::gamma_loss:
        case Family::lognormal_loss:
        case Family::pareto_loss:
        case Family::gpd_loss: return Orientation::loss;
        default: return Orientation::payoff;
    }
}

double ParametricRisk::loss_quantile_upper(double u) const {
    const auto [p0, p1, p2] = params_;
    switch (family_) {
        case Family::gamma_loss:
            return bm::quantile(bm::complement(bm::gamma_distribution<double>(p0, p1), u));
        case Family::lognormal_loss:
            return std::exp(p0 - p1 * standard_normal_quantile(u));
        case Family::pareto_loss:
            return p1 * std::pow(u, -1.0 / p0);
        case Family::gpd_loss: {
            const double lu = std::log(u);
            if (p0 == 0.0) return p1 - p2 * lu;
            return p1 + p2 * std::expm1(-p0 * lu) / p0;
        }
        default:
            throw DomainError("loss quantile requested for payoff family " + to_string(family_));
    }
}

double ParametricRisk::upper_quantile(double u) const {
    check_open_level(u);
    const auto [p0, p1, p2] = params_;
    switch (family_) {
        case Family::normal: return p0 + p1 * standard_normal_quantile(u);
        case Family::student_t: return p1 + p2 * bm::quantile(bm::students_t_distribution<double>(p0), u);
        case Family::constant: return p0;
        default: return -loss_quantile_upper(u);
    }
}

double ParametricRisk::upper_quantile_complement(double v) const {
    check_open_level(v);
    const auto [p0, p1, p2] = params_;
    switch (family_) {
        case Family::normal: return p0 - p1 * standard_normal_quantile(v);
        case Family::student_t: return p1 - p2 * bm::quantile(bm::students_t_distribution<double>(p0), v);
        case Family::constant: return p0;
        case Family::gamma_loss: return -bm::quantile(bm::gamma_distribution<double>(p0, p1), v);
        case Family::lognormal_loss: return -std::exp(p0 + p1 * standard_normal_quantile(v));
        case Family::pareto_loss: return -p1 * std::exp(-std::log1p(-v) / p0);
        case Family::gpd_loss: {
            const double l1 = std::log1p(-v);
            if (p0 == 0.0) return -(p1 - p2 * l1);
            return -(p1 + p2 * std::expm1(-p0 * l1) / p0);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double ParametricRisk::mean() const {
    const auto [p0, p1, p2] = params_;
    switch (family_) {
        case Family::normal: return p0;
        case Family::student_t: return p1;
        case Family::gamma_loss: return -p0 * p1;
        case Family::lognormal_loss: return -std::exp(p0 + 0.5 * p1 * p1);
        case Family::pareto_loss: return -p1 * p0 / (p0 - 1.0);
        case Family::gpd_loss: return -(p1 + p2 / (1.0 - p0));
        case Family::constant: return p0;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string ParametricRisk::describe() const {
    std::ostringstream os;
    os << to_string(family_) << '(';
    const auto [p0, p1, p2] = params_;
    switch (family_) {
        case Family::normal: os << "mu=" << p0 << ", sigma=" << p1; break;
        case Family::student_t: os << "nu=" << p0 << ", mu=" << p1 << ", sigma=" << p2; break;
        case Family::gamma_loss: os << "k=" << p0 << ", s=" << p1; break;
        case Family::lognormal_loss: os << "mu=" << p0 << ", sigma=" << p1; break;
        case Family::pareto_loss: os << "gamma=" << p0 << ", scale=" << p1; break;
        case Family::gpd_loss: os << "xi=" << p0 << ", nu=" << p1 << ", beta=" << p2; break;
        case Family::constant: os << p0; break;
    }
    os << ')';
    return os.str();
}

// ----------------------------------------------------------------- ES curve

EsCurveRisk::EsCurveRisk(Fn f, Fn df) : f_(std::move(f)), df_(std::move(df)) {
    require(static_cast<bool>(f_) && static_cast<bool>(df_), "ES curve risk needs both f and f'");
}

EsCurveRisk::EsCurveRisk(EsCurveTable table)
    : table_(std::make_shared<const EsCurveTable>(std::move(table))) {
    require(table_->size() >= 1, "ES curve table is empty");
}

double EsCurveRisk::es(double t) const {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("ES level must lie in (0,1]");
    if (!table_) return f_(t);

    const auto& tab = *table_;
    const auto levels = tab.levels();
    if (t <= levels.front()) return tab.value(0);
    if (t > levels.back()) throw DomainError("ES level beyond the last tabulated level");
    const auto hi = static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), t) - levels.begin());
    if (levels[hi] == t) return tab.value(hi);
    const std::size_t lo = hi - 1;
    const double w = (t - levels[lo]) / (levels[hi] - levels[lo]);
    const double scaled = (1.0 - w) * tab.scaled(lo) + w * tab.scaled(hi);
    return scaled / t;
}

double EsCurveRisk::upper_quantile(double u) const {
    check_open_level(u);
    if (!table_) return -f_(u) - u * df_(u);

    const auto& tab = *table_;
    const auto levels = tab.levels();
    if (u < levels.front()) return -tab.value(0);
    // Segment [t_j, t_{j+1}) containing u; right-continuous.
    const auto j = static_cast<std::size_t>(std::upper_bound(levels.begin(), levels.end(), u) - levels.begin()) - 1;
    if (j + 1 >= tab.size()) throw DomainError("quantile level beyond the last tabulated level");
    return -(tab.scaled(j + 1) - tab.scaled(j)) / (levels[j + 1] - levels[j]);
}

// ------------------------------------------------------------------ variant

double upper_quantile(const RiskObject& risk, double u) {
    check_open_level(u);
    return std::visit([u](const auto& r) { return r.upper_quantile(u); }, risk);
}

double mean(const RiskObject& risk) {
    return std::visit([](const auto& r) { return r.mean(); }, risk);
}

std::string describe(const RiskObject& risk) {
    struct Visitor {
        std::string operator()(const EmpiricalRisk& r) const {
            return "empirical(m=" + std::to_string(r.size()) + ")";
        }
        std::string operator()(const ParametricRisk& r) const { return r.describe(); }
        std::string operator()(const EsCurveRisk& r) const {
            return r.is_tabulated() ? "es_curve(table)" : "es_curve(closed form)";
        }
    };
    return std::visit(Visitor{}, risk);
}

}  // namespace pelve
