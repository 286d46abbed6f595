#include "pelve/asymptotics.hpp"

#include <cmath>

#include "pelve/measures.hpp"
#include "pelve/random.hpp"

namespace pelve {

void EllipticalSpec::validate() const {
    const auto n = mu.size();
    if (n < 1) throw DomainError("elliptical spec: dimension must be at least 1");
    if (sigma.rows() != n || sigma.cols() != n)
        throw DomainError("elliptical spec: Sigma must be n x n");
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("elliptical spec: Sigma must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10)
        throw DomainError("elliptical spec: Sigma must be positive semi-definite");
    if (generator == Generator::student_t && !(dof > 1.0))
        throw DomainError("elliptical spec: Student-t generator needs dof > 1 for a finite mean");
}

RiskObject standard_generator_risk(const EllipticalSpec& spec) {
    spec.validate();
    if (spec.generator == Generator::normal) return ParametricRisk::normal(0.0, 1.0);
    return ParametricRisk::student_t(spec.dof, 0.0, 1.0);
}

RiskObject marginal_risk(const EllipticalSpec& spec, std::size_t i) {
    spec.validate();
    if (i >= spec.dimension()) throw DomainError("marginal_risk: index out of range");
    const auto k = static_cast<Eigen::Index>(i);
    const double variance = std::max(spec.sigma(k, k), 0.0);
    const double location = spec.mu(k);
    if (variance == 0.0) return ParametricRisk::constant(location);
    const double scale = std::sqrt(variance);
    if (spec.generator == Generator::normal) return ParametricRisk::normal(location, scale);
    return ParametricRisk::student_t(spec.dof, location, scale);
}

std::vector<RiskObject> marginal_risks(const EllipticalSpec& spec) {
    std::vector<RiskObject> out;
    for (std::size_t i = 0; i < spec.dimension(); ++i) out.push_back(marginal_risk(spec, i));
    return out;
}

// ------------------------------------------------------------------ reports

bool CheckReport::all_passed() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

void CheckReport::add_equal(std::string name, double lhs, double rhs, double tolerance) {
    const bool pass = (std::isinf(lhs) && lhs == rhs) || std::abs(lhs - rhs) <= tolerance;
    assertions.push_back({std::move(name), CheckAssertion::Relation::equal, lhs, rhs, tolerance, pass});
}

void CheckReport::add_at_most(std::string name, double lhs, double rhs, double tolerance) {
    assertions.push_back(
        {std::move(name), CheckAssertion::Relation::at_most, lhs, rhs, tolerance, lhs <= rhs + tolerance});
}

void CheckReport::add_less(std::string name, double lhs, double rhs, double tolerance) {
    assertions.push_back(
        {std::move(name), CheckAssertion::Relation::less, lhs, rhs, tolerance, lhs < rhs - tolerance});
}

nlohmann::json CheckReport::to_json() const {
    auto number = [](double x) -> nlohmann::json {
        if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
        return x;
    };
    nlohmann::json items = nlohmann::json::array();
    for (const auto& a : assertions) {
        const char* rel = a.relation == CheckAssertion::Relation::equal     ? "equal"
                          : a.relation == CheckAssertion::Relation::at_most ? "at_most"
                                                                            : "less";
        items.push_back({{"name", a.name},
                         {"relation", rel},
                         {"lhs", number(a.lhs)},
                         {"rhs", number(a.rhs)},
                         {"tolerance", a.tolerance},
                         {"pass", a.pass}});
    }
    return {{"passed", all_passed()}, {"assertions", items}};
}

CheckReport elliptical_reduction_check(const EllipticalSpec& spec, double level, const Weights& weights,
                                       double tol) {
    spec.validate();
    check_open_level(level);
    const auto z = standard_generator_risk(spec);
    const auto risks = marginal_risks(spec);
    const double solver_tol = std::min(kDefaultTol, tol * 1e-3);
    const double pz = pelve(z, level, solver_tol).value();
    const double var_z = var(z, level);

    CheckReport report;
    bool nondegenerate = true;
    for (std::size_t i = 0; i < risks.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        if (spec.sigma(k, k) <= 0.0) {
            nondegenerate = false;
            continue;
        }
        report.add_equal("pelve(X_" + std::to_string(i + 1) + ") = pelve(Z)",
                         pelve(risks[i], level, solver_tol).value(), pz, tol);
    }

    if (nondegenerate) {
        report.add_equal("A-PELVE = pelve(Z)", a_pelve(risks, level, weights, solver_tol).value(), pz, tol);
        report.add_equal("WC-PELVE = pelve(Z)", wc_pelve(risks, level, solver_tol).value(), pz, tol);
        report.add_equal("Sys-PELVE(identity) = pelve(Z)",
                         sys_pelve(risks, level, AggregationFn::identity, solver_tol).value(), pz, tol);
        const double expected_mse = (-mean(z) <= var_z) ? pz : 1.0 / level;
        report.add_equal("MSE-PELVE = " + std::string(-mean(z) <= var_z ? "pelve(Z)" : "1/level"),
                         mse_pelve(risks, level, weights).leftmost, expected_mse, tol);
    }

    const double sys_pos = sys_pelve(risks, level, AggregationFn::positive_part, solver_tol).value();
    report.add_at_most("Sys-PELVE(positive part) <= pelve(Z)", sys_pos, pz, tol);

    bool criterion = false;
    for (std::size_t i = 0; i < risks.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double v = spec.sigma(k, k);
        if (v > 0.0 && spec.mu(k) / std::sqrt(v) <= var_z) criterion = true;
    }
    // The equivalence needs E[-Z] <= VaR(Z); ES of normal and t generators is
    // strictly decreasing.
    if (-mean(z) <= var_z) {
        if (criterion)
            report.add_equal("Sys-PELVE(positive part) = pelve(Z) [criterion holds]", sys_pos, pz, tol);
        else
            report.add_less("Sys-PELVE(positive part) < pelve(Z) [criterion fails]", sys_pos, pz, tol);
    }
    return report;
}

// --------------------------------------------------------------------- MVR

TailIndex::TailIndex(double gamma) : gamma_(gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("tail index must exceed 1");
}

double mvr_limit(TailIndex gamma) {
    const double g = gamma.value();
    // (g/(g-1))^g = exp(-g * log1p(-1/g)), stable for large g.
    return std::exp(-g * std::log1p(-1.0 / g));
}

CheckReport mvr_convergence_check(TailIndex gamma, std::span<const double> levels, std::size_t sample_size,
                                  std::uint64_t seed, const MvrCheckOptions& options) {
    if (levels.empty()) throw DomainError("mvr_convergence_check: empty level grid");
    for (std::size_t j = 0; j < levels.size(); ++j) {
        check_open_level(levels[j]);
        if (j > 0 && !(levels[j] < levels[j - 1]))
            throw DomainError("mvr_convergence_check: levels must decrease towards 0");
    }
    if (options.agents == 0) throw DomainError("mvr_convergence_check: need at least one agent");

    std::vector<RiskObject> risks;
    for (std::size_t i = 0; i < options.agents; ++i) {
        if (sample_size == 0) {
            risks.push_back(ParametricRisk::pareto_loss(gamma.value(), 1.0));
            continue;
        }
        PathRng rng(seed, i);
        std::vector<double> samples(sample_size);
        for (auto& x : samples) x = -std::pow(rng.uniform(), -1.0 / gamma.value());
        risks.push_back(EmpiricalRisk(std::move(samples)));
    }

    const double limit = mvr_limit(gamma);
    const double band = sample_size == 0 ? options.tol : options.relative_band * limit;
    const auto weights = Weights::equal(risks.size());
    const double solver_tol = std::min(kDefaultTol, band * 1e-3);

    CheckReport report;
    for (double level : levels) {
        const std::string at = " at level " + std::to_string(level);
        report.add_equal("A-PELVE" + at, a_pelve(risks, level, weights, solver_tol).value(), limit, band);
        report.add_equal("WC-PELVE" + at, wc_pelve(risks, level, solver_tol).value(), limit, band);
        report.add_equal("MSE-PELVE" + at, mse_pelve(risks, level, weights).leftmost, limit, band);
        report.add_equal("Sys-PELVE(identity)" + at,
                         sys_pelve(risks, level, AggregationFn::identity, solver_tol).value(), limit, band);
    }
    return report;
}

}  // namespace pelve
