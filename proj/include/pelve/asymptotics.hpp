#pragma once

// Elliptical reductions and regular-variation limits of the multi-agent
// PELVE methods, with executable checks that report each assertion.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pelve/multipelve.hpp"
#include "pelve/riskobj.hpp"

namespace pelve {

enum class Generator { normal, student_t };

// X ~ E_n(mu, Sigma, phi) with phi fixed by the generator choice.
struct EllipticalSpec {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Generator generator = Generator::normal;
    double dof = 4.0;  // student_t only

    std::size_t dimension() const { return static_cast<std::size_t>(mu.size()); }
    // Symmetric within 1e-12, eigenvalues >= -1e-10, matching sizes.
    void validate() const;
};

// Z ~ E_1(0, 1, phi): standard normal or standard Student-t.
RiskObject standard_generator_risk(const EllipticalSpec& spec);

// X_i = mu_i + sqrt(Sigma_ii) Z; a constant when Sigma_ii = 0. Zero-based i.
RiskObject marginal_risk(const EllipticalSpec& spec, std::size_t i);

std::vector<RiskObject> marginal_risks(const EllipticalSpec& spec);

struct CheckAssertion {
    enum class Relation { equal, at_most, less };
    std::string name;
    Relation relation;
    double lhs;
    double rhs;
    double tolerance;
    bool pass;
};

struct CheckReport {
    std::vector<CheckAssertion> assertions;

    bool all_passed() const;
    // |lhs - rhs| <= tolerance
    void add_equal(std::string name, double lhs, double rhs, double tolerance);
    // lhs <= rhs + tolerance
    void add_at_most(std::string name, double lhs, double rhs, double tolerance);
    // lhs < rhs - tolerance
    void add_less(std::string name, double lhs, double rhs, double tolerance);
    nlohmann::json to_json() const;
};

CheckReport elliptical_reduction_check(const EllipticalSpec& spec, double level, const Weights& weights,
                                       double tol = 1e-5);

class TailIndex {
public:
    explicit TailIndex(double gamma);
    double value() const { return gamma_; }

private:
    double gamma_;
};

// (gamma / (gamma - 1))^gamma, the PELVE of a Pareto tail with index gamma.
double mvr_limit(TailIndex gamma);

struct MvrCheckOptions {
    std::size_t agents = 3;
    double relative_band = 0.10;  // sampled runs
    double tol = 1e-6;            // analytic runs
};

// Independent Pareto(gamma) losses as the regularly varying instance.
// sample_size == 0 evaluates the analytic risks; otherwise each agent is an
// empirical risk drawn from stream (seed, agent).
CheckReport mvr_convergence_check(TailIndex gamma, std::span<const double> levels, std::size_t sample_size,
                                  std::uint64_t seed, const MvrCheckOptions& options = {});

}  // namespace pelve
