#pragma once

// Risk objects: payoff distributions exposed through their upper quantile
// function q_X^+(u), u in (0,1). Payoff convention throughout: larger is
// better, losses are negated payoffs.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pelve/curve_table.hpp"

namespace pelve {

// Argument outside the mathematical domain of an operation (level outside
// (0,1), invalid parameters, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised for distributions without a finite first moment.
class InfiniteMeanError : public DomainError {
public:
    using DomainError::DomainError;
};

enum class Orientation { payoff, loss };

// Empirical distribution of m >= 1 equally weighted payoff samples.
// Copies share the sorted sample buffer.
class EmpiricalRisk {
public:
    explicit EmpiricalRisk(std::vector<double> samples);

    std::size_t size() const { return data_->sorted.size(); }
    std::span<const double> sorted() const { return data_->sorted; }

    // samples[floor(m*u)], clamped to the last sample.
    double upper_quantile(double u) const;
    double mean() const;

    // Sum of the k smallest samples, k in [0, m].
    double lower_sum(std::size_t k) const { return data_->prefix[k]; }

private:
    struct Data {
        std::vector<double> sorted;
        std::vector<double> prefix;  // prefix[k] = sum of sorted[0..k)
    };
    std::shared_ptr<const Data> data_;
};

enum class Family {
    normal,          // (mu, sigma)
    student_t,       // (nu, mu, sigma)
    gamma_loss,      // (shape k, scale s), mean k*s
    lognormal_loss,  // (log-mean mu, log-sd sigma)
    pareto_loss,     // (tail index gamma, scale); P(Y > y) = (y/scale)^-gamma
    gpd_loss,        // (shape xi, location nu, scale beta)
    constant,        // (value)
};

std::string to_string(Family family);

// Named parametric family. Loss families model a loss Y and expose the
// payoff X = -Y, so q_X^+(u) = -q_Y(1-u).
class ParametricRisk {
public:
    static ParametricRisk normal(double mu, double sigma);
    static ParametricRisk student_t(double nu, double mu = 0.0, double sigma = 1.0);
    static ParametricRisk gamma_loss(double shape, double scale);
    static ParametricRisk lognormal_loss(double mu, double sigma);
    static ParametricRisk pareto_loss(double gamma, double scale = 1.0);
    static ParametricRisk gpd_loss(double xi, double nu, double beta);
    static ParametricRisk constant(double value);

    Family family() const { return family_; }
    Orientation orientation() const;
    const std::array<double, 3>& params() const { return params_; }

    double upper_quantile(double u) const;
    // q_X^+(1 - v) without forming 1 - v; accurate as v -> 0.
    double upper_quantile_complement(double v) const;
    double mean() const;

    // Lower quantile of the loss Y at probability 1-u, computed without
    // forming 1-u. Only meaningful for loss families.
    double loss_quantile_upper(double u) const;

    std::string describe() const;

private:
    ParametricRisk(Family family, std::array<double, 3> params)
        : family_(family), params_(params) {}

    Family family_;
    std::array<double, 3> params_;
};

// Risk defined through its ES curve f(t) = ES_t(X), t in (0,1]. Either a
// closed-form pair (f, f') or a table, in which case t*f(t) is interpolated
// linearly between knots (the ES curve of a discrete distribution).
class EsCurveRisk {
public:
    using Fn = std::function<double(double)>;

    EsCurveRisk(Fn f, Fn df);
    explicit EsCurveRisk(EsCurveTable table);

    bool is_tabulated() const { return table_ != nullptr; }

    double es(double t) const;
    // q(u) = -f(u) - u f'(u); right-continuous for piecewise inputs.
    double upper_quantile(double u) const;
    double mean() const { return -es(1.0); }

private:
    Fn f_;
    Fn df_;
    std::shared_ptr<const EsCurveTable> table_;
};

using RiskObject = std::variant<EmpiricalRisk, ParametricRisk, EsCurveRisk>;

double upper_quantile(const RiskObject& risk, double u);
double mean(const RiskObject& risk);
std::string describe(const RiskObject& risk);

// Throws DomainError unless u lies in the open unit interval.
void check_open_level(double u, const char* what = "level");

}  // namespace pelve
