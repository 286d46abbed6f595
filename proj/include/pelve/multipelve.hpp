#pragma once

// Multi-agent PELVE methods over a vector of risks X = (X_1, ..., X_n):
//   A-PELVE    weighted mean of the individual PELVE values
//   WC-PELVE   smallest c at which every agent satisfies ES_{cl} <= VaR_l
//   MSE-PELVE  minimiser of sqrt(sum_i w_i (ES_{cl}(X_i) - VaR_l(X_i))^2)
//   Sys-PELVE  smallest c with sum_i g(ES_{cl}(X_i)) <= sum_i g(VaR_l(X_i))

#include <span>
#include <string>
#include <vector>

#include "pelve/pelve.hpp"
#include "pelve/riskobj.hpp"

namespace pelve {

// Point of the probability simplex.
class Weights {
public:
    explicit Weights(std::vector<double> values);

    static Weights equal(std::size_t n);
    // Normalises positive scores to sum to one.
    static Weights proportional(std::span<const double> scores);
    // w_i proportional to 1 / score_i.
    static Weights inverse_proportional(std::span<const double> scores);

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

enum class AggregationFn { identity, positive_part };

double apply(AggregationFn g, double x);
AggregationFn parse_aggregation(const std::string& name);
std::string to_string(AggregationFn g);

struct MseOptions {
    std::size_t grid_size = 2048;
    double plateau_tol = 1e-9;
};

struct MsePelveResult {
    double leftmost;
    double plateau_lo;
    double plateau_hi;
    double objective_at_min;
};

PelveValue a_pelve(std::span<const RiskObject> risks, double level, const Weights& weights,
                   double tol = kDefaultTol);

// Componentwise maximum of the individual PELVE values.
PelveValue wc_pelve(std::span<const RiskObject> risks, double level, double tol = kDefaultTol);

// Direct search for the smallest c satisfying all agents' constraints.
PelveValue wc_pelve_by_definition(std::span<const RiskObject> risks, double level,
                                  double tol = kDefaultTol);

double mse_objective(std::span<const RiskObject> risks, double level, const Weights& weights, double c);

MsePelveResult mse_pelve(std::span<const RiskObject> risks, double level, const Weights& weights,
                         const MseOptions& options = {});

PelveValue sys_pelve(std::span<const RiskObject> risks, double level, AggregationFn g,
                     double tol = kDefaultTol);

}  // namespace pelve
