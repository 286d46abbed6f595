#pragma once

// Executable checks on ES curves f(t) = ES_t(X) and their scaled form
// F(t) = t f(t). A function is the ES curve of an integrable payoff iff
// t f(t) -> 0 as t -> 0 and -F' = -f - t f' is (a.e.) increasing and
// right-continuous; the derived quantile is then q(t) = -f(t) - t f'(t).

#include <string>
#include <utility>
#include <vector>

#include "pelve/curve_table.hpp"
#include "pelve/riskobj.hpp"

namespace pelve {

struct CurveViolation {
    enum class Condition { scaled_limit_at_zero, slope_monotonicity };
    Condition condition;
    double t_from;
    double t_to;
    std::string message;
};

struct CurveValidation {
    bool accepted = true;
    std::vector<CurveViolation> violations;
};

// Proxies on a finite table: (i) the linear extrapolation of t f(t) to t = 0
// is not below 0, (ii) the slopes of -t f(t) between knots never decrease by
// more than tol. Tolerances scale with 1 + max|f|.
CurveValidation validate_es_curve(const EsCurveTable& table, double tol = 1e-9);

struct ShapeClass {
    enum class Kind { strictly_decreasing, constant_then_strictly_decreasing, invalid };
    Kind kind;
    double breakpoint = 0.0;  // end of the initial constant stretch, when present
};

std::string to_string(ShapeClass::Kind kind);

ShapeClass classify_shape(const EsCurveTable& table, double tol = 1e-9);

// Risk with ES curve f. Throws DomainError when the derived quantile is not
// increasing on a probe grid or t f(t) does not vanish at 0.
RiskObject quantile_from_es_curve(EsCurveRisk::Fn f, EsCurveRisk::Fn df);

struct MseCounterexampleParams {
    double level = 1.0 / 3.0;
    double c = 0.1;
    double d = 0.8;
    double omega1 = 0.4;
    double epsilon = 0.05;
    double s = 0.66;
    double u = 0.74;
    double w = 0.25;
};

struct MseCounterexample {
    EsCurveRisk f;  // five-piece curve
    EsCurveRisk g;  // g(t) = 1 - t^2
    double t_g_star;
    double t_mixed;
    double a;
    double var_f;  // f(l) + l f'(l)
    double var_g;  // g(l) + l g'(l)
};

// Two agents whose weighted MSE objective is constant on [s, u].
MseCounterexample build_mse_counterexample(const MseCounterexampleParams& p = {});

}  // namespace pelve
