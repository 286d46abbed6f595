#pragma once

// Value-at-Risk and Expected Shortfall in the payoff convention:
//   VaR_l(X) = -q_X^+(l),   ES_l(X) = (1/l) * int_0^l VaR_u(X) du.

#include <iosfwd>
#include <span>

#include "pelve/curve_table.hpp"
#include "pelve/riskobj.hpp"

namespace pelve {

// VaR and ES evaluated together at one level so reports never mix levels.
struct ReserveStat {
    double var_value;
    double es_value;
    double level;
};

double var(const RiskObject& risk, double level);

// Closed forms for empirical, ES-curve, normal, Pareto, GPD and constant
// risks; adaptive quadrature of the quantile function otherwise.
double es(const RiskObject& risk, double level);

// ES by quadrature of the upper quantile, whatever the risk type. Used for
// families without closed forms and to cross-check the closed forms.
double es_by_quadrature(const RiskObject& risk, double level);

ReserveStat reserve_stat(const RiskObject& risk, double level);

EsCurveTable es_curve(const RiskObject& risk, std::span<const double> levels);

// CSV schema: header "level,es", 17 significant digits.
void write_es_curve_csv(std::ostream& out, const EsCurveTable& table);
EsCurveTable read_es_curve_csv(std::istream& in);

}  // namespace pelve
