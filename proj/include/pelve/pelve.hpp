#pragma once

// Probability equivalent level of VaR and ES: the smallest c in [1, 1/l]
// with ES_{c l}(X) <= VaR_l(X), or +inf when no such c exists.

#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "pelve/riskobj.hpp"

namespace pelve {

inline constexpr double kDefaultTol = 1e-9;

class PelveValue {
public:
    static PelveValue finite(double c) { return PelveValue(c); }
    static PelveValue infinite() { return PelveValue(std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(c_); }
    // The multiplier, or +inf.
    double value() const { return c_; }

    friend bool operator==(const PelveValue&, const PelveValue&) = default;

private:
    explicit PelveValue(double c) : c_(c) {}
    double c_;
};

PelveValue pelve(const RiskObject& risk, double level, double tol = kDefaultTol);

struct PelveCurve {
    std::vector<double> levels;
    std::vector<PelveValue> values;
    double tol = kDefaultTol;
};

PelveCurve pelve_curve(const RiskObject& risk, std::span<const double> grid, double tol = kDefaultTol);

struct CurveJump {
    std::size_t index;  // jump between grid points index and index + 1
    double level_lo;
    double level_hi;
    double value_lo;
    double value_hi;
};

// Adjacent grid pairs whose values differ by more than jump_threshold.
// Finite/infinite transitions always count as jumps.
std::vector<CurveJump> continuity_diagnostic(const PelveCurve& curve, double jump_threshold);

// n log-spaced points covering [a, b], 0 < a <= b < 1.
std::vector<double> log_grid(double a, double b, std::size_t n);

// CSV schema: header "level,pelve"; "inf" marks infinite values.
void write_pelve_curve_csv(std::ostream& out, const PelveCurve& curve);
PelveCurve read_pelve_curve_csv(std::istream& in);

}  // namespace pelve
