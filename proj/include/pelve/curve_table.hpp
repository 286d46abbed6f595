#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pelve {

// Tabulated level -> ES mapping. Levels are strictly increasing in (0,1].
class EsCurveTable {
public:
    EsCurveTable() = default;
    EsCurveTable(std::vector<double> levels, std::vector<double> values,
                 std::optional<std::vector<double>> derivatives = std::nullopt);

    std::size_t size() const { return levels_.size(); }
    std::span<const double> levels() const { return levels_; }
    std::span<const double> values() const { return values_; }
    const std::optional<std::vector<double>>& derivatives() const { return derivatives_; }

    double level(std::size_t j) const { return levels_[j]; }
    double value(std::size_t j) const { return values_[j]; }

    // Scaled curve t * f(t) at the j-th knot.
    double scaled(std::size_t j) const { return levels_[j] * values_[j]; }

    // True when consecutive values never increase (up to tol).
    bool is_decreasing(double tol = 0.0) const;

private:
    std::vector<double> levels_;
    std::vector<double> values_;
    std::optional<std::vector<double>> derivatives_;
};

}  // namespace pelve
