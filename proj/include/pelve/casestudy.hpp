#pragma once

// Balance-sheet Monte-Carlo for several insurers. Equity X_i = Y_i - Z_i with
// assets Y_i = non-liquid (constant) + Black-Scholes terminal wealth of a
// constant two-stock portfolio, and liabilities Z_i from a parametric family.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pelve/multipelve.hpp"
#include "pelve/pelve.hpp"
#include "pelve/random.hpp"
#include "pelve/riskobj.hpp"

namespace pelve {

struct MarketSpec {
    double rate = 0.01;
    std::array<double, 2> drift{0.04, 0.06};  // (common stock, idiosyncratic stock)
    std::array<double, 2> vols{0.2, 0.4};     // diagonal of the volatility matrix
    double horizon = 1.0;

    void validate() const;
};

enum class LiabilityFamily { gamma, lognormal, gpd, constant };

struct LiabilityModel {
    LiabilityFamily family = LiabilityFamily::constant;
    // gamma (k, s); lognormal (mu, sigma); gpd (xi, nu, beta); constant (value)
    std::array<double, 3> params{};

    static LiabilityModel gamma(double k, double s) { return {LiabilityFamily::gamma, {k, s, 0.0}}; }
    static LiabilityModel lognormal(double mu, double sigma) {
        return {LiabilityFamily::lognormal, {mu, sigma, 0.0}};
    }
    static LiabilityModel gpd(double xi, double nu, double beta) { return {LiabilityFamily::gpd, {xi, nu, beta}}; }
    static LiabilityModel constant(double value) { return {LiabilityFamily::constant, {value, 0.0, 0.0}}; }

    void validate() const;
    double mean() const;
    double variance() const;
    double sample(PathRng& rng) const;
    // The payoff -Z as a risk object.
    RiskObject as_risk() const;
};

struct InsurerSpec {
    std::string name;
    double ec = 0.0;
    double assets = 0.0;
    double liabilities = 0.0;
    double stocks = 0.0;
    double liquid = 0.0;  // x_0
    std::array<double, 2> pi{};
    LiabilityModel liability;

    double non_liquid() const { return assets - liquid; }
    void validate() const;
};

struct SimulationConfig {
    std::vector<InsurerSpec> insurers;
    MarketSpec market;
    std::size_t paths = 1;
    std::uint64_t seed = 0;

    void validate() const;
    std::vector<double> assets() const;
};

// (0.85 S / x0, 0.15 S / x0)
std::array<double, 2> portfolio_from_balance_sheet(double stocks, double liquid);

// Wealth x0 exp((pi'(b - r 1) + r - |pi' Sigma|^2 / 2) t + sqrt(t) pi' Sigma (z_common, z_idio)).
double wealth_from_shocks(double x0, const std::array<double, 2>& pi, const MarketSpec& market,
                          double z_common, double z_idio);

// One insurer's terminal liquid wealth; path p draws (z_common, z_idio)
// from stream (seed, p).
std::vector<double> terminal_wealth(double x0, const std::array<double, 2>& pi, const MarketSpec& market,
                                    std::size_t paths, std::uint64_t seed);

// Row-major paths x insurers.
struct EquityMatrix {
    std::size_t paths = 0;
    std::size_t insurers = 0;
    std::vector<std::string> names;
    std::vector<double> data;

    double at(std::size_t path, std::size_t insurer) const { return data[path * insurers + insurer]; }
    std::vector<double> column(std::size_t insurer) const;
};

// Path p uses stream (seed, p): one common shock, then per insurer one
// idiosyncratic shock and one liability draw. Output does not depend on the
// worker count.
EquityMatrix simulate_equity(const SimulationConfig& config, unsigned workers = 1);

// Method of moments. gpd needs the location; it is ignored otherwise.
LiabilityModel moments_to_params(LiabilityFamily family, double mean, double variance, double location = 0.0);

LiabilityFamily parse_liability_family(const std::string& name);

SimulationConfig parse_config(const nlohmann::json& doc);
SimulationConfig load_config(const std::string& path);

void write_equity_csv(const std::string& path, const EquityMatrix& equity);
EquityMatrix read_equity_csv(const std::string& path);

enum class Method { a, a_weighted, wc, mse, mse_weighted, sys };
inline constexpr std::array<Method, 6> kAllMethods{Method::a,   Method::a_weighted,   Method::wc,
                                                   Method::mse, Method::mse_weighted, Method::sys};
std::string to_string(Method method);

struct ReportOptions {
    std::vector<double> levels = log_grid(0.005, 0.1, 50);
    double tol = kDefaultTol;
    MseOptions mse;
    AggregationFn sys_g = AggregationFn::positive_part;
};

struct ReserveReport {
    std::vector<std::string> names;
    std::vector<double> levels;
    std::vector<std::vector<PelveValue>> pelve_curves;  // [insurer][level]
    std::map<Method, std::vector<double>> multi;        // [method][level]; +inf when infinite
    // sum_i (ES_{P l}(X_i) - VaR_l(X_i)) and sum_i |...|; NaN where P is infinite
    std::map<Method, std::vector<double>> total_change;
    std::map<Method, std::vector<double>> abs_change;
    // (ES_{P l}(X_i) - VaR_l(X_i)) / VaR_l(X_i), [method][level][insurer]
    std::map<Method, std::vector<std::vector<double>>> relative_change;
    std::vector<std::string> warnings;
};

// Weighted A-PELVE uses asset shares; weighted MSE-PELVE inverse asset shares.
ReserveReport reserve_report(const EquityMatrix& equity, std::span<const double> assets,
                             const ReportOptions& options = {});

// pelve_curves.csv, multi_curves.csv, total_change.csv, abs_change.csv,
// relative_change_<method>.csv
void write_report(const ReserveReport& report, const std::string& directory);

}  // namespace pelve
