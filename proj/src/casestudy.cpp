#include "pelve/casestudy.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "pelve/csv.hpp"
#include "pelve/measures.hpp"

namespace pelve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace

// ------------------------------------------------------------------- specs

void MarketSpec::validate() const {
    require(std::isfinite(rate), "market: rate must be finite");
    require(vols[0] > 0.0 && vols[1] > 0.0, "market: volatilities must be positive");
    require(horizon > 0.0, "market: horizon must be positive");
}

void LiabilityModel::validate() const {
    const auto [p0, p1, p2] = params;
    switch (family) {
        case LiabilityFamily::gamma: require(p0 > 0.0 && p1 > 0.0, "gamma liability: k and s must be positive"); break;
        case LiabilityFamily::lognormal: require(p1 > 0.0, "lognormal liability: sigma must be positive"); break;
        case LiabilityFamily::gpd:
            require(p2 > 0.0, "gpd liability: beta must be positive");
            if (!(p0 < 1.0)) throw InfiniteMeanError("gpd liability: xi >= 1 has no finite mean");
            break;
        case LiabilityFamily::constant: require(std::isfinite(p0), "constant liability must be finite"); break;
    }
}

double LiabilityModel::mean() const {
    const auto [p0, p1, p2] = params;
    switch (family) {
        case LiabilityFamily::gamma: return p0 * p1;
        case LiabilityFamily::lognormal: return std::exp(p0 + 0.5 * p1 * p1);
        case LiabilityFamily::gpd: return p1 + p2 / (1.0 - p0);
        case LiabilityFamily::constant: return p0;
    }
    return kNaN;
}

double LiabilityModel::variance() const {
    const auto [p0, p1, p2] = params;
    switch (family) {
        case LiabilityFamily::gamma: return p0 * p1 * p1;
        case LiabilityFamily::lognormal: return std::expm1(p1 * p1) * std::exp(2.0 * p0 + p1 * p1);
        case LiabilityFamily::gpd:
            if (!(p0 < 0.5)) return std::numeric_limits<double>::infinity();
            return p2 * p2 / ((1.0 - p0) * (1.0 - p0) * (1.0 - 2.0 * p0));
        case LiabilityFamily::constant: return 0.0;
    }
    return kNaN;
}

double LiabilityModel::sample(PathRng& rng) const {
    const auto [p0, p1, p2] = params;
    switch (family) {
        case LiabilityFamily::gamma: return rng.gamma(p0, p1);
        case LiabilityFamily::lognormal: return std::exp(p0 + p1 * rng.normal());
        case LiabilityFamily::gpd: {
            const double lu = std::log(rng.uniform());
            if (p0 == 0.0) return p1 - p2 * lu;
            return p1 + p2 * std::expm1(-p0 * lu) / p0;
        }
        case LiabilityFamily::constant: return p0;
    }
    return kNaN;
}

RiskObject LiabilityModel::as_risk() const {
    const auto [p0, p1, p2] = params;
    switch (family) {
        case LiabilityFamily::gamma: return ParametricRisk::gamma_loss(p0, p1);
        case LiabilityFamily::lognormal: return ParametricRisk::lognormal_loss(p0, p1);
        case LiabilityFamily::gpd: return ParametricRisk::gpd_loss(p0, p1, p2);
        case LiabilityFamily::constant: return ParametricRisk::constant(-p0);
    }
    throw DomainError("unknown liability family");
}

void InsurerSpec::validate() const {
    require(liquid > 0.0, "insurer " + name + ": liquid assets x0 must be positive");
    require(std::abs(assets - ec - liabilities) <= 1.0 + 1e-9 * std::abs(assets),
            "insurer " + name + ": assets must equal equity capital plus liabilities");
    liability.validate();
}

void SimulationConfig::validate() const {
    require(!insurers.empty(), "config: at least one insurer required");
    require(paths >= 1, "config: paths must be at least 1");
    market.validate();
    for (const auto& ins : insurers) ins.validate();
}

std::vector<double> SimulationConfig::assets() const {
    std::vector<double> out;
    for (const auto& ins : insurers) out.push_back(ins.assets);
    return out;
}

std::array<double, 2> portfolio_from_balance_sheet(double stocks, double liquid) {
    require(liquid > 0.0, "portfolio: liquid assets x0 must be positive");
    const double share = stocks / liquid;
    return {0.85 * share, 0.15 * share};
}

// -------------------------------------------------------------- simulation

double wealth_from_shocks(double x0, const std::array<double, 2>& pi, const MarketSpec& market,
                          double z_common, double z_idio) {
    const double t = market.horizon;
    const double excess = pi[0] * (market.drift[0] - market.rate) + pi[1] * (market.drift[1] - market.rate);
    const double e0 = pi[0] * market.vols[0];
    const double e1 = pi[1] * market.vols[1];
    const double drift = (excess + market.rate - 0.5 * (e0 * e0 + e1 * e1)) * t;
    const double diffusion = std::sqrt(t) * (e0 * z_common + e1 * z_idio);
    return x0 * std::exp(drift + diffusion);
}

std::vector<double> terminal_wealth(double x0, const std::array<double, 2>& pi, const MarketSpec& market,
                                    std::size_t paths, std::uint64_t seed) {
    market.validate();
    require(x0 > 0.0, "terminal_wealth: x0 must be positive");
    std::vector<double> out(paths);
    for (std::size_t p = 0; p < paths; ++p) {
        PathRng rng(seed, p);
        const double zc = rng.normal();
        const double zi = rng.normal();
        out[p] = wealth_from_shocks(x0, pi, market, zc, zi);
    }
    return out;
}

std::vector<double> EquityMatrix::column(std::size_t insurer) const {
    std::vector<double> out(paths);
    for (std::size_t p = 0; p < paths; ++p) out[p] = at(p, insurer);
    return out;
}

EquityMatrix simulate_equity(const SimulationConfig& config, unsigned workers) {
    config.validate();
    const std::size_t n = config.insurers.size();
    EquityMatrix m;
    m.paths = config.paths;
    m.insurers = n;
    for (const auto& ins : config.insurers) m.names.push_back(ins.name);
    m.data.resize(m.paths * n);

    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            PathRng rng(config.seed, p);
            const double zc = rng.normal();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& ins = config.insurers[i];
                const double zi = rng.normal();
                const double wealth = wealth_from_shocks(ins.liquid, ins.pi, config.market, zc, zi);
                const double liability = ins.liability.sample(rng);
                m.data[p * n + i] = ins.non_liquid() + wealth - liability;
            }
        }
    };

    workers = std::max(1u, workers);
    if (workers == 1 || m.paths < 2) {
        run(0, m.paths);
        return m;
    }
    const std::size_t chunk = (m.paths + workers - 1) / workers;
    std::vector<std::jthread> pool;
    for (std::size_t begin = 0; begin < m.paths; begin += chunk)
        pool.emplace_back(run, begin, std::min(begin + chunk, m.paths));
    pool.clear();
    return m;
}

LiabilityModel moments_to_params(LiabilityFamily family, double mean, double variance, double location) {
    require(mean > 0.0 && variance > 0.0, "method of moments: mean and variance must be positive");
    switch (family) {
        case LiabilityFamily::gamma:
            return LiabilityModel::gamma(mean * mean / variance, variance / mean);
        case LiabilityFamily::lognormal: {
            const double s2 = std::log1p(variance / (mean * mean));
            return LiabilityModel::lognormal(std::log(mean) - 0.5 * s2, std::sqrt(s2));
        }
        case LiabilityFamily::gpd: {
            // mean = nu + beta/(1-xi), var = beta^2 / ((1-xi)^2 (1-2xi)).
            const double excess = mean - location;
            if (!(excess > 0.0))
                throw DomainError("method of moments: gpd needs mean above the location; no xi < 1/2 fits");
            const double xi = 0.5 * (1.0 - excess * excess / variance);
            return LiabilityModel::gpd(xi, location, excess * (1.0 - xi));
        }
        case LiabilityFamily::constant:
            throw DomainError("method of moments: a constant has zero variance");
    }
    throw DomainError("unknown liability family");
}

LiabilityFamily parse_liability_family(const std::string& name) {
    if (name == "gamma") return LiabilityFamily::gamma;
    if (name == "lognormal") return LiabilityFamily::lognormal;
    if (name == "gpd") return LiabilityFamily::gpd;
    if (name == "constant") return LiabilityFamily::constant;
    throw DomainError("unknown liability family '" + name + "'");
}

// ----------------------------------------------------------------- config

namespace {

std::array<double, 2> pair_of(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw DomainError(std::string("config: ") + what + " must have 2 entries");
    return {j[0].get<double>(), j[1].get<double>()};
}

LiabilityModel parse_liability(const nlohmann::json& j) {
    const auto family = parse_liability_family(j.at("family").get<std::string>());
    LiabilityModel model;
    switch (family) {
        case LiabilityFamily::gamma: model = LiabilityModel::gamma(j.at("k"), j.at("s")); break;
        case LiabilityFamily::lognormal: model = LiabilityModel::lognormal(j.at("mu"), j.at("sigma")); break;
        case LiabilityFamily::gpd: model = LiabilityModel::gpd(j.at("xi"), j.at("nu"), j.at("beta")); break;
        case LiabilityFamily::constant: model = LiabilityModel::constant(j.at("value")); break;
    }
    model.validate();
    return model;
}

}  // namespace

SimulationConfig parse_config(const nlohmann::json& doc) {
    SimulationConfig cfg;
    try {
        const auto& mk = doc.at("market");
        cfg.market.rate = mk.at("r");
        cfg.market.drift = pair_of(mk.at("b"), "market.b");
        cfg.market.vols = pair_of(mk.at("vols"), "market.vols");
        cfg.market.horizon = mk.value("horizon", 1.0);
        for (const auto& j : doc.at("insurers")) {
            InsurerSpec ins;
            ins.name = j.at("name");
            ins.ec = j.at("ec");
            ins.assets = j.at("assets");
            ins.liabilities = j.at("liabilities");
            ins.stocks = j.value("stocks", 0.0);
            ins.liquid = j.at("liquid");
            ins.pi = j.contains("pi") ? pair_of(j.at("pi"), "insurer.pi")
                                      : portfolio_from_balance_sheet(ins.stocks, ins.liquid);
            ins.liability = parse_liability(j.at("liability"));
            cfg.insurers.push_back(std::move(ins));
        }
        cfg.paths = doc.at("paths").get<std::size_t>();
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
    return parse_config(doc);
}

void write_equity_csv(const std::string& path, const EquityMatrix& equity) {
    csv::Table t;
    t.header = equity.names;
    for (std::size_t i = 0; i < equity.insurers; ++i) t.columns.push_back(equity.column(i));
    csv::write_file(path, t);
}

EquityMatrix read_equity_csv(const std::string& path) {
    const auto t = csv::read_file(path);
    EquityMatrix m;
    m.names = t.header;
    m.insurers = t.header.size();
    m.paths = t.rows();
    m.data.resize(m.paths * m.insurers);
    for (std::size_t i = 0; i < m.insurers; ++i)
        for (std::size_t p = 0; p < m.paths; ++p) m.data[p * m.insurers + i] = t.columns[i][p];
    return m;
}

// ----------------------------------------------------------------- report

std::string to_string(Method method) {
    switch (method) {
        case Method::a: return "a";
        case Method::a_weighted: return "a_weighted";
        case Method::wc: return "wc";
        case Method::mse: return "mse";
        case Method::mse_weighted: return "mse_weighted";
        case Method::sys: return "sys";
    }
    return "unknown";
}

ReserveReport reserve_report(const EquityMatrix& equity, std::span<const double> assets,
                             const ReportOptions& options) {
    require(equity.paths > 0 && equity.insurers > 0, "reserve_report: empty equity matrix");
    require(assets.size() == equity.insurers, "reserve_report: one asset figure per insurer required");
    const std::size_t n = equity.insurers;

    ReserveReport rep;
    rep.names = equity.names;
    rep.levels = options.levels;
    std::vector<RiskObject> risks;
    for (std::size_t i = 0; i < n; ++i) risks.emplace_back(EmpiricalRisk(equity.column(i)));

    const auto equal = Weights::equal(n);
    const auto by_assets = Weights::proportional(assets);
    const auto by_inverse_assets = Weights::inverse_proportional(assets);

    rep.pelve_curves.assign(n, {});
    for (Method m : kAllMethods) rep.relative_change[m].reserve(rep.levels.size());

    for (double level : rep.levels) {
        if (level * static_cast<double>(equity.paths) < 50.0) {
            std::ostringstream os;
            os << "level " << level << " leaves fewer than 50 tail samples out of " << equity.paths
               << "; tail estimates are unreliable";
            rep.warnings.push_back(os.str());
        }
        for (std::size_t i = 0; i < n; ++i) rep.pelve_curves[i].push_back(pelve(risks[i], level, options.tol));

        std::vector<double> vars(n);
        for (std::size_t i = 0; i < n; ++i) vars[i] = var(risks[i], level);

        for (Method m : kAllMethods) {
            double value = 0.0;
            switch (m) {
                case Method::a: value = a_pelve(risks, level, equal, options.tol).value(); break;
                case Method::a_weighted: value = a_pelve(risks, level, by_assets, options.tol).value(); break;
                case Method::wc: value = wc_pelve(risks, level, options.tol).value(); break;
                case Method::mse: value = mse_pelve(risks, level, equal, options.mse).leftmost; break;
                case Method::mse_weighted:
                    value = mse_pelve(risks, level, by_inverse_assets, options.mse).leftmost;
                    break;
                case Method::sys: value = sys_pelve(risks, level, options.sys_g, options.tol).value(); break;
            }
            rep.multi[m].push_back(value);

            std::vector<double> rel(n, kNaN);
            double total = kNaN, absolute = kNaN;
            if (std::isfinite(value)) {
                total = absolute = 0.0;
                const double new_level = std::min(value * level, 1.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const double change = es(risks[i], new_level) - vars[i];
                    total += change;
                    absolute += std::abs(change);
                    rel[i] = change / vars[i];
                }
            }
            rep.total_change[m].push_back(total);
            rep.abs_change[m].push_back(absolute);
            rep.relative_change[m].push_back(std::move(rel));
        }
    }
    return rep;
}

void write_report(const ReserveReport& report, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    const fs::path dir(directory);

    csv::Table curves;
    curves.header = {"level"};
    curves.columns = {report.levels};
    for (std::size_t i = 0; i < report.names.size(); ++i) {
        curves.header.push_back(report.names[i]);
        std::vector<double> col;
        for (const auto& v : report.pelve_curves[i]) col.push_back(v.value());
        curves.columns.push_back(std::move(col));
    }
    csv::write_file((dir / "pelve_curves.csv").string(), curves);

    auto per_method = [&](const std::map<Method, std::vector<double>>& data, const std::string& file) {
        csv::Table t;
        t.header = {"level"};
        t.columns = {report.levels};
        for (Method m : kAllMethods) {
            t.header.push_back(to_string(m));
            t.columns.push_back(data.at(m));
        }
        csv::write_file((dir / file).string(), t);
    };
    per_method(report.multi, "multi_curves.csv");
    per_method(report.total_change, "total_change.csv");
    per_method(report.abs_change, "abs_change.csv");

    for (Method m : kAllMethods) {
        csv::Table t;
        t.header = {"level"};
        t.columns = {report.levels};
        const auto& rows = report.relative_change.at(m);
        for (std::size_t i = 0; i < report.names.size(); ++i) {
            t.header.push_back(report.names[i]);
            std::vector<double> col;
            for (const auto& row : rows) col.push_back(row[i]);
            t.columns.push_back(std::move(col));
        }
        csv::write_file((dir / ("relative_change_" + to_string(m) + ".csv")).string(), t);
    }
}

}  // namespace pelve
