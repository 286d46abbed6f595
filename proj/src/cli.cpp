#include "pelve/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "pelve/casestudy.hpp"
#include "pelve/csv.hpp"
#include "pelve/escurve.hpp"
#include "pelve/measures.hpp"
#include "pelve/multipelve.hpp"
#include "pelve/pelve.hpp"

namespace pelve::cli {

namespace {

using csv::format_number;

std::string format_value(const PelveValue& v) { return format_number(v.value()); }

// "a:b:N" -> N log-spaced levels in [a, b]; a single number is a one-point grid.
std::vector<double> parse_levels(const std::string& text) {
    const auto first = text.find(':');
    if (first == std::string::npos) return {csv::parse_number(text)};
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos) throw DomainError("levels must look like a:b:N, got '" + text + "'");
    const double a = csv::parse_number(text.substr(0, first));
    const double b = csv::parse_number(text.substr(first + 1, second - first - 1));
    const std::string count = text.substr(second + 1);
    std::size_t pos = 0;
    long n = 0;
    try {
        n = std::stol(count, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != count.size() || n < 1) throw DomainError("levels: N must be a positive integer, got '" + count + "'");
    return log_grid(a, b, static_cast<std::size_t>(n));
}

struct DistArgs {
    std::string dist;
    std::vector<double> params;
    std::optional<double> mu, sigma, nu, shape, scale, gamma, xi, beta, value;
    std::string input;
    std::string col;
};

double pick(const std::optional<double>& named, const std::vector<double>& params, std::size_t index,
            std::optional<double> fallback, const char* what) {
    if (named) return *named;
    if (index < params.size()) return params[index];
    if (fallback) return *fallback;
    throw DomainError(std::string("missing parameter --") + what);
}

std::vector<double> read_column(const std::string& path, const std::string& col) {
    const auto table = csv::read_file(path);
    if (table.header.empty()) throw csv::ParseError(path + ": no columns");
    if (col.empty()) {
        if (table.header.size() != 1) throw DomainError(path + ": several columns, choose one with --col");
        return table.columns.front();
    }
    return table.column(col);
}

RiskObject make_risk(const DistArgs& a) {
    const auto& p = a.params;
    const std::string& d = a.dist;
    if (d == "normal") return ParametricRisk::normal(pick(a.mu, p, 0, 0.0, "mu"), pick(a.sigma, p, 1, 1.0, "sigma"));
    if (d == "t" || d == "student_t")
        return ParametricRisk::student_t(pick(a.nu, p, 0, std::nullopt, "nu"), pick(a.mu, p, 1, 0.0, "mu"),
                                         pick(a.sigma, p, 2, 1.0, "sigma"));
    if (d == "gamma")
        return ParametricRisk::gamma_loss(pick(a.shape, p, 0, std::nullopt, "shape"),
                                          pick(a.scale, p, 1, 1.0, "scale"));
    if (d == "lognormal")
        return ParametricRisk::lognormal_loss(pick(a.mu, p, 0, 0.0, "mu"), pick(a.sigma, p, 1, 1.0, "sigma"));
    if (d == "pareto")
        return ParametricRisk::pareto_loss(pick(a.gamma, p, 0, std::nullopt, "gamma"),
                                           pick(a.scale, p, 1, 1.0, "scale"));
    if (d == "gpd")
        return ParametricRisk::gpd_loss(pick(a.xi, p, 0, std::nullopt, "xi"), pick(a.nu, p, 1, 0.0, "nu"),
                                        pick(a.beta, p, 2, 1.0, "beta"));
    if (d == "constant") return ParametricRisk::constant(pick(a.value, p, 0, std::nullopt, "value"));
    if (d == "empirical") {
        if (a.input.empty()) throw DomainError("--dist empirical needs --input");
        return EmpiricalRisk(read_column(a.input, a.col));
    }
    throw DomainError("unknown distribution '" + d + "'");
}

// {"dist": "...", "params": [...]} or the named keys accepted on the command line.
RiskObject risk_from_json(const nlohmann::json& j) {
    DistArgs a;
    a.dist = j.at("dist").get<std::string>();
    a.params = j.value("params", std::vector<double>{});
    auto opt = [&](const char* key, std::optional<double>& slot) {
        if (j.contains(key)) slot = j.at(key).get<double>();
    };
    opt("mu", a.mu);
    opt("sigma", a.sigma);
    opt("nu", a.nu);
    opt("shape", a.shape);
    opt("scale", a.scale);
    opt("gamma", a.gamma);
    opt("xi", a.xi);
    opt("beta", a.beta);
    opt("value", a.value);
    a.input = j.value("input", std::string{});
    a.col = j.value("col", std::string{});
    return make_risk(a);
}

struct MultiInput {
    std::vector<RiskObject> risks;
    std::vector<double> assets;  // empty when the config has none
};

MultiInput load_multi_input(const std::string& config_path, const std::string& samples_path, unsigned workers) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(config_path + ": " + e.what());
    }
    MultiInput m;
    if (doc.contains("insurers")) {
        const auto cfg = parse_config(doc);
        const auto equity = samples_path.empty() ? simulate_equity(cfg, workers) : read_equity_csv(samples_path);
        if (equity.insurers != cfg.insurers.size())
            throw DomainError("samples have " + std::to_string(equity.insurers) + " columns, config has " +
                              std::to_string(cfg.insurers.size()) + " insurers");
        for (std::size_t i = 0; i < equity.insurers; ++i) m.risks.emplace_back(EmpiricalRisk(equity.column(i)));
        m.assets = cfg.assets();
        return m;
    }
    try {
        for (const auto& r : doc.at("risks")) m.risks.push_back(risk_from_json(r));
        if (doc.contains("assets")) m.assets = doc.at("assets").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(config_path + ": " + e.what());
    }
    if (m.risks.empty()) throw DomainError(config_path + ": no risks");
    return m;
}

Weights make_weights(const std::string& kind, const MultiInput& in) {
    if (kind == "equal") return Weights::equal(in.risks.size());
    if (in.assets.size() != in.risks.size()) throw DomainError("--weights " + kind + " needs one asset figure per risk");
    if (kind == "assets") return Weights::proportional(in.assets);
    return Weights::inverse_proportional(in.assets);
}

void add_dist_options(CLI::App* cmd, DistArgs& a) {
    cmd->add_option("--dist", a.dist, "normal|t|gamma|lognormal|pareto|gpd|constant|empirical")->required();
    cmd->add_option("--params", a.params, "positional parameters in family order");
    cmd->add_option("--mu", a.mu);
    cmd->add_option("--sigma", a.sigma);
    cmd->add_option("--nu", a.nu, "t degrees of freedom or gpd location");
    cmd->add_option("--shape", a.shape);
    cmd->add_option("--scale", a.scale);
    cmd->add_option("--gamma", a.gamma, "pareto tail index");
    cmd->add_option("--xi", a.xi);
    cmd->add_option("--beta", a.beta);
    cmd->add_option("--value", a.value);
    cmd->add_option("--input", a.input, "samples CSV for --dist empirical");
    cmd->add_option("--col", a.col);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"PELVE and multi-agent PELVE calculator", "pelve"};
    app.require_subcommand(1);

    double tol = kDefaultTol;
    app.add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);

    DistArgs dist;
    double level = 0.0;
    auto* c_pelve = app.add_subcommand("pelve", "PELVE of one risk at one level");
    add_dist_options(c_pelve, dist);
    c_pelve->add_option("--level", level)->required();

    std::string input, col, levels_text, out_path;
    double jump_threshold = 0.0;
    auto* c_curve = app.add_subcommand("curve", "PELVE curve of a sample column");
    c_curve->add_option("--input", input)->required();
    c_curve->add_option("--col", col);
    c_curve->add_option("--levels", levels_text, "a:b:N log-spaced")->required();
    c_curve->add_option("--out", out_path)->required();
    c_curve->add_option("--jump-threshold", jump_threshold, "report jumps larger than this")
        ->check(CLI::NonNegativeNumber);

    std::string config, samples, method = "a", weights = "equal", g_name = "pospart";
    unsigned workers = 1;
    auto* c_multi = app.add_subcommand("multi", "multi-agent PELVE at one level");
    c_multi->add_option("--config", config)->required();
    c_multi->add_option("--samples", samples, "equity CSV instead of simulating");
    c_multi->add_option("--method", method)->check(CLI::IsMember({"a", "wc", "mse", "sys"}));
    c_multi->add_option("--level", level)->required();
    c_multi->add_option("--weights", weights)->check(CLI::IsMember({"equal", "assets", "inverse-assets"}));
    c_multi->add_option("--g", g_name)->check(CLI::IsMember({"identity", "pospart"}));
    c_multi->add_option("--workers", workers)->check(CLI::PositiveNumber);

    auto* c_validate = app.add_subcommand("validate-curve", "check a tabulated ES curve");
    c_validate->add_option("--input", input)->required();

    auto* c_simulate = app.add_subcommand("simulate", "simulate insurer equity");
    c_simulate->add_option("--config", config)->required();
    c_simulate->add_option("--out", out_path)->required();
    c_simulate->add_option("--workers", workers)->check(CLI::PositiveNumber);

    std::string outdir;
    auto* c_report = app.add_subcommand("report", "reserve-change report from equity samples");
    c_report->add_option("--samples", samples)->required();
    c_report->add_option("--config", config)->required();
    c_report->add_option("--outdir", outdir)->required();
    c_report->add_option("--levels", levels_text, "a:b:N log-spaced (default 0.005:0.1:50)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*c_pelve) {
            out << format_value(pelve(make_risk(dist), level, tol)) << "\n";
        } else if (*c_curve) {
            const auto grid = parse_levels(levels_text);
            const auto curve = pelve_curve(EmpiricalRisk(read_column(input, col)), grid, tol);
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot write " + out_path);
            write_pelve_curve_csv(f, curve);
            if (jump_threshold > 0.0) {
                for (const auto& j : continuity_diagnostic(curve, jump_threshold))
                    out << "jump " << format_number(j.level_lo) << " " << format_number(j.level_hi) << " "
                        << format_number(j.value_lo) << " " << format_number(j.value_hi) << "\n";
            }
        } else if (*c_multi) {
            const auto in = load_multi_input(config, samples, workers);
            PelveValue result = PelveValue::infinite();
            if (method == "a") {
                result = a_pelve(in.risks, level, make_weights(weights, in), tol);
            } else if (method == "wc") {
                result = wc_pelve(in.risks, level, tol);
            } else if (method == "sys") {
                result = sys_pelve(in.risks, level, parse_aggregation(g_name), tol);
            } else {
                const auto r = mse_pelve(in.risks, level, make_weights(weights, in));
                out << format_number(r.leftmost) << "\n";
                out << "plateau " << format_number(r.plateau_lo) << " " << format_number(r.plateau_hi) << "\n";
                out << "objective " << format_number(r.objective_at_min) << "\n";
                return kExitOk;
            }
            out << format_value(result) << "\n";
        } else if (*c_validate) {
            std::ifstream f(input);
            if (!f) throw std::runtime_error("cannot open " + input);
            const auto table = read_es_curve_csv(f);
            const auto v = validate_es_curve(table);
            if (!v.accepted) {
                out << "rejected\n";
                for (const auto& viol : v.violations) out << viol.message << "\n";
                return kExitValidation;
            }
            const auto shape = classify_shape(table);
            out << "accepted\n" << to_string(shape.kind);
            if (shape.kind == ShapeClass::Kind::constant_then_strictly_decreasing)
                out << " " << format_number(shape.breakpoint);
            out << "\n";
        } else if (*c_simulate) {
            const auto cfg = load_config(config);
            write_equity_csv(out_path, simulate_equity(cfg, workers));
        } else if (*c_report) {
            const auto cfg = load_config(config);
            const auto equity = read_equity_csv(samples);
            if (equity.insurers != cfg.insurers.size())
                throw DomainError("samples have " + std::to_string(equity.insurers) + " columns, config has " +
                                  std::to_string(cfg.insurers.size()) + " insurers");
            ReportOptions opts;
            opts.tol = tol;
            if (!levels_text.empty()) opts.levels = parse_levels(levels_text);
            const auto assets = cfg.assets();
            const auto rep = reserve_report(equity, assets, opts);
            write_report(rep, outdir);
            for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const csv::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace pelve::cli
