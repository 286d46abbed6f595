#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pelve/cli.hpp"
#include "pelve/csv.hpp"
#include "pelve/pelve.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "pelve");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = pelve::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("pelve_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kConfig = R"({
  "market": {"r": 0.01, "b": [0.04, 0.06], "vols": [0.2, 0.4], "horizon": 1},
  "insurers": [
    {"name": "a", "ec": 50, "assets": 1050, "liabilities": 1000, "stocks": 400, "liquid": 600,
     "liability": {"family": "gamma", "k": 400, "s": 2.5}},
    {"name": "b", "ec": 20, "assets": 520, "liabilities": 500, "stocks": 100, "liquid": 300,
     "liability": {"family": "lognormal", "mu": 6.2, "sigma": 0.1}}
  ],
  "paths": 3000, "seed": 11
})";

}  // namespace

TEST_CASE("cli pelve verb") {
    auto r = run({"pelve", "--dist", "pareto", "--gamma", "2", "--level", "0.1"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(4.0).epsilon(1e-6));

    r = run({"pelve", "--dist", "constant", "--value", "5", "--level", "0.1"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");

    r = run({"pelve", "--dist", "normal", "--params", "0", "1", "--level", "0.05"});
    CHECK(r.code == 0);
    // 17 significant digits
    CHECK(r.out.size() == std::string("2.5099584514973685\n").size());

    r = run({"pelve", "--dist", "pareto", "--gamma", "0.8", "--level", "0.1"});
    CHECK(r.code == 2);
    r = run({"pelve", "--dist", "normal", "--level", "1.5"});
    CHECK(r.code == 2);
}

TEST_CASE("cli usage errors") {
    CHECK(run({}).code == 64);
    CHECK(run({"frobnicate"}).code == 64);
    CHECK(run({"pelve", "--dist", "normal", "--level", "0.1", "--bogus", "1"}).code == 64);
    CHECK(run({"pelve", "--dist", "normal"}).code == 64);
    CHECK(run({"multi", "--config", "x.json", "--level", "0.1", "--method", "median"}).code == 64);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("validate-curve") != std::string::npos);
}

TEST_CASE("cli validate-curve") {
    const auto bad = temp_path("bad_curve.csv");
    const auto good = temp_path("good_curve.csv");
    {
        std::ofstream b(bad), g(good);
        b << "level,es\n";
        g << "level,es\n";
        for (int j = 1; j <= 1000; ++j) {
            const double t = j / 1000.0;
            b << pelve::csv::format_number(t) << "," << pelve::csv::format_number((1 - t) * (1 - t)) << "\n";
            g << pelve::csv::format_number(t) << "," << pelve::csv::format_number(1 - t * t) << "\n";
        }
    }
    auto r = run({"validate-curve", "--input", bad});
    CHECK(r.code == 2);
    CHECK(r.out.find("slope") != std::string::npos);
    CHECK(r.out.find("(0.667") != std::string::npos);
    r = run({"validate-curve", "--input", good});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("accepted", 0) == 0);
    CHECK(run({"validate-curve", "--input", temp_path("missing.csv")}).code == 1);
    std::filesystem::remove(bad);
    std::filesystem::remove(good);
}

TEST_CASE("cli simulate, curve, multi and report") {
    const auto cfg = temp_path("config.json");
    const auto samples = temp_path("samples.csv");
    const auto samples2 = temp_path("samples2.csv");
    const auto curve = temp_path("curve.csv");
    const auto outdir = temp_path("report");
    std::ofstream(cfg) << kConfig;

    REQUIRE(run({"simulate", "--config", cfg, "--out", samples}).code == 0);
    REQUIRE(run({"simulate", "--config", cfg, "--out", samples2, "--workers", "4"}).code == 0);
    CHECK(slurp(samples) == slurp(samples2));

    auto r = run({"curve", "--input", samples, "--col", "a", "--levels", "0.01:0.2:15", "--out", curve});
    REQUIRE(r.code == 0);
    std::ifstream cin(curve);
    const auto pc = pelve::read_pelve_curve_csv(cin);
    CHECK(pc.levels.size() == 15);
    CHECK(run({"curve", "--input", samples, "--col", "zzz", "--levels", "0.01:0.2:15", "--out", curve}).code == 2);
    CHECK(run({"curve", "--input", samples, "--col", "a", "--levels", "0.01:0.2", "--out", curve}).code == 2);

    r = run({"multi", "--config", cfg, "--samples", samples, "--method", "wc", "--level", "0.05"});
    CHECK(r.code == 0);
    const double wc = std::stod(r.out);
    r = run({"multi", "--config", cfg, "--samples", samples, "--method", "a", "--level", "0.05", "--weights",
             "inverse-assets"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) <= wc + 1e-9);
    r = run({"multi", "--config", cfg, "--method", "sys", "--g", "identity", "--level", "0.05"});
    CHECK(r.code == 0);
    r = run({"multi", "--config", cfg, "--method", "mse", "--level", "0.05"});
    CHECK(r.code == 0);
    CHECK(r.out.find("plateau") != std::string::npos);

    REQUIRE(run({"report", "--samples", samples, "--config", cfg, "--outdir", outdir, "--levels", "0.02:0.1:4"}).code == 0);
    const auto t = pelve::csv::read_file(outdir + "/multi_curves.csv");
    CHECK(t.rows() == 4);

    for (const auto& p : {cfg, samples, samples2, curve}) std::filesystem::remove(p);
    std::filesystem::remove_all(outdir);
}

TEST_CASE("cli multi with parametric risks") {
    const auto cfg = temp_path("risks.json");
    std::ofstream(cfg) << R"({"risks": [{"dist": "pareto", "gamma": 2}, {"dist": "pareto", "params": [3]}],
                             "assets": [1, 3]})";
    auto r = run({"multi", "--config", cfg, "--method", "a", "--level", "0.05"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(3.6875).epsilon(1e-7));
    r = run({"multi", "--config", cfg, "--method", "a", "--level", "0.05", "--weights", "assets"});
    CHECK(std::stod(r.out) == doctest::Approx(0.25 * 4 + 0.75 * 3.375).epsilon(1e-7));
    std::filesystem::remove(cfg);
}
