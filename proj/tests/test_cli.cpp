#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fraclab/experiments.hpp"
#include "fraclab/report.hpp"

using namespace fraclab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("fraclab_test_" + tag);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config parsing: file, overrides, validation") {
    auto dir = temp_dir("cfg");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "exp.cfg");
        f << "# comment line\n";
        f << "experiment = hardy\n";
        f << "grid_n = 64\n";
        f << "alpha = 0.4,0.6\n";
    }
    ExperimentConfig cfg;
    parse_config_file(cfg, (dir / "exp.cfg").string());
    CHECK(cfg.experiment == "hardy");
    CHECK(cfg.grid_n == 64);
    REQUIRE(cfg.alphas.size() == 2);
    CHECK(cfg.alphas[0] == 0.4);

    // flag-style override wins
    apply_config_key(cfg, "grid_n", "128");
    CHECK(cfg.grid_n == 128);

    // unknown key rejected
    CHECK_THROWS_AS(apply_config_key(cfg, "gird_n", "64"), ConfigError);
    {
        std::ofstream f(dir / "bad.cfg");
        f << "not a key value line\n";
    }
    ExperimentConfig cfg2;
    CHECK_THROWS_AS(parse_config_file(cfg2, (dir / "bad.cfg").string()), ConfigError);

    // beta > alpha is a named ordering violation
    ExperimentConfig cfg3;
    cfg3.experiment = "commutator-sweep";
    cfg3.alphas = {0.25};
    cfg3.betas = {0.5};
    try {
        validate_config(cfg3);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("beta <= alpha") != std::string::npos);
    }

    ExperimentConfig cfg4;
    cfg4.experiment = "no-such-suite";
    CHECK_THROWS_AS(validate_config(cfg4), ConfigError);
}

TEST_CASE("hardy experiment: exit 0 and at least 20 csv rows") {
    ExperimentConfig cfg;
    cfg.experiment = "hardy";
    cfg.out_dir = temp_dir("hardy").string();
    CHECK(run_experiment(cfg) == 0);
    const auto csv = slurp(fs::path(cfg.out_dir) / "report.csv");
    // header + >= 20 data rows, LF endings only
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 21);
    CHECK(csv.find('\r') == std::string::npos);
    const auto summary = slurp(fs::path(cfg.out_dir) / "summary.txt");
    CHECK(summary.find("RESULT: PASS") != std::string::npos);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "hardy_ratio_vs_delta.svg"));
}

TEST_CASE("experiments are byte-deterministic") {
    ExperimentConfig cfg;
    cfg.experiment = "l1-theorem";
    cfg.grid_n = 128;
    cfg.alphas = {0.3};
    auto run_once = [&](const std::string& tag) {
        cfg.out_dir = temp_dir(tag).string();
        run_experiment(cfg);
        return slurp(fs::path(cfg.out_dir) / "report.csv");
    };
    const auto a = run_once("det_a");
    const auto b = run_once("det_b");
    CHECK(a == b);
    CHECK(a.size() > 100);
}

TEST_CASE("extension-convergence experiment passes at reduced size") {
    ExperimentConfig cfg;
    cfg.experiment = "extension-convergence";
    cfg.out_dir = temp_dir("extconv").string();
    CHECK(run_experiment(cfg) == 0);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "extension_convergence.svg"));
}

TEST_CASE("counterexample config orderings are validated") {
    ExperimentConfig cfg;
    cfg.experiment = "counterexample";
    cfg.alphas = {0.45};  // violates alpha < alpha0 = 0.4
    cfg.out_dir = temp_dir("ce_bad").string();
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    cfg.alphas = {0.3};
    cfg.eps_list = {0.2, 0.08, 0.04, 0.02};  // eps outside (0, 1/10)
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("grid functions and extension fields serialize to csv") {
    auto dir = temp_dir("ser");
    fs::create_directories(dir);
    auto dom = Domain::interval(0.0, 1.0);
    auto grid = build_grid(dom, 8);
    auto f = sample(grid, [](Point p) { return p.x * p.x; });
    write_grid_function_csv((dir / "f.csv").string(), f);
    const auto text = slurp(dir / "f.csv");
    CHECK(text.substr(0, 8) == "x,value\n");
    CHECK(std::count(text.begin(), text.end(), '\n') == 9);
    // 17-significant-digit round trip of the first node
    std::stringstream first(text.substr(8));
    std::string cell;
    std::getline(first, cell, ',');
    CHECK(std::stod(cell) == grid->nodes[0].x);

    auto yg = build_ygrid(1.0, 8, 1.0);
    ExtensionField field(grid, yg, true);
    write_extension_field_csv((dir / "u.csv").string(), field);
    const auto ftext = slurp(dir / "u.csv");
    CHECK(ftext.substr(0, 10) == "x,y,value\n");
    CHECK(std::count(ftext.begin(), ftext.end(), '\n') == 1 + 8 * 9);
}

TEST_CASE("csv schema is stable") {
    EstimateReport r;
    r.check = "demo";
    r.kind = "spectral";
    r.alpha = 0.5;
    r.lhs = 1.0;
    r.rhs = 2.0;
    r.rhs_factors = {{"one", 1.0}};
    r.finalize();
    const auto row = report_csv_row(r);
    CHECK(row == "demo,spectral,0.5,0,0,0,0,-1,0,1,2,0.5,one,1,,,,,,,");
    CHECK(std::string(report_csv_header()).substr(0, 11) == "check,kind,");
    // 17 significant digits survive a round trip
    CHECK(format_float(pi) == "3.1415926535897931");
}
