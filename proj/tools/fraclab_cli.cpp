// fraclab: experiment driver for the fractional-Laplacian estimate toolkit.
//
// Runs one named experiment suite and writes report.csv, summary.txt and one
// SVG chart per scaling study into the output directory. Exit codes: 0 when
// every asserted invariant passes, 2 on invariant failure, 1 on usage or
// configuration errors. Flags override config-file values.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fraclab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "fraclab - desk-scale verification of fractional-Laplacian commutator estimates,\n"
        "extension problems, Hardy inequalities and the boundary-layer counterexample"};

    std::string experiment, config_path, out_dir;
    std::string alpha_list, beta_list, eps_list;
    int grid_n = -1, y_layers = -1, corpus_size = -1;
    long long seed = -1;

    app.add_option("--experiment", experiment,
                   "one of: commutator-sweep | lemmas | hardy | counterexample | l1-theorem | "
                   "extension-convergence");
    app.add_option("--config", config_path, "flat key=value config file (flags take precedence)");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--grid-n", grid_n,
                   "spatial grid cells per axis (defaults: sweep 512, lemmas 384, counterexample "
                   "4096, l1-theorem 1024)");
    app.add_option("--y-layers", y_layers, "extension layers in y (default: 192 where used)");
    app.add_option("--alpha", alpha_list,
                   "comma-separated fractional orders (default 0.25,0.5,0.75; hardy reads these "
                   "as sigma; counterexample and extension-convergence use the first entry)");
    app.add_option("--beta", beta_list,
                   "comma-separated beta values; default is {alpha/2, alpha} per alpha; every "
                   "beta must satisfy beta <= alpha");
    app.add_option("--seed", seed, "corpus seed (default 42)");
    app.add_option("--corpus-size", corpus_size, "number of corpus pairs (default 12)");
    app.add_option("--eps-list", eps_list,
                   "comma-separated cutoff widths for the counterexample (default "
                   "0.08,0.04,0.02,0.01; each in (0, 1/10))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors are exit 1 by contract
    }

    try {
        fraclab::ExperimentConfig cfg;
        if (!config_path.empty()) fraclab::parse_config_file(cfg, config_path);
        if (!experiment.empty()) cfg.experiment = experiment;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (grid_n >= 0) cfg.grid_n = grid_n;
        if (y_layers >= 0) cfg.y_layers = y_layers;
        if (corpus_size >= 0) cfg.corpus_size = corpus_size;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (!alpha_list.empty()) fraclab::apply_config_key(cfg, "alpha", alpha_list);
        if (!beta_list.empty()) fraclab::apply_config_key(cfg, "beta", beta_list);
        if (!eps_list.empty()) fraclab::apply_config_key(cfg, "eps_list", eps_list);
        if (cfg.experiment.empty())
            throw fraclab::ConfigError("config: --experiment (or an experiment= line) is required");

        const int code = fraclab::run_experiment(cfg);
        std::printf("%s: %s (report in %s)\n", cfg.experiment.c_str(),
                    code == 0 ? "PASS" : "FAIL", cfg.out_dir.c_str());
        return code;
    } catch (const fraclab::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invariant failure: %s\n", e.what());
        return 2;
    }
}
