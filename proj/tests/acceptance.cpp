// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Each tolerance is pinned here in code; nothing defers to
// later calibration. Criterion 6 is implemented literally over the full
// default sweep; its (es42) cells at alpha = 0.75 fail by necessity (the
// weighted sup is infinite there - see the analysis printed with the result)
// and the failure is reported honestly rather than gated away.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fraclab/experiments.hpp"

using namespace fraclab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

double now_s() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void report(const char* id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%-4s %-5s %s (%s)\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double rel_l2(const GridFunction& a, const GridFunction& b) {
    return l2_norm(axpy(-1.0, b, a)) / l2_norm(b);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// --------------------------------------------------------------------------

void criterion_1() {
    const double t0 = now_s();
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 512);
    const int J = 128;
    auto basis = build_eigenbasis(dom, grid, J);
    double worst = 0.0;
    for (double alpha : {0.25, 0.5, 0.75})
        for (int j = 1; j <= J / 4; ++j) {
            auto r = spectral_frac_laplacian(basis_function(basis, j), basis, alpha);
            const double lam = std::pow(basis.lambdas[static_cast<std::size_t>(j - 1)], alpha);
            worst = std::max(worst, rel_l2(r, scaled(basis_function(basis, j), lam)));
        }
    const double dt = now_s() - t0;
    report("C1", worst <= 1e-8 && dt < 1.0,
           "eigen-exactness: spectral op reproduces lambda_j^a phi_j (rel L2 <= 1e-8, j <= J/4)",
           "worst " + fmt(worst) + ", " + fmt(dt) + " s");
}

void criterion_2() {
    const double t0 = now_s();
    const double alpha = 0.3;  // order 2-2a = 1.4 sits centrally in the halving window
    auto dom = Domain::interval(-1.0, 1.0);
    auto err_at = [&](int n) {
        auto grid = build_grid(dom, n);
        auto corpus = make_corpus(dom, grid, 5, 42);
        std::vector<double> errs;
        for (auto& [g, h] : corpus) {
            auto restr = restricted_frac_laplacian(g, alpha);
            // padding 1024 pushes the reference's periodization floor an order
            // of magnitude below the restricted-side error at both levels
            auto four = fourier_frac_laplacian(g, alpha, 1024);
            double num = 0, den = 0;
            for (std::size_t i = 0; i < grid->size(); ++i) {
                if (std::abs(grid->nodes[i].x) > 0.8) continue;  // interior 80%
                const double d = restr.values[i] - four.values[i];
                num += grid->weights[i] * d * d;
                den += grid->weights[i] * four.values[i] * four.values[i];
            }
            errs.push_back(std::sqrt(num / den));
        }
        return errs;
    };
    auto coarse = err_at(2048);
    auto fine = err_at(4096);
    double worst = 0.0, mean_c = 0.0, mean_f = 0.0;
    for (double e : coarse) {
        worst = std::max(worst, e);
        mean_c += e / coarse.size();
    }
    for (double e : fine) mean_f += e / fine.size();
    const double halving = mean_f / mean_c;
    const bool pass = worst <= 1e-2 && halving >= 0.25 && halving <= 0.75;
    report("C2", pass,
           "cross-oracle: restricted vs fourier multiplier <= 1e-2 on the interior 80%, error "
           "halves (+-50%) when n doubles",
           "worst " + fmt(worst) + ", halving ratio " + fmt(halving) + ", " + fmt(now_s() - t0) + " s");
}

void criterion_3() {
    const double t0 = now_s();
    // spectral side on (0, pi)
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 512);
    auto basis = build_eigenbasis(dom, grid, 128);
    auto corpus = make_corpus(dom, grid, 3, 5);
    auto yg = build_ygrid(6.0, 200, 4.0);
    double worst_sp = 0.0;
    for (double alpha : {0.25, 0.5, 0.75}) {
        auto tab = make_theta_table(basis.lambdas, yg.y, alpha, false);
        for (auto& [g, h] : corpus) {
            auto U = extend_spectral(g, basis, alpha, yg, &tab);
            auto tr = neumann_trace(U, alpha, U.row(0));
            worst_sp = std::max(worst_sp, rel_l2(tr.trace, spectral_frac_laplacian(g, basis, alpha)));
        }
    }
    // whole-space side: Poisson-kernel extension vs the fourier operator
    auto box = Domain::interval(-2.0, 2.0);
    auto bgrid = build_grid(box, 512);
    auto bdom = Domain::interval(-1.0, 1.0);
    auto bcorp = make_corpus(bdom, bgrid, 3, 5);
    double worst_cs = 0.0;
    for (double alpha : {0.25, 0.5, 0.75})
        for (auto& [g, h] : bcorp) {
            auto U = extend_poisson(g, alpha, yg);
            auto tr = neumann_trace(U, alpha, g);
            worst_cs = std::max(worst_cs, rel_l2(tr.trace, fourier_frac_laplacian(g, alpha, 64)));
        }
    const bool pass = worst_sp <= 1e-2 && worst_cs <= 2e-2;
    report("C3", pass,
           "extension trace oracles: spectral <= 1e-2, whole-space pair <= 2e-2 (n=512, K=200)",
           "spectral " + fmt(worst_sp) + ", poisson " + fmt(worst_cs) + ", " + fmt(now_s() - t0) + " s");
}

void criterion_4() {
    const double t0 = now_s();
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 128);
    auto basis = build_eigenbasis(dom, grid, 32);
    auto yg = build_ygrid(6.0, 200, 1.0);
    auto U = extend_spectral(basis_function(basis, 1), basis, 0.5, yg);
    double worst = 0.0;
    for (int k = 0; k <= yg.K; ++k)
        for (std::size_t i = 0; i < grid->size(); ++i)
            worst = std::max(worst, std::abs(U.at(i, k) - std::exp(-yg.y[static_cast<std::size_t>(k)]) *
                                                              basis.phis[0][i]));
    report("C4", worst <= 1e-4,
           "closed-form extension: extend(phi_1) at alpha = 1/2 matches e^{-y} phi_1 to 1e-4",
           "max error " + fmt(worst) + ", " + fmt(now_s() - t0) + " s");
}

// shared drift bookkeeping for C5/C6
struct CellTable {
    std::map<std::string, std::map<int, double>> cells;

    void add(const EstimateReport& r, const std::string& key) {
        auto& lv = cells[key];
        auto it = lv.find(r.level);
        lv[r.level] = (it == lv.end()) ? r.ratio : std::max(it->second, r.ratio);
    }

    // returns worst drift; appends failing cells to `bad`
    double worst_drift(double tol, std::vector<std::string>& bad) const {
        double worst = 0.0;
        for (const auto& [key, lv] : cells) {
            if (lv.size() < 2) continue;
            auto it = lv.rbegin();
            const double fine = it->second;
            ++it;
            const double coarse = it->second;
            const double drift = std::abs(fine - coarse) / coarse;
            worst = std::max(worst, drift);
            if (drift >= tol) bad.push_back(key + " drift " + fmt(drift));
        }
        return worst;
    }
};

void criterion_5() {
    const double t0 = now_s();
    SweepConfig cfg;  // 3 alphas x 2 betas x 12 pairs x both kinds, levels 256/512
    auto reports = ratio_sweep(cfg);
    bool finite = true, ceiling = true;
    CellTable table;
    for (const auto& r : reports) {
        if (!std::isfinite(r.ratio)) finite = false;
        if (r.ratio > 1e3) ceiling = false;
        table.add(r, r.kind + "/a=" + fmt(r.alpha) + "/b=" + fmt(r.beta));
    }
    std::vector<std::string> bad;
    const double worst = table.worst_drift(0.10, bad);
    const bool pass = finite && ceiling && bad.empty();
    report("C5", pass,
           "commutator sweep (both kinds): ratios finite, max-per-cell drift < 10%, ceiling 1e3",
           std::to_string(reports.size()) + " rows, worst drift " + fmt(worst) + ", " +
               fmt(now_s() - t0) + " s");
}

void criterion_6() {
    const double t0 = now_s();
    SweepConfig cfg;
    cfg.levels = {{192, 128}, {384, 192}};
    auto reports = lemma_sweep(cfg);
    bool finite = true, es1_exact = true;
    CellTable table;
    for (const auto& r : reports) {
        if (!std::isfinite(r.ratio)) finite = false;
        table.add(r, r.check + "/a=" + fmt(r.alpha) + "/b=" + fmt(r.beta));
        if (r.check == "es2" && r.beta == r.alpha)
            for (const auto& [k, v] : r.rhs_factors)
                if (k == "es1_ratio" && std::abs(v - 1.0) > 1e-8) es1_exact = false;
    }
    std::vector<std::string> bad;
    const double worst = table.worst_drift(0.10, bad);
    const bool pass = finite && es1_exact && bad.empty();
    std::string detail = std::to_string(reports.size()) + " rows, worst drift " + fmt(worst) +
                         ", es1 exact: " + (es1_exact ? "yes" : "no") + ", " + fmt(now_s() - t0) + " s";
    report("C6", pass,
           "sub-lemma suite literal: es2/es42-es39/es43 finite, drift < 10%, (es1) = 1 at beta = alpha",
           detail);
    if (!bad.empty()) {
        for (const auto& b : bad) std::printf("      failing cell: %s\n", b.c_str());
        std::printf(
            "      analysis: the failing cells are (es42) at alpha = 0.75. For alpha > 1/2 the\n"
            "      quantity sup_y y^{1-2a} |grad U| is infinite (the weight blows up at y -> 0\n"
            "      against the nonvanishing lateral gradient of U, which equals grad g there), so\n"
            "      no discretization can be refinement-stable: the discrete sup grows like\n"
            "      y_1^{1-2a}. The classical subordination derivation of this bound converges\n"
            "      only for alpha < 1/2; the other sub-estimates and both commutator bounds are\n"
            "      unaffected. Reported red rather than scoping the assertion down.\n");
    }
}

void criterion_7() {
    const double t0 = now_s();
    HalfLineFunction w;
    w.value = [](double y) { return y * std::exp(-y); };
    w.deriv = [](double y) { return (1.0 - y) * std::exp(-y); };
    auto rep = check_hardy(w, 0.5);
    bool pass = std::abs(rep.ratio - 2.0) <= 1e-3;

    bool monotone = true, none_violated = rep.lhs >= rep.rhs;
    double prev = 1e300, last = 0.0;
    for (double delta : {0.4, 0.2, 0.1, 0.05}) {
        auto ne = make_near_extremal(0.5, delta);
        auto r = check_hardy(ne, 0.5);
        if (r.lhs < r.rhs) none_violated = false;
        if (r.ratio >= prev) monotone = false;
        prev = last = r.ratio;
    }
    for (double sigma : {0.3, 0.7})
        for (double delta : {0.3, 0.1}) {
            auto r = check_hardy(make_near_extremal(sigma, delta), sigma);
            if (r.lhs < r.rhs) none_violated = false;
        }
    pass = pass && monotone && none_violated && last > 1.0;
    report("C7", pass,
           "Hardy: closed form gives 2.000 +- 1e-3; near-extremal ratios decrease toward 1; no "
           "violation of lhs >= rhs",
           "closed form " + fmt(rep.ratio) + ", last ratio " + fmt(last) + ", " +
               fmt(now_s() - t0) + " s");
}

void criterion_8() {
    const double t0 = now_s();
    auto r = run_counterexample(0.3, 0.4, 0.35, 0.45, {0.08, 0.04, 0.02, 0.01}, 4096);
    auto band = [](const std::vector<double>& v) {
        double lo = 1e300, hi = 0.0;
        for (double x : v) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return hi / lo;
    };
    bool monotone = true;
    for (std::size_t i = 1; i < r.hardy_quotient.size(); ++i)
        if (r.hardy_quotient[i] >= r.hardy_quotient[i - 1]) monotone = false;
    const double dt = now_s() - t0;
    const bool pass = band(r.weighted_mass) <= 4.0 && band(r.halfnorm_sq) <= 4.0 &&
                      r.seminorm_fit.fitted_slope >= 1.0 - 2.0 * 0.4 - 0.15 && monotone &&
                      dt < 300.0;
    report("C8", pass,
           "counterexample: W and H in factor-4 bands, seminorm slope >= 0.05, G/W monotone, "
           "under 5 min",
           "W band " + fmt(band(r.weighted_mass)) + ", H band " + fmt(band(r.halfnorm_sq)) +
               ", slope " + fmt(r.seminorm_fit.fitted_slope) + ", " + fmt(dt) + " s");
}

void criterion_9() {
    const double t0 = now_s();
    auto dom = Domain::interval(-1.0, 1.0);
    bool finite = true, stable = true;
    double worst = 0.0;
    for (double alpha : {0.2, 0.3, 0.4}) {
        for (int c = 0; c < 5; ++c) {
            double prev_ratio = 0.0, prev_z4 = 0.0;
            for (int level = 0; level < 2; ++level) {
                auto grid = build_grid(dom, level == 0 ? 1024 : 2048);
                auto corpus = make_corpus(dom, grid, 5, 42);
                auto rep = check_l1_theorem(corpus[static_cast<std::size_t>(c)].first, alpha,
                                            alpha / 8.0);
                double z4 = 0.0;
                for (auto& [k, v] : rep.rhs_factors)
                    if (k == "z4_ratio") z4 = v;
                if (!std::isfinite(rep.ratio) || !std::isfinite(z4)) finite = false;
                if (level == 1) {
                    const double d1 = std::abs(rep.ratio - prev_ratio) / prev_ratio;
                    const double d2 = std::abs(z4 - prev_z4) / prev_z4;
                    worst = std::max(worst, std::max(d1, d2));
                    if (d1 >= 0.15 || d2 >= 0.15) stable = false;
                }
                prev_ratio = rep.ratio;
                prev_z4 = z4;
            }
        }
    }
    const double dt = now_s() - t0;
    report("C9", finite && stable && dt < 300.0,
           "weighted-L1 theorem: (Z4)/(Z5) ratios finite, drift < 15%, under 5 min",
           "worst drift " + fmt(worst) + ", " + fmt(dt) + " s");
}

void criterion_10() {
    const double t0 = now_s();
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 128);
    auto basis = build_eigenbasis(dom, grid, 32);
    auto corpus = make_corpus(dom, grid, 1, 3);
    const double alpha = 0.5;
    auto yg = build_ygrid(6.0, 200, 3.0);
    auto tab = make_theta_table(basis.lambdas, yg.y, alpha, true);
    auto U = extend_spectral_with_gradients(corpus[0].first, basis, alpha, yg, &tab);
    auto V = extend_spectral_with_gradients(corpus[0].second, basis, alpha, yg, &tab);
    auto F = cross_gradient_rhs(U, V, alpha);
    GridFunction zero(grid);
    auto solved = solve_weighted_pde(F, zero, alpha);
    auto ibp = energy_identity_residual(solved.Z, F, alpha);
    auto trel = trace_relation_check(solved.Z, alpha, 6, 1e-6);
    const bool pass = ibp.relative <= 10.0 * 1e-10 && trel.nodes_checked > 0 &&
                      trel.max_rel_deviation <= 0.05;
    report("C10", pass,
           "energy identity residual <= 10x solver tolerance; Z trace relation within 5% node-wise",
           "ibp " + fmt(ibp.relative) + ", trace dev " + fmt(trel.max_rel_deviation) + " over " +
               std::to_string(trel.nodes_checked) + " nodes, " + fmt(now_s() - t0) + " s");
}

void criterion_11() {
    const double t0 = now_s();
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool pass = true;
    for (const char* exp : {"hardy", "l1-theorem"}) {
        ExperimentConfig cfg;
        cfg.experiment = exp;
        if (std::string(exp) == "l1-theorem") cfg.grid_n = 256;
        std::string first;
        for (int run = 0; run < 2; ++run) {
            auto dir = fs::temp_directory_path() / ("fraclab_acc_det_" + std::string(exp) +
                                                    std::to_string(run));
            fs::remove_all(dir);
            cfg.out_dir = dir.string();
            run_experiment(cfg);
            const auto csv = slurp(dir / "report.csv");
            if (run == 0)
                first = csv;
            else if (csv != first)
                pass = false;
        }
    }
    report("C11", pass, "determinism: identical configs give byte-identical report.csv",
           fmt(now_s() - t0) + " s");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n----------------\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("----------------\n%d of 11 criteria passed\n", 11 - g_failures);
    return g_failures;
}
