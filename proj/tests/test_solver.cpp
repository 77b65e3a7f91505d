#include <doctest.h>

#include <cmath>

#include "fraclab/corpus.hpp"
#include "fraclab/weighted_pde.hpp"

using namespace fraclab;

namespace {

// energy norm of the difference of two fields on the same geometry
double energy_diff(const ExtensionField& a, const ExtensionField& b, double w) {
    auto d = field_axpy(-1.0, b, a);
    return std::sqrt(weighted_gradient_energy(d, w));
}

}  // namespace

TEST_CASE("zero data gives the zero solution") {
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 32);
    auto yg = build_ygrid(4.0, 24, 1.5);
    ExtensionField F(grid, yg, true);
    GridFunction bottom(grid);
    auto res = solve_weighted_pde(F, bottom, 0.5);
    for (double v : res.Z.v) CHECK(v == 0.0);
}

TEST_CASE("manufactured solution is recovered at discretization order") {
    // Z* = sin(x) y^2 (Y - y) on (0, pi) x (0, Y]; plugging into the operator:
    // F = sin(x) y^a [ -y^2 (Y - y) + 2 Y (1 + a) - 3 (2 + a) y ], a = 1 - 2 alpha
    const double alpha = 0.35;
    const double a = 1.0 - 2.0 * alpha;
    const double Y = 2.0;
    auto dom = Domain::interval(0.0, pi);

    auto run = [&](int n, int K) {
        auto grid = build_grid(dom, n);
        auto yg = build_ygrid(Y, K, default_grading(alpha));
        ExtensionField F(grid, yg, true);
        for (int k = 1; k < yg.K; ++k) {
            const double y = yg.y[static_cast<std::size_t>(k)];
            const double poly = -y * y * (Y - y) + 2.0 * Y * (1.0 + a) - 3.0 * (2.0 + a) * y;
            for (std::size_t i = 0; i < grid->size(); ++i)
                F.at(i, k) = std::sin(grid->nodes[i].x) * std::pow(y, a) * poly;
        }
        GridFunction bottom(grid);  // Z*(x, 0) = 0
        auto res = solve_weighted_pde(F, bottom, alpha);
        CHECK(res.residual <= 1e-10);
        double num = 0.0, den = 0.0;
        for (int k = 0; k <= yg.K; ++k) {
            const double y = yg.y[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const double want = std::sin(grid->nodes[i].x) * y * y * (Y - y);
                num += (res.Z.at(i, k) - want) * (res.Z.at(i, k) - want);
                den += want * want;
            }
        }
        return std::sqrt(num / den);
    };

    const double e1 = run(24, 32);
    const double e2 = run(48, 64);
    const double e3 = run(96, 128);
    CHECK(e3 < 5e-3);
    const double order = std::log2(e2 / e3);
    CHECK(order >= 0.8);
    CHECK(e1 > e2);
    CHECK(e2 > e3);
}

TEST_CASE("homogeneous solve reproduces the formula extension") {
    auto dom = Domain::interval(0.0, pi);
    const double alpha = 0.4;
    const double w = 1.0 - 2.0 * alpha;

    // Y_max = 12 pushes the top-truncation floor (~e^{-Y}) well below the
    // discretization error so the order is measurable
    auto run = [&](int n, int K) {
        auto grid = build_grid(dom, n);
        auto basis = build_eigenbasis(dom, grid, n / 4);
        auto corpus = make_corpus(dom, grid, 1, 12);
        const auto& g = corpus[0].first;
        auto yg = build_ygrid(12.0, K, default_grading(alpha));
        auto formula = extend_spectral(g, basis, alpha, yg);
        ExtensionField F(grid, yg, true);
        auto solved = solve_weighted_pde(F, formula.row(0), alpha);
        return energy_diff(solved.Z, formula, w) / std::sqrt(weighted_gradient_energy(formula, w));
    };

    const double e1 = run(48, 48);
    const double e2 = run(96, 96);
    const double e3 = run(192, 192);
    CHECK(e1 > e2);
    CHECK(e2 > e3);
    const double order = std::log2(e2 / e3);
    CHECK(order >= 0.8);
}

TEST_CASE("energy identity holds to solver precision") {
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 96);
    auto basis = build_eigenbasis(dom, grid, 24);
    auto corpus = make_corpus(dom, grid, 1, 3);
    const double alpha = 0.45;
    auto yg = build_ygrid(6.0, 96, default_grading(alpha));
    auto tab = make_theta_table(basis.lambdas, yg.y, alpha, true);
    auto U = extend_spectral_with_gradients(corpus[0].first, basis, alpha, yg, &tab);
    auto V = extend_spectral_with_gradients(corpus[0].second, basis, alpha, yg, &tab);
    auto F = cross_gradient_rhs(U, V, alpha);
    GridFunction zero(grid);
    auto res = solve_weighted_pde(F, zero, alpha);
    auto rep = energy_identity_residual(res.Z, F, alpha);
    // 10x the 1e-10 solver tolerance
    CHECK(rep.relative <= 1e-9);
}

TEST_CASE("trace relation for the Z field") {
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
    auto res = solve_weighted_pde(F, zero, alpha);
    auto rep = trace_relation_check(res.Z, alpha, 6, 1e-6);
    CHECK(rep.nodes_checked > 0);
    CHECK(rep.max_rel_deviation <= 0.05);
}

TEST_CASE("2d manufactured solution") {
    // Z* = sin(x0) sin(x1) y^2 (Y - y) on (0,pi)^2
    const double alpha = 0.5;
    const double a = 0.0;  // 1 - 2 alpha
    const double Y = 2.0;
    auto dom = Domain::rectangle(0, pi, 0, pi);
    auto grid = build_grid(dom, 24);
    auto yg = build_ygrid(Y, 32, 1.0);
    ExtensionField F(grid, yg, true);
    for (int k = 1; k < yg.K; ++k) {
        const double y = yg.y[static_cast<std::size_t>(k)];
        const double poly = -2.0 * y * y * (Y - y) + 2.0 * Y * (1.0 + a) - 3.0 * (2.0 + a) * y;
        for (std::size_t i = 0; i < grid->size(); ++i)
            F.at(i, k) = std::sin(grid->nodes[i].x) * std::sin(grid->nodes[i].y) * std::pow(y, a) * poly;
    }
    GridFunction bottom(grid);
    auto res = solve_weighted_pde(F, bottom, alpha);
    CHECK(res.residual <= 1e-10);
    double num = 0.0, den = 0.0;
    for (int k = 0; k <= yg.K; ++k) {
        const double y = yg.y[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double want = std::sin(grid->nodes[i].x) * std::sin(grid->nodes[i].y) * y * y * (Y - y);
            num += (res.Z.at(i, k) - want) * (res.Z.at(i, k) - want);
            den += want * want;
        }
    }
    CHECK(std::sqrt(num / den) < 2e-2);
}
