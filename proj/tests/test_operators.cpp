#include <doctest.h>

#include <cmath>

#include "fraclab/corpus.hpp"
#include "fraclab/domain.hpp"
#include "fraclab/eigenbasis.hpp"
#include "fraclab/operators.hpp"

using namespace fraclab;

namespace {

double rel_l2_interior(const GridFunction& a, const GridFunction& b, double frac) {
    // relative L2 difference over the central fraction of the interval
    const Grid& g = *a.grid;
    const double c = 0.5 * (g.domain.a0 + g.domain.b0);
    const double half = 0.5 * frac * (g.domain.b0 - g.domain.a0);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(g.nodes[i].x - c) > half) continue;
        const double d = a.values[i] - b.values[i];
        num += g.weights[i] * d * d;
        den += g.weights[i] * b.values[i] * b.values[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("normalization constant closed forms") {
    CHECK(normalization_constant(1, 0.5) == doctest::Approx(1.0 / pi).epsilon(1e-13));
    // finite for all alpha in (0,1): c * |Gamma(-a)| = 4^a Gamma(1/2+a)/sqrt(pi)
    for (double a : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const double v = normalization_constant(1, a);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        const double with_gamma = v * std::tgamma(1.0 - a) / a;
        CHECK(with_gamma ==
              doctest::Approx(std::pow(4.0, a) * std::tgamma(0.5 + a) / std::sqrt(pi)).epsilon(1e-12));
    }
}

TEST_CASE("FracOrder validation") {
    CHECK_THROWS(FracOrder(1.5));
    CHECK_THROWS(FracOrder(0.5, 0.7));
    CHECK_NOTHROW(FracOrder(0.5, 0.0));  // beta = 0 allowed
}

TEST_CASE("spectral operator is exact on eigenfunctions") {
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 256);
    auto basis = build_eigenbasis(dom, grid, 64);

    auto r1 = spectral_frac_laplacian(basis_function(basis, 1), basis, 0.5);
    CHECK(l2_norm(axpy(-1.0, basis_function(basis, 1), r1)) <= 1e-8);

    auto r2 = spectral_frac_laplacian(basis_function(basis, 2), basis, 0.5);
    CHECK(l2_norm(axpy(-2.0, basis_function(basis, 2), r2)) <= 1e-8);

    // phi_1 + phi_3 at alpha = 0.25: 9^{1/4} = sqrt(3)
    auto u = axpy(1.0, basis_function(basis, 1), basis_function(basis, 3));
    auto r3 = spectral_frac_laplacian(u, basis, 0.25);
    auto expect = axpy(1.0, basis_function(basis, 1),
                       scaled(basis_function(basis, 3), std::sqrt(3.0)));
    CHECK(l2_norm(axpy(-1.0, expect, r3)) / l2_norm(expect) <= 1e-8);
    CHECK(std::sqrt(3.0) == doctest::Approx(1.7320508).epsilon(1e-7));

    // truncation warning channel
    double tail = -1.0;
    spectral_frac_laplacian(basis_function(basis, 1), basis, 0.5, &tail);
    CHECK(tail <= 1e-10);
    double tail_hi = -1.0;
    spectral_frac_laplacian(basis_function(basis, 60), basis, 0.5, &tail_hi);
    CHECK(tail_hi > 1e-10);
}

TEST_CASE("spectral operator is self-adjoint") {
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 256);
    auto basis = build_eigenbasis(dom, grid, 64);
    auto corpus = make_corpus(dom, grid, 4, 3);
    for (auto& [g, h] : corpus) {
        const double a = inner_product(spectral_frac_laplacian(g, basis, 0.6), h);
        const double b = inner_product(g, spectral_frac_laplacian(h, basis, 0.6));
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("restricted operator basics") {
    auto dom = Domain::interval(-1.0, 1.0);
    auto grid = build_grid(dom, 256);

    GridFunction zero(grid);
    auto rz = restricted_frac_laplacian(zero, 0.5);
    for (double v : rz.values) CHECK(v == 0.0);

    // zero-extension precondition
    auto bad = sample(grid, [](Point p) { return std::cos(0.5 * pi * p.x) + 0.5; });
    CHECK_THROWS_AS(restricted_frac_laplacian(bad, 0.5), std::invalid_argument);

    // reflection symmetry: op of u(-x) equals reflected op of u on (-1,1)
    auto u = sample(grid, [&](Point p) {
        return std::sin(2.0 * p.x + 0.3) * interior_bump(dom, p);
    });
    auto ur = sample(grid, [&](Point p) {
        return std::sin(-2.0 * p.x + 0.3) * interior_bump(dom, p);
    });
    auto Tu = restricted_frac_laplacian(u, 0.4);
    auto Tur = restricted_frac_laplacian(ur, 0.4);
    const std::size_t n = grid->size();
    const double scale = sup_norm(Tu);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(Tur.values[i] - Tu.values[n - 1 - i]) <= 1e-9 * scale);
}

TEST_CASE("tail identity: restricted - regional = c u tail") {
    auto dom = Domain::interval(-1.0, 1.0);
    auto grid = build_grid(dom, 300);
    auto u = sample(grid, [&](Point p) { return interior_bump(dom, p); });
    const double alpha = 0.25;
    auto restr = restricted_frac_laplacian(u, alpha);
    auto regio = regional_frac_laplacian(u, alpha);
    const double c = normalization_constant(1, alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double tail = exterior_tail_interval(-1.0, 1.0, grid->nodes[i].x, 2.0 * alpha);
        worst = std::max(worst, std::abs(restr.values[i] - regio.values[i] - c * u.values[i] * tail));
    }
    CHECK(worst <= 1e-12);
    // closed-form tail at the center: 2 int_1^inf r^{-1.5} dr = 4
    CHECK(exterior_tail_interval(-1.0, 1.0, 0.0, 0.5) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("rectangle exterior tail matches a brute-force quadrature") {
    auto dom = Domain::rectangle(0, 1, 0, 1);
    const double alpha = 0.3;
    const Point p{0.37, 0.61};
    const double fast = exterior_tail_rectangle(dom, p, alpha);
    // brute force: geometric-radius polar grid over a large disk (complement
    // masked), plus the closed-form annulus remainder beyond the disk
    const int nr = 4000, nt = 720;
    const double R = 600.0;
    double acc = 2.0 * pi * std::pow(R, -2.0 * alpha) / (2.0 * alpha);
    for (int it = 0; it < nt; ++it) {
        const double th = (it + 0.5) * 2.0 * pi / nt;
        const double ct = std::cos(th), st = std::sin(th);
        for (int ir = 0; ir < nr; ++ir) {
            const double r0 = 1e-3 * std::pow(R / 1e-3, static_cast<double>(ir) / nr);
            const double r1 = 1e-3 * std::pow(R / 1e-3, static_cast<double>(ir + 1) / nr);
            const double rm = 0.5 * (r0 + r1);
            const double x = p.x + rm * ct, y = p.y + rm * st;
            if (x > 0 && x < 1 && y > 0 && y < 1) continue;
            acc += std::pow(rm, -2.0 - 2.0 * alpha) * rm * (r1 - r0) * (2.0 * pi / nt);
        }
    }
    CHECK(fast == doctest::Approx(acc).epsilon(2e-3));
}

TEST_CASE("restricted agrees with the fourier multiplier on zero-extensions") {
    auto dom = Domain::interval(-1.0, 1.0);
    for (double alpha : {0.5, 0.3}) {
        auto grid = build_grid(dom, 1024);
        auto u = sample(grid, [&](Point p) {
            return (1.0 + 0.4 * std::sin(3.0 * p.x)) * interior_bump(dom, p);
        });
        auto restr = restricted_frac_laplacian(u, alpha);
        auto four = fourier_frac_laplacian(u, alpha, 64);
        CHECK(rel_l2_interior(restr, four, 0.8) <= 1e-3);
    }
}

TEST_CASE("fourier operator semigroup property") {
    auto dom = Domain::interval(-1.0, 1.0);
    auto grid = build_grid(dom, 512);
    auto u = sample(grid, [&](Point p) { return interior_bump(dom, p); });
    // compose on the padded box: the operator output lives on all of R, so
    // the intermediate keeps its tails and the multiplier semigroup holds
    auto one = fourier_frac_laplacian_box(fourier_frac_laplacian_box(u, 0.2, 8), 0.3);
    auto two = fourier_frac_laplacian_box(u, 0.5, 8);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < one.values.size(); ++i) {
        num += (one.values[i] - two.values[i]) * (one.values[i] - two.values[i]);
        den += two.values[i] * two.values[i];
    }
    CHECK(std::sqrt(num / den) <= 1e-6);

    GridFunction zero(grid);
    auto fz = fourier_frac_laplacian(zero, 0.5);
    for (double v : fz.values) CHECK(v == 0.0);

    CHECK_THROWS(fourier_frac_laplacian(u, 0.5, 2));  // padding too small
}

TEST_CASE("all four operators are linear") {
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 128);
    auto basis = build_eigenbasis(dom, grid, 32);
    auto corpus = make_corpus(dom, grid, 2, 17);
    const auto& u = corpus[0].first;
    const auto& v = corpus[1].second;
    const double a = 1.3, b = -0.7;
    auto lin = axpy(a, u, scaled(v, b));
    for (auto kind : {OperatorKind::spectral, OperatorKind::restricted, OperatorKind::regional,
                      OperatorKind::fourier}) {
        auto left = apply_frac_laplacian(lin, kind, 0.45, &basis);
        auto right = axpy(a, apply_frac_laplacian(u, kind, 0.45, &basis),
                          scaled(apply_frac_laplacian(v, kind, 0.45, &basis), b));
        double worst = 0.0, scale = sup_norm(right) + 1.0;
        for (std::size_t i = 0; i < grid->size(); ++i)
            worst = std::max(worst, std::abs(left.values[i] - right.values[i]));
        CHECK(worst / scale <= 1e-10);
    }
}

TEST_CASE("fractional Sobolev norms") {
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 256);
    auto basis = build_eigenbasis(dom, grid, 64);

    CHECK(frac_sobolev_norm(basis_function(basis, 1), OperatorKind::spectral, 0.5, &basis) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(frac_sobolev_norm(basis_function(basis, 2), OperatorKind::spectral, 0.5, &basis) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    auto f = basis_function(basis, 3);
    CHECK(frac_sobolev_norm(f, OperatorKind::spectral, 0.0, &basis) ==
          doctest::Approx(l2_norm(f)).epsilon(1e-10));
    CHECK_THROWS(frac_sobolev_norm(f, OperatorKind::restricted, 0.5));

    // fourier kind at beta = 0 reproduces the L2 norm of the zero-extension
    auto dom2 = Domain::interval(-1.0, 1.0);
    auto grid2 = build_grid(dom2, 256);
    auto g = sample(grid2, [&](Point p) { return interior_bump(dom2, p); });
    CHECK(frac_sobolev_norm(g, OperatorKind::fourier, 0.0) == doctest::Approx(l2_norm(g)).epsilon(1e-12));

    // fourier kind consistency: ||(-D)^{b/2} g||^2 == <(-D)^b g, g>, exact on
    // the shared frequency lattice
    const double beta = 0.6;
    const double nsq = std::pow(frac_sobolev_norm(g, OperatorKind::fourier, beta), 2);
    auto op = fourier_frac_laplacian(g, beta, 8);
    CHECK(nsq == doctest::Approx(inner_product(op, g)).epsilon(1e-12));
}

TEST_CASE("sup and weighted norms") {
    auto dom = Domain::interval(0.0, pi);
    auto grid = build_grid(dom, 512);
    auto basis = build_eigenbasis(dom, grid, 16);
    CHECK(sup_norm(basis_function(basis, 1)) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-5));

    GridFunction zero(grid);
    CHECK(weighted_l1_norm(zero, dom, 0.3) == 0.0);
    CHECK(weighted_l2_norm(zero, dom, 0.3) == 0.0);
    CHECK_THROWS(weighted_l1_norm(zero, dom, 1.5));
}

TEST_CASE("gagliardo seminorm basics") {
    auto dom = Domain::interval(-1.0, 1.0);
    auto grid = build_grid(dom, 256);
    GridFunction zero(grid);
    CHECK(gagliardo_seminorm(zero, 0.3, 2, GagliardoRegion::omega_omega) == 0.0);
    CHECK_THROWS(gagliardo_seminorm(zero, 0.3, 3, GagliardoRegion::omega_omega));

    // refinement stability: < 1% change between n and 2n for a fixed bump
    auto gx = [&](const GridPtr& g) {
        return sample(g, [&](Point p) { return interior_bump(dom, p); });
    };
    const double c1 = gagliardo_seminorm(gx(build_grid(dom, 512)), 0.3, 2, GagliardoRegion::omega_omega);
    const double c2 = gagliardo_seminorm(gx(build_grid(dom, 1024)), 0.3, 2, GagliardoRegion::omega_omega);
    CHECK(std::abs(c2 - c1) / c1 < 0.01);

    // p = 1 tail region against a direct quadrature
    auto u = gx(grid);
    const double tail = gagliardo_seminorm(u, 0.4, 1, GagliardoRegion::omega_complement);
    double direct = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i)
        direct += grid->weights[i] * std::abs(u.values[i]) *
                  exterior_tail_interval(-1.0, 1.0, grid->nodes[i].x, 0.4);
    CHECK(tail == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("2d spectral and kernel operators") {
    auto dom = Domain::rectangle(0, 1, 0, 1);
    auto grid = build_grid(dom, 48);
    auto basis = build_eigenbasis(dom, grid, 10);

    // eigen-exactness in 2d
    auto r = spectral_frac_laplacian(basis_function(basis, 1), basis, 0.5);
    const double expect = std::pow(2.0 * pi * pi, 0.5);
    CHECK(l2_norm(axpy(-expect, basis_function(basis, 1), r)) <= 1e-8 * expect);

    // tail identity in 2d
    auto u = sample(grid, [&](Point p) { return interior_bump(dom, p); });
    const double alpha = 0.3;
    auto restr = restricted_frac_laplacian(u, alpha);
    auto regio = regional_frac_laplacian(u, alpha);
    const double c = normalization_constant(2, alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double tail = exterior_tail_rectangle(dom, grid->nodes[i], alpha);
        worst = std::max(worst, std::abs(restr.values[i] - regio.values[i] - c * u.values[i] * tail));
    }
    CHECK(worst <= 1e-10);

    // cross-oracle in 2d at modest resolution
    auto four = fourier_frac_laplacian(u, alpha, 8);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const Point p = grid->nodes[i];
        if (std::abs(p.x - 0.5) > 0.4 || std::abs(p.y - 0.5) > 0.4) continue;
        const double d = restr.values[i] - four.values[i];
        num += d * d;
        den += four.values[i] * four.values[i];
    }
    CHECK(std::sqrt(num / den) < 5e-2);
}
