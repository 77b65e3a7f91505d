#pragma once

// Test-function corpora: smooth interior bumps, deterministic trigonometric
// samples, and the boundary-layer cutoff family used by the appendix
// computations.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fraclab/domain.hpp"
#include "fraclab/numerics.hpp"

namespace fraclab {

// septic smoothstep: 0 below 0, 1 above 1, C^3 at both seams
inline double septic_ramp(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double t2 = t * t;
    return t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t);
}

// quintic smoothstep: C^2, max slope 15/8
inline double quintic_smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

inline double quintic_smoothstep_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double u = t * (1.0 - t);
    return 30.0 * u * u;
}

// Interior bump: identically 0 within 5% of each wall, identically 1 beyond
// 20%, septic ramps between. Multiplying by it makes any sample vanish near
// the boundary with small derivatives.
inline double interior_bump_1d(double x, double a, double b) {
    const double L = b - a;
    const double m0 = 0.05 * L, mw = 0.15 * L;
    return septic_ramp((x - a - m0) / mw) * septic_ramp((b - x - m0) / mw);
}

inline double interior_bump(const Domain& dom, Point p) {
    switch (dom.kind) {
        case DomainKind::interval: return interior_bump_1d(p.x, dom.a0, dom.b0);
        case DomainKind::rectangle:
            return interior_bump_1d(p.x, dom.a0, dom.b0) * interior_bump_1d(p.y, dom.a1, dom.b1);
        case DomainKind::ball: {
            if (dom.dim == 1) return interior_bump_1d(p.x, dom.a0, dom.b0);
            const double dx = p.x - dom.center.x, dy = p.y - dom.center.y;
            const double r = std::sqrt(dx * dx + dy * dy) / dom.radius;
            return septic_ramp((0.95 - r) / 0.15);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Cutoff family u_eps on the unit ball: 1 on B_{1-2eps}, 0 outside B_{1-eps},
// quintic smoothstep on the transition annulus. The gradient is bounded by
// (15/8)/eps, within the 4/eps contract.
// ---------------------------------------------------------------------------

struct CutoffFamily {
    double epsilon;

    explicit CutoffFamily(double eps) : epsilon(eps) {
        if (!(eps > 0.0 && eps < 0.1))
            throw std::invalid_argument("CutoffFamily: eps must lie in (0, 1/10)");
    }

    // radial profile as a function of |x|
    double value(double r) const {
        const double t = (1.0 - epsilon - std::abs(r)) / epsilon;
        return quintic_smoothstep(t);
    }

    // d/dr of the profile (non-positive for r > 0)
    double radial_derivative(double r) const {
        const double t = (1.0 - epsilon - std::abs(r)) / epsilon;
        const double s = quintic_smoothstep_deriv(t) / epsilon;
        return r >= 0.0 ? -s : s;
    }

    double gradient_bound() const { return 4.0 / epsilon; }
};

inline GridFunction build_cutoff(double eps, const GridPtr& grid) {
    CutoffFamily fam(eps);
    const Point c = grid->domain.kind == DomainKind::ball ? grid->domain.center : Point{};
    GridFunction u(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double dx = grid->nodes[i].x - c.x, dy = grid->nodes[i].y - c.y;
        u.values[i] = fam.value(std::sqrt(dx * dx + dy * dy));
    }
    return u;
}

// ---------------------------------------------------------------------------
// Corpus of (g, h) pairs. Three fixed canonical pairs, then deterministic
// pseudo-random trigonometric polynomials multiplied by the interior bump.
// ---------------------------------------------------------------------------

namespace detail {

inline double trig_sample(const Domain& dom, Point p, const std::vector<double>& cs,
                          const std::vector<double>& cy) {
    // Dirichlet-compatible sine polynomial, modes 1..cs.size()
    double v = 0.0;
    const double L0 = dom.b0 - dom.a0;
    for (std::size_t k = 0; k < cs.size(); ++k)
        v += cs[k] * std::sin((k + 1) * pi * (p.x - dom.a0) / L0);
    if (dom.dim == 2 && dom.kind == DomainKind::rectangle) {
        const double L1 = dom.b1 - dom.a1;
        double vy = 0.0;
        for (std::size_t k = 0; k < cy.size(); ++k)
            vy += cy[k] * std::sin((k + 1) * pi * (p.y - dom.a1) / L1);
        v *= vy;
    }
    return v;
}

}  // namespace detail

// Deterministic corpus. Every member vanishes identically within 5% of the
// boundary and has sup norm well below 10.
inline std::vector<std::pair<GridFunction, GridFunction>> make_corpus(const Domain& dom,
                                                                      const GridPtr& grid,
                                                                      int count,
                                                                      std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("make_corpus: count >= 1 required");
    std::vector<std::pair<GridFunction, GridFunction>> corpus;
    corpus.reserve(static_cast<std::size_t>(count));

    auto bump = sample(grid, [&](Point p) { return interior_bump(dom, p); });
    const double L0 = dom.b0 - dom.a0;

    // canonical pair 1: eigenfunction x eigenfunction (bump-masked)
    auto eig = [&](int j, Point p) {
        double v = std::sin(j * pi * (p.x - dom.a0) / L0);
        if (dom.dim == 2 && dom.kind == DomainKind::rectangle)
            v *= std::sin(j * pi * (p.y - dom.a1) / (dom.b1 - dom.a1));
        return v;
    };
    {
        auto g = sample(grid, [&](Point p) { return eig(1, p); });
        auto h = sample(grid, [&](Point p) { return eig(2, p); });
        corpus.emplace_back(pointwise_product(g, bump), pointwise_product(h, bump));
    }
    // canonical pair 2: bump x bump
    if (count >= 2) corpus.emplace_back(bump, bump);
    // canonical pair 3: bump x oscillatory
    if (count >= 3) {
        auto osc = sample(grid, [&](Point p) { return eig(5, p); });
        corpus.emplace_back(bump, pointwise_product(osc, bump));
    }

    Rng rng(seed);
    const int modes = 6;
    while (static_cast<int>(corpus.size()) < count) {
        auto draw = [&]() {
            std::vector<double> cs(modes), cy(modes);
            for (int k = 0; k < modes; ++k) cs[k] = rng.uniform(-1.0, 1.0) / ((k + 1) * (k + 1));
            for (int k = 0; k < modes; ++k) cy[k] = rng.uniform(-1.0, 1.0) / ((k + 1) * (k + 1));
            GridFunction f(grid);
            for (std::size_t i = 0; i < grid->size(); ++i)
                f.values[i] = detail::trig_sample(dom, grid->nodes[i], cs, cy) * bump.values[i];
            return f;
        };
        auto g = draw();
        auto h = draw();
        corpus.emplace_back(std::move(g), std::move(h));
    }
    return corpus;
}

}  // namespace fraclab
