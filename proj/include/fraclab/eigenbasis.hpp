#pragma once

// Dirichlet eigenpairs on intervals and rectangles (closed forms), spectral
// projection and synthesis.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "fraclab/domain.hpp"

namespace fraclab {

struct EigenBasis {
    GridPtr grid;
    int J = 0;
    std::vector<double> lambdas;             // increasing
    std::vector<std::vector<double>> phis;   // J node-sampled eigenfunctions, L2-orthonormal
    // analytic x-gradients, used by the extension energies
    std::vector<std::vector<double>> phi_dx;
    std::vector<std::vector<double>> phi_dy;  // empty in 1d
};

inline EigenBasis build_eigenbasis(const Domain& dom, const GridPtr& grid, int J) {
    if (J < 1) throw std::invalid_argument("build_eigenbasis: J >= 1 required");
    if (dom.kind == DomainKind::ball)
        throw std::invalid_argument("build_eigenbasis: ball domains have no closed-form basis (unsupported)");
    EigenBasis basis;
    basis.grid = grid;
    basis.J = J;
    if (dom.kind == DomainKind::interval) {
        const double L = dom.b0 - dom.a0;
        const double amp = std::sqrt(2.0 / L);
        basis.lambdas.resize(J);
        basis.phis.resize(J);
        basis.phi_dx.resize(J);
        for (int j = 1; j <= J; ++j) {
            const double k = j * pi / L;
            basis.lambdas[j - 1] = k * k;
            auto& phi = basis.phis[j - 1];
            auto& dphi = basis.phi_dx[j - 1];
            phi.resize(grid->size());
            dphi.resize(grid->size());
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const double t = k * (grid->nodes[i].x - dom.a0);
                phi[i] = amp * std::sin(t);
                dphi[i] = amp * k * std::cos(t);
            }
        }
    } else {
        // rectangle: tensor products sorted by eigenvalue
        const double L0 = dom.b0 - dom.a0, L1 = dom.b1 - dom.a1;
        // enumerate enough index pairs to cover the first J sorted eigenvalues
        int M = 2;
        while (M * M < 4 * J) ++M;
        std::vector<std::tuple<double, int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(M) * M);
        for (int p = 1; p <= M; ++p)
            for (int q = 1; q <= M; ++q) {
                const double lam = pi * pi * (p * p / (L0 * L0) + q * q / (L1 * L1));
                pairs.emplace_back(lam, p, q);
            }
        std::sort(pairs.begin(), pairs.end());
        const double amp = 2.0 / std::sqrt(L0 * L1);
        basis.lambdas.resize(J);
        basis.phis.resize(J);
        basis.phi_dx.resize(J);
        basis.phi_dy.resize(J);
        for (int j = 0; j < J; ++j) {
            auto [lam, p, q] = pairs[static_cast<std::size_t>(j)];
            basis.lambdas[j] = lam;
            const double kx = p * pi / L0, ky = q * pi / L1;
            auto& phi = basis.phis[j];
            auto& dx = basis.phi_dx[j];
            auto& dy = basis.phi_dy[j];
            phi.resize(grid->size());
            dx.resize(grid->size());
            dy.resize(grid->size());
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const double sx = kx * (grid->nodes[i].x - dom.a0);
                const double sy = ky * (grid->nodes[i].y - dom.a1);
                phi[i] = amp * std::sin(sx) * std::sin(sy);
                dx[i] = amp * kx * std::cos(sx) * std::sin(sy);
                dy[i] = amp * ky * std::sin(sx) * std::cos(sy);
            }
        }
    }
    return basis;
}

inline GridFunction basis_function(const EigenBasis& basis, int j) {
    if (j < 1 || j > basis.J) throw std::invalid_argument("basis_function: index out of range");
    return GridFunction(basis.grid, basis.phis[static_cast<std::size_t>(j - 1)]);
}

inline std::vector<double> project(const GridFunction& f, const EigenBasis& basis) {
    if (f.grid.get() != basis.grid.get())
        throw std::invalid_argument("project: grid mismatch");
    std::vector<double> coeffs(static_cast<std::size_t>(basis.J), 0.0);
    const auto& w = f.grid->weights;
    for (int j = 0; j < basis.J; ++j) {
        const auto& phi = basis.phis[static_cast<std::size_t>(j)];
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f.values[i] * phi[i];
        coeffs[static_cast<std::size_t>(j)] = acc;
    }
    return coeffs;
}

inline GridFunction synthesize(const std::vector<double>& coeffs, const EigenBasis& basis) {
    if (static_cast<int>(coeffs.size()) > basis.J)
        throw std::invalid_argument("synthesize: more coefficients than basis functions");
    GridFunction u(basis.grid);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const double c = coeffs[j];
        if (c == 0.0) continue;
        const auto& phi = basis.phis[j];
        for (std::size_t i = 0; i < u.size(); ++i) u.values[i] += c * phi[i];
    }
    return u;
}

}  // namespace fraclab
