#pragma once

// Finite-volume solver for the degenerate state equation
//
//   div( y^{1-2 alpha} grad Z ) = F   on Omega x (0, Y_max),
//   Z = 0 laterally and at y = Y_max, Z = bottom at y = 0,
//
// in flux form: the y-face conductance between nodes y_k and y_{k+1} is the
// exact two-point resistance 1 / int y^{2 alpha - 1} dy of the power-law
// weight, so the degenerate weight is always integrated in closed form
// (never evaluated at y = 0) and the scheme is exact on the y^{2 alpha}
// boundary-layer profile the extensions carry. The x-discretization on the
// uniform cell-centered grid is the standard 3-point (5-point in 2d) stencil
// with odd-reflection Dirichlet ghosts, which the DST-II basis
// sin((i+1/2) j pi / n) diagonalizes exactly. The solve is therefore direct:
// sine transform per layer, one tridiagonal solve per mode, inverse
// transform; the reported residual is measured by applying the assembled
// physical-space stencil.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fraclab/extension.hpp"
#include "fraclab/numerics.hpp"

namespace fraclab {

namespace detail {

// DST-II basis matrix and its exact inverse weights for one axis
struct SineBasis {
    int n = 0;
    std::vector<double> S;     // S[j*n + i] = sin((i+1/2)(j+1)pi/n), modes j=0..n-1
    std::vector<double> mu;    // stencil eigenvalues 2 - 2 cos((j+1)pi/n)
    std::vector<double> norm;  // inverse-transform weights (2/n, last mode 1/n)

    explicit SineBasis(int n_) : n(n_) {
        S.resize(static_cast<std::size_t>(n) * n);
        mu.resize(static_cast<std::size_t>(n));
        norm.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const double th = (j + 1) * pi / n;
            mu[static_cast<std::size_t>(j)] = 2.0 - 2.0 * std::cos(th);
            norm[static_cast<std::size_t>(j)] = (j + 1 < n) ? 2.0 / n : 1.0 / n;
            for (int i = 0; i < n; ++i)
                S[static_cast<std::size_t>(j) * n + i] = std::sin((i + 0.5) * th);
        }
    }

    // hat[j] = sum_i v[i] S[j][i]
    void forward(const double* v, double* hat) const {
        for (int j = 0; j < n; ++j) {
            const double* row = &S[static_cast<std::size_t>(j) * n];
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += v[i] * row[i];
            hat[j] = acc;
        }
    }

    // v[i] = sum_j norm[j] hat[j] S[j][i]
    void inverse(const double* hat, double* v) const {
        for (int i = 0; i < n; ++i) v[i] = 0.0;
        for (int j = 0; j < n; ++j) {
            const double c = norm[static_cast<std::size_t>(j)] * hat[j];
            if (c == 0.0) continue;
            const double* row = &S[static_cast<std::size_t>(j) * n];
            for (int i = 0; i < n; ++i) v[i] += c * row[i];
        }
    }
};

}  // namespace detail

struct WeightedPdeResult {
    ExtensionField Z;       // full field including boundary rows
    double residual = 0.0;  // ||A Z - b|| / ||b|| against the assembled stencil
};

// RHS of the Z problem, F = -2 y^{1-2 alpha} grad U . grad V, assembled from
// formula-based gradients with the weight factor carried as the exact cell
// mean of y^{1-2 alpha} over each control volume (never a pointwise value).
inline ExtensionField cross_gradient_rhs(const SpectralExtension& U, const SpectralExtension& V,
                                         double alpha) {
    require_same_geometry(U.value, V.value, "cross_gradient_rhs");
    const YGrid& yg = U.value.ygrid;
    ExtensionField F(U.value.xgrid, yg, true);
    const std::size_t nx = F.nx();
    for (int k = 1; k < yg.K; ++k) {
        const double ylo = 0.5 * (yg.y[static_cast<std::size_t>(k) - 1] + yg.y[static_cast<std::size_t>(k)]);
        const double yhi = 0.5 * (yg.y[static_cast<std::size_t>(k)] + yg.y[static_cast<std::size_t>(k) + 1]);
        const double wmean = pow_integral(ylo, yhi, 1.0 - 2.0 * alpha) / (yhi - ylo);
        for (std::size_t i = 0; i < nx; ++i) {
            double dot = U.dx0.at(i, k) * V.dx0.at(i, k) + U.dyext.at(i, k) * V.dyext.at(i, k);
            if (U.has_dx1) dot += U.dx1.at(i, k) * V.dx1.at(i, k);
            F.at(i, k) = -2.0 * wmean * dot;
        }
    }
    return F;
}

// F holds right-hand-side samples on the same (xgrid, ygrid) geometry; its
// boundary rows are ignored. bottom supplies the y = 0 Dirichlet data.
inline WeightedPdeResult solve_weighted_pde(const ExtensionField& F, const GridFunction& bottom,
                                            double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("solve_weighted_pde: alpha in (0,1) required");
    if (bottom.grid.get() != F.xgrid.get())
        throw std::invalid_argument("solve_weighted_pde: bottom grid mismatch");
    const Grid& g = *F.xgrid;
    const bool two_d = g.kind == GridKind::rectangle_2d;
    if (!two_d && g.kind != GridKind::interval_1d)
        throw std::invalid_argument("solve_weighted_pde: interval or rectangle domains only");
    for (double v : F.v)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_weighted_pde: non-finite RHS");

    const YGrid& yg = F.ygrid;
    const int K = yg.K;
    const double a = 1.0 - 2.0 * alpha;
    const int n0 = g.n0;
    const int n1 = two_d ? g.n1 : 1;
    const std::size_t nx = g.size();
    const double cell_area = two_d ? g.h0 * g.h1 : g.h0;
    const double xc0 = two_d ? g.h1 / g.h0 : 1.0 / g.h0;  // axis-0 stencil scale
    const double xc1 = two_d ? g.h0 / g.h1 : 0.0;

    // y-face conductances (exact two-point resistances) and CV weights
    std::vector<double> t(static_cast<std::size_t>(K));     // face k+1/2 between rows k, k+1
    std::vector<double> ycv(static_cast<std::size_t>(K));   // int y^a over CV of row k (k>=1)
    std::vector<double> vol(static_cast<std::size_t>(K));   // CV height of row k
    for (int k = 0; k < K; ++k) {
        const double r = pow_integral(yg.y[static_cast<std::size_t>(k)], yg.y[static_cast<std::size_t>(k) + 1], -a);
        t[static_cast<std::size_t>(k)] = cell_area / r;
    }
    for (int k = 1; k < K; ++k) {
        const double ylo = 0.5 * (yg.y[static_cast<std::size_t>(k) - 1] + yg.y[static_cast<std::size_t>(k)]);
        const double yhi = 0.5 * (yg.y[static_cast<std::size_t>(k)] + yg.y[static_cast<std::size_t>(k) + 1]);
        ycv[static_cast<std::size_t>(k)] = pow_integral(ylo, yhi, a);
        vol[static_cast<std::size_t>(k)] = cell_area * (yhi - ylo);
    }

    // physical-space RHS, with the Dirichlet lift from the bottom data
    std::vector<double> b(static_cast<std::size_t>(K - 1) * nx);
    for (int k = 1; k < K; ++k)
        for (std::size_t i = 0; i < nx; ++i)
            b[static_cast<std::size_t>(k - 1) * nx + i] =
                -F.v[static_cast<std::size_t>(k) * nx + i] * vol[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < nx; ++i) b[i] += t[0] * bottom.values[i];
    double b_norm = 0.0;
    for (double v : b) b_norm += v * v;
    b_norm = std::sqrt(b_norm);

    detail::SineBasis basis0(n0);
    detail::SineBasis basis1(two_d ? n1 : 1);

    // forward transform of each interior layer
    std::vector<double> bh(b.size());
    parallel_for(0, static_cast<std::size_t>(K - 1), [&](std::size_t kk) {
        const double* src = &b[kk * nx];
        double* dst = &bh[kk * nx];
        if (!two_d) {
            basis0.forward(src, dst);
            return;
        }
        std::vector<double> tmp(nx), colin(static_cast<std::size_t>(n1)), colout(static_cast<std::size_t>(n1));
        for (int r = 0; r < n1; ++r)
            basis0.forward(src + static_cast<std::size_t>(r) * n0, tmp.data() + static_cast<std::size_t>(r) * n0);
        for (int c = 0; c < n0; ++c) {
            for (int r = 0; r < n1; ++r) colin[static_cast<std::size_t>(r)] = tmp[static_cast<std::size_t>(r) * n0 + c];
            basis1.forward(colin.data(), colout.data());
            for (int r = 0; r < n1; ++r) dst[static_cast<std::size_t>(r) * n0 + c] = colout[static_cast<std::size_t>(r)];
        }
    });

    // one tridiagonal solve per mode
    std::vector<double> zh(b.size());
    parallel_for(0, nx, [&](std::size_t mode) {
        const int j0 = static_cast<int>(mode % static_cast<std::size_t>(n0));
        const int j1 = two_d ? static_cast<int>(mode / static_cast<std::size_t>(n0)) : 0;
        const double mu = basis0.mu[static_cast<std::size_t>(j0)] * xc0 +
                          (two_d ? basis1.mu[static_cast<std::size_t>(j1)] * xc1 : 0.0);
        std::vector<double> lo(static_cast<std::size_t>(K - 1)), di(static_cast<std::size_t>(K - 1)),
            up(static_cast<std::size_t>(K - 1)), rhs(static_cast<std::size_t>(K - 1));
        for (int k = 1; k < K; ++k) {
            const std::size_t r = static_cast<std::size_t>(k - 1);
            lo[r] = -t[static_cast<std::size_t>(k) - 1];
            up[r] = -t[static_cast<std::size_t>(k)];
            di[r] = t[static_cast<std::size_t>(k) - 1] + t[static_cast<std::size_t>(k)] +
                    ycv[static_cast<std::size_t>(k)] * mu;
            rhs[r] = bh[r * nx + mode];
        }
        auto sol = solve_tridiagonal(lo, di, up, rhs);
        for (int k = 1; k < K; ++k) zh[static_cast<std::size_t>(k - 1) * nx + mode] = sol[static_cast<std::size_t>(k - 1)];
    });

    // inverse transform, assemble the full field
    WeightedPdeResult out;
    out.Z = ExtensionField(F.xgrid, yg, true);
    for (std::size_t i = 0; i < nx; ++i) out.Z.at(i, 0) = bottom.values[i];
    parallel_for(0, static_cast<std::size_t>(K - 1), [&](std::size_t kk) {
        const double* src = &zh[kk * nx];
        double* dst = &out.Z.v[(kk + 1) * nx];
        if (!two_d) {
            basis0.inverse(src, dst);
            return;
        }
        std::vector<double> tmp(nx), colin(static_cast<std::size_t>(n1)), colout(static_cast<std::size_t>(n1));
        for (int c = 0; c < n0; ++c) {
            for (int r = 0; r < n1; ++r) colin[static_cast<std::size_t>(r)] = src[static_cast<std::size_t>(r) * n0 + c];
            basis1.inverse(colin.data(), colout.data());
            for (int r = 0; r < n1; ++r) tmp[static_cast<std::size_t>(r) * n0 + c] = colout[static_cast<std::size_t>(r)];
        }
        for (int r = 0; r < n1; ++r)
            basis0.inverse(tmp.data() + static_cast<std::size_t>(r) * n0, dst + static_cast<std::size_t>(r) * n0);
    });

    // residual of the assembled stencil on the solution
    auto zval = [&](int i0, int i1, int k) -> double {
        // odd reflection across lateral walls
        double sgn = 1.0;
        if (i0 < 0) { i0 = 0; sgn = -sgn; }
        if (i0 >= n0) { i0 = n0 - 1; sgn = -sgn; }
        if (two_d) {
            if (i1 < 0) { i1 = 0; sgn = -sgn; }
            if (i1 >= n1) { i1 = n1 - 1; sgn = -sgn; }
        }
        return sgn * out.Z.v[static_cast<std::size_t>(k) * nx + static_cast<std::size_t>(i1) * n0 +
                             static_cast<std::size_t>(i0)];
    };
    // full-field form of the equations: boundary rows carry the data, so the
    // stencil applied to the whole field plus the volume term must vanish
    double r_norm = 0.0;
    for (int k = 1; k < K; ++k) {
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i0 = 0; i0 < n0; ++i0) {
                const double zc = zval(i0, i1, k);
                double r = t[static_cast<std::size_t>(k) - 1] * (zc - zval(i0, i1, k - 1)) +
                           t[static_cast<std::size_t>(k)] * (zc - zval(i0, i1, k + 1));
                double st = 2.0 * zc - zval(i0 - 1, i1, k) - zval(i0 + 1, i1, k);
                r += ycv[static_cast<std::size_t>(k)] * xc0 * st;
                if (two_d) {
                    st = 2.0 * zc - zval(i0, i1 - 1, k) - zval(i0, i1 + 1, k);
                    r += ycv[static_cast<std::size_t>(k)] * xc1 * st;
                }
                r += F.v[static_cast<std::size_t>(k) * nx + static_cast<std::size_t>(i1) * n0 +
                         static_cast<std::size_t>(i0)] *
                     vol[static_cast<std::size_t>(k)];
                r_norm += r * r;
            }
    }
    out.residual = (b_norm > 0.0) ? std::sqrt(r_norm) / b_norm : std::sqrt(r_norm);
    if (!(out.residual < 1e-10) && b_norm > 0.0)
        throw std::runtime_error("solve_weighted_pde: residual exceeds the 1e-10 tolerance");
    return out;
}

// ---------------------------------------------------------------------------
// Discrete integration-by-parts identity: for the solved field,
//   int int y^a grad Z . grad psi + int [lim y^a Z_y] psi(.,0) + int int F psi = 0
// with every term assembled from the scheme's own face weights. psi must
// vanish at y = Y_max; lateral walls use the same odd reflection as the
// solver.
// ---------------------------------------------------------------------------

struct EnergyIdentityReport {
    double residual = 0.0;        // worst |identity| over test fields
    double scale = 0.0;           // typical term magnitude used to normalize
    double relative = 0.0;
};

inline EnergyIdentityReport energy_identity_residual(const ExtensionField& Z,
                                                     const ExtensionField& F, double alpha,
                                                     int n_test_fields = 6) {
    require_same_geometry(Z, F, "energy_identity_residual");
    const Grid& g = *Z.xgrid;
    if (g.kind != GridKind::interval_1d)
        throw std::invalid_argument("energy_identity_residual: 1d fields only");
    const YGrid& yg = Z.ygrid;
    const int K = yg.K;
    const int n = g.n0;
    const double a = 1.0 - 2.0 * alpha;
    const double h = g.h0;

    std::vector<double> t(static_cast<std::size_t>(K)), ycv(static_cast<std::size_t>(K)),
        vol(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k)
        t[static_cast<std::size_t>(k)] =
            h / pow_integral(yg.y[static_cast<std::size_t>(k)], yg.y[static_cast<std::size_t>(k) + 1], -a);
    for (int k = 1; k < K; ++k) {
        const double ylo = 0.5 * (yg.y[static_cast<std::size_t>(k) - 1] + yg.y[static_cast<std::size_t>(k)]);
        const double yhi = 0.5 * (yg.y[static_cast<std::size_t>(k)] + yg.y[static_cast<std::size_t>(k) + 1]);
        ycv[static_cast<std::size_t>(k)] = pow_integral(ylo, yhi, a);
        vol[static_cast<std::size_t>(k)] = h * (yhi - ylo);
    }

    EnergyIdentityReport rep;
    const double L = g.domain.b0 - g.domain.a0;
    for (int tf = 0; tf < n_test_fields; ++tf) {
        // smooth deterministic test field vanishing at the top
        const int p = tf % 3 + 1;
        const double q = 1.0 + 0.5 * (tf / 3);
        ExtensionField psi(Z.xgrid, yg, true);
        for (int k = 0; k <= K; ++k) {
            const double yprof = std::pow(1.0 - yg.y[static_cast<std::size_t>(k)] / yg.y_max, q);
            for (int i = 0; i < n; ++i) {
                const double x = (g.axis0[static_cast<std::size_t>(i)] - g.domain.a0) / L;
                psi.at(static_cast<std::size_t>(i), k) = std::sin(p * pi * x) * yprof;
            }
        }

        double grad_form = 0.0, trace_term = 0.0, rhs_term = 0.0;
        // y-direction gradients over all faces
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < n; ++i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                grad_form += t[static_cast<std::size_t>(k)] * (Z.at(ii, k + 1) - Z.at(ii, k)) *
                             (psi.at(ii, k + 1) - psi.at(ii, k));
            }
        // x-direction gradients: interior faces plus wall reflections
        for (int k = 1; k < K; ++k) {
            const double c = ycv[static_cast<std::size_t>(k)] / h;
            double acc = 0.0;
            for (int i = 0; i + 1 < n; ++i)
                acc += (Z.at(static_cast<std::size_t>(i + 1), k) - Z.at(static_cast<std::size_t>(i), k)) *
                       (psi.at(static_cast<std::size_t>(i + 1), k) - psi.at(static_cast<std::size_t>(i), k));
            acc += 2.0 * Z.at(0, k) * psi.at(0, k);
            acc += 2.0 * Z.at(static_cast<std::size_t>(n - 1), k) * psi.at(static_cast<std::size_t>(n - 1), k);
            grad_form += c * acc;
        }
        // bottom term: the discrete int lim y^{1-2a} Z_y psi(.,0) dx pairing
        for (int i = 0; i < n; ++i) {
            const std::size_t ii = static_cast<std::size_t>(i);
            trace_term += t[0] * (Z.at(ii, 1) - Z.at(ii, 0)) * psi.at(ii, 0);
        }
        // volume term
        for (int k = 1; k < K; ++k)
            for (int i = 0; i < n; ++i)
                rhs_term += F.at(static_cast<std::size_t>(i), k) * vol[static_cast<std::size_t>(k)] *
                            psi.at(static_cast<std::size_t>(i), k);

        const double resid = std::abs(grad_form + trace_term + rhs_term);
        const double scale = std::abs(grad_form) + std::abs(trace_term) + std::abs(rhs_term);
        if (resid > rep.residual) {
            rep.residual = resid;
            rep.scale = scale;
        }
    }
    rep.relative = rep.residual / (rep.scale > 0.0 ? rep.scale : 1.0);
    return rep;
}

// ---------------------------------------------------------------------------
// Trace relation lim y^{-2a} Z = (1/2a) lim y^{1-2a} Z_y, checked node-wise by
// comparing two independent fits of the leading coefficient of Z ~ c y^{2a}.
// Both fits are exact for pure powers on arbitrary graded grids.
// ---------------------------------------------------------------------------

struct TraceRelationReport {
    double max_rel_deviation = 0.0;
    int nodes_checked = 0;
    int nodes_skipped = 0;  // |Z| below threshold
};

inline TraceRelationReport trace_relation_check(const ExtensionField& Z, double alpha, int m = 6,
                                                double z_threshold = 1e-6) {
    const YGrid& yg = Z.ygrid;
    if (yg.K < m + 1) throw std::invalid_argument("trace_relation_check: not enough layers");
    const std::size_t nx = Z.nx();
    const double a = 1.0 - 2.0 * alpha;

    // value fit: c1 = sum Z y^{2a} / sum y^{4a}
    std::vector<double> w2a(static_cast<std::size_t>(m));
    double denom = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double t = std::pow(yg.y[static_cast<std::size_t>(k)], 2.0 * alpha);
        w2a[static_cast<std::size_t>(k - 1)] = t;
        denom += t * t;
    }
    // flux side: (Delta Z)/R_k with the exact two-point resistance estimates
    // lim y^{1-2a} Z_y at face k (exactly 2a c for the pure power c y^{2a})
    std::vector<double> resist(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        resist[static_cast<std::size_t>(k)] =
            pow_integral(yg.y[static_cast<std::size_t>(k)], yg.y[static_cast<std::size_t>(k) + 1], -a);

    TraceRelationReport rep;
    for (std::size_t i = 0; i < nx; ++i) {
        double zmax = 0.0;
        for (int k = 1; k <= m; ++k) zmax = std::max(zmax, std::abs(Z.at(i, k)));
        if (zmax <= z_threshold) {
            ++rep.nodes_skipped;
            continue;
        }
        double num = 0.0;
        for (int k = 1; k <= m; ++k) num += Z.at(i, k) * w2a[static_cast<std::size_t>(k - 1)];
        const double c_value = num / denom;  // lim y^{-2a} Z
        double c_flux = 0.0;
        for (int k = 0; k < m; ++k)
            c_flux += (Z.at(i, k + 1) - Z.at(i, k)) / resist[static_cast<std::size_t>(k)];
        // (1/2a) lim y^{1-2a} Z_y expressed as the same leading coefficient
        c_flux /= m * 2.0 * alpha;
        const double dev = std::abs(c_value - c_flux) / std::max(std::abs(c_value), std::abs(c_flux));
        rep.max_rel_deviation = std::max(rep.max_rel_deviation, dev);
        ++rep.nodes_checked;
    }
    return rep;
}

}  // namespace fraclab
