#pragma once

// The extension profile theta_alpha(lambda, y): the subordination integral
//
//   theta = y^{2a}/(4^a Gamma(a)) int_0^inf e^{-y^2/4t} e^{-lambda t} t^{-1-a} dt
//
// evaluated by trapezoid quadrature in log t. theta(lambda, 0) = 1 and the
// one-mode extension of phi_j is phi_j(x) theta(lambda_j, y). The t-interval
// defaults to [1e-8/lambda, 50/lambda] but the lower endpoint is pulled down
// to y^2/240 when the Gaussian factor concentrates below it (graded meshes
// reach y ~ 1e-9 where the fixed window would miss the peak); both endpoints
// are decay-checked and failing the check raises an accuracy error.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fraclab/numerics.hpp"

namespace fraclab {

// Dirichlet-to-Neumann normalization of the extension:
//   -lim y^{1-2a} d_y [theta(lambda, y)] = d_a * lambda^a,
// d_a = 2^{1-2a} Gamma(1-a)/Gamma(a). Equals 1 at a = 1/2.
inline double extension_trace_normalization(double alpha) {
    return std::pow(2.0, 1.0 - 2.0 * alpha) * std::tgamma(1.0 - alpha) / std::tgamma(alpha);
}

struct ThetaAccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct ThetaLogGrid {
    std::vector<double> t;
    std::vector<double> w;  // trapezoid weights in log-space, times t (measure)

    ThetaLogGrid(double t_lo, double t_hi, int per_decade) {
        const double s_lo = std::log(t_lo), s_hi = std::log(t_hi);
        const double decades = (s_hi - s_lo) / std::log(10.0);
        const int n = std::max(64, static_cast<int>(decades * per_decade) + 1);
        t.resize(static_cast<std::size_t>(n));
        w.resize(static_cast<std::size_t>(n));
        const double ds = (s_hi - s_lo) / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double ti = std::exp(s_lo + i * ds);
            t[static_cast<std::size_t>(i)] = ti;
            w[static_cast<std::size_t>(i)] = ds * ti * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
        }
    }
};

}  // namespace detail

struct ThetaResult {
    double value;
    double dvalue_dy;
};

// theta and its y-derivative in one pass
inline ThetaResult theta_kernel_with_derivative(double lambda, double y, double alpha,
                                                int per_decade = 48) {
    if (!(lambda > 0.0)) throw std::invalid_argument("theta_kernel: lambda > 0 required");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("theta_kernel: alpha in (0,1) required");
    if (y < 0.0) throw std::invalid_argument("theta_kernel: y >= 0 required");
    if (y == 0.0) return {1.0, 0.0};  // normalization of the subordination formula

    const double t_lo = std::min(1e-8 / lambda, y * y / 240.0);
    const double t_hi = 50.0 / lambda;
    detail::ThetaLogGrid grid(t_lo, t_hi, per_decade);

    const double y2q = 0.25 * y * y;
    double acc = 0.0, acc_dy = 0.0, peak = 0.0;
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < grid.t.size(); ++i) {
        const double t = grid.t[i];
        const double f = std::exp(-y2q / t - lambda * t) * std::pow(t, -1.0 - alpha);
        const double fw = f * grid.w[i];
        acc += fw;
        acc_dy += fw * (-0.5 * y / t);
        peak = std::max(peak, f * t);
        if (i == 0) first = f * t;
        if (i + 1 == grid.t.size()) last = f * t;
    }
    if (peak > 0.0 && (first > 1e-13 * peak || last > 1e-13 * peak))
        throw ThetaAccuracyError("theta_kernel: integrand has not decayed at the quadrature endpoints");

    const double pref = std::pow(y, 2.0 * alpha) / (std::pow(4.0, alpha) * std::tgamma(alpha));
    const double value = pref * acc;
    const double dvalue = (2.0 * alpha / y) * value + pref * acc_dy;
    return {value, dvalue};
}

inline double theta_kernel(double lambda, double y, double alpha, int per_decade = 48) {
    return theta_kernel_with_derivative(lambda, y, alpha, per_decade).value;
}

// Table of theta (and optionally theta_y) for a set of eigenvalues over a
// y-grid; entry (j, k) at index j*(K+1)+k. Row k = 0 is the exact boundary
// value theta = 1; theta_y is stored as 0 there and never used by callers.
struct ThetaTable {
    int J = 0;
    int rows = 0;  // K+1
    std::vector<double> theta;
    std::vector<double> theta_y;
    bool has_dy = false;

    double at(int j, int k) const { return theta[static_cast<std::size_t>(j) * rows + k]; }
    double dy_at(int j, int k) const { return theta_y[static_cast<std::size_t>(j) * rows + k]; }
};

inline ThetaTable make_theta_table(const std::vector<double>& lambdas,
                                   const std::vector<double>& ys, double alpha, bool with_dy,
                                   int per_decade = 48) {
    ThetaTable tab;
    tab.J = static_cast<int>(lambdas.size());
    tab.rows = static_cast<int>(ys.size());
    tab.theta.assign(static_cast<std::size_t>(tab.J) * tab.rows, 0.0);
    tab.theta_y.assign(with_dy ? tab.theta.size() : 0, 0.0);
    tab.has_dy = with_dy;

    // smallest positive y decides the shared lower t-bound per lambda
    double y_min_pos = 0.0;
    for (double y : ys)
        if (y > 0.0 && (y_min_pos == 0.0 || y < y_min_pos)) y_min_pos = y;

    parallel_for(0, lambdas.size(), [&](std::size_t j) {
        const double lambda = lambdas[j];
        const double t_lo = std::min(1e-8 / lambda, y_min_pos * y_min_pos / 240.0);
        const double t_hi = 50.0 / lambda;
        detail::ThetaLogGrid grid(t_lo, t_hi, per_decade);
        const std::size_t nt = grid.t.size();
        std::vector<double> base(nt);
        for (std::size_t i = 0; i < nt; ++i)
            base[i] = std::exp(-lambda * grid.t[i]) * std::pow(grid.t[i], -1.0 - alpha) * grid.w[i];
        const double pref0 = 1.0 / (std::pow(4.0, alpha) * std::tgamma(alpha));
        for (std::size_t k = 0; k < ys.size(); ++k) {
            const double y = ys[k];
            const std::size_t idx = j * static_cast<std::size_t>(tab.rows) + k;
            if (y == 0.0) {
                tab.theta[idx] = 1.0;
                continue;
            }
            const double y2q = 0.25 * y * y;
            double acc = 0.0, acc_dy = 0.0;
            for (std::size_t i = 0; i < nt; ++i) {
                const double e = std::exp(-y2q / grid.t[i]) * base[i];
                acc += e;
                if (with_dy) acc_dy += e * (-0.5 * y / grid.t[i]);
            }
            const double pref = pref0 * std::pow(y, 2.0 * alpha);
            tab.theta[idx] = pref * acc;
            if (with_dy)
                tab.theta_y[idx] = (2.0 * alpha / y) * tab.theta[idx] + pref * acc_dy;
        }
    });
    return tab;
}

}  // namespace fraclab
