#pragma once

// Small numerical toolbox shared by all modules: Gauss-Legendre rules,
// exact power-law integrals, finite differences on uniform grids, a
// radix-2 FFT, a Thomas solver, a deterministic RNG and a chunked
// parallel-for that keeps results bit-reproducible.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fraclab {

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

struct GaussRule {
    std::vector<double> nodes;    // on (-1,1)
    std::vector<double> weights;
};

// Newton iteration on Legendre polynomials; deterministic to the last bit.
inline GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

// integral of f over [a,b] with an n-point rule
template <class F>
double gauss_integrate(const GaussRule& g, double a, double b, F&& f) {
    const double c = 0.5 * (a + b), s = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        acc += g.weights[i] * f(c + s * g.nodes[i]);
    return acc * s;
}

// ---------------------------------------------------------------------------
// Exact power-law integrals (the degenerate y-weights are always integrated,
// never sampled at y = 0)
// ---------------------------------------------------------------------------

// integral of y^a over [y1, y2], 0 <= y1 < y2, a > -1 allowed down to y1 = 0
inline double pow_integral(double y1, double y2, double a) {
    if (y2 < y1) throw std::invalid_argument("pow_integral: y2 < y1");
    if (y1 < 0.0) throw std::invalid_argument("pow_integral: negative bound");
    if (std::abs(a + 1.0) < 1e-14) {
        if (y1 <= 0.0) throw std::domain_error("pow_integral: log divergence at 0");
        return std::log(y2 / y1);
    }
    if (y1 <= 0.0 && a <= -1.0)
        throw std::domain_error("pow_integral: non-integrable weight at 0");
    const double e = a + 1.0;
    const double t2 = std::pow(y2, e);
    const double t1 = (y1 <= 0.0) ? 0.0 : std::pow(y1, e);
    return (t2 - t1) / e;
}

// ---------------------------------------------------------------------------
// Finite differences on uniform grids (4th order, one-sided at edges)
// ---------------------------------------------------------------------------

inline std::vector<double> fd_derivative(const std::vector<double>& u, double h) {
    const int n = static_cast<int>(u.size());
    if (n < 6) throw std::invalid_argument("fd_derivative: need at least 6 samples");
    std::vector<double> d(n);
    for (int i = 2; i < n - 2; ++i)
        d[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
    auto one_sided = [&](int i, int s) {
        // 4th-order biased stencil, s = +1 forward / -1 backward
        return s * (-25.0 * u[i] + 48.0 * u[i + s] - 36.0 * u[i + 2 * s] + 16.0 * u[i + 3 * s] - 3.0 * u[i + 4 * s]) / (12.0 * h);
    };
    d[0] = one_sided(0, +1);
    d[1] = one_sided(1, +1);
    d[n - 2] = one_sided(n - 2, -1);
    d[n - 1] = one_sided(n - 1, -1);
    return d;
}

inline std::vector<double> fd_second_derivative(const std::vector<double>& u, double h) {
    const int n = static_cast<int>(u.size());
    if (n < 6) throw std::invalid_argument("fd_second_derivative: need at least 6 samples");
    std::vector<double> d(n);
    const double h2 = h * h;
    for (int i = 2; i < n - 2; ++i)
        d[i] = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h2);
    auto one_sided = [&](int i, int s) {
        return (45.0 * u[i] - 154.0 * u[i + s] + 214.0 * u[i + 2 * s] - 156.0 * u[i + 3 * s] + 61.0 * u[i + 4 * s] - 10.0 * u[i + 5 * s]) / (12.0 * h2);
    };
    d[0] = one_sided(0, +1);
    d[1] = one_sided(1, +1);
    d[n - 2] = one_sided(n - 2, -1);
    d[n - 1] = one_sided(n - 1, -1);
    return d;
}

// ---------------------------------------------------------------------------
// FFT (iterative radix-2, power-of-two lengths only; callers zero-pad)
// ---------------------------------------------------------------------------

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_inplace: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

// signed frequency index for bin k of an N-point DFT
inline long fft_freq_index(std::size_t k, std::size_t n) {
    return (k <= n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

// ---------------------------------------------------------------------------
// Tridiagonal (Thomas) solver
// ---------------------------------------------------------------------------

// solves lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i]
inline std::vector<double> solve_tridiagonal(std::vector<double> lower,
                                             std::vector<double> diag,
                                             std::vector<double> upper,
                                             std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64; std:: distributions are not portable)
// ---------------------------------------------------------------------------

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    // uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

  private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Deterministic parallel helpers. Each index is written by exactly one task
// and reductions combine fixed-order chunk partials, so results do not depend
// on thread scheduling.
// ---------------------------------------------------------------------------

inline int worker_count() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class F>
void parallel_for(std::size_t begin, std::size_t end, F&& body, int workers = 0) {
    if (end <= begin) return;
    const std::size_t count = end - begin;
    int w = workers > 0 ? workers : worker_count();
    if (w > static_cast<int>(count)) w = static_cast<int>(count);
    if (w <= 1) {
        for (std::size_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    const std::size_t chunk = (count + w - 1) / w;
    for (int t = 0; t < w; ++t) {
        const std::size_t lo = begin + chunk * static_cast<std::size_t>(t);
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body]() {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// chunked sum with fixed combination order (independent of thread timing)
template <class F>
double parallel_sum(std::size_t begin, std::size_t end, F&& term, int workers = 0) {
    if (end <= begin) return 0.0;
    const std::size_t count = end - begin;
    int w = workers > 0 ? workers : worker_count();
    if (w > static_cast<int>(count)) w = static_cast<int>(count);
    if (w <= 1) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    std::vector<double> partial(static_cast<std::size_t>(w), 0.0);
    std::vector<std::thread> pool;
    pool.reserve(w);
    const std::size_t chunk = (count + w - 1) / w;
    for (int t = 0; t < w; ++t) {
        const std::size_t lo = begin + chunk * static_cast<std::size_t>(t);
        const std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, t, &partial, &term]() {
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += term(i);
            partial[static_cast<std::size_t>(t)] = acc;
        });
    }
    for (auto& th : pool) th.join();
    double acc = 0.0;
    for (double p : partial) acc += p;
    return acc;
}

// ---------------------------------------------------------------------------
// Least squares on (x, y) samples: y ~ slope * x + intercept, plus r^2
// ---------------------------------------------------------------------------

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 paired samples");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    if (sxx <= 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = (syy <= 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace fraclab
