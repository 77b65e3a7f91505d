#pragma once

// Geometry and grids: bounded intervals, rectangles and balls (d = 1, 2),
// midpoint-cell quadrature grids and grid-sampled functions.
//
// Grids are cell-centered. On an interval the nodes are the midpoints
// x_i = a + (i + 1/2) h, which gives two properties the rest of the code
// leans on: the quadrature weights sum to |Omega| exactly, and sampled
// Dirichlet sine modes are orthogonal to machine precision (they are the
// eigenvectors of the discrete cell-centered Dirichlet Laplacian).

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclab/numerics.hpp"

namespace fraclab {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class DomainKind { interval, rectangle, ball };

struct Domain {
    DomainKind kind = DomainKind::interval;
    int dim = 1;
    // interval / rectangle bounds per axis (axis 1 unused in 1d)
    double a0 = 0.0, b0 = 1.0;
    double a1 = 0.0, b1 = 1.0;
    // ball parameters
    Point center{};
    double radius = 1.0;

    static Domain interval(double a, double b) {
        if (!(a < b)) throw std::invalid_argument("Domain::interval: a < b required");
        Domain d;
        d.kind = DomainKind::interval;
        d.dim = 1;
        d.a0 = a;
        d.b0 = b;
        return d;
    }

    static Domain rectangle(double ax, double bx, double ay, double by) {
        if (!(ax < bx) || !(ay < by))
            throw std::invalid_argument("Domain::rectangle: a < b required per axis");
        Domain d;
        d.kind = DomainKind::rectangle;
        d.dim = 2;
        d.a0 = ax;
        d.b0 = bx;
        d.a1 = ay;
        d.b1 = by;
        return d;
    }

    static Domain ball(Point center, double radius, int dim) {
        if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius > 0 required");
        if (dim != 1 && dim != 2) throw std::invalid_argument("Domain::ball: dim must be 1 or 2");
        Domain d;
        d.kind = DomainKind::ball;
        d.dim = dim;
        d.center = center;
        d.radius = radius;
        if (dim == 1) {
            d.a0 = center.x - radius;
            d.b0 = center.x + radius;
        }
        return d;
    }

    double measure() const {
        switch (kind) {
            case DomainKind::interval: return b0 - a0;
            case DomainKind::rectangle: return (b0 - a0) * (b1 - a1);
            case DomainKind::ball: return dim == 1 ? 2.0 * radius : pi * radius * radius;
        }
        return 0.0;
    }

    bool contains(Point p) const {
        switch (kind) {
            case DomainKind::interval: return p.x > a0 && p.x < b0;
            case DomainKind::rectangle: return p.x > a0 && p.x < b0 && p.y > a1 && p.y < b1;
            case DomainKind::ball: {
                if (dim == 1) return p.x > a0 && p.x < b0;
                const double dx = p.x - center.x, dy = p.y - center.y;
                return dx * dx + dy * dy < radius * radius;
            }
        }
        return false;
    }
};

inline double dist_to_boundary(const Domain& dom, Point p) {
    if (!dom.contains(p)) throw std::invalid_argument("dist_to_boundary: point outside domain");
    switch (dom.kind) {
        case DomainKind::interval: return std::min(p.x - dom.a0, dom.b0 - p.x);
        case DomainKind::rectangle:
            return std::min(std::min(p.x - dom.a0, dom.b0 - p.x),
                            std::min(p.y - dom.a1, dom.b1 - p.y));
        case DomainKind::ball: {
            if (dom.dim == 1) return std::min(p.x - dom.a0, dom.b0 - p.x);
            const double dx = p.x - dom.center.x, dy = p.y - dom.center.y;
            return dom.radius - std::sqrt(dx * dx + dy * dy);
        }
    }
    return 0.0;
}

enum class GridKind { interval_1d, rectangle_2d, polar_ball_2d };

// Cell-centered quadrature grid. For tensor grids axis0/axis1 hold the cell
// centers per axis and nodes are enumerated axis0-fastest.
struct Grid {
    Domain domain;
    GridKind kind = GridKind::interval_1d;
    bool includes_boundary = false;  // midpoint construction: always interior
    int n0 = 0, n1 = 0;              // cells per axis (radial/angular for polar)
    double h0 = 0.0, h1 = 0.0;       // spacing per axis
    std::vector<double> axis0;       // cell centers, axis 0
    std::vector<double> axis1;       // cell centers, axis 1 (2d only)
    std::vector<Point> nodes;        // flattened node list
    std::vector<double> weights;     // quadrature weights, same length

    std::size_t size() const { return nodes.size(); }

    double spacing() const { return h0; }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr build_grid(const Domain& dom, int n_per_axis) {
    if (n_per_axis < 8)
        throw std::invalid_argument("build_grid: n_per_axis >= 8 required (insufficient resolution)");
    auto g = std::make_shared<Grid>();
    g->domain = dom;
    const int n = n_per_axis;
    if (dom.kind == DomainKind::interval || (dom.kind == DomainKind::ball && dom.dim == 1)) {
        g->kind = GridKind::interval_1d;
        g->n0 = n;
        g->h0 = (dom.b0 - dom.a0) / n;
        g->axis0.resize(n);
        g->nodes.resize(n);
        g->weights.assign(n, g->h0);
        for (int i = 0; i < n; ++i) {
            g->axis0[i] = dom.a0 + (i + 0.5) * g->h0;
            g->nodes[i] = {g->axis0[i], 0.0};
        }
    } else if (dom.kind == DomainKind::rectangle) {
        g->kind = GridKind::rectangle_2d;
        g->n0 = n;
        g->n1 = n;
        g->h0 = (dom.b0 - dom.a0) / n;
        g->h1 = (dom.b1 - dom.a1) / n;
        g->axis0.resize(n);
        g->axis1.resize(n);
        for (int i = 0; i < n; ++i) {
            g->axis0[i] = dom.a0 + (i + 0.5) * g->h0;
            g->axis1[i] = dom.a1 + (i + 0.5) * g->h1;
        }
        g->nodes.resize(static_cast<std::size_t>(n) * n);
        g->weights.assign(static_cast<std::size_t>(n) * n, g->h0 * g->h1);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                g->nodes[static_cast<std::size_t>(j) * n + i] = {g->axis0[i], g->axis1[j]};
    } else {
        // 2d ball: polar cells with exact areas so the weights sum to pi r^2
        g->kind = GridKind::polar_ball_2d;
        g->n0 = n;           // radial
        g->n1 = 4 * n;       // angular
        const double dr = dom.radius / n;
        const double dth = 2.0 * pi / g->n1;
        g->h0 = dr;
        g->h1 = dth;
        g->nodes.reserve(static_cast<std::size_t>(g->n0) * g->n1);
        g->weights.reserve(static_cast<std::size_t>(g->n0) * g->n1);
        for (int i = 0; i < g->n0; ++i) {
            const double r0 = i * dr, r1 = (i + 1) * dr;
            const double rc = std::sqrt(0.5 * (r0 * r0 + r1 * r1));  // area centroid radius
            const double area = 0.5 * (r1 * r1 - r0 * r0) * dth;
            for (int j = 0; j < g->n1; ++j) {
                const double th = (j + 0.5) * dth;
                g->nodes.push_back({dom.center.x + rc * std::cos(th), dom.center.y + rc * std::sin(th)});
                g->weights.push_back(area);
            }
        }
    }
    return g;
}

// Real-valued function sampled on a grid.
struct GridFunction {
    GridPtr grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
    GridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid->size())
            throw std::invalid_argument("GridFunction: value count does not match grid");
    }

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

template <class F>
GridFunction sample(const GridPtr& g, F&& f) {
    GridFunction u(g);
    for (std::size_t i = 0; i < g->size(); ++i) u.values[i] = f(g->nodes[i]);
    return u;
}

inline void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (a.grid.get() != b.grid.get())
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

inline double integrate(const GridFunction& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u.grid->weights[i] * u.values[i];
    return acc;
}

inline double inner_product(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "inner_product");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.grid->weights[i] * a.values[i] * b.values[i];
    return acc;
}

inline double l2_norm(const GridFunction& u) {
    return std::sqrt(inner_product(u, u));
}

inline GridFunction axpy(double s, const GridFunction& x, const GridFunction& y) {
    require_same_grid(x, y, "axpy");
    GridFunction r(x.grid);
    for (std::size_t i = 0; i < x.size(); ++i) r.values[i] = s * x.values[i] + y.values[i];
    return r;
}

inline GridFunction scaled(const GridFunction& x, double s) {
    GridFunction r(x.grid);
    for (std::size_t i = 0; i < x.size(); ++i) r.values[i] = s * x.values[i];
    return r;
}

inline GridFunction pointwise_product(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "pointwise_product");
    GridFunction r(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) r.values[i] = a.values[i] * b.values[i];
    return r;
}

}  // namespace fraclab
