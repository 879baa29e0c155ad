#include "ortholap/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ortholap {

double Grid::node_dist(int ix, int iy) const {
    const int c = (n - 1) / 2;
    return h * std::hypot(double(ix - c), double(iy - c));
}

double Grid::cell_dist(int cx, int cy) const {
    const int c = (n - 1) / 2;
    return h * std::hypot(cx + 0.5 - c, cy + 0.5 - c);
}

std::array<double, 2> Grid::cell_rel(int cx, int cy) const {
    const int c = (n - 1) / 2;
    return {h * (cx + 0.5 - c), h * (cy + 0.5 - c)};
}

Grid build_grid(int n, double side, std::array<double, 2> center) {
    if (n % 2 == 0)
        throw std::invalid_argument("build_grid: n must be odd, got " + std::to_string(n));
    if (n < 9)
        throw std::invalid_argument("build_grid: n must be >= 9, got " + std::to_string(n));
    if (!(side > 0.0))
        throw std::invalid_argument("build_grid: side must be positive");
    Grid g;
    g.n = n;
    g.side = side;
    g.h = side / (n - 1);
    g.center = center;
    return g;
}

void validate_ball(const Grid& grid, const BallSpec& ball) {
    if (!(ball.radius > 0.0))
        throw std::invalid_argument("ball: radius must be positive");
    if (!(ball.radius + 2.0 * grid.h < grid.side / 2.0))
        throw std::invalid_argument("ball: radius + 2h must stay below side/2");
}

std::vector<int> ball_nodes(const Grid& grid, const BallSpec& ball) {
    validate_ball(grid, ball);
    std::vector<int> out;
    for (int iy = 0; iy < grid.n; ++iy)
        for (int ix = 0; ix < grid.n; ++ix)
            if (grid.node_dist(ix, iy) < ball.radius) out.push_back(grid.node_index(ix, iy));
    return out;
}

std::vector<int> boundary_ring(const Grid& grid, const BallSpec& ball) {
    validate_ball(grid, ball);
    const double band = grid.h * std::sqrt(2.0);
    std::vector<int> out;
    for (int iy = 0; iy < grid.n; ++iy)
        for (int ix = 0; ix < grid.n; ++ix) {
            const double d = grid.node_dist(ix, iy);
            if (d >= ball.radius - band && d <= ball.radius + band)
                out.push_back(grid.node_index(ix, iy));
        }
    if (out.empty())
        throw std::runtime_error("boundary_ring: empty ring, radius too small for this grid");
    return out;
}

namespace {

// 6t^5 - 15t^4 + 10t^3 and derivatives on [0,1].
double smoothstep(double t) { return ((6.0 * t - 15.0) * t + 10.0) * t * t * t; }
double smoothstep_d1(double t) { return 30.0 * t * t * (t - 1.0) * (t - 1.0); }
double smoothstep_d2(double t) { return ((120.0 * t - 180.0) * t + 60.0) * t; }

}  // namespace

double Cutoff::value_at(double rho) const {
    if (rho <= inner) return 1.0;
    if (rho >= outer) return 0.0;
    return smoothstep((outer - rho) / (outer - inner));
}

double Cutoff::grad_at(double rho) const {
    if (rho <= inner || rho >= outer) return 0.0;
    return smoothstep_d1((outer - rho) / (outer - inner)) / (outer - inner);
}

double Cutoff::hess_at(double rho) const {
    if (rho <= inner || rho >= outer) return 0.0;
    const double w = outer - inner;
    const double t = (outer - rho) / w;
    const double second = std::abs(smoothstep_d2(t)) / (w * w);
    // Radial profile: Hessian entries are convex mixes of xi'' and xi'/rho.
    return std::max(second, grad_at(rho) / rho);
}

Cutoff make_cutoff(const Grid& grid, double inner, double outer) {
    if (!(inner > 2.0 * grid.h))
        throw std::invalid_argument("make_cutoff: inner must exceed 2h");
    if (!(inner < outer))
        throw std::invalid_argument("make_cutoff: inner must be smaller than outer");
    if (!(outer <= grid.side / 2.0))
        throw std::invalid_argument("make_cutoff: outer must be at most side/2");
    Cutoff c;
    c.inner = inner;
    c.outer = outer;
    c.values.resize(grid.node_count());
    c.grad_norm.resize(grid.node_count());
    c.hess_norm.resize(grid.node_count());
    for (int iy = 0; iy < grid.n; ++iy)
        for (int ix = 0; ix < grid.n; ++ix) {
            const double rho = grid.node_dist(ix, iy);
            const int k = grid.node_index(ix, iy);
            c.values[k] = c.value_at(rho);
            c.grad_norm[k] = c.grad_at(rho);
            c.hess_norm[k] = c.hess_at(rho);
        }
    return c;
}

}  // namespace ortholap
