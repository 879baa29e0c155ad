#include "ortholap/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace ortholap {

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), v_(std::move(values)) {
    if (int(v_.size()) != grid_.node_count())
        throw std::invalid_argument("ScalarField: value count must equal n^2");
}

ScalarField ScalarField::zeros(const Grid& grid) {
    return ScalarField(grid, std::vector<double>(grid.node_count(), 0.0));
}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(double, double)>& f) {
    std::vector<double> v(grid.node_count());
    for (int iy = 0; iy < grid.n; ++iy)
        for (int ix = 0; ix < grid.n; ++ix)
            v[grid.node_index(ix, iy)] = f(grid.rel(ix), grid.rel(iy));
    return ScalarField(grid, std::move(v));
}

bool ScalarField::finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

GradientField cell_gradient(const ScalarField& field) {
    const Grid& g = field.grid();
    GradientField out;
    out.grid = g;
    out.g1.resize(g.cell_count());
    out.g2.resize(g.cell_count());
    const double inv2h = 1.0 / (2.0 * g.h);
    for (int cy = 0; cy < g.n - 1; ++cy)
        for (int cx = 0; cx < g.n - 1; ++cx) {
            const double sw = field.at(cx, cy);
            const double se = field.at(cx + 1, cy);
            const double nw = field.at(cx, cy + 1);
            const double ne = field.at(cx + 1, cy + 1);
            const int c = g.cell_index(cx, cy);
            out.g1[c] = (se - sw + ne - nw) * inv2h;
            out.g2[c] = (nw - sw + ne - se) * inv2h;
        }
    return out;
}

ScalarField node_derivative(const ScalarField& field, int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("node_derivative: axis must be 1 or 2");
    const Grid& g = field.grid();
    ScalarField out = ScalarField::zeros(g);
    const int n = g.n;
    const double inv2h = 1.0 / (2.0 * g.h);
    auto val = [&](int ix, int iy) { return field.at(ix, iy); };
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const int i = (j == 1) ? ix : iy;
            double d;
            auto line = [&](int t) { return (j == 1) ? val(t, iy) : val(ix, t); };
            if (i == 0)
                d = (-3.0 * line(0) + 4.0 * line(1) - line(2)) * inv2h;
            else if (i == n - 1)
                d = (3.0 * line(n - 1) - 4.0 * line(n - 2) + line(n - 3)) * inv2h;
            else
                d = (line(i + 1) - line(i - 1)) * inv2h;
            out.at(ix, iy) = d;
        }
    return out;
}

ScalarField transpose(const ScalarField& field) {
    const Grid& g = field.grid();
    ScalarField out = ScalarField::zeros(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) out.at(ix, iy) = field.at(iy, ix);
    return out;
}

double integrate_ball(const Grid& grid, const BallSpec& ball,
                      const std::function<double(int)>& cell_fn) {
    validate_ball(grid, ball);
    double sum = 0.0;
    bool any = false;
    for (int cy = 0; cy < grid.n - 1; ++cy)
        for (int cx = 0; cx < grid.n - 1; ++cx)
            if (grid.cell_dist(cx, cy) < ball.radius) {
                sum += cell_fn(grid.cell_index(cx, cy));
                any = true;
            }
    if (!any) throw std::runtime_error("integrate_ball: no cell centers inside ball");
    return sum * grid.h * grid.h;
}

double integrate_annulus(const Grid& grid, double r, double R,
                         const std::function<double(int)>& cell_fn) {
    if (!(0.0 < r && r < R)) throw std::invalid_argument("integrate_annulus: need 0 < r < R");
    validate_ball(grid, BallSpec{R});
    double sum = 0.0;
    for (int cy = 0; cy < grid.n - 1; ++cy)
        for (int cx = 0; cx < grid.n - 1; ++cx) {
            const double d = grid.cell_dist(cx, cy);
            if (d >= r && d < R) sum += cell_fn(grid.cell_index(cx, cy));
        }
    return sum * grid.h * grid.h;
}

double average_ball(const Grid& grid, const BallSpec& ball,
                    const std::function<double(int)>& cell_fn) {
    const double pi = 3.14159265358979323846;
    return integrate_ball(grid, ball, cell_fn) / (pi * ball.radius * ball.radius);
}

double oscillation(const ScalarField& field, const BallSpec& ball) {
    const auto nodes = ball_nodes(field.grid(), ball);
    if (nodes.empty()) throw std::runtime_error("oscillation: ball contains no nodes");
    double lo = field[nodes[0]], hi = field[nodes[0]];
    for (int k : nodes) {
        lo = std::min(lo, field[k]);
        hi = std::max(hi, field[k]);
    }
    return hi - lo;
}

double lp_gradient_norm(const ScalarField& field, const BallSpec& ball, double p) {
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("lp_gradient_norm: p must lie in (1, 2)");
    const GradientField gf = cell_gradient(field);
    return integrate_ball(field.grid(), ball, [&](int c) {
        const double s = gf.g1[c] * gf.g1[c] + gf.g2[c] * gf.g2[c];
        return std::pow(s, 0.5 * p);
    });
}

}  // namespace ortholap
