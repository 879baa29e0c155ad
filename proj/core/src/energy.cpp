#include "ortholap/energy.hpp"

#include <cmath>

namespace ortholap {

void validate_params(const EnergyParams& params) {
    if (!(params.p > 1.0 && params.p < 2.0))
        throw std::invalid_argument("EnergyParams: p must lie strictly in (1, 2)");
    if (!(params.eps >= 0.0))
        throw std::invalid_argument("EnergyParams: eps must be nonnegative");
}

double energy(const ScalarField& field, const EnergyParams& params,
              std::optional<BallSpec> domain) {
    validate_params(params);
    const Grid& g = field.grid();
    const GradientField gf = cell_gradient(field);
    const double half_p = 0.5 * params.p;
    auto cell_term = [&](int c) {
        return (std::pow(gf.g1[c] * gf.g1[c] + params.eps, half_p) +
                std::pow(gf.g2[c] * gf.g2[c] + params.eps, half_p)) /
               params.p;
    };
    if (domain) return integrate_ball(g, *domain, cell_term);
    double sum = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) sum += cell_term(c);
    return sum * g.h * g.h;
}

namespace {

// (g^2+eps)^((p-2)/2) * g, the per-axis flux.
double axis_flux(double g, const EnergyParams& params) {
    if (g == 0.0) {
        if (params.eps == 0.0)
            throw SingularEvaluation(
                "axis flux: eps = 0 with vanishing gradient component");
        return 0.0;
    }
    return std::pow(g * g + params.eps, 0.5 * (params.p - 2.0)) * g;
}

// Scatters per-cell axis fluxes into nodal values with the bilinear stencil.
void scatter(const Grid& g, int cx, int cy, double f1, double f2, double scale,
             std::vector<double>& out) {
    const double a = scale * (f1 + f2);
    const double b = scale * (f1 - f2);
    out[g.node_index(cx, cy)] -= a;          // SW
    out[g.node_index(cx + 1, cy)] += b;      // SE
    out[g.node_index(cx, cy + 1)] -= b;      // NW
    out[g.node_index(cx + 1, cy + 1)] += a;  // NE
}

void zero_boundary(const Grid& g, std::vector<double>& v) {
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            if (g.is_boundary_node(ix, iy)) v[g.node_index(ix, iy)] = 0.0;
}

}  // namespace

ScalarField residual(const ScalarField& field, const EnergyParams& params) {
    validate_params(params);
    const Grid& g = field.grid();
    const GradientField gf = cell_gradient(field);
    std::vector<double> r(g.node_count(), 0.0);
    const double half_h = 0.5 * g.h;  // h^2 * d(g_i)/d(node) = h^2/(2h)
    for (int cy = 0; cy < g.n - 1; ++cy)
        for (int cx = 0; cx < g.n - 1; ++cx) {
            const int c = g.cell_index(cx, cy);
            scatter(g, cx, cy, axis_flux(gf.g1[c], params), axis_flux(gf.g2[c], params),
                    half_h, r);
        }
    zero_boundary(g, r);
    return ScalarField(g, std::move(r));
}

double axis_weight(double g, const EnergyParams& params) {
    return std::pow(g * g + params.eps, 0.5 * (params.p - 4.0)) *
           (params.eps + (params.p - 1.0) * g * g);
}

ScalarField hessian_apply(const ScalarField& field, const EnergyParams& params,
                          const ScalarField& direction) {
    validate_params(params);
    if (!(params.eps > 0.0))
        throw std::invalid_argument("hessian_apply: eps must be positive");
    const Grid& g = field.grid();
    const GradientField gf = cell_gradient(field);
    const GradientField dg = cell_gradient(direction);
    std::vector<double> out(g.node_count(), 0.0);
    const double half_h = 0.5 * g.h;
    for (int cy = 0; cy < g.n - 1; ++cy)
        for (int cx = 0; cx < g.n - 1; ++cx) {
            const int c = g.cell_index(cx, cy);
            const double f1 = axis_weight(gf.g1[c], params) * dg.g1[c];
            const double f2 = axis_weight(gf.g2[c], params) * dg.g2[c];
            scatter(g, cx, cy, f1, f2, half_h, out);
        }
    zero_boundary(g, out);
    return ScalarField(g, std::move(out));
}

double derivative_residual(const ScalarField& dfield, const ScalarField& base,
                           const EnergyParams& params, const ScalarField& testfn) {
    validate_params(params);
    if (!(params.eps > 0.0))
        throw std::invalid_argument("derivative_residual: eps must be positive");
    const Grid& g = base.grid();
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            if (g.is_boundary_node(ix, iy) && testfn.at(ix, iy) != 0.0)
                throw std::invalid_argument(
                    "derivative_residual: testfn must vanish on the boundary");
    const GradientField gb = cell_gradient(base);
    const GradientField gd = cell_gradient(dfield);
    const GradientField gt = cell_gradient(testfn);
    double sum = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) {
        sum += axis_weight(gb.g1[c], params) * gd.g1[c] * gt.g1[c] +
               axis_weight(gb.g2[c], params) * gd.g2[c] * gt.g2[c];
    }
    return sum * g.h * g.h;
}

}  // namespace ortholap
