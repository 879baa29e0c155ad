#include "ortholap/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ortholap {

void validate_config(const SolveConfig& cfg) {
    if (!(cfg.tol_residual > 0.0))
        throw std::invalid_argument("SolveConfig: tol_residual must be positive");
    if (!(cfg.tol_relative >= 0.0 && cfg.tol_relative < 1.0))
        throw std::invalid_argument("SolveConfig: tol_relative must lie in [0, 1)");
    if (cfg.max_newton < 1 || cfg.max_cg < 1)
        throw std::invalid_argument("SolveConfig: iteration caps must be >= 1");
    if (!(cfg.armijo_slope > 0.0 && cfg.armijo_slope <= 0.5))
        throw std::invalid_argument("SolveConfig: armijo_slope must lie in (0, 1/2]");
    if (!(cfg.armijo_shrink > 0.0 && cfg.armijo_shrink < 1.0))
        throw std::invalid_argument("SolveConfig: armijo_shrink must lie in (0, 1)");
    if (!(cfg.cg_tol > 0.0)) throw std::invalid_argument("SolveConfig: cg_tol must be positive");
}

ScalarField boundary_extension(const ScalarField& boundary) {
    const Grid& g = boundary.grid();
    const int n = g.n;
    ScalarField out = boundary;
    const double sw = boundary.at(0, 0), se = boundary.at(n - 1, 0);
    const double nw = boundary.at(0, n - 1), ne = boundary.at(n - 1, n - 1);
    for (int iy = 1; iy < n - 1; ++iy) {
        const double t = double(iy) / (n - 1);
        const double west = boundary.at(0, iy), east = boundary.at(n - 1, iy);
        for (int ix = 1; ix < n - 1; ++ix) {
            const double s = double(ix) / (n - 1);
            const double south = boundary.at(ix, 0), north = boundary.at(ix, n - 1);
            out.at(ix, iy) = (1.0 - s) * west + s * east + (1.0 - t) * south + t * north -
                             ((1.0 - s) * (1.0 - t) * sw + s * (1.0 - t) * se +
                              (1.0 - s) * t * nw + s * t * ne);
        }
    }
    return out;
}

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sup_norm(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

// Frozen per-cell linearization weights for one Newton step.
struct CellWeights {
    Vec w1, w2;
};

CellWeights cell_weights(const ScalarField& field, const EnergyParams& params) {
    const Grid& g = field.grid();
    const GradientField gf = cell_gradient(field);
    CellWeights w;
    w.w1.resize(g.cell_count());
    w.w2.resize(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c) {
        w.w1[c] = axis_weight(gf.g1[c], params);
        w.w2[c] = axis_weight(gf.g2[c], params);
    }
    return w;
}

// H*d with frozen weights; d and the output vanish on the grid boundary.
void apply_frozen(const Grid& g, const CellWeights& w, const Vec& d, Vec& out) {
    std::fill(out.begin(), out.end(), 0.0);
    const int n = g.n;
    const double inv2h = 1.0 / (2.0 * g.h);
    const double half_h = 0.5 * g.h;
    for (int cy = 0; cy < n - 1; ++cy)
        for (int cx = 0; cx < n - 1; ++cx) {
            const int c = g.cell_index(cx, cy);
            const int sw = g.node_index(cx, cy);
            const double dsw = d[sw], dse = d[sw + 1], dnw = d[sw + n], dne = d[sw + n + 1];
            const double dg1 = (dse - dsw + dne - dnw) * inv2h;
            const double dg2 = (dnw - dsw + dne - dse) * inv2h;
            const double f1 = w.w1[c] * dg1;
            const double f2 = w.w2[c] * dg2;
            const double a = half_h * (f1 + f2);
            const double b = half_h * (f1 - f2);
            out[sw] -= a;
            out[sw + 1] += b;
            out[sw + n] -= b;
            out[sw + n + 1] += a;
        }
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (g.is_boundary_node(ix, iy)) out[g.node_index(ix, iy)] = 0.0;
}

// Sup over interior nodes of the absolute-value residual assembly: the
// natural magnitude of the weak-form gradient before cancellation, hence the
// scale against which a relative convergence target is meaningful.
double residual_scale(const ScalarField& u, const EnergyParams& params) {
    const Grid& g = u.grid();
    const GradientField gf = cell_gradient(u);
    Vec acc(g.node_count(), 0.0);
    const int n = g.n;
    const double half_h = 0.5 * g.h;
    auto flux_mag = [&](double gc) {
        if (gc == 0.0) return 0.0;
        return std::pow(gc * gc + params.eps, 0.5 * (params.p - 2.0)) * std::abs(gc);
    };
    for (int cy = 0; cy < n - 1; ++cy)
        for (int cx = 0; cx < n - 1; ++cx) {
            const int c = g.cell_index(cx, cy);
            const double s = half_h * (flux_mag(gf.g1[c]) + flux_mag(gf.g2[c]));
            const int sw = g.node_index(cx, cy);
            acc[sw] += s;
            acc[sw + 1] += s;
            acc[sw + n] += s;
            acc[sw + n + 1] += s;
        }
    double m = 0.0;
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix) m = std::max(m, acc[g.node_index(ix, iy)]);
    return m;
}

// Diagonal of the frozen Hessian: per incident cell, (w1 + w2)/4.
Vec jacobi_diagonal(const Grid& g, const CellWeights& w) {
    Vec diag(g.node_count(), 0.0);
    const int n = g.n;
    for (int cy = 0; cy < n - 1; ++cy)
        for (int cx = 0; cx < n - 1; ++cx) {
            const int c = g.cell_index(cx, cy);
            const double q = 0.25 * (w.w1[c] + w.w2[c]);
            const int sw = g.node_index(cx, cy);
            diag[sw] += q;
            diag[sw + 1] += q;
            diag[sw + n] += q;
            diag[sw + n + 1] += q;
        }
    for (double& x : diag)
        if (!(x > 0.0)) x = 1.0;
    return diag;
}

// Jacobi-preconditioned CG for (H + lambda*diag(H)) x = b on interior nodes;
// returns iterations. The Levenberg term keeps the model positive along the
// near-null checkerboard modes of the one-point-quadrature Hessian.
int pcg(const Grid& g, const CellWeights& w, double lambda, const Vec& b, const Vec& diag,
        double rel_tol, int max_iter, Vec& x) {
    const size_t m = b.size();
    std::fill(x.begin(), x.end(), 0.0);
    Vec r = b;
    Vec z(m), p(m), hp(m);
    const double b2 = std::sqrt(dot(b, b));
    if (b2 == 0.0) return 0;
    const double dscale = 1.0 + lambda;
    for (size_t i = 0; i < m; ++i) z[i] = r[i] / (dscale * diag[i]);
    p = z;
    double rz = dot(r, z);
    int it = 0;
    for (; it < max_iter; ++it) {
        if (std::sqrt(dot(r, r)) <= rel_tol * b2) break;
        apply_frozen(g, w, p, hp);
        if (lambda > 0.0)
            for (size_t i = 0; i < m; ++i) hp[i] += lambda * diag[i] * p[i];
        const double php = dot(p, hp);
        if (!(php > 0.0)) break;  // eps > 0 keeps H positive definite; defensive
        const double alpha = rz / php;
        for (size_t i = 0; i < m; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * hp[i];
        }
        for (size_t i = 0; i < m; ++i) z[i] = r[i] / (dscale * diag[i]);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (size_t i = 0; i < m; ++i) p[i] = z[i] + beta * p[i];
    }
    return it;
}

// Damped Newton from an iterate whose boundary rows already carry the data.
// Boundary values are preserved: every step vanishes at boundary nodes.
// An adaptive Levenberg term (lambda times the Jacobi diagonal) controls the
// near-null checkerboard modes far from the solution and is driven to zero
// as the quadratic model proves out, restoring plain Newton locally.
std::pair<ScalarField, SolveReport> newton_from(const Grid& grid, ScalarField u,
                                                const EnergyParams& params,
                                                const SolveConfig& cfg,
                                                double lambda = 1e-2) {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr double kLambdaMax = 1e6;
    SolveReport rep;
    double e = energy(u, params);
    rep.energy_history.push_back(e);

    auto tol_at = [&](const ScalarField& v) {
        return std::max(cfg.tol_residual, cfg.tol_relative * residual_scale(v, params));
    };

    Vec step(grid.node_count(), 0.0);
    int flat_steps = 0;
    for (int it = 0; it < cfg.max_newton; ++it) {
        const ScalarField r = residual(u, params);
        rep.final_residual = sup_norm(r.values());
        if (rep.final_residual <= tol_at(u)) {
            rep.converged = true;
            break;
        }
        if (flat_steps >= 3) {
            // The line search can no longer certify any energy decrease: e is
            // pinned at its double-precision floor. The gradient attainable
            // there is bounded through the curvature: driving the quadratic
            // model below the energy granularity leaves ||r||^2 / lambda_max
            // <= O(eps_mach |e|), so within that bound the iterate is the
            // representable minimizer, not a failure.
            const Vec d = jacobi_diagonal(grid, cell_weights(u, params));
            double curv = 0.0;
            for (int iy = 1; iy < grid.n - 1; ++iy)
                for (int ix = 1; ix < grid.n - 1; ++ix)
                    curv = std::max(curv, d[grid.node_index(ix, iy)]);
            const double floor = std::sqrt(2.0 * std::numeric_limits<double>::epsilon() *
                                           std::abs(e) * curv);
            if (rep.final_residual <= floor)
                rep.converged = true;
            else
                rep.failure_reason = "stalled at the energy round-off floor";
            break;
        }
        rep.iterations = it + 1;

        const CellWeights w = cell_weights(u, params);
        const Vec diag = jacobi_diagonal(grid, w);
        Vec b(r.values());
        for (double& x : b) x = -x;
        rep.cg_iterations_total +=
            pcg(grid, w, lambda, b, diag, cfg.cg_tol, cfg.max_cg, step);

        double slope = dot(r.values(), step);
        if (!(slope < 0.0)) {
            // Not a descent direction; fall back to preconditioned steepest descent.
            for (size_t i = 0; i < step.size(); ++i) step[i] = -r.values()[i] / diag[i];
            slope = dot(r.values(), step);
        }

        bool accepted = false;
        double t = 1.0;
        double et = e;
        ScalarField trial = u;
        for (int ls = 0; ls < 60; ++ls) {
            for (size_t i = 0; i < step.size(); ++i)
                trial.values()[i] = u.values()[i] + t * step[i];
            et = energy(trial, params);
            // The slope term can sit below the round-off granularity of e near
            // convergence; allow that noise but never record an energy increase.
            const bool sufficient =
                et <= e + cfg.armijo_slope * t * slope + 8.0 * 1e-16 * std::abs(e);
            if (sufficient && et <= e) {
                u = trial;
                accepted = true;
                break;
            }
            t *= cfg.armijo_shrink;
        }
        if (!accepted) {
            if (lambda < kLambdaMax) {
                // Steeper, shorter model step; retry the iteration.
                lambda = std::max(lambda * 64.0, 1e-3);
                continue;
            }
            rep.failure_reason = "line-search stagnation";
            break;
        }
        const double predicted = -0.5 * slope;
        const double rho = predicted > 0.0 ? (e - et) / predicted : 1.0;
        flat_steps = (et == e) ? flat_steps + 1 : 0;
        e = et;
        rep.energy_history.push_back(e);
        if (t == 1.0 && rho > 0.75) {
            lambda *= 0.25;
            if (lambda < 1e-12) lambda = 0.0;
        } else if (t < 1.0 || rho < 0.25) {
            lambda = std::min(std::max(lambda * 8.0, 1e-4), kLambdaMax);
        }
    }

    if (!rep.converged) {
        const ScalarField r = residual(u, params);
        rep.final_residual = sup_norm(r.values());
        if (rep.final_residual <= tol_at(u)) {
            rep.converged = true;
            rep.failure_reason.clear();
        } else if (rep.failure_reason.empty()) {
            rep.failure_reason = "max Newton iterations reached";
        }
    }
    rep.final_energy = e;
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(u), std::move(rep)};
}

double grad_lp_diff(const ScalarField& a, const ScalarField& b, double p, double R) {
    const Grid& g = a.grid();
    const GradientField ga = cell_gradient(a);
    const GradientField gb = cell_gradient(b);
    const double val = integrate_ball(g, BallSpec{R}, [&](int c) {
        const double d1 = ga.g1[c] - gb.g1[c];
        const double d2 = ga.g2[c] - gb.g2[c];
        return std::pow(d1 * d1 + d2 * d2, 0.5 * p);
    });
    return std::pow(val, 1.0 / p);
}

}  // namespace

std::pair<ScalarField, SolveReport> solve_dirichlet(const Grid& grid,
                                                    const ScalarField& boundary,
                                                    const EnergyParams& params,
                                                    const SolveConfig& cfg) {
    validate_params(params);
    validate_config(cfg);
    if (!(params.eps > 0.0))
        throw std::invalid_argument("solve_dirichlet: eps must be positive");
    if (!boundary.finite())
        throw std::invalid_argument("solve_dirichlet: boundary values must be finite");
    if (boundary.grid().n != grid.n || boundary.grid().h != grid.h)
        throw std::invalid_argument("solve_dirichlet: boundary grid mismatch");
    return newton_from(grid, boundary_extension(boundary), params, cfg);
}

std::pair<ScalarField, LadderReport> epsilon_ladder(const Grid& grid,
                                                    const ScalarField& boundary, double p,
                                                    double eps0, int levels,
                                                    const SolveConfig& cfg, double R,
                                                    const LevelObserver& observe) {
    if (!(eps0 > 0.0)) throw std::invalid_argument("epsilon_ladder: eps0 must be positive");
    if (levels < 2) throw std::invalid_argument("epsilon_ladder: levels must be >= 2");
    validate_ball(grid, BallSpec{R});

    LadderReport lad;
    lad.R = R;
    lad.all_converged = true;
    const auto half_ball = ball_nodes(grid, BallSpec{R / 2.0});

    double scale = 0.0;
    for (double v : boundary.values()) scale = std::max(scale, std::abs(v));

    ScalarField current;
    ScalarField prev;
    for (int k = 0; k < levels; ++k) {
        const double eps = eps0 * std::pow(4.0, -k);
        const EnergyParams params{p, eps};
        std::pair<ScalarField, SolveReport> res;
        if (k == 0) {
            res = solve_dirichlet(grid, boundary, params, cfg);
        } else {
            prev = current;  // retained for the inter-level differences
            // Warm starts sit near the new minimizer; begin lightly damped.
            res = newton_from(grid, std::move(current), params, cfg, 1e-4);
        }
        lad.eps.push_back(eps);
        lad.all_converged = lad.all_converged && res.second.converged;
        if (observe) observe(k, eps, res.first, res.second);
        lad.solves.push_back(std::move(res.second));
        current = std::move(res.first);
        if (k > 0) {
            double sup = 0.0;
            for (int idx : half_ball) sup = std::max(sup, std::abs(current[idx] - prev[idx]));
            lad.sup_diffs.push_back(sup);
            lad.grad_lp_diffs.push_back(grad_lp_diff(current, prev, p, R));
        }
    }

    const double atol = 1e-12 * (1.0 + scale);
    auto dropped = [&](const std::vector<double>& d) {
        const size_t m = d.size();
        if (m < 2) return d.size() == 1 && d[0] <= atol;
        if (d[m - 1] <= atol) return true;
        return d[m - 2] / d[m - 1] >= 1.5;
    };
    lad.cauchy_converged = dropped(lad.sup_diffs) && dropped(lad.grad_lp_diffs);
    return {std::move(current), std::move(lad)};
}

EstimateReport minimality_check(const ScalarField& solution,
                                const std::vector<ScalarField>& competitors,
                                const EnergyParams& params) {
    const Grid& g = solution.grid();
    const double e_sol = energy(solution, params);
    double worst = 0.0;
    for (const ScalarField& comp : competitors) {
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix)
                if (g.is_boundary_node(ix, iy) && comp.at(ix, iy) != solution.at(ix, iy))
                    throw std::invalid_argument(
                        "minimality_check: competitor boundary values differ from solution");
        worst = std::max(worst, e_sol - energy(comp, params));
    }
    return make_report("energy_minimality", worst, 1e-10 * std::abs(e_sol), 0.0,
                       {{"competitors", double(competitors.size())},
                        {"p", params.p},
                        {"eps", params.eps},
                        {"energy", e_sol}});
}

}  // namespace ortholap
