#include "ortholap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ortholap {

namespace {

constexpr double kPi = std::numbers::pi;

// Ratios below this are treated as round-off noise in stability comparisons.
constexpr double kStabilityFloor = 1e-9;

double instability(double a, double b) {
    a = std::max(std::abs(a), kStabilityFloor);
    b = std::max(std::abs(b), kStabilityFloor);
    return std::max(a, b) / std::min(a, b);
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

OscillationProfile oscillation_profile(const ScalarField& u, double R,
                                       const std::vector<double>& radii, double p,
                                       double eps) {
    const Grid& g = u.grid();
    validate_ball(g, BallSpec{R});
    if (radii.empty()) throw std::invalid_argument("oscillation_profile: empty radii ladder");
    const double slack = 1.0 + 1e-12;
    for (size_t i = 0; i < radii.size(); ++i) {
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw std::invalid_argument("oscillation_profile: radii must strictly decrease");
        if (!(radii[i] * slack >= 4.0 * g.h && radii[i] <= R / 2.0 * slack))
            throw std::invalid_argument("oscillation_profile: radii must lie in [4h, R/2]");
    }

    OscillationProfile prof;
    prof.radii = radii;
    prof.R = R;
    prof.p = p;
    prof.eps = eps;
    prof.n = g.n;
    prof.denom = std::pow(lp_gradient_norm(u, BallSpec{R}, p) / (kPi * R * R), 1.0 / p);

    const ScalarField d1 = node_derivative(u, 1);
    const ScalarField d2 = node_derivative(u, 2);
    for (double r : radii) {
        const double o1 = oscillation(d1, BallSpec{r});
        const double o2 = oscillation(d2, BallSpec{r});
        const double lg = std::sqrt(std::log(R / r));
        prof.osc1.push_back(o1);
        prof.osc2.push_back(o2);
        prof.factors.push_back(1.0 / lg);
        prof.c1.push_back(prof.denom > 0.0 ? o1 * lg / prof.denom : 0.0);
        prof.c2.push_back(prof.denom > 0.0 ? o2 * lg / prof.denom : 0.0);
    }
    prof.sup_c = std::max(sup_abs(prof.c1), sup_abs(prof.c2));
    return prof;
}

EstimateReport check_lebesgue(const ScalarField& vfield, double r, double R,
                              double tolerance) {
    const Grid& g = vfield.grid();
    const double slack = 1.0 + 1e-12;
    if (!(r * slack >= 4.0 * g.h))
        throw std::invalid_argument("check_lebesgue: r must be at least 4h");
    if (!(r <= R / 2.0 * slack))
        throw std::invalid_argument("check_lebesgue: r must not exceed R/2");
    validate_ball(g, BallSpec{R});

    const double osc = oscillation(vfield, BallSpec{r});
    const double lhs = osc * osc * std::log(R / r);
    const GradientField gf = cell_gradient(vfield);
    const double annulus = integrate_annulus(g, r, R, [&](int c) {
        return gf.g1[c] * gf.g1[c] + gf.g2[c] * gf.g2[c];
    });
    const double rhs = kPi * annulus;
    const double scale = sup_abs(vfield.values());
    const double rhs_eff = std::max(rhs, 1e-16 * (1.0 + scale * scale));
    return make_report("lebesgue_oscillation", lhs, rhs_eff, tolerance,
                       {{"r", r}, {"R", R}, {"osc", osc}, {"annulus_integral", annulus}});
}

EstimateReport check_maxmin(const ScalarField& dfield, const std::vector<BallSpec>& balls) {
    if (balls.empty()) throw std::invalid_argument("check_maxmin: no balls given");
    const Grid& g = dfield.grid();
    double worst = 0.0;
    double worst_radius = balls.front().radius;
    for (const BallSpec& ball : balls) {
        const auto interior = ball_nodes(g, ball);
        const auto ring = boundary_ring(g, ball);
        double max_int = dfield[interior[0]], min_int = dfield[interior[0]];
        for (int k : interior) {
            max_int = std::max(max_int, dfield[k]);
            min_int = std::min(min_int, dfield[k]);
        }
        double max_ring = dfield[ring[0]], min_ring = dfield[ring[0]];
        for (int k : ring) {
            max_ring = std::max(max_ring, dfield[k]);
            min_ring = std::min(min_ring, dfield[k]);
        }
        const double violation =
            std::max({0.0, max_int - max_ring, min_ring - min_int});
        if (violation > worst) {
            worst = violation;
            worst_radius = ball.radius;
        }
    }
    const GradientField gf = cell_gradient(dfield);
    double grad_sup = 0.0;
    for (int c = 0; c < g.cell_count(); ++c)
        grad_sup = std::max(grad_sup, std::hypot(gf.g1[c], gf.g2[c]));
    const double scale = sup_abs(dfield.values());
    const double rhs = std::max(g.h * grad_sup, 1e-10 * (1.0 + scale));
    return make_report("derivative_extrema_principle", worst, rhs, 0.0,
                       {{"balls", double(balls.size())},
                        {"worst_radius", worst_radius},
                        {"grad_sup", grad_sup}});
}

EstimateReport check_modulus_stability(const OscillationProfile& a, const OscillationProfile& b,
                             const OscillationProfile& c, double tolerance) {
    const double grid_pair = instability(a.sup_c, b.sup_c);
    const double eps_pair = instability(a.sup_c, c.sup_c);
    return make_report("oscillation_modulus_stability",
                       std::max(grid_pair, eps_pair), 1.0, tolerance,
                       {{"sup_c", a.sup_c},
                        {"sup_c_other_grid", b.sup_c},
                        {"sup_c_other_eps", c.sup_c},
                        {"n", double(a.n)},
                        {"n_other", double(b.n)},
                        {"eps", a.eps},
                        {"eps_other", c.eps}});
}

double lipschitz_ratio(const ScalarField& u, const EnergyParams& params, double R) {
    validate_params(params);
    const Grid& g = u.grid();
    validate_ball(g, BallSpec{R});
    const GradientField gf = cell_gradient(u);
    double lhs = 0.0;
    for (int cy = 0; cy < g.n - 1; ++cy)
        for (int cx = 0; cx < g.n - 1; ++cx)
            if (g.cell_dist(cx, cy) < R / 2.0) {
                const int c = g.cell_index(cx, cy);
                lhs = std::max(lhs, params.eps + gf.g1[c] * gf.g1[c] + gf.g2[c] * gf.g2[c]);
            }
    const double avg = average_ball(g, BallSpec{R}, [&](int c) {
        const double w = params.eps + gf.g1[c] * gf.g1[c] + gf.g2[c] * gf.g2[c];
        return std::pow(w, 0.5 * params.p);
    });
    const double rhs = std::pow(avg, 2.0 / params.p);
    if (rhs == 0.0) return 0.0;
    return lhs / rhs;
}

EstimateReport check_lipschitz(double ratio_fine, double ratio_coarse, double tolerance) {
    return make_report("gradient_sup_bound_stability", instability(ratio_fine, ratio_coarse),
                       1.0, tolerance,
                       {{"ratio_fine", ratio_fine}, {"ratio_coarse", ratio_coarse}});
}

double grad_l2_ratio(const ScalarField& u, const ScalarField& extension,
                     const EnergyParams& params, double R) {
    validate_params(params);
    const Grid& g = u.grid();
    validate_ball(g, BallSpec{R});
    const GradientField gd1 = cell_gradient(node_derivative(u, 1));
    const GradientField gd2 = cell_gradient(node_derivative(u, 2));
    const double lhs = integrate_ball(g, BallSpec{R / 2.0}, [&](int c) {
        return gd1.g1[c] * gd1.g1[c] + gd1.g2[c] * gd1.g2[c] + gd2.g1[c] * gd2.g1[c] +
               gd2.g2[c] * gd2.g2[c];
    });
    const GradientField ge = cell_gradient(extension);
    const double eps_term = std::pow(params.eps, 0.5 * params.p);
    const double avg = average_ball(g, BallSpec{R}, [&](int c) {
        const double s = ge.g1[c] * ge.g1[c] + ge.g2[c] * ge.g2[c];
        return std::pow(s, 0.5 * params.p) + eps_term;
    });
    const double rhs = std::pow(avg, 2.0 / params.p);
    if (rhs == 0.0) return 0.0;
    return lhs / rhs;
}

EstimateReport check_grad_l2(const std::vector<double>& ratios_by_eps, double tolerance) {
    if (ratios_by_eps.size() < 2)
        throw std::invalid_argument("check_grad_l2: need at least two ratios");
    double lo = ratios_by_eps[0], hi = ratios_by_eps[0];
    for (double v : ratios_by_eps) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return make_report("derivative_energy_bound_stability", instability(hi, lo), 1.0,
                       tolerance,
                       {{"ratio_min", lo},
                        {"ratio_max", hi},
                        {"levels", double(ratios_by_eps.size())}});
}

double caccioppoli_ratio(const ScalarField& u, const EnergyParams& params, double R) {
    validate_params(params);
    if (!(params.eps > 0.0))
        throw std::invalid_argument("caccioppoli_ratio: eps must be positive");
    const Grid& g = u.grid();
    validate_ball(g, BallSpec{R});
    const Cutoff cut = make_cutoff(g, R / 2.0, R);
    const GradientField gf = cell_gradient(u);
    const GradientField gd1 = cell_gradient(node_derivative(u, 1));
    const GradientField gd2 = cell_gradient(node_derivative(u, 2));

    const double R2 = R * R;
    double lhs1 = 0.0, lhs2 = 0.0, rhs = 0.0;
    for (int cy = 0; cy < g.n - 1; ++cy)
        for (int cx = 0; cx < g.n - 1; ++cx) {
            const double d = g.cell_dist(cx, cy);
            if (d >= R) continue;
            const int c = g.cell_index(cx, cy);
            const double w = R2 * (params.eps + gf.g1[c] * gf.g1[c] + gf.g2[c] * gf.g2[c]);
            const double xi = cut.value_at(d);
            const double gxi = cut.grad_at(d);
            const double hxi = cut.hess_at(d);
            const double wpow = std::pow(w, 0.5 * (params.p - 2.0));
            const double s1 = gd1.g1[c] * gd1.g1[c] + gd1.g2[c] * gd1.g2[c];
            const double s2 = gd2.g1[c] * gd2.g1[c] + gd2.g2[c] * gd2.g2[c];
            lhs1 += R2 * wpow * s1 * xi * xi;
            lhs2 += R2 * wpow * s2 * xi * xi;
            rhs += (gxi * gxi + hxi) * std::pow(w, 0.5 * params.p);
        }
    if (rhs == 0.0) return 0.0;
    return std::max(lhs1, lhs2) / rhs;
}

EstimateReport check_caccioppoli(double ratio_fine, double ratio_coarse, double tolerance) {
    return make_report("cutoff_derivative_bound_stability",
                       instability(ratio_fine, ratio_coarse), 1.0, tolerance,
                       {{"ratio_fine", ratio_fine}, {"ratio_coarse", ratio_coarse}});
}

namespace {

double scalar_flux(double t, double eps, double p) {
    if (eps == 0.0 && t == 0.0) return 0.0;
    return std::pow(eps + t * t, 0.5 * (p - 2.0)) * t;
}

// Max of lhs/rhs over the symmetric off-diagonal sample grid.
double monotonicity_max(double p, const std::vector<double>& eps_values, int samples,
                        double lo, double hi) {
    const double step = (hi - lo) / (samples - 1);
    double worst = 0.0;
    for (double eps : eps_values)
        for (int i = 0; i < samples; ++i) {
            const double a = lo + i * step;
            for (int j = i + 1; j < samples; ++j) {
                const double b = lo + j * step;
                const MonotonicityTerms t = monotonicity_terms(a, b, eps, p);
                if (!(t.rhs > 0.0)) {
                    std::ostringstream msg;
                    msg << "monotonicity inequality: rhs <= 0 at a=" << a << " b=" << b
                        << " eps=" << eps << " p=" << p
                        << " (falsifies strict monotonicity of the scalar flux)";
                    throw std::runtime_error(msg.str());
                }
                worst = std::max(worst, t.lhs / t.rhs);
            }
        }
    return worst;
}

}  // namespace

MonotonicityTerms monotonicity_terms(double a, double b, double eps, double p) {
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("monotonicity_terms: p must lie in (1, 2)");
    if (a == b) throw std::invalid_argument("monotonicity_terms: a and b must differ");
    MonotonicityTerms t;
    const double diff = a - b;
    t.lhs = diff * diff * std::pow(eps + a * a + b * b, 0.5 * (p - 2.0));
    t.rhs = (scalar_flux(a, eps, p) - scalar_flux(b, eps, p)) * diff;
    return t;
}

EstimateReport sweep_monotonicity_inequality(double p, const std::vector<double>& eps_values,
                                             int samples, double lo, double hi,
                                             double tolerance) {
    if (samples < 3) throw std::invalid_argument("sweep: need at least 3 samples per axis");
    if (!(lo < hi)) throw std::invalid_argument("sweep: need lo < hi");
    if (eps_values.empty()) throw std::invalid_argument("sweep: no eps values");
    const double coarse = monotonicity_max(p, eps_values, samples, lo, hi);
    const double fine = monotonicity_max(p, eps_values, 2 * samples - 1, lo, hi);
    const double lhs = std::isfinite(fine) && std::isfinite(coarse)
                           ? fine
                           : std::numeric_limits<double>::infinity();
    return make_report("flux_monotonicity_constant", lhs, coarse, tolerance,
                       {{"p", p},
                        {"eps_count", double(eps_values.size())},
                        {"samples", double(samples)},
                        {"max_ratio", fine}});
}

double derivative_equation_value(const ScalarField& u, const EnergyParams& params,
                                 const std::vector<ScalarField>& testfns) {
    validate_params(params);
    if (!(params.eps > 0.0))
        throw std::invalid_argument("derivative_equation_value: eps must be positive");
    if (testfns.empty())
        throw std::invalid_argument("derivative_equation_value: no test functions");
    const Grid& g = u.grid();
    const GradientField gf = cell_gradient(u);
    std::vector<double> w1(g.cell_count()), w2(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c) {
        w1[c] = axis_weight(gf.g1[c], params);
        w2[c] = axis_weight(gf.g2[c], params);
    }
    const double h2 = g.h * g.h;
    double worst = 0.0;
    for (int j = 1; j <= 2; ++j) {
        const GradientField gd = cell_gradient(node_derivative(u, j));
        for (const ScalarField& phi : testfns) {
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix)
                    if (g.is_boundary_node(ix, iy) && phi.at(ix, iy) != 0.0)
                        throw std::invalid_argument(
                            "derivative_equation_value: test function must vanish on the "
                            "grid boundary");
            const GradientField gp = cell_gradient(phi);
            double signed_sum = 0.0, l1 = 0.0;
            for (int c = 0; c < g.cell_count(); ++c) {
                const double t1 = w1[c] * gd.g1[c] * gp.g1[c];
                const double t2 = w2[c] * gd.g2[c] * gp.g2[c];
                signed_sum += h2 * (t1 + t2);
                l1 += h2 * (std::abs(t1) + std::abs(t2));
            }
            if (l1 > 0.0) worst = std::max(worst, std::abs(signed_sum) / l1);
        }
    }
    return worst;
}

EstimateReport check_derivative_equation(double value_fine, double value_coarse) {
    const double rhs = std::max(value_coarse, 1e-14) / 1.4;
    return make_report("derivative_equation_residual_decay", value_fine, rhs, 0.0,
                       {{"value_fine", value_fine}, {"value_coarse", value_coarse}});
}

EstimateReport check_convergence(const LadderReport& ladder, double data_scale) {
    if (ladder.sup_diffs.size() < 3 || ladder.grad_lp_diffs.size() < 3)
        throw std::invalid_argument("check_convergence: ladder needs at least 4 levels");
    const double atol = 1e-11 * (1.0 + data_scale);
    auto score = [&](const std::vector<double>& d) {
        std::vector<double> ratios;
        for (size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i + 1] <= atol)
                ratios.push_back(0.0);
            else if (d[i] <= atol)
                ratios.push_back(2.0);  // growth out of the round-off floor
            else
                ratios.push_back(d[i + 1] / d[i]);
        }
        if (ratios.size() > 3) ratios.erase(ratios.begin(), ratios.end() - 3);
        std::sort(ratios.begin(), ratios.end(), std::greater<>());
        const double worst = ratios[0];
        const double second = ratios.size() > 1 ? ratios[1] : 0.0;
        return std::max(worst / 1.1, second);
    };
    const double sup_score = score(ladder.sup_diffs);
    const double grad_score = score(ladder.grad_lp_diffs);
    return make_report("regularization_convergence", std::max(sup_score, grad_score), 1.0,
                       0.0,
                       {{"sup_score", sup_score},
                        {"grad_score", grad_score},
                        {"levels", double(ladder.eps.size())},
                        {"last_sup_diff", ladder.sup_diffs.back()},
                        {"last_grad_diff", ladder.grad_lp_diffs.back()}});
}

EstimateReport check_energy_comparison(const std::vector<double>& lp_norms,
                                       const std::vector<double>& eps_values,
                                       double lp_extension, double R, double p,
                                       double tolerance) {
    if (lp_norms.size() != eps_values.size() || lp_norms.size() < 2)
        throw std::invalid_argument(
            "check_energy_comparison: need matching norm/eps lists with >= 2 entries");
    double lo = 0.0, hi = 0.0;
    for (size_t k = 0; k < lp_norms.size(); ++k) {
        const double denom = lp_extension + std::pow(eps_values[k], 0.5 * p) * kPi * R * R;
        const double c = lp_norms[k] / denom;
        if (k == 0) {
            lo = hi = c;
        } else {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    }
    return make_report("minimizer_energy_comparison_stability", instability(hi, lo), 1.0,
                       tolerance, {{"c_min", lo}, {"c_max", hi}, {"lp_extension", lp_extension}});
}

EstimateReport check_scaling_invariance(const ScalarField& u, const ScalarField& extension,
                                        const EnergyParams& params, double R,
                                        const std::vector<double>& radii, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("check_scaling_invariance: lambda must be positive");
    const Grid& g = u.grid();

    auto ratios = [&](const ScalarField& v, const ScalarField& ext,
                      const EnergyParams& pr) {
        std::vector<double> out;
        out.push_back(lipschitz_ratio(v, pr, R));
        out.push_back(grad_l2_ratio(v, ext, pr, R));
        out.push_back(caccioppoli_ratio(v, pr, R));
        out.push_back(oscillation_profile(v, R, radii, pr.p, pr.eps).sup_c);
        const double lp_v = lp_gradient_norm(v, BallSpec{R}, pr.p);
        const double lp_e = lp_gradient_norm(ext, BallSpec{R}, pr.p);
        out.push_back(lp_v / (lp_e + std::pow(pr.eps, 0.5 * pr.p) * kPi * R * R));
        const ScalarField d1 = node_derivative(v, 1);
        const double r = radii.back();
        const double osc = oscillation(d1, BallSpec{r});
        const GradientField gd = cell_gradient(d1);
        const double annulus = integrate_annulus(g, r, R, [&](int c) {
            return gd.g1[c] * gd.g1[c] + gd.g2[c] * gd.g2[c];
        });
        out.push_back(annulus > 0.0 ? osc * osc * std::log(R / r) / (kPi * annulus) : 0.0);
        return out;
    };

    ScalarField us = u;
    for (double& x : us.values()) x *= lambda;
    ScalarField exts = extension;
    for (double& x : exts.values()) x *= lambda;
    const EnergyParams scaled{params.p, params.eps * lambda * lambda};

    const std::vector<double> base = ratios(u, extension, params);
    const std::vector<double> mapped = ratios(us, exts, scaled);
    double drift = 0.0;
    for (size_t i = 0; i < base.size(); ++i)
        drift = std::max(drift,
                         std::abs(mapped[i] - base[i]) / std::max(std::abs(base[i]), 1e-12));
    return make_report("measured_ratio_scale_invariance", drift, 1e-9, 0.0,
                       {{"lambda", lambda},
                        {"ratio_count", double(base.size())},
                        {"eps", params.eps}});
}

}  // namespace ortholap
