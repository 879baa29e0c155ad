#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ortholap/scenario.hpp"
#include "ortholap/suite.hpp"
#include "ortholap/verify.hpp"

using namespace ortholap;

TEST_CASE("oscillation inequality check: lattice closed form for a linear field") {
    const Grid g = build_grid(129, 2.0, {0.0, 0.0});
    const ScalarField fx = ScalarField::sample(g, [](double x, double) { return x; });

    const EstimateReport rep = check_lebesgue(fx, 0.2, 0.4);
    CHECK(rep.name == "lebesgue_oscillation");
    CHECK(rep.pass);

    // oscillation over the r = 0.2 ball is exactly 2 * 12h = 0.375 at h = 1/64
    CHECK(rep.lhs == doctest::Approx(0.375 * 0.375 * std::log(2.0)).epsilon(1e-12));
    REQUIRE(rep.ratio.has_value());
    CHECK(*rep.ratio > 0.05);
    CHECK(*rep.ratio < 0.15);
}

TEST_CASE("oscillation inequality check: continuum values at high resolution") {
    // the lattice oscillation of x1 over B_r underestimates 2r by O(h), so
    // the continuum comparison needs a fine grid
    const Grid g = build_grid(513, 2.0, {0.0, 0.0});
    const ScalarField fx = ScalarField::sample(g, [](double x, double) { return x; });
    const EstimateReport rep = check_lebesgue(fx, 0.2, 0.4);

    const double lhs_exact = 0.16 * std::log(2.0);          // (2r)^2 log(R/r)
    const double rhs_exact = M_PI * M_PI * (0.16 - 0.04);   // pi * area * |grad|^2
    CHECK(rep.lhs == doctest::Approx(lhs_exact).epsilon(0.03));
    CHECK(rep.rhs == doctest::Approx(rhs_exact).epsilon(0.03));
    CHECK(rep.pass);
}

TEST_CASE("oscillation inequality check: degenerate inputs") {
    const Grid g = build_grid(65, 2.0, {0.0, 0.0});
    const ScalarField fc = ScalarField::sample(g, [](double, double) { return 5.0; });

    const EstimateReport rep = check_lebesgue(fc, 0.2, 0.4);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs > 0.0);  // floored, so a zero annulus integral still passes
    CHECK(rep.pass);
    REQUIRE(rep.ratio.has_value());
    CHECK(*rep.ratio == 0.0);

    CHECK_THROWS_AS(check_lebesgue(fc, 2.0 * g.h, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(check_lebesgue(fc, 0.3, 0.4), std::invalid_argument);
}

TEST_CASE("extrema principle holds for monotone fields and rejects the radial bump") {
    const Grid g = build_grid(129, 2.0, {0.0, 0.0});
    const std::vector<BallSpec> balls = {BallSpec{0.15}, BallSpec{0.25}, BallSpec{0.35},
                                         BallSpec{0.45}, BallSpec{0.55}};

    const ScalarField aff =
        ScalarField::sample(g, [](double x, double y) { return 2 * x - y; });
    const EstimateReport ok = check_maxmin(aff, balls);
    CHECK(ok.name == "derivative_extrema_principle");
    CHECK(ok.pass);
    CHECK(ok.lhs == 0.0);

    // the radial bump has its interior minimum at the center of every ball,
    // far below the boundary-ring minimum: the check must fail loudly
    const ScalarField bump =
        ScalarField::sample(g, [](double x, double y) { return x * x + y * y; });
    const EstimateReport fail = check_maxmin(bump, balls);
    CHECK(!fail.pass);
    CHECK(fail.lhs > 5.0 * fail.rhs);  // measured margin ~6.4x the h-bound

    CHECK_THROWS_AS(check_maxmin(aff, {}), std::invalid_argument);
}

TEST_CASE("oscillation profile on affine data is flat zero") {
    const Grid g = build_grid(65, 2.0, {0.0, 0.0});
    const ScalarField u =
        ScalarField::sample(g, [](double x, double y) { return 3 * x - 2 * y + 1; });
    const auto radii = radii_ladder(0.8, g.h, 6, 4.0);

    const OscillationProfile prof = oscillation_profile(u, 0.8, radii, 1.5, 1e-3);
    REQUIRE(prof.radii.size() == radii.size());
    REQUIRE(prof.c1.size() == radii.size());
    CHECK(prof.denom > 0.0);
    CHECK(prof.sup_c == 0.0);
    for (size_t k = 0; k < radii.size(); ++k) {
        CHECK(prof.osc1[k] == 0.0);
        CHECK(prof.osc2[k] == 0.0);
        CHECK(prof.factors[k] ==
              doctest::Approx(1.0 / std::sqrt(std::log(0.8 / radii[k]))).epsilon(1e-12));
    }

    CHECK_THROWS_AS(oscillation_profile(u, 0.8, {}, 1.5, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(oscillation_profile(u, 0.8, {0.1, 0.2}, 1.5, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(oscillation_profile(u, 0.8, {0.5}, 1.5, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(oscillation_profile(u, 0.8, {g.h}, 1.5, 1e-3), std::invalid_argument);
}

TEST_CASE("profile stability check encodes a two-sided band") {
    OscillationProfile a, b, c;
    a.sup_c = 1.0;
    b.sup_c = 1.1;
    c.sup_c = 0.9;
    const EstimateReport ok = check_modulus_stability(a, b, c);
    CHECK(ok.name == "oscillation_modulus_stability");
    CHECK(ok.pass);
    CHECK(ok.lhs == doctest::Approx(1.0 / 0.9).epsilon(1e-12));

    c.sup_c = 0.5;
    CHECK(!check_modulus_stability(a, b, c).pass);

    b.sup_c = 2.0;
    c.sup_c = 1.0;
    CHECK(!check_modulus_stability(a, b, c).pass);

    // both at the round-off floor counts as perfectly stable
    a.sup_c = 0.0;
    b.sup_c = 0.0;
    c.sup_c = 0.0;
    const EstimateReport flat = check_modulus_stability(a, b, c);
    CHECK(flat.pass);
    CHECK(flat.lhs == 1.0);
}

TEST_CASE("sup gradient ratio has a closed form on axis-affine data") {
    const Grid g = build_grid(129, 2.0, {0.0, 0.0});
    const ScalarField fx = ScalarField::sample(g, [](double x, double) { return x; });
    // |grad fx|^2 = 1 on every cell, so the (eps + 1) factors cancel and only
    // the ball-average normalization survives: average_ball divides by the
    // continuum measure pi R^2, so a constant integrand picks up the ratio of
    // the lattice cell-count area to pi R^2.
    const double area = integrate_ball(g, BallSpec{0.8}, [](int) { return 1.0; });
    const double lattice = area / (M_PI * 0.64);
    for (double eps : {0.0, 0.3}) {
        const double ratio = lipschitz_ratio(fx, EnergyParams{1.5, eps}, 0.8);
        const double expected =
            (1.0 + eps) / std::pow(lattice * std::pow(1.0 + eps, 0.75), 4.0 / 3.0);
        CHECK(ratio == doctest::Approx(expected).epsilon(1e-12));
    }

    CHECK(check_lipschitz(1.2, 1.0).pass);
    CHECK(check_lipschitz(1.25, 1.0).pass);
    CHECK(!check_lipschitz(1.3, 1.0).pass);
    CHECK(!check_lipschitz(1.0, 1.3).pass);  // the band is two-sided
    CHECK(check_lipschitz(0.0, 0.0).pass);   // floored at round-off
}

TEST_CASE("second-derivative energy ratio matches a continuum closed form") {
    const Grid g = build_grid(129, 2.0, {0.0, 0.0});
    const double R = 0.8, p = 1.5, eps = 0.01;
    const ScalarField u =
        ScalarField::sample(g, [](double x, double) { return 0.5 * x * x; });

    const double ratio = grad_l2_ratio(u, u, EnergyParams{p, eps}, R);

    // lhs -> area of B_{R/2}; rhs -> (avg |x1|^p + eps^{p/2})^{2/p} with
    // avg |x1|^p = R^p / (p + 2) * I(p) / pi, I(p) = 2 sqrt(pi) G((p+1)/2)/G(p/2+1)
    const double I = 2.0 * std::sqrt(M_PI) * std::tgamma(0.5 * (p + 1.0)) /
                     std::tgamma(0.5 * p + 1.0);
    const double avg = std::pow(R, p) / (p + 2.0) * I / M_PI + std::pow(eps, 0.5 * p);
    const double expected = M_PI * R * R / 4.0 / std::pow(avg, 2.0 / p);
    CHECK(ratio == doctest::Approx(expected).epsilon(0.05));

    CHECK(check_grad_l2({1.0, 1.1, 1.05}).pass);
    CHECK(!check_grad_l2({1.0, 1.3, 1.05}).pass);
    CHECK_THROWS_AS(check_grad_l2({1.0}), std::invalid_argument);
}

TEST_CASE("cutoff-weighted bound matches an independent quadrature oracle") {
    const Grid g = build_grid(129, 2.0, {0.0, 0.0});
    const double R = 0.8, p = 1.5, eps = 0.5;
    const ScalarField u =
        ScalarField::sample(g, [](double x, double) { return 0.5 * x * x; });

    const double ratio = caccioppoli_ratio(u, EnergyParams{p, eps}, R);

    // Simpson quadrature of the same continuum integrals: derivative fields
    // of x^2/2 are (x, 0), so w = R^2 (eps + x^2) and only axis 1 contributes
    const Cutoff cut = make_cutoff(g, R / 2.0, R);
    const double R2 = R * R;
    auto lhs_fn = [&](double x, double y) {
        const double rho = std::hypot(x, y);
        if (rho >= R) return 0.0;
        const double xi = cut.value_at(rho);
        const double w = R2 * (eps + x * x);
        return R2 * std::pow(w, 0.5 * (p - 2.0)) * xi * xi;
    };
    auto rhs_fn = [&](double x, double y) {
        const double rho = std::hypot(x, y);
        if (rho >= R) return 0.0;
        const double gxi = cut.grad_at(rho);
        const double hxi = cut.hess_at(rho);
        const double w = R2 * (eps + x * x);
        return (gxi * gxi + hxi) * std::pow(w, 0.5 * p);
    };
    const double lhs = oracles::simpson2d(lhs_fn, -R, R, -R, R, 801);
    const double rhs = oracles::simpson2d(rhs_fn, -R, R, -R, R, 801);
    REQUIRE(rhs > 0.0);
    CHECK(ratio == doctest::Approx(lhs / rhs).epsilon(0.05));

    CHECK_THROWS_AS(caccioppoli_ratio(u, EnergyParams{p, 0.0}, R), std::invalid_argument);
    CHECK(check_caccioppoli(1.1, 1.0).pass);
    CHECK(!check_caccioppoli(2.0, 1.0).pass);
}

TEST_CASE("pointwise monotonicity terms at frozen sample points") {
    const MonotonicityTerms t1 = monotonicity_terms(1.0, -1.0, 0.0, 1.5);
    CHECK(t1.lhs == doctest::Approx(4.0 * std::pow(2.0, -0.25)).epsilon(1e-12));
    CHECK(t1.rhs == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(t1.lhs / t1.rhs == doctest::Approx(0.8409).epsilon(1e-3));

    // one argument at the degenerate point: flux(0) = 0 by convention
    const MonotonicityTerms t2 = monotonicity_terms(0.0, 1.0, 0.0, 1.5);
    CHECK(t2.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t2.rhs == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(monotonicity_terms(1.0, 1.0, 0.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(monotonicity_terms(0.0, 1.0, 0.0, 2.5), std::invalid_argument);
}

TEST_CASE("monotonicity ratio approaches the linearized weight near the diagonal") {
    const double a = 1.0, delta = 1e-4, eps = 1.0, p = 1.5;
    const MonotonicityTerms t = monotonicity_terms(a, a + delta, eps, p);
    const double limit =
        std::pow(eps + 2.0 * a * a, 0.5 * (p - 2.0)) / axis_weight(a, EnergyParams{p, eps});
    CHECK(t.lhs / t.rhs == doctest::Approx(limit).epsilon(1e-3));
}

TEST_CASE("monotonicity sweep is stable under refinement and rejects bad input") {
    const EstimateReport rep =
        sweep_monotonicity_inequality(1.5, {0.0, 1.0}, 81, -10.0, 10.0);
    CHECK(rep.name == "flux_monotonicity_constant");
    CHECK(rep.pass);
    CHECK(rep.lhs > 0.0);
    CHECK(rep.lhs < 10.0);
    CHECK(rep.rhs > 0.0);

    // deterministic re-run
    const EstimateReport again =
        sweep_monotonicity_inequality(1.5, {0.0, 1.0}, 81, -10.0, 10.0);
    CHECK(rep.lhs == again.lhs);
    CHECK(rep.rhs == again.rhs);

    CHECK_THROWS_AS(sweep_monotonicity_inequality(1.5, {0.0}, 2, -1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep_monotonicity_inequality(1.5, {0.0}, 81, 1.0, -1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep_monotonicity_inequality(1.5, {}, 81, -1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("linearized-equation residual vanishes for affine base fields") {
    const Grid g = build_grid(33, 2.0, {0.0, 0.0});
    const ScalarField aff =
        ScalarField::sample(g, [](double x, double y) { return x - 2 * y; });
    const auto testfns = boundary_vanishing_testfns(g, 4, 7);
    CHECK(derivative_equation_value(aff, EnergyParams{1.5, 0.1}, testfns) == 0.0);

    CHECK_THROWS_AS(derivative_equation_value(aff, EnergyParams{1.5, 0.0}, testfns),
                    std::invalid_argument);
    CHECK_THROWS_AS(derivative_equation_value(aff, EnergyParams{1.5, 0.1}, {}),
                    std::invalid_argument);
    const ScalarField bad = ScalarField::sample(g, [](double x, double) { return x; });
    CHECK_THROWS_AS(derivative_equation_value(aff, EnergyParams{1.5, 0.1}, {bad}),
                    std::invalid_argument);

    CHECK(check_derivative_equation(0.5, 1.0).pass);
    CHECK(!check_derivative_equation(0.8, 1.0).pass);
    CHECK(check_derivative_equation(0.0, 0.0).pass);
}

TEST_CASE("ladder convergence scoring allows one mild ratio excursion") {
    LadderReport lad;
    lad.eps = {1e-2, 2.5e-3, 6.25e-4, 1.5625e-4, 3.90625e-5};

    lad.sup_diffs = {1.0, 0.5, 0.25, 0.12};
    lad.grad_lp_diffs = {2.0, 1.0, 0.5, 0.25};
    CHECK(check_convergence(lad, 1.0).pass);

    // a single ratio at 1.1 is tolerated
    lad.sup_diffs = {1.0, 0.5, 0.55, 0.3};
    CHECK(check_convergence(lad, 1.0).pass);

    // a ratio beyond 1.1 is not
    lad.sup_diffs = {1.0, 0.5, 0.6, 0.3};
    CHECK(!check_convergence(lad, 1.0).pass);

    // two simultaneous non-decreasing ratios are not
    lad.sup_diffs = {1.0, 1.05, 1.1, 1.1};
    CHECK(!check_convergence(lad, 1.0).pass);

    // differences at the round-off floor count as converged
    lad.sup_diffs = {1e-14, 2e-14, 1.5e-14, 1e-14};
    lad.grad_lp_diffs = {1e-13, 1e-13, 1e-13, 1e-13};
    CHECK(check_convergence(lad, 1.0).pass);

    lad.sup_diffs = {1.0, 0.5};
    CHECK_THROWS_AS(check_convergence(lad, 1.0), std::invalid_argument);
}

TEST_CASE("energy comparison constants are screened for drift") {
    const double R = 0.8, p = 1.5, ext = 2.0;
    const std::vector<double> eps = {1e-2, 2.5e-3, 6.25e-4};
    std::vector<double> norms;
    for (double e : eps)
        norms.push_back(0.7 * (ext + std::pow(e, 0.5 * p) * M_PI * R * R));
    const EstimateReport ok = check_energy_comparison(norms, eps, ext, R, p);
    CHECK(ok.name == "minimizer_energy_comparison_stability");
    CHECK(ok.pass);
    CHECK(ok.lhs == doctest::Approx(1.0).epsilon(1e-12));

    norms[1] *= 2.0;
    CHECK(!check_energy_comparison(norms, eps, ext, R, p).pass);

    CHECK_THROWS_AS(check_energy_comparison({1.0}, {1e-2}, ext, R, p),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_energy_comparison(norms, {1e-2}, ext, R, p),
                    std::invalid_argument);
}

TEST_CASE("measured ratios are invariant under the natural scaling") {
    const Grid g = build_grid(65, 2.0, {0.0, 0.0});
    const ScalarField u = ScalarField::sample(g, [](double x, double y) {
        return std::sin(2 * x) * std::cos(y) + 0.3 * x * x;
    });
    ScalarField b = ScalarField::zeros(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            if (g.is_boundary_node(ix, iy)) b.at(ix, iy) = u.at(ix, iy);
    const ScalarField ext = boundary_extension(b);
    const auto radii = radii_ladder(0.8, g.h, 6, 4.0);

    const EstimateReport rep =
        check_scaling_invariance(u, ext, EnergyParams{1.5, 1e-3}, 0.8, radii);
    CHECK(rep.name == "measured_ratio_scale_invariance");
    CHECK(rep.pass);
    CHECK(rep.lhs < 1e-9);

    CHECK_THROWS_AS(check_scaling_invariance(u, ext, EnergyParams{1.5, 1e-3}, 0.8, radii, 0.0),
                    std::invalid_argument);
}
