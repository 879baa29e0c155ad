#include "ortholap/suite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ortholap {

namespace {

constexpr double kPi = std::numbers::pi;

double unit_double(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

double tol_or(const RunConfig& cfg, const std::string& name, double fallback) {
    const auto it = cfg.tolerance.find(name);
    return it == cfg.tolerance.end() ? fallback : it->second;
}

// Signed slack of the inequality; larger is closer to (or deeper in) failure.
double margin(const EstimateReport& r) { return r.lhs - r.rhs * (1.0 + r.tolerance); }

std::vector<BallSpec> nested_balls(double R) {
    std::vector<BallSpec> balls;
    for (double f : {0.3, 0.45, 0.6, 0.75, 0.9}) balls.push_back(BallSpec{f * R});
    return balls;
}

double sup_abs_diff_at(const std::vector<int>& nodes, const ScalarField& a,
                       const ScalarField& b) {
    double m = 0.0;
    for (int k : nodes) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double grad_lp_diff(const ScalarField& a, const ScalarField& b, double p, double R) {
    const GradientField ga = cell_gradient(a);
    const GradientField gb = cell_gradient(b);
    const double val = integrate_ball(a.grid(), BallSpec{R}, [&](int c) {
        const double d1 = ga.g1[c] - gb.g1[c];
        const double d2 = ga.g2[c] - gb.g2[c];
        return std::pow(d1 * d1 + d2 * d2, 0.5 * p);
    });
    return std::pow(val, 1.0 / p);
}

}  // namespace

std::uint64_t stable_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void validate_run_config(const RunConfig& cfg) {
    if (!(cfg.p > 1.0 && cfg.p < 2.0))
        throw std::invalid_argument("config: p must lie strictly in (1, 2)");
    if (!(cfg.eps0 > 0.0)) throw std::invalid_argument("config: eps0 must be positive");
    if (cfg.levels < 2) throw std::invalid_argument("config: levels must be at least 2");
    if (cfg.ns.empty()) throw std::invalid_argument("config: resolution list n is empty");
    int prev = 0;
    for (int n : cfg.ns) {
        if (n % 2 == 0) throw std::invalid_argument("config: n must be odd");
        if (n < 9) throw std::invalid_argument("config: n must be at least 9");
        if (n <= prev)
            throw std::invalid_argument("config: resolutions must strictly increase");
        prev = n;
    }
    if (!(cfg.side > 0.0)) throw std::invalid_argument("config: side must be positive");
    if (!(cfg.R > 0.0)) throw std::invalid_argument("config: R must be positive");
    for (int n : cfg.ns) {
        const double h = cfg.side / (n - 1);
        if (!(cfg.R + 2.0 * h < cfg.side / 2.0))
            throw std::invalid_argument("config: ball must satisfy R + 2h < side/2");
        radii_ladder(cfg.R, h, cfg.radii_count, cfg.radii_min_h);  // validates the range
    }
    if (cfg.scenario != "standard") make_scenario(cfg.scenario, cfg.p);  // validates name
    if (cfg.sweep_samples < 3)
        throw std::invalid_argument("config: sweep_samples must be at least 3");
    if (cfg.workers < 1) throw std::invalid_argument("config: workers must be at least 1");
    if (cfg.out.empty()) throw std::invalid_argument("config: output directory is empty");
}

std::vector<Scenario> config_scenarios(const RunConfig& cfg) {
    if (cfg.scenario == "standard") return standard_scenarios(cfg.p);
    return {make_scenario(cfg.scenario, cfg.p)};
}

ScenarioRun run_scenario(const Scenario& sc, int n, const RunConfig& cfg) {
    ScenarioRun run;
    run.scenario = sc.name;
    run.p = sc.p;
    run.grid = build_grid(n, cfg.side, {0.0, 0.0});
    run.boundary = ScalarField::sample(run.grid, sc.data);
    run.extension = boundary_extension(run.boundary);
    run.radii = radii_ladder(cfg.R, run.grid.h, cfg.radii_count, cfg.radii_min_h);
    for (double v : run.boundary.values())
        run.data_scale = std::max(run.data_scale, std::abs(v));

    const SolveConfig scfg;
    auto [field, lad] = epsilon_ladder(
        run.grid, run.boundary, sc.p, cfg.eps0, cfg.levels, scfg, cfg.R,
        [&](int, double eps, const ScalarField& f, const SolveReport&) {
            run.eps.push_back(eps);
            run.fields.push_back(f);
        });
    (void)field;  // identical to run.fields.back()
    run.ladder = std::move(lad);
    if (!run.ladder.all_converged) {
        std::ostringstream msg;
        msg << "solver failed to converge on scenario " << sc.name << " at n=" << n;
        for (const SolveReport& rep : run.ladder.solves)
            if (!rep.converged && !rep.failure_reason.empty())
                msg << " (" << rep.failure_reason << ")";
        throw std::runtime_error(msg.str());
    }
    return run;
}

ScenarioRun rebuild_scenario(const Scenario& sc, int n, const RunConfig& cfg,
                             std::vector<double> eps, std::vector<ScalarField> fields) {
    if (eps.size() != fields.size() || fields.size() < 2)
        throw std::invalid_argument("rebuild_scenario: need matching eps/field lists");
    ScenarioRun run;
    run.scenario = sc.name;
    run.p = sc.p;
    run.grid = build_grid(n, cfg.side, {0.0, 0.0});
    run.boundary = ScalarField::sample(run.grid, sc.data);
    run.extension = boundary_extension(run.boundary);
    run.radii = radii_ladder(cfg.R, run.grid.h, cfg.radii_count, cfg.radii_min_h);
    for (double v : run.boundary.values())
        run.data_scale = std::max(run.data_scale, std::abs(v));

    for (const ScalarField& f : fields) {
        if (f.grid().n != n)
            throw std::invalid_argument("rebuild_scenario: stored field resolution mismatch");
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                if (run.grid.is_boundary_node(ix, iy) &&
                    std::abs(f.at(ix, iy) - run.boundary.at(ix, iy)) >
                        1e-9 * (1.0 + run.data_scale))
                    throw std::invalid_argument(
                        "rebuild_scenario: stored field does not match the scenario "
                        "boundary data");
    }

    run.ladder.R = cfg.R;
    run.ladder.eps = eps;
    run.ladder.all_converged = true;
    const auto half_ball = ball_nodes(run.grid, BallSpec{cfg.R / 2.0});
    for (size_t k = 0; k + 1 < fields.size(); ++k) {
        run.ladder.sup_diffs.push_back(sup_abs_diff_at(half_ball, fields[k + 1], fields[k]));
        run.ladder.grad_lp_diffs.push_back(
            grad_lp_diff(fields[k + 1], fields[k], sc.p, cfg.R));
    }
    run.eps = std::move(eps);
    run.fields = std::move(fields);
    run.from_snapshots = true;
    return run;
}

std::vector<EstimateReport> scenario_reports(const ScenarioRun& coarse,
                                             const ScenarioRun& fine, const RunConfig& cfg) {
    if (coarse.scenario != fine.scenario)
        throw std::invalid_argument("scenario_reports: mismatched scenarios");
    if (!(coarse.grid.n < fine.grid.n))
        throw std::invalid_argument("scenario_reports: coarse resolution must be smaller");

    const double p = fine.p;
    const double R = cfg.R;
    const EnergyParams last{p, fine.eps.back()};
    const EnergyParams last_coarse{p, coarse.eps.back()};
    const ScalarField& u = fine.fields.back();
    const ScalarField& uc = coarse.fields.back();

    std::vector<EstimateReport> out;
    auto push = [&](EstimateReport r) {
        r.scenario = fine.scenario;
        r.context["n"] = fine.grid.n;
        r.context["p"] = p;
        r.context["eps"] = fine.eps.back();
        out.push_back(std::move(r));
    };

    {
        const auto bumps = random_interior_bumps(
            fine.grid, 100, cfg.seed ^ stable_hash(fine.scenario), 1e-3, 1.0);
        std::vector<ScalarField> competitors;
        competitors.reserve(bumps.size());
        for (const ScalarField& b : bumps) {
            ScalarField c = u;
            for (size_t i = 0; i < c.values().size(); ++i) c.values()[i] += b.values()[i];
            competitors.push_back(std::move(c));
        }
        push(minimality_check(u, competitors, last));
    }

    {
        const auto balls = nested_balls(R);
        EstimateReport r1 = check_maxmin(node_derivative(u, 1), balls);
        EstimateReport r2 = check_maxmin(node_derivative(u, 2), balls);
        EstimateReport worse = margin(r2) > margin(r1) ? r2 : r1;
        worse.context["axis"] = margin(r2) > margin(r1) ? 2.0 : 1.0;
        push(std::move(worse));
    }

    {
        const double tol = tol_or(cfg, "lebesgue_oscillation", 0.05);
        EstimateReport worst;
        bool first = true;
        for (int j = 1; j <= 2; ++j) {
            const ScalarField d = node_derivative(u, j);
            for (double r : fine.radii) {
                EstimateReport rep = check_lebesgue(d, r, R, tol);
                rep.context["axis"] = j;
                if (first || margin(rep) > margin(worst)) {
                    worst = std::move(rep);
                    first = false;
                }
            }
        }
        push(std::move(worst));
    }

    {
        const auto pa = oscillation_profile(u, R, fine.radii, p, fine.eps.back());
        const auto pb = oscillation_profile(uc, R, coarse.radii, p, coarse.eps.back());
        const auto pc =
            oscillation_profile(fine.fields[fine.fields.size() - 2], R, fine.radii, p,
                                fine.eps[fine.eps.size() - 2]);
        push(check_modulus_stability(pa, pb, pc, tol_or(cfg, "oscillation_modulus_stability", 0.25)));
    }

    push(check_lipschitz(lipschitz_ratio(u, last, R), lipschitz_ratio(uc, last_coarse, R),
                         tol_or(cfg, "gradient_sup_bound_stability", 0.25)));

    {
        std::vector<double> ratios;
        const size_t start = fine.fields.size() >= 3 ? fine.fields.size() - 3 : 0;
        for (size_t k = start; k < fine.fields.size(); ++k)
            ratios.push_back(
                grad_l2_ratio(fine.fields[k], fine.extension, EnergyParams{p, fine.eps[k]}, R));
        push(check_grad_l2(ratios, tol_or(cfg, "derivative_energy_bound_stability", 0.25)));
    }

    push(check_caccioppoli(caccioppoli_ratio(u, last, R), caccioppoli_ratio(uc, last_coarse, R),
                           tol_or(cfg, "cutoff_derivative_bound_stability", 0.25)));

    if (fine.scenario != "affine") {
        const auto tf_fine =
            boundary_vanishing_testfns(fine.grid, 8, cfg.seed ^ stable_hash("testfns"));
        const auto tf_coarse =
            boundary_vanishing_testfns(coarse.grid, 8, cfg.seed ^ stable_hash("testfns"));
        push(check_derivative_equation(derivative_equation_value(u, last, tf_fine),
                                       derivative_equation_value(uc, last_coarse, tf_coarse)));
    }

    if (fine.ladder.sup_diffs.size() >= 3)
        push(check_convergence(fine.ladder, fine.data_scale));

    {
        std::vector<double> lp_norms;
        for (const ScalarField& f : fine.fields)
            lp_norms.push_back(lp_gradient_norm(f, BallSpec{R}, p));
        push(check_energy_comparison(
            lp_norms, fine.eps, lp_gradient_norm(fine.extension, BallSpec{R}, p), R, p,
            tol_or(cfg, "minimizer_energy_comparison_stability", 0.20)));
    }

    return out;
}

EstimateReport profile_pretest(int n, const RunConfig& cfg) {
    const Grid g = build_grid(n, cfg.side, {0.0, 0.0});
    const ScalarField u = ScalarField::sample(g, [](double x, double y) {
        return std::abs(x * x * x) - std::abs(y * y * y);
    });
    const ScalarField d1 = node_derivative(u, 1);
    const auto radii = radii_ladder(cfg.R, g.h, cfg.radii_count, cfg.radii_min_h);
    double drift = 0.0;
    for (double r : radii) {
        int k = int(std::floor(r / g.h));
        while (k >= 1 && !(k * g.h < r)) --k;
        while ((k + 1) * g.h < r) ++k;
        const double a = k * g.h;
        const double oracle = 6.0 * a * a;
        const double measured = oscillation(d1, BallSpec{r});
        drift = std::max(drift, std::abs(measured / oracle - 1.0));
    }
    EstimateReport rep =
        make_report("oscillation_profile_pretest", drift,
                    tol_or(cfg, "oscillation_profile_pretest", 0.05), 0.0,
                    {{"n", double(n)}, {"radii", double(radii.size())}});
    rep.scenario = "suite";
    return rep;
}

SuiteEvaluation suite_reports(const ScenarioRun* scaling_run, int pretest_n,
                              const RunConfig& cfg) {
    SuiteEvaluation ev;
    for (double p : {1.1, 1.5, 1.9}) {
        EstimateReport rep = sweep_monotonicity_inequality(
            p, {0.0, 0.1, 1.0}, cfg.sweep_samples, -10.0, 10.0,
            tol_or(cfg, "flux_monotonicity_constant", 0.05));
        std::ostringstream name;
        name << rep.name << "_p" << p;
        rep.name = name.str();
        rep.scenario = "suite";
        ev.reports.push_back(std::move(rep));
    }

    ev.reports.push_back(profile_pretest(pretest_n, cfg));

    if (scaling_run) {
        EstimateReport rep = check_scaling_invariance(
            scaling_run->fields.back(), scaling_run->extension,
            EnergyParams{scaling_run->p, scaling_run->eps.back()}, cfg.R,
            scaling_run->radii);
        rep.scenario = "suite";
        rep.context["source_n"] = scaling_run->grid.n;
        ev.reports.push_back(std::move(rep));
    }

    {
        const Grid g = build_grid(pretest_n, cfg.side, {0.0, 0.0});
        const ScalarField control =
            cfg.tamper_negative_control
                ? ScalarField::sample(g, [](double x, double y) { return x - y; })
                : ScalarField::sample(g, [](double x, double y) { return x * x + y * y; });
        ev.negative_control = check_maxmin(control, nested_balls(cfg.R));
        ev.negative_control.name = "maxmin_negative_control";
        ev.negative_control.scenario = "suite";
    }
    return ev;
}

std::vector<ScalarField> random_interior_bumps(const Grid& grid, int count,
                                               std::uint64_t seed, double amp_lo,
                                               double amp_hi) {
    if (!(amp_lo > 0.0 && amp_lo <= amp_hi))
        throw std::invalid_argument("random_interior_bumps: need 0 < amp_lo <= amp_hi");
    std::mt19937_64 rng(seed);
    std::vector<ScalarField> out;
    out.reserve(count);
    const double s = grid.side;
    for (int i = 0; i < count; ++i) {
        const int k = 1 + int(rng() % 6);
        const int l = 1 + int(rng() % 6);
        const double amp = amp_lo * std::pow(amp_hi / amp_lo, unit_double(rng));
        ScalarField f = ScalarField::sample(grid, [&](double x, double y) {
            return amp * std::sin(k * kPi * (x + s / 2.0) / s) *
                   std::sin(l * kPi * (y + s / 2.0) / s);
        });
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix)
                if (grid.is_boundary_node(ix, iy)) f.at(ix, iy) = 0.0;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<ScalarField> boundary_vanishing_testfns(const Grid& grid, int count,
                                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ScalarField> out;
    out.reserve(count);
    const double s = grid.side;
    for (int i = 0; i < count; ++i) {
        const int k = 1 + int(rng() % 4);
        const int l = 1 + int(rng() % 4);
        const double amp = 0.5 + unit_double(rng);
        ScalarField f = ScalarField::sample(grid, [&](double x, double y) {
            return amp * std::sin(k * kPi * (x + s / 2.0) / s) *
                   std::sin(l * kPi * (y + s / 2.0) / s);
        });
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix)
                if (grid.is_boundary_node(ix, iy)) f.at(ix, iy) = 0.0;
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace ortholap
