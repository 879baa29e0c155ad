#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ortholap/suite.hpp"

using namespace ortholap;

namespace {

RunConfig quick_config() {
    RunConfig cfg;
    cfg.levels = 4;
    cfg.eps0 = 1e-2;
    cfg.ns = {33, 65};
    cfg.radii_count = 6;
    cfg.sweep_samples = 101;
    return cfg;
}

}  // namespace

TEST_CASE("run config validation names the violated invariant") {
    CHECK_NOTHROW(validate_run_config(RunConfig{}));

    auto expect_throw = [](RunConfig cfg) {
        CHECK_THROWS_AS(validate_run_config(cfg), std::invalid_argument);
    };

    RunConfig cfg;
    cfg.p = 1.0;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.p = 2.0;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.eps0 = 0.0;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.levels = 1;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.ns = {};
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.ns = {64};
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.ns = {7};
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.ns = {65, 33};
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.ns = {65, 65};
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.R = 0.99;  // violates R + 2h < side/2
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.scenario = "vortex";
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.radii_count = 1;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.radii_min_h = 2.0;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.sweep_samples = 2;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.workers = 0;
    expect_throw(cfg);
    cfg = RunConfig{};
    cfg.out = "";
    expect_throw(cfg);
}

TEST_CASE("scenario selection and exponent pinning") {
    RunConfig cfg;
    const auto all = config_scenarios(cfg);
    REQUIRE(all.size() == 5);
    CHECK(all[0].name == "affine");
    CHECK(all[1].name == "ustar-p1.2");
    CHECK(all[2].name == "ustar-p1.5");
    CHECK(all[3].name == "ustar-p1.8");
    CHECK(all[4].name == "oscillatory");

    CHECK(all[1].p == doctest::Approx(1.2));
    CHECK(all[2].p == doctest::Approx(1.5));
    CHECK(all[3].p == doctest::Approx(1.8));
    CHECK(all[0].p == doctest::Approx(cfg.p));
    CHECK(all[4].p == doctest::Approx(cfg.p));

    cfg.scenario = "oscillatory";
    const auto one = config_scenarios(cfg);
    REQUIRE(one.size() == 1);
    CHECK(one[0].name == "oscillatory");

    CHECK_THROWS_AS(make_scenario("vortex"), std::invalid_argument);

    // the conjugate-exponent data of ustar scenarios is center-symmetric
    const Scenario us = make_scenario("ustar-p1.5");
    CHECK(us.has_exact);
    CHECK(us.data(0.5, 0.25) == doctest::Approx(std::pow(0.5, 3) - std::pow(0.25, 3)));
}

TEST_CASE("radii ladder spans [max(4h, R/32), R/2] log-uniformly") {
    const double R = 0.8, h = 2.0 / 64;
    const auto radii = radii_ladder(R, h, 8, 4.0);
    REQUIRE(radii.size() == 8);
    CHECK(radii.front() == doctest::Approx(R / 2).epsilon(1e-12));
    CHECK(radii.back() == doctest::Approx(std::max(4.0 * h, R / 32)).epsilon(1e-12));
    for (size_t k = 0; k + 1 < radii.size(); ++k) CHECK(radii[k + 1] < radii[k]);
    for (double r : radii) {
        CHECK(r >= 4.0 * h * (1 - 1e-12));
        CHECK(r <= R / 2 * (1 + 1e-12));
    }

    // log-spacing: consecutive ratios are equal
    const double q = radii[1] / radii[0];
    for (size_t k = 1; k + 1 < radii.size(); ++k)
        CHECK(radii[k + 1] / radii[k] == doctest::Approx(q).epsilon(1e-9));

    CHECK_THROWS_AS(radii_ladder(R, h, 1, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(radii_ladder(R, h, 8, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(radii_ladder(0.8, 0.15, 8, 4.0), std::invalid_argument);
}

TEST_CASE("stable hash is a frozen FNV-1a recurrence") {
    CHECK(stable_hash("") == 1469598103934665603ull);

    auto reference = [](const std::string& s) {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    };
    for (const std::string s : {"a", "abc", "oscillatory", "ustar-p1.2"})
        CHECK(stable_hash(s) == reference(s));
    CHECK(stable_hash("affine") != stable_hash("oscillatory"));
}

TEST_CASE("random interior bumps are deterministic and boundary-clean") {
    const Grid g = build_grid(33, 2.0, {0.0, 0.0});
    const auto bumps = random_interior_bumps(g, 10, 77, 1e-3, 1.0);
    REQUIRE(bumps.size() == 10);
    for (const ScalarField& b : bumps) {
        double sup = 0.0;
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                if (g.is_boundary_node(ix, iy)) CHECK(b.at(ix, iy) == 0.0);
                sup = std::max(sup, std::abs(b.at(ix, iy)));
            }
        CHECK(sup > 0.0);
        CHECK(sup <= 1.0 * (1 + 1e-12));
    }

    const auto again = random_interior_bumps(g, 10, 77, 1e-3, 1.0);
    for (size_t i = 0; i < bumps.size(); ++i)
        for (size_t k = 0; k < bumps[i].values().size(); ++k)
            CHECK(bumps[i][k] == again[i][k]);

    const auto other = random_interior_bumps(g, 10, 78, 1e-3, 1.0);
    bool any_diff = false;
    for (size_t k = 0; k < other[0].values().size(); ++k)
        any_diff = any_diff || other[0][k] != bumps[0][k];
    CHECK(any_diff);
}

TEST_CASE("test functions vanish on the grid boundary") {
    const Grid g = build_grid(33, 2.0, {0.0, 0.0});
    const auto tfs = boundary_vanishing_testfns(g, 6, 123);
    REQUIRE(tfs.size() == 6);
    for (const ScalarField& t : tfs) {
        for (int ix = 0; ix < g.n; ++ix) {
            CHECK(t.at(ix, 0) == 0.0);
            CHECK(t.at(ix, g.n - 1) == 0.0);
            CHECK(t.at(0, ix) == 0.0);
            CHECK(t.at(g.n - 1, ix) == 0.0);
        }
        double sup = 0.0;
        for (double v : t.values()) sup = std::max(sup, std::abs(v));
        CHECK(sup > 0.0);
    }
}

TEST_CASE("pipeline pretest hits the lattice drift of the exact profile") {
    // with min radius 4h, the largest abscissa inside is 3h, and the
    // centered-difference bias of the cubic makes the drift exactly
    // 2h^2 / (6 * 9 h^2) = 1/27
    for (int n : {65, 129}) {
        const EstimateReport rep = profile_pretest(n, RunConfig{});
        CHECK(rep.name == "oscillation_profile_pretest");
        CHECK(rep.scenario == "suite");
        CHECK(rep.pass);
        CHECK(rep.lhs == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
        CHECK(rep.rhs == 0.05);
    }
}

TEST_CASE("scenario run produces a converged ladder with matching boundary rows") {
    const RunConfig cfg = quick_config();
    const Scenario sc = make_scenario("oscillatory", cfg.p);
    const ScenarioRun run = run_scenario(sc, 33, cfg);

    CHECK(run.scenario == "oscillatory");
    CHECK(run.grid.n == 33);
    REQUIRE(run.fields.size() == 4);
    REQUIRE(run.eps.size() == 4);
    CHECK(run.eps.front() == doctest::Approx(1e-2));
    CHECK(run.ladder.all_converged);
    CHECK(!run.from_snapshots);
    CHECK(run.data_scale == doctest::Approx(1.5).epsilon(0.2));

    for (int iy = 0; iy < run.grid.n; ++iy)
        for (int ix = 0; ix < run.grid.n; ++ix)
            if (run.grid.is_boundary_node(ix, iy))
                CHECK(run.fields.back().at(ix, iy) == run.boundary.at(ix, iy));
}

TEST_CASE("rebuild from stored fields reproduces the ladder differences") {
    const RunConfig cfg = quick_config();
    const Scenario sc = make_scenario("ustar-p1.5", cfg.p);
    const ScenarioRun run = run_scenario(sc, 33, cfg);

    const ScenarioRun re = rebuild_scenario(sc, 33, cfg, run.eps, run.fields);
    CHECK(re.from_snapshots);
    REQUIRE(re.ladder.sup_diffs.size() == run.ladder.sup_diffs.size());
    for (size_t k = 0; k < re.ladder.sup_diffs.size(); ++k) {
        CHECK(re.ladder.sup_diffs[k] == run.ladder.sup_diffs[k]);
        CHECK(re.ladder.grad_lp_diffs[k] ==
              doctest::Approx(run.ladder.grad_lp_diffs[k]).epsilon(1e-12));
    }

    // tampered interior is accepted (it is data), tampered boundary is not
    auto fields = run.fields;
    fields.back().at(16, 16) += 0.5;
    CHECK_NOTHROW(rebuild_scenario(sc, 33, cfg, run.eps, fields));
    fields = run.fields;
    fields.back().at(0, 5) += 0.5;
    CHECK_THROWS_AS(rebuild_scenario(sc, 33, cfg, run.eps, fields),
                    std::invalid_argument);

    CHECK_THROWS_AS(rebuild_scenario(sc, 33, cfg, {1e-2}, {run.fields.front()}),
                    std::invalid_argument);
    CHECK_THROWS_AS(rebuild_scenario(sc, 65, cfg, run.eps, run.fields),
                    std::invalid_argument);
}

TEST_CASE("scenario reports cover every estimate and pass on affine data") {
    const RunConfig cfg = quick_config();
    const Scenario sc = make_scenario("affine", cfg.p);
    const ScenarioRun coarse = run_scenario(sc, 33, cfg);
    const ScenarioRun fine = run_scenario(sc, 65, cfg);

    const auto reports = scenario_reports(coarse, fine, cfg);
    std::set<std::string> names;
    for (const EstimateReport& r : reports) {
        names.insert(r.name);
        CHECK(r.pass);
        CHECK(r.scenario == "affine");
        CHECK(r.context.count("n") == 1);
        CHECK(r.context.count("p") == 1);
        CHECK(r.context.count("eps") == 1);
        CHECK(r.context.at("n") == 65.0);
    }
    const std::set<std::string> expected = {
        "energy_minimality",
        "derivative_extrema_principle",
        "lebesgue_oscillation",
        "oscillation_modulus_stability",
        "gradient_sup_bound_stability",
        "derivative_energy_bound_stability",
        "cutoff_derivative_bound_stability",
        "regularization_convergence",
        "minimizer_energy_comparison_stability",
    };
    CHECK(names == expected);  // affine data skips the linearized-equation decay

    CHECK_THROWS_AS(scenario_reports(fine, coarse, cfg), std::invalid_argument);
    const ScenarioRun other = run_scenario(make_scenario("oscillatory", cfg.p), 65, cfg);
    CHECK_THROWS_AS(scenario_reports(coarse, other, cfg), std::invalid_argument);
}

TEST_CASE("suite reports include the sweeps and a failing negative control") {
    RunConfig cfg = quick_config();
    const SuiteEvaluation ev = suite_reports(nullptr, 65, cfg);

    std::vector<std::string> names;
    for (const EstimateReport& r : ev.reports) {
        names.push_back(r.name);
        CHECK(r.scenario == "suite");
        CHECK(r.pass);
    }
    REQUIRE(names.size() == 4);
    CHECK(names[0] == "flux_monotonicity_constant_p1.1");
    CHECK(names[1] == "flux_monotonicity_constant_p1.5");
    CHECK(names[2] == "flux_monotonicity_constant_p1.9");
    CHECK(names[3] == "oscillation_profile_pretest");

    CHECK(ev.negative_control.name == "maxmin_negative_control");
    CHECK(ev.negative_control.scenario == "suite");
    CHECK(!ev.negative_control.pass);

    // a tampered control passes, which the harness must treat as an alarm
    cfg.tamper_negative_control = true;
    const SuiteEvaluation tampered = suite_reports(nullptr, 65, cfg);
    CHECK(tampered.negative_control.pass);
}

TEST_CASE("suite reports measure scale invariance of a solved run") {
    const RunConfig cfg = quick_config();
    const Scenario sc = make_scenario("oscillatory", cfg.p);
    const ScenarioRun run = run_scenario(sc, 33, cfg);

    const SuiteEvaluation ev = suite_reports(&run, 33, cfg);
    bool found = false;
    for (const EstimateReport& r : ev.reports)
        if (r.name == "measured_ratio_scale_invariance") {
            found = true;
            CHECK(r.pass);
            CHECK(r.lhs < 1e-9);
            CHECK(r.context.at("source_n") == 33.0);
        }
    CHECK(found);
}

TEST_CASE("per-check tolerance overrides reach the reports") {
    RunConfig cfg = quick_config();
    cfg.tolerance["oscillation_profile_pretest"] = 0.001;  // below the 1/27 drift
    const EstimateReport rep = profile_pretest(65, cfg);
    CHECK(rep.rhs == 0.001);
    CHECK(!rep.pass);
}
