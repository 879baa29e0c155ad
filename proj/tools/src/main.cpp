// Command-line driver: solve / verify / sweep over the scenario suite.
//
// Exit codes: 0 success, 1 configuration or artifact error, 2 solver or
// check failure. Error text names the violated invariant.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ortholap/snapshot.hpp"
#include "ortholap/suite.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ortholap;

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
}

RunConfig apply_json(RunConfig cfg, const json& j, const std::string& path) {
    if (!j.is_object())
        throw std::invalid_argument("config root must be a JSON object: " + path);
    static const std::set<std::string> known = {
        "p",   "eps0",     "levels", "ns",        "side",
        "R",   "radii_count", "radii_min_h", "scenario",  "out",
        "seed", "tolerance", "tamper_negative_control", "reuse_fields",
        "sweep_samples", "workers"};
    for (const auto& item : j.items())
        if (known.find(item.key()) == known.end())
            throw std::invalid_argument("unknown config key '" + item.key() + "' in " +
                                        path);
    try {
        if (j.contains("p")) cfg.p = j.at("p").get<double>();
        if (j.contains("eps0")) cfg.eps0 = j.at("eps0").get<double>();
        if (j.contains("levels")) cfg.levels = j.at("levels").get<int>();
        if (j.contains("ns")) cfg.ns = j.at("ns").get<std::vector<int>>();
        if (j.contains("side")) cfg.side = j.at("side").get<double>();
        if (j.contains("R")) cfg.R = j.at("R").get<double>();
        if (j.contains("radii_count")) cfg.radii_count = j.at("radii_count").get<int>();
        if (j.contains("radii_min_h")) cfg.radii_min_h = j.at("radii_min_h").get<double>();
        if (j.contains("scenario")) cfg.scenario = j.at("scenario").get<std::string>();
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tolerance")) {
            cfg.tolerance.clear();
            for (const auto& item : j.at("tolerance").items())
                cfg.tolerance[item.key()] = item.value().get<double>();
        }
        if (j.contains("tamper_negative_control"))
            cfg.tamper_negative_control = j.at("tamper_negative_control").get<bool>();
        if (j.contains("reuse_fields")) cfg.reuse_fields = j.at("reuse_fields").get<bool>();
        if (j.contains("sweep_samples")) cfg.sweep_samples = j.at("sweep_samples").get<int>();
        if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("config type error in " + path + ": " + e.what());
    }
    return cfg;
}

json config_echo(const RunConfig& cfg) {
    json j;
    j["p"] = cfg.p;
    j["eps0"] = cfg.eps0;
    j["levels"] = cfg.levels;
    j["ns"] = cfg.ns;
    j["side"] = cfg.side;
    j["R"] = cfg.R;
    j["radii_count"] = cfg.radii_count;
    j["radii_min_h"] = cfg.radii_min_h;
    j["scenario"] = cfg.scenario;
    j["out"] = cfg.out;
    j["seed"] = cfg.seed;
    j["tolerance"] = json::object();
    for (const auto& [name, tol] : cfg.tolerance) j["tolerance"][name] = tol;
    j["tamper_negative_control"] = cfg.tamper_negative_control;
    j["reuse_fields"] = cfg.reuse_fields;
    j["sweep_samples"] = cfg.sweep_samples;
    j["workers"] = cfg.workers;
    return j;
}

json report_json(const EstimateReport& r) {
    json j;
    j["name"] = r.name;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    if (r.ratio)
        j["ratio"] = *r.ratio;
    else
        j["ratio"] = nullptr;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["scenario"] = r.scenario;
    j["context"] = json::object();
    for (const auto& [key, val] : r.context) j["context"][key] = val;
    return j;
}

void write_text_file(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << body;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

fs::path scenario_dir(const RunConfig& cfg, const std::string& name, int n) {
    return fs::path(cfg.out) / name / std::to_string(n);
}

std::vector<double> ladder_eps(const RunConfig& cfg) {
    std::vector<double> eps;
    eps.reserve(static_cast<size_t>(cfg.levels));
    for (int k = 0; k < cfg.levels; ++k) eps.push_back(cfg.eps0 * std::pow(4.0, -k));
    return eps;
}

void write_run_artifacts(const ScenarioRun& run, const RunConfig& cfg) {
    const fs::path base = scenario_dir(cfg, run.scenario, run.grid.n);
    for (size_t k = 0; k < run.fields.size(); ++k) {
        const fs::path dir = base / format_double(run.eps[k]);
        fs::create_directories(dir);
        write_snapshot_file((dir / "field.txt").string(), run.fields[k], run.p,
                            run.eps[k]);
    }
    json j;
    j["config"] = config_echo(cfg);
    j["scenario"] = run.scenario;
    j["n"] = run.grid.n;
    j["p"] = run.p;
    json lad;
    lad["eps"] = run.ladder.eps;
    lad["sup_diffs"] = run.ladder.sup_diffs;
    lad["grad_lp_diffs"] = run.ladder.grad_lp_diffs;
    lad["R"] = run.ladder.R;
    lad["all_converged"] = run.ladder.all_converged;
    lad["cauchy_converged"] = run.ladder.cauchy_converged;
    lad["solves"] = json::array();
    for (const auto& s : run.ladder.solves) {
        json sj;
        sj["iterations"] = s.iterations;
        sj["final_residual"] = s.final_residual;
        sj["final_energy"] = s.final_energy;
        sj["energy_history"] = s.energy_history;
        sj["wall_time_s"] = s.wall_time_s;
        sj["converged"] = s.converged;
        sj["failure_reason"] = s.failure_reason;
        sj["cg_iterations_total"] = s.cg_iterations_total;
        lad["solves"].push_back(std::move(sj));
    }
    j["ladder"] = std::move(lad);
    write_text_file(base / "solve.json", j.dump(2) + "\n");
}

ScenarioRun load_run(const Scenario& sc, int n, const RunConfig& cfg) {
    const fs::path base = scenario_dir(cfg, sc.name, n);
    std::vector<double> eps = ladder_eps(cfg);
    std::vector<ScalarField> fields;
    fields.reserve(eps.size());
    for (double e : eps) {
        const fs::path path = base / format_double(e) / "field.txt";
        if (!fs::exists(path))
            throw std::invalid_argument("missing field artifact: " + path.string() +
                                        " (run the solve command first)");
        Snapshot snap = read_snapshot_file(path.string());
        if (std::abs(snap.p - sc.p) > 1e-12 * (1.0 + std::abs(sc.p)))
            throw std::invalid_argument("artifact exponent mismatch in " + path.string());
        if (std::abs(snap.eps - e) > 1e-12 * (1.0 + e))
            throw std::invalid_argument("artifact regularization mismatch in " +
                                        path.string());
        fields.push_back(std::move(snap.field));
    }
    return rebuild_scenario(sc, n, cfg, std::move(eps), std::move(fields));
}

ScenarioRun make_run(const Scenario& sc, int n, const RunConfig& cfg,
                     bool write_artifacts) {
    if (cfg.reuse_fields) return load_run(sc, n, cfg);
    ScenarioRun run = run_scenario(sc, n, cfg);
    if (write_artifacts) write_run_artifacts(run, cfg);
    return run;
}

/// Runs fn(0..count-1) on up to `workers` threads; rethrows the first error.
template <typename Fn>
void run_jobs(int workers, int count, Fn&& fn) {
    if (count <= 0) return;
    const int w = std::max(1, std::min(workers, count));
    if (w == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
    auto body = [&] {
        for (int i; (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(w));
    for (int t = 0; t < w; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string csv_row(const EstimateReport& r) {
    std::ostringstream os;
    os << r.scenario << ',';
    auto it = r.context.find("n");
    if (it != r.context.end()) os << static_cast<int>(it->second);
    os << ',' << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
       << ',';
    if (r.ratio) os << format_double(*r.ratio);
    os << ',' << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
    return os.str();
}

void print_report_line(const EstimateReport& r) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.scenario << '/' << r.name
              << "  lhs=" << format_double(r.lhs) << "  rhs=" << format_double(r.rhs);
    if (r.ratio) std::cout << "  ratio=" << format_double(*r.ratio);
    std::cout << "  tol=" << format_double(r.tolerance) << '\n';
}

struct Job {
    const Scenario* sc = nullptr;
    int n = 0;
};

int cmd_solve(const RunConfig& cfg) {
    const auto scenarios = config_scenarios(cfg);
    std::vector<Job> jobs;
    for (const auto& sc : scenarios)
        for (int n : cfg.ns) jobs.push_back({&sc, n});
    std::vector<ScenarioRun> runs(jobs.size());
    run_jobs(cfg.workers, static_cast<int>(jobs.size()), [&](int i) {
        runs[static_cast<size_t>(i)] =
            make_run(*jobs[static_cast<size_t>(i)].sc, jobs[static_cast<size_t>(i)].n,
                     cfg, /*write_artifacts=*/true);
    });
    for (const auto& run : runs) {
        int newton_total = 0;
        for (const auto& s : run.ladder.solves) newton_total += s.iterations;
        std::cout << "solved " << run.scenario << " n=" << run.grid.n << " levels="
                  << run.eps.size() << " final_eps=" << format_double(run.eps.back())
                  << " newton_total=" << newton_total
                  << (run.ladder.cauchy_converged ? " ladder-cauchy" : "") << '\n';
    }
    std::cout << "artifacts under " << cfg.out << '\n';
    return 0;
}

const ScenarioRun* pick_scaling_run(const std::vector<ScenarioRun>& fine_runs) {
    for (const auto& run : fine_runs)
        if (run.scenario == "oscillatory") return &run;
    for (const auto& run : fine_runs)
        if (run.scenario != "affine") return &run;
    return nullptr;
}

int cmd_verify(const RunConfig& cfg) {
    if (cfg.ns.size() < 2)
        throw std::invalid_argument(
            "verify requires at least two resolutions in ns (stability checks compare "
            "the two finest)");
    if (cfg.levels < 4)
        throw std::invalid_argument(
            "verify requires levels >= 4 (the convergence check needs three "
            "consecutive ladder differences)");
    const auto scenarios = config_scenarios(cfg);
    const int coarse_n = cfg.ns[cfg.ns.size() - 2];
    const int fine_n = cfg.ns.back();
    std::vector<Job> jobs;
    for (const auto& sc : scenarios) {
        jobs.push_back({&sc, coarse_n});
        jobs.push_back({&sc, fine_n});
    }
    std::vector<ScenarioRun> runs(jobs.size());
    run_jobs(cfg.workers, static_cast<int>(jobs.size()), [&](int i) {
        runs[static_cast<size_t>(i)] =
            make_run(*jobs[static_cast<size_t>(i)].sc, jobs[static_cast<size_t>(i)].n,
                     cfg, /*write_artifacts=*/!cfg.reuse_fields);
    });

    std::vector<EstimateReport> all;
    for (size_t i = 0; i < scenarios.size(); ++i) {
        const ScenarioRun& coarse = runs[2 * i];
        const ScenarioRun& fine = runs[2 * i + 1];
        auto reps = scenario_reports(coarse, fine, cfg);
        json j;
        j["config"] = config_echo(cfg);
        j["scenario"] = fine.scenario;
        j["coarse_n"] = coarse.grid.n;
        j["fine_n"] = fine.grid.n;
        j["reports"] = json::array();
        for (const auto& r : reps) j["reports"].push_back(report_json(r));
        write_text_file(scenario_dir(cfg, fine.scenario, fine.grid.n) / "reports.json",
                        j.dump(2) + "\n");
        all.insert(all.end(), reps.begin(), reps.end());
    }

    std::vector<ScenarioRun> fine_runs;
    for (size_t i = 0; i < scenarios.size(); ++i) fine_runs.push_back(runs[2 * i + 1]);
    const ScenarioRun* scaling = pick_scaling_run(fine_runs);
    SuiteEvaluation ev = suite_reports(scaling, fine_n, cfg);
    {
        json j;
        j["config"] = config_echo(cfg);
        j["reports"] = json::array();
        for (const auto& r : ev.reports) j["reports"].push_back(report_json(r));
        j["negative_control"] = report_json(ev.negative_control);
        write_text_file(fs::path(cfg.out) / "suite" / "reports.json", j.dump(2) + "\n");
    }
    all.insert(all.end(), ev.reports.begin(), ev.reports.end());

    std::ostringstream csv;
    csv << "scenario,n,check,lhs,rhs,ratio,tolerance,pass\n";
    for (const auto& r : all) csv << csv_row(r);
    csv << csv_row(ev.negative_control);
    write_text_file(fs::path(cfg.out) / "summary.csv", csv.str());

    int failures = 0;
    for (const auto& r : all) {
        print_report_line(r);
        if (!r.pass) ++failures;
    }
    if (ev.negative_control.pass) {
        std::cout << "[ALARM] negative control passed; the harness would not catch a "
                     "broken field\n";
        ++failures;
    } else {
        std::cout << "[OK] negative control failed as required\n";
    }
    if (failures > 0) {
        std::cout << "VERIFY FAILED (" << failures << " checks)\n";
        return 2;
    }
    std::cout << "VERIFY OK (" << all.size() << " checks, negative control rejected)\n";
    return 0;
}

void emit_sweep_rows(std::ostream& os, const ScenarioRun& run, const RunConfig& cfg) {
    auto row = [&](const std::string& check, double eps, double r, double ratio) {
        os << check << ',' << run.scenario << ',' << format_double(run.p) << ','
           << format_double(eps) << ',' << run.grid.n << ',' << format_double(r) << ','
           << format_double(ratio) << '\n';
    };
    const double R = cfg.R;
    const ScalarField& u = run.fields.back();
    const double eps_last = run.eps.back();
    const EnergyParams params{run.p, eps_last};

    const auto prof = oscillation_profile(u, R, run.radii, run.p, eps_last);
    for (size_t i = 0; i < prof.radii.size(); ++i)
        row("oscillation_modulus", eps_last, prof.radii[i],
            std::max(prof.c1[i], prof.c2[i]));

    const ScalarField d1 = node_derivative(u, 1);
    const ScalarField d2 = node_derivative(u, 2);
    for (double r : run.radii) {
        const auto rep1 = check_lebesgue(d1, r, R);
        const auto rep2 = check_lebesgue(d2, r, R);
        row("lebesgue_oscillation", eps_last, r,
            std::max(rep1.ratio.value_or(0.0), rep2.ratio.value_or(0.0)));
    }

    row("gradient_sup_bound", eps_last, R / 2, lipschitz_ratio(u, params, R));
    row("cutoff_derivative_bound", eps_last, R, caccioppoli_ratio(u, params, R));

    const double lp_ext = lp_gradient_norm(run.extension, BallSpec{R}, run.p);
    const double ball_measure = std::numbers::pi * R * R;
    for (size_t k = 0; k < run.fields.size(); ++k) {
        const EnergyParams pk{run.p, run.eps[k]};
        row("derivative_energy_bound", run.eps[k], R / 2,
            grad_l2_ratio(run.fields[k], run.extension, pk, R));
        const double lp_k = lp_gradient_norm(run.fields[k], BallSpec{R}, run.p);
        row("minimizer_energy_comparison", run.eps[k], R,
            lp_k / (lp_ext + std::pow(run.eps[k], run.p / 2) * ball_measure));
    }
}

int cmd_sweep(const RunConfig& cfg) {
    const auto scenarios = config_scenarios(cfg);
    std::vector<Job> jobs;
    for (const auto& sc : scenarios)
        for (int n : cfg.ns) jobs.push_back({&sc, n});
    std::vector<ScenarioRun> runs(jobs.size());
    run_jobs(cfg.workers, static_cast<int>(jobs.size()), [&](int i) {
        runs[static_cast<size_t>(i)] =
            make_run(*jobs[static_cast<size_t>(i)].sc, jobs[static_cast<size_t>(i)].n,
                     cfg, /*write_artifacts=*/!cfg.reuse_fields);
    });
    std::ostringstream csv;
    csv << "check,scenario,p,eps,n,r,ratio\n";
    for (const auto& run : runs) emit_sweep_rows(csv, run, cfg);
    const fs::path path = fs::path(cfg.out) / "sweep.csv";
    write_text_file(path, csv.str());
    std::cout << "wrote " << path.string() << " (" << runs.size() << " runs)\n";
    return 0;
}

/// Per-subcommand option set; flags override config-file keys, the
/// ORTHOLAP_WORKERS environment variable overrides the worker count.
struct CommonOpts {
    std::string config_path;
    double p = 0, eps0 = 0, side = 0, R = 0, radii_min_h = 0;
    int levels = 0, radii_count = 0, sweep_samples = 0, workers = 0;
    std::vector<int> ns;
    std::string scenario, out;
    std::uint64_t seed = 0;
    bool tamper = false, reuse = false;
    std::map<std::string, CLI::Option*> opt;

    void attach(CLI::App* sub) {
        opt["config"] = sub->add_option("-c,--config", config_path,
                                        "JSON config file; flags override its keys");
        opt["p"] = sub->add_option("--p", p, "exponent, strictly between 1 and 2");
        opt["eps0"] = sub->add_option("--eps0", eps0, "initial regularization");
        opt["levels"] = sub->add_option("--levels", levels, "ladder depth (eps ratio 4)");
        opt["ns"] = sub->add_option("--n", ns, "grid resolutions (odd, ascending)");
        opt["side"] = sub->add_option("--side", side, "domain side length");
        opt["R"] = sub->add_option("--R", R, "reference ball radius");
        opt["radii_count"] =
            sub->add_option("--radii-count", radii_count, "radii ladder length");
        opt["radii_min_h"] = sub->add_option("--radii-min-h", radii_min_h,
                                             "smallest radius in units of h (>= 4)");
        opt["scenario"] =
            sub->add_option("--scenario", scenario, "scenario name or 'standard'");
        opt["out"] = sub->add_option("--out", out, "output directory");
        opt["seed"] = sub->add_option("--seed", seed, "seed for randomized checks");
        opt["sweep_samples"] = sub->add_option("--sweep-samples", sweep_samples,
                                               "monotonicity sweep resolution");
        opt["workers"] = sub->add_option("--workers", workers, "worker thread count");
        opt["tamper"] = sub->add_flag("--tamper-negative-control", tamper,
                                      "harness self-test: make the control pass");
        opt["reuse"] = sub->add_flag("--reuse-fields", reuse,
                                     "load ladder fields instead of solving");
    }

    RunConfig build() const {
        RunConfig cfg;
        if (opt.at("config")->count())
            cfg = apply_json(cfg, load_json_file(config_path), config_path);
        if (const char* env = std::getenv("ORTHOLAP_WORKERS")) {
            int w = 0;
            auto res = std::from_chars(env, env + std::string(env).size(), w);
            if (res.ec != std::errc() || *res.ptr != '\0' || w < 1)
                throw std::invalid_argument(
                    "ORTHOLAP_WORKERS must be a positive integer");
            cfg.workers = w;
        }
        if (opt.at("p")->count()) cfg.p = p;
        if (opt.at("eps0")->count()) cfg.eps0 = eps0;
        if (opt.at("levels")->count()) cfg.levels = levels;
        if (opt.at("ns")->count()) cfg.ns = ns;
        if (opt.at("side")->count()) cfg.side = side;
        if (opt.at("R")->count()) cfg.R = R;
        if (opt.at("radii_count")->count()) cfg.radii_count = radii_count;
        if (opt.at("radii_min_h")->count()) cfg.radii_min_h = radii_min_h;
        if (opt.at("scenario")->count()) cfg.scenario = scenario;
        if (opt.at("out")->count()) cfg.out = out;
        if (opt.at("seed")->count()) cfg.seed = seed;
        if (opt.at("sweep_samples")->count()) cfg.sweep_samples = sweep_samples;
        if (opt.at("workers")->count()) cfg.workers = workers;
        if (opt.at("tamper")->count()) cfg.tamper_negative_control = tamper;
        if (opt.at("reuse")->count()) cfg.reuse_fields = reuse;
        validate_run_config(cfg);
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthotropic p-Laplace solver and verification suite"};
    app.require_subcommand(1);
    CLI::App* solve =
        app.add_subcommand("solve", "Solve the regularization ladder, write snapshots");
    CLI::App* verify =
        app.add_subcommand("verify", "Run every estimate check, write reports");
    CLI::App* sweep =
        app.add_subcommand("sweep", "Tabulate measured constants over the run grid");
    CommonOpts solve_opts, verify_opts, sweep_opts;
    solve_opts.attach(solve);
    verify_opts.attach(verify);
    sweep_opts.attach(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_opts.build());
        if (verify->parsed()) return cmd_verify(verify_opts.build());
        return cmd_sweep(sweep_opts.build());
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 2;
    }
}
