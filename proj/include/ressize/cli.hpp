#pragma once

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ressize/fetch.hpp"
#include "ressize/io.hpp"
#include "ressize/sizing.hpp"
#include "ressize/sweep.hpp"

namespace ressize {

// Exit codes: 0 ok, 2 infeasible, 3 config error, 4 solver failure.
enum ExitCode : int { kOk = 0, kInfeasible = 2, kConfigError = 3, kSolverFailure = 4 };

namespace detail {

struct SolverFlags {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    long max_iters = 0;
    int stall_window = 1000;
    int refactor_interval = 100;
    bool trace = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--feas-tol", feas_tol, "primal feasibility tolerance");
        cmd->add_option("--opt-tol", opt_tol, "reduced-cost optimality tolerance");
        cmd->add_option("--max-iters", max_iters, "pivot limit (0 = 50*(rows+cols))");
        cmd->add_option("--stall-window", stall_window, "non-improving pivots before Bland's rule");
        cmd->add_option("--refactor-interval", refactor_interval, "pivots between basis refactorizations");
        cmd->add_flag("--trace", trace, "log one line per simplex pivot to stderr");
    }

    SizingOptions sizing() const {
        SizingOptions o;
        o.solver.feas_tol = feas_tol;
        o.solver.opt_tol = opt_tol;
        o.solver.max_iters = max_iters;
        o.solver.stall_window = stall_window;
        o.solver.refactor_interval = refactor_interval;
        if (trace)
            o.solver.on_pivot = [](const PivotTrace& t) {
                std::fprintf(stderr, "pivot %ld phase %d in %d out %d step %.6g obj %.10g%s\n", t.iteration, t.phase,
                             t.entering, t.leaving, t.step, t.objective, t.bland ? " [bland]" : "");
            };
        return o;
    }
};

inline ValidatedScenario load_scenario(const std::string& path, std::size_t resample_factor) {
    ScenarioConfig cfg = read_scenario(path);
    if (resample_factor > 1) cfg = resample_scenario(std::move(cfg), resample_factor);
    return validate_scenario(std::move(cfg));
}

inline void print_result(const SizingResult& res) {
    std::printf("status: %s\n", status_name(res.status));
    if (res.status != SolveStatus::optimal) return;
    std::printf("achieved share: %.4f\n", res.achieved_share);
    std::printf("cost total: %.6g (conv opex %.6g, capex %.6g, ren opex %.6g)\n", res.cost.total,
                res.cost.opex_conventional, res.cost.capex_renewable, res.cost.opex_renewable);
    for (const auto& [name, mw] : res.capacities)
        std::printf("  %-12s %10.3f MW (%s)\n", name.c_str(), mw, res.technology.at(name).c_str());
    for (const auto& note : res.notes) std::printf("note: %s\n", note.c_str());
}

} // namespace detail

inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"capacity sizing for high-renewable-share power systems"};
    app.require_subcommand(1);

    // validate
    std::string val_path;
    auto* cmd_validate = app.add_subcommand("validate", "check a scenario file and print its shape");
    cmd_validate->add_option("scenario", val_path, "scenario JSON")->required();

    // solve
    std::string solve_path, solve_out, solve_mps;
    std::size_t solve_resample = 1;
    detail::SolverFlags solve_flags;
    auto* cmd_solve = app.add_subcommand("solve", "size one scenario and write results");
    cmd_solve->add_option("scenario", solve_path, "scenario JSON")->required();
    cmd_solve->add_option("--out", solve_out, "output directory")->required();
    cmd_solve->add_option("--resample", solve_resample, "widen the cadence by an integer factor");
    cmd_solve->add_option("--mps", solve_mps, "also dump the LP in MPS format");
    solve_flags.attach(cmd_solve);

    // sweep
    std::string sweep_path, sweep_out, sweep_base;
    double alpha_start = 0.0, alpha_end = 1.0, alpha_step = 0.05;
    std::size_t sweep_resample = 1;
    int sweep_jobs = 1;
    detail::SolverFlags sweep_flags;
    auto* cmd_sweep = app.add_subcommand("sweep", "solve over a grid of renewable-share targets");
    cmd_sweep->add_option("scenario", sweep_path, "scenario JSON")->required();
    cmd_sweep->add_option("--alpha-start", alpha_start, "first alpha")->required();
    cmd_sweep->add_option("--alpha-end", alpha_end, "last alpha")->required();
    cmd_sweep->add_option("--alpha-step", alpha_step, "grid step")->required();
    cmd_sweep->add_option("--out", sweep_out, "output directory")->required();
    cmd_sweep->add_option("--base", sweep_base, "base-case scenario for cost normalization");
    cmd_sweep->add_option("--jobs", sweep_jobs, "worker threads (1 = serial)");
    cmd_sweep->add_option("--resample", sweep_resample, "widen the cadence by an integer factor");
    sweep_flags.attach(cmd_sweep);

    // report
    std::string report_dir, granularity = "daily";
    auto* cmd_report = app.add_subcommand("report", "aggregate a results directory into a generation-mix table");
    cmd_report->add_option("results", report_dir, "directory written by solve")->required();
    cmd_report->add_option("--granularity", granularity, "daily|monthly|hourly")
        ->check(CLI::IsMember({"daily", "monthly", "hourly"}));

    // fetch (optional feature)
    FetchRequest fetch_req;
    std::string fetch_cache = ".";
    auto* cmd_fetch = app.add_subcommand("fetch", "download an hourly capacity-factor profile (cached)");
    cmd_fetch->add_option("--lat", fetch_req.lat, "latitude")->required();
    cmd_fetch->add_option("--lon", fetch_req.lon, "longitude")->required();
    cmd_fetch->add_option("--year", fetch_req.year, "calendar year")->required();
    cmd_fetch->add_option("--technology", fetch_req.technology, "pv|wind")
        ->check(CLI::IsMember({"pv", "wind"}))
        ->required();
    cmd_fetch->add_option("--cache", fetch_cache, "cache directory");
    cmd_fetch->add_option("--base-url", fetch_req.base_url, "provider base URL");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (cmd_validate->parsed()) {
            auto s = detail::load_scenario(val_path, 1);
            const auto& cfg = s.config();
            std::printf("%s: ok\n", cfg.name.c_str());
            std::printf("horizon %zu steps of %.3g h, alpha %.4g\n", s.horizon(), s.dt_hours(), cfg.alpha);
            std::printf("plants: %zu conventional, %zu renewable, %zu hydro, %zu solar-thermal\n",
                        cfg.conventional.size(), cfg.renewables.size(), cfg.hydro.size(), cfg.solar_thermal.size());
            return kOk;
        }

        if (cmd_solve->parsed()) {
            auto s = detail::load_scenario(solve_path, solve_resample);
            if (!solve_mps.empty()) {
                auto lp = build_lp(s);
                std::ofstream os(solve_mps);
                if (!os) throw IoError("cannot write " + solve_mps);
                write_mps(lp, os, s.config().name);
            }
            auto res = size_scenario(s, solve_flags.sizing());
            write_results(res, solve_out);
            if (res.status == SolveStatus::optimal && !s.config().bus_allocation.empty())
                write_bus_csv(allocate_to_buses(res, s.config().bus_allocation), fs::path(solve_out) / "buses.csv");
            detail::print_result(res);
            if (res.status == SolveStatus::infeasible) return kInfeasible;
            if (res.status != SolveStatus::optimal) return kSolverFailure;
            return kOk;
        }

        if (cmd_sweep->parsed()) {
            if (alpha_step <= 0.0) throw ConfigError("--alpha-step must be positive");
            std::vector<double> alphas;
            for (double a = alpha_start; a <= alpha_end + 1e-12; a += alpha_step)
                alphas.push_back(std::min(a, 1.0));
            if (!alphas.empty() && alphas.back() < alpha_end - 1e-12) alphas.push_back(alpha_end);

            auto s = detail::load_scenario(sweep_path, sweep_resample);
            SweepOptions opts;
            opts.sizing = sweep_flags.sizing();
            opts.jobs = sweep_jobs;
            auto report = sweep_alpha(s, alphas, opts);
            if (!sweep_base.empty()) {
                auto base_s = detail::load_scenario(sweep_base, sweep_resample);
                auto base = sweep_alpha(base_s, alphas, opts);
                report = normalize_costs(report, base);
                fs::create_directories(sweep_out);
                write_sweep_csv(base, fs::path(sweep_out) / "base_sweep.csv");
            }
            fs::create_directories(sweep_out);
            write_sweep_csv(report, fs::path(sweep_out) / "sweep.csv");
            for (const auto& row : report.rows)
                std::printf("alpha %.4g: %s%s\n", row.alpha, row.status.c_str(),
                            row.status == "optimal" ? ("  cost " + format_csv_number(row.total_cost)).c_str() : "");
            return kOk;
        }

        if (cmd_report->parsed()) {
            fs::path dir(report_dir);
            std::ifstream in(dir / "sizing.json");
            if (!in) throw IoError("cannot open " + (dir / "sizing.json").string());
            ordered_json sj = ordered_json::parse(in);
            std::map<std::string, std::string> tech;
            if (sj.contains("technology"))
                for (auto it = sj.at("technology").begin(); it != sj.at("technology").end(); ++it)
                    tech[it.key()] = it.value().get<std::string>();
            auto d = read_dispatch_csv(dir / "dispatch.csv", tech);
            Granularity g = granularity == "daily"    ? Granularity::daily
                            : granularity == "monthly" ? Granularity::monthly
                                                       : Granularity::hourly;
            auto mix = aggregate_dispatch(d, g);
            write_mix_csv(mix, dir / ("mix_" + granularity + ".csv"));
            std::printf("wrote %s (%zu rows)\n", (dir / ("mix_" + granularity + ".csv")).c_str(), mix.rows.size());
            return kOk;
        }

        if (cmd_fetch->parsed()) {
            fetch_req.cache_dir = fetch_cache;
            auto ts = fetch_resource(fetch_req);
            std::printf("cached %zu hourly values at %s\n", ts.size(), fetch_cache_path(fetch_req).c_str());
            return kOk;
        }
    } catch (const SolverFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kSolverFailure;
    } catch (const NetworkError& e) {
        std::fprintf(stderr, "network error: %s\n", e.what());
        return kSolverFailure;
    } catch (const AuthError& e) {
        std::fprintf(stderr, "auth error: %s\n", e.what());
        return kConfigError;
    } catch (const QuotaError& e) {
        std::fprintf(stderr, "quota error: %s\n", e.what());
        return kSolverFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
    return kOk;
}

inline int cli_main(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("ressize");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(int(argv.size()), argv.data());
}

} // namespace ressize
