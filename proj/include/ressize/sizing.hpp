#pragma once

#include "ressize/formulation.hpp"
#include "ressize/simplex.hpp"

namespace ressize {

struct SizingOptions {
    SolverOptions solver;
    bool equilibrate = true;
};

// Everything one solve produced, for callers that want to audit the LP
// (acceptance checks, MPS dumps). size_scenario() is the plain entry point.
struct SizedSolve {
    LpProblem lp;           // original (unscaled) problem
    StandardLp standard;    // standard form of the scaled problem
    LpSolution raw;         // solution in standard-form space
    std::vector<double> x;  // solution mapped back to lp's variables
    ScalingRecord scaling;
    SizingResult result;
};

inline SizedSolve solve_scenario_full(const ValidatedScenario& s, const SizingOptions& opts = {}) {
    SizedSolve out;
    out.lp = build_lp(s);

    if (opts.equilibrate) {
        auto [scaled, rec] = scale_problem(out.lp);
        out.scaling = std::move(rec);
        out.standard = to_standard_form(scaled);
    } else {
        out.scaling.col_scale.assign(std::size_t(out.lp.num_vars), 1.0);
        out.standard = to_standard_form(out.lp);
    }

    out.raw = solve(out.standard, opts.solver);
    if (out.raw.status == SolveStatus::iteration_limit)
        throw SolverFailure("iteration limit reached after " + std::to_string(out.raw.iterations) + " pivots");
    if (out.raw.status == SolveStatus::numerical_breakdown)
        throw SolverFailure("numerical breakdown (singular basis despite refactorization)");

    LpSolution mapped = out.raw;
    if (out.raw.status == SolveStatus::optimal) {
        out.x = out.scaling.unscale_primal(out.standard.original_primal(out.raw.x));
        mapped.x = out.x;
    }
    out.result = extract_solution(mapped, s, out.lp);
    return out;
}

inline SizingResult size_scenario(const ValidatedScenario& s, const SizingOptions& opts = {}) {
    return solve_scenario_full(s, opts).result;
}

} // namespace ressize
