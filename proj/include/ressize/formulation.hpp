#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ressize/errors.hpp"
#include "ressize/lp_problem.hpp"
#include "ressize/scenario.hpp"
#include "ressize/simplex.hpp"
#include "ressize/solar_thermal.hpp"

namespace ressize {

struct SolverStats {
    long iterations = 0;
    double max_primal_residual = 0.0;
    double min_reduced_cost = 0.0;
};

struct SizingResult {
    SolveStatus status = SolveStatus::infeasible;
    std::map<std::string, double> capacities;  // MW
    Dispatch dispatch;
    CostBreakdown cost;
    double achieved_share = 0.0;
    SolverStats stats;
    std::map<std::string, std::string> technology;           // plant -> conventional/pv/wind/hydro/solar_thermal
    std::map<std::string, std::vector<double>> curtailment;  // resource bound minus dispatch
    std::vector<std::string> notes;  // e.g. incidence factor assumed 1
};

// Builds the sizing LP: one variable per dispatch quantity and per
// non-fixed capacity, rows for every capacity/storage/balance/share
// constraint, OPEX+CAPEX objective. Fixed capacities are substituted as
// constants into the right-hand sides.
inline LpProblem build_lp(const ValidatedScenario& s) {
    const auto& cfg = s.config();
    const int T = int(s.horizon());
    const double dt = s.dt_hours();
    const int I = int(cfg.conventional.size());
    const int J = int(cfg.renewables.size());
    const int K = int(cfg.hydro.size());
    const int L = int(cfg.solar_thermal.size());

    LpProblem lp;
    VariableLayout& lay = lp.layout;
    lay.horizon = T;
    lay.n_conv = I;
    lay.n_ren = J;
    lay.n_hyd = K;
    lay.n_st = L;

    int next = 0;
    lay.conv_gen_start = next;
    next += I * T;
    lay.ren_cap_index.assign(std::size_t(J), -1);
    for (int j = 0; j < J; ++j)
        if (!cfg.renewables[std::size_t(j)].fixed_capacity_mw) lay.ren_cap_index[std::size_t(j)] = next++;
    lay.ren_gen_start = next;
    next += J * T;
    lay.hyd_cap_index.assign(std::size_t(K), -1);
    for (int k = 0; k < K; ++k)
        if (!cfg.hydro[std::size_t(k)].fixed_capacity_mw) lay.hyd_cap_index[std::size_t(k)] = next++;
    lay.hyd_start = next;
    next += 2 * K * T;
    lay.hyd_soc_start = next;
    next += K * T;
    lay.st_cap_index.assign(std::size_t(L), -1);
    for (int l = 0; l < L; ++l)
        if (!cfg.solar_thermal[std::size_t(l)].fixed_capacity_mw) lay.st_cap_index[std::size_t(l)] = next++;
    lay.st_absorb_start = next;
    next += L * T;
    lay.st_gen_start = next;
    next += L * T;
    lay.st_soc_start = next;
    next += L * T;
    lay.num_vars = next;

    lp.num_vars = next;
    lp.objective.assign(std::size_t(next), 0.0);
    lp.lower.assign(std::size_t(next), 0.0);
    lp.upper.assign(std::size_t(next), kInf);

    // objective: conventional/renewable OPEX per MWh, CAPEX on new capacity
    for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t)
            lp.objective[std::size_t(lay.conv_gen(i, t))] = cfg.conventional[std::size_t(i)].opex_per_mwh * dt;
    for (int j = 0; j < J; ++j) {
        const auto& p = cfg.renewables[std::size_t(j)];
        if (lay.ren_cap(j) >= 0) lp.objective[std::size_t(lay.ren_cap(j))] = p.capex_per_mw * cfg.capex_annualization;
        for (int t = 0; t < T; ++t) lp.objective[std::size_t(lay.ren_gen(j, t))] = p.opex_per_mwh * dt;
    }
    for (int k = 0; k < K; ++k) {
        const auto& p = cfg.hydro[std::size_t(k)];
        if (lay.hyd_cap(k) >= 0) lp.objective[std::size_t(lay.hyd_cap(k))] = p.capex_per_mw * cfg.capex_annualization;
        for (int t = 0; t < T; ++t) lp.objective[std::size_t(lay.hyd_gen(k, t))] = p.opex_per_mwh * dt;
    }
    for (int l = 0; l < L; ++l) {
        const auto& p = cfg.solar_thermal[std::size_t(l)];
        if (lay.st_cap(l) >= 0) lp.objective[std::size_t(lay.st_cap(l))] = p.capex_per_mw * cfg.capex_annualization;
        for (int t = 0; t < T; ++t) lp.objective[std::size_t(lay.st_gen(l, t))] = p.opex_per_mwh * dt;
    }

    auto cap_row = [&](RowKind kind, int plant, int t, int gen_var, int cap_var, double coef, double fixed_cap) {
        SparseRow r;
        r.kind = kind;
        r.plant = plant;
        r.t = t;
        r.coeffs.emplace_back(gen_var, 1.0);
        if (cap_var >= 0) {
            r.coeffs.emplace_back(cap_var, -coef);
            r.rhs = 0.0;
        } else {
            r.rhs = coef * fixed_cap;
        }
        lp.ineq_rows.push_back(std::move(r));
    };

    // balance equalities first, then storage equalities
    for (int t = 0; t < T; ++t) {
        SparseRow r;
        r.kind = RowKind::balance;
        r.t = t;
        r.rhs = cfg.demand.values[std::size_t(t)];
        for (int i = 0; i < I; ++i) r.coeffs.emplace_back(lay.conv_gen(i, t), 1.0);
        for (int j = 0; j < J; ++j) r.coeffs.emplace_back(lay.ren_gen(j, t), 1.0);
        for (int k = 0; k < K; ++k) {
            r.coeffs.emplace_back(lay.hyd_gen(k, t), 1.0);
            r.coeffs.emplace_back(lay.hyd_pump(k, t), -1.0);
        }
        for (int l = 0; l < L; ++l) r.coeffs.emplace_back(lay.st_gen(l, t), 1.0);
        lp.eq_rows.push_back(std::move(r));
    }

    for (int k = 0; k < K; ++k) {
        const auto& p = cfg.hydro[std::size_t(k)];
        const double fill = p.initial_fill * p.storage_hours;  // MWh per MW of capacity
        {
            SparseRow r;
            r.kind = RowKind::hyd_soc_init;
            r.plant = k;
            r.t = 0;
            r.coeffs.emplace_back(lay.hyd_soc(k, 0), 1.0);
            if (lay.hyd_cap(k) >= 0) {
                r.coeffs.emplace_back(lay.hyd_cap(k), -fill);
                r.rhs = 0.0;
            } else {
                r.rhs = fill * *p.fixed_capacity_mw;
            }
            lp.eq_rows.push_back(std::move(r));
        }
        for (int t = 0; t + 1 < T; ++t) {
            SparseRow r;
            r.kind = RowKind::hyd_soc_recur;
            r.plant = k;
            r.t = t;
            r.coeffs.emplace_back(lay.hyd_soc(k, t + 1), 1.0);
            r.coeffs.emplace_back(lay.hyd_soc(k, t), -1.0);
            r.coeffs.emplace_back(lay.hyd_pump(k, t), -p.eta_pump * dt);
            r.coeffs.emplace_back(lay.hyd_gen(k, t), dt / p.eta_turbine);
            r.rhs = 0.0;
            lp.eq_rows.push_back(std::move(r));
        }
    }
    for (int l = 0; l < L; ++l) {
        const auto& p = cfg.solar_thermal[std::size_t(l)];
        const double fill = p.initial_fill * p.storage_hours;
        {
            SparseRow r;
            r.kind = RowKind::st_soc_init;
            r.plant = l;
            r.t = 0;
            r.coeffs.emplace_back(lay.st_soc(l, 0), 1.0);
            if (lay.st_cap(l) >= 0) {
                r.coeffs.emplace_back(lay.st_cap(l), -fill);
                r.rhs = 0.0;
            } else {
                r.rhs = fill * *p.fixed_capacity_mw;
            }
            lp.eq_rows.push_back(std::move(r));
        }
        for (int t = 0; t + 1 < T; ++t) {
            SparseRow r;
            r.kind = RowKind::st_soc_recur;
            r.plant = l;
            r.t = t;
            r.coeffs.emplace_back(lay.st_soc(l, t + 1), 1.0);
            r.coeffs.emplace_back(lay.st_soc(l, t), -1.0);
            r.coeffs.emplace_back(lay.st_absorb(l, t), -dt);
            r.coeffs.emplace_back(lay.st_gen(l, t), dt / p.eta_thermoelectric);
            r.rhs = 0.0;
            lp.eq_rows.push_back(std::move(r));
        }
    }

    // capacity inequalities
    for (int i = 0; i < I; ++i)
        for (int t = 0; t < T; ++t)
            cap_row(RowKind::conv_cap, i, t, lay.conv_gen(i, t), -1, 1.0,
                    cfg.conventional[std::size_t(i)].installed_capacity_mw);
    for (int j = 0; j < J; ++j) {
        const auto& p = cfg.renewables[std::size_t(j)];
        for (int t = 0; t < T; ++t)
            cap_row(RowKind::ren_cap, j, t, lay.ren_gen(j, t), lay.ren_cap(j), p.availability.values[std::size_t(t)],
                    p.fixed_capacity_mw.value_or(0.0));
    }
    for (int k = 0; k < K; ++k) {
        const auto& p = cfg.hydro[std::size_t(k)];
        double fixed = p.fixed_capacity_mw.value_or(0.0);
        for (int t = 0; t < T; ++t) {
            cap_row(RowKind::hyd_gen_cap, k, t, lay.hyd_gen(k, t), lay.hyd_cap(k), 1.0, fixed);
            cap_row(RowKind::hyd_pump_cap, k, t, lay.hyd_pump(k, t), lay.hyd_cap(k), 1.0, fixed);
            cap_row(RowKind::hyd_tank_cap, k, t, lay.hyd_soc(k, t), lay.hyd_cap(k), p.storage_hours, fixed);
        }
        // reservoir bound and cyclic constraint on the post-horizon level
        {
            SparseRow r;
            r.kind = RowKind::hyd_tank_cap;
            r.plant = k;
            r.t = T;
            r.coeffs.emplace_back(lay.hyd_soc(k, T - 1), 1.0);
            r.coeffs.emplace_back(lay.hyd_pump(k, T - 1), p.eta_pump * dt);
            r.coeffs.emplace_back(lay.hyd_gen(k, T - 1), -dt / p.eta_turbine);
            if (lay.hyd_cap(k) >= 0) {
                r.coeffs.emplace_back(lay.hyd_cap(k), -p.storage_hours);
                r.rhs = 0.0;
            } else {
                r.rhs = p.storage_hours * fixed;
            }
            lp.ineq_rows.push_back(std::move(r));
        }
        if (cfg.enforce_cyclic_storage) {
            SparseRow r;  // soc_0 − soc_end ≤ 0 with the last step's flows included
            r.kind = RowKind::hyd_cyclic;
            r.plant = k;
            r.coeffs.emplace_back(lay.hyd_soc(k, 0), 1.0);
            r.coeffs.emplace_back(lay.hyd_soc(k, T - 1), -1.0);
            r.coeffs.emplace_back(lay.hyd_pump(k, T - 1), -p.eta_pump * dt);
            r.coeffs.emplace_back(lay.hyd_gen(k, T - 1), dt / p.eta_turbine);
            r.rhs = 0.0;
            lp.ineq_rows.push_back(std::move(r));
        }
    }
    for (int l = 0; l < L; ++l) {
        const auto& p = cfg.solar_thermal[std::size_t(l)];
        double fixed = p.fixed_capacity_mw.value_or(0.0);
        ThermalProfile profile = build_thermal_profile(p);
        for (int t = 0; t < T; ++t) {
            cap_row(RowKind::st_absorb_cap, l, t, lay.st_absorb(l, t), lay.st_cap(l),
                    profile.max_thermal[std::size_t(t)], fixed);
            cap_row(RowKind::st_gen_cap, l, t, lay.st_gen(l, t), lay.st_cap(l), 1.0, fixed);
            cap_row(RowKind::st_tank_cap, l, t, lay.st_soc(l, t), lay.st_cap(l), p.storage_hours, fixed);
        }
        {
            SparseRow r;
            r.kind = RowKind::st_tank_cap;
            r.plant = l;
            r.t = T;
            r.coeffs.emplace_back(lay.st_soc(l, T - 1), 1.0);
            r.coeffs.emplace_back(lay.st_absorb(l, T - 1), dt);
            r.coeffs.emplace_back(lay.st_gen(l, T - 1), -dt / p.eta_thermoelectric);
            if (lay.st_cap(l) >= 0) {
                r.coeffs.emplace_back(lay.st_cap(l), -p.storage_hours);
                r.rhs = 0.0;
            } else {
                r.rhs = p.storage_hours * fixed;
            }
            lp.ineq_rows.push_back(std::move(r));
        }
        if (cfg.enforce_cyclic_storage) {
            SparseRow r;
            r.kind = RowKind::st_cyclic;
            r.plant = l;
            r.coeffs.emplace_back(lay.st_soc(l, 0), 1.0);
            r.coeffs.emplace_back(lay.st_soc(l, T - 1), -1.0);
            r.coeffs.emplace_back(lay.st_absorb(l, T - 1), -dt);
            r.coeffs.emplace_back(lay.st_gen(l, T - 1), dt / p.eta_thermoelectric);
            r.rhs = 0.0;
            lp.ineq_rows.push_back(std::move(r));
        }
    }

    // annual share: −Σ renewable generation ≤ −α·Σ demand. With no
    // renewable plants the row is empty; its slack then makes the LP
    // infeasible exactly when α·Σ demand > 0.
    {
        SparseRow r;
        r.kind = RowKind::share;
        double total_demand = 0.0;
        for (double v : cfg.demand.values) total_demand += v;
        r.rhs = -cfg.alpha * total_demand;
        for (int j = 0; j < J; ++j)
            for (int t = 0; t < T; ++t) r.coeffs.emplace_back(lay.ren_gen(j, t), -1.0);
        for (int l = 0; l < L; ++l)
            for (int t = 0; t < T; ++t) r.coeffs.emplace_back(lay.st_gen(l, t), -1.0);
        lp.ineq_rows.push_back(std::move(r));
    }

    return lp;
}

// Slices an LP solution back into per-plant series per the layout,
// recomputes cost and share independently, and cross-checks the objective.
// sol.x must be in the LpProblem's variable space (unscaled, mapped back
// from standard form).
inline SizingResult extract_solution(const LpSolution& sol, const ValidatedScenario& s, const LpProblem& lp) {
    const auto& cfg = s.config();
    const VariableLayout& lay = lp.layout;
    const int T = lay.horizon;
    const std::vector<double>& x = sol.x;

    if (sol.status == SolveStatus::optimal && int(x.size()) != lp.num_vars)
        throw DimensionError("solution length " + std::to_string(x.size()) + " != num_vars " +
                             std::to_string(lp.num_vars));

    SizingResult res;
    res.status = sol.status;
    res.stats.iterations = sol.iterations;
    res.stats.max_primal_residual = sol.max_primal_residual;
    res.stats.min_reduced_cost = sol.min_reduced_cost;
    if (sol.status != SolveStatus::optimal) return res;

    Dispatch& d = res.dispatch;
    d.start = cfg.demand.start;
    d.step = cfg.demand.step;

    auto slice = [&](int start_index) {
        std::vector<double> v(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) v[std::size_t(t)] = std::max(x[std::size_t(start_index + t)], 0.0);
        return v;
    };

    for (int i = 0; i < lay.n_conv; ++i) {
        const auto& p = cfg.conventional[std::size_t(i)];
        d.conventional.push_back({p.name, slice(lay.conv_gen(i, 0))});
        d.capacities[p.name] = p.installed_capacity_mw;
        res.technology[p.name] = "conventional";
    }
    for (int j = 0; j < lay.n_ren; ++j) {
        const auto& p = cfg.renewables[std::size_t(j)];
        d.renewable.push_back({p.name, slice(lay.ren_gen(j, 0)), tech_name(p.technology)});
        double cap = p.fixed_capacity_mw ? *p.fixed_capacity_mw : std::max(x[std::size_t(lay.ren_cap(j))], 0.0);
        d.capacities[p.name] = cap;
        res.technology[p.name] = tech_name(p.technology);
        auto& cur = res.curtailment[p.name];
        cur.resize(std::size_t(T));
        for (int t = 0; t < T; ++t)
            cur[std::size_t(t)] = std::max(
                p.availability.values[std::size_t(t)] * cap - d.renewable.back().generation[std::size_t(t)], 0.0);
    }
    for (int k = 0; k < lay.n_hyd; ++k) {
        const auto& p = cfg.hydro[std::size_t(k)];
        Dispatch::Hydro h;
        h.name = p.name;
        h.generation = slice(lay.hyd_gen(k, 0));
        h.pumping = slice(lay.hyd_pump(k, 0));
        h.storage_level = slice(lay.hyd_soc(k, 0));
        d.hydro.push_back(std::move(h));
        d.capacities[p.name] =
            p.fixed_capacity_mw ? *p.fixed_capacity_mw : std::max(x[std::size_t(lay.hyd_cap(k))], 0.0);
        res.technology[p.name] = "hydro";
    }
    for (int l = 0; l < lay.n_st; ++l) {
        const auto& p = cfg.solar_thermal[std::size_t(l)];
        Dispatch::SolarThermal st;
        st.name = p.name;
        st.generation = slice(lay.st_gen(l, 0));
        st.absorption = slice(lay.st_absorb(l, 0));
        st.storage_level = slice(lay.st_soc(l, 0));
        double cap = p.fixed_capacity_mw ? *p.fixed_capacity_mw : std::max(x[std::size_t(lay.st_cap(l))], 0.0);
        d.capacities[p.name] = cap;
        res.technology[p.name] = "solar_thermal";
        ThermalProfile profile = build_thermal_profile(p);
        auto& cur = res.curtailment[p.name];
        cur.resize(std::size_t(T));
        for (int t = 0; t < T; ++t)
            cur[std::size_t(t)] = std::max(
                profile.max_thermal[std::size_t(t)] * cap - st.absorption[std::size_t(t)], 0.0);
        d.solar_thermal.push_back(std::move(st));
        if (!p.incidence_angle)
            res.notes.push_back(p.name + ": incidence factor assumed 1 (no angle series)");
    }

    res.capacities = d.capacities;
    res.cost = annual_cost(d, s);
    double total_demand = 0.0;
    for (double v : cfg.demand.values) total_demand += v;
    res.achieved_share = total_demand > 0.0 ? renewable_share(d, cfg.demand) : 0.0;

    // the recomputed cost must agree with the LP objective
    double lp_obj = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) lp_obj += lp.objective[std::size_t(j)] * x[std::size_t(j)];
    double scale = std::max({1.0, std::abs(lp_obj), std::abs(res.cost.total)});
    if (std::abs(lp_obj - res.cost.total) > 1e-6 * scale)
        throw ConsistencyError("recomputed cost " + std::to_string(res.cost.total) +
                               " deviates from LP objective " + std::to_string(lp_obj));
    return res;
}

} // namespace ressize
