#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ressize/errors.hpp"

namespace ressize {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Identifies which model constraint a row came from, for diagnostics and
// the MPS dump. `plant` indexes the plant list of the matching kind.
enum class RowKind {
    conv_cap,
    ren_cap,
    hyd_gen_cap,
    hyd_pump_cap,
    hyd_soc_init,
    hyd_soc_recur,
    hyd_tank_cap,
    hyd_cyclic,
    balance,
    share,
    st_absorb_cap,
    st_gen_cap,
    st_soc_init,
    st_soc_recur,
    st_tank_cap,
    st_cyclic,
    generic,
};

inline const char* row_kind_tag(RowKind k) {
    switch (k) {
        case RowKind::conv_cap: return "CCAP";
        case RowKind::ren_cap: return "RCAP";
        case RowKind::hyd_gen_cap: return "HGEN";
        case RowKind::hyd_pump_cap: return "HPMP";
        case RowKind::hyd_soc_init: return "HSI";
        case RowKind::hyd_soc_recur: return "HSOC";
        case RowKind::hyd_tank_cap: return "HTNK";
        case RowKind::hyd_cyclic: return "HCYC";
        case RowKind::balance: return "BAL";
        case RowKind::share: return "SHARE";
        case RowKind::st_absorb_cap: return "TABS";
        case RowKind::st_gen_cap: return "TGEN";
        case RowKind::st_soc_init: return "TSI";
        case RowKind::st_soc_recur: return "TSOC";
        case RowKind::st_tank_cap: return "TTNK";
        case RowKind::st_cyclic: return "TCYC";
        case RowKind::generic: return "ROW";
    }
    return "ROW";
}

struct SparseRow {
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    double rhs = 0.0;
    RowKind kind = RowKind::generic;
    int plant = -1;
    int t = -1;
};

// Ordered variable blocks of the sizing LP. Fixed-capacity plants have no
// capacity variable; their index is -1 and the capacity is folded into the
// right-hand sides.
struct VariableLayout {
    int horizon = 0;
    int n_conv = 0, n_ren = 0, n_hyd = 0, n_st = 0;
    int conv_gen_start = 0;
    std::vector<int> ren_cap_index;
    int ren_gen_start = 0;
    std::vector<int> hyd_cap_index;
    int hyd_start = 0;  // per plant: [gen 0..T-1, pump 0..T-1]
    int hyd_soc_start = 0;
    std::vector<int> st_cap_index;
    int st_absorb_start = 0;
    int st_gen_start = 0;
    int st_soc_start = 0;
    int num_vars = 0;

    int conv_gen(int i, int t) const { return conv_gen_start + i * horizon + t; }
    int ren_cap(int j) const { return ren_cap_index[std::size_t(j)]; }
    int ren_gen(int j, int t) const { return ren_gen_start + j * horizon + t; }
    int hyd_cap(int k) const { return hyd_cap_index[std::size_t(k)]; }
    int hyd_gen(int k, int t) const { return hyd_start + k * 2 * horizon + t; }
    int hyd_pump(int k, int t) const { return hyd_start + k * 2 * horizon + horizon + t; }
    int hyd_soc(int k, int t) const { return hyd_soc_start + k * horizon + t; }
    int st_cap(int l) const { return st_cap_index[std::size_t(l)]; }
    int st_absorb(int l, int t) const { return st_absorb_start + l * horizon + t; }
    int st_gen(int l, int t) const { return st_gen_start + l * horizon + t; }
    int st_soc(int l, int t) const { return st_soc_start + l * horizon + t; }
};

// Sparse linear program: minimize objective·x subject to eq rows (= rhs),
// ineq rows (≤ rhs) and variable bounds.
struct LpProblem {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<SparseRow> eq_rows;
    std::vector<SparseRow> ineq_rows;
    std::vector<double> lower;  // default 0
    std::vector<double> upper;  // default +inf
    VariableLayout layout;

    void check() const {
        if (int(objective.size()) != num_vars || int(lower.size()) != num_vars || int(upper.size()) != num_vars)
            throw DimensionError("LpProblem vector sizes disagree with num_vars");
        for (double v : objective)
            if (!std::isfinite(v)) throw DimensionError("non-finite objective coefficient");
        for (int j = 0; j < num_vars; ++j)
            if (lower[std::size_t(j)] > upper[std::size_t(j)]) throw DimensionError("lower bound above upper bound");
        auto check_rows = [&](const std::vector<SparseRow>& rows) {
            for (const auto& r : rows)
                for (auto& [col, v] : r.coeffs) {
                    if (col < 0 || col >= num_vars) throw DimensionError("row index out of range");
                    if (!std::isfinite(v)) throw DimensionError("non-finite row coefficient");
                }
        };
        check_rows(eq_rows);
        check_rows(ineq_rows);
    }
};

// Diagonal equilibration factors. Scaled problem: A' = R·A·C, b' = R·b,
// c' = C·c, bounds' = C⁻¹·bounds; x = C·x' recovers the original solution.
struct ScalingRecord {
    std::vector<double> eq_row_scale;
    std::vector<double> ineq_row_scale;
    std::vector<double> col_scale;

    std::vector<double> unscale_primal(const std::vector<double>& x) const {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] * col_scale[j];
        return out;
    }
    std::vector<double> scale_primal(const std::vector<double>& x) const {
        std::vector<double> out(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] / col_scale[j];
        return out;
    }
};

// Geometric-mean row/column equilibration. Scale factors are rounded to
// powers of two so scaling and unscaling are exact in floating point.
inline std::pair<LpProblem, ScalingRecord> scale_problem(const LpProblem& lp) {
    const std::size_t n_eq = lp.eq_rows.size(), n_in = lp.ineq_rows.size(), n = std::size_t(lp.num_vars);
    std::vector<double> row_f(n_eq + n_in, 1.0), col_f(n, 1.0);

    auto row_at = [&](std::size_t r) -> const SparseRow& {
        return r < n_eq ? lp.eq_rows[r] : lp.ineq_rows[r - n_eq];
    };

    for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> clo(n, kInf), chi(n, 0.0);
        for (std::size_t r = 0; r < n_eq + n_in; ++r)
            for (auto& [j, v] : row_at(r).coeffs) {
                double a = std::abs(v) * row_f[r] * col_f[std::size_t(j)];
                if (a > 0.0) {
                    clo[std::size_t(j)] = std::min(clo[std::size_t(j)], a);
                    chi[std::size_t(j)] = std::max(chi[std::size_t(j)], a);
                }
            }
        for (std::size_t j = 0; j < n; ++j)
            if (chi[j] > 0.0) col_f[j] /= std::sqrt(clo[j] * chi[j]);

        for (std::size_t r = 0; r < n_eq + n_in; ++r) {
            double lo = kInf, hi = 0.0;
            for (auto& [j, v] : row_at(r).coeffs) {
                double a = std::abs(v) * row_f[r] * col_f[std::size_t(j)];
                if (a > 0.0) {
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
            }
            if (hi > 0.0) row_f[r] /= std::sqrt(lo * hi);
        }
    }
    auto pow2 = [](double f) { return std::exp2(std::round(std::log2(f))); };
    for (auto& f : row_f) f = pow2(f);
    for (auto& f : col_f) f = pow2(f);

    LpProblem out = lp;
    for (std::size_t r = 0; r < n_eq + n_in; ++r) {
        SparseRow& row = r < n_eq ? out.eq_rows[r] : out.ineq_rows[r - n_eq];
        for (auto& [j, v] : row.coeffs) v *= row_f[r] * col_f[std::size_t(j)];
        row.rhs *= row_f[r];
    }
    for (std::size_t j = 0; j < n; ++j) {
        out.objective[j] *= col_f[j];
        if (std::isfinite(out.lower[j])) out.lower[j] /= col_f[j];
        if (std::isfinite(out.upper[j])) out.upper[j] /= col_f[j];
    }
    ScalingRecord rec;
    rec.eq_row_scale.assign(row_f.begin(), row_f.begin() + long(n_eq));
    rec.ineq_row_scale.assign(row_f.begin() + long(n_eq), row_f.end());
    rec.col_scale = std::move(col_f);
    return {std::move(out), std::move(rec)};
}

struct RowResidualReport {
    double max_eq_residual = 0.0;    // relative to max(1, row scale)
    double max_ineq_violation = 0.0;
    double max_bound_violation = 0.0;
    int worst_eq_row = -1;
    int worst_ineq_row = -1;
};

// Evaluates every row of the problem at x. Residuals are relative to
// max(1, |rhs|, max|a_ij·x_j|).
inline RowResidualReport check_lp_solution(const LpProblem& lp, const std::vector<double>& x) {
    if (int(x.size()) != lp.num_vars) throw DimensionError("solution length does not match num_vars");
    RowResidualReport rep;
    auto row_value = [&](const SparseRow& r, double& scale) {
        double s = 0.0;
        scale = std::max(1.0, std::abs(r.rhs));
        for (auto& [j, v] : r.coeffs) {
            double term = v * x[std::size_t(j)];
            s += term;
            scale = std::max(scale, std::abs(term));
        }
        return s;
    };
    for (std::size_t r = 0; r < lp.eq_rows.size(); ++r) {
        double scale = 1.0;
        double res = std::abs(row_value(lp.eq_rows[r], scale) - lp.eq_rows[r].rhs) / scale;
        if (res > rep.max_eq_residual) {
            rep.max_eq_residual = res;
            rep.worst_eq_row = int(r);
        }
    }
    for (std::size_t r = 0; r < lp.ineq_rows.size(); ++r) {
        double scale = 1.0;
        double res = (row_value(lp.ineq_rows[r], scale) - lp.ineq_rows[r].rhs) / scale;
        if (res > rep.max_ineq_violation) {
            rep.max_ineq_violation = res;
            rep.worst_ineq_row = int(r);
        }
    }
    for (int j = 0; j < lp.num_vars; ++j) {
        double v = x[std::size_t(j)];
        double viol = std::max(lp.lower[std::size_t(j)] - v, v - lp.upper[std::size_t(j)]);
        rep.max_bound_violation = std::max(rep.max_bound_violation, viol / std::max(1.0, std::abs(v)));
    }
    return rep;
}

// Free-format MPS dump for cross-checking against external solvers.
inline void write_mps(const LpProblem& lp, std::ostream& os, const std::string& name = "RESSIZE") {
    auto row_name = [&](const SparseRow& r, std::size_t idx, bool eq) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s_%s%zu", eq ? "E" : "L", row_kind_tag(r.kind), idx);
        return std::string(buf);
    };
    os << "NAME " << name << "\n";
    os << "ROWS\n N COST\n";
    for (std::size_t r = 0; r < lp.eq_rows.size(); ++r) os << " E " << row_name(lp.eq_rows[r], r, true) << "\n";
    for (std::size_t r = 0; r < lp.ineq_rows.size(); ++r) os << " L " << row_name(lp.ineq_rows[r], r, false) << "\n";

    // column-major entries
    std::vector<std::vector<std::pair<std::string, double>>> col_entries(static_cast<std::size_t>(lp.num_vars));
    for (std::size_t r = 0; r < lp.eq_rows.size(); ++r)
        for (auto& [j, v] : lp.eq_rows[r].coeffs)
            col_entries[std::size_t(j)].emplace_back(row_name(lp.eq_rows[r], r, true), v);
    for (std::size_t r = 0; r < lp.ineq_rows.size(); ++r)
        for (auto& [j, v] : lp.ineq_rows[r].coeffs)
            col_entries[std::size_t(j)].emplace_back(row_name(lp.ineq_rows[r], r, false), v);

    char num[64];
    os << "COLUMNS\n";
    for (int j = 0; j < lp.num_vars; ++j) {
        std::string cn = "X" + std::to_string(j);
        if (lp.objective[std::size_t(j)] != 0.0) {
            std::snprintf(num, sizeof num, "%.15g", lp.objective[std::size_t(j)]);
            os << " " << cn << " COST " << num << "\n";
        }
        for (auto& [rn, v] : col_entries[std::size_t(j)]) {
            std::snprintf(num, sizeof num, "%.15g", v);
            os << " " << cn << " " << rn << " " << num << "\n";
        }
    }
    os << "RHS\n";
    for (std::size_t r = 0; r < lp.eq_rows.size(); ++r)
        if (lp.eq_rows[r].rhs != 0.0) {
            std::snprintf(num, sizeof num, "%.15g", lp.eq_rows[r].rhs);
            os << " RHS " << row_name(lp.eq_rows[r], r, true) << " " << num << "\n";
        }
    for (std::size_t r = 0; r < lp.ineq_rows.size(); ++r)
        if (lp.ineq_rows[r].rhs != 0.0) {
            std::snprintf(num, sizeof num, "%.15g", lp.ineq_rows[r].rhs);
            os << " RHS " << row_name(lp.ineq_rows[r], r, false) << " " << num << "\n";
        }
    os << "BOUNDS\n";
    for (int j = 0; j < lp.num_vars; ++j) {
        double lo = lp.lower[std::size_t(j)], hi = lp.upper[std::size_t(j)];
        std::string cn = "X" + std::to_string(j);
        if (lo == -kInf && hi == kInf) {
            os << " FR BND " << cn << "\n";
            continue;
        }
        if (lo != 0.0 && std::isfinite(lo)) {
            std::snprintf(num, sizeof num, "%.15g", lo);
            os << " LO BND " << cn << " " << num << "\n";
        } else if (lo == -kInf) {
            os << " MI BND " << cn << "\n";
        }
        if (std::isfinite(hi)) {
            std::snprintf(num, sizeof num, "%.15g", hi);
            os << " UP BND " << cn << " " << num << "\n";
        }
    }
    os << "ENDATA\n";
}

} // namespace ressize
