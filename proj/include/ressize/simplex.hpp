#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "ressize/errors.hpp"
#include "ressize/lp_problem.hpp"
#include "ressize/lu.hpp"
#include "ressize/sparse.hpp"

namespace ressize {

// Canonical minimize c·x s.t. Ax = b, x ≥ 0, b ≥ 0, plus the bookkeeping
// needed to map solutions back to the LpProblem it came from.
struct StandardLp {
    SparseMatrix A;
    std::vector<double> b;
    std::vector<double> c;
    int num_rows = 0;
    int num_cols = 0;

    int orig_vars = 0;
    std::vector<int> pos_col;          // original var -> standard column
    std::vector<int> neg_col;          // -1 unless the variable was free-split
    std::vector<double> shift;         // x = shift + flip·x_pos - x_neg
    std::vector<std::int8_t> flip;
    std::vector<std::int8_t> row_sign; // ±1 vs the original row orientation
    std::vector<int> slack_col;        // per row, -1 on equality rows
    int eq_count = 0;
    int ineq_count = 0;                // original inequalities (before bound rows)
    double obj_offset = 0.0;           // original objective = c·x_std + obj_offset

    std::vector<double> original_primal(const std::vector<double>& x_std) const {
        if (int(x_std.size()) < num_cols) throw DimensionError("standard solution too short");
        std::vector<double> x(static_cast<std::size_t>(orig_vars));
        for (int j = 0; j < orig_vars; ++j) {
            double v = shift[std::size_t(j)] + double(flip[std::size_t(j)]) * x_std[std::size_t(pos_col[std::size_t(j)])];
            if (neg_col[std::size_t(j)] >= 0) v -= x_std[std::size_t(neg_col[std::size_t(j)])];
            x[std::size_t(j)] = v;
        }
        return x;
    }
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit, numerical_breakdown };

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::iteration_limit: return "iteration_limit";
        case SolveStatus::numerical_breakdown: return "numerical_breakdown";
    }
    return "?";
}

struct PivotTrace {
    long iteration = 0;
    int phase = 0;
    int entering = -1;
    int leaving = -1;
    double step = 0.0;
    double objective = 0.0;
    double dual_objective = 0.0;
    bool bland = false;
};

struct SolverOptions {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    double pivot_tol = 1e-9;
    long max_iters = 0;          // 0 -> 50·(rows+cols)
    int stall_window = 1000;     // non-improving iterations before Bland's rule
    int refactor_interval = 100;
    std::function<void(const PivotTrace&)> on_pivot;
};

struct LpSolution {
    SolveStatus status = SolveStatus::numerical_breakdown;
    std::vector<double> x;  // standard-form primal
    std::vector<double> y;  // duals per standard row
    double objective = 0.0;
    long iterations = 0;
    double max_primal_residual = 0.0;
    double min_reduced_cost = 0.0;
    double phase1_objective = 0.0;
    std::vector<double> ray;  // improving direction when unbounded
};

// Slack insertion, bound shifting and sign normalization. The
// transformation is invertible through the StandardLp bookkeeping.
inline StandardLp to_standard_form(const LpProblem& lp) {
    lp.check();
    StandardLp s;
    s.orig_vars = lp.num_vars;
    s.pos_col.resize(std::size_t(lp.num_vars));
    s.neg_col.assign(std::size_t(lp.num_vars), -1);
    s.shift.assign(std::size_t(lp.num_vars), 0.0);
    s.flip.assign(std::size_t(lp.num_vars), 1);

    // track usage for the free-and-unused check
    std::vector<char> used(std::size_t(lp.num_vars), 0);
    for (const auto* rows : {&lp.eq_rows, &lp.ineq_rows})
        for (const auto& r : *rows)
            for (auto& [j, v] : r.coeffs)
                if (v != 0.0) used[std::size_t(j)] = 1;

    int next = 0;
    std::vector<std::pair<int, double>> upper_rows;  // (std col, bound) for finite ranges
    for (int j = 0; j < lp.num_vars; ++j) {
        double lo = lp.lower[std::size_t(j)], hi = lp.upper[std::size_t(j)];
        if (lo == -kInf && hi == kInf) {
            if (!used[std::size_t(j)] && lp.objective[std::size_t(j)] == 0.0)
                throw UnboundedDomainError("variable " + std::to_string(j) + " is free and unused");
            s.pos_col[std::size_t(j)] = next++;
            s.neg_col[std::size_t(j)] = next++;
        } else if (lo == -kInf) {
            // x = hi - x', x' >= 0
            s.shift[std::size_t(j)] = hi;
            s.flip[std::size_t(j)] = -1;
            s.pos_col[std::size_t(j)] = next++;
        } else {
            s.shift[std::size_t(j)] = lo;
            s.pos_col[std::size_t(j)] = next++;
            if (hi != kInf) upper_rows.emplace_back(s.pos_col[std::size_t(j)], hi - lo);
        }
    }

    s.eq_count = int(lp.eq_rows.size());
    s.ineq_count = int(lp.ineq_rows.size());
    s.num_rows = s.eq_count + s.ineq_count + int(upper_rows.size());
    s.slack_col.assign(std::size_t(s.num_rows), -1);
    s.row_sign.assign(std::size_t(s.num_rows), 1);
    s.b.assign(std::size_t(s.num_rows), 0.0);

    int slack_base = next;
    int n_slacks = s.ineq_count + int(upper_rows.size());
    s.num_cols = slack_base + n_slacks;

    s.c.assign(std::size_t(s.num_cols), 0.0);
    for (int j = 0; j < lp.num_vars; ++j) {
        double cj = lp.objective[std::size_t(j)];
        s.c[std::size_t(s.pos_col[std::size_t(j)])] = cj * double(s.flip[std::size_t(j)]);
        if (s.neg_col[std::size_t(j)] >= 0) s.c[std::size_t(s.neg_col[std::size_t(j)])] = -cj;
        s.obj_offset += cj * s.shift[std::size_t(j)];
    }

    std::vector<Triplet> trips;
    auto emit_row = [&](const SparseRow& r, int row, int slack) {
        double rhs = r.rhs;
        bool any = false;
        for (auto& [j, v] : r.coeffs) {
            if (v == 0.0) continue;
            any = true;
            rhs -= v * s.shift[std::size_t(j)];
            trips.push_back({row, s.pos_col[std::size_t(j)], v * double(s.flip[std::size_t(j)])});
            if (s.neg_col[std::size_t(j)] >= 0) trips.push_back({row, s.neg_col[std::size_t(j)], -v});
        }
        if (!any && slack < 0) throw DimensionError("equality row " + std::to_string(row) + " has no nonzero coefficients");
        if (slack >= 0) {
            trips.push_back({row, slack, 1.0});
            s.slack_col[std::size_t(row)] = slack;
        }
        s.b[std::size_t(row)] = rhs;
    };

    int row = 0;
    for (const auto& r : lp.eq_rows) emit_row(r, row++, -1);
    int slack = slack_base;
    for (const auto& r : lp.ineq_rows) emit_row(r, row++, slack++);
    for (auto& [col, bound] : upper_rows) {
        trips.push_back({row, col, 1.0});
        trips.push_back({row, slack, 1.0});
        s.slack_col[std::size_t(row)] = slack++;
        s.b[std::size_t(row)] = bound;
        ++row;
    }

    // sign normalization: b >= 0
    for (int r = 0; r < s.num_rows; ++r)
        if (s.b[std::size_t(r)] < 0.0) {
            s.row_sign[std::size_t(r)] = -1;
            s.b[std::size_t(r)] = -s.b[std::size_t(r)];
        }
    for (auto& t : trips)
        if (s.row_sign[std::size_t(t.row)] < 0) t.value = -t.value;

    s.A = SparseMatrix::from_triplets(s.num_rows, s.num_cols, std::move(trips));
    return s;
}

struct KktReport {
    double primal_residual_inf = 0.0;  // ‖Ax − b‖∞
    double min_x = 0.0;
    double min_reduced_cost = 0.0;
    double complementarity_gap = 0.0;  // max |x_j · d_j|
    double primal_objective = 0.0;
    double dual_objective = 0.0;
};

// Optimality certificate check computed directly from (A, b, c, x, y),
// with no access to the solver's basis or factorization.
inline KktReport check_kkt(const StandardLp& slp, const LpSolution& sol) {
    KktReport rep;
    const int m = slp.num_rows, n = slp.num_cols;
    if (int(sol.x.size()) != n || int(sol.y.size()) != m) throw DimensionError("solution dimensions mismatch");

    std::vector<double> ax(std::size_t(m), 0.0);
    for (int j = 0; j < n; ++j)
        if (sol.x[std::size_t(j)] != 0.0) slp.A.add_column_to(j, sol.x[std::size_t(j)], ax);
    for (int r = 0; r < m; ++r)
        rep.primal_residual_inf = std::max(rep.primal_residual_inf, std::abs(ax[std::size_t(r)] - slp.b[std::size_t(r)]));

    rep.min_x = 0.0;
    for (int j = 0; j < n; ++j) rep.min_x = std::min(rep.min_x, sol.x[std::size_t(j)]);

    rep.min_reduced_cost = kInf;
    for (int j = 0; j < n; ++j) {
        double d = slp.c[std::size_t(j)] - slp.A.col_dot(j, sol.y);
        rep.min_reduced_cost = std::min(rep.min_reduced_cost, d);
        rep.complementarity_gap = std::max(rep.complementarity_gap, std::abs(d * sol.x[std::size_t(j)]));
    }
    for (int j = 0; j < n; ++j) rep.primal_objective += slp.c[std::size_t(j)] * sol.x[std::size_t(j)];
    for (int r = 0; r < m; ++r) rep.dual_objective += slp.b[std::size_t(r)] * sol.y[std::size_t(r)];
    return rep;
}

namespace detail {

// Working state of one solve. Variable ids: [0, n) structural and slack
// columns, [n, n+m) artificials (one per row, used where slacks cannot
// seed the basis).
class SimplexWorker {
  public:
    SimplexWorker(const StandardLp& slp, const SolverOptions& opts) : lp_(slp), opts_(opts) {
        m_ = slp.num_rows;
        n_ = slp.num_cols;
        if (opts_.max_iters <= 0) opts_.max_iters = 50L * (long(m_) + long(n_));
    }

    LpSolution run() {
        LpSolution sol;
        basis_.assign(std::size_t(m_), -1);
        in_basis_pos_.assign(std::size_t(n_ + m_), -1);

        // initial basis: slacks where their column is +1, artificials elsewhere
        bool any_artificial = false;
        for (int r = 0; r < m_; ++r) {
            int sc = lp_.slack_col[std::size_t(r)];
            if (sc >= 0 && lp_.row_sign[std::size_t(r)] > 0) {
                set_basis(r, sc);
            } else {
                set_basis(r, n_ + r);
                any_artificial = true;
            }
        }

        phase_ = any_artificial ? 1 : 2;
        if (!refactorize()) return breakdown(sol);

        double b_scale = 1.0;
        for (double v : lp_.b) b_scale = std::max(b_scale, std::abs(v));

        long stall = 0;
        bool bland = false;
        double last_obj = kInf;
        bool fresh_factor = true;

        while (true) {
            if (sol.iterations >= opts_.max_iters) {
                finalize(sol, SolveStatus::iteration_limit);
                return sol;
            }

            // duals for the current phase costs
            y_.assign(std::size_t(m_), 0.0);
            for (int r = 0; r < m_; ++r) y_[std::size_t(r)] = cost(basis_[std::size_t(r)]);
            factor_.btran(y_);

            int q = price(bland);
            if (q < 0) {
                if (!fresh_factor) {
                    // confirm optimality on a fresh factorization
                    if (!refactorize()) return breakdown(sol);
                    fresh_factor = true;
                    continue;
                }
                if (phase_ == 1) {
                    double p1 = phase1_objective();
                    if (p1 > opts_.feas_tol * b_scale) {
                        sol.phase1_objective = p1;
                        finalize(sol, SolveStatus::infeasible);
                        return sol;
                    }
                    sol.phase1_objective = p1;
                    phase_ = 2;
                    stall = 0;
                    bland = false;
                    last_obj = kInf;
                    continue;
                }
                finalize(sol, SolveStatus::optimal);
                return sol;
            }

            // entering direction w = B⁻¹ a_q
            w_.assign(std::size_t(m_), 0.0);
            column_of(q, w_);
            factor_.ftran(w_);

            // ratio test
            int leave = -1;
            double theta = kInf;
            double best_pivot = 0.0;
            bool leave_artificial = false;
            for (int i = 0; i < m_; ++i) {
                double wi = w_[std::size_t(i)];
                double xi = std::max(xb_[std::size_t(i)], 0.0);
                bool candidate = false;
                double ratio = kInf, pv = 0.0;
                if (wi > opts_.pivot_tol) {
                    candidate = true;
                    ratio = xi / wi;
                    pv = wi;
                } else if (phase_ == 2 && basis_[std::size_t(i)] >= n_ && wi < -opts_.pivot_tol) {
                    // a basic artificial must not grow away from zero
                    candidate = true;
                    ratio = xi / (-wi);
                    pv = -wi;
                }
                if (!candidate) continue;
                bool art = basis_[std::size_t(i)] >= n_;
                bool better = false;
                if (ratio < theta - 1e-12 * (1.0 + theta)) {
                    better = true;
                } else if (ratio <= theta + 1e-12 * (1.0 + theta)) {
                    if (art && !leave_artificial)
                        better = true;
                    else if (art == leave_artificial && std::abs(pv) > std::abs(best_pivot))
                        better = true;
                }
                if (better) {
                    leave = i;
                    theta = ratio;
                    best_pivot = w_[std::size_t(i)];
                    leave_artificial = art;
                }
            }

            if (leave < 0) {
                if (phase_ == 1) {
                    // phase-1 objective is bounded below; this is numerical
                    if (!fresh_factor) {
                        if (!refactorize()) return breakdown(sol);
                        fresh_factor = true;
                        continue;
                    }
                    return breakdown(sol);
                }
                sol.ray.assign(std::size_t(n_), 0.0);
                sol.ray[std::size_t(q)] = 1.0;
                for (int i = 0; i < m_; ++i)
                    if (basis_[std::size_t(i)] < n_) sol.ray[std::size_t(basis_[std::size_t(i)])] = -w_[std::size_t(i)];
                finalize(sol, SolveStatus::unbounded);
                return sol;
            }

            // instability guard: tiny pivot relative to the column
            double wmax = 0.0;
            for (double v : w_) wmax = std::max(wmax, std::abs(v));
            if (std::abs(w_[std::size_t(leave)]) < 1e-9 * wmax && !fresh_factor) {
                if (!refactorize()) return breakdown(sol);
                fresh_factor = true;
                continue;
            }

            // pivot
            for (int i = 0; i < m_; ++i) xb_[std::size_t(i)] -= theta * w_[std::size_t(i)];
            xb_[std::size_t(leave)] = theta;
            int leaving_var = basis_[std::size_t(leave)];
            in_basis_pos_[std::size_t(leaving_var)] = -1;
            set_basis(leave, q);

            BasisFactor::Eta eta;
            eta.pos = leave;
            eta.diag = w_[std::size_t(leave)];
            for (int i = 0; i < m_; ++i)
                if (i != leave && w_[std::size_t(i)] != 0.0) eta.off.emplace_back(i, w_[std::size_t(i)]);
            factor_.push_eta(std::move(eta));
            fresh_factor = false;
            ++pivots_since_refactor_;
            ++sol.iterations;

            double obj = objective();
            if (opts_.on_pivot) {
                PivotTrace tr;
                tr.iteration = sol.iterations;
                tr.phase = phase_;
                tr.entering = q;
                tr.leaving = leaving_var;
                tr.step = theta;
                tr.objective = obj;
                // dual estimate at the post-pivot basis
                std::vector<double> yb(static_cast<std::size_t>(m_));
                for (int r = 0; r < m_; ++r) yb[std::size_t(r)] = cost(basis_[std::size_t(r)]);
                factor_.btran(yb);
                double dual_obj = 0.0;
                for (int r = 0; r < m_; ++r) dual_obj += lp_.b[std::size_t(r)] * yb[std::size_t(r)];
                tr.dual_objective = dual_obj;
                tr.bland = bland;
                opts_.on_pivot(tr);
            }

            if (last_obj - obj > 1e-12 * (1.0 + std::abs(obj))) {
                stall = 0;
            } else if (++stall >= opts_.stall_window) {
                bland = true;  // anti-cycling fallback, kept for the rest of the solve
            }
            last_obj = obj;

            if (pivots_since_refactor_ >= opts_.refactor_interval ||
                factor_.eta_nnz() > 4 * factor_.factor_nnz() + 1000) {
                if (!refactorize()) return breakdown(sol);
                fresh_factor = true;
            }
        }
    }

  private:
    double cost(int var) const {
        if (phase_ == 1) return var >= n_ ? 1.0 : 0.0;
        return var >= n_ ? 0.0 : lp_.c[std::size_t(var)];
    }

    void set_basis(int pos, int var) {
        basis_[std::size_t(pos)] = var;
        in_basis_pos_[std::size_t(var)] = pos;
    }

    void column_of(int var, std::vector<double>& out) const {
        if (var >= n_) {
            out[std::size_t(var - n_)] = 1.0;
            return;
        }
        auto rows = lp_.A.col_rows(var);
        auto vals = lp_.A.col_values(var);
        for (std::size_t k = 0; k < rows.size(); ++k) out[std::size_t(rows[k])] = vals[k];
    }

    bool refactorize() {
        bool ok = factor_.factor(m_, [&](int k, std::vector<std::pair<int, double>>& out) {
            int var = basis_[std::size_t(k)];
            if (var >= n_) {
                out.emplace_back(var - n_, 1.0);
            } else {
                auto rows = lp_.A.col_rows(var);
                auto vals = lp_.A.col_values(var);
                for (std::size_t i = 0; i < rows.size(); ++i) out.emplace_back(rows[i], vals[i]);
            }
        });
        if (!ok) return false;
        pivots_since_refactor_ = 0;
        xb_ = lp_.b;
        factor_.ftran(xb_);
        return true;
    }

    // Dantzig pricing, or Bland's least-index rule when stalled.
    int price(bool bland) {
        // reduced costs d_j = c_j − y·a_j over nonbasic structural/slack cols
        int best = -1;
        double best_d = -opts_.opt_tol;
        for (int j = 0; j < n_; ++j) {
            if (in_basis_pos_[std::size_t(j)] >= 0) continue;
            double d = cost(j) - lp_.A.col_dot(j, y_);
            if (bland) {
                if (d < -opts_.opt_tol) return j;
            } else if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        return best;
    }

    double phase1_objective() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[std::size_t(i)] >= n_) s += std::max(xb_[std::size_t(i)], 0.0);
        return s;
    }

    double objective() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += cost(basis_[std::size_t(i)]) * xb_[std::size_t(i)];
        return s;
    }

    void finalize(LpSolution& sol, SolveStatus status) {
        sol.status = status;
        sol.x.assign(std::size_t(n_), 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[std::size_t(i)] < n_) sol.x[std::size_t(basis_[std::size_t(i)])] = xb_[std::size_t(i)];

        // duals of the real objective at the final basis
        int saved_phase = phase_;
        phase_ = 2;
        sol.y.assign(std::size_t(m_), 0.0);
        for (int r = 0; r < m_; ++r) sol.y[std::size_t(r)] = cost(basis_[std::size_t(r)]);
        factor_.btran(sol.y);
        phase_ = saved_phase;

        sol.objective = 0.0;
        for (int j = 0; j < n_; ++j) sol.objective += lp_.c[std::size_t(j)] * sol.x[std::size_t(j)];

        std::vector<double> ax(std::size_t(m_), 0.0);
        for (int j = 0; j < n_; ++j)
            if (sol.x[std::size_t(j)] != 0.0) lp_.A.add_column_to(j, sol.x[std::size_t(j)], ax);
        // basic artificials (feasible only near zero) participate in Ax
        for (int i = 0; i < m_; ++i)
            if (basis_[std::size_t(i)] >= n_) ax[std::size_t(basis_[std::size_t(i)] - n_)] += xb_[std::size_t(i)];
        sol.max_primal_residual = 0.0;
        for (int r = 0; r < m_; ++r)
            sol.max_primal_residual =
                std::max(sol.max_primal_residual, std::abs(ax[std::size_t(r)] - lp_.b[std::size_t(r)]));

        sol.min_reduced_cost = kInf;
        for (int j = 0; j < n_; ++j) {
            if (in_basis_pos_[std::size_t(j)] >= 0) continue;
            sol.min_reduced_cost =
                std::min(sol.min_reduced_cost, lp_.c[std::size_t(j)] - lp_.A.col_dot(j, sol.y));
        }
        if (sol.min_reduced_cost == kInf) sol.min_reduced_cost = 0.0;
    }

    LpSolution breakdown(LpSolution& sol) {
        finalize(sol, SolveStatus::numerical_breakdown);
        return sol;
    }

    const StandardLp& lp_;
    SolverOptions opts_;
    int m_ = 0, n_ = 0, phase_ = 1;
    std::vector<int> basis_;
    std::vector<int> in_basis_pos_;
    std::vector<double> xb_, y_, w_;
    BasisFactor factor_;
    int pivots_since_refactor_ = 0;
};

} // namespace detail

// Two-phase revised simplex with sparse LU basis factorization, Dantzig
// pricing and an automatic Bland's-rule fallback on stalls.
inline LpSolution solve(const StandardLp& slp, const SolverOptions& opts = {}) {
    detail::SimplexWorker worker(slp, opts);
    return worker.run();
}

} // namespace ressize
