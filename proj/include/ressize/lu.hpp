#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace ressize {

// Sparse LU factorization of a simplex basis with Markowitz pivot selection
// and threshold partial pivoting, plus a product-form eta file for updates
// between refactorizations.
//
// Index convention: basis columns are "positions" 0..m-1, constraint rows
// keep their row ids. ftran maps a row-indexed right-hand side to
// position-indexed basic values; btran maps position-indexed costs to
// row-indexed duals.
class BasisFactor {
  public:
    struct Eta {
        int pos = 0;
        double diag = 0.0;
        std::vector<std::pair<int, double>> off;  // (position, w value), pos excluded
    };

    // col_of(k, out) must fill the entries (row, value) of basis column k.
    // Returns false if the basis is numerically singular.
    template <class ColFn>
    bool factor(int m, ColFn&& col_of) {
        m_ = m;
        etas_.clear();
        pivot_row_.assign(std::size_t(m), -1);
        pivot_col_.assign(std::size_t(m), -1);
        diag_.assign(std::size_t(m), 0.0);
        l_cols_.assign(std::size_t(m), {});
        u_rows_.assign(std::size_t(m), {});
        scratch_a_.assign(std::size_t(m), 0.0);
        scratch_b_.assign(std::size_t(m), 0.0);

        // active matrix, column-wise exact, row-wise superset patterns
        std::vector<std::vector<std::pair<int, double>>> cols(static_cast<std::size_t>(m));
        std::vector<std::vector<int>> row_pat(static_cast<std::size_t>(m));
        std::vector<int> row_count(std::size_t(m), 0);
        std::vector<char> row_active(std::size_t(m), 1), col_active(std::size_t(m), 1);

        double max_abs = 0.0;
        std::vector<std::pair<int, double>> buf;
        for (int k = 0; k < m; ++k) {
            buf.clear();
            col_of(k, buf);
            cols[std::size_t(k)] = buf;
            for (auto& [r, v] : buf) {
                row_pat[std::size_t(r)].push_back(k);
                row_count[std::size_t(r)]++;
                max_abs = std::max(max_abs, std::abs(v));
            }
        }
        if (max_abs == 0.0) return m == 0;
        const double abs_tol = 1e-13 * max_abs;

        // column buckets by nonzero count
        std::vector<int> bucket(std::size_t(m) + 1, -1), nxt(std::size_t(m), -1), prv(std::size_t(m), -1);
        auto unlink = [&](int j, int cnt) {
            if (prv[std::size_t(j)] >= 0)
                nxt[std::size_t(prv[std::size_t(j)])] = nxt[std::size_t(j)];
            else
                bucket[std::size_t(cnt)] = nxt[std::size_t(j)];
            if (nxt[std::size_t(j)] >= 0) prv[std::size_t(nxt[std::size_t(j)])] = prv[std::size_t(j)];
            nxt[std::size_t(j)] = prv[std::size_t(j)] = -1;
        };
        auto link = [&](int j, int cnt) {
            prv[std::size_t(j)] = -1;
            nxt[std::size_t(j)] = bucket[std::size_t(cnt)];
            if (nxt[std::size_t(j)] >= 0) prv[std::size_t(nxt[std::size_t(j)])] = j;
            bucket[std::size_t(cnt)] = j;
        };
        for (int j = 0; j < m; ++j) link(j, int(cols[std::size_t(j)].size()));

        std::vector<int> col_stamp(std::size_t(m), -1);
        std::vector<int> w_stamp(std::size_t(m), -1);
        std::vector<double> w_val(std::size_t(m), 0.0);
        int stamp = 0;

        constexpr int kCandidateLimit = 8;
        constexpr double kThreshold = 0.01;

        for (int k = 0; k < m; ++k) {
            // pivot search: best Markowitz merit among a few low-count columns
            int best_row = -1, best_col = -1;
            double best_val = 0.0;
            long best_merit = -1;
            int examined = 0;
            for (int cnt = 0; cnt <= m && best_merit != 0; ++cnt) {
                if (cnt == 0) {
                    if (bucket[0] >= 0) return false;  // empty active column
                    continue;
                }
                for (int j = bucket[std::size_t(cnt)]; j >= 0; j = nxt[std::size_t(j)]) {
                    double colmax = 0.0;
                    for (auto& [r, v] : cols[std::size_t(j)]) colmax = std::max(colmax, std::abs(v));
                    if (colmax < abs_tol) return false;  // numerically empty column
                    for (auto& [r, v] : cols[std::size_t(j)]) {
                        if (std::abs(v) < kThreshold * colmax || std::abs(v) < abs_tol) continue;
                        long merit = long(cnt - 1) * long(std::max(row_count[std::size_t(r)], 1) - 1);
                        bool better = best_merit < 0 || merit < best_merit ||
                                      (merit == best_merit && std::abs(v) > std::abs(best_val));
                        if (better) {
                            best_merit = merit;
                            best_row = r;
                            best_col = j;
                            best_val = v;
                        }
                    }
                    if (++examined >= kCandidateLimit && best_merit >= 0) break;
                    if (best_merit == 0) break;
                }
                if (examined >= kCandidateLimit && best_merit >= 0) break;
            }
            if (best_col < 0) return false;

            const int p = best_row, q = best_col;
            const double pivot = best_val;
            pivot_row_[std::size_t(k)] = p;
            pivot_col_[std::size_t(k)] = q;
            diag_[std::size_t(k)] = pivot;

            unlink(q, int(cols[std::size_t(q)].size()));
            col_active[std::size_t(q)] = 0;
            row_active[std::size_t(p)] = 0;

            auto& lcol = l_cols_[std::size_t(k)];
            for (auto& [r, v] : cols[std::size_t(q)]) {
                if (r == p) continue;
                lcol.emplace_back(r, v / pivot);
                row_count[std::size_t(r)]--;  // column q leaves the active set
            }

            // move row p entries to U, eliminating them from their columns
            auto& urow = u_rows_[std::size_t(k)];
            ++stamp;
            for (int j : row_pat[std::size_t(p)]) {
                if (!col_active[std::size_t(j)] || col_stamp[std::size_t(j)] == stamp) continue;
                col_stamp[std::size_t(j)] = stamp;
                auto& cj = cols[std::size_t(j)];
                double pval = 0.0;
                bool found = false;
                for (auto& [r, v] : cj)
                    if (r == p) {
                        pval = v;
                        found = true;
                        break;
                    }
                if (!found) continue;  // stale pattern entry
                urow.emplace_back(j, pval);
            }
            row_pat[std::size_t(p)].clear();

            // rank-1 update of every column that had an entry in row p
            for (auto& [j, upj] : urow) {
                auto& cj = cols[std::size_t(j)];
                int old_count = int(cj.size());
                ++stamp;
                for (auto& [r, v] : cj) {
                    w_stamp[std::size_t(r)] = stamp;
                    w_val[std::size_t(r)] = v;
                }
                for (auto& [i, li] : lcol) {
                    if (w_stamp[std::size_t(i)] == stamp) {
                        w_val[std::size_t(i)] -= li * upj;
                    } else {
                        w_stamp[std::size_t(i)] = stamp;
                        w_val[std::size_t(i)] = -li * upj;
                        row_pat[std::size_t(i)].push_back(j);
                        row_count[std::size_t(i)]++;
                    }
                }
                // gather, dropping the pivot row and exact zeros
                std::vector<std::pair<int, double>> fresh;
                fresh.reserve(cj.size() + lcol.size());
                for (auto& [r, v] : cj)
                    if (r != p && w_val[std::size_t(r)] != 0.0 && w_stamp[std::size_t(r)] == stamp) {
                        fresh.emplace_back(r, w_val[std::size_t(r)]);
                        w_stamp[std::size_t(r)] = -1;
                    }
                for (auto& [i, li] : lcol)
                    if (w_stamp[std::size_t(i)] == stamp && w_val[std::size_t(i)] != 0.0) {
                        fresh.emplace_back(i, w_val[std::size_t(i)]);
                        w_stamp[std::size_t(i)] = -1;
                    }
                cj.swap(fresh);
                unlink(j, old_count);
                link(j, int(cj.size()));
            }
            cols[std::size_t(q)].clear();
        }
        return true;
    }

    int size() const { return m_; }
    std::size_t eta_count() const { return etas_.size(); }
    std::size_t eta_nnz() const { return eta_nnz_; }

    std::size_t factor_nnz() const {
        std::size_t n = std::size_t(m_);
        for (auto& c : l_cols_) n += c.size();
        for (auto& r : u_rows_) n += r.size();
        return n;
    }

    void push_eta(Eta e) {
        eta_nnz_ += e.off.size() + 1;
        etas_.push_back(std::move(e));
    }

    // x := B⁻¹ x. Input row-indexed, output position-indexed.
    void ftran(std::vector<double>& x) {
        auto& y = scratch_a_;
        for (int k = 0; k < m_; ++k) {
            double yk = x[std::size_t(pivot_row_[std::size_t(k)])];
            y[std::size_t(k)] = yk;
            if (yk != 0.0)
                for (auto& [i, l] : l_cols_[std::size_t(k)]) x[std::size_t(i)] -= l * yk;
        }
        auto& out = scratch_b_;
        std::fill(out.begin(), out.end(), 0.0);
        for (int k = m_ - 1; k >= 0; --k) {
            double t = y[std::size_t(k)];
            for (auto& [j, u] : u_rows_[std::size_t(k)]) t -= u * out[std::size_t(j)];
            out[std::size_t(pivot_col_[std::size_t(k)])] = t / diag_[std::size_t(k)];
        }
        x = out;
        for (auto& e : etas_) {
            double xr = x[std::size_t(e.pos)] / e.diag;
            x[std::size_t(e.pos)] = xr;
            if (xr != 0.0)
                for (auto& [i, v] : e.off) x[std::size_t(i)] -= v * xr;
        }
    }

    // x := B⁻ᵀ x. Input position-indexed, output row-indexed.
    void btran(std::vector<double>& x) {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = x[std::size_t(it->pos)];
            for (auto& [i, v] : it->off) s -= v * x[std::size_t(i)];
            x[std::size_t(it->pos)] = s / it->diag;
        }
        auto& w = scratch_a_;
        auto& acc = scratch_b_;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int k = 0; k < m_; ++k) {
            double wk = (x[std::size_t(pivot_col_[std::size_t(k)])] - acc[std::size_t(pivot_col_[std::size_t(k)])]) /
                        diag_[std::size_t(k)];
            w[std::size_t(k)] = wk;
            if (wk != 0.0)
                for (auto& [j, u] : u_rows_[std::size_t(k)]) acc[std::size_t(j)] += u * wk;
        }
        auto& y = acc;  // reuse as output, row-indexed
        std::fill(y.begin(), y.end(), 0.0);
        for (int k = m_ - 1; k >= 0; --k) {
            double t = w[std::size_t(k)];
            for (auto& [i, l] : l_cols_[std::size_t(k)]) t -= l * y[std::size_t(i)];
            y[std::size_t(pivot_row_[std::size_t(k)])] = t;
        }
        x = y;
    }

  private:
    int m_ = 0;
    std::vector<int> pivot_row_, pivot_col_;
    std::vector<double> diag_;
    std::vector<std::vector<std::pair<int, double>>> l_cols_;  // (row, multiplier)
    std::vector<std::vector<std::pair<int, double>>> u_rows_;  // (position, value)
    std::vector<Eta> etas_;
    std::size_t eta_nnz_ = 0;
    std::vector<double> scratch_a_, scratch_b_;
};

} // namespace ressize
