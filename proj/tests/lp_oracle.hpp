#pragma once

// Brute-force LP oracles for cross-checking the simplex implementation.
// Dense, slow, and deliberately independent of the solver under test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

namespace ressize::testing {

using Dense = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting. Returns false if singular.
inline bool dense_solve(Dense a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        if (std::abs(a[p][k]) < 1e-11) return false;
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a[i][k] / a[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return true;
}

// Exhaustive enumeration of every basis subset of a standard-form LP
// min c·x s.t. Ax = b, x >= 0. Only viable for small n.
inline std::optional<double> best_vertex_all_subsets(const Dense& a, const std::vector<double>& b,
                                                     const std::vector<double>& c) {
    const std::size_t m = a.size(), n = a[0].size();
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    std::vector<std::size_t> comb(m);
    std::optional<double> best;

    // iterate over all m-subsets in lexicographic order
    for (std::size_t j = 0; j < m; ++j) comb[j] = j;
    while (true) {
        Dense ab(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) ab[i][j] = a[i][comb[j]];
        std::vector<double> xb;
        if (dense_solve(ab, b, xb)) {
            bool feasible = true;
            for (double v : xb)
                if (v < -1e-9) feasible = false;
            if (feasible) {
                double obj = 0.0;
                for (std::size_t j = 0; j < m; ++j) obj += c[comb[j]] * xb[j];
                if (!best || obj < *best) best = obj;
            }
        }
        // next combination
        std::size_t i = m;
        while (i-- > 0) {
            if (comb[i] != i + n - m) {
                ++comb[i];
                for (std::size_t j = i + 1; j < m; ++j) comb[j] = comb[j - 1] + 1;
                break;
            }
            if (i == 0) return best;
        }
        if (comb[0] == n - m + 1) break;
    }
    return best;
}

// Exhaustive vertex enumeration by breadth-first pivoting over the graph of
// feasible bases. Requires a known feasible basis to start from and a
// nondegenerate polytope (random data). Bounded when c > 0.
inline std::optional<double> best_vertex_bfs(const Dense& a, const std::vector<double>& b,
                                             const std::vector<double>& c, std::vector<std::size_t> start_basis,
                                             std::size_t* visited_out = nullptr) {
    const std::size_t m = a.size(), n = a[0].size();
    std::sort(start_basis.begin(), start_basis.end());
    std::set<std::vector<std::size_t>> seen;
    std::queue<std::vector<std::size_t>> frontier;
    seen.insert(start_basis);
    frontier.push(start_basis);
    std::optional<double> best;
    std::size_t visited = 0;

    while (!frontier.empty()) {
        auto basis = frontier.front();
        frontier.pop();
        ++visited;

        Dense ab(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) ab[i][j] = a[i][basis[j]];
        std::vector<double> xb;
        if (!dense_solve(ab, b, xb)) continue;
        double obj = 0.0;
        bool feasible = true;
        for (std::size_t j = 0; j < m; ++j) {
            if (xb[j] < -1e-9) feasible = false;
            obj += c[basis[j]] * xb[j];
        }
        if (!feasible) continue;
        if (!best || obj < *best) best = obj;

        std::vector<char> in_basis(n, 0);
        for (auto j : basis) in_basis[j] = 1;

        // neighbors: for each entering column, the ratio test picks the
        // unique leaving variable (nondegenerate data)
        for (std::size_t q = 0; q < n; ++q) {
            if (in_basis[q]) continue;
            std::vector<double> aq(m);
            for (std::size_t i = 0; i < m; ++i) aq[i] = a[i][q];
            std::vector<double> w;
            if (!dense_solve(ab, aq, w)) continue;
            double theta = std::numeric_limits<double>::infinity();
            std::size_t leave = m;
            for (std::size_t i = 0; i < m; ++i)
                if (w[i] > 1e-9) {
                    double r = std::max(xb[i], 0.0) / w[i];
                    if (r < theta) {
                        theta = r;
                        leave = i;
                    }
                }
            if (leave == m) continue;  // unbounded edge
            auto nb = basis;
            nb[leave] = q;
            std::sort(nb.begin(), nb.end());
            if (seen.insert(nb).second) frontier.push(nb);
        }
    }
    if (visited_out) *visited_out = visited;
    return best;
}

} // namespace ressize::testing
