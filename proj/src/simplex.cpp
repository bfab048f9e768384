#include "causalgap/simplex.hpp"

#include <stdexcept>

namespace causalgap::lp {

namespace {

void verify(const std::vector<std::vector<QSqrt2>>& A, const std::vector<QSqrt2>& b,
            const Feasibility& result) {
    const size_t m = A.size();
    const size_t n = m ? A[0].size() : 0;
    if (result.feasible) {
        if (result.solution.size() != n) throw std::logic_error("simplex: bad solution size");
        for (const auto& x : result.solution)
            if (x.sign() < 0) throw std::logic_error("simplex: negative solution entry");
        for (size_t i = 0; i < m; ++i) {
            QSqrt2 row;
            for (size_t j = 0; j < n; ++j) row += A[i][j] * result.solution[j];
            if (row != b[i]) throw std::logic_error("simplex: solution violates a constraint");
        }
    } else {
        if (result.certificate.size() != m) throw std::logic_error("simplex: bad certificate size");
        for (size_t j = 0; j < n; ++j) {
            QSqrt2 col;
            for (size_t i = 0; i < m; ++i) col += result.certificate[i] * A[i][j];
            if (col.sign() > 0) throw std::logic_error("simplex: certificate not separating");
        }
        QSqrt2 rhs;
        for (size_t i = 0; i < m; ++i) rhs += result.certificate[i] * b[i];
        if (rhs.sign() <= 0) throw std::logic_error("simplex: certificate value not positive");
    }
}

}  // namespace

Feasibility solve_equality_feasibility(const std::vector<std::vector<QSqrt2>>& A,
                                       const std::vector<QSqrt2>& b) {
    const size_t m = A.size();
    if (b.size() != m) throw std::invalid_argument("simplex: A and b row counts differ");
    const size_t n = m ? A[0].size() : 0;
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("simplex: ragged matrix");

    if (m == 0) return {true, std::vector<QSqrt2>(n), {}};

    // Phase-1 tableau [A | I | b] with artificial basis; rows flipped so that
    // the right-hand side is nonnegative.
    std::vector<int> flip(m, 1);
    const size_t cols = n + m + 1;
    const size_t rhs = cols - 1;
    std::vector<std::vector<QSqrt2>> t(m, std::vector<QSqrt2>(cols));
    for (size_t i = 0; i < m; ++i) {
        flip[i] = b[i].sign() < 0 ? -1 : 1;
        for (size_t j = 0; j < n; ++j) t[i][j] = flip[i] < 0 ? -A[i][j] : A[i][j];
        t[i][n + i] = QSqrt2(1);
        t[i][rhs] = flip[i] < 0 ? -b[i] : b[i];
    }
    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Reduced-cost row for "minimize the sum of artificials": artificial
    // columns start at 0, real columns at minus their column sum.
    std::vector<QSqrt2> cost(cols);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < m; ++i) cost[j] -= t[i][j];
    for (size_t i = 0; i < m; ++i) cost[rhs] -= t[i][rhs];  // cost[rhs] = -objective

    while (true) {
        // Bland: entering column = smallest index with a negative reduced cost.
        size_t enter = cols;
        for (size_t j = 0; j < n + m; ++j) {
            if (cost[j].sign() < 0) {
                enter = j;
                break;
            }
        }
        if (enter == cols) break;

        // Ratio test; ties by smallest basic variable index (Bland).
        size_t leave = m;
        QSqrt2 best;
        for (size_t i = 0; i < m; ++i) {
            if (t[i][enter].sign() <= 0) continue;
            const QSqrt2 ratio = t[i][rhs] / t[i][enter];
            if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m)
            throw std::logic_error("simplex: phase-1 objective unbounded");  // cannot happen

        const QSqrt2 pivot = t[leave][enter];
        for (size_t j = 0; j < cols; ++j) t[leave][j] /= pivot;
        for (size_t i = 0; i < m; ++i) {
            if (i == leave || t[i][enter].is_zero()) continue;
            const QSqrt2 factor = t[i][enter];
            for (size_t j = 0; j < cols; ++j) t[i][j] -= factor * t[leave][j];
        }
        if (!cost[enter].is_zero()) {
            const QSqrt2 factor = cost[enter];
            for (size_t j = 0; j < cols; ++j) cost[j] -= factor * t[leave][j];
        }
        basis[leave] = enter;
    }

    Feasibility result;
    const QSqrt2 objective = -cost[rhs];
    if (objective.is_zero()) {
        result.feasible = true;
        result.solution.assign(n, QSqrt2(0));
        for (size_t i = 0; i < m; ++i)
            if (basis[i] < n) result.solution[basis[i]] = t[i][rhs];
    } else {
        // Farkas multipliers off the terminal tableau: y_i = 1 - (reduced
        // cost of artificial i), undoing the row flips.
        result.feasible = false;
        result.certificate.resize(m);
        for (size_t i = 0; i < m; ++i) {
            const QSqrt2 y = QSqrt2(1) - cost[n + i];
            result.certificate[i] = flip[i] < 0 ? -y : y;
        }
    }
    verify(A, b, result);
    return result;
}

}  // namespace causalgap::lp
