#include "era/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace era {
namespace {

constexpr double kEps = 1e-9;

// Tableau-based simplex over the dictionary form used by the classic
// competitive-programming formulation: D is (m+2) x (n+2), row m holds the
// phase-2 objective, row m+1 the phase-1 objective.
struct Tableau {
    int m, n;
    std::vector<int> nonbasic, basic;
    std::vector<std::vector<double>> d;

    Tableau(const SimplexSolver::Matrix& a, const SimplexSolver::Row& b,
            const SimplexSolver::Row& c)
        : m(static_cast<int>(b.size())),
          n(static_cast<int>(c.size())),
          nonbasic(n + 1),
          basic(m),
          d(m + 2, std::vector<double>(n + 2, 0.0)) {
        for (int i = 0; i < m; ++i) {
            basic[i] = n + i;
            for (int j = 0; j < n; ++j) d[i][j] = a[i][j];
            d[i][n] = -1.0;
            d[i][n + 1] = b[i];
        }
        for (int j = 0; j < n; ++j) {
            nonbasic[j] = j;
            d[m][j] = -c[j];
        }
        nonbasic[n] = -1;
        d[m + 1][n] = 1.0;
    }

    void pivot(int r, int s) {
        double inv = 1.0 / d[r][s];
        for (int i = 0; i < m + 2; ++i) {
            if (i == r || std::abs(d[i][s]) <= kEps) continue;
            double coef = d[i][s] * inv;
            for (int j = 0; j < n + 2; ++j) d[i][j] -= d[r][j] * coef;
            d[i][s] = -coef;  // column of the leaving variable
        }
        for (int j = 0; j < n + 2; ++j)
            if (j != s) d[r][j] *= inv;
        d[r][s] = inv;
        std::swap(basic[r], nonbasic[s]);
    }

    bool simplex(int phase) {
        int x = phase == 1 ? m + 1 : m;  // feasibility row, then the real objective
        for (;;) {
            int s = -1;
            for (int j = 0; j < n + 1; ++j) {
                if (phase == 2 && nonbasic[j] == -1) continue;
                if (s == -1 || d[x][j] < d[x][s] ||
                    (d[x][j] == d[x][s] && nonbasic[j] < nonbasic[s]))
                    s = j;
            }
            if (d[x][s] >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m; ++i) {
                if (d[i][s] <= kEps) continue;
                if (r == -1 || d[i][n + 1] / d[i][s] < d[r][n + 1] / d[r][s] ||
                    (d[i][n + 1] / d[i][s] == d[r][n + 1] / d[r][s] && basic[i] < basic[r]))
                    r = i;
            }
            if (r == -1) return false;  // unbounded
            pivot(r, s);
        }
    }
};

}  // namespace

SimplexSolver::Result SimplexSolver::solve(const Matrix& a, const Row& b, const Row& c) {
    const int m = static_cast<int>(b.size());
    const int n = static_cast<int>(c.size());
    for (const Row& row : a)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("simplex: ragged constraint matrix");
    if (static_cast<int>(a.size()) != m)
        throw std::invalid_argument("simplex: row count mismatch");

    Tableau t(a, b, c);
    Result res;

    int r = 0;
    for (int i = 1; i < m; ++i)
        if (t.d[i][n + 1] < t.d[r][n + 1]) r = i;
    if (m > 0 && t.d[r][n + 1] < -kEps) {
        t.pivot(r, n);
        if (!t.simplex(1) || t.d[m + 1][n + 1] < -kEps) {
            res.status = Status::infeasible;
            return res;
        }
        // Drive any leftover artificial variable out of the basis.
        for (int i = 0; i < m; ++i) {
            if (t.basic[i] != -1) continue;
            int s = 0;
            for (int j = 1; j < n + 1; ++j)
                if (std::abs(t.d[i][j]) > std::abs(t.d[i][s]) ||
                    (std::abs(t.d[i][j]) == std::abs(t.d[i][s]) && t.nonbasic[j] < t.nonbasic[s]))
                    s = j;
            if (std::abs(t.d[i][s]) > kEps) t.pivot(i, s);
        }
    }

    if (!t.simplex(2)) {
        res.status = Status::unbounded;
        return res;
    }
    res.status = Status::optimal;
    res.objective = t.d[m][n + 1];
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basic[i] >= 0 && t.basic[i] < n) res.x[t.basic[i]] = t.d[i][n + 1];
    return res;
}

}  // namespace era
