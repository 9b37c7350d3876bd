#include "sumapprox/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace sumapprox {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
    int m, n;             // constraint rows, structural columns
    int width;            // n + m artificials + 1 rhs
    std::vector<double> t;
    std::vector<int> basis;
    std::vector<double> obj;  // reduced-cost row, length width

    double& at(int r, int j) { return t[static_cast<size_t>(r) * width + j]; }
    int rhs() const { return width - 1; }

    void pivot(int pr, int pc) {
        const double pv = at(pr, pc);
        double* prow = &t[static_cast<size_t>(pr) * width];
        for (int j = 0; j < width; ++j) prow[j] /= pv;
        for (int r = 0; r < m; ++r) {
            if (r == pr) continue;
            double* row = &t[static_cast<size_t>(r) * width];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (int j = 0; j < width; ++j) row[j] -= f * prow[j];
            row[pc] = 0.0;
        }
        const double f = obj[pc];
        if (f != 0.0) {
            for (int j = 0; j < width; ++j) obj[j] -= f * prow[j];
            obj[pc] = 0.0;
        }
        basis[pr] = pc;
    }

    // Bland's rule: smallest eligible entering column, smallest basis index
    // among tied leaving rows. `limit` excludes artificial columns in phase 2.
    // Returns false when optimal; throws on unboundedness (cannot happen for
    // the bounded programs built by the oracle).
    bool step(int limit) {
        int pc = -1;
        for (int j = 0; j < limit; ++j) {
            if (obj[j] < -kEps) {
                pc = j;
                break;
            }
        }
        if (pc < 0) return false;
        int pr = -1;
        double best = 0;
        for (int r = 0; r < m; ++r) {
            const double a = at(r, pc);
            if (a > kEps) {
                const double ratio = at(r, rhs()) / a;
                if (pr < 0 || ratio < best - 1e-12 ||
                    (ratio < best + 1e-12 && basis[r] < basis[pr])) {
                    pr = r;
                    best = ratio;
                }
            }
        }
        if (pr < 0) throw std::runtime_error("simplex: unbounded direction");
        pivot(pr, pc);
        return true;
    }
};

}  // namespace

SimplexResult solve_standard_form(const StandardLp& lp, long max_pivots) {
    const int m = lp.rows, n = lp.cols;
    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.width = n + m + 1;
    tb.t.assign(static_cast<size_t>(m) * tb.width, 0.0);
    tb.basis.resize(m);

    std::vector<double> rowsign(m, 1.0);
    for (int r = 0; r < m; ++r) {
        const double s = lp.b[r] < 0 ? -1.0 : 1.0;
        rowsign[r] = s;
        for (int j = 0; j < n; ++j) tb.at(r, j) = s * lp.at(r, j);
        tb.at(r, n + r) = 1.0;
        tb.at(r, tb.rhs()) = s * lp.b[r];
        tb.basis[r] = n + r;
    }

    SimplexResult res;

    // Phase 1: minimize the sum of artificials.
    tb.obj.assign(tb.width, 0.0);
    for (int r = 0; r < m; ++r)
        for (int j = 0; j < tb.width; ++j) tb.obj[j] -= tb.at(r, j);
    for (int r = 0; r < m; ++r) tb.obj[n + r] = 0.0;
    while (tb.step(tb.width - 1)) {
        if (++res.pivots > max_pivots) {
            res.status = SimplexResult::Status::pivot_limit;
            return res;
        }
    }
    if (-tb.obj[tb.rhs()] > 1e-7) {
        res.status = SimplexResult::Status::infeasible;
        return res;
    }

    // Drive basic artificials out where possible; redundant rows keep their
    // artificial at level zero.
    for (int r = 0; r < m; ++r) {
        if (tb.basis[r] < n) continue;
        for (int j = 0; j < n; ++j) {
            if (std::fabs(tb.at(r, j)) > kEps) {
                tb.pivot(r, j);
                break;
            }
        }
    }

    // Phase 2: the real objective, artificial columns blocked from entering.
    tb.obj.assign(tb.width, 0.0);
    for (int j = 0; j < n; ++j) tb.obj[j] = lp.c[j];
    for (int r = 0; r < m; ++r) {
        const int bj = tb.basis[r];
        const double cb = bj < n ? lp.c[bj] : 0.0;
        if (cb == 0.0) continue;
        for (int j = 0; j < tb.width; ++j) tb.obj[j] -= cb * tb.at(r, j);
    }
    for (int r = 0; r < m; ++r)
        if (tb.basis[r] >= n) tb.obj[tb.basis[r]] = 0.0;
    while (tb.step(n)) {
        if (++res.pivots > max_pivots) {
            res.status = SimplexResult::Status::pivot_limit;
            return res;
        }
    }

    res.status = SimplexResult::Status::optimal;
    res.x.assign(n, 0.0);
    double objective = 0.0;
    for (int r = 0; r < m; ++r) {
        if (tb.basis[r] < n) {
            res.x[tb.basis[r]] = tb.at(r, tb.rhs());
            objective += lp.c[tb.basis[r]] * tb.at(r, tb.rhs());
        }
    }
    res.objective = objective;

    // Row multipliers: pi = c_B B^{-1}, with B^{-1} sitting in the artificial
    // columns; undo the row sign flips applied for b >= 0.
    res.dual.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double pi = 0.0;
        for (int r = 0; r < m; ++r) {
            const int bj = tb.basis[r];
            if (bj < n) pi += lp.c[bj] * tb.at(r, n + i);
        }
        res.dual[i] = rowsign[i] * pi;
    }
    return res;
}

}  // namespace sumapprox
