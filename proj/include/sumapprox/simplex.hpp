#ifndef SUMAPPROX_SIMPLEX_HPP
#define SUMAPPROX_SIMPLEX_HPP

#include <vector>

namespace sumapprox {

/// Standard-form linear program: minimize c.x subject to A x = b, x >= 0.
/// A is dense, row-major, m rows by n columns.
struct StandardLp {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // rows*cols, row-major
    std::vector<double> b;  // rows
    std::vector<double> c;  // cols

    double& at(int r, int j) { return a[static_cast<size_t>(r) * cols + j]; }
    double at(int r, int j) const { return a[static_cast<size_t>(r) * cols + j]; }
};

struct SimplexResult {
    enum class Status { optimal, infeasible, pivot_limit };
    Status status = Status::optimal;
    double objective = 0.0;
    std::vector<double> x;     // primal solution, length cols
    std::vector<double> dual;  // row multipliers pi with pi'A <= c', length rows
    long pivots = 0;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule. Row
/// multipliers are read off the artificial columns of the final tableau.
SimplexResult solve_standard_form(const StandardLp& lp, long max_pivots = 2000000);

}  // namespace sumapprox

#endif
