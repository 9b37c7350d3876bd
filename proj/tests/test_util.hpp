#ifndef SUMAPPROX_TEST_UTIL_HPP
#define SUMAPPROX_TEST_UTIL_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "sumapprox/domain.hpp"
#include "sumapprox/levelling.hpp"

namespace sumapprox::testutil {

using Rng = std::mt19937_64;

inline Domain product_grid(std::vector<int> dims, int resolution = 1) {
    RegionSpec spec;
    spec.kind = RegionSpec::Kind::product_grid;
    spec.dims = std::move(dims);
    return generate_domain(spec, resolution);
}

inline Domain random_product_grid(Rng& rng, int max_dim, int nfactors = 2) {
    std::uniform_int_distribution<int> dim(2, max_dim);
    std::vector<int> dims(nfactors);
    for (int& d : dims) d = dim(rng);
    return product_grid(std::move(dims));
}

// Random non-empty subset of a product grid, renumbered; factor classes may
// shrink. Exercises irregular (non-product) level-set structure.
inline Domain random_subset_domain(Rng& rng, int max_dim = 5) {
    for (;;) {
        Domain g = random_product_grid(rng, max_dim);
        std::vector<Point> pts;
        std::vector<std::vector<int>> factors(2);
        std::bernoulli_distribution keep(0.7);
        for (int p = 0; p < g.num_points(); ++p) {
            if (!keep(rng)) continue;
            pts.push_back(g.points[p]);
            factors[0].push_back(g.factors[0][p]);
            factors[1].push_back(g.factors[1][p]);
        }
        if (pts.empty()) continue;
        return validate_domain(std::move(pts), std::move(factors));
    }
}

inline Field random_field(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Field f(n);
    for (double& v : f) v = u(rng);
    return f;
}

inline FactorFunction random_factor_function(Rng& rng, const Domain& d, int factor,
                                             double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    FactorFunction ff;
    ff.factor = factor;
    ff.values.resize(d.class_counts[factor]);
    for (double& v : ff.values) v = u(rng);
    return ff;
}

// Random legal alternating walk of up to max_len points (at least 2), or
// nothing when the walk cannot even start.
inline std::optional<std::vector<int>> random_walk_points(Rng& rng, const Domain& d,
                                                          int start_relation,
                                                          int max_len) {
    const LevelSetIndex ls[2] = {level_sets(d, 0), level_sets(d, 1)};
    std::uniform_int_distribution<int> pick_point(0, d.num_points() - 1);
    std::vector<int> seq{pick_point(rng)};
    while (static_cast<int>(seq.size()) < max_len) {
        const int e = static_cast<int>(seq.size()) - 1;
        const int rel = e % 2 == 0 ? start_relation : 1 - start_relation;
        const auto& cls = ls[rel].classes[d.class_of(seq.back(), rel)];
        std::vector<int> cands;
        for (int y : cls)
            if (y != seq.back()) cands.push_back(y);
        if (cands.empty()) break;
        seq.push_back(cands[std::uniform_int_distribution<size_t>(0, cands.size() - 1)(rng)]);
    }
    if (seq.size() < 2) return std::nullopt;
    return seq;
}

// Independent oracle for E(h) on tiny connected instances: enumerates the
// vertices of { (t, c) : |h(x) - sum c| <= t } (with the same gauge fixing
// as the solver under test) by solving every square active-constraint
// system, and takes the feasible minimum of t. Exponential; desk scale only.
inline double brute_force_error(const Domain& d, const Field& h) {
    int nv = 1 + d.class_counts[0];
    for (int i = 1; i < d.num_factors(); ++i) nv += d.class_counts[i] - 1;
    const int m = d.num_points();
    const int rows = 2 * m;

    auto var_of = [&](int factor, int cls) -> int {
        if (factor == 0) return 1 + cls;
        if (cls == 0) return -1;
        int off = 1 + d.class_counts[0];
        for (int i = 1; i < factor; ++i) off += d.class_counts[i] - 1;
        return off + cls - 1;
    };

    // Row r: g_row . v <= g_rhs.
    std::vector<std::vector<double>> g(rows, std::vector<double>(nv, 0.0));
    std::vector<double> rhs(rows);
    for (int j = 0; j < m; ++j) {
        g[2 * j][0] = -1.0;      // h - sum c <= t
        g[2 * j + 1][0] = -1.0;  // sum c - h <= t
        rhs[2 * j] = -h[j];
        rhs[2 * j + 1] = h[j];
        for (int i = 0; i < d.num_factors(); ++i) {
            const int v = var_of(i, d.factors[i][j]);
            if (v < 0) continue;
            g[2 * j][v] = -1.0;
            g[2 * j + 1][v] = 1.0;
        }
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> subset(nv);
    std::vector<double> sol(nv);

    auto solve_subset = [&]() {
        std::vector<std::vector<double>> a(nv, std::vector<double>(nv + 1));
        for (int r = 0; r < nv; ++r) {
            for (int j = 0; j < nv; ++j) a[r][j] = g[subset[r]][j];
            a[r][nv] = rhs[subset[r]];
        }
        for (int col = 0; col < nv; ++col) {
            int piv = -1;
            double mx = 1e-9;
            for (int r = col; r < nv; ++r)
                if (std::fabs(a[r][col]) > mx) {
                    mx = std::fabs(a[r][col]);
                    piv = r;
                }
            if (piv < 0) return false;
            std::swap(a[col], a[piv]);
            for (int r = 0; r < nv; ++r) {
                if (r == col) continue;
                const double f = a[r][col] / a[col][col];
                if (f == 0.0) continue;
                for (int j = col; j <= nv; ++j) a[r][j] -= f * a[col][j];
            }
        }
        for (int r = 0; r < nv; ++r) sol[r] = a[r][nv] / a[r][r];
        return true;
    };

    auto feasible = [&]() {
        for (int r = 0; r < rows; ++r) {
            double lhs = 0;
            for (int j = 0; j < nv; ++j) lhs += g[r][j] * sol[j];
            if (lhs > rhs[r] + 1e-7) return false;
        }
        return true;
    };

    auto recurse = [&](auto&& self, int next, int chosen) -> void {
        if (chosen == nv) {
            if (solve_subset() && feasible()) best = std::min(best, sol[0]);
            return;
        }
        if (rows - next < nv - chosen) return;
        subset[chosen] = next;
        self(self, next + 1, chosen + 1);
        self(self, next + 1, chosen);
    };
    recurse(recurse, 0, 0);
    return best;
}

}  // namespace sumapprox::testutil

#endif
