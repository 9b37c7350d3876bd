#include "sumapprox/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "sumapprox/simplex.hpp"

namespace sumapprox {

namespace {

constexpr double kTol = 1e-9;

// Primal variable layout: t, then factor-0 classes 0..k0-1, then for each
// factor i >= 1 its classes 1..ki-1 (class 0 gauge-fixed to zero).
struct VarLayout {
    int num_vars = 1;
    std::vector<int> offset;  // offset[i] + class -> var index (factor 0)

    explicit VarLayout(const Domain& d) {
        offset.resize(d.num_factors());
        offset[0] = 1;
        num_vars = 1 + d.class_counts[0];
        for (int i = 1; i < d.num_factors(); ++i) {
            offset[i] = num_vars - 1;  // class c >= 1 maps to offset[i] + c
            num_vars += d.class_counts[i] - 1;
        }
    }
    // Variable index of c_i(cls), or -1 for a gauge-fixed class.
    int var(int factor, int cls) const {
        if (factor == 0) return offset[0] + cls;
        if (cls == 0) return -1;
        return offset[factor] + cls;
    }
};

}  // namespace

OracleResult lp_exact_error(const Domain& d, const Field& h) {
    if (h.size() != static_cast<size_t>(d.num_points()))
        throw std::invalid_argument("field length mismatch");
    const int m = d.num_points();
    const VarLayout lay(d);

    // The bounded-deviation program  min t,  |h(x) - sum_i c_i(cls_i(x))| <= t
    // is solved through its standard-form dual: one nonnegative variable per
    // one-sided constraint, one equality row per primal variable. Row
    // multipliers of the solved program are exactly (t, c) of the original.
    StandardLp lp;
    lp.rows = lay.num_vars;
    lp.cols = 2 * m;
    lp.a.assign(static_cast<size_t>(lp.rows) * lp.cols, 0.0);
    lp.b.assign(lp.rows, 0.0);
    lp.c.assign(lp.cols, 0.0);
    lp.b[0] = 1.0;  // total dual mass
    for (int j = 0; j < m; ++j) {
        const int up = 2 * j;       // multiplier of  h - sum c <= t
        const int down = 2 * j + 1; // multiplier of  sum c - h <= t
        lp.at(0, up) = 1.0;
        lp.at(0, down) = 1.0;
        lp.c[up] = -h[j];
        lp.c[down] = h[j];
        for (int i = 0; i < d.num_factors(); ++i) {
            const int v = lay.var(i, d.factors[i][j]);
            if (v < 0) continue;
            lp.at(v, up) = -1.0;
            lp.at(v, down) = 1.0;
        }
    }

    SimplexResult sol = solve_standard_form(lp);
    OracleResult res;
    if (sol.status != SimplexResult::Status::optimal) {
        res.status = OracleResult::Status::numerical_trouble;
        return res;
    }
    res.error = std::max(0.0, -sol.objective);
    res.components.resize(d.num_factors());
    for (int i = 0; i < d.num_factors(); ++i) {
        res.components[i].factor = i;
        res.components[i].values.assign(d.class_counts[i], 0.0);
        for (int c = 0; c < d.class_counts[i]; ++c) {
            const int v = lay.var(i, c);
            if (v >= 0) res.components[i].values[c] = sol.dual[v];
        }
    }
    res.dual_weights.resize(m);
    for (int j = 0; j < m; ++j) res.dual_weights[j] = sol.x[2 * j] - sol.x[2 * j + 1];
    return res;
}

OracleResult n_factor_error(const Domain& d, const Field& h) {
    return lp_exact_error(d, h);
}

CertificateCheck verify_certificate(const Domain& d, const Field& h,
                                    const OracleResult& r) {
    CertificateCheck out;
    auto fail = [&](const std::string& why) {
        out.pass = false;
        out.reason = why;
        return out;
    };
    if (r.status != OracleResult::Status::optimal) return fail("status not optimal");
    if (r.components.size() != static_cast<size_t>(d.num_factors()))
        return fail("component count mismatch");

    Field resid = h;
    for (const auto& c : r.components) {
        const Field l = lift(c, d);
        for (size_t p = 0; p < resid.size(); ++p) resid[p] -= l[p];
    }
    if (std::fabs(sup_norm(resid) - r.error) > kTol) return fail("primal norm mismatch");

    if (r.dual_weights.size() != static_cast<size_t>(d.num_points()))
        return fail("dual weight count mismatch");
    double l1 = 0, pairing = 0;
    for (int p = 0; p < d.num_points(); ++p) {
        l1 += std::fabs(r.dual_weights[p]);
        pairing += r.dual_weights[p] * h[p];
    }
    if (l1 > 1.0 + kTol) return fail("dual l1 norm exceeds 1");
    if (std::fabs(std::fabs(pairing) - r.error) > kTol) return fail("duality gap");

    for (int i = 0; i < d.num_factors(); ++i) {
        std::vector<double> per_class(d.class_counts[i], 0.0);
        for (int p = 0; p < d.num_points(); ++p)
            per_class[d.factors[i][p]] += r.dual_weights[p];
        for (double s : per_class)
            if (std::fabs(s) > kTol) return fail("dual weights do not annihilate a class");
    }
    return out;
}

}  // namespace sumapprox
