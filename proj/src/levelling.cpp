#include "sumapprox/levelling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sumapprox {

double sup_norm(const Field& f) {
    double m = 0;
    for (double v : f) m = std::max(m, std::fabs(v));
    return m;
}

Field lift(const FactorFunction& ff, const Domain& d) {
    if (ff.factor < 0 || ff.factor >= d.num_factors())
        throw std::invalid_argument("factor index out of range");
    if (ff.values.size() != static_cast<size_t>(d.class_counts[ff.factor]))
        throw std::invalid_argument("class count mismatch in lift");
    Field out(d.num_points());
    const auto& cls = d.factors[ff.factor];
    for (int p = 0; p < d.num_points(); ++p) out[p] = ff.values[cls[p]];
    return out;
}

FactorFunction proximity_op(const Field& h, const Domain& d, int factor) {
    if (factor < 0 || factor >= d.num_factors())
        throw std::invalid_argument("factor index out of range");
    if (h.size() != static_cast<size_t>(d.num_points()))
        throw std::invalid_argument("field length mismatch");
    const int nc = d.class_counts[factor];
    std::vector<double> mx(nc, -std::numeric_limits<double>::infinity());
    std::vector<double> mn(nc, std::numeric_limits<double>::infinity());
    const auto& cls = d.factors[factor];
    for (int p = 0; p < d.num_points(); ++p) {
        const double v = h[p];
        const int c = cls[p];
        mx[c] = std::max(mx[c], v);
        mn[c] = std::min(mn[c], v);
    }
    FactorFunction ff;
    ff.factor = factor;
    ff.values.resize(nc);
    for (int c = 0; c < nc; ++c) ff.values[c] = 0.5 * (mx[c] + mn[c]);
    return ff;
}

LevellingState make_state(const Domain& d, Field h, std::vector<int> schedule) {
    if (h.size() != static_cast<size_t>(d.num_points()))
        throw std::invalid_argument("field length mismatch");
    LevellingState st;
    st.original = h;
    st.residual = std::move(h);
    st.components.resize(d.num_factors());
    for (int i = 0; i < d.num_factors(); ++i) {
        st.components[i].factor = i;
        st.components[i].values.assign(d.class_counts[i], 0.0);
    }
    if (schedule.empty()) {
        schedule.resize(d.num_factors());
        std::iota(schedule.begin(), schedule.end(), 0);
    }
    for (int f : schedule)
        if (f < 0 || f >= d.num_factors())
            throw std::invalid_argument("schedule factor out of range");
    st.schedule = std::move(schedule);
    st.norm_history.push_back(sup_norm(st.residual));
    return st;
}

namespace {

void record_closedness(LevellingState& st, const Domain& d) {
    // Valid for 2-factor runs: components[0] holds u_n, components[1] v_{n-1}.
    double un = 0, vn = 0, sum = 0;
    const auto& u = st.components[0].values;
    const auto& v = st.components[1].values;
    for (double x : u) un = std::max(un, std::fabs(x));
    for (double x : v) vn = std::max(vn, std::fabs(x));
    for (int p = 0; p < d.num_points(); ++p)
        sum = std::max(sum, std::fabs(u[d.factors[0][p]] + v[d.factors[1][p]]));
    st.closedness_history.push_back({un, vn, sum});
}

void recompute_residual(LevellingState& st, const Domain& d) {
    st.residual = st.original;
    for (const auto& c : st.components) {
        const auto& cls = d.factors[c.factor];
        for (int p = 0; p < d.num_points(); ++p) st.residual[p] -= c.values[cls[p]];
    }
}

}  // namespace

void levelling_step(LevellingState& st, const Domain& d, int factor) {
    FactorFunction q = proximity_op(st.residual, d, factor);
    const auto& cls = d.factors[factor];
    for (int p = 0; p < d.num_points(); ++p) st.residual[p] -= q.values[cls[p]];
    auto& acc = st.components[factor].values;
    for (size_t c = 0; c < acc.size(); ++c) acc[c] += q.values[c];
    ++st.step_count;
    if (st.step_count % 1024 == 0) recompute_residual(st, d);
    st.norm_history.push_back(sup_norm(st.residual));
    if (st.track_closedness && d.num_factors() == 2 && factor == 0)
        record_closedness(st, d);
}

LevellingState run_levelling(const Domain& d, const Field& h, const RunOptions& opts) {
    if (opts.stop.tol < 0) throw std::invalid_argument("tol must be >= 0");
    if (opts.stop.window < 1) throw std::invalid_argument("window must be >= 1");
    if (opts.stop.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    LevellingState st = make_state(d, h, opts.schedule);
    st.track_closedness = opts.track_closedness;
    const int w = opts.stop.window;
    size_t cursor = 0;
    while (st.step_count < opts.stop.max_steps) {
        levelling_step(st, d, st.schedule[cursor]);
        cursor = (cursor + 1) % st.schedule.size();
        const size_t k = st.norm_history.size() - 1;
        if (k >= static_cast<size_t>(w) &&
            st.norm_history[k - w] - st.norm_history[k] < opts.stop.tol) {
            st.termination = Termination::converged;
            return st;
        }
    }
    st.termination = Termination::max_steps_reached;
    return st;
}

double central_symmetry_gap(const Domain& d, const Field& h, const FactorFunction& ff) {
    FactorFunction fh = proximity_op(h, d, ff.factor);
    Field u = h;
    const Field fhl = lift(fh, d);
    for (size_t p = 0; p < u.size(); ++p) u[p] -= fhl[p];
    const Field f = lift(ff, d);
    double plus = 0, minus = 0;
    for (size_t p = 0; p < u.size(); ++p) {
        plus = std::max(plus, std::fabs(u[p] + f[p]));
        minus = std::max(minus, std::fabs(u[p] - f[p]));
    }
    return std::fabs(plus - minus);
}

}  // namespace sumapprox
