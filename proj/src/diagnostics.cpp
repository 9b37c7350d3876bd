#include "sumapprox/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sumapprox/bolts.hpp"
#include "sumapprox/oracle.hpp"

#include "json.hpp"

namespace sumapprox {

namespace {

// Classes of `factor` ordered by representative coordinate along that axis.
std::vector<int> classes_by_coordinate(const Domain& d, int factor) {
    if (factor >= d.coord_dim())
        throw std::invalid_argument("factor has no matching coordinate axis");
    std::vector<double> rep(d.class_counts[factor],
                            std::numeric_limits<double>::infinity());
    for (int p = 0; p < d.num_points(); ++p) {
        const int c = d.factors[factor][p];
        rep[c] = std::min(rep[c], d.points[p].coords[factor]);
    }
    std::vector<int> order(rep.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rep[a] < rep[b]; });
    return order;
}

double max_adjacent_jump(const std::vector<double>& per_class,
                         const std::vector<int>& order) {
    double jump = 0;
    for (size_t i = 0; i + 1 < order.size(); ++i)
        jump = std::max(jump, std::fabs(per_class[order[i]] - per_class[order[i + 1]]));
    return jump;
}

}  // namespace

SweepReport cproperty_jump(const RegionSpec& region, const Expr& h,
                           const std::vector<int>& resolutions) {
    SweepReport rep;
    rep.resolutions = resolutions;
    for (int n : resolutions) {
        const Domain d = generate_domain(region, n);
        const Field f = h.eval_field(d);
        double worst = 0;
        for (int factor : {0, 1}) {
            const auto order = classes_by_coordinate(d, factor);
            std::vector<double> mx(d.class_counts[factor],
                                   -std::numeric_limits<double>::infinity());
            std::vector<double> mn(d.class_counts[factor],
                                   std::numeric_limits<double>::infinity());
            for (int p = 0; p < d.num_points(); ++p) {
                const int c = d.factors[factor][p];
                mx[c] = std::max(mx[c], f[p]);
                mn[c] = std::min(mn[c], f[p]);
            }
            const double jmax = max_adjacent_jump(mx, order);
            const double jmin = max_adjacent_jump(mn, order);
            const std::string pre = "factor" + std::to_string(factor);
            rep.metrics[pre + "_max_jump"].push_back(jmax);
            rep.metrics[pre + "_min_jump"].push_back(jmin);
            worst = std::max({worst, jmax, jmin});
        }
        std::ostringstream v;
        v << "largest_jump=" << worst;
        rep.verdicts.push_back(v.str());
    }
    return rep;
}

SweepReport medvedev_sweep(const RegionSpec& region,
                           const std::vector<int>& resolutions, int cap) {
    SweepReport rep;
    rep.resolutions = resolutions;
    auto& lengths = rep.metrics["max_irreducible_bolt_length"];
    for (int n : resolutions) {
        const Domain d = generate_domain(region, n);
        const BoltLengthBound b = max_irreducible_bolt_length(d, cap);
        lengths.push_back(b.exceeds_cap ? -1.0 : b.max_length);
        rep.verdicts.push_back(b.exceeds_cap ? "exceeds_cap"
                                             : std::to_string(b.max_length));
    }
    bool growing = lengths.size() >= 2;
    for (size_t i = 0; i + 1 < lengths.size(); ++i)
        if (!(lengths[i + 1] < 0 || lengths[i + 1] > lengths[i])) growing = false;
    bool stable = lengths.size() >= 2;
    for (size_t i = 0; i + 1 < lengths.size(); ++i)
        if (lengths[i + 1] != lengths[i] || lengths[i] < 0) stable = false;
    rep.summary = growing ? "growing" : stable ? "bounded-looking" : "inconclusive";
    return rep;
}

ClosednessEstimate closedness_constant(const LevellingState& st) {
    if (st.components.size() != 2)
        throw std::invalid_argument("closedness estimate needs a 2-factor run");
    if (st.closedness_history.empty())
        throw std::invalid_argument("run was not recorded with closedness tracking");
    ClosednessEstimate est;
    est.h_norm = sup_norm(st.original);
    for (const auto& [un, vn, sum] : st.closedness_history) {
        est.k_lower_estimate =
            std::max(est.k_lower_estimate, (un + vn) / std::max(sum, 1e-15));
        est.max_sum_norm = std::max(est.max_sum_norm, sum);
        if (sum > 2 * est.h_norm + 1e-12) est.sum_bound_holds = false;
    }
    return est;
}

SliceComparison slice_averaging_check(const Domain& d, const Field& h,
                                      int class_a, int class_b) {
    if (class_a < 0 || class_a >= d.class_counts[0] || class_b < 0 ||
        class_b >= d.class_counts[0])
        throw std::out_of_range("factor-0 class out of range");

    // Slice value per factor-1 class: midrange of h over the intersection
    // (the plain value when the intersection is a single point).
    auto slice = [&](int cls) {
        std::map<int, std::pair<double, double>> minmax;
        for (int p = 0; p < d.num_points(); ++p) {
            if (d.factors[0][p] != cls) continue;
            const int b = d.factors[1][p];
            auto it = minmax.find(b);
            if (it == minmax.end())
                minmax[b] = {h[p], h[p]};
            else {
                it->second.first = std::min(it->second.first, h[p]);
                it->second.second = std::max(it->second.second, h[p]);
            }
        }
        std::map<int, double> out;
        for (const auto& [b, mm] : minmax) out[b] = 0.5 * (mm.first + mm.second);
        return out;
    };
    const auto f1 = slice(class_a);
    const auto f2 = slice(class_b);

    SliceComparison cmp;
    std::set<int> keys1, keys2;
    for (const auto& [b, _] : f1) keys1.insert(b);
    for (const auto& [b, _] : f2) keys2.insert(b);
    cmp.comparable = keys1 == keys2;
    if (!cmp.comparable) return cmp;  // averaging over two different sets

    double mx1 = -std::numeric_limits<double>::infinity(), mn1 = -mx1;
    double mx2 = mx1, mn2 = mn1;
    for (int b : keys1) {
        mx1 = std::max(mx1, f1.at(b));
        mn1 = std::min(mn1, f1.at(b));
        mx2 = std::max(mx2, f2.at(b));
        mn2 = std::min(mn2, f2.at(b));
        cmp.rhs = std::max(cmp.rhs, std::fabs(f1.at(b) - f2.at(b)));
    }
    cmp.lhs = std::fabs(0.5 * (mx1 + mn1) - 0.5 * (mx2 + mn2));
    cmp.holds = cmp.lhs <= cmp.rhs + 1e-12;
    return cmp;
}

MultiFactorGap multi_factor_gap(const Domain& d, const Field& h,
                                const StopRule& stop) {
    RunOptions opts;
    opts.stop = stop;
    const LevellingState st = run_levelling(d, h, opts);
    const OracleResult oracle = n_factor_error(d, h);
    MultiFactorGap out;
    out.terminal_norm = st.norm_history.back();
    out.oracle_error = oracle.error;
    out.gap = out.terminal_norm - out.oracle_error;
    out.steps = st.step_count;
    out.stalled = out.gap > 1e-3 &&
                  st.step_count >= 10000L * d.num_factors() &&
                  st.termination == Termination::max_steps_reached;
    return out;
}

std::string sweep_report_to_csv(const SweepReport& r) {
    std::ostringstream out;
    out << "resolution,metric,value\n";
    for (const auto& [name, values] : r.metrics)
        for (size_t i = 0; i < r.resolutions.size(); ++i)
            out << r.resolutions[i] << ',' << name << ',' << values[i] << '\n';
    return out.str();
}

std::string sweep_report_to_json(const SweepReport& r) {
    nlohmann::json j;
    j["resolutions"] = r.resolutions;
    j["metrics"] = r.metrics;
    j["verdicts"] = r.verdicts;
    j["summary"] = r.summary;
    return j.dump(1);
}

}  // namespace sumapprox
