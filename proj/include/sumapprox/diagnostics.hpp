#ifndef SUMAPPROX_DIAGNOSTICS_HPP
#define SUMAPPROX_DIAGNOSTICS_HPP

#include <map>
#include <string>
#include <vector>

#include "sumapprox/domain.hpp"
#include "sumapprox/expr.hpp"
#include "sumapprox/levelling.hpp"

namespace sumapprox {

struct SweepReport {
    std::vector<int> resolutions;
    std::map<std::string, std::vector<double>> metrics;  // index-aligned
    std::vector<std::string> verdicts;                   // per resolution
    std::string summary;
};

/// Per resolution, the largest jump of the per-class max (and min) function
/// between adjacent classes, for both factors. Classes are adjacent by
/// sorted representative coordinate. Metrics: factor{0,1}_{max,min}_jump.
SweepReport cproperty_jump(const RegionSpec& region, const Expr& h,
                           const std::vector<int>& resolutions);

/// Per resolution, max_irreducible_bolt_length (or cap overflow, recorded
/// as -1). Summary verdict: "growing" when strictly increasing across the
/// sweep, "bounded-looking" when the tail stabilizes.
SweepReport medvedev_sweep(const RegionSpec& region,
                           const std::vector<int>& resolutions, int cap);

struct ClosednessEstimate {
    double k_lower_estimate = 0.0;  // max (||u||+||v||)/||u+v|| over the run
    double max_sum_norm = 0.0;      // max ||u+v|| observed
    double h_norm = 0.0;
    bool sum_bound_holds = true;    // every ||u+v|| <= 2||h|| + 1e-12
};

/// Empirical lower estimate of the closedness constant from a 2-factor run
/// recorded with closedness tracking on.
ClosednessEstimate closedness_constant(const LevellingState& st);

struct SliceComparison {
    bool comparable = false;  // factor-1 projections of the two slices agree
    double lhs = 0.0;         // |midrange(f1) - midrange(f2)|
    double rhs = 0.0;         // ||f1 - f2|| over the shared classes
    bool holds = false;       // lhs <= rhs + 1e-12 (only meaningful if comparable)
};

/// Compares the midrange averaging over two factor-0 level sets, treated as
/// slices indexed by their factor-1 classes. When the projections differ
/// the slices are flagged incomparable.
SliceComparison slice_averaging_check(const Domain& d, const Field& h,
                                      int class_a, int class_b);

struct MultiFactorGap {
    double terminal_norm = 0.0;
    double oracle_error = 0.0;
    double gap = 0.0;
    long steps = 0;
    bool stalled = false;  // gap > 1e-3 persisting through the step budget
};

/// Cyclic levelling over all n >= 2 factors against the exact LP error.
MultiFactorGap multi_factor_gap(const Domain& d, const Field& h,
                                const StopRule& stop);

std::string sweep_report_to_csv(const SweepReport& r);
std::string sweep_report_to_json(const SweepReport& r);

}  // namespace sumapprox

#endif
