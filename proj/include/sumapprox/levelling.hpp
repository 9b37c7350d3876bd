#ifndef SUMAPPROX_LEVELLING_HPP
#define SUMAPPROX_LEVELLING_HPP

#include <array>
#include <vector>

#include "sumapprox/domain.hpp"

namespace sumapprox {

/// One real value per point id.
using Field = std::vector<double>;

/// An element of a factor algebra: one real value per class of `factor`.
struct FactorFunction {
    int factor = 0;
    std::vector<double> values;
};

double sup_norm(const Field& f);

/// Field with value ff.values[class of x] at each point x.
Field lift(const FactorFunction& ff, const Domain& d);

/// Midrange operator per level set: (max + min)/2 of h over each class of
/// `factor` -- the best constant approximation on each level set in the
/// uniform norm.
FactorFunction proximity_op(const Field& h, const Domain& d, int factor);

enum class Termination { none, converged, max_steps_reached };

struct StopRule {
    double tol = 1e-9;
    int window = 8;        // half-steps
    long max_steps = 100000;
};

struct LevellingState {
    Field residual;                         // current h_n
    std::vector<FactorFunction> components; // accumulated per-factor parts
    long step_count = 0;
    std::vector<double> norm_history;       // ||h_1||, ||h_2||, ...
    std::vector<int> schedule;              // factor visit cycle
    Termination termination = Termination::none;
    Field original;                         // h, kept for drift control

    // (||u||, ||v||, ||u+v||) recorded after each factor-0 step when
    // closedness tracking is on (2-factor runs only).
    bool track_closedness = false;
    std::vector<std::array<double, 3>> closedness_history;
};

LevellingState make_state(const Domain& d, Field h,
                          std::vector<int> schedule = {});

/// One levelling half-step on `factor`: subtracts the midrange correction
/// from the residual and accumulates it into components[factor].
void levelling_step(LevellingState& st, const Domain& d, int factor);

struct RunOptions {
    StopRule stop;
    std::vector<int> schedule;       // empty: cyclic 0..n-1
    bool track_closedness = false;
};

/// Alternating levelling until the windowed norm decrease drops below tol
/// or max_steps is reached. Non-convergence within the budget is a reported
/// outcome (termination = max_steps_reached), not an error.
LevellingState run_levelling(const Domain& d, const Field& h,
                             const RunOptions& opts = {});

/// | ||h-Fh-f|| - ||h-Fh+f|| | for f = ff lifted; zero in exact arithmetic
/// since the midrange operator is a central proximity map.
double central_symmetry_gap(const Domain& d, const Field& h,
                            const FactorFunction& ff);

}  // namespace sumapprox

#endif
