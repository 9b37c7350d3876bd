#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sumapprox/levelling.hpp"
#include "sumapprox/oracle.hpp"
#include "test_util.hpp"

using namespace sumapprox;

namespace {

Domain grid22() { return testutil::product_grid({2, 2}); }
Field xy_field() { return {0, 0, 0, 1}; }  // h = xy on the unit-square corners

}  // namespace

TEST_CASE("sup_norm") {
    CHECK(sup_norm({0, 0, 0, 1}) == 1.0);
    CHECK(sup_norm({-3, -3}) == 3.0);
}

TEST_CASE("lift") {
    Domain d = grid22();
    FactorFunction ff{0, {1, 2}};
    CHECK(lift(ff, d) == Field{1, 1, 2, 2});
    CHECK(lift(FactorFunction{1, {0, 0}}, d) == Field{0, 0, 0, 0});
    CHECK_THROWS_AS(lift(FactorFunction{0, {1, 2, 3}}, d), std::invalid_argument);
}

TEST_CASE("proximity_op is the per-class midrange") {
    Domain d = grid22();
    FactorFunction f = proximity_op(xy_field(), d, 0);
    CHECK(f.values == std::vector<double>{0.0, 0.5});

    // Constant shift equivariance.
    Field shifted = xy_field();
    for (double& v : shifted) v += 3.25;
    FactorFunction fs = proximity_op(shifted, d, 0);
    for (size_t c = 0; c < f.values.size(); ++c)
        CHECK(fs.values[c] == doctest::Approx(f.values[c] + 3.25).epsilon(1e-15));

    // Lift then midrange returns the same factor function.
    FactorFunction again = proximity_op(lift(f, d), d, 0);
    CHECK(again.values == f.values);
}

TEST_CASE("levelling steps on the 2x2 xy instance") {
    Domain d = grid22();
    LevellingState st = make_state(d, xy_field());
    levelling_step(st, d, 0);
    CHECK(st.residual == Field{0, 0, -0.5, 0.5});
    CHECK(st.norm_history.back() == 0.5);
    levelling_step(st, d, 1);
    CHECK(st.residual == Field{0.25, -0.25, -0.25, 0.25});
    CHECK(st.norm_history.back() == 0.25);

    // A levelled residual has zero midrange on the factor just applied.
    FactorFunction q = proximity_op(st.residual, d, 1);
    for (double v : q.values) CHECK(v == 0.0);

    // Stepping an already-levelled factor changes only the step count.
    Field before = st.residual;
    levelling_step(st, d, 1);
    CHECK(st.residual == before);
    CHECK(st.step_count == 3);
}

TEST_CASE("run_levelling on golden and representable inputs") {
    Domain d = grid22();
    LevellingState st = run_levelling(d, xy_field());
    CHECK(st.termination == Termination::converged);
    CHECK(st.norm_history.back() == doctest::Approx(0.25).epsilon(1e-12));

    // h already in A1+A2 levels to (numerically) zero.
    Field h = lift(FactorFunction{0, {0.5, -1.0}}, d);
    Field g = lift(FactorFunction{1, {2.0, 0.25}}, d);
    for (size_t p = 0; p < h.size(); ++p) h[p] += g[p];
    LevellingState st2 = run_levelling(d, h);
    CHECK(st2.norm_history.back() <= 1e-12);
}

TEST_CASE("norm history is nonincreasing and conservation holds") {
    testutil::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Domain d = trial % 2 == 0 ? testutil::random_product_grid(rng, 6)
                                  : testutil::random_subset_domain(rng);
        Field h = testutil::random_field(rng, d.num_points());
        RunOptions opts;
        opts.stop.max_steps = 500;
        LevellingState st = run_levelling(d, h, opts);
        for (size_t k = 1; k < st.norm_history.size(); ++k)
            CHECK(st.norm_history[k] <= st.norm_history[k - 1] + 1e-12);

        Field recon = st.residual;
        for (const auto& c : st.components) {
            Field l = lift(c, d);
            for (size_t p = 0; p < recon.size(); ++p) recon[p] += l[p];
        }
        double drift = 0;
        for (size_t p = 0; p < recon.size(); ++p)
            drift = std::max(drift, std::fabs(recon[p] - h[p]));
        CHECK(drift <= 1e-10 * (1 + sup_norm(h)));
    }
}

TEST_CASE("proximity_op is non-expansive") {
    testutil::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Domain d = testutil::random_subset_domain(rng);
        Field v1 = testutil::random_field(rng, d.num_points());
        Field v2 = testutil::random_field(rng, d.num_points());
        for (int f = 0; f < 2; ++f) {
            FactorFunction p1 = proximity_op(v1, d, f);
            FactorFunction p2 = proximity_op(v2, d, f);
            double lhs = 0, rhs = 0;
            for (size_t c = 0; c < p1.values.size(); ++c)
                lhs = std::max(lhs, std::fabs(p1.values[c] - p2.values[c]));
            for (size_t p = 0; p < v1.size(); ++p)
                rhs = std::max(rhs, std::fabs(v1[p] - v2[p]));
            CHECK(lhs <= rhs + 1e-12);
        }
    }
}

TEST_CASE("central symmetry gap vanishes") {
    Domain d = grid22();
    CHECK(central_symmetry_gap(d, xy_field(), FactorFunction{0, {1, -2}}) == 0.0);
    CHECK(central_symmetry_gap(d, xy_field(), FactorFunction{0, {0, 0}}) == 0.0);

    testutil::Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Domain rd = testutil::random_subset_domain(rng);
        Field h = testutil::random_field(rng, rd.num_points());
        const int f = trial % 2;
        FactorFunction ff = testutil::random_factor_function(rng, rd, f);
        CHECK(central_symmetry_gap(rd, h, ff) <= 1e-12);
    }
}

TEST_CASE("norm history stays above the exact error") {
    testutil::Rng rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        Domain d = testutil::random_product_grid(rng, 5);
        Field h = testutil::random_field(rng, d.num_points());
        OracleResult oracle = lp_exact_error(d, h);
        REQUIRE(oracle.status == OracleResult::Status::optimal);
        LevellingState st = run_levelling(d, h);
        for (double norm : st.norm_history) CHECK(norm >= oracle.error - 1e-9);
    }
}

TEST_CASE("custom schedules and run options validate") {
    Domain d = grid22();
    CHECK_THROWS_AS(make_state(d, xy_field(), {0, 5}), std::invalid_argument);
    CHECK_THROWS_AS(make_state(d, Field{1, 2}), std::invalid_argument);
    RunOptions opts;
    opts.stop.max_steps = 1;
    LevellingState st = run_levelling(d, xy_field(), opts);
    CHECK(st.termination == Termination::max_steps_reached);
}
