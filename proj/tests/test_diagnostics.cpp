#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sumapprox/bolts.hpp"
#include "sumapprox/diagnostics.hpp"
#include "sumapprox/oracle.hpp"
#include "test_util.hpp"

using namespace sumapprox;

TEST_CASE("expression parser") {
    Expr e = Expr::parse("x*y + min(x, 2) - abs(-y)");
    CHECK(e.eval({3, 4}) == doctest::Approx(3 * 4 + 2 - 4).epsilon(1e-15));
    CHECK(Expr::parse("max(x, y*y)").eval({1, 2}) == 4.0);
    CHECK(Expr::parse("-(x - 0.5)").eval({2}) == -1.5);
    CHECK(Expr::parse("1.5e2").eval({}) == 150.0);

    Domain d = testutil::product_grid({2, 2});
    CHECK(Expr::parse("x*y").eval_field(d) == Field{0, 0, 0, 1});

    CHECK_THROWS_AS(Expr::parse("x +"), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse("foo(x)"), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse("min(x)"), std::invalid_argument);
    CHECK_THROWS_AS(Expr::parse("(x"), std::invalid_argument);
}

TEST_CASE("component jump sweep separates smooth and stepped behaviour") {
    Expr xy = Expr::parse("x*y");

    // On a rectangle the per-class extrema vary smoothly: jumps shrink
    // like 1/N.
    SweepReport rect = cproperty_jump(make_region("rectangle", {0, 1, 0, 1}),
                                      xy, {4, 8, 16});
    REQUIRE(rect.resolutions == std::vector<int>{4, 8, 16});
    for (size_t i = 0; i < rect.resolutions.size(); ++i)
        CHECK(rect.metrics.at("factor0_max_jump")[i] <=
              3.0 / rect.resolutions[i] + 1e-12);

    // Constant data has no jumps anywhere.
    SweepReport flat = cproperty_jump(make_region("union_ncu"), Expr::parse("2.5"),
                                      {4, 8});
    for (const auto& [name, vals] : flat.metrics)
        for (double v : vals) CHECK(v <= 1e-12);

    // On the non-product union the factor-0 max function steps by about 1
    // where the tall part of the region ends, independent of N.
    SweepReport u = cproperty_jump(make_region("union_ncu"), xy, {16, 32});
    for (size_t i = 0; i < u.resolutions.size(); ++i)
        CHECK(u.metrics.at("factor0_max_jump")[i] >= 0.8);
}

TEST_CASE("irreducible bolt length sweep") {
    SweepReport rect = medvedev_sweep(make_region("rectangle", {0, 1, 0, 1}),
                                      {2, 4, 8}, 16);
    const auto& lens = rect.metrics.at("max_irreducible_bolt_length");
    for (double v : lens) CHECK(v == 3.0);
    CHECK(rect.summary == "bounded-looking");

    SweepReport tri = medvedev_sweep(make_region("triangle_abc"), {4, 8, 16}, 128);
    const auto& tl = tri.metrics.at("max_irreducible_bolt_length");
    CHECK(tl.back() > tl.front());
    CHECK(tl.back() > 3.0);

    // The CSV rendering carries one row per (resolution, metric) pair.
    std::string csv = sweep_report_to_csv(rect);
    CHECK(csv.find("resolution,metric,value") == 0);
    CHECK(csv.find("max_irreducible_bolt_length") != std::string::npos);
    CHECK(sweep_report_to_json(rect).find("bounded-looking") != std::string::npos);
}

TEST_CASE("closedness constant estimate from a tracked run") {
    Domain d = testutil::product_grid({2, 2});
    RunOptions opts;
    opts.track_closedness = true;
    LevellingState st = run_levelling(d, Field{0, 0, 0, 1}, opts);
    ClosednessEstimate est = closedness_constant(st);
    CHECK(est.h_norm == 1.0);
    CHECK(est.k_lower_estimate >= 1.0 - 1e-12);
    CHECK(est.sum_bound_holds);
    CHECK(est.max_sum_norm <= 2 * est.h_norm + 1e-12);

    // Data already in one algebra: u captures everything, so the ratio is 1.
    Field in_a1 = lift(FactorFunction{0, {2, -1}}, d);
    LevellingState st2 = run_levelling(d, in_a1, opts);
    ClosednessEstimate est2 = closedness_constant(st2);
    CHECK(est2.k_lower_estimate == doctest::Approx(1.0).epsilon(1e-12));

    // Random product grids stay within the sum bound too.
    testutil::Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        Domain rd = testutil::random_product_grid(rng, 6);
        LevellingState rs = run_levelling(
            rd, testutil::random_field(rng, rd.num_points()), opts);
        CHECK(closedness_constant(rs).sum_bound_holds);
    }

    LevellingState untracked = run_levelling(d, Field{0, 0, 0, 1});
    CHECK_THROWS_AS(closedness_constant(untracked), std::invalid_argument);
}

TEST_CASE("slice averaging comparison") {
    // Product grid: every factor-0 class sees the same factor-1 classes.
    Domain d = testutil::product_grid({3, 4});
    testutil::Rng rng(73);
    Field h = testutil::random_field(rng, d.num_points());
    SliceComparison sc = slice_averaging_check(d, h, 0, 2);
    CHECK(sc.comparable);
    CHECK(sc.holds);
    CHECK(sc.lhs <= sc.rhs + 1e-12);

    // Identical slices give a zero midrange difference.
    Field sym = h;
    for (int j = 0; j < 4; ++j) sym[2 * 4 + j] = sym[j];
    SliceComparison same = slice_averaging_check(d, sym, 0, 2);
    CHECK(same.comparable);
    CHECK(same.lhs <= 1e-12);

    // Non-product union: the short column does not project onto the same
    // factor-1 classes as a tall one.
    Domain u = generate_domain(make_region("union_ncu"), 1);
    int tall = -1, shortcol = -1;
    for (int p = 0; p < u.num_points(); ++p) {
        if (u.points[p].coords[0] == 0.0) tall = u.class_of(p, 0);
        if (u.points[p].coords[0] == 2.0) shortcol = u.class_of(p, 0);
    }
    REQUIRE(tall >= 0);
    REQUIRE(shortcol >= 0);
    Field uh = testutil::random_field(rng, u.num_points());
    CHECK(!slice_averaging_check(u, uh, tall, shortcol).comparable);

    CHECK_THROWS_AS(slice_averaging_check(d, h, 0, 99), std::out_of_range);
}

TEST_CASE("multi-factor gap against the exact error") {
    testutil::Rng rng(79);

    // Two factors: levelling reaches the LP optimum.
    Domain d2 = testutil::random_product_grid(rng, 6);
    Field h2 = testutil::random_field(rng, d2.num_points());
    StopRule stop;
    stop.tol = 1e-12;
    stop.max_steps = 50000;
    MultiFactorGap g2 = multi_factor_gap(d2, h2, stop);
    CHECK(g2.gap >= -1e-9);
    CHECK(g2.gap <= 1e-6);
    CHECK(g2.terminal_norm ==
          doctest::Approx(g2.oracle_error + g2.gap).epsilon(1e-12));

    // Three factors: the terminal norm can sit above the optimum but never
    // below it.
    for (int trial = 0; trial < 5; ++trial) {
        Domain d3 = testutil::product_grid({2 + trial % 2, 2, 2});
        Field h3 = testutil::random_field(rng, d3.num_points());
        MultiFactorGap g3 = multi_factor_gap(d3, h3, stop);
        CHECK(g3.gap >= -1e-9);
        CHECK(g3.steps > 0);
    }
}
