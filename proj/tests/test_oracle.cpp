#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sumapprox/oracle.hpp"
#include "test_util.hpp"

using namespace sumapprox;

TEST_CASE("2x2 xy golden instance: error 0.25 with equioscillating residual") {
    Domain d = testutil::product_grid({2, 2});
    Field h = {0, 0, 0, 1};
    OracleResult r = lp_exact_error(d, h);
    REQUIRE(r.status == OracleResult::Status::optimal);
    CHECK(r.error == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(verify_certificate(d, h, r).pass);

    Field resid = h;
    for (const auto& c : r.components) {
        Field l = lift(c, d);
        for (size_t p = 0; p < resid.size(); ++p) resid[p] -= l[p];
    }
    for (double v : resid) CHECK(std::fabs(v) == doctest::Approx(0.25).epsilon(1e-9));

    // Independent vertex-enumeration oracle agrees.
    CHECK(testutil::brute_force_error(d, h) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("representable and degenerate fields have zero error") {
    Domain d = testutil::product_grid({3, 2});
    Field h = lift(FactorFunction{0, {1, -2, 0.5}}, d);
    Field g = lift(FactorFunction{1, {0.75, -0.25}}, d);
    for (size_t p = 0; p < h.size(); ++p) h[p] += g[p];
    OracleResult r = lp_exact_error(d, h);
    CHECK(r.error <= 1e-12);
    CHECK(verify_certificate(d, h, r).pass);

    Domain single = validate_domain({Point{}}, {{0}, {0}});
    OracleResult rs = lp_exact_error(single, {42.0});
    CHECK(rs.error <= 1e-12);
}

TEST_CASE("solver matches the vertex-enumeration oracle on tiny instances") {
    testutil::Rng rng(101);
    for (int trial = 0; trial < 12; ++trial) {
        Domain d = trial % 2 == 0 ? testutil::product_grid({2, 2})
                                  : testutil::product_grid({3, 2});
        Field h = testutil::random_field(rng, d.num_points());
        OracleResult r = lp_exact_error(d, h);
        REQUIRE(r.status == OracleResult::Status::optimal);
        CHECK(r.error == doctest::Approx(testutil::brute_force_error(d, h)).epsilon(1e-7));
        CHECK(verify_certificate(d, h, r).pass);
    }
}

TEST_CASE("certificate verification rejects doctored results") {
    Domain d = testutil::product_grid({2, 2});
    Field h = {0, 0, 0, 1};
    OracleResult r = lp_exact_error(d, h);
    REQUIRE(r.status == OracleResult::Status::optimal);

    OracleResult no_dual = r;
    std::fill(no_dual.dual_weights.begin(), no_dual.dual_weights.end(), 0.0);
    CHECK(verify_certificate(d, h, no_dual).reason == "duality gap");

    OracleResult perturbed = r;
    perturbed.components[0].values[0] += 1e-3;
    CHECK(verify_certificate(d, h, perturbed).reason == "primal norm mismatch");
}

TEST_CASE("scale equivariance and shift invariance") {
    testutil::Rng rng(55);
    Domain d = testutil::random_product_grid(rng, 5);
    Field h = testutil::random_field(rng, d.num_points());
    OracleResult base = lp_exact_error(d, h);
    REQUIRE(base.status == OracleResult::Status::optimal);

    Field scaled = h;
    for (double& v : scaled) v *= 3.0;
    CHECK(lp_exact_error(d, scaled).error == doctest::Approx(3 * base.error).epsilon(1e-9));

    FactorFunction ff = testutil::random_factor_function(rng, d, 0);
    Field shifted = h;
    Field l = lift(ff, d);
    for (size_t p = 0; p < shifted.size(); ++p) shifted[p] += l[p];
    CHECK(lp_exact_error(d, shifted).error == doctest::Approx(base.error).epsilon(1e-9));
}

TEST_CASE("n-factor oracle certifies itself") {
    Domain d = testutil::product_grid({2, 2, 2});
    Field h(d.num_points(), 0.0);
    for (int p = 0; p < d.num_points(); ++p)
        h[p] = d.factors[0][p] * d.factors[1][p] * d.factors[2][p];
    OracleResult r = n_factor_error(d, h);
    REQUIRE(r.status == OracleResult::Status::optimal);
    CHECK(r.error >= 0.0);
    CHECK(verify_certificate(d, h, r).pass);

    Field constant(d.num_points(), 2.5);
    CHECK(n_factor_error(d, constant).error <= 1e-12);

    // n = 2 goes through the identical formulation.
    Domain d2 = testutil::product_grid({3, 3});
    testutil::Rng rng(5);
    Field h2 = testutil::random_field(rng, d2.num_points());
    CHECK(n_factor_error(d2, h2).error == lp_exact_error(d2, h2).error);
}
