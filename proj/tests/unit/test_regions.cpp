#include <cmath>

#include "doctest.h"
#include "floquet/regions.hpp"

using namespace floquet;

TEST_SUITE("regions") {
  TEST_CASE("automatic parameters for d = 2, l = 1 satisfy all constraints") {
    const auto p = auto_region_params(2, 1, 0, 100, 1, 1.1, 0.02, 2.2);
    REQUIRE(p.q.size() == 2);
    CHECK(p.q[0] == doctest::Approx(0.4));
    CHECK(p.q[1] == doctest::Approx(0.6));
    CHECK(p.gamma == doctest::Approx(0.2));
    CHECK(p.eps0 == doctest::Approx(0.002));
    CHECK_NOTHROW(p.validate(2));
  }

  TEST_CASE("violated inequalities are rejected") {
    auto p = auto_region_params(2, 1, 0, 100, 1, 1.1, 0.02, 2.2);
    p.q = {0.6, 0.4};
    CHECK_THROWS_AS(p.validate(2), ValidationError);
    p = auto_region_params(2, 1, 0, 100, 1, 1.1, 0.02, 2.2);
    p.rho = -1;
    CHECK_THROWS_AS(p.validate(2), ValidationError);
  }

  TEST_CASE("table holds the zero subspace and the short lines") {
    const auto ctx = make_region_context(standard_lattice(2), auto_region_params(2, 1, 0, 100, 1, 1.1, 0.02, 2.2));
    REQUIRE(ctx.table.size() == 5);
    CHECK(ctx.table[0].n == 0);
    for (size_t i = 1; i < ctx.table.size(); ++i) CHECK(ctx.table[i].n == 1);
  }

  TEST_CASE("layer and classification of generic and axis points") {
    const auto ctx = make_region_context(standard_lattice(2), auto_region_params(2, 1, 0, 100, 1, 1.1, 0.02, 2.2));
    Vec far(2);
    far << 300, 1;
    CHECK(classify_point(far, ctx).kind == RegionKind::outside_A);
    // Generic direction: every theta-resonance is far away.
    Vec xi(2);
    xi << 100.0 * std::cos(0.4137), 100.0 * std::sin(0.4137);
    CHECK(in_layer_A(xi, ctx.p));
    CHECK(classify_point(xi, ctx).kind == RegionKind::non_resonance_B);
    // Close to the first coordinate axis and on the resonance plane |xi|^2 = |xi + e_2|^2.
    Vec res(2);
    res << std::sqrt(100.0 * 100.0 - 0.25), -0.5;
    CHECK(classify_point(res, ctx).kind == RegionKind::resonance_D);
  }

  TEST_CASE("Monte Carlo volume of a disc") {
    const Box box{Vec::Constant(2, -1), Vec::Constant(2, 1)};
    const auto v = mc_volume([](const Vec& x) { return x.squaredNorm() <= 1; }, box, 200000, 4);
    CHECK(std::abs(v.estimate - M_PI) <= 1.5 * v.ci95);
    CHECK(v.samples == 200000);
  }
}
