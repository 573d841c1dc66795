#include <cmath>
#include <random>

#include "doctest.h"
#include "floquet/studies.hpp"
#include "floquet/symbol.hpp"

using namespace floquet;

TEST_SUITE("symbol") {
  TEST_CASE("cosine symbol evaluates to 2q cos(theta . x) with norm constant 2q") {
    const auto lat = standard_lattice(2);
    IVec dir(2);
    dir << 1, 0;
    const auto sym = cosine_symbol(lat, dir, 0.25);
    CHECK(sym.norm_L == doctest::Approx(0.5));
    Vec x(2), xi(2);
    x << 0.7, -1.3;
    xi << 4.0, 2.0;
    const cplx v = eval_symbol(sym, lat, x, xi);
    CHECK(v.real() == doctest::Approx(0.5 * std::cos(0.7)));
    CHECK(std::abs(v.imag()) < 1e-14);
  }

  TEST_CASE("fiber entries of the cosine symbol equal q on the coupled pairs") {
    const auto lat = standard_lattice(2);
    IVec dir(2);
    dir << 0, 1;
    const auto sym = cosine_symbol(lat, dir, 0.1);
    Vec xi(2), up(2), diag(2);
    xi << 0.2, 0.4;
    up << 0.2, 1.4;
    diag << 1.2, 1.4;
    CHECK(std::abs(fiber_entry(sym, lat, up, xi) - cplx(0.1)) < 1e-15);
    CHECK(std::abs(fiber_entry(sym, lat, xi, up) - cplx(0.1)) < 1e-15);
    CHECK(std::abs(fiber_entry(sym, lat, diag, xi)) == 0.0);
  }

  TEST_CASE("entries are Hermitian for order alpha > 0 and complex amplitudes") {
    const auto lat = standard_lattice(2);
    IVec t(2);
    t << 1, 1;
    const auto sym = make_symbol(lat, {{t, cplx(0.02, 0.01)}, {IVec(-t), cplx(0.02, -0.01)}}, 0.5);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int i = 0; i < 50; ++i) {
      Vec xi(2);
      xi << u(rng), u(rng);
      const Vec eta = xi + lat.dual_basis * t.cast<double>();
      CHECK(std::abs(fiber_entry(sym, lat, eta, xi) - std::conj(fiber_entry(sym, lat, xi, eta))) < 1e-15);
    }
  }

  TEST_CASE("modes at or beyond R are rejected") {
    const auto lat = standard_lattice(2);
    IVec t(2);
    t << 2, 0;
    CHECK_THROWS_AS(make_symbol(lat, {{t, cplx(0.1)}}, 0.0, 1.5), ValidationError);
  }

  TEST_CASE("axis cosines agree with the sum of two cosine symbols") {
    const auto lat = standard_lattice(2);
    const auto sym = axis_cosines(lat, 0.005);
    CHECK(sym.norm_L == doctest::Approx(0.02));
    Vec x(2), xi(2);
    x << 1.1, 2.3;
    xi << 50, -3;
    CHECK(eval_symbol(sym, lat, x, xi).real() == doctest::Approx(0.01 * (std::cos(1.1) + std::cos(2.3))));
  }

  TEST_CASE("empirical bounds stay below the declared constants") {
    const auto lat = standard_lattice(2);
    IVec t(2);
    t << 1, 0;
    const auto sym = make_symbol(lat, {{t, cplx(0.03)}, {IVec(-t), cplx(0.03)}}, 0.4);
    std::vector<Vec> grid;
    for (double r : {1.0, 10.0, 100.0}) {
      Vec xi(2);
      xi << r, 0.5 * r;
      grid.push_back(xi);
    }
    const auto b = verify_symbol_bounds(sym, lat, grid);
    CHECK(b.c_emp <= sym.bound_c * (1 + 1e-12));
  }
}
