#include <cmath>

#include "doctest.h"
#include "floquet/asymptotics.hpp"
#include "floquet/studies.hpp"

using namespace floquet;

namespace {
Vec generic_point(double r) {
  Vec xi(2);
  xi << r * std::cos(0.4137), r * std::sin(0.4137);
  return xi;
}
}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("zero symbol gives g = |xi|^2 in the non-resonance region") {
    const auto lat = standard_lattice(2);
    const auto ctx = make_region_context(lat, desk_region_params(100, 1));
    const Vec xi = generic_point(100.2);
    CHECK(g_tilde_nonres(xi, ctx, zero_symbol(lat)) == doctest::Approx(xi.squaredNorm()).epsilon(1e-14));
  }

  TEST_CASE("Schur fixed point equals the local eigenvalue") {
    const auto lat = standard_lattice(2);
    const auto ctx = make_region_context(lat, desk_region_params(100, 1));
    const auto sym = axis_cosines(lat, 0.005);
    const auto block = local_matrix(generic_point(99.9), ctx, sym);
    const double g = g_tilde_nonres(block);
    CHECK(std::abs(schur_fixed_point(block) - g) <= 1e-9 * g);
    CHECK(block.j_lo < g);
    CHECK(g < block.j_hi);
    CHECK(local_gap(block) > 0);
  }

  TEST_CASE("second-order correction of a two-mode symbol") {
    // For a(x) = 2 q cos(x_1) the second-order shift at a non-resonant xi is
    // q^2 (1/(|xi|^2 - |xi + e_1|^2) + 1/(|xi|^2 - |xi - e_1|^2)) = q^2 * 2 / (4 xi_1^2 - 1).
    const auto lat = standard_lattice(2);
    const auto ctx = make_region_context(lat, desk_region_params(100, 1));
    const double q = 0.005;
    const auto sym = cosine_symbol(lat, IVec::Unit(2, 0), q);
    const Vec xi = generic_point(100.1);
    const double shift = g_tilde_nonres(xi, ctx, sym) - xi.squaredNorm();
    const double second = q * q * 2 / (4 * xi[0] * xi[0] - 1);
    CHECK(shift == doctest::Approx(second).epsilon(1e-3));
  }
}
