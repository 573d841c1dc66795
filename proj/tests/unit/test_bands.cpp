#include <cmath>

#include "doctest.h"
#include "floquet/bands.hpp"

using namespace floquet;

TEST_SUITE("bands") {
  TEST_CASE("k grid enumerates the cell") {
    const auto g = k_grid(standard_lattice(2), {8, 9});
    REQUIRE(g.size() == 72);
    for (const auto& p : g) {
      CHECK(p.k.minCoeff() >= 0);
      CHECK(p.k.maxCoeff() < 1);
    }
  }

  TEST_CASE("uncovered intervals") {
    std::vector<Band> b(2);
    b[0].a = 0, b[0].b = 1;
    b[1].a = 2, b[1].b = 3;
    const auto g = uncovered(b, -1, 4);
    REQUIRE(g.size() == 3);
    CHECK(g[0].lo == -1);
    CHECK(g[0].hi == 0);
    CHECK(g[1].lo == 1);
    CHECK(g[1].hi == 2);
    CHECK(g[2].lo == 3);
    CHECK(g[2].hi == 4);
    CHECK(uncovered(b, 0.2, 0.8).empty());
  }

  TEST_CASE("target half-width") {
    CHECK(coverage_delta(2, 1, 10, 0.5) == doctest::Approx(0.5e-4));
    CHECK(coverage_delta(3, 1, 10, 0.5) == doctest::Approx(0.5e-2));
  }

  TEST_CASE("free one-dimensional bands are (j/2)^2 to ((j+1)/2)^2") {
    const auto lat = standard_lattice(1);
    auto bt = scan_bands(lat, zero_symbol(lat), 1.0, 6.0, {64});
    refine_band_edges(bt, lat, zero_symbol(lat), 0, 9, 1e-9);
    for (int j = 0; j < 6; ++j) {
      CHECK(bt.bands[j].a == doctest::Approx(0.25 * j * j).epsilon(1e-6));
      CHECK(bt.bands[j].b == doctest::Approx(0.25 * (j + 1) * (j + 1)).epsilon(1e-6));
    }
    CHECK(detect_gaps(bt, 0.1, 9).empty());
  }

  TEST_CASE("cosine potential opens the first gap at 1/4 with width about 2q") {
    const auto lat = standard_lattice(1);
    const double q = 0.05;
    const auto sym = cosine_symbol(lat, IVec::Unit(1, 0), q);
    auto bt = scan_bands(lat, sym, 1.0, 6.0, {64});
    refine_band_edges(bt, lat, sym, 0, 2, 1e-10);
    const auto gaps = detect_gaps(bt, 0.1, 0.4);
    REQUIRE(gaps.size() == 1);
    CHECK(gaps[0].width() == doctest::Approx(2 * q).epsilon(0.05));
    CHECK(0.5 * (gaps[0].lo + gaps[0].hi) == doctest::Approx(0.25).epsilon(0.05));
  }

  TEST_CASE("refined bands contain the grid bands") {
    const auto lat = standard_lattice(2);
    const auto sym = cosine_symbol(lat, IVec::Unit(2, 0), 0.1);
    const auto grid = scan_bands(lat, sym, 1.0, 5.0, {12, 12});
    auto fine = grid;
    refine_band_edges(fine, lat, sym, 4, 4.5);
    for (size_t j = 0; j < grid.bands.size(); ++j) {
      CHECK(fine.bands[j].a <= grid.bands[j].a);
      CHECK(fine.bands[j].b >= grid.bands[j].b);
    }
  }

  TEST_CASE("Mathieu first gap at q = 0.5 has width 1.0 within 10 percent") {
    const auto lat = standard_lattice(1);
    const auto sym = cosine_symbol(lat, IVec::Unit(1, 0), 0.5);
    auto bt = scan_bands(lat, sym, 1.0, 8.0, {64});
    refine_band_edges(bt, lat, sym, -1, 2, 1e-10);
    const auto gaps = detect_gaps(bt, -0.36, 0.9);
    REQUIRE(gaps.size() == 1);
    CHECK(gaps[0].width() == doctest::Approx(1.0).epsilon(0.1));
    // Characteristic values b_1(2) / 4 and a_1(2) / 4 of the Mathieu equation, from scipy.special.
    CHECK(gaps[0].lo == doctest::Approx(-0.34766912530633076).epsilon(1e-8));
    CHECK(gaps[0].hi == doctest::Approx(0.5947999701221716).epsilon(1e-8));
  }
}
