#include <cmath>

#include "doctest.h"
#include "floquet/studies.hpp"

using namespace floquet;

TEST_SUITE("studies") {
  TEST_CASE("log-log slope of a power law") {
    std::vector<double> x{10, 20, 40}, y;
    for (double v : x) y.push_back(3 * std::pow(v, -1.5));
    CHECK(loglog_slope(x, y) == doctest::Approx(-1.5));
  }

  TEST_CASE("unperturbed oracle on a few quasimomenta") {
    const auto s = unperturbed_oracle_study(2, 3);
    CHECK(s.worst <= 1e-10);
  }
}
