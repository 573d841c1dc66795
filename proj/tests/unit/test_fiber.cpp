#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "floquet/fiber.hpp"

using namespace floquet;

TEST_SUITE("fiber") {
  TEST_CASE("zero symbol reproduces |k + n|^{2l} by brute force") {
    const auto lat = standard_lattice(2);
    Vec k(2);
    k << 0.31, 0.17;
    for (double l : {1.0, 1.5}) {
      const auto F = assemble_fiber(k, lat, zero_symbol(lat), l, 6.0);
      std::vector<double> expect;
      for (int a = -7; a <= 7; ++a)
        for (int b = -7; b <= 7; ++b) {
          const double r = std::hypot(k[0] + a, k[1] + b);
          if (r <= 6.0) expect.push_back(std::pow(r, 2 * l));
        }
      std::sort(expect.begin(), expect.end());
      const auto got = eigen(F, false).eigenvalues;
      REQUIRE(got.size() == expect.size());
      for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-13));
    }
  }

  TEST_CASE("one-dimensional cosine fiber is the tridiagonal Mathieu matrix") {
    const auto lat = standard_lattice(1);
    IVec dir(1);
    dir << 1;
    const double q = 0.3, k = 0.23;
    const auto F = assemble_fiber(Vec::Constant(1, k), lat, cosine_symbol(lat, dir, q), 1.0, 10.0);
    const int n = 20;  // k + m, m = -10..9
    Mat T = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      T(i, i) = std::pow(k + i - 10, 2);
      if (i + 1 < n) T(i, i + 1) = T(i + 1, i) = q;
    }
    REQUIRE(F.size() == n);
    Eigen::SelfAdjointEigenSolver<Mat> es(T);
    const auto got = eigen(F, false).eigenvalues;
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-12));
  }

  TEST_CASE("component solver agrees with the dense solver") {
    const auto lat = standard_lattice(2);
    IVec t(2);
    t << 1, 1;
    const auto sym = make_symbol(lat, {{t, cplx(0.2, 0.1)}, {IVec(-t), cplx(0.2, -0.1)}}, 0.0);
    Vec k(2);
    k << 0.1, 0.45;
    const auto pts = fiber_basis(k, lat, 5.0);
    const CMat m = assemble_matrix(pts, lat, sym, 1.0);
    CHECK((m - m.adjoint()).norm() < 1e-14);
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    const auto got = fiber_eigenvalues(pts, lat, sym, 1.0);
    REQUIRE(static_cast<long>(got.size()) == m.rows());
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-12));
  }

  TEST_CASE("merge keeps multiplicities in order") {
    const auto m = merge_spectra({1, 3, 3}, {2, 3});
    CHECK(m == std::vector<double>{1, 2, 3, 3, 3});
  }

  TEST_CASE("projection keeps the selected plane waves") {
    const auto lat = standard_lattice(2);
    const auto F = assemble_fiber(Vec::Constant(2, 0.2), lat, cosine_symbol(lat, IVec::Unit(2, 0), 0.1), 1.0, 4.0);
    const auto P = project_suboperator(F, [](const Vec& xi) { return xi[0] > 0; });
    for (const auto& p : P.basis_points) CHECK(p[0] > 0);
    CHECK(P.size() < F.size());
    CHECK(P.matrix.rows() == P.size());
  }
}
