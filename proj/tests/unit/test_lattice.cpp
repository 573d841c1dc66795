#include <cmath>
#include <random>

#include "doctest.h"
#include "floquet/lattice.hpp"

using namespace floquet;

TEST_SUITE("lattice") {
  TEST_CASE("standard lattice has dual Z^d and matching volumes") {
    for (int d = 1; d <= 3; ++d) {
      const auto lat = standard_lattice(d);
      CHECK((lat.dual_basis - Mat::Identity(d, d)).norm() < 1e-15);
      CHECK(lat.vol_gamma == doctest::Approx(std::pow(2 * M_PI, d)));
      CHECK(lat.vol_gamma * lat.vol_gamma_dual == doctest::Approx(std::pow(2 * M_PI, d)));
    }
  }

  TEST_CASE("dual pairing lands in 2 pi Z for random bases") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 1 + trial % 3;
      Mat b = Mat::Identity(d, d) * 3.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) += u(rng);
      const auto lat = make_lattice_pair(b);
      const Mat pairing = lat.dual_basis.transpose() * lat.basis / (2 * M_PI);
      CHECK((pairing - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("shifted ball matches a brute-force count") {
    const auto lat = standard_lattice(2);
    Vec k(2);
    k << 0.3, 0.7;
    const double r = 6.5;
    int brute = 0;
    for (int a = -10; a <= 10; ++a)
      for (int b = -10; b <= 10; ++b) brute += std::hypot(a + 0.3, b + 0.7) <= r ? 1 : 0;
    const auto pts = enumerate_shifted_ball(lat, k, r);
    CHECK(static_cast<int>(pts.size()) == brute);
    for (size_t i = 1; i < pts.size(); ++i) CHECK_FALSE(point_less(pts[i], pts[i - 1]));
  }

  TEST_CASE("ball of radius 1 in Z^2 is the origin and four neighbours, origin first") {
    const auto pts = enumerate_ball(standard_lattice(2), 1.0);
    REQUIRE(pts.size() == 5);
    CHECK(pts[0].norm() == 0.0);
    // Ties at |x| = 1 are broken lexicographically.
    CHECK(pts[1](0) == -1.0);
    CHECK(pts[4](0) == 1.0);
  }

  TEST_CASE("fractional part lies in the unit cell and reconstructs the point") {
    const auto lat = standard_lattice(3);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int t = 0; t < 100; ++t) {
      Vec x(3);
      x << u(rng), u(rng), u(rng);
      const auto f = fractional_part(x, lat);
      const Vec c = lat.dual_inverse * f.k;
      CHECK(c.minCoeff() >= 0.0);
      CHECK(c.maxCoeff() < 1.0);
      CHECK((f.k + f.gamma - x).norm() < 1e-12);
      const IVec g = dual_coords(lat, f.gamma);
      CHECK((lat.dual_basis * g.cast<double>() - f.gamma).norm() < 1e-9);
    }
  }

  TEST_CASE("projection splits xi into orthogonal parts") {
    const auto lat = standard_lattice(3);
    Vec a(3), b(3), x(3);
    a << 1, 1, 0;
    b << 0, 1, 2;
    x << 0.3, -2.0, 7.5;
    const auto V = make_subspace(lat, {a, b});
    CHECK(V.dim() == 2);
    const auto pr = project_subspace(x, V);
    CHECK((pr.along + pr.perp - x).norm() < 1e-12);
    CHECK(std::abs(pr.along.dot(pr.perp)) < 1e-12);
    CHECK((V.projector * V.projector - V.projector).norm() < 1e-12);
    CHECK(in_span(V, a + 2 * b));
  }

  TEST_CASE("containment, sums and complement angles") {
    const auto lat = standard_lattice(3);
    Vec e1 = Vec::Unit(3, 0), e2 = Vec::Unit(3, 1), d(3);
    d << 1, 1, 0;
    const auto L1 = make_subspace(lat, {e1});
    const auto L2 = make_subspace(lat, {d});
    const auto P = make_subspace(lat, {e1, e2});
    CHECK(contained_in(L1, P));
    CHECK_FALSE(contained_in(P, L1));
    CHECK(same_span(subspace_sum(lat, L1, L2), P));
    CHECK(complement_angle(L1, P) == doctest::Approx(M_PI));
    // Inside the plane the complements of the two lines are the lines rotated by 90 degrees.
    CHECK(complement_angle(L1, L2) == doctest::Approx(M_PI / 4));
  }

  TEST_CASE("subspace enumeration lists each span once") {
    const auto lat = standard_lattice(2);
    // Directions of length < 2.2 in Z^2: (1,0), (0,1), (1,1), (1,-1); |(1,2)| = 2.236 is too long.
    const auto lines = enumerate_subspaces(lat, 2.2, 1);
    CHECK(lines.size() == 4);
    CHECK(enumerate_subspaces(lat, 2.3, 1).size() == 8);
    for (size_t i = 0; i < lines.size(); ++i)
      for (size_t j = i + 1; j < lines.size(); ++j) CHECK_FALSE(same_span(lines[i], lines[j]));
  }

  TEST_CASE("lattice points on a line") {
    const auto lat = standard_lattice(2);
    Vec d(2);
    d << 1, 1;
    const auto V = make_subspace(lat, {d});
    const auto pts = subspace_lattice_points(V, 3.0);
    // 0, +-(1,1), +-(2,2); |(2,2)| = 2.83 <= 3.
    CHECK(pts.size() == 5);
  }

  TEST_CASE("projection onto a sum is bounded by the principal angle") {
    const auto lat = standard_lattice(3);
    const auto subs = enumerate_subspaces(lat, 1.5, 1);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01;
    for (size_t i = 0; i < subs.size(); ++i)
      for (size_t j = i + 1; j < subs.size(); ++j) {
        const auto W = subspace_sum(lat, subs[i], subs[j]);
        const double C = 1.0 / std::sin(complement_angle(subs[i], subs[j]) / 2);
        for (int t = 0; t < 200; ++t) {
          Vec xi(3);
          xi << 50 * n01(rng), 50 * n01(rng), 50 * n01(rng);
          const double lhs = project_subspace(xi, W).along.norm();
          const double rhs = project_subspace(xi, subs[i]).along.norm() + project_subspace(xi, subs[j]).along.norm();
          CHECK(lhs <= C * rhs * (1 + 1e-12));
        }
      }
  }
}
