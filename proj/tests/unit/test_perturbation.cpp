#include <cmath>
#include <random>

#include "doctest.h"
#include "floquet/perturbation.hpp"

using namespace floquet;

TEST_SUITE("perturbation") {
  TEST_CASE("chain bound closed form") {
    CHECK(chain_bound(0.1, {}) == doctest::Approx(0.1));
    CHECK(chain_bound(0.1, {1.2}) == doctest::Approx(4 * 1e-3 / 1.0));
    CHECK(chain_bound(0.1, {1.2, 2.2}) == doctest::Approx(16 * 1e-5 / 1.0 / 4.0));
  }

  TEST_CASE("spectral norm of a diagonal matrix is its largest modulus") {
    CMat m = CMat::Zero(3, 3);
    m(0, 0) = cplx(0, -2);
    m(1, 1) = 1.5;
    m(2, 2) = -0.5;
    CHECK(spectral_norm(m) == doctest::Approx(2.0));
  }

  TEST_CASE("random instances satisfy the eigenvalue bounds") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
      int level = 0;
      const auto inst = random_chain_instance(rng, &level);
      CHECK(check_chain_lemma(inst, level).pass);
      CHECK(check_cluster_lemma(random_cluster_instance(rng, i % 3)).pass);
      CHECK(check_relative_proposition(random_relative_instance(rng)).pass);
    }
  }

  TEST_CASE("zero symbol has no truncation error") {
    const auto lat = standard_lattice(2);
    Vec k(2);
    k << 0.31, 0.17;
    CHECK(shell_truncation_compare(k, lat, zero_symbol(lat), 1.0, 8.0, 16.0) < 1e-12);
  }
}
