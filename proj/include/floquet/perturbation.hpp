#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "floquet/fiber.hpp"

namespace floquet {

using IndexSet = std::vector<int>;

// H0 = diag(h0_diag), perturbations A and B, projections P_0..P_n onto coordinate blocks.
struct BlockInstance {
  Vec h0_diag;
  CMat a_matrix;
  CMat b_matrix;
  std::vector<IndexSet> projections;
  IndexSet q_set;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct ChainCheck {
  double actual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

double spectral_norm(const CMat& m);

// 2^{2n} a^{2n+1} prod_j (a_j - 2a)^{-2}
double chain_bound(double a, const std::vector<double>& gaps);

// Compares the level-th eigenvalue (1-based) of H0 + A + B against H0 + A.
ChainCheck check_chain_lemma(const BlockInstance& inst, int level);

// Clusters P^m, each split into shells P^m_0..P^m_{j_m}; Q is the complement.
struct ClusterInstance {
  Vec h0_diag;
  CMat a_matrix;
  std::vector<std::vector<IndexSet>> clusters;
  IndexSet q_set;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct ClusterReport {
  double b = 0.0;
  double pairing_error = 0.0;
  double pairing_bound = 0.0;
  bool pairing_ok = false;
  bool tilde_in_cluster_spectrum = false;
  bool exclusion_ok = false;
  int shift_l = 0;
  double shift_error = 0.0;
  bool shift_ok = false;
  bool pass = false;
};

ClusterReport check_cluster_lemma(const ClusterInstance& inst);

// P_0..P_N with P_N the only block coupled to Q; relative-bound data for Q.
struct RelativeInstance {
  Vec h0_diag;
  CMat a_matrix;
  std::vector<IndexSet> projections;
  IndexSet q_set;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double epsilon = 0.1;
  double k_epsilon = 0.0;
};

struct RelativeReport {
  double b = 0.0;
  double max_error = 0.0;
  double bound = 0.0;
  int eigenvalues_in_window = 0;
  bool in_p_spectrum = false;
  bool pass = false;
};

RelativeReport check_relative_proposition(const RelativeInstance& inst);

// Random instances satisfying the hypotheses by construction.
BlockInstance random_chain_instance(std::mt19937_64& rng, int* level);
ClusterInstance random_cluster_instance(std::mt19937_64& rng, int q_below = -1);
RelativeInstance random_relative_instance(std::mt19937_64& rng);

// Largest eigenvalue deviation in J between the fiber and its shell-block truncation
// P H P + Q H Q, P the shell ||xi| - rho| < rho/2, J = rho^{2l} +- 100 L rho^alpha.
// L < 0 takes the symbol's norm constant (1 for the zero symbol).
double shell_truncation_compare(const Vec& k, const LatticePair& lat, const TrigSymbol& sym, double l, double rho,
                                double cutoff_full, double L = -1.0);

}  // namespace floquet
