#pragma once

#include <vector>

#include "floquet/fiber.hpp"
#include "floquet/regions.hpp"

namespace floquet {

// H restricted to xi + Theta_M; offsets[0] = 0 is the anchor.
struct LocalBlock {
  Vec anchor;
  std::vector<Vec> offsets;
  CMat matrix;
  double j_lo = 0.0;  // J_xi = |xi|^{2l} +- L rho^alpha
  double j_hi = 0.0;
};

LocalBlock local_matrix(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym);

// The unique eigenvalue of the local block in J_xi; NumericalError "uniqueness failure" otherwise.
double g_tilde_nonres(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym);
double g_tilde_nonres(const LocalBlock& block);

// I(mu) = -b^*(D - mu)^{-1} b for the anchor row b and the remaining block D.
struct SchurTerm {
  double value = 0.0;
  double derivative = 0.0;
};
SchurTerm schur_I(const LocalBlock& block, double mu);

// Root of a_00 - mu + I(mu) in J_xi.
double schur_fixed_point(const LocalBlock& block);

// min over theta != 0 of dist(a_thetatheta, J_xi).
double local_gap(const LocalBlock& block);

struct GradG {
  double G = 0.0;
  Vec grad;
};

// G = g_tilde - |xi|^{2l} and its central-difference gradient. Every stencil point must lie in B.
GradG grad_G(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym, double h = 1e-3);

struct ResonanceBlock {
  int v_index = -1;
  LatticeSubspace V;
  Vec anchor;
  std::vector<Vec> base;      // Y~(xi), sorted
  std::vector<Vec> y_points;  // Y(xi) = Y~(xi) + Theta_M, sorted
  CMat matrix;
  int anchor_rank = 0;  // j(xi), zero-based
  double r = 0.0;       // |xi_V^perp|
  Vec xi_prime;         // xi_V^perp / r
  Vec xi_V;
};

// Y~(xi) = (xi + V cap Gamma^dagger) cap Xi_3(V), sorted.
std::vector<Vec> y_tilde(const Vec& xi, int v_index, const RegionContext& ctx);

ResonanceBlock resonance_block(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym);

struct ResonanceValue {
  double value = 0.0;
  int rank = 0;
  bool bound_ok = false;  // |g_tilde - |xi|^{2l}| <= L rho^alpha
};

ResonanceValue g_tilde_res(const ResonanceBlock& block, const RegionContext& ctx);

// Connected component of { r : xi_V + r xi'_V in Xi_2(V) } containing r(xi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

Interval x_interval(const Vec& xi, int v_index, const RegionContext& ctx);

// Y(xi, X(xi)) from K interior samples plus the endpoints of X(xi), sorted.
std::vector<Vec> y_union(const Vec& xi, int v_index, const RegionContext& ctx, int K);

struct GResult {
  double value = 0.0;
  int rank = 0;             // i(xi), zero-based
  int size = 0;             // |Y(xi, X(xi))|
  bool y_stable = false;    // K and 2K unions coincide
  std::vector<Vec> y_points;
};

GResult g_res(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym, int K = 32);

// g(xi) - g_tilde(xi) from the same two matrices, diagonalized in 113-bit arithmetic.
// In double both values carry round-off near eps |xi|^{2l}, far above the difference for M >= 2.
double g_difference_extended(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym, int K = 32);

// Taylor coefficients b_s(xi, eta), s = 1..3, of |eta|^{2l} in powers of r = r(xi).
std::vector<double> taylor_b(double l, const Vec& xi_prime, const Vec& w);

struct NuDerivative {
  std::vector<double> derivative;  // d nu_j / dt at t = r(xi), ascending index
  double max_abs = 0.0;
  double taylor_residual = 0.0;    // max over eta of |eta|^{2l} - r^{2l} - sum_{s<=3} r^{2l-s} b_s
  std::vector<double> b1;          // B_1 diagonal
};

// Along a(t) = t xi'_V + xi_V with U = X(xi) and the basis Y(xi, U) carried along.
NuDerivative nu_t_derivative(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym, double dt,
                             int K = 32);

// g on the whole layer: g_tilde on B, g_res on D.
struct GValue {
  RegionKind kind = RegionKind::outside_A;
  int v_index = 0;
  double g_tilde = 0.0;
  double g = 0.0;
};

GValue g_value(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym, int K = 32);

struct FValue {
  double value = 0.0;
  int tau = 0;
  double g_tilde = 0.0;
  RegionKind kind = RegionKind::outside_A;
};

// f(xi) = mu_tau(H(k)) with tau the rank of g_tilde(xi) in sum_V P(V)H(k)P(V) + QH(k)Q.
// shell_w > 0 restricts both operators to ||eta| - rho| < shell_w with a common index offset.
FValue f_value(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym, double cutoff, double shell_w = 0.0);

}  // namespace floquet
