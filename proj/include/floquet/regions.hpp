#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "floquet/lattice.hpp"

namespace floquet {

struct RegionParams {
  double rho = 100.0;
  double l = 1.0;
  double alpha = 0.0;
  std::vector<double> q;  // q_0 < ... < q_{d-1}
  double gamma = 0.2;
  double eps0 = 0.002;
  int M = 1;
  double R = 1.1;
  double L = 0.2;
  double subspace_radius = 0.0;  // radius r of the subspace table; <= 0 selects 6MR

  double table_radius() const { return subspace_radius > 0 ? subspace_radius : 6.0 * M * R; }
  double qn(int n) const { return q.at(static_cast<size_t>(n)); }
  // Throws ValidationError naming the violated inequality.
  void validate(int d) const;
};

double eps0_formula(double l, double alpha, const std::vector<double>& q, double gamma);

// Constraint-satisfying choice of q, gamma, eps0 from (d, l, alpha).
// For d = 2, l = 1, alpha = 0 this gives q = (0.4, 0.6), gamma = 0.2, eps0 = 0.002.
RegionParams auto_region_params(int d, double l, double alpha, double rho, int M, double R, double L,
                                double subspace_radius = 0.0);

struct SubspaceEntry {
  LatticeSubspace V;
  int n = 0;
  std::vector<int> supersets;  // table indices of W containing V with n < dim W <= d-1
};

// Region geometry bound to one lattice and parameter record.
// table[0] is the zero subspace; the remaining entries list V(r, n) for n = 1..d-1.
struct RegionContext {
  LatticePair lat;
  RegionParams p;
  std::vector<SubspaceEntry> table;
  bool has_table = false;
  std::vector<Vec> theta_M;   // closed ball of radius M R
  std::vector<Vec> theta_2M;  // closed ball of radius 2 M R
  std::vector<Vec> theta_MM;  // theta_M + theta_M
  double search_factor = 4.0;  // theta search |theta| <= factor * rho^{q_n} in Xi_3

  int find(const LatticeSubspace& V) const;
};

RegionContext make_region_context(const LatticePair& lat, const RegionParams& p, bool with_table = true);

enum class Level { xi0, xi1, xi2, xi3, xi };

bool in_layer_A(const Vec& xi, const RegionParams& p);
bool in_gamma_shell(const Vec& xi, const RegionParams& p);

// Exact test of: exists t in [0, rho^{2 q_n}) with (perp2 + t)^l inside the layer.
bool xi1_radial_condition(double perp2, int n, const RegionParams& p);

bool region_membership(const Vec& xi, int v_index, Level level, const RegionContext& ctx);

// Membership in Xi(V) + Theta_M.
bool in_thickened(const Vec& xi, int v_index, const RegionContext& ctx);

enum class RegionKind { outside_A, non_resonance_B, resonance_D };

struct RegionLabel {
  RegionKind kind = RegionKind::outside_A;
  int subspace_index = -1;
  std::optional<LatticeSubspace> subspace;
  std::optional<int> level_n;
};

const char* kind_name(RegionKind k);

RegionLabel classify_point(const Vec& xi, const RegionContext& ctx);

// Radius range of the layer, optionally padded.
struct ShellDomain {
  int d = 2;
  double r_lo = 0.0;
  double r_hi = 1.0;
  double volume() const;
  Vec sample(std::mt19937_64& rng) const;
};

ShellDomain layer_domain(const RegionParams& p, int d, double pad = 0.0);
// Shell containing { |xi|^{2l} within rho^{2l} +- energy_halfwidth }.
ShellDomain energy_domain(const RegionParams& p, int d, double energy_halfwidth);

struct Box {
  Vec lo;
  Vec hi;
};

struct VolumeEstimate {
  double estimate = 0.0;
  double ci95 = 0.0;
  std::int64_t samples = 0;
  std::int64_t hits = 0;
};

using PointPredicate = std::function<bool(const Vec&)>;

VolumeEstimate mc_volume(const PointPredicate& pred, const Box& box, std::int64_t N, std::uint64_t seed);
VolumeEstimate mc_volume(const PointPredicate& pred, const ShellDomain& dom, std::int64_t N, std::uint64_t seed);

// Sample near V: |xi_V| below the given radius, |xi| uniform in [r_lo, r_hi].
Vec sample_near_subspace(const LatticeSubspace& V, double along_radius, double r_lo, double r_hi, std::mt19937_64& rng);

std::int64_t check_disjointness(int v1, int v2, const RegionContext& ctx, std::int64_t N, std::uint64_t seed);

using EnergyFunction = std::function<double(const Vec&)>;

// vol(B(delta) intersected with B(delta) + a), B(delta) = { xi in B : |g(xi) - rho^{2l}| <= delta }.
// g_bound bounds |g(xi) - |xi|^{2l}| and sizes the sampling shell.
VolumeEstimate mc_intersection_volume(const Vec& a, double delta, const RegionContext& ctx, const EnergyFunction& g,
                                      double g_bound, std::int64_t N, std::uint64_t seed);

}  // namespace floquet
