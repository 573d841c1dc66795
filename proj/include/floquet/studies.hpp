#pragma once

// Reproducible numerical studies behind `floquet verify` and the acceptance binary.
// Every study is a pure function of its options; randomness comes from per-block seeds.

#include <cstdint>
#include <string>
#include <vector>

#include "floquet/asymptotics.hpp"
#include "floquet/bands.hpp"
#include "floquet/perturbation.hpp"
#include "floquet/regions.hpp"

namespace floquet {

// 2q (cos x_1 + ... + cos x_d) on (2 pi Z)^d; its norm constant is 2 d q.
TrigSymbol axis_cosines(const LatticePair& lat, double q);

// d = 2, l = 1, alpha = 0 region parameters used by the geometry, asymptotics and volume studies:
// q = (0.4, 0.6), gamma = 0.2, M = 1, R = 1.1, L = 0.02 and a subspace table of radius 2MR.
RegionParams desk_region_params(double rho, int M = 1);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares slope of log y against x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct OracleRow {
  int d = 0;
  int samples = 0;
  double max_rel_error = 0.0;
};

struct OracleStudy {
  std::vector<OracleRow> rows;
  double worst = 0.0;
};

// Zero symbol: fiber spectrum against a brute-force sorted list of |k + gamma|^{2l}.
OracleStudy unperturbed_oracle_study(std::uint64_t seed, int k_per_dim = 100);

struct LemmaTally {
  std::string name;
  int instances = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max actual / bound
};

struct PerturbationStudy {
  std::vector<LemmaTally> lemmas;  // chain, cluster, relative
  int index_shift_instances = 0;   // cluster instances with a nonzero index shift
};

PerturbationStudy perturbation_study(std::uint64_t seed, int instances = 500);

struct ShellStudy {
  double q = 0.0;
  Vec k;
  std::vector<double> rho;
  std::vector<double> max_dev;
  double slope = 0.0;  // of log max_dev against rho
};

// d = 2, l = 1, 2q cos x_1, full cutoff 2 rho.
ShellStudy shell_truncation_study(double q = 0.3, const std::vector<double>& rhos = {10, 15, 20, 25});

struct GeometryCheck {
  std::string name;
  double rho = 0.0;
  std::int64_t samples = 0;
  std::int64_t tested = 0;  // samples meeting the hypothesis
  std::int64_t violations = 0;
  double worst_ratio = 0.0;  // sup of the checked quantity over its bound
};

struct GeometryStudy {
  std::vector<GeometryCheck> checks;
  std::int64_t total_violations() const;
};

// Lemma checks on the desk region at each rho, N samples per check and per disjointness pair.
GeometryStudy geometry_study(const std::vector<double>& rhos, std::int64_t N, std::uint64_t seed);

struct ReductionRow {
  double rho = 0.0;
  int points = 0;
  double max_rel_diff = 0.0;       // |schur - g_tilde| / |g_tilde|
  double max_schur_slope = 0.0;    // sup |dI/dmu| over J_xi
  int grad_points = 0;
  double sup_grad = 0.0;
};

struct ReductionStudy {
  double q = 0.0;
  std::vector<ReductionRow> rows;
  double grad_exponent = 0.0;
};

ReductionStudy reduction_study(const std::vector<double>& rhos, int points, int grad_points, double q,
                               std::uint64_t seed);

struct ResonanceStudy {
  double q = 0.0;
  // direct-sum check
  double coffee_rho = 0.0;
  int coffee_fibers = 0;
  int coffee_classes = 0;
  double coffee_max_diff = 0.0;  // relative, over the sorted spectra
  bool coffee_partition_ok = true;
  // i(.) along X(xi)
  int icon_samples = 0;
  int icon_points = 0;
  int icon_failures = 0;
  // d nu / dt
  std::vector<double> nu_rho;
  std::vector<double> nu_max;
  double nu_exponent = 0.0;
  double nu_bound = 0.0;
  // |g - g_tilde| in extended precision
  double sweep_rho = 0.0;
  int sweep_samples = 0;
  std::vector<int> sweep_M;
  std::vector<double> sweep_max_diff;
};

struct ResonanceOptions {
  double q = 0.005;
  int coffee_fibers = 5;
  double coffee_rho = 100;
  int icon_samples = 100;
  int icon_points = 8;
  std::vector<double> nu_rhos = {50, 100, 200};
  int nu_samples = 40;
  double sweep_rho = 50;
  int sweep_samples = 40;
  std::vector<int> sweep_M = {2, 3, 4};
};

ResonanceStudy resonance_study(const ResonanceOptions& opt, std::uint64_t seed);

struct VolumeStudy {
  double delta = 0.0;
  std::int64_t samples = 0;
  VolumeEstimate annulus;  // vol A(delta) at rho_annulus
  double annulus_rho = 0.0;
  double annulus_exact = 0.0;
  std::vector<double> ratio_rho;
  std::vector<double> ratio;  // vol D(delta) / vol A(delta)
  Vec shift;
  std::vector<double> inter_rho;
  std::vector<VolumeEstimate> inter;
  double inter_exponent = 0.0;
  double inter_predicted = 0.0;
};

VolumeStudy volume_study(const std::vector<double>& rhos, double delta, std::int64_t N, std::uint64_t seed);

struct CoverageRow {
  double rho = 0.0;
  Coverage coarse;
  Coverage fine;
  double endpoint_change = 0.0;
  int refined_bands = 0;
};

struct CoverageStudy {
  double q = 0.0;
  double c3 = 0.0;
  double cutoff_factor = 0.0;
  std::vector<int> grid;
  std::vector<CoverageRow> rows;
};

// d = 2, l = 1, 2q cos x_1, cutoff cutoff_factor * rho; grid and doubled grid.
CoverageStudy coverage_study(const std::vector<double>& rhos, double q = 0.1, double c3 = 0.5,
                             const std::vector<int>& grid = {64, 64}, double cutoff_factor = 1.25);

}  // namespace floquet
