#pragma once

#include <limits>
#include <vector>

#include "floquet/fiber.hpp"

namespace floquet {

struct KPoint {
  IVec index;
  Vec k;
};

struct Band {
  int j = 0;
  double a = 0.0;
  double b = 0.0;
  int arg_a = -1;  // k-grid index of the minimum
  int arg_b = -1;  // k-grid index of the maximum
  bool refined = false;
};

struct Gap {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

struct BandTable {
  std::vector<KPoint> k_grid;
  std::vector<Band> bands;
  std::vector<Gap> gaps;
  std::vector<int> grid_shape;
  double cutoff = 0.0;
  double l = 1.0;
  double reliable_max = 0.0;    // 0.8 cutoff^{2l}
  double endpoint_error = 0.0;  // Lipschitz bound 2l cutoff^{2l-1} times the grid covering radius
  std::vector<std::vector<double>> eigenvalues;  // per k, only when requested
};

// k runs over dual_basis * (i / n) for the multi-index i of the grid.
std::vector<KPoint> k_grid(const LatticePair& lat, const std::vector<int>& grid_shape);

BandTable scan_bands(const LatticePair& lat, const TrigSymbol& sym, double l, double cutoff,
                     const std::vector<int>& grid_shape, bool keep_eigenvalues = false);

// Polishes a_j and b_j of the bands meeting [lo, hi] by zoom searches in k started at the grid
// local extrema near the grid extremum; endpoints only move outward, so refined bands contain
// the grid bands.
void refine_band_edges(BandTable& bt, const LatticePair& lat, const TrigSymbol& sym, double lo, double hi,
                       double tol = 1e-6);

// Maximal open subintervals of (lo, hi) not covered by the bands.
std::vector<Gap> uncovered(const std::vector<Band>& bands, double lo, double hi);

std::vector<Gap> detect_gaps(const BandTable& bt, double lo, double hi);

// Half-width of the Bethe-Sommerfeld target interval: c3 rho^{2l-6} for d = 2, c3 rho^{2l-d-1} otherwise.
double coverage_delta(int d, double l, double rho, double c3);

struct Coverage {
  double rho = 0.0;
  double c3 = 0.0;
  double delta = 0.0;
  double target_lo = 0.0;
  double target_hi = 0.0;
  bool covered = false;
  double margin = -std::numeric_limits<double>::infinity();  // best band: min distance of the target to its edges
  int band = -1;
  double union_margin = 0.0;  // distance to the nearest gap edge; +inf when no gap is reliable
};

Coverage coverage_from_table(const BandTable& bt, int d, double rho, double c3);

// Scans the grid, refines the bands meeting the target interval and evaluates coverage.
Coverage coverage_check(const LatticePair& lat, const TrigSymbol& sym, double l, double rho, double c3,
                        const std::vector<int>& grid_shape, double cutoff, bool refine = true,
                        BandTable* table_out = nullptr);

// Largest relative change |x1 - x2| / max(|x1|, 1) of band endpoints whose bands meet [lo, hi].
double band_endpoint_change(const BandTable& t1, const BandTable& t2, double lo, double hi);

}  // namespace floquet
