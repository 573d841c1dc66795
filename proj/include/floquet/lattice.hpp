#pragma once

#include <vector>

#include "floquet/common.hpp"

namespace floquet {

// Periodicity lattice and its dual. Columns of `basis` generate the lattice,
// columns of `dual_basis` generate the dual with theta . gamma in 2 pi Z.
struct LatticePair {
  int dim = 0;
  Mat basis;
  Mat dual_basis;
  double vol_gamma = 0.0;
  double vol_gamma_dual = 0.0;
  Mat dual_inverse;  // dual_basis^{-1}, maps points to dual coordinates
};

LatticePair make_lattice_pair(const Mat& basis);

// Square lattice (2 pi Z)^d, whose dual is Z^d.
LatticePair standard_lattice(int d);

struct FractionalPart {
  Vec k;      // in dual_basis [0,1)^d
  Vec gamma;  // dual-lattice vector, xi = k + gamma
};

FractionalPart fractional_part(const Vec& xi, const LatticePair& lat);

// Integer coordinates of a dual-lattice vector (rounded).
IVec dual_coords(const LatticePair& lat, const Vec& theta);

// Normative point order: ascending |x|, ties broken lexicographically.
bool point_less(const Vec& a, const Vec& b);
void sort_points(std::vector<Vec>& pts);

// Points shift + gamma (gamma in the dual lattice) with |shift + gamma| <= radius, sorted.
std::vector<Vec> enumerate_shifted_ball(const LatticePair& lat, const Vec& shift, double radius);

// Dual-lattice vectors in the closed ball of the given radius, sorted; contains 0.
std::vector<Vec> enumerate_ball(const LatticePair& lat, double radius);

struct LatticeSubspace {
  std::vector<Vec> generators;  // independent dual vectors
  Mat ortho;                    // d x n orthonormal frame
  Mat projector;                // d x d orthogonal projector
  Mat lattice_basis;            // d x n basis of V intersected with the dual lattice
  int dim() const { return static_cast<int>(ortho.cols()); }
};

// Span of the given dual vectors. An empty list gives the zero subspace of R^d.
LatticeSubspace make_subspace(const LatticePair& lat, const std::vector<Vec>& generators);
LatticeSubspace zero_subspace(int d);

// One representative per span of n independent dual vectors of length < r.
std::vector<LatticeSubspace> enumerate_subspaces(const LatticePair& lat, double r, int n);

struct Projection {
  Vec along;  // xi_V
  Vec perp;   // xi_V^perp
};

Projection project_subspace(const Vec& xi, const LatticeSubspace& V);

bool same_span(const LatticeSubspace& a, const LatticeSubspace& b, double tol = 1e-9);
// True when a is a subspace of b.
bool contained_in(const LatticeSubspace& a, const LatticeSubspace& b, double tol = 1e-9);
bool in_span(const LatticeSubspace& V, const Vec& x, double tol = 1e-9);

LatticeSubspace subspace_sum(const LatticePair& lat, const LatticeSubspace& a, const LatticeSubspace& b);

// Minimal principal angle between the orthogonal complements of a and b inside a + b.
// Returns pi when one contains the other, so that 1 / sin(angle / 2) = 1.
double complement_angle(const LatticeSubspace& a, const LatticeSubspace& b);

// Points of V intersected with the dual lattice with |theta| <= radius, sorted.
std::vector<Vec> subspace_lattice_points(const LatticeSubspace& V, double radius);

}  // namespace floquet
