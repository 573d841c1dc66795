#pragma once

#include <functional>
#include <vector>

#include "floquet/symbol.hpp"

namespace floquet {

// Truncated fiber H(k) on the plane waves e_xi, {xi} = k, |xi| <= cutoff.
struct FiberOperator {
  Vec k;
  double l_exponent = 1.0;
  double cutoff = 0.0;
  std::vector<Vec> basis_points;
  CMat matrix;
  int size() const { return static_cast<int>(basis_points.size()); }
};

struct SpectrumSlice {
  std::vector<double> eigenvalues;  // ascending
  CMat eigenvectors;                // columns; empty when not requested
  int index_offset = 0;             // zero-based global index of eigenvalues[0]
};

std::vector<Vec> fiber_basis(const Vec& k, const LatticePair& lat, double cutoff);

// Nonzero entries of H on an ordered point set sharing one quasimomentum.
struct FiberEntry {
  int row = 0;
  int col = 0;  // row > col
  cplx value;
};
struct FiberEntries {
  int n = 0;
  std::vector<double> diag;
  std::vector<FiberEntry> lower;
};
FiberEntries assemble_entries(const std::vector<Vec>& points, const LatticePair& lat, const TrigSymbol& sym, double l);

// Matrix of H on an arbitrary ordered point set sharing one quasimomentum.
CMat assemble_matrix(const std::vector<Vec>& points, const LatticePair& lat, const TrigSymbol& sym, double l);

// Eigenvalues of assemble_matrix(points, ...), solved per connected component of the coupling graph.
std::vector<double> fiber_eigenvalues(const std::vector<Vec>& points, const LatticePair& lat, const TrigSymbol& sym,
                                      double l);

FiberOperator assemble_fiber(const Vec& k, const LatticePair& lat, const TrigSymbol& sym, double l, double cutoff);

// Fiber operator on the given points (already ordered).
FiberOperator assemble_on_points(std::vector<Vec> points, const LatticePair& lat, const TrigSymbol& sym, double l);

SpectrumSlice eigen(const FiberOperator& F, bool vectors = true);

// Ascending eigenvalues of a Hermitian matrix, solved per decoupled block.
// Uses the real solver when a block is real.
std::vector<double> hermitian_eigenvalues(const CMat& m);
SpectrumSlice hermitian_eigen(const CMat& m, bool vectors);

FiberOperator project_suboperator(const FiberOperator& F, const std::function<bool(const Vec&)>& keep);

// Sorted union of two spectra.
std::vector<double> merge_spectra(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace floquet
