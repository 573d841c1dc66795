#pragma once

#include <functional>
#include <vector>

#include "floquet/lattice.hpp"

namespace floquet {

// Coefficient profile xi -> c_theta(xi). Must be re-entrant.
using Profile = std::function<cplx(const Vec&)>;

struct SymbolMode {
  IVec coords;  // theta in dual-basis integer coordinates
  Vec theta;
  Profile profile;
  double sup_ratio = 0.0;  // sup |c_theta(xi)| / <xi>^alpha
};

// a(x, xi) = sum_theta c_theta(xi) e_theta(x), e_theta(x) = d(Gamma)^{-1/2} exp(i theta . x).
struct TrigSymbol {
  std::vector<SymbolMode> modes;
  double alpha = 0.0;
  double cutoff_R = 1.0;
  double bound_c = 0.0;  // |a(x, xi)| <= bound_c <xi>^alpha
  double norm_L = 0.0;   // ||A P|| <= L rho^alpha on shells ||xi| - rho| < rho/2, rho >= 1 + R

  const SymbolMode* find(const IVec& coords) const;
  bool empty() const { return modes.empty(); }
};

// Mode of the default family c_theta(xi) = z <xi>^alpha.
struct ModeSpec {
  IVec theta;
  cplx z;
};

inline double japanese(const Vec& xi) { return 1.0 + xi.norm(); }

// Default profile family. R <= 0 selects max|theta| + 0.1.
TrigSymbol make_symbol(const LatticePair& lat, const std::vector<ModeSpec>& modes, double alpha, double R = 0.0);

// Arbitrary profiles; sup_ratio must bound |c_theta(xi)| / <xi>^alpha.
TrigSymbol make_symbol(const LatticePair& lat, std::vector<SymbolMode> modes, double alpha, double R);

TrigSymbol zero_symbol(const LatticePair& lat);

// a(x, xi) = 2 q cos(theta . x) <xi>^alpha for the dual vector with coordinates `direction`.
TrigSymbol cosine_symbol(const LatticePair& lat, const IVec& direction, double q, double alpha = 0.0, double R = 0.0);

cplx eval_symbol(const TrigSymbol& sym, const LatticePair& lat, const Vec& x, const Vec& xi);

// Hermitian-symmetrized coupling of e_xi into e_eta. Requires eta - xi in the dual lattice.
cplx fiber_entry(const TrigSymbol& sym, const LatticePair& lat, const Vec& eta, const Vec& xi);

// Same as fiber_entry with the dual-lattice difference eta - xi already known.
cplx fiber_entry_coords(const TrigSymbol& sym, const LatticePair& lat, const IVec& diff, const Vec& eta, const Vec& xi);

struct SymbolBounds {
  double c_emp = 0.0;
  double c_grad_emp = 0.0;
};

SymbolBounds verify_symbol_bounds(const TrigSymbol& sym, const LatticePair& lat, const std::vector<Vec>& grid);

}  // namespace floquet
