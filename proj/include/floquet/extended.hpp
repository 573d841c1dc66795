#pragma once

#include "floquet/common.hpp"

namespace floquet {

// mu_ib(b) - mu_ia(a) for Hermitian a, b (ascending, zero-based indices), both shifted by `shift`
// and diagonalized in 113-bit floating point. The inputs are taken exactly as stored, so differences
// far below double round-off of the individual eigenvalues are resolved.
double extended_eigenvalue_difference(const CMat& a, int ia, const CMat& b, int ib, double shift);

}  // namespace floquet
