#include "floquet/extended.hpp"

#include <boost/multiprecision/float128.hpp>
#include <Eigen/Core>

namespace Eigen {

template <>
struct NumTraits<boost::multiprecision::float128> : GenericNumTraits<boost::multiprecision::float128> {
  using Real = boost::multiprecision::float128;
  using NonInteger = Real;
  using Literal = Real;
  using Nested = Real;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 4, MulCost = 8 };
  static Real dummy_precision() { return Real(1e-30); }
  static int digits10() { return 33; }
};

}  // namespace Eigen

#include <Eigen/Eigenvalues>

namespace floquet {

namespace {

using quad = boost::multiprecision::float128;
using QMat = Eigen::Matrix<quad, Eigen::Dynamic, Eigen::Dynamic>;

// A complex Hermitian n x n matrix has the real symmetric embedding [[Re, -Im], [Im, Re]],
// whose spectrum is the original one with every eigenvalue doubled.
quad eigenvalue(const CMat& m, int index, double shift) {
  const Eigen::Index n = m.rows();
  if (index < 0 || index >= n) throw ValidationError("eigenvalue index out of range");
  const bool real = m.imag().cwiseAbs().maxCoeff() == 0.0;
  const Eigen::Index N = real ? n : 2 * n;
  QMat a(N, N);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      quad re = m(i, j).real();
      if (i == j) re -= quad(shift);
      a(i, j) = re;
      if (!real) {
        const quad im = m(i, j).imag();
        a(i + n, j + n) = re;
        a(i, j + n) = -im;
        a(i + n, j) = im;
      }
    }
  Eigen::SelfAdjointEigenSolver<QMat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("extended eigensolver did not converge");
  return es.eigenvalues()(real ? index : 2 * index);
}

}  // namespace

double extended_eigenvalue_difference(const CMat& a, int ia, const CMat& b, int ib, double shift) {
  return static_cast<double>(eigenvalue(b, ib, shift) - eigenvalue(a, ia, shift));
}

}  // namespace floquet
