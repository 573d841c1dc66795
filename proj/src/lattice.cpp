#include "floquet/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace floquet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Visits every integer vector in the box [lo, hi] (inclusive) in odometer order.
template <class F>
void for_each_integer_point(const IVec& lo, const IVec& hi, F&& f) {
  const int d = static_cast<int>(lo.size());
  for (int i = 0; i < d; ++i)
    if (lo[i] > hi[i]) return;
  IVec n = lo;
  while (true) {
    f(n);
    int i = 0;
    while (i < d) {
      if (n[i] < hi[i]) {
        ++n[i];
        break;
      }
      n[i] = lo[i];
      ++i;
    }
    if (i == d) return;
  }
}

Mat orthonormal_frame(const std::vector<Vec>& gens, int d) {
  if (gens.empty()) return Mat(d, 0);
  Mat g(d, static_cast<Eigen::Index>(gens.size()));
  for (size_t j = 0; j < gens.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = gens[j];
  Eigen::HouseholderQR<Mat> qr(g);
  return qr.householderQ() * Mat::Identity(d, g.cols());
}

int numeric_rank(const std::vector<Vec>& vs) {
  if (vs.empty()) return 0;
  Mat g(vs[0].size(), static_cast<Eigen::Index>(vs.size()));
  for (size_t j = 0; j < vs.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = vs[j];
  Eigen::JacobiSVD<Mat> svd(g);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * std::max(1.0, s[0])) ++r;
  return r;
}

// Basis of V intersected with the dual lattice, from dual vectors in V of length <= radius.
// Greedy shortest independent vectors realize the successive minima, which form a
// basis for rank <= 3.
Mat intersection_basis(const LatticePair& lat, const Mat& projector, int n, double radius) {
  const int d = lat.dim;
  if (n == 0) return Mat(d, 0);
  std::vector<Vec> chosen;
  for (const Vec& t : enumerate_ball(lat, radius)) {
    if (t.norm() < 1e-12) continue;
    if ((projector * t - t).norm() > 1e-9 * std::max(1.0, t.norm())) continue;
    std::vector<Vec> trial = chosen;
    trial.push_back(t);
    if (numeric_rank(trial) == static_cast<int>(trial.size())) chosen = trial;
    if (static_cast<int>(chosen.size()) == n) break;
  }
  if (static_cast<int>(chosen.size()) != n)
    throw NumericalError("subspace lattice basis not found within radius");
  if (n > 3) throw ValidationError("lattice subspaces of dimension > 3 are not supported");
  Mat b(d, n);
  for (int j = 0; j < n; ++j) b.col(j) = chosen[static_cast<size_t>(j)];
  return b;
}

}  // namespace

LatticePair make_lattice_pair(const Mat& basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0)
    throw ValidationError("lattice basis must be square and nonempty");
  const double det = basis.determinant();
  const double scale = std::pow(basis.cwiseAbs().maxCoeff(), static_cast<double>(basis.rows()));
  if (!(std::abs(det) > 1e-12 * scale) || !std::isfinite(det)) throw ValidationError("degenerate lattice");
  LatticePair lat;
  lat.dim = static_cast<int>(basis.rows());
  lat.basis = basis;
  // B^T D = 2 pi I
  lat.dual_basis = basis.transpose().fullPivLu().solve(kTwoPi * Mat::Identity(lat.dim, lat.dim));
  lat.vol_gamma = std::abs(det);
  lat.vol_gamma_dual = std::abs(lat.dual_basis.determinant());
  lat.dual_inverse = lat.dual_basis.inverse();
  return lat;
}

LatticePair standard_lattice(int d) { return make_lattice_pair(kTwoPi * Mat::Identity(d, d)); }

FractionalPart fractional_part(const Vec& xi, const LatticePair& lat) {
  Vec c = lat.dual_inverse * xi;
  Vec f(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double fl = std::floor(c[i]);
    double fr = c[i] - fl;
    // Round-off can leave fr == 1 after subtraction.
    if (fr >= 1.0) {
      fr = 0.0;
      fl += 1.0;
    }
    if (std::abs(fr) < 1e-13) fr = 0.0;
    if (std::abs(1.0 - fr) < 1e-13) {
      fr = 0.0;
      fl += 1.0;
    }
    c[i] = fl;
    f[i] = fr;
  }
  FractionalPart out;
  out.gamma = lat.dual_basis * c;
  out.k = xi - out.gamma;
  return out;
}

IVec dual_coords(const LatticePair& lat, const Vec& theta) {
  Vec c = lat.dual_inverse * theta;
  IVec n(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) n[i] = static_cast<int>(std::lround(c[i]));
  return n;
}

bool point_less(const Vec& a, const Vec& b) {
  const double na = a.squaredNorm(), nb = b.squaredNorm();
  const double tol = 1e-12 * std::max(1.0, std::max(na, nb));
  if (na < nb - tol) return true;
  if (nb < na - tol) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

void sort_points(std::vector<Vec>& pts) { std::stable_sort(pts.begin(), pts.end(), point_less); }

std::vector<Vec> enumerate_shifted_ball(const LatticePair& lat, const Vec& shift, double radius) {
  const int d = lat.dim;
  const Vec c0 = lat.dual_inverse * (-shift);
  IVec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    const double w = radius * lat.dual_inverse.row(i).norm();
    lo[i] = static_cast<int>(std::floor(c0[i] - w)) - 1;
    hi[i] = static_cast<int>(std::ceil(c0[i] + w)) + 1;
  }
  std::vector<Vec> pts;
  const double r2 = radius * radius * (1.0 + 1e-12);
  for_each_integer_point(lo, hi, [&](const IVec& n) {
    Vec x = shift + lat.dual_basis * n.cast<double>();
    if (x.squaredNorm() <= r2) pts.push_back(std::move(x));
  });
  sort_points(pts);
  return pts;
}

std::vector<Vec> enumerate_ball(const LatticePair& lat, double radius) {
  if (!(radius > 0)) throw ValidationError("ball radius must be positive");
  return enumerate_shifted_ball(lat, Vec::Zero(lat.dim), radius);
}

LatticeSubspace zero_subspace(int d) {
  LatticeSubspace v;
  v.ortho = Mat(d, 0);
  v.projector = Mat::Zero(d, d);
  v.lattice_basis = Mat(d, 0);
  return v;
}

LatticeSubspace make_subspace(const LatticePair& lat, const std::vector<Vec>& generators) {
  const int d = lat.dim;
  if (generators.empty()) return zero_subspace(d);
  if (numeric_rank(generators) != static_cast<int>(generators.size()))
    throw ValidationError("subspace generators are linearly dependent");
  LatticeSubspace v;
  v.generators = generators;
  v.ortho = orthonormal_frame(generators, d);
  v.projector = v.ortho * v.ortho.transpose();
  double rmax = 0;
  for (const Vec& g : generators) rmax = std::max(rmax, g.norm());
  v.lattice_basis = intersection_basis(lat, v.projector, v.dim(), rmax * (1 + 1e-9));
  return v;
}

std::vector<LatticeSubspace> enumerate_subspaces(const LatticePair& lat, double r, int n) {
  const int d = lat.dim;
  if (n < 1 || n > d - 1) throw ValidationError("subspace dimension must satisfy 1 <= n <= d-1");
  // One of each antipodal pair suffices for spans.
  std::vector<Vec> half;
  for (const Vec& t : enumerate_ball(lat, r)) {
    if (t.norm() >= r || t.norm() < 1e-12) continue;
    IVec c = dual_coords(lat, t);
    int i = 0;
    while (i < d && c[i] == 0) ++i;
    if (i < d && c[i] > 0) half.push_back(t);
  }
  std::vector<LatticeSubspace> out;
  // Index projectors by a scalar fingerprint; equal projectors have nearly equal fingerprints.
  std::multimap<double, size_t> index;
  Mat weights(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) weights(i, j) = 1.0 + 0.1 * i + 0.01 * j;
  const int m = static_cast<int>(half.size());
  std::vector<int> pick(static_cast<size_t>(n));
  std::vector<Vec> gens(static_cast<size_t>(n));
  auto consider = [&]() {
    for (int j = 0; j < n; ++j) gens[static_cast<size_t>(j)] = half[static_cast<size_t>(pick[static_cast<size_t>(j)])];
    if (numeric_rank(gens) != n) return;
    Mat q = orthonormal_frame(gens, d);
    Mat p = q * q.transpose();
    const double key = p.cwiseProduct(weights).sum();
    for (auto it = index.lower_bound(key - 1e-8); it != index.end() && it->first <= key + 1e-8; ++it)
      if ((out[it->second].projector - p).norm() < 1e-9) return;
    LatticeSubspace v;
    v.generators = gens;
    v.ortho = q;
    v.projector = p;
    v.lattice_basis = intersection_basis(lat, p, n, r);
    index.emplace(key, out.size());
    out.push_back(std::move(v));
  };
  // Combinations of n indices in increasing order.
  for (int j = 0; j < n; ++j) pick[static_cast<size_t>(j)] = j;
  if (m < n) return out;
  while (true) {
    consider();
    int j = n - 1;
    while (j >= 0 && pick[static_cast<size_t>(j)] == m - n + j) --j;
    if (j < 0) break;
    ++pick[static_cast<size_t>(j)];
    for (int t = j + 1; t < n; ++t) pick[static_cast<size_t>(t)] = pick[static_cast<size_t>(t - 1)] + 1;
  }
  return out;
}

Projection project_subspace(const Vec& xi, const LatticeSubspace& V) {
  Projection p;
  p.along = V.projector * xi;
  p.perp = xi - p.along;
  return p;
}

bool same_span(const LatticeSubspace& a, const LatticeSubspace& b, double tol) {
  return a.dim() == b.dim() && (a.projector - b.projector).norm() < tol;
}

bool contained_in(const LatticeSubspace& a, const LatticeSubspace& b, double tol) {
  if (a.dim() > b.dim()) return false;
  return (b.projector * a.ortho - a.ortho).norm() < tol;
}

bool in_span(const LatticeSubspace& V, const Vec& x, double tol) {
  return (V.projector * x - x).norm() <= tol * std::max(1.0, x.norm());
}

LatticeSubspace subspace_sum(const LatticePair& lat, const LatticeSubspace& a, const LatticeSubspace& b) {
  std::vector<Vec> gens;
  for (const auto* s : {&a, &b})
    for (const Vec& g : s->generators) {
      std::vector<Vec> trial = gens;
      trial.push_back(g);
      if (numeric_rank(trial) == static_cast<int>(trial.size())) gens = trial;
    }
  return make_subspace(lat, gens);
}

double complement_angle(const LatticeSubspace& a, const LatticeSubspace& b) {
  if (contained_in(a, b) || contained_in(b, a)) return std::numbers::pi;
  const int d = static_cast<int>(a.projector.rows());
  Mat both(d, a.dim() + b.dim());
  both << a.ortho, b.ortho;
  Eigen::JacobiSVD<Mat> svd(both, Eigen::ComputeThinU);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-10) ++rank;
  const Mat w = svd.matrixU().leftCols(rank);
  const Mat pw = w * w.transpose();
  // Orthonormal frames of W minus V_i.
  auto complement = [&](const LatticeSubspace& v) {
    Mat c = (pw - v.projector) * w;
    Eigen::JacobiSVD<Mat> s(c, Eigen::ComputeThinU);
    int r = 0;
    for (Eigen::Index i = 0; i < s.singularValues().size(); ++i)
      if (s.singularValues()[i] > 1e-10) ++r;
    return Mat(s.matrixU().leftCols(r));
  };
  const Mat u1 = complement(a), u2 = complement(b);
  Eigen::JacobiSVD<Mat> s(u1.transpose() * u2);
  const double c = std::min(1.0, s.singularValues()[0]);
  return std::acos(c);
}

std::vector<Vec> subspace_lattice_points(const LatticeSubspace& V, double radius) {
  const int n = V.dim();
  const int d = static_cast<int>(V.projector.rows());
  std::vector<Vec> pts;
  if (n == 0) {
    pts.push_back(Vec::Zero(d));
    return pts;
  }
  const Mat& b = V.lattice_basis;
  const Mat pinv = (b.transpose() * b).inverse() * b.transpose();
  IVec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    const int w = static_cast<int>(std::ceil(radius * pinv.row(i).norm())) + 1;
    lo[i] = -w;
    hi[i] = w;
  }
  const double r2 = radius * radius * (1 + 1e-12);
  for_each_integer_point(lo, hi, [&](const IVec& m) {
    Vec x = b * m.cast<double>();
    if (x.squaredNorm() <= r2) pts.push_back(std::move(x));
  });
  sort_points(pts);
  return pts;
}

}  // namespace floquet
