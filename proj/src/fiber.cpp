#include "floquet/fiber.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace floquet {

namespace {

struct CoordHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<size_t>(static_cast<unsigned>(x))) * 1099511628211ull;
    return h;
  }
};

std::vector<int> to_key(const IVec& c) { return std::vector<int>(c.data(), c.data() + c.size()); }

bool is_real(const CMat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j).imag() != 0.0) return false;
  return true;
}

struct Components {
  std::vector<int> id;
  size_t count = 0;
};

// Connected components of the coupling graph, numbered by first appearance.
Components components(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  for (const auto& [a, b] : edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  Components c;
  c.id.assign(static_cast<size_t>(n), -1);
  std::vector<int> label(static_cast<size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (label[static_cast<size_t>(r)] < 0) label[static_cast<size_t>(r)] = static_cast<int>(c.count++);
    c.id[static_cast<size_t>(i)] = label[static_cast<size_t>(r)];
  }
  return c;
}

}  // namespace

std::vector<Vec> fiber_basis(const Vec& k, const LatticePair& lat, double cutoff) {
  if (!(cutoff > 0)) throw ValidationError("cutoff must be positive");
  auto pts = enumerate_shifted_ball(lat, k, cutoff);
  if (pts.empty()) throw ValidationError("empty fiber basis: cutoff too small");
  return pts;
}

FiberEntries assemble_entries(const std::vector<Vec>& points, const LatticePair& lat, const TrigSymbol& sym, double l) {
  const int n = static_cast<int>(points.size());
  FiberEntries out;
  out.n = n;
  out.diag.assign(static_cast<size_t>(n), 0.0);
  if (n == 0) return out;
  const Vec& origin = points[0];
  std::unordered_map<std::vector<int>, int, CoordHash> index;
  index.reserve(static_cast<size_t>(n) * 2);
  std::vector<IVec> coords(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec c = lat.dual_inverse * (points[static_cast<size_t>(i)] - origin);
    IVec ic(c.size());
    for (Eigen::Index t = 0; t < c.size(); ++t) {
      const double r = std::round(c[t]);
      if (std::abs(c[t] - r) > 1e-9) throw ValidationError("quasimomentum mismatch in fiber points");
      ic[t] = static_cast<int>(r);
    }
    coords[static_cast<size_t>(i)] = ic;
    index.emplace(to_key(ic), i);
  }
  for (int i = 0; i < n; ++i) {
    const Vec& xi = points[static_cast<size_t>(i)];
    double d = std::pow(xi.squaredNorm(), l);
    for (const auto& mode : sym.modes) {
      if (!(mode.theta.norm() < sym.cutoff_R)) continue;
      auto it = index.find(to_key(coords[static_cast<size_t>(i)] + mode.coords));
      if (it == index.end()) continue;
      const int j = it->second;
      if (j < i) continue;
      const Vec& eta = points[static_cast<size_t>(j)];
      const cplx e = fiber_entry_coords(sym, lat, mode.coords, eta, xi);
      if (j == i)
        d += e.real();
      else
        out.lower.push_back({j, i, e});
    }
    out.diag[static_cast<size_t>(i)] = d;
  }
  return out;
}

CMat assemble_matrix(const std::vector<Vec>& points, const LatticePair& lat, const TrigSymbol& sym, double l) {
  const FiberEntries e = assemble_entries(points, lat, sym, l);
  CMat m = CMat::Zero(e.n, e.n);
  for (int i = 0; i < e.n; ++i) m(i, i) = e.diag[static_cast<size_t>(i)];
  for (const auto& t : e.lower) {
    m(t.row, t.col) = t.value;
    m(t.col, t.row) = std::conj(t.value);
  }
  return m;
}

std::vector<double> fiber_eigenvalues(const std::vector<Vec>& points, const LatticePair& lat, const TrigSymbol& sym,
                                      double l) {
  const FiberEntries e = assemble_entries(points, lat, sym, l);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(e.lower.size());
  for (const auto& t : e.lower) edges.emplace_back(t.row, t.col);
  const auto comp = components(e.n, edges);
  std::vector<double> out;
  out.reserve(static_cast<size_t>(e.n));
  std::vector<int> local(static_cast<size_t>(e.n), -1);
  std::vector<std::vector<int>> members(comp.count);
  for (int i = 0; i < e.n; ++i) {
    auto& mem = members[static_cast<size_t>(comp.id[static_cast<size_t>(i)])];
    local[static_cast<size_t>(i)] = static_cast<int>(mem.size());
    mem.push_back(i);
  }
  std::vector<CMat> blocks(comp.count);
  for (size_t c = 0; c < members.size(); ++c) {
    const int n = static_cast<int>(members[c].size());
    blocks[c] = CMat::Zero(n, n);
    for (int a = 0; a < n; ++a) blocks[c](a, a) = e.diag[static_cast<size_t>(members[c][static_cast<size_t>(a)])];
  }
  for (const auto& t : e.lower) {
    CMat& b = blocks[static_cast<size_t>(comp.id[static_cast<size_t>(t.row)])];
    const int r = local[static_cast<size_t>(t.row)], c = local[static_cast<size_t>(t.col)];
    b(r, c) = t.value;
    b(c, r) = std::conj(t.value);
  }
  for (const auto& b : blocks) {
    if (b.rows() == 1) {
      out.push_back(b(0, 0).real());
      continue;
    }
    const auto ev = hermitian_eigen(b, false).eigenvalues;
    out.insert(out.end(), ev.begin(), ev.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FiberOperator assemble_on_points(std::vector<Vec> points, const LatticePair& lat, const TrigSymbol& sym, double l) {
  if (points.empty()) throw ValidationError("empty fiber basis");
  FiberOperator f;
  f.k = fractional_part(points[0], lat).k;
  f.l_exponent = l;
  double cmax = 0;
  for (const Vec& p : points) cmax = std::max(cmax, p.norm());
  f.cutoff = cmax;
  f.matrix = assemble_matrix(points, lat, sym, l);
  f.basis_points = std::move(points);
  return f;
}

FiberOperator assemble_fiber(const Vec& k, const LatticePair& lat, const TrigSymbol& sym, double l, double cutoff) {
  FiberOperator f = assemble_on_points(fiber_basis(k, lat, cutoff), lat, sym, l);
  f.k = k;
  f.cutoff = cutoff;
  return f;
}

SpectrumSlice hermitian_eigen(const CMat& m, bool vectors) {
  const int n = static_cast<int>(m.rows());
  if (n == 0 || m.cols() != n) throw ValidationError("eigensolver needs a nonempty square matrix");
  SpectrumSlice s;
  s.eigenvalues.resize(static_cast<size_t>(n));
  const char jobz = vectors ? 'V' : 'N';
  lapack_int info = 0;
  if (is_real(m)) {
    Mat a = m.real();
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, s.eigenvalues.data());
    if (vectors && info == 0) s.eigenvectors = a.cast<cplx>();
  } else {
    CMat a = m;
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
                          s.eigenvalues.data());
    if (vectors && info == 0) s.eigenvectors = std::move(a);
  }
  if (info != 0)
    throw NumericalError("Hermitian eigensolver failed to converge (LAPACK info " + std::to_string(info) +
                         ", dimension " + std::to_string(n) + ")");
  return s;
}

std::vector<double> hermitian_eigenvalues(const CMat& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0 || m.cols() != n) throw ValidationError("eigensolver needs a nonempty square matrix");
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i)
      if (m(i, j) != cplx(0.0, 0.0)) edges.emplace_back(i, j);
  const auto comp = components(n, edges);
  if (comp.count == 1) return hermitian_eigen(m, false).eigenvalues;
  std::vector<std::vector<int>> members(comp.count);
  for (int i = 0; i < n; ++i) members[static_cast<size_t>(comp.id[static_cast<size_t>(i)])].push_back(i);
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n));
  for (const auto& mem : members) {
    const int k = static_cast<int>(mem.size());
    if (k == 1) {
      out.push_back(m(mem[0], mem[0]).real());
      continue;
    }
    CMat b(k, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < k; ++r) b(r, c) = m(mem[static_cast<size_t>(r)], mem[static_cast<size_t>(c)]);
    const auto ev = hermitian_eigen(b, false).eigenvalues;
    out.insert(out.end(), ev.begin(), ev.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpectrumSlice eigen(const FiberOperator& F, bool vectors) { return hermitian_eigen(F.matrix, vectors); }

FiberOperator project_suboperator(const FiberOperator& F, const std::function<bool(const Vec&)>& keep) {
  std::vector<int> idx;
  for (int i = 0; i < F.size(); ++i)
    if (keep(F.basis_points[static_cast<size_t>(i)])) idx.push_back(i);
  if (idx.empty()) throw ValidationError("empty selection in project_suboperator");
  FiberOperator out;
  out.k = F.k;
  out.l_exponent = F.l_exponent;
  out.cutoff = F.cutoff;
  const int n = static_cast<int>(idx.size());
  out.matrix.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.basis_points.push_back(F.basis_points[static_cast<size_t>(idx[static_cast<size_t>(j)])]);
    for (int i = 0; i < n; ++i)
      out.matrix(i, j) = F.matrix(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
  }
  return out;
}

std::vector<double> merge_spectra(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace floquet
