#include "floquet/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "floquet/extended.hpp"

namespace floquet {

namespace {

double energy(const Vec& x, double l) { return std::pow(x.squaredNorm(), l); }

std::vector<int> lattice_key(const LatticePair& lat, const Vec& diff) {
  const IVec c = dual_coords(lat, diff);
  return std::vector<int>(c.data(), c.data() + c.size());
}

// ref + lattice vectors, deduplicated by integer coordinates and sorted.
std::vector<Vec> from_keys(const std::set<std::vector<int>>& keys, const Vec& ref, const LatticePair& lat) {
  std::vector<Vec> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    Vec c(static_cast<Eigen::Index>(k.size()));
    for (size_t i = 0; i < k.size(); ++i) c(static_cast<Eigen::Index>(i)) = k[i];
    out.push_back(ref + lat.dual_basis * c);
  }
  sort_points(out);
  return out;
}

int rank_of(const std::vector<Vec>& sorted, const Vec& x) {
  for (size_t i = 0; i < sorted.size(); ++i)
    if ((sorted[i] - x).norm() <= 1e-9 * std::max(1.0, x.norm())) return static_cast<int>(i);
  throw NumericalError("anchor missing from its own point set");
}

const SubspaceEntry& entry_of(const RegionContext& ctx, int v_index) {
  if (v_index < 0 || v_index >= static_cast<int>(ctx.table.size())) throw ValidationError("subspace index out of range");
  return ctx.table[static_cast<size_t>(v_index)];
}

// Y(xi) as integer offsets from xi.
void add_y_keys(const Vec& xi, int v_index, const RegionContext& ctx, std::set<std::vector<int>>& keys) {
  const auto base = y_tilde(xi, v_index, ctx);
  if (base.empty()) throw NumericalError("empty Y~(xi) for a point of Xi_2(V)");
  for (const auto& b : base)
    for (const auto& t : ctx.theta_M) keys.insert(lattice_key(ctx.lat, b + t - xi));
}

double slack(double scale) { return 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(scale)); }

}  // namespace

LocalBlock local_matrix(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym) {
  LocalBlock b;
  b.anchor = xi;
  b.offsets = ctx.theta_M;
  std::vector<Vec> pts;
  pts.reserve(b.offsets.size());
  for (const auto& t : b.offsets) pts.push_back(xi + t);
  b.matrix = assemble_matrix(pts, ctx.lat, sym, ctx.p.l);
  const double e = energy(xi, ctx.p.l);
  const double w = ctx.p.L * std::pow(ctx.p.rho, ctx.p.alpha);
  b.j_lo = e - w;
  b.j_hi = e + w;
  return b;
}

double g_tilde_nonres(const LocalBlock& block) {
  const auto ev = hermitian_eigenvalues(block.matrix);
  int count = 0;
  double value = 0;
  for (double v : ev)
    if (v >= block.j_lo && v <= block.j_hi) {
      ++count;
      value = v;
    }
  if (count != 1) throw NumericalError("uniqueness failure: " + std::to_string(count) + " eigenvalues in J_xi");
  return value;
}

double g_tilde_nonres(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym) {
  return g_tilde_nonres(local_matrix(xi, ctx, sym));
}

SchurTerm schur_I(const LocalBlock& block, double mu) {
  const Eigen::Index n = block.matrix.rows();
  SchurTerm s;
  if (n <= 1) return s;
  const CMat D = block.matrix.bottomRightCorner(n - 1, n - 1);
  const Eigen::VectorXcd b = block.matrix.col(0).tail(n - 1);
  const Eigen::VectorXcd x = (D - mu * CMat::Identity(n - 1, n - 1)).lu().solve(b);
  s.value = -(b.dot(x)).real();
  s.derivative = -x.squaredNorm();
  return s;
}

double schur_fixed_point(const LocalBlock& block) {
  const Eigen::Index n = block.matrix.rows();
  const double a00 = block.matrix(0, 0).real();
  if (n <= 1) return a00;
  const CMat D = block.matrix.bottomRightCorner(n - 1, n - 1);
  const Eigen::VectorXcd b = block.matrix.col(0).tail(n - 1);
  const SpectrumSlice s = hermitian_eigen(D, true);
  const Eigen::VectorXcd c = s.eigenvectors.adjoint() * b;
  std::vector<double> w(static_cast<size_t>(n - 1));
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    w[static_cast<size_t>(i)] = std::norm(c(i));
    const double lam = s.eigenvalues[static_cast<size_t>(i)];
    if (lam >= block.j_lo && lam <= block.j_hi && w[static_cast<size_t>(i)] > 0)
      throw NumericalError("D - mu singular on J_xi");
  }
  // F(mu) = a00 - mu + I(mu) decreases strictly on J_xi.
  auto F = [&](double mu, double* dF) {
    double v = a00 - mu, d = -1;
    for (size_t i = 0; i < w.size(); ++i) {
      const double den = s.eigenvalues[i] - mu;
      v -= w[i] / den;
      d -= w[i] / (den * den);
    }
    if (dF) *dF = d;
    return v;
  };
  double lo = block.j_lo, hi = block.j_hi;
  const double flo = F(lo, nullptr), fhi = F(hi, nullptr);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (!(flo > 0 && fhi < 0)) throw NumericalError("no sign change of the Schur function in J_xi");
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double d;
    const double v = F(mu, &d);
    if (v == 0) return mu;
    if (v > 0)
      lo = mu;
    else
      hi = mu;
    double next = mu - v / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - mu) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mu)) ||
        hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mu)))
      return next;
    mu = next;
  }
  return mu;
}

double local_gap(const LocalBlock& block) {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < block.matrix.rows(); ++i) {
    const double a = block.matrix(i, i).real();
    const double d = a < block.j_lo ? block.j_lo - a : (a > block.j_hi ? a - block.j_hi : 0.0);
    g = std::min(g, d);
  }
  return g;
}

namespace {

// g_tilde(x) - |x|^{2l} from the block shifted by |x|^{2l}. The shifted diagonal is formed without
// cancellation, so G keeps full relative precision when |x|^{2l} is large.
double shifted_G(const Vec& x, const RegionContext& ctx, const TrigSymbol& sym) {
  LocalBlock b = local_matrix(x, ctx, sym);
  const double l = ctx.p.l;
  const double x2 = x.squaredNorm();
  const double e = energy(x, l);
  const IVec zero = IVec::Zero(x.size());
  const bool has_zero_mode = sym.find(zero) != nullptr;
  for (size_t i = 0; i < b.offsets.size(); ++i) {
    const Vec& t = b.offsets[i];
    const double rel = (2 * x.dot(t) + t.squaredNorm()) / x2;
    double d = e * std::expm1(l * std::log1p(rel));
    if (has_zero_mode) d += fiber_entry_coords(sym, ctx.lat, zero, x + t, x + t).real();
    b.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d;
  }
  b.j_lo -= e;
  b.j_hi -= e;
  return g_tilde_nonres(b);
}

}  // namespace

GradG grad_G(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym, double h) {
  if (!(h > 0)) throw ValidationError("step h must be positive");
  auto G = [&](const Vec& x) {
    if (classify_point(x, ctx).kind != RegionKind::non_resonance_B)
      throw ValidationError("stencil crosses region boundary");
    return shifted_G(x, ctx, sym);
  };
  GradG out;
  out.G = G(xi);
  out.grad = Vec::Zero(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    Vec e = Vec::Zero(xi.size());
    e(i) = h;
    out.grad(i) = (G(xi + e) - G(xi - e)) / (2 * h);
  }
  return out;
}

std::vector<Vec> y_tilde(const Vec& xi, int v_index, const RegionContext& ctx) {
  const SubspaceEntry& e = entry_of(ctx, v_index);
  std::vector<Vec> out;
  if (e.n == 0) {
    if (region_membership(xi, v_index, Level::xi3, ctx)) out.push_back(xi);
    return out;
  }
  const double radius = ctx.search_factor * std::pow(ctx.p.rho, ctx.p.qn(e.n));
  for (const auto& theta : subspace_lattice_points(e.V, radius)) {
    const Vec eta = xi + theta;
    if (!in_gamma_shell(eta, ctx.p)) continue;
    if (region_membership(eta, v_index, Level::xi3, ctx)) out.push_back(eta);
  }
  sort_points(out);
  return out;
}

ResonanceBlock resonance_block(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym) {
  const SubspaceEntry& e = entry_of(ctx, v_index);
  if (!region_membership(xi, v_index, Level::xi2, ctx)) throw ValidationError("point is not in Xi_2(V)");
  ResonanceBlock b;
  b.v_index = v_index;
  b.V = e.V;
  b.anchor = xi;
  b.base = y_tilde(xi, v_index, ctx);
  if (b.base.empty()) throw NumericalError("empty Y~(xi) for a point of Xi_2(V)");
  std::set<std::vector<int>> keys;
  add_y_keys(xi, v_index, ctx, keys);
  b.y_points = from_keys(keys, xi, ctx.lat);
  b.matrix = assemble_matrix(b.y_points, ctx.lat, sym, ctx.p.l);
  b.anchor_rank = rank_of(b.y_points, xi);
  const Projection pr = project_subspace(xi, e.V);
  b.xi_V = pr.along;
  b.r = pr.perp.norm();
  b.xi_prime = b.r > 0 ? Vec(pr.perp / b.r) : Vec::Zero(xi.size());
  return b;
}

ResonanceValue g_tilde_res(const ResonanceBlock& block, const RegionContext& ctx) {
  const auto ev = hermitian_eigenvalues(block.matrix);
  ResonanceValue v;
  v.rank = block.anchor_rank;
  v.value = ev.at(static_cast<size_t>(block.anchor_rank));
  const double e = energy(block.anchor, ctx.p.l);
  v.bound_ok = std::abs(v.value - e) <= ctx.p.L * std::pow(ctx.p.rho, ctx.p.alpha) + slack(e);
  return v;
}

Interval x_interval(const Vec& xi, int v_index, const RegionContext& ctx) {
  const SubspaceEntry& e = entry_of(ctx, v_index);
  const Projection pr = project_subspace(xi, e.V);
  const double r0 = pr.perp.norm();
  if (!(r0 > 0)) throw ValidationError("r(xi) must be positive");
  const Vec dir = pr.perp / r0;
  auto member = [&](double r) { return r > 0 && region_membership(pr.along + r * dir, v_index, Level::xi2, ctx); };
  if (!member(r0)) throw ValidationError("point is not in Xi_2(V)");

  // The layer along the ray bounds X(xi).
  const double lam = std::pow(ctx.p.rho, 2 * ctx.p.l);
  const double w = 100.0 * ctx.p.L * std::pow(ctx.p.rho, ctx.p.alpha);
  const double a2 = pr.along.squaredNorm();
  const double hi2 = std::pow(lam + w, 1.0 / ctx.p.l) - a2;
  const double lo2 = lam - w > 0 ? std::pow(lam - w, 1.0 / ctx.p.l) - a2 : 0.0;
  const double ray_hi = std::sqrt(std::max(hi2, 0.0));
  const double ray_lo = std::sqrt(std::max(lo2, 0.0));
  const double step = std::max((ray_hi - ray_lo) / 512.0, 1e-12 * ctx.p.rho);
  const double tol = 1e-10 * ctx.p.rho;

  auto edge = [&](double sign) {
    double in = r0, out = r0;
    for (;;) {
      out = in + sign * step;
      if (!member(out)) break;
      in = out;
      if (out > ray_hi + step || out < ray_lo - step) break;
    }
    while (std::abs(out - in) > tol) {
      const double mid = 0.5 * (in + out);
      if (member(mid))
        in = mid;
      else
        out = mid;
    }
    return in;
  };
  Interval x;
  x.lo = edge(-1.0);
  x.hi = edge(+1.0);
  return x;
}

std::vector<Vec> y_union(const Vec& xi, int v_index, const RegionContext& ctx, int K) {
  if (K < 1) throw ValidationError("K must be positive");
  const SubspaceEntry& e = entry_of(ctx, v_index);
  const Interval X = x_interval(xi, v_index, ctx);
  const Projection pr = project_subspace(xi, e.V);
  const Vec dir = pr.perp / pr.perp.norm();
  std::set<std::vector<int>> keys;
  add_y_keys(xi, v_index, ctx, keys);
  for (int s = 0; s <= K + 1; ++s) {
    const double r = X.lo + (X.hi - X.lo) * s / (K + 1);
    const Vec x1 = pr.along + r * dir;
    // Y(x1) - x1 + xi: offsets are lattice vectors, so the keys carry over.
    add_y_keys(x1, v_index, ctx, keys);
  }
  return from_keys(keys, xi, ctx.lat);
}

GResult g_res(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym, int K) {
  const auto y1 = y_union(xi, v_index, ctx, K);
  const auto y2 = y_union(xi, v_index, ctx, 2 * K);
  const int i1 = rank_of(y1, xi);
  const int i2 = rank_of(y2, xi);
  if (i1 != i2) throw NumericalError("Y-union not converged");
  GResult g;
  g.rank = i1;
  g.size = static_cast<int>(y1.size());
  g.y_stable = y1.size() == y2.size();
  for (size_t i = 0; g.y_stable && i < y1.size(); ++i) g.y_stable = (y1[i] - y2[i]).norm() < 1e-9;
  const auto ev = hermitian_eigenvalues(assemble_matrix(y1, ctx.lat, sym, ctx.p.l));
  g.value = ev.at(static_cast<size_t>(i1));
  g.y_points = y1;
  return g;
}

double g_difference_extended(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym, int K) {
  const ResonanceBlock block = resonance_block(xi, v_index, ctx, sym);
  const GResult g = g_res(xi, v_index, ctx, sym, K);
  const CMat big = assemble_matrix(g.y_points, ctx.lat, sym, ctx.p.l);
  return extended_eigenvalue_difference(block.matrix, block.anchor_rank, big, g.rank, energy(xi, ctx.p.l));
}

std::vector<double> taylor_b(double l, const Vec& xi_prime, const Vec& w) {
  const double a = 2 * xi_prime.dot(w);
  const double c = w.squaredNorm();
  return {l * a, l * c + l * (l - 1) / 2 * a * a, l * (l - 1) * a * c + l * (l - 1) * (l - 2) / 6 * a * a * a};
}

NuDerivative nu_t_derivative(const Vec& xi, int v_index, const RegionContext& ctx, const TrigSymbol& sym, double dt,
                             int K) {
  if (!(dt > 0)) throw ValidationError("dt must be positive");
  const SubspaceEntry& e = entry_of(ctx, v_index);
  const Interval X = x_interval(xi, v_index, ctx);
  const Projection pr = project_subspace(xi, e.V);
  const double r0 = pr.perp.norm();
  if (r0 - dt < X.lo || r0 + dt > X.hi) throw ValidationError("step leaves X(xi)");
  const Vec dir = pr.perp / r0;
  const auto Y = y_union(xi, v_index, ctx, K);
  const double l = ctx.p.l;

  auto nu = [&](double t) {
    std::vector<Vec> pts;
    pts.reserve(Y.size());
    for (const auto& eta : Y) pts.push_back(eta + (t - r0) * dir);
    auto ev = hermitian_eigenvalues(assemble_matrix(pts, ctx.lat, sym, l));
    for (auto& v : ev) v -= std::pow(t, 2 * l);
    return ev;
  };
  const auto up = nu(r0 + dt);
  const auto dn = nu(r0 - dt);
  NuDerivative out;
  out.derivative.resize(up.size());
  for (size_t j = 0; j < up.size(); ++j) {
    out.derivative[j] = (up[j] - dn[j]) / (2 * dt);
    out.max_abs = std::max(out.max_abs, std::abs(out.derivative[j]));
  }
  for (const auto& eta : Y) {
    const Vec w = eta - r0 * dir;
    const auto b = taylor_b(l, dir, w);
    out.b1.push_back(b[0]);
    double model = std::pow(r0, 2 * l);
    for (int s = 1; s <= 3; ++s) model += std::pow(r0, 2 * l - s) * b[static_cast<size_t>(s - 1)];
    out.taylor_residual = std::max(out.taylor_residual, std::abs(energy(eta, l) - model));
  }
  return out;
}

GValue g_value(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym, int K) {
  const RegionLabel lab = classify_point(xi, ctx);
  GValue g;
  g.kind = lab.kind;
  switch (lab.kind) {
    case RegionKind::outside_A:
      throw ValidationError("point lies outside the layer A");
    case RegionKind::non_resonance_B:
      g.v_index = 0;
      g.g_tilde = g.g = g_tilde_nonres(xi, ctx, sym);
      return g;
    case RegionKind::resonance_D:
      g.v_index = lab.subspace_index;
      g.g_tilde = g_tilde_res(resonance_block(xi, lab.subspace_index, ctx, sym), ctx).value;
      g.g = g_res(xi, lab.subspace_index, ctx, sym, K).value;
      return g;
  }
  return g;
}

FValue f_value(const Vec& xi, const RegionContext& ctx, const TrigSymbol& sym, double cutoff, double shell_w) {
  const RegionParams& p = ctx.p;
  if (cutoff < 2 * p.rho) throw ValidationError("cutoff must be at least 2 rho");
  const RegionLabel lab = classify_point(xi, ctx);
  FValue f;
  f.kind = lab.kind;
  if (lab.kind == RegionKind::outside_A) throw ValidationError("point lies outside the layer A");
  if (lab.kind == RegionKind::non_resonance_B)
    f.g_tilde = g_tilde_nonres(xi, ctx, sym);
  else
    f.g_tilde = g_tilde_res(resonance_block(xi, lab.subspace_index, ctx, sym), ctx).value;

  const Vec k = fractional_part(xi, ctx.lat).k;
  std::vector<Vec> pts = fiber_basis(k, ctx.lat, cutoff);
  int offset = 0;
  if (shell_w > 0) {
    std::vector<Vec> kept;
    for (const auto& eta : pts) {
      const double r = eta.norm();
      if (r <= p.rho - shell_w)
        ++offset;
      else if (r < p.rho + shell_w)
        kept.push_back(eta);
    }
    pts.swap(kept);
  }

  // Label every point by the unique V with eta in Xi(V); -1 marks Q.
  const double lam = std::pow(p.rho, 2 * p.l);
  const double gw = std::pow(p.rho, p.gamma);
  const double r_hi = std::pow(lam + gw, 0.5 / p.l) + p.M * p.R + 1e-9;
  const double r_lo = (lam - gw > 0 ? std::pow(lam - gw, 0.5 / p.l) : 0.0) - p.M * p.R - 1e-9;
  std::vector<int> label(pts.size(), -1);
  for (size_t i = 0; i < pts.size(); ++i) {
    const double r = pts[i].norm();
    if (r < r_lo || r > r_hi) continue;
    for (size_t v = 0; v < ctx.table.size(); ++v) {
      if (!region_membership(pts[i], static_cast<int>(v), Level::xi, ctx)) continue;
      if (label[i] >= 0) throw NumericalError("disjointness violation");
      label[i] = static_cast<int>(v);
    }
  }
  const CMat H = assemble_matrix(pts, ctx.lat, sym, p.l);
  std::map<int, std::vector<int>> groups;
  for (size_t i = 0; i < pts.size(); ++i) groups[label[i]].push_back(static_cast<int>(i));
  std::vector<double> blocks;
  for (const auto& [lab_v, idx] : groups) {
    const int n = static_cast<int>(idx.size());
    CMat sub(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) sub(a, b) = H(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
    blocks = merge_spectra(blocks, hermitian_eigenvalues(sub));
  }
  const double tol = 1e-6 * std::pow(p.rho, p.alpha);
  int tau = -1;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < blocks.size(); ++i) {
    const double d = std::abs(blocks[i] - f.g_tilde);
    if (d < best) {
      best = d;
      tau = static_cast<int>(i);
    }
  }
  if (tau < 0 || best > tol) throw NumericalError("tau unresolved");
  const auto full = hermitian_eigenvalues(H);
  f.tau = tau + offset;
  f.value = full.at(static_cast<size_t>(tau));
  return f;
}

}  // namespace floquet
