#include "floquet/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "floquet/parallel.hpp"

namespace floquet {

namespace {

constexpr std::int64_t kBlock = 8192;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double layer_halfwidth(const RegionParams& p) { return 100.0 * p.L * std::pow(p.rho, p.alpha); }

// |xi|^2 bounds of the layer: (lo2, hi2). lo2 may be negative (no lower bound).
void layer_bounds2(const RegionParams& p, double& lo2, double& hi2) {
  const double lam = std::pow(p.rho, 2 * p.l);
  const double w = layer_halfwidth(p);
  lo2 = lam - w > 0 ? std::pow(lam - w, 1.0 / p.l) : -1.0;
  hi2 = std::pow(lam + w, 1.0 / p.l);
}

double unit_ball_volume(int d) { return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0); }

Vec random_direction(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(d);
  double n = 0;
  while (n < 1e-12) {
    for (int i = 0; i < d; ++i) v(i) = g(rng);
    n = v.norm();
  }
  return v / n;
}

bool radial_precheck(const Vec& xi, const RegionContext& ctx, double energy_halfwidth, double pad) {
  const double lam = std::pow(ctx.p.rho, 2 * ctx.p.l);
  const double hi = std::pow(lam + energy_halfwidth, 0.5 / ctx.p.l) + pad;
  const double lo = lam - energy_halfwidth > 0 ? std::pow(lam - energy_halfwidth, 0.5 / ctx.p.l) - pad : -1.0;
  const double r = xi.norm();
  return r < hi && r > lo;
}

// Xi_1(W) for every W strictly containing V in the table.
bool excluded_by_superset(const Vec& xi, const SubspaceEntry& e, const RegionContext& ctx) {
  for (int w : e.supersets) {
    const SubspaceEntry& W = ctx.table[static_cast<size_t>(w)];
    if (xi1_radial_condition(project_subspace(xi, W.V).perp.squaredNorm(), W.n, ctx.p)) return true;
  }
  return false;
}

bool xi2_core(const Vec& xi, const SubspaceEntry& e, const RegionContext& ctx) {
  if (!in_layer_A(xi, ctx.p)) return false;
  if (!xi1_radial_condition(project_subspace(xi, e.V).perp.squaredNorm(), e.n, ctx.p)) return false;
  return !excluded_by_superset(xi, e, ctx);
}

// The radial and exclusion conditions of Xi_2 are invariant under shifts along V, so
// xi in Xi_3(V) iff xi is in the gamma shell, those conditions hold at xi, and some
// theta in V with |theta| <= factor rho^{q_n} moves xi into the layer.
bool xi3_core(const Vec& xi, const SubspaceEntry& e, const RegionContext& ctx) {
  const RegionParams& p = ctx.p;
  if (!in_gamma_shell(xi, p)) return false;
  const Projection pr = project_subspace(xi, e.V);
  const double perp2 = pr.perp.squaredNorm();
  if (!xi1_radial_condition(perp2, e.n, p)) return false;
  if (excluded_by_superset(xi, e, ctx)) return false;
  if (e.n == 0) return in_layer_A(xi, p);

  double lo2, hi2;
  layer_bounds2(p, lo2, hi2);
  const double c_hi = hi2 - perp2;
  if (c_hi <= 0) return false;
  const double reach = std::sqrt(c_hi);
  const double theta_max = ctx.search_factor * std::pow(p.rho, p.qn(e.n));

  // theta in V with |xi_V - theta| < reach; enumerate in lattice coordinates.
  const Mat& B = e.V.lattice_basis;
  const Mat G = B.transpose() * B;
  const Mat Ginv = G.inverse();
  const Vec center = Ginv * (B.transpose() * pr.along);
  const int n = e.n;
  IVec lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    const double half = reach * std::sqrt(std::max(Ginv(i, i), 0.0)) + 1e-9;
    lo(i) = static_cast<int>(std::floor(center(i) - half));
    hi(i) = static_cast<int>(std::ceil(center(i) + half));
  }
  IVec m = lo;
  while (true) {
    const Vec theta = B * m.cast<double>();
    if (theta.norm() <= theta_max && in_layer_A(xi - theta, p)) return true;
    int i = 0;
    while (i < n) {
      if (++m(i) <= hi(i)) break;
      m(i) = lo(i);
      ++i;
    }
    if (i == n) break;
  }
  return false;
}

const SubspaceEntry& entry(const RegionContext& ctx, int v_index) {
  if (v_index < 0 || v_index >= static_cast<int>(ctx.table.size())) throw ValidationError("subspace index out of range");
  return ctx.table[static_cast<size_t>(v_index)];
}

}  // namespace

double eps0_formula(double l, double alpha, const std::vector<double>& q, double gamma) {
  double m = std::min({2 * l - 2 + q.front() - alpha, gamma - alpha, 1.0 - q.back()});
  for (size_t s = 1; s < q.size(); ++s) m = std::min(m, q[s] - q[s - 1]);
  return m / 100.0;
}

void RegionParams::validate(int d) const {
  if (!(rho > 0)) throw ValidationError("rho must be positive");
  if (!(l > 0)) throw ValidationError("l must be positive");
  if (!(alpha < 2 * l - 1)) throw ValidationError("alpha < 2l - 1 violated");
  if (static_cast<int>(q.size()) != d) throw ValidationError("q must have d = " + std::to_string(d) + " entries");
  for (size_t s = 0; s < q.size(); ++s) {
    if (!(q[s] > 0 && q[s] < 1)) throw ValidationError("0 < q_s < 1 violated at s = " + std::to_string(s));
    if (s > 0 && !(q[s] > q[s - 1])) throw ValidationError("q_{s-1} < q_s violated at s = " + std::to_string(s));
  }
  if (!(alpha < gamma)) throw ValidationError("alpha < gamma violated");
  if (!(gamma < 2 * l - 2 + q[0])) throw ValidationError("gamma < 2l - 2 + q_0 violated");
  if (d >= 2 && !(q[1] >= (3 + alpha - 2 * l) / 2)) throw ValidationError("q_1 >= (3 + alpha - 2l)/2 violated");
  const double e = eps0_formula(l, alpha, q, gamma);
  if (!(std::abs(eps0 - e) <= 1e-9 * std::max(1.0, e)))
    throw ValidationError("eps0 must equal (1/100) min{...} = " + fmt(e) + ", got " + fmt(eps0));
  if (M < 1) throw ValidationError("M must be a positive integer");
  if (!(R > 0)) throw ValidationError("R must be positive");
  if (!(L > 0)) throw ValidationError("L must be positive");
}

RegionParams auto_region_params(int d, double l, double alpha, double rho, int M, double R, double L,
                                double subspace_radius) {
  if (d < 1) throw ValidationError("dimension must be positive");
  if (!(alpha < 2 * l - 1)) throw ValidationError("alpha < 2l - 1 violated");
  std::vector<double> f(static_cast<size_t>(d));
  for (int s = 0; s < d; ++s) f[static_cast<size_t>(s)] = d == 1 ? 0.4 : 0.4 + 0.2 * s / (d - 1);
  // Lift q towards 1 until q_0 > alpha - 2l + 2 and q_1 >= (3 + alpha - 2l)/2.
  double lb = (alpha - 2 * l + 2 - f[0]) / (1 - f[0]);
  if (d >= 2) lb = std::max(lb, ((3 + alpha - 2 * l) / 2 - f[1]) / (1 - f[1]));
  const double base = lb > 0 ? lb + 0.25 * (1 - lb) : 0.0;
  RegionParams p;
  p.rho = rho;
  p.l = l;
  p.alpha = alpha;
  p.q.resize(static_cast<size_t>(d));
  for (int s = 0; s < d; ++s) p.q[static_cast<size_t>(s)] = base + (1 - base) * f[static_cast<size_t>(s)];
  p.gamma = (alpha + 2 * l - 2 + p.q[0]) / 2;
  p.eps0 = eps0_formula(l, alpha, p.q, p.gamma);
  p.M = M;
  p.R = R;
  p.L = L;
  p.subspace_radius = subspace_radius;
  p.validate(d);
  return p;
}

int RegionContext::find(const LatticeSubspace& V) const {
  for (size_t i = 0; i < table.size(); ++i)
    if (table[i].V.dim() == V.dim() && same_span(table[i].V, V)) return static_cast<int>(i);
  return -1;
}

RegionContext make_region_context(const LatticePair& lat, const RegionParams& p, bool with_table) {
  p.validate(lat.dim);
  RegionContext ctx;
  ctx.lat = lat;
  ctx.p = p;
  ctx.table.push_back({zero_subspace(lat.dim), 0, {}});
  if (with_table) {
    for (int n = 1; n <= lat.dim - 1; ++n)
      for (auto& V : enumerate_subspaces(lat, p.table_radius(), n)) ctx.table.push_back({std::move(V), n, {}});
    for (size_t i = 0; i < ctx.table.size(); ++i)
      for (size_t j = 0; j < ctx.table.size(); ++j)
        if (ctx.table[j].n > ctx.table[i].n && contained_in(ctx.table[i].V, ctx.table[j].V))
          ctx.table[i].supersets.push_back(static_cast<int>(j));
    ctx.has_table = true;
  }
  const double mr = p.M * p.R;
  ctx.theta_M = enumerate_ball(lat, mr);
  ctx.theta_2M = enumerate_ball(lat, 2 * mr);
  for (const auto& a : ctx.theta_M)
    for (const auto& b : ctx.theta_M) {
      const Vec s = a + b;
      bool seen = false;
      for (const auto& t : ctx.theta_MM)
        if ((t - s).norm() < 1e-9) {
          seen = true;
          break;
        }
      if (!seen) ctx.theta_MM.push_back(s);
    }
  sort_points(ctx.theta_MM);
  return ctx;
}

bool in_layer_A(const Vec& xi, const RegionParams& p) {
  return std::abs(std::pow(xi.squaredNorm(), p.l) - std::pow(p.rho, 2 * p.l)) < layer_halfwidth(p);
}

bool in_gamma_shell(const Vec& xi, const RegionParams& p) {
  return std::abs(std::pow(xi.squaredNorm(), p.l) - std::pow(p.rho, 2 * p.l)) < std::pow(p.rho, p.gamma);
}

bool xi1_radial_condition(double perp2, int n, const RegionParams& p) {
  double lo2, hi2;
  layer_bounds2(p, lo2, hi2);
  // t in [0, T) and perp2 + t in (lo2, hi2).
  const double T = std::pow(p.rho, 2 * p.qn(n));
  const double lo = lo2 - perp2;
  const double hi = hi2 - perp2;
  return std::max(0.0, lo) < std::min(T, hi);
}

bool region_membership(const Vec& xi, int v_index, Level level, const RegionContext& ctx) {
  const SubspaceEntry& e = entry(ctx, v_index);
  const RegionParams& p = ctx.p;
  switch (level) {
    case Level::xi0:
      return in_layer_A(xi, p) && project_subspace(xi, e.V).along.norm() < std::pow(p.rho, p.qn(e.n));
    case Level::xi1:
      return in_layer_A(xi, p) && xi1_radial_condition(project_subspace(xi, e.V).perp.squaredNorm(), e.n, p);
    default:
      break;
  }
  if (!ctx.has_table) throw ValidationError("subspace table missing: build the region context with a table");
  switch (level) {
    case Level::xi2:
      return xi2_core(xi, e, ctx);
    case Level::xi3:
      return xi3_core(xi, e, ctx);
    case Level::xi:
      for (const auto& t : ctx.theta_M)
        if (xi3_core(xi - t, e, ctx)) return true;
      return false;
    default:
      return false;
  }
}

bool in_thickened(const Vec& xi, int v_index, const RegionContext& ctx) {
  const SubspaceEntry& e = entry(ctx, v_index);
  if (!ctx.has_table) throw ValidationError("subspace table missing: build the region context with a table");
  for (const auto& t : ctx.theta_MM)
    if (xi3_core(xi - t, e, ctx)) return true;
  return false;
}

const char* kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::outside_A:
      return "outside_A";
    case RegionKind::non_resonance_B:
      return "non_resonance_B";
    case RegionKind::resonance_D:
      return "resonance_D";
  }
  return "?";
}

RegionLabel classify_point(const Vec& xi, const RegionContext& ctx) {
  if (!ctx.has_table) throw ValidationError("subspace table missing: build the region context with a table");
  RegionLabel out;
  if (!in_layer_A(xi, ctx.p)) return out;
  out.kind = RegionKind::non_resonance_B;
  for (size_t i = 1; i < ctx.table.size(); ++i) {
    const SubspaceEntry& e = ctx.table[i];
    if (!xi2_core(xi, e, ctx)) continue;
    if (out.kind == RegionKind::resonance_D) throw NumericalError("disjointness violation");
    out.kind = RegionKind::resonance_D;
    out.subspace_index = static_cast<int>(i);
    out.subspace = e.V;
    out.level_n = e.n;
  }
  return out;
}

double ShellDomain::volume() const { return unit_ball_volume(d) * (std::pow(r_hi, d) - std::pow(r_lo, d)); }

Vec ShellDomain::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = std::pow(r_lo, d), b = std::pow(r_hi, d);
  const double r = std::pow(a + u(rng) * (b - a), 1.0 / d);
  return r * random_direction(d, rng);
}

ShellDomain layer_domain(const RegionParams& p, int d, double pad) {
  double lo2, hi2;
  layer_bounds2(p, lo2, hi2);
  ShellDomain s;
  s.d = d;
  s.r_lo = std::max(0.0, (lo2 > 0 ? std::sqrt(lo2) : 0.0) - pad);
  s.r_hi = std::sqrt(hi2) + pad;
  return s;
}

ShellDomain energy_domain(const RegionParams& p, int d, double energy_halfwidth) {
  const double lam = std::pow(p.rho, 2 * p.l);
  ShellDomain s;
  s.d = d;
  s.r_lo = lam - energy_halfwidth > 0 ? std::pow(lam - energy_halfwidth, 0.5 / p.l) : 0.0;
  s.r_hi = std::pow(lam + energy_halfwidth, 0.5 / p.l);
  return s;
}

namespace {

template <class Sampler>
VolumeEstimate run_mc(const PointPredicate& pred, const Sampler& sampler, double volume, std::int64_t N,
                      std::uint64_t seed) {
  if (N < 1000) throw ValidationError("mc_volume needs N >= 1000");
  const std::int64_t blocks = (N + kBlock - 1) / kBlock;
  std::vector<std::int64_t> hits(static_cast<size_t>(blocks), 0);
  parallel_for(static_cast<int>(blocks), [&](int b) {
    auto rng = block_rng(seed, static_cast<std::uint64_t>(b));
    const std::int64_t count = std::min(kBlock, N - b * kBlock);
    std::int64_t h = 0;
    for (std::int64_t i = 0; i < count; ++i)
      if (pred(sampler(rng))) ++h;
    hits[static_cast<size_t>(b)] = h;
  });
  VolumeEstimate est;
  est.samples = N;
  for (auto h : hits) est.hits += h;
  const double f = static_cast<double>(est.hits) / static_cast<double>(N);
  est.estimate = f * volume;
  est.ci95 = 1.96 * volume * std::sqrt(f * (1 - f) / static_cast<double>(N));
  return est;
}

}  // namespace

VolumeEstimate mc_volume(const PointPredicate& pred, const Box& box, std::int64_t N, std::uint64_t seed) {
  if (box.lo.size() != box.hi.size() || box.lo.size() == 0) throw ValidationError("box bounds must share a dimension");
  double vol = 1;
  for (int i = 0; i < box.lo.size(); ++i) {
    if (!(box.hi(i) > box.lo(i))) throw ValidationError("box must have positive extent");
    vol *= box.hi(i) - box.lo(i);
  }
  auto sampler = [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec x(box.lo.size());
    for (int i = 0; i < x.size(); ++i) x(i) = box.lo(i) + u(rng) * (box.hi(i) - box.lo(i));
    return x;
  };
  return run_mc(pred, sampler, vol, N, seed);
}

VolumeEstimate mc_volume(const PointPredicate& pred, const ShellDomain& dom, std::int64_t N, std::uint64_t seed) {
  if (!(dom.r_hi > dom.r_lo)) throw ValidationError("shell domain must have positive width");
  return run_mc(pred, [&](std::mt19937_64& rng) { return dom.sample(rng); }, dom.volume(), N, seed);
}

Vec sample_near_subspace(const LatticeSubspace& V, double along_radius, double r_lo, double r_hi, std::mt19937_64& rng) {
  const int d = static_cast<int>(V.projector.rows());
  const int n = V.dim();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (n == 0) {
    ShellDomain s{d, r_lo, r_hi};
    return s.sample(rng);
  }
  for (;;) {
    // xi_V uniform in the n-ball, |xi| uniform in [r_lo, r_hi], xi_perp direction uniform.
    Vec c = random_direction(n, rng) * along_radius * std::pow(u(rng), 1.0 / n);
    const Vec along = V.ortho * c;
    const double r = r_lo + u(rng) * (r_hi - r_lo);
    const double p2 = r * r - along.squaredNorm();
    if (p2 < 0) continue;
    Vec dir = random_direction(d, rng);
    dir -= V.projector * dir;
    const double dn = dir.norm();
    if (dn < 1e-9) continue;
    return along + std::sqrt(p2) * dir / dn;
  }
}

std::int64_t check_disjointness(int v1, int v2, const RegionContext& ctx, std::int64_t N, std::uint64_t seed) {
  const SubspaceEntry& e1 = entry(ctx, v1);
  const SubspaceEntry& e2 = entry(ctx, v2);
  if (v1 == v2 || (e1.n == e2.n && same_span(e1.V, e2.V))) throw ValidationError("check_disjointness needs V1 != V2");
  if (!ctx.has_table) throw ValidationError("subspace table missing: build the region context with a table");
  const double pad = 2 * ctx.p.M * ctx.p.R + 1.0;
  const ShellDomain dom = layer_domain(ctx.p, ctx.lat.dim, pad);
  const std::int64_t blocks = (N + kBlock - 1) / kBlock;
  std::vector<std::int64_t> bad(static_cast<size_t>(blocks), 0);
  const double gamma_width = std::pow(ctx.p.rho, ctx.p.gamma);
  parallel_for(static_cast<int>(blocks), [&](int b) {
    auto rng = block_rng(seed, static_cast<std::uint64_t>(b));
    const std::int64_t count = std::min(kBlock, N - b * kBlock);
    for (std::int64_t i = 0; i < count; ++i) {
      const SubspaceEntry& e = (i % 2 == 0) ? e1 : e2;
      const double along = 2 * std::pow(ctx.p.rho, ctx.p.qn(e.n)) + pad;
      const Vec xi = sample_near_subspace(e.V, along, dom.r_lo, dom.r_hi, rng);
      if (!radial_precheck(xi, ctx, gamma_width, pad)) continue;
      if (in_thickened(xi, v1, ctx) && in_thickened(xi, v2, ctx)) ++bad[static_cast<size_t>(b)];
    }
  });
  std::int64_t total = 0;
  for (auto v : bad) total += v;
  return total;
}

VolumeEstimate mc_intersection_volume(const Vec& a, double delta, const RegionContext& ctx, const EnergyFunction& g,
                                      double g_bound, std::int64_t N, std::uint64_t seed) {
  if (!(delta > 0)) throw ValidationError("delta must be positive");
  if (a.size() != ctx.lat.dim) throw ValidationError("shift vector has the wrong dimension");
  const double lam = std::pow(ctx.p.rho, 2 * ctx.p.l);
  const double hw = delta + std::max(g_bound, 0.0);
  const ShellDomain dom = energy_domain(ctx.p, ctx.lat.dim, hw);
  auto in_b = [&](const Vec& x) {
    const double r = x.norm();
    if (r < dom.r_lo || r > dom.r_hi) return false;
    if (classify_point(x, ctx).kind != RegionKind::non_resonance_B) return false;
    return std::abs(g(x) - lam) <= delta;
  };
  return mc_volume([&](const Vec& x) { return in_b(x) && in_b(x - a); }, dom, N, seed);
}

}  // namespace floquet
