#include "floquet/bands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "floquet/parallel.hpp"

namespace floquet {

std::vector<KPoint> k_grid(const LatticePair& lat, const std::vector<int>& grid_shape) {
  const int d = lat.dim;
  if (static_cast<int>(grid_shape.size()) != d) throw ValidationError("grid_shape needs one count per axis");
  for (int n : grid_shape)
    if (n < 8) throw ValidationError("grid_shape must be at least 8 per axis");
  std::vector<KPoint> out;
  IVec idx = IVec::Zero(d);
  for (;;) {
    Vec frac(d);
    for (int i = 0; i < d; ++i) frac(i) = static_cast<double>(idx(i)) / grid_shape[static_cast<size_t>(i)];
    out.push_back({idx, lat.dual_basis * frac});
    int i = 0;
    while (i < d) {
      if (++idx(i) < grid_shape[static_cast<size_t>(i)]) break;
      idx(i) = 0;
      ++i;
    }
    if (i == d) break;
  }
  return out;
}

BandTable scan_bands(const LatticePair& lat, const TrigSymbol& sym, double l, double cutoff,
                     const std::vector<int>& grid_shape, bool keep_eigenvalues) {
  BandTable bt;
  bt.k_grid = k_grid(lat, grid_shape);
  bt.grid_shape = grid_shape;
  bt.cutoff = cutoff;
  bt.l = l;
  bt.reliable_max = 0.8 * std::pow(cutoff, 2 * l);
  double cover = 0;
  for (int i = 0; i < lat.dim; ++i) cover += lat.dual_basis.col(i).norm() / grid_shape[static_cast<size_t>(i)];
  bt.endpoint_error = 2 * l * std::pow(cutoff, 2 * l - 1) * 0.5 * cover;

  const int nk = static_cast<int>(bt.k_grid.size());
  const int nblocks = std::min(nk, 256);
  struct Partial {
    std::vector<double> lo, hi;
    std::vector<int> arg_lo, arg_hi;
    size_t count = static_cast<size_t>(-1);
  };
  std::vector<Partial> part(static_cast<size_t>(nblocks));
  if (keep_eigenvalues) bt.eigenvalues.resize(static_cast<size_t>(nk));
  parallel_for(nblocks, [&](int b) {
    Partial& p = part[static_cast<size_t>(b)];
    for (int i = b; i < nk; i += nblocks) {
      const auto ev = fiber_eigenvalues(fiber_basis(bt.k_grid[static_cast<size_t>(i)].k, lat, cutoff), lat, sym, l);
      if (p.lo.size() < ev.size()) {
        p.lo.resize(ev.size(), std::numeric_limits<double>::infinity());
        p.hi.resize(ev.size(), -std::numeric_limits<double>::infinity());
        p.arg_lo.resize(ev.size(), -1);
        p.arg_hi.resize(ev.size(), -1);
      }
      for (size_t j = 0; j < ev.size(); ++j) {
        if (ev[j] < p.lo[j]) {
          p.lo[j] = ev[j];
          p.arg_lo[j] = i;
        }
        if (ev[j] > p.hi[j]) {
          p.hi[j] = ev[j];
          p.arg_hi[j] = i;
        }
      }
      p.count = std::min(p.count, ev.size());
      if (keep_eigenvalues) bt.eigenvalues[static_cast<size_t>(i)] = ev;
    }
  });
  size_t count = static_cast<size_t>(-1);
  for (const auto& p : part) count = std::min(count, p.count);
  for (size_t j = 0; j < count; ++j) {
    Band band;
    band.j = static_cast<int>(j);
    band.a = std::numeric_limits<double>::infinity();
    band.b = -std::numeric_limits<double>::infinity();
    // Ties go to the smaller k index, independent of the block layout.
    for (const auto& p : part) {
      if (p.count == static_cast<size_t>(-1)) continue;
      if (p.lo[j] < band.a || (p.lo[j] == band.a && p.arg_lo[j] < band.arg_a)) {
        band.a = p.lo[j];
        band.arg_a = p.arg_lo[j];
      }
      if (p.hi[j] > band.b || (p.hi[j] == band.b && p.arg_hi[j] < band.arg_b)) {
        band.b = p.hi[j];
        band.arg_b = p.arg_hi[j];
      }
    }
    bt.bands.push_back(band);
  }
  if (keep_eigenvalues)
    for (auto& ev : bt.eigenvalues) ev.resize(count);
  if (!bt.bands.empty()) {
    double top = bt.bands.front().b;
    for (const auto& b : bt.bands) top = std::max(top, b.b);
    bt.gaps = uncovered(bt.bands, bt.bands.front().a, top);
  }
  return bt;
}

namespace {

// Zoom search over fractional k for an extremum of lambda_j; sign = +1 minimizes, -1 maximizes.
// A 5^d stencil is recentred on its best point and halved each level. Band extrema often sit on
// eigenvalue crossings, where the stencil shape is scale invariant and coordinate searches stall.
double polish(const LatticePair& lat, const TrigSymbol& sym, double l, double cutoff, int j, const Vec& k0,
              double step, double sign, double tol) {
  const int d = lat.dim;
  // Stencil points are dyadic offsets of the start, so successive levels revisit them exactly.
  std::map<std::vector<double>, double> seen;
  auto value = [&](const Vec& frac) {
    std::vector<double> key(frac.data(), frac.data() + d);
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    const auto ev = fiber_eigenvalues(fiber_basis(lat.dual_basis * frac, lat, cutoff), lat, sym, l);
    const double v = static_cast<size_t>(j) >= ev.size() ? std::numeric_limits<double>::infinity()
                                                         : sign * ev[static_cast<size_t>(j)];
    seen.emplace(std::move(key), v);
    return v;
  };
  std::vector<Vec> stencil;
  const int total = static_cast<int>(std::pow(5, d));
  for (int m = 0; m < total; ++m) {
    Vec v(d);
    for (int i = 0, t = m; i < d; ++i, t /= 5) v(i) = t % 5 - 2;
    if (v.cwiseAbs().sum() > 0) stencil.push_back(v);
  }
  Vec x = lat.dual_inverse * k0;
  double fx = value(x);
  double h = step / 2;
  while (h > tol) {
    Vec best = x;
    for (const auto& v : stencil) {
      const Vec y = x + h * v;
      const double f = value(y);
      if (f < fx) {
        fx = f;
        best = y;
      }
    }
    if (best == x) h /= 2;
    x = best;
  }
  return sign * fx;
}

// Periodic grid neighbours of the flat index i; axis 0 runs fastest.
std::vector<int> grid_neighbours(const std::vector<int>& shape, int i) {
  const int d = static_cast<int>(shape.size());
  std::vector<int> idx(static_cast<size_t>(d));
  for (int a = 0, t = i; a < d; ++a) {
    idx[static_cast<size_t>(a)] = t % shape[static_cast<size_t>(a)];
    t /= shape[static_cast<size_t>(a)];
  }
  std::vector<int> out;
  const int total = static_cast<int>(std::pow(3, d));
  for (int m = 0; m < total; ++m) {
    if (m == (total - 1) / 2) continue;
    int flat = 0, stride = 1;
    for (int a = 0, t = m; a < d; ++a, t /= 3) {
      const int n = shape[static_cast<size_t>(a)];
      flat += ((idx[static_cast<size_t>(a)] + t % 3 - 1 + n) % n) * stride;
      stride *= n;
    }
    out.push_back(flat);
  }
  return out;
}

// Periodic Chebyshev distance between two flat grid indices.
int grid_distance(const std::vector<int>& shape, int i, int j) {
  int dist = 0;
  for (int n : shape) {
    const int a = std::abs(i % n - j % n);
    dist = std::max(dist, std::min(a, n - a));
    i /= n;
    j /= n;
  }
  return dist;
}

struct Start {
  size_t band;  // position in the todo list
  double sign;
  int k;
};

}  // namespace

void refine_band_edges(BandTable& bt, const LatticePair& lat, const TrigSymbol& sym, double lo, double hi, double tol) {
  constexpr size_t kMaxStarts = 16;
  double step = 0;
  for (int n : bt.grid_shape) step = std::max(step, 1.0 / n);
  std::vector<int> todo;
  for (size_t j = 0; j < bt.bands.size(); ++j)
    if (bt.bands[j].b >= lo && bt.bands[j].a <= hi) todo.push_back(static_cast<int>(j));
  if (todo.empty()) return;

  // Grid values of the bands to refine, to locate every basin that may hold the true extremum.
  const int j0 = todo.front();
  const int nj = todo.back() - j0 + 1;
  const int nk = static_cast<int>(bt.k_grid.size());
  std::vector<std::vector<double>> slice(static_cast<size_t>(nk));
  parallel_for(nk, [&](int i) {
    const auto& k = bt.k_grid[static_cast<size_t>(i)].k;
    auto ev = fiber_eigenvalues(fiber_basis(k, lat, bt.cutoff), lat, sym, bt.l);
    slice[static_cast<size_t>(i)].assign(ev.begin() + j0, ev.begin() + j0 + nj);
  });

  // Start from grid local extrema within the Lipschitz window of the grid extremum, best first.
  std::vector<Start> starts;
  for (size_t t = 0; t < todo.size(); ++t) {
    const size_t c = static_cast<size_t>(todo[t] - j0);
    const Band& b = bt.bands[static_cast<size_t>(todo[t])];
    for (double sign : {1.0, -1.0}) {
      const double best = sign > 0 ? b.a : -b.b;
      std::vector<std::pair<double, int>> cand;
      for (int i = 0; i < nk; ++i) {
        const double v = sign * slice[static_cast<size_t>(i)][c];
        if (v > best + bt.endpoint_error) continue;
        bool local = true;
        for (int n : grid_neighbours(bt.grid_shape, i))
          if (sign * slice[static_cast<size_t>(n)][c] < v) {
            local = false;
            break;
          }
        if (local) cand.emplace_back(v, i);
      }
      std::sort(cand.begin(), cand.end());
      std::vector<int> chosen;
      for (const auto& [v, i] : cand) {
        if (chosen.size() == kMaxStarts) break;
        bool near = false;
        for (int o : chosen) near = near || grid_distance(bt.grid_shape, i, o) <= 1;
        if (near) continue;
        chosen.push_back(i);
        starts.push_back({t, sign, i});
      }
    }
  }

  std::vector<double> found(starts.size());
  parallel_for(static_cast<int>(starts.size()), [&](int s) {
    const Start& st = starts[static_cast<size_t>(s)];
    found[static_cast<size_t>(s)] = polish(lat, sym, bt.l, bt.cutoff, todo[st.band],
                                           bt.k_grid[static_cast<size_t>(st.k)].k, step, st.sign, tol);
  });
  for (size_t s = 0; s < starts.size(); ++s) {
    Band& b = bt.bands[static_cast<size_t>(todo[starts[s].band])];
    if (starts[s].sign > 0)
      b.a = std::min(b.a, found[s]);
    else
      b.b = std::max(b.b, found[s]);
    b.refined = true;
  }
  double top = bt.bands.front().b;
  for (const auto& b : bt.bands) top = std::max(top, b.b);
  bt.gaps = uncovered(bt.bands, bt.bands.front().a, top);
}

std::vector<Gap> uncovered(const std::vector<Band>& bands, double lo, double hi) {
  std::vector<std::pair<double, double>> iv;
  for (const auto& b : bands)
    if (b.b > lo && b.a < hi) iv.emplace_back(b.a, b.b);
  std::sort(iv.begin(), iv.end());
  std::vector<Gap> gaps;
  double reach = lo;
  for (const auto& [a, b] : iv) {
    if (a > reach) gaps.push_back({reach, std::min(a, hi)});
    reach = std::max(reach, b);
    if (reach >= hi) break;
  }
  if (reach < hi) gaps.push_back({reach, hi});
  return gaps;
}

std::vector<Gap> detect_gaps(const BandTable& bt, double lo, double hi) {
  if (!(hi > lo)) throw ValidationError("window must satisfy lo < hi");
  if (hi > bt.reliable_max) throw ValidationError("cutoff too small for the window");
  return uncovered(bt.bands, lo, hi);
}

double coverage_delta(int d, double l, double rho, double c3) {
  return d == 2 ? c3 * std::pow(rho, 2 * l - 6) : c3 * std::pow(rho, 2 * l - d - 1);
}

Coverage coverage_from_table(const BandTable& bt, int d, double rho, double c3) {
  Coverage c;
  c.rho = rho;
  c.c3 = c3;
  c.delta = coverage_delta(d, bt.l, rho, c3);
  const double E = std::pow(rho, 2 * bt.l);
  c.target_lo = E - c.delta;
  c.target_hi = E + c.delta;
  if (c.target_hi > bt.reliable_max) throw ValidationError("cutoff too small for the coverage target");
  for (const auto& b : bt.bands) {
    const double m = std::min(c.target_lo - b.a, b.b - c.target_hi);
    if (m > c.margin) {
      c.margin = m;
      c.band = b.j;
    }
  }
  c.covered = c.margin >= 0;
  c.union_margin = std::numeric_limits<double>::infinity();
  for (const auto& g : bt.gaps) {
    if (g.lo > bt.reliable_max) continue;
    double dist;
    if (g.hi <= c.target_lo)
      dist = c.target_lo - g.hi;
    else if (g.lo >= c.target_hi)
      dist = g.lo - c.target_hi;
    else
      dist = -std::min(g.hi, c.target_hi) + std::max(g.lo, c.target_lo);
    c.union_margin = std::min(c.union_margin, dist);
  }
  return c;
}

Coverage coverage_check(const LatticePair& lat, const TrigSymbol& sym, double l, double rho, double c3,
                        const std::vector<int>& grid_shape, double cutoff, bool refine, BandTable* table_out) {
  if (std::pow(rho, 2 * l) > 0.8 * std::pow(cutoff, 2 * l))
    throw ValidationError("cutoff too small: need rho^{2l} <= 0.8 cutoff^{2l}");
  BandTable bt = scan_bands(lat, sym, l, cutoff, grid_shape);
  if (refine) {
    const double delta = coverage_delta(lat.dim, l, rho, c3);
    const double E = std::pow(rho, 2 * l);
    refine_band_edges(bt, lat, sym, E - delta, E + delta);
  }
  Coverage c = coverage_from_table(bt, lat.dim, rho, c3);
  if (table_out) *table_out = std::move(bt);
  return c;
}

double band_endpoint_change(const BandTable& t1, const BandTable& t2, double lo, double hi) {
  const size_t n = std::min(t1.bands.size(), t2.bands.size());
  double worst = 0;
  for (size_t j = 0; j < n; ++j) {
    const Band& a = t1.bands[j];
    const Band& b = t2.bands[j];
    if (a.b < lo || a.a > hi) continue;
    worst = std::max(worst, std::abs(a.a - b.a) / std::max(std::abs(a.a), 1.0));
    worst = std::max(worst, std::abs(a.b - b.b) / std::max(std::abs(a.b), 1.0));
  }
  return worst;
}

}  // namespace floquet
