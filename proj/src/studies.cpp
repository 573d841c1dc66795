#include "floquet/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "floquet/parallel.hpp"

namespace floquet {

namespace {

constexpr std::int64_t kBlock = 8192;

double log_or_floor(double v) { return std::log(std::max(v, std::numeric_limits<double>::min())); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("regression needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw ValidationError("regression abscissae coincide");
  return (n * sxy - sx * sy) / den;
}

std::vector<int> int_key(const IVec& v) { return std::vector<int>(v.data(), v.data() + v.size()); }

struct Resonant {
  Vec xi;
  int v = -1;
};

// Points of the resonance set drawn near the table lines, in a fixed order for a given rng.
std::vector<Resonant> sample_resonant(const RegionContext& ctx, int count, std::mt19937_64& rng) {
  const ShellDomain dom = layer_domain(ctx.p, ctx.lat.dim);
  const int T = static_cast<int>(ctx.table.size());
  if (T < 2) throw ValidationError("resonance sampling needs a nonzero subspace in the table");
  std::vector<Resonant> out;
  for (std::int64_t s = 0; static_cast<int>(out.size()) < count; ++s) {
    if (s > 1000LL * count) throw NumericalError("resonance sampling found too few points");
    const SubspaceEntry& e = ctx.table[static_cast<size_t>(1 + s % (T - 1))];
    const Vec x = sample_near_subspace(e.V, 2 * std::pow(ctx.p.rho, ctx.p.qn(e.n)), dom.r_lo, dom.r_hi, rng);
    const RegionLabel lab = classify_point(x, ctx);
    if (lab.kind == RegionKind::resonance_D) out.push_back({x, lab.subspace_index});
  }
  return out;
}

std::vector<Vec> sample_nonresonant(const RegionContext& ctx, int count, std::mt19937_64& rng) {
  const ShellDomain dom = layer_domain(ctx.p, ctx.lat.dim);
  std::vector<Vec> out;
  for (std::int64_t s = 0; static_cast<int>(out.size()) < count; ++s) {
    if (s > 1000LL * count) throw NumericalError("non-resonance sampling found too few points");
    const Vec x = dom.sample(rng);
    if (classify_point(x, ctx).kind == RegionKind::non_resonance_B) out.push_back(x);
  }
  return out;
}

// Number of pairs (a, b) with |a - b| <= r, by hashing a onto a grid of cell size r.
std::int64_t close_pairs(const std::vector<Vec>& A, const std::vector<Vec>& B, double r, double* min_dist) {
  *min_dist = std::numeric_limits<double>::infinity();
  if (A.empty() || B.empty()) return 0;
  const int d = static_cast<int>(A.front().size());
  auto cell = [&](const Vec& x) {
    std::vector<long> c(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] = static_cast<long>(std::floor(x(i) / r));
    return c;
  };
  std::map<std::vector<long>, std::vector<size_t>> grid;
  for (size_t i = 0; i < A.size(); ++i) grid[cell(A[i])].push_back(i);
  std::int64_t count = 0;
  for (const auto& b : B) {
    const auto c = cell(b);
    const int total = static_cast<int>(std::pow(3, d));
    for (int m = 0; m < total; ++m) {
      auto n = c;
      for (int i = 0, t = m; i < d; ++i, t /= 3) n[static_cast<size_t>(i)] += t % 3 - 1;
      auto it = grid.find(n);
      if (it == grid.end()) continue;
      for (size_t i : it->second) {
        const double dist = (A[i] - b).norm();
        *min_dist = std::min(*min_dist, dist);
        if (dist <= r) ++count;
      }
    }
  }
  return count;
}

}  // namespace

TrigSymbol axis_cosines(const LatticePair& lat, double q) {
  std::vector<ModeSpec> modes;
  const cplx z = q * std::sqrt(lat.vol_gamma);
  for (int i = 0; i < lat.dim; ++i) {
    IVec e = IVec::Zero(lat.dim);
    e(i) = 1;
    modes.push_back({e, z});
    modes.push_back({IVec(-e), z});
  }
  return make_symbol(lat, modes, 0.0);
}

RegionParams desk_region_params(double rho, int M) {
  const double R = 1.1;
  return auto_region_params(2, 1.0, 0.0, rho, M, R, 0.02, 2 * R);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (double v : x) lx.push_back(std::log(v));
  for (double v : y) ly.push_back(log_or_floor(v));
  return slope(lx, ly);
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> ly;
  for (double v : y) ly.push_back(log_or_floor(v));
  return slope(x, ly);
}

OracleStudy unperturbed_oracle_study(std::uint64_t seed, int k_per_dim) {
  OracleStudy out;
  const double cutoffs[] = {30.0, 9.0, 4.5};
  const double ls[] = {1.0, 1.5, 2.0};
  for (int d = 1; d <= 3; ++d) {
    const LatticePair lat = standard_lattice(d);
    const TrigSymbol sym = zero_symbol(lat);
    const double cutoff = cutoffs[d - 1];
    std::vector<double> err(static_cast<size_t>(k_per_dim), 0.0);
    parallel_for(k_per_dim, [&](int i) {
      auto rng = block_rng(seed, static_cast<std::uint64_t>(d * 1000000 + i));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      Vec frac(d);
      for (int t = 0; t < d; ++t) frac(t) = u(rng);
      const Vec k = lat.dual_basis * frac;
      const double l = ls[i % 3];
      const auto ev = eigen(assemble_fiber(k, lat, sym, l, cutoff), false).eigenvalues;
      // Brute force over an integer box.
      std::vector<double> oracle;
      const int m = static_cast<int>(std::ceil(cutoff)) + 1;
      IVec idx = IVec::Constant(d, -m);
      for (;;) {
        const Vec x = k + lat.dual_basis * idx.cast<double>();
        if (x.norm() <= cutoff) oracle.push_back(std::pow(x.squaredNorm(), l));
        int a = 0;
        while (a < d && ++idx(a) > m) idx(a++) = -m;
        if (a == d) break;
      }
      std::sort(oracle.begin(), oracle.end());
      double worst = 0;
      if (oracle.size() != ev.size()) {
        worst = std::numeric_limits<double>::infinity();
      } else {
        for (size_t j = 0; j < ev.size(); ++j)
          worst = std::max(worst, std::abs(ev[j] - oracle[j]) / std::max(oracle[j], std::numeric_limits<double>::min()));
      }
      err[static_cast<size_t>(i)] = worst;
    });
    OracleRow row;
    row.d = d;
    row.samples = k_per_dim;
    for (double e : err) row.max_rel_error = std::max(row.max_rel_error, e);
    out.worst = std::max(out.worst, row.max_rel_error);
    out.rows.push_back(row);
  }
  return out;
}

PerturbationStudy perturbation_study(std::uint64_t seed, int instances) {
  struct Item {
    double ratio[3] = {0, 0, 0};
    bool pass[3] = {true, true, true};
    bool shifted = false;
  };
  std::vector<Item> items(static_cast<size_t>(instances));
  parallel_for(instances, [&](int i) {
    Item& it = items[static_cast<size_t>(i)];
    auto rng = block_rng(seed, static_cast<std::uint64_t>(i));
    int level = 1;
    const BlockInstance chain = random_chain_instance(rng, &level);
    const ChainCheck c = check_chain_lemma(chain, level);
    it.pass[0] = c.pass;
    it.ratio[0] = c.bound > 0 ? c.actual / c.bound : 0.0;
    const ClusterInstance cl = random_cluster_instance(rng, i % 3);
    const ClusterReport cr = check_cluster_lemma(cl);
    it.pass[1] = cr.pass;
    it.ratio[1] = cr.pairing_bound > 0 ? cr.pairing_error / cr.pairing_bound : 0.0;
    it.shifted = cr.shift_l > 0;
    const RelativeInstance rel = random_relative_instance(rng);
    const RelativeReport rr = check_relative_proposition(rel);
    it.pass[2] = rr.pass;
    it.ratio[2] = rr.bound > 0 ? rr.max_error / rr.bound : 0.0;
  });
  PerturbationStudy out;
  const char* names[] = {"chain", "cluster", "relative"};
  for (int t = 0; t < 3; ++t) {
    LemmaTally tally;
    tally.name = names[t];
    tally.instances = instances;
    for (const auto& it : items) {
      tally.violations += it.pass[t] ? 0 : 1;
      tally.worst_ratio = std::max(tally.worst_ratio, it.ratio[t]);
    }
    out.lemmas.push_back(tally);
  }
  for (const auto& it : items) out.index_shift_instances += it.shifted ? 1 : 0;
  return out;
}

ShellStudy shell_truncation_study(double q, const std::vector<double>& rhos) {
  const LatticePair lat = standard_lattice(2);
  IVec dir(2);
  dir << 1, 0;
  const TrigSymbol sym = cosine_symbol(lat, dir, q);
  ShellStudy out;
  out.q = q;
  Vec frac(2);
  frac << 0.31, 0.17;
  out.k = lat.dual_basis * frac;
  out.rho = rhos;
  out.max_dev.resize(rhos.size());
  for (size_t i = 0; i < rhos.size(); ++i)
    out.max_dev[i] = shell_truncation_compare(out.k, lat, sym, 1.0, rhos[i], 2 * rhos[i]);
  out.slope = log_slope(out.rho, out.max_dev);
  return out;
}

std::int64_t GeometryStudy::total_violations() const {
  std::int64_t v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

GeometryStudy geometry_study(const std::vector<double>& rhos, std::int64_t N, std::uint64_t seed) {
  const LatticePair lat = standard_lattice(2);
  GeometryStudy out;
  double c_radius = -1, c_perp = -1;  // fitted at the first rho
  for (size_t ri = 0; ri < rhos.size(); ++ri) {
    const double rho = rhos[ri];
    const RegionParams p = desk_region_params(rho);
    const RegionContext ctx = make_region_context(lat, p);
    const int T = static_cast<int>(ctx.table.size());
    const double l = p.l;
    const double lam = std::pow(rho, 2 * l);
    const double gw = std::pow(rho, p.gamma);
    const ShellDomain dom = energy_domain(p, 2, 2 * gw);

    struct Acc {
      std::int64_t tested[6] = {0, 0, 0, 0, 0, 0};
      std::int64_t bad[4] = {0, 0, 0, 0};  // along bounds (xi1, xi3), offset energy, exit energy
      double worst[4] = {0, 0, 0, 0};
      std::vector<double> radius, perp;  // scaled deviations for the fitted bands
      std::vector<std::vector<Vec>> xi2;
    };
    const std::int64_t blocks = (N + kBlock - 1) / kBlock;
    std::vector<Acc> acc(static_cast<size_t>(blocks));
    parallel_for(static_cast<int>(blocks), [&](int b) {
      Acc& a = acc[static_cast<size_t>(b)];
      a.xi2.resize(static_cast<size_t>(T));
      auto rng = block_rng(seed + 7919 * ri, static_cast<std::uint64_t>(b));
      const std::int64_t count = std::min(kBlock, N - b * kBlock);
      for (std::int64_t i = 0; i < count; ++i) {
        const int v = static_cast<int>((b * kBlock + i) % T);
        const SubspaceEntry& e = ctx.table[static_cast<size_t>(v)];
        const double qn = p.qn(e.n);
        const Vec xi = sample_near_subspace(e.V, 3 * std::pow(rho, qn), dom.r_lo, dom.r_hi, rng);
        const double along = project_subspace(xi, e.V).along.norm();
        const double along_bound = 2 * std::pow(rho, qn);
        if (region_membership(xi, v, Level::xi1, ctx)) {
          ++a.tested[0];
          a.worst[0] = std::max(a.worst[0], along / along_bound);
          if (along >= along_bound) ++a.bad[0];
        }
        if (e.n >= 1 && region_membership(xi, v, Level::xi2, ctx)) a.xi2[static_cast<size_t>(v)].push_back(xi);
        if (!region_membership(xi, v, Level::xi3, ctx)) continue;
        ++a.tested[1];
        a.worst[1] = std::max(a.worst[1], along / along_bound);
        if (along >= along_bound) ++a.bad[1];
        a.radius.push_back(std::abs(xi.norm() - rho) / std::pow(rho, p.gamma - 2 * l + 1));
        a.perp.push_back(std::abs(project_subspace(xi, e.V).perp.norm() - rho) / std::pow(rho, 2 * qn - 1));
        const double offset_bound = std::pow(rho, 2 * l - 2 + qn);
        for (const auto& t : ctx.theta_2M) {
          if (t.norm() == 0) continue;
          const double E = std::abs(std::pow((xi + t).squaredNorm(), l) - lam);
          if (!in_span(e.V, t)) {
            ++a.tested[2];
            a.worst[2] = std::max(a.worst[2], offset_bound / E);
            if (!(E > offset_bound)) ++a.bad[2];
          }
          if (!region_membership(xi + t, v, Level::xi3, ctx)) {
            ++a.tested[3];
            a.worst[3] = std::max(a.worst[3], gw / E);
            if (!(E > gw)) ++a.bad[3];
          }
        }
      }
    });

    Acc sum;
    sum.xi2.resize(static_cast<size_t>(T));
    for (auto& a : acc) {
      for (int t = 0; t < 4; ++t) {
        sum.tested[t] += a.tested[t];
        sum.bad[t] += a.bad[t];
        sum.worst[t] = std::max(sum.worst[t], a.worst[t]);
      }
      sum.radius.insert(sum.radius.end(), a.radius.begin(), a.radius.end());
      sum.perp.insert(sum.perp.end(), a.perp.begin(), a.perp.end());
      for (int v = 0; v < T; ++v)
        sum.xi2[static_cast<size_t>(v)].insert(sum.xi2[static_cast<size_t>(v)].end(), a.xi2[static_cast<size_t>(v)].begin(),
                                               a.xi2[static_cast<size_t>(v)].end());
    }
    auto push = [&](const std::string& name, std::int64_t tested, std::int64_t bad, double worst) {
      out.checks.push_back({name, rho, N, tested, bad, worst});
    };
    push("xi1_along_bound", sum.tested[0], sum.bad[0], sum.worst[0]);
    push("xi3_along_bound", sum.tested[1], sum.bad[1], sum.worst[1]);

    // Radial bands: constants fitted once, at the first rho, then held to within a factor 4.
    double mr = 0, mp = 0;
    for (double x : sum.radius) mr = std::max(mr, x);
    for (double x : sum.perp) mp = std::max(mp, x);
    if (c_radius < 0) {
      c_radius = mr;
      c_perp = mp;
    }
    std::int64_t bad_r = 0, bad_p = 0;
    for (double x : sum.radius) bad_r += x >= 4 * c_radius ? 1 : 0;
    for (double x : sum.perp) bad_p += x >= 4 * c_perp ? 1 : 0;
    push("xi3_radius_band", static_cast<std::int64_t>(sum.radius.size()), bad_r, c_radius > 0 ? mr / c_radius : 0.0);
    push("xi3_perp_band", static_cast<std::int64_t>(sum.perp.size()), bad_p, c_perp > 0 ? mp / c_perp : 0.0);

    // Separation of the level-2 sets of subspaces neither of which contains the other.
    std::int64_t sep_tested = 0, sep_bad = 0;
    double sep_worst = 0;
    for (int v1 = 1; v1 < T; ++v1)
      for (int v2 = v1 + 1; v2 < T; ++v2) {
        const SubspaceEntry& e1 = ctx.table[static_cast<size_t>(v1)];
        const SubspaceEntry& e2 = ctx.table[static_cast<size_t>(v2)];
        if (contained_in(e1.V, e2.V) || contained_in(e2.V, e1.V)) continue;
        const double r = std::pow(rho, p.qn(std::max(e1.n, e2.n)) + p.eps0);
        double dmin;
        sep_bad += close_pairs(sum.xi2[static_cast<size_t>(v1)], sum.xi2[static_cast<size_t>(v2)], r, &dmin);
        sep_tested += static_cast<std::int64_t>(sum.xi2[static_cast<size_t>(v1)].size() *
                                                sum.xi2[static_cast<size_t>(v2)].size());
        if (std::isfinite(dmin)) sep_worst = std::max(sep_worst, r / dmin);
      }
    push("xi2_separation", sep_tested, sep_bad, sep_worst);
    push("xi3_offset_energy", sum.tested[2], sum.bad[2], sum.worst[2]);
    push("xi3_exit_energy", sum.tested[3], sum.bad[3], sum.worst[3]);

    for (int v1 = 0; v1 < T; ++v1)
      for (int v2 = v1 + 1; v2 < T; ++v2) {
        const std::int64_t bad = check_disjointness(v1, v2, ctx, N, seed + 104729 * (ri + 1) + 131 * v1 + v2);
        push("thickened_disjoint_" + std::to_string(v1) + "_" + std::to_string(v2), N, bad, 0.0);
      }
  }
  return out;
}

ReductionStudy reduction_study(const std::vector<double>& rhos, int points, int grad_points, double q,
                               std::uint64_t seed) {
  const LatticePair lat = standard_lattice(2);
  const TrigSymbol sym = axis_cosines(lat, q);
  ReductionStudy out;
  out.q = q;
  std::vector<double> sup;
  for (size_t ri = 0; ri < rhos.size(); ++ri) {
    const RegionContext ctx = make_region_context(lat, desk_region_params(rhos[ri]));
    auto rng = block_rng(seed, ri);
    const auto pts = sample_nonresonant(ctx, std::max(points, grad_points), rng);
    std::vector<double> rel(pts.size(), 0.0), slope_I(pts.size(), 0.0), grad(pts.size(), -1.0);
    parallel_for(static_cast<int>(pts.size()), [&](int i) {
      const LocalBlock blk = local_matrix(pts[static_cast<size_t>(i)], ctx, sym);
      if (i < points) {
        const double gt = g_tilde_nonres(blk);
        rel[static_cast<size_t>(i)] = std::abs(schur_fixed_point(blk) - gt) / std::abs(gt);
        for (int s = 0; s <= 8; ++s) {
          const double mu = blk.j_lo + (blk.j_hi - blk.j_lo) * s / 8.0;
          slope_I[static_cast<size_t>(i)] = std::max(slope_I[static_cast<size_t>(i)], std::abs(schur_I(blk, mu).derivative));
        }
      }
      if (i < grad_points) {
        try {
          grad[static_cast<size_t>(i)] = grad_G(pts[static_cast<size_t>(i)], ctx, sym).grad.norm();
        } catch (const ValidationError&) {
          // Stencil leaves the non-resonance set; the point is skipped.
        }
      }
    });
    ReductionRow row;
    row.rho = rhos[ri];
    row.points = points;
    for (size_t i = 0; i < pts.size(); ++i) {
      row.max_rel_diff = std::max(row.max_rel_diff, rel[i]);
      row.max_schur_slope = std::max(row.max_schur_slope, slope_I[i]);
      if (grad[i] >= 0) {
        ++row.grad_points;
        row.sup_grad = std::max(row.sup_grad, grad[i]);
      }
    }
    sup.push_back(row.sup_grad);
    out.rows.push_back(row);
  }
  out.grad_exponent = loglog_slope(rhos, sup);
  return out;
}

ResonanceStudy resonance_study(const ResonanceOptions& opt, std::uint64_t seed) {
  const LatticePair lat = standard_lattice(2);
  const TrigSymbol sym = axis_cosines(lat, opt.q);
  ResonanceStudy out;
  out.q = opt.q;

  // Direct sum over equivalence classes on whole fibers.
  {
    const RegionContext ctx = make_region_context(lat, desk_region_params(opt.coffee_rho));
    const RegionParams& p = ctx.p;
    auto rng = block_rng(seed, 1);
    const auto anchors = sample_resonant(ctx, opt.coffee_fibers, rng);
    out.coffee_rho = opt.coffee_rho;
    out.coffee_fibers = opt.coffee_fibers;
    const double gw = std::pow(p.rho, p.gamma);
    const double reach = p.M * p.R + 0.5;
    for (const auto& a : anchors) {
      const Vec k = fractional_part(a.xi, lat).k;
      const double r_hi = std::sqrt(p.rho * p.rho + gw) + reach;
      const double r_lo = std::sqrt(p.rho * p.rho - gw) - reach;
      std::vector<Vec> S;
      for (const auto& eta : enumerate_shifted_ball(lat, k, r_hi))
        if (eta.norm() >= r_lo && region_membership(eta, a.v, Level::xi, ctx)) S.push_back(eta);
      std::vector<std::vector<Vec>> classes;
      std::set<std::vector<int>> seen;
      for (const auto& eta : S) {
        if (!region_membership(eta, a.v, Level::xi2, ctx)) continue;
        const ResonanceBlock blk = resonance_block(eta, a.v, ctx, sym);
        const auto key = int_key(dual_coords(lat, blk.y_points.front() - k));
        if (seen.insert(key).second) classes.push_back(blk.y_points);
      }
      // The classes must partition the selected points.
      std::set<std::vector<int>> in_S, in_classes;
      for (const auto& eta : S) in_S.insert(int_key(dual_coords(lat, eta - k)));
      std::size_t total = 0;
      std::vector<double> merged;
      for (const auto& c : classes) {
        total += c.size();
        for (const auto& eta : c) in_classes.insert(int_key(dual_coords(lat, eta - k)));
        merged = merge_spectra(merged, hermitian_eigen(assemble_matrix(c, lat, sym, p.l), false).eigenvalues);
      }
      if (in_S != in_classes || total != in_classes.size()) out.coffee_partition_ok = false;
      out.coffee_classes += static_cast<int>(classes.size());
      const auto full = hermitian_eigen(assemble_matrix(S, lat, sym, p.l), false).eigenvalues;
      if (full.size() != merged.size()) {
        out.coffee_max_diff = std::numeric_limits<double>::infinity();
        continue;
      }
      for (size_t j = 0; j < full.size(); ++j)
        out.coffee_max_diff = std::max(out.coffee_max_diff, std::abs(full[j] - merged[j]) / std::max(1.0, std::abs(full[j])));
    }
  }

  // i(.) is constant along X(xi).
  {
    const RegionContext ctx = make_region_context(lat, desk_region_params(opt.coffee_rho));
    auto rng = block_rng(seed, 2);
    const auto pts = sample_resonant(ctx, opt.icon_samples, rng);
    std::vector<int> fail(pts.size(), 0);
    parallel_for(static_cast<int>(pts.size()), [&](int s) {
      const auto& a = pts[static_cast<size_t>(s)];
      const Interval X = x_interval(a.xi, a.v, ctx);
      const Projection pr = project_subspace(a.xi, ctx.table[static_cast<size_t>(a.v)].V);
      const double r0 = pr.perp.norm();
      const Vec dir = pr.perp / r0;
      const int i0 = g_res(a.xi, a.v, ctx, sym).rank;
      for (int i = 0; i < opt.icon_points; ++i) {
        const double t = X.lo + X.width() * (i + 0.5) / opt.icon_points;
        try {
          if (g_res(a.xi + (t - r0) * dir, a.v, ctx, sym).rank != i0) ++fail[static_cast<size_t>(s)];
        } catch (const NumericalError&) {
          ++fail[static_cast<size_t>(s)];
        }
      }
    });
    out.icon_samples = static_cast<int>(pts.size());
    out.icon_points = opt.icon_points;
    for (int f : fail) out.icon_failures += f;
  }

  // Growth of d nu_j / dt with rho.
  for (size_t ri = 0; ri < opt.nu_rhos.size(); ++ri) {
    const RegionContext ctx = make_region_context(lat, desk_region_params(opt.nu_rhos[ri]));
    auto rng = block_rng(seed, 100 + ri);
    const auto pts = sample_resonant(ctx, opt.nu_samples, rng);
    std::vector<double> m(pts.size(), 0.0);
    parallel_for(static_cast<int>(pts.size()), [&](int s) {
      const auto& a = pts[static_cast<size_t>(s)];
      const Interval X = x_interval(a.xi, a.v, ctx);
      const double r0 = project_subspace(a.xi, ctx.table[static_cast<size_t>(a.v)].V).perp.norm();
      const double dt = std::min(1e-4, 0.25 * std::min(r0 - X.lo, X.hi - r0));
      if (dt > 1e-9) m[static_cast<size_t>(s)] = nu_t_derivative(a.xi, a.v, ctx, sym, dt).max_abs;
    });
    out.nu_rho.push_back(opt.nu_rhos[ri]);
    out.nu_max.push_back(*std::max_element(m.begin(), m.end()));
  }
  if (out.nu_rho.size() >= 2) out.nu_exponent = loglog_slope(out.nu_rho, out.nu_max);
  {
    const RegionParams p = desk_region_params(100);
    out.nu_bound = 2 * p.l - 2 + p.qn(1) + 0.15;
  }

  // |g - g_tilde| against M at fixed rho; the sample set does not depend on M.
  {
    const RegionContext ctx1 = make_region_context(lat, desk_region_params(opt.sweep_rho));
    auto rng = block_rng(seed, 3);
    const auto pts = sample_resonant(ctx1, opt.sweep_samples, rng);
    out.sweep_rho = opt.sweep_rho;
    out.sweep_samples = static_cast<int>(pts.size());
    for (int M : opt.sweep_M) {
      const RegionContext ctx = make_region_context(lat, desk_region_params(opt.sweep_rho, M));
      std::vector<double> diff(pts.size(), 0.0);
      parallel_for(static_cast<int>(pts.size()), [&](int s) {
        const auto& a = pts[static_cast<size_t>(s)];
        diff[static_cast<size_t>(s)] = std::abs(g_difference_extended(a.xi, a.v, ctx, sym));
      });
      out.sweep_M.push_back(M);
      out.sweep_max_diff.push_back(*std::max_element(diff.begin(), diff.end()));
    }
  }
  return out;
}

VolumeStudy volume_study(const std::vector<double>& rhos, double delta, std::int64_t N, std::uint64_t seed) {
  if (rhos.size() < 2) throw ValidationError("volume study needs at least two radii");
  const LatticePair lat = standard_lattice(2);
  VolumeStudy out;
  out.delta = delta;
  out.samples = N;
  const EnergyFunction g0 = [](const Vec& x) { return x.squaredNorm(); };

  {
    const double rho = rhos[rhos.size() / 2];
    const RegionParams p = desk_region_params(rho);
    const double lam = rho * rho;
    out.annulus_rho = rho;
    out.annulus_exact = 2 * M_PI * delta;
    out.annulus = mc_volume([&](const Vec& x) { return in_layer_A(x, p) && std::abs(g0(x) - lam) <= delta; },
                            energy_domain(p, 2, 2 * delta), N, seed);
  }

  for (size_t ri = 0; ri < rhos.size(); ++ri) {
    const double rho = rhos[ri];
    const RegionContext ctx = make_region_context(lat, desk_region_params(rho));
    const double lam = rho * rho;
    const ShellDomain dom = energy_domain(ctx.p, 2, delta);
    const auto A = mc_volume([&](const Vec& x) { return in_layer_A(x, ctx.p) && std::abs(g0(x) - lam) <= delta; },
                             dom, N, seed + ri);
    const auto D = mc_volume(
        [&](const Vec& x) {
          return std::abs(g0(x) - lam) <= delta && classify_point(x, ctx).kind == RegionKind::resonance_D;
        },
        dom, N, seed + ri);
    out.ratio_rho.push_back(rho);
    out.ratio.push_back(A.estimate > 0 ? D.estimate / A.estimate : std::numeric_limits<double>::quiet_NaN());
  }

  out.shift = Vec(2);
  out.shift << 3.7, 1.3;
  for (size_t ri = 0; ri < rhos.size(); ++ri) {
    const RegionContext ctx = make_region_context(lat, desk_region_params(rhos[ri]));
    out.inter_rho.push_back(rhos[ri]);
    out.inter.push_back(mc_intersection_volume(out.shift, delta, ctx, g0, 0.0, N, seed + 1000 + ri));
  }
  std::vector<double> est;
  for (const auto& v : out.inter) est.push_back(v.estimate);
  out.inter_exponent = loglog_slope(out.inter_rho, est);
  out.inter_predicted = -4.0 + 2 + 1;
  return out;
}

CoverageStudy coverage_study(const std::vector<double>& rhos, double q, double c3, const std::vector<int>& grid,
                             double cutoff_factor) {
  const LatticePair lat = standard_lattice(2);
  IVec dir(2);
  dir << 1, 0;
  const TrigSymbol sym = cosine_symbol(lat, dir, q);
  CoverageStudy out;
  out.q = q;
  out.c3 = c3;
  out.cutoff_factor = cutoff_factor;
  out.grid = grid;
  std::vector<int> fine = grid;
  for (int& n : fine) n *= 2;
  for (double rho : rhos) {
    CoverageRow row;
    row.rho = rho;
    BandTable coarse, doubled;
    row.coarse = coverage_check(lat, sym, 1.0, rho, c3, grid, cutoff_factor * rho, true, &coarse);
    row.fine = coverage_check(lat, sym, 1.0, rho, c3, fine, cutoff_factor * rho, true, &doubled);
    row.endpoint_change = band_endpoint_change(coarse, doubled, row.coarse.target_lo, row.coarse.target_hi);
    for (const auto& b : coarse.bands) row.refined_bands += b.refined ? 1 : 0;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace floquet
