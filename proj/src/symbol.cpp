#include "floquet/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace floquet {

namespace {

bool coords_equal(const IVec& a, const IVec& b) { return a.size() == b.size() && (a - b).cwiseAbs().sum() == 0; }

void finalize(TrigSymbol& sym, const LatticePair& lat) {
  const double s = 1.0 / std::sqrt(lat.vol_gamma);
  double sum = 0.0;
  for (const auto& m : sym.modes) {
    if (!(m.theta.norm() < sym.cutoff_R)) throw ValidationError("symbol mode violates |theta| < R");
    if (!sym.find(-m.coords)) throw ValidationError("symbol modes must be closed under negation");
    sum += m.sup_ratio;
  }
  sym.bound_c = s * sum;
  sym.norm_L = s * sum * std::pow(2.5, std::abs(sym.alpha));
}

}  // namespace

const SymbolMode* TrigSymbol::find(const IVec& coords) const {
  for (const auto& m : modes)
    if (coords_equal(m.coords, coords)) return &m;
  return nullptr;
}

TrigSymbol make_symbol(const LatticePair& lat, std::vector<SymbolMode> modes, double alpha, double R) {
  TrigSymbol sym;
  sym.alpha = alpha;
  double rmax = 0.0;
  for (auto& m : modes) {
    m.theta = lat.dual_basis * m.coords.cast<double>();
    rmax = std::max(rmax, m.theta.norm());
  }
  sym.cutoff_R = R > 0 ? R : rmax + 0.1;
  sym.modes = std::move(modes);
  finalize(sym, lat);
  return sym;
}

TrigSymbol make_symbol(const LatticePair& lat, const std::vector<ModeSpec>& specs, double alpha, double R) {
  std::vector<SymbolMode> modes;
  for (const auto& spec : specs) {
    if (spec.theta.size() != lat.dim) throw ValidationError("symbol mode dimension mismatch");
    for (const auto& m : modes)
      if (coords_equal(m.coords, spec.theta)) throw ValidationError("duplicate symbol mode");
    SymbolMode m;
    m.coords = spec.theta;
    const cplx z = spec.z;
    if (alpha == 0.0)
      m.profile = [z](const Vec&) { return z; };
    else
      m.profile = [z, alpha](const Vec& xi) { return z * std::pow(japanese(xi), alpha); };
    m.sup_ratio = std::abs(z);
    modes.push_back(std::move(m));
  }
  return make_symbol(lat, std::move(modes), alpha, R);
}

TrigSymbol zero_symbol(const LatticePair& lat) { return make_symbol(lat, std::vector<ModeSpec>{}, 0.0, 1.0); }

TrigSymbol cosine_symbol(const LatticePair& lat, const IVec& direction, double q, double alpha, double R) {
  // 2 q cos(theta . x) = sqrt(d(Gamma)) q (e_theta + e_{-theta})
  const cplx z = q * std::sqrt(lat.vol_gamma);
  return make_symbol(lat, {{direction, z}, {IVec(-direction), z}}, alpha, R);
}

cplx eval_symbol(const TrigSymbol& sym, const LatticePair& lat, const Vec& x, const Vec& xi) {
  cplx sum = 0.0;
  for (const auto& m : sym.modes) sum += m.profile(xi) * std::exp(cplx(0.0, m.theta.dot(x)));
  return sum / std::sqrt(lat.vol_gamma);
}

cplx fiber_entry_coords(const TrigSymbol& sym, const LatticePair& lat, const IVec& diff, const Vec& eta, const Vec& xi) {
  const SymbolMode* fwd = sym.find(diff);
  if (!fwd) return 0.0;
  const SymbolMode* bwd = sym.find(-diff);
  const double s = 1.0 / std::sqrt(lat.vol_gamma);
  const cplx a = s * fwd->profile(xi);
  const cplx b = bwd ? std::conj(s * bwd->profile(eta)) : cplx(0.0);
  return 0.5 * (a + b);
}

cplx fiber_entry(const TrigSymbol& sym, const LatticePair& lat, const Vec& eta, const Vec& xi) {
  const Vec c = lat.dual_inverse * (eta - xi);
  IVec diff(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double r = std::round(c[i]);
    if (std::abs(c[i] - r) > 1e-9) throw ValidationError("quasimomentum mismatch in fiber_entry");
    diff[i] = static_cast<int>(r);
  }
  if ((eta - xi).norm() >= sym.cutoff_R) return 0.0;
  return fiber_entry_coords(sym, lat, diff, eta, xi);
}

SymbolBounds verify_symbol_bounds(const TrigSymbol& sym, const LatticePair& lat, const std::vector<Vec>& grid) {
  if (grid.empty()) throw ValidationError("verification grid is empty");
  const int d = lat.dim;
  std::vector<Vec> xs;
  int total = 1;
  for (int i = 0; i < d; ++i) total *= 8;
  for (int idx = 0; idx < total; ++idx) {
    Vec frac(d);
    int t = idx;
    for (int i = 0; i < d; ++i) {
      frac[i] = (t % 8) / 8.0;
      t /= 8;
    }
    xs.push_back(lat.basis * frac);
  }
  SymbolBounds out;
  for (const Vec& xi : grid) {
    const double w = japanese(xi);
    const double h = 1e-4 * w;
    for (const Vec& x : xs) {
      out.c_emp = std::max(out.c_emp, std::abs(eval_symbol(sym, lat, x, xi)) / std::pow(w, sym.alpha));
      double g2 = 0.0;
      for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = h;
        const cplx der = (eval_symbol(sym, lat, x, xi + e) - eval_symbol(sym, lat, x, xi - e)) / (2 * h);
        g2 += std::norm(der);
      }
      out.c_grad_emp = std::max(out.c_grad_emp, std::sqrt(g2) / std::pow(w, sym.alpha - 1));
    }
  }
  return out;
}

}  // namespace floquet
