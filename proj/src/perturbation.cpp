#include "floquet/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace floquet {

namespace {

constexpr double kRoundoff = 8.0 * std::numeric_limits<double>::epsilon();

CMat submatrix(const CMat& m, const IndexSet& rows, const IndexSet& cols) {
  CMat out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < rows.size(); ++i)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
  return out;
}

bool block_is_zero(const CMat& m, const IndexSet& rows, const IndexSet& cols) {
  for (int j : cols)
    for (int i : rows)
      if (std::abs(m(i, j)) > 0.0) return false;
  return true;
}

double dist_to_values(double mu, const Vec& h0, const IndexSet& idx) {
  double d = std::numeric_limits<double>::infinity();
  for (int i : idx) d = std::min(d, std::abs(h0[i] - mu));
  return d;
}

double dist_to_interval(double v, double lo, double hi) {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

double dist_set_to_interval(const Vec& h0, const IndexSet& idx, double lo, double hi) {
  double d = std::numeric_limits<double>::infinity();
  for (int i : idx) d = std::min(d, dist_to_interval(h0[i], lo, hi));
  return d;
}

void check_partition(const std::vector<IndexSet>& blocks, int n) {
  std::vector<int> seen(static_cast<size_t>(n), 0);
  for (const auto& b : blocks)
    for (int i : b) {
      if (i < 0 || i >= n || seen[static_cast<size_t>(i)]++) throw ValidationError("lemma hypotheses unmet: index sets overlap");
    }
  for (int s : seen)
    if (!s) throw ValidationError("lemma hypotheses unmet: index sets do not cover the space");
}

CMat random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMat m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      const cplx v = i == j ? cplx(g(rng), 0.0) : cplx(g(rng), g(rng));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  return m;
}

std::vector<int> label_blocks(const std::vector<IndexSet>& blocks, int n) {
  std::vector<int> label(static_cast<size_t>(n), -1);
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int i : blocks[b]) label[static_cast<size_t>(i)] = static_cast<int>(b);
  return label;
}

IndexSet consecutive(int& next, int count) {
  IndexSet s;
  for (int i = 0; i < count; ++i) s.push_back(next++);
  return s;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()[0];
}

double chain_bound(double a, const std::vector<double>& gaps) {
  const double n = static_cast<double>(gaps.size());
  double v = std::pow(2.0, 2 * n) * std::pow(a, 2 * n + 1);
  for (double g : gaps) v /= (g - 2 * a) * (g - 2 * a);
  return v;
}

ChainCheck check_chain_lemma(const BlockInstance& inst, int level) {
  const int dim = static_cast<int>(inst.h0_diag.size());
  const int n = static_cast<int>(inst.projections.size()) - 1;
  if (n < 0) throw ValidationError("lemma hypotheses unmet: no projections");
  check_partition(inst.projections, dim);
  if (level < 1 || level > dim) throw ValidationError("lemma hypotheses unmet: eigenvalue index out of range");
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (std::abs(i - j) > 1 && !block_is_zero(inst.a_matrix, inst.projections[static_cast<size_t>(i)],
                                                 inst.projections[static_cast<size_t>(j)]))
        throw ValidationError("lemma hypotheses unmet: P_i A P_j != 0 for |i-j| > 1");
  for (int i = 0; i < n; ++i) {
    IndexSet all(static_cast<size_t>(dim));
    for (int t = 0; t < dim; ++t) all[static_cast<size_t>(t)] = t;
    if (!block_is_zero(inst.b_matrix, inst.projections[static_cast<size_t>(i)], all))
      throw ValidationError("lemma hypotheses unmet: B != P_n B");
  }
  const CMat h0 = inst.h0_diag.cast<cplx>().asDiagonal();
  const CMat h = h0 + inst.a_matrix;
  const auto mu = hermitian_eigenvalues(h);
  const auto mu_hat = hermitian_eigenvalues(h + inst.b_matrix);
  const double a = spectral_norm(inst.a_matrix) + spectral_norm(inst.b_matrix);
  const double mu_l = mu[static_cast<size_t>(level - 1)];
  std::vector<double> gaps;
  for (int j = 1; j <= n; ++j) {
    const double aj = dist_to_values(mu_l, inst.h0_diag, inst.projections[static_cast<size_t>(j)]);
    if (!(aj > 4 * a)) throw ValidationError("lemma hypotheses unmet: a_j > 4a fails for j = " + std::to_string(j));
    gaps.push_back(aj);
  }
  ChainCheck out;
  out.actual = std::abs(mu_hat[static_cast<size_t>(level - 1)] - mu_l);
  out.bound = chain_bound(a, gaps);
  const double scale = std::max(std::abs(mu.front()), std::abs(mu.back())) + a;
  out.pass = out.actual <= out.bound + kRoundoff * scale;
  return out;
}

ClusterReport check_cluster_lemma(const ClusterInstance& inst) {
  const int dim = static_cast<int>(inst.h0_diag.size());
  std::vector<IndexSet> all_blocks;
  IndexSet p_all;
  for (const auto& c : inst.clusters)
    for (const auto& s : c) {
      all_blocks.push_back(s);
      p_all.insert(p_all.end(), s.begin(), s.end());
    }
  all_blocks.push_back(inst.q_set);
  check_partition(all_blocks, dim);
  std::sort(p_all.begin(), p_all.end());
  const CMat& A = inst.a_matrix;
  const double b = spectral_norm(A);
  const double lo = inst.lambda1, hi = inst.lambda2;
  // Block pattern hypotheses.
  for (size_t m = 0; m < inst.clusters.size(); ++m) {
    const auto& cm = inst.clusters[m];
    const int jm = static_cast<int>(cm.size()) - 1;
    for (size_t m2 = 0; m2 < inst.clusters.size(); ++m2) {
      if (m2 == m) continue;
      for (const auto& s : cm)
        for (const auto& t : inst.clusters[m2])
          if (!block_is_zero(A, s, t)) throw ValidationError("lemma hypotheses unmet: P^m A P^n != 0");
    }
    for (int j = 0; j <= jm; ++j) {
      for (int t = 0; t <= jm; ++t)
        if (std::abs(j - t) > 1 && !block_is_zero(A, cm[static_cast<size_t>(j)], cm[static_cast<size_t>(t)]))
          throw ValidationError("lemma hypotheses unmet: P_j^m A P_l^m != 0 for |j-l| > 1");
      if (j < jm && !block_is_zero(A, cm[static_cast<size_t>(j)], inst.q_set))
        throw ValidationError("lemma hypotheses unmet: P_j^m A Q != 0 for j < j_m");
    }
  }
  if (!(dist_set_to_interval(inst.h0_diag, inst.q_set, lo, hi) > 6 * b))
    throw ValidationError("lemma hypotheses unmet: dist(spectrum of QH0Q, J) > 6b fails");
  double bound = 0.0;
  for (const auto& cm : inst.clusters) {
    const int jm = static_cast<int>(cm.size()) - 1;
    double term = std::pow(6 * b, 2 * jm + 1);
    for (int j = 1; j <= jm; ++j) {
      const double aj = dist_set_to_interval(inst.h0_diag, cm[static_cast<size_t>(j)], lo, hi);
      if (!(aj > 16 * b)) throw ValidationError("lemma hypotheses unmet: a_j^m > 16b fails");
      term /= (aj - 6 * b) * (aj - 6 * b);
    }
    bound = std::max(bound, term);
  }

  const CMat h0 = inst.h0_diag.cast<cplx>().asDiagonal();
  const CMat H = h0 + A;
  CMat Ht = CMat::Zero(dim, dim);
  for (const auto& cm : inst.clusters) {
    IndexSet idx;
    for (const auto& s : cm) idx.insert(idx.end(), s.begin(), s.end());
    for (int j : idx)
      for (int i : idx) Ht(i, j) = H(i, j);
  }
  for (int i : inst.q_set) Ht(i, i) = h0(i, i);
  const auto mu = hermitian_eigenvalues(H);
  const auto mut = hermitian_eigenvalues(Ht);
  const auto sigma = hermitian_eigenvalues(submatrix(H, p_all, p_all));
  const double scale = std::max(std::abs(mu.front()), std::abs(mu.back())) + b;
  const double slack = kRoundoff * scale;

  ClusterReport r;
  r.b = b;
  r.pairing_bound = bound;
  r.tilde_in_cluster_spectrum = true;
  r.exclusion_ok = true;
  for (int i = 0; i < dim; ++i) {
    const double m = mu[static_cast<size_t>(i)], mt = mut[static_cast<size_t>(i)];
    if (m >= lo && m <= hi) {
      r.pairing_error = std::max(r.pairing_error, std::abs(mt - m));
      double best = std::numeric_limits<double>::infinity();
      for (double s : sigma) best = std::min(best, std::abs(s - mt));
      if (best > 1e-9 * (1 + std::abs(mt))) r.tilde_in_cluster_spectrum = false;
    } else if (mt >= lo + 2 * b && mt <= hi - 2 * b) {
      r.exclusion_ok = false;
    }
  }
  r.pairing_ok = r.pairing_error <= bound + slack;
  for (int i : inst.q_set)
    if (inst.h0_diag[i] < lo) ++r.shift_l;
  for (size_t j = 0; j < sigma.size(); ++j) {
    const double s = sigma[j];
    if (s < lo + 2 * b || s > hi - 2 * b) continue;
    const size_t target = j + static_cast<size_t>(r.shift_l);
    const double err = target < mu.size() ? std::abs(mu[target] - s) : std::numeric_limits<double>::infinity();
    r.shift_error = std::max(r.shift_error, err);
  }
  r.shift_ok = r.shift_error <= bound + slack;
  r.pass = r.pairing_ok && r.tilde_in_cluster_spectrum && r.exclusion_ok && r.shift_ok;
  return r;
}

RelativeReport check_relative_proposition(const RelativeInstance& inst) {
  const int dim = static_cast<int>(inst.h0_diag.size());
  const int N = static_cast<int>(inst.projections.size()) - 1;
  std::vector<IndexSet> blocks = inst.projections;
  blocks.push_back(inst.q_set);
  check_partition(blocks, dim);
  const CMat& A = inst.a_matrix;
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j)
      if (std::abs(i - j) > 1 && !block_is_zero(A, inst.projections[static_cast<size_t>(i)], inst.projections[static_cast<size_t>(j)]))
        throw ValidationError("proposition hypotheses unmet: P_i A P_j != 0 for |i-j| > 1");
    if (i < N && !block_is_zero(A, inst.projections[static_cast<size_t>(i)], inst.q_set))
      throw ValidationError("proposition hypotheses unmet: P_i A Q != 0 for i < N");
  }
  IndexSet p_all, all;
  for (const auto& p : inst.projections) p_all.insert(p_all.end(), p.begin(), p.end());
  std::sort(p_all.begin(), p_all.end());
  for (int i = 0; i < dim; ++i) all.push_back(i);
  const double b = spectral_norm(submatrix(A, all, p_all));
  const double eps = inst.epsilon;
  const CMat h0 = inst.h0_diag.cast<cplx>().asDiagonal();
  // Form bound |<Au,u>| <= eps <H0 u,u> + k_eps |u|^2.
  const auto up = hermitian_eigenvalues(A - eps * h0);
  const auto dn = hermitian_eigenvalues(-A - eps * h0);
  if (std::max(up.back(), dn.back()) > inst.k_epsilon * (1 + 1e-12))
    throw ValidationError("proposition hypotheses unmet: form bound with k_epsilon fails");
  const double lo = inst.lambda1, hi = inst.lambda2;
  const double D1 = (4 * b + 2 * (eps * hi + inst.k_epsilon)) / (1 - eps);
  const double D2 = 20 * b;
  if (!(dist_set_to_interval(inst.h0_diag, inst.q_set, lo, hi) >= D1))
    throw ValidationError("proposition hypotheses unmet: dist(spectrum of QH0Q, J) >= D1 fails");
  for (int j = 1; j <= N; ++j)
    if (!(dist_set_to_interval(inst.h0_diag, inst.projections[static_cast<size_t>(j)], lo, hi) >= D2))
      throw ValidationError("proposition hypotheses unmet: dist(spectrum of P_j H0 P_j, J) >= D2 fails");

  const CMat H = h0 + A;
  CMat Ht = CMat::Zero(dim, dim);
  for (int j : p_all)
    for (int i : p_all) Ht(i, j) = H(i, j);
  for (int j : inst.q_set)
    for (int i : inst.q_set) Ht(i, j) = H(i, j);
  const auto mu = hermitian_eigenvalues(H);
  const auto mut = hermitian_eigenvalues(Ht);
  const auto sigma_p = hermitian_eigenvalues(submatrix(H, p_all, p_all));
  RelativeReport r;
  r.b = b;
  r.bound = 3 * b / std::pow(4.0, N);
  r.in_p_spectrum = true;
  const double slack = kRoundoff * (std::max(std::abs(mu.front()), std::abs(mu.back())) + b);
  for (int i = 0; i < dim; ++i) {
    const double m = mu[static_cast<size_t>(i)];
    if (m < lo || m > hi) continue;
    ++r.eigenvalues_in_window;
    const double mt = mut[static_cast<size_t>(i)];
    r.max_error = std::max(r.max_error, std::abs(m - mt));
    double best = std::numeric_limits<double>::infinity();
    for (double s : sigma_p) best = std::min(best, std::abs(s - mt));
    if (best > 1e-9 * (1 + std::abs(mt))) r.in_p_spectrum = false;
  }
  r.pass = r.max_error < r.bound + slack && r.in_p_spectrum;
  return r;
}

BlockInstance random_chain_instance(std::mt19937_64& rng, int* level) {
  const int n = uniform_int(rng, 1, 3);
  int next = 0;
  BlockInstance inst;
  for (int j = 0; j <= n; ++j) inst.projections.push_back(consecutive(next, uniform_int(rng, 1, 3)));
  const int dim = next;
  const auto label = label_blocks(inst.projections, dim);
  CMat a = random_hermitian(rng, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i)
      if (std::abs(label[static_cast<size_t>(i)] - label[static_cast<size_t>(j)]) > 1) a(i, j) = 0.0;
  a *= uniform(rng, 0.02, 1.0) / spectral_norm(a);
  CMat bm = CMat::Zero(dim, dim);
  if (uniform(rng, 0, 1) > 0.1) {
    const auto& pn = inst.projections.back();
    const CMat blk = random_hermitian(rng, static_cast<int>(pn.size()));
    const double s = uniform(rng, 0.0, 1.0) / spectral_norm(blk);
    for (size_t j = 0; j < pn.size(); ++j)
      for (size_t i = 0; i < pn.size(); ++i)
        bm(pn[i], pn[j]) = s * blk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  inst.a_matrix = a;
  inst.b_matrix = bm;
  const double total = spectral_norm(a) + spectral_norm(bm);
  inst.h0_diag.resize(dim);
  int below = 0;
  for (int i : inst.projections[0]) inst.h0_diag[i] = uniform(rng, -1.0, 1.0);
  for (int j = 1; j <= n; ++j)
    for (int i : inst.projections[static_cast<size_t>(j)]) {
      // Weyl keeps mu_l within ||A|| of [-1, 1].
      const double off = 1.0 + total + 4 * total * uniform(rng, 1.05, 3.0) + uniform(rng, 0.0, 2.0 * j);
      const bool neg = uniform(rng, 0, 1) < 0.5;
      inst.h0_diag[i] = neg ? -off : off;
      if (neg) ++below;
    }
  inst.lambda1 = -1.0 - total;
  inst.lambda2 = 1.0 + total;
  *level = below + uniform_int(rng, 1, static_cast<int>(inst.projections[0].size()));
  return inst;
}

ClusterInstance random_cluster_instance(std::mt19937_64& rng, int q_below) {
  ClusterInstance inst;
  const int clusters = uniform_int(rng, 1, 3);
  int next = 0;
  for (int m = 0; m < clusters; ++m) {
    const int jm = uniform_int(rng, 0, 3);
    std::vector<IndexSet> shells;
    for (int j = 0; j <= jm; ++j) shells.push_back(consecutive(next, uniform_int(rng, 1, 2)));
    inst.clusters.push_back(shells);
  }
  const int nq_below = q_below >= 0 ? q_below : uniform_int(rng, 0, 3);
  const int nq_above = uniform_int(rng, q_below >= 0 ? 0 : (nq_below == 0 ? 1 : 0), 3);
  inst.q_set = consecutive(next, nq_below + nq_above);
  const int dim = next;
  // Allowed coupling pattern: neighbouring shells of one cluster, outer shell with Q, Q with Q.
  std::vector<int> cluster_of(static_cast<size_t>(dim), -1), shell_of(static_cast<size_t>(dim), -1);
  std::vector<int> outer(static_cast<size_t>(dim), 0);
  for (int m = 0; m < clusters; ++m) {
    const auto& cm = inst.clusters[static_cast<size_t>(m)];
    for (size_t j = 0; j < cm.size(); ++j)
      for (int i : cm[j]) {
        cluster_of[static_cast<size_t>(i)] = m;
        shell_of[static_cast<size_t>(i)] = static_cast<int>(j);
        outer[static_cast<size_t>(i)] = j + 1 == cm.size();
      }
  }
  CMat a = random_hermitian(rng, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      const int ci = cluster_of[static_cast<size_t>(i)], cj = cluster_of[static_cast<size_t>(j)];
      bool keep;
      if (ci < 0 && cj < 0)
        keep = true;
      else if (ci < 0 || cj < 0)
        keep = outer[static_cast<size_t>(ci < 0 ? j : i)];
      else
        keep = ci == cj && std::abs(shell_of[static_cast<size_t>(i)] - shell_of[static_cast<size_t>(j)]) <= 1;
      if (!keep) a(i, j) = 0.0;
    }
  a *= uniform(rng, 0.005, 0.2) / spectral_norm(a);
  inst.a_matrix = a;
  const double b = spectral_norm(a);
  const double w = uniform(rng, 0.5, 2.0);
  inst.lambda1 = -w;
  inst.lambda2 = w;
  inst.h0_diag.resize(dim);
  for (const auto& cm : inst.clusters)
    for (size_t j = 0; j < cm.size(); ++j)
      for (int i : cm[j]) {
        if (j == 0) {
          inst.h0_diag[i] = uniform(rng, -w / 2, w / 2);
        } else {
          const double off = w + 16 * b * uniform(rng, 1.05, 2.5) + static_cast<double>(j - 1) * uniform(rng, 0.0, 5.0) * b;
          inst.h0_diag[i] = uniform(rng, 0, 1) < 0.5 ? -off : off;
        }
      }
  for (int t = 0; t < nq_below + nq_above; ++t) {
    const double off = w + 6 * b * uniform(rng, 1.05, 3.0) + uniform(rng, 0.0, 5.0);
    inst.h0_diag[inst.q_set[static_cast<size_t>(t)]] = t < nq_below ? -off : off;
  }
  return inst;
}

RelativeInstance random_relative_instance(std::mt19937_64& rng) {
  RelativeInstance inst;
  const int N = uniform_int(rng, 1, 3);
  int next = 0;
  for (int j = 0; j <= N; ++j) inst.projections.push_back(consecutive(next, uniform_int(rng, 1, 3)));
  inst.q_set = consecutive(next, uniform_int(rng, 2, 6));
  const int dim = next;
  const auto label = label_blocks(inst.projections, dim);  // -1 on Q
  auto block = [&](int i) { return label[static_cast<size_t>(i)] < 0 ? N + 1 : label[static_cast<size_t>(i)]; };
  CMat off = random_hermitian(rng, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      const int bi = block(i), bj = block(j);
      const bool qq = bi == N + 1 && bj == N + 1;
      if (qq || std::abs(bi - bj) > 1) off(i, j) = 0.0;
    }
  off *= uniform(rng, 0.05, 1.0) / spectral_norm(off);
  const double alpha = uniform(rng, 0.0, 0.9);
  const double eps = 0.1;
  inst.epsilon = eps;
  inst.k_epsilon = std::pow(eps, -alpha / (2.0 - alpha)) + spectral_norm(off);

  IndexSet all, p_all;
  for (int i = 0; i < dim; ++i) all.push_back(i);
  for (const auto& p : inst.projections) p_all.insert(p_all.end(), p.begin(), p.end());
  const double b = spectral_norm(submatrix(off, all, p_all));
  const double e0 = uniform(rng, 20.0, 200.0);
  const double w = uniform(rng, 0.5, 3.0);
  inst.lambda1 = e0 - w;
  inst.lambda2 = e0 + w;
  inst.h0_diag.resize(dim);
  for (int j = 0; j <= N; ++j)
    for (int i : inst.projections[static_cast<size_t>(j)]) {
      if (j == 0) {
        inst.h0_diag[i] = uniform(rng, e0 - w / 2, e0 + w / 2);
        continue;
      }
      const double offset = w + 20 * b * uniform(rng, 1.05, 2.5) + (j - 1) * uniform(rng, 0.0, 3.0);
      const bool low = uniform(rng, 0, 1) < 0.5 && e0 - offset > 0;
      inst.h0_diag[i] = low ? e0 - offset : e0 + offset;
    }
  const double D1 = (4 * b + 2 * (eps * inst.lambda2 + inst.k_epsilon)) / (1 - eps);
  for (int i : inst.q_set) {
    const double lo_top = inst.lambda1 - 1.05 * D1;
    const bool low = lo_top > 0 && uniform(rng, 0, 1) < 0.5;
    inst.h0_diag[i] = low ? uniform(rng, 0.0, lo_top) : inst.lambda2 + 1.05 * D1 + uniform(rng, 0.0, 50.0);
  }
  // Relatively bounded diagonal part on Q: |a_ii| <= h_ii^{alpha/2} <= eps h_ii + eps^{-alpha/(2-alpha)}.
  CMat a = off;
  for (int i : inst.q_set) a(i, i) += uniform(rng, -1.0, 1.0) * std::pow(inst.h0_diag[i], alpha / 2.0);
  inst.a_matrix = a;
  return inst;
}

double shell_truncation_compare(const Vec& k, const LatticePair& lat, const TrigSymbol& sym, double l, double rho,
                                double cutoff_full, double L) {
  if (cutoff_full < 2 * rho * (1 - 1e-12)) throw ValidationError("shell truncation requires cutoff >= 2 rho");
  FiberOperator full = assemble_fiber(k, lat, sym, l, cutoff_full);
  IndexSet shell, rest;
  for (int i = 0; i < full.size(); ++i)
    (std::abs(full.basis_points[static_cast<size_t>(i)].norm() - rho) < rho / 2 ? shell : rest).push_back(i);
  std::vector<double> blocks;
  if (!shell.empty()) blocks = hermitian_eigenvalues(submatrix(full.matrix, shell, shell));
  if (!rest.empty()) blocks = merge_spectra(blocks, hermitian_eigenvalues(submatrix(full.matrix, rest, rest)));
  const auto mu = hermitian_eigenvalues(full.matrix);
  const double centre = std::pow(rho, 2 * l);
  if (L < 0) L = sym.norm_L > 0 ? sym.norm_L : 1.0;
  const double half = 100 * L * std::pow(rho, sym.alpha);
  double dev = -1.0;
  for (size_t i = 0; i < mu.size(); ++i)
    if (std::abs(mu[i] - centre) <= half) dev = std::max(dev, std::abs(mu[i] - blocks[i]));
  if (dev < 0) throw NumericalError("empty window in shell truncation");
  return dev;
}

}  // namespace floquet
