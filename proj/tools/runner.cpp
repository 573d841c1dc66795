#include "runner.hpp"

#include <cmath>
#include <iostream>
#include <utility>

#include "CLI11.hpp"
#include "floquet/asymptotics.hpp"
#include "floquet/bands.hpp"
#include "floquet/parallel.hpp"
#include "floquet/studies.hpp"
#include "report.hpp"

namespace floquet::cli {

using nlohmann::json;

const std::vector<std::string> kSuites = {"oracle",      "perturbation", "shell",   "geometry",
                                          "asymptotics", "resonance",    "volumes", "coverage"};

namespace {

constexpr std::int64_t kBlock = 8192;

// The resonance blocks assume the layer A sits inside the rho^gamma energy shell.
void require_layer_in_shell(const RegionParams& p) {
  if (!(100 * p.L * std::pow(p.rho, p.alpha) < std::pow(p.rho, p.gamma)))
    throw ValidationError("rho too small: 100 L rho^alpha < rho^gamma violated");
}

std::vector<std::string> coord_header(const std::string& prefix, int d) {
  std::vector<std::string> h;
  for (int i = 1; i <= d; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json envelope(const RunConfig& cfg, const std::string& command, json results) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config_echo"] = config_echo(cfg);
  j["seed"] = cfg.seed;
  j["results"] = std::move(results);
  return j;
}

json estimate_json(const VolumeEstimate& v) {
  return {{"estimate", v.estimate}, {"ci95", v.ci95}, {"samples", v.samples}, {"hits", v.hits}};
}

std::string cmd_bands(RunConfig& cfg, std::string* summary) {
  const LatticePair lat = make_lattice(cfg);
  const TrigSymbol sym = make_symbol(cfg, lat);
  const double cutoff = resolved_cutoff(cfg.bands.cutoff, cfg.region.rho);
  const BandTable bt = scan_bands(lat, sym, cfg.l, cutoff, cfg.bands.grid, true);
  const int d = lat.dim;
  *summary = std::to_string(bt.k_grid.size()) + " k-points, " + std::to_string(bt.bands.size()) + " bands";
  if (cfg.format == "json") {
    json pts = json::array();
    for (size_t i = 0; i < bt.k_grid.size(); ++i)
      pts.push_back({{"k", to_std(bt.k_grid[i].k)}, {"lambda", bt.eigenvalues[i]}});
    json bands = json::array();
    for (const auto& b : bt.bands) bands.push_back({{"j", b.j}, {"a", b.a}, {"b", b.b}});
    return dump_json(envelope(cfg, "bands",
                              {{"cutoff", cutoff}, {"reliable_max", bt.reliable_max}, {"endpoint_error", bt.endpoint_error},
                               {"points", pts}, {"bands", bands}}));
  }
  auto header = coord_header("k_", d);
  header.push_back("j");
  header.push_back("lambda");
  CsvTable t(header);
  for (size_t i = 0; i < bt.k_grid.size(); ++i)
    for (size_t j = 0; j < bt.eigenvalues[i].size(); ++j) {
      for (int a = 0; a < d; ++a) t.add(bt.k_grid[i].k(a));
      t.add(static_cast<long long>(j + 1)).add(bt.eigenvalues[i][j]);
      t.end_row();
    }
  return t.str();
}

std::string cmd_gaps(RunConfig& cfg, std::string* summary) {
  const LatticePair lat = make_lattice(cfg);
  const TrigSymbol sym = make_symbol(cfg, lat);
  const double rho = cfg.region.rho;
  const double cutoff = resolved_cutoff(cfg.bands.cutoff, rho);
  BandTable bt = scan_bands(lat, sym, cfg.l, cutoff, cfg.bands.grid);
  const double E = std::pow(rho, 2 * cfg.l);
  const double delta = coverage_delta(lat.dim, cfg.l, rho, cfg.bands.c3);
  if (cfg.bands.refine) refine_band_edges(bt, lat, sym, E - delta, E + delta);
  const Coverage c = coverage_from_table(bt, lat.dim, rho, cfg.bands.c3);
  double lo = 0.5 * E, hi = std::min(1.5 * E, bt.reliable_max);
  if (cfg.bands.window) std::tie(lo, hi) = *cfg.bands.window;
  const auto gaps = detect_gaps(bt, lo, hi);
  *summary = std::to_string(gaps.size()) + " gaps in [" + format_double(lo) + ", " + format_double(hi) + "], target " +
             (c.covered ? "covered" : "not covered");
  if (cfg.format == "csv") {
    CsvTable t({"lo", "hi", "width"});
    for (const auto& g : gaps) {
      t.add(g.lo).add(g.hi).add(g.width());
      t.end_row();
    }
    return t.str();
  }
  json gj = json::array();
  for (const auto& g : gaps) gj.push_back({{"lo", g.lo}, {"hi", g.hi}, {"width", g.width()}});
  json cov = {{"rho", c.rho},           {"c3", c.c3},       {"delta", c.delta},
              {"target_lo", c.target_lo}, {"target_hi", c.target_hi}, {"covered", c.covered},
              {"margin", c.margin},     {"band", c.band},   {"union_margin", c.union_margin}};
  return dump_json(envelope(cfg, "gaps",
                            {{"window", {{"lo", lo}, {"hi", hi}}},
                             {"cutoff", cutoff},
                             {"endpoint_error", bt.endpoint_error},
                             {"gaps", gj},
                             {"coverage", cov}}));
}

std::string cmd_regions(RunConfig& cfg, std::string* summary) {
  const LatticePair lat = make_lattice(cfg);
  const RegionContext ctx = make_region_context(lat, cfg.region);
  const ShellDomain dom = layer_domain(ctx.p, lat.dim);
  const std::int64_t N = cfg.samples;
  const double weight = dom.volume() / static_cast<double>(N);
  const std::int64_t blocks = (N + kBlock - 1) / kBlock;
  struct Row {
    Vec x;
    RegionLabel lab;
  };
  std::vector<std::vector<Row>> rows(static_cast<size_t>(blocks));
  parallel_for(static_cast<int>(blocks), [&](int b) {
    auto rng = block_rng(cfg.seed, static_cast<std::uint64_t>(b));
    const std::int64_t count = std::min(kBlock, N - b * kBlock);
    for (std::int64_t i = 0; i < count; ++i) {
      const Vec x = dom.sample(rng);
      rows[static_cast<size_t>(b)].push_back({x, classify_point(x, ctx)});
    }
  });
  std::int64_t counts[3] = {0, 0, 0};
  for (const auto& blk : rows)
    for (const auto& r : blk) ++counts[static_cast<int>(r.lab.kind)];
  *summary = std::to_string(N) + " samples: " + std::to_string(counts[1]) + " non-resonance, " +
             std::to_string(counts[2]) + " resonance, " + std::to_string(counts[0]) + " outside";
  if (cfg.format == "json") {
    json table = json::array();
    for (size_t v = 0; v < ctx.table.size(); ++v) {
      json gens = json::array();
      const auto& V = ctx.table[v].V;
      for (Eigen::Index c = 0; c < V.lattice_basis.cols(); ++c) gens.push_back(to_std(V.lattice_basis.col(c)));
      table.push_back({{"index", v}, {"n", ctx.table[v].n}, {"basis", gens}});
    }
    json res = {{"samples", N},
                {"domain_volume", dom.volume()},
                {"counts", {{"outside_A", counts[0]}, {"non_resonance_B", counts[1]}, {"resonance_D", counts[2]}}},
                {"subspaces", table}};
    return dump_json(envelope(cfg, "regions", res));
  }
  auto header = coord_header("x_", lat.dim);
  for (const char* h : {"kind", "n", "subspace", "volume_weight"}) header.push_back(h);
  CsvTable t(header);
  for (const auto& blk : rows)
    for (const auto& r : blk) {
      for (int a = 0; a < lat.dim; ++a) t.add(r.x(a));
      t.add(std::string(kind_name(r.lab.kind)));
      t.add(static_cast<long long>(r.lab.level_n.value_or(-1)));
      t.add(static_cast<long long>(r.lab.subspace_index));
      t.add(weight);
      t.end_row();
    }
  return t.str();
}

std::string cmd_volumes(RunConfig& cfg, std::string* summary) {
  const LatticePair lat = make_lattice(cfg);
  const TrigSymbol sym = make_symbol(cfg, lat);
  const RegionContext ctx = make_region_context(lat, cfg.region);
  const RegionParams& p = ctx.p;
  const double lam = std::pow(p.rho, 2 * p.l);
  const double delta = cfg.volumes.delta;
  const bool plain = cfg.volumes.unperturbed || sym.empty();
  if (!plain) require_layer_in_shell(p);
  const std::string set = cfg.volumes.set;
  auto g = [&](const Vec& x) { return plain ? std::pow(x.squaredNorm(), p.l) : g_value(x, ctx, sym).g; };
  auto pred = [&](const Vec& x) {
    if (set == "A") {
      if (!in_layer_A(x, p)) return false;
    } else {
      const RegionKind k = classify_point(x, ctx).kind;
      if (k != (set == "B" ? RegionKind::non_resonance_B : RegionKind::resonance_D)) return false;
    }
    return std::abs(g(x) - lam) <= delta;
  };
  const double halfwidth = plain ? 2 * delta : delta + 2 * p.L * std::pow(p.rho, p.alpha);
  const VolumeEstimate v = mc_volume(pred, energy_domain(p, lat.dim, halfwidth), cfg.samples, cfg.seed);
  json res = {{"set", set},
              {"rho", p.rho},
              {"delta", delta},
              {"delta_rule", cfg.volumes.delta_rule},
              {"energy", plain ? "unperturbed" : "g"},
              {"estimate", v.estimate},
              {"ci95", v.ci95},
              {"samples", v.samples},
              {"hits", v.hits},
              {"seed", cfg.seed}};
  if (plain && set == "A") {
    // Shell { ||xi|^{2l} - rho^{2l}| <= delta }, assumed inside the layer.
    const int d = lat.dim;
    const double omega = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1);
    const double e = 0.5 * d / p.l;
    res["reference"] = omega * (std::pow(lam + delta, e) - std::pow(std::max(lam - delta, 0.0), e));
  }
  *summary = "vol " + set + "(delta) = " + format_double(v.estimate) + " +- " + format_double(v.ci95);
  if (cfg.format == "csv") {
    CsvTable t({"set", "rho", "delta", "estimate", "ci95", "samples", "seed"});
    t.add(set).add(p.rho).add(delta).add(v.estimate).add(v.ci95).add(static_cast<long long>(v.samples));
    t.add(static_cast<long long>(cfg.seed));
    t.end_row();
    return t.str();
  }
  return dump_json(envelope(cfg, "volumes", res));
}

std::string cmd_asymptotics(RunConfig& cfg, std::string* summary) {
  const LatticePair lat = make_lattice(cfg);
  const TrigSymbol sym = make_symbol(cfg, lat);
  const RegionContext ctx = make_region_context(lat, cfg.region);
  const RegionParams& p = ctx.p;
  require_layer_in_shell(p);
  const double cutoff = resolved_cutoff(cfg.asymptotics.cutoff, p.rho);
  const ShellDomain dom = layer_domain(p, lat.dim);
  const int n = cfg.asymptotics.points;
  std::vector<Vec> pts;
  auto rng = block_rng(cfg.seed, 0);
  for (int i = 0; i < n; ++i) pts.push_back(dom.sample(rng));
  struct Row {
    RegionKind kind = RegionKind::outside_A;
    double gt = NAN, g = NAN, f = NAN, G = NAN, grad = NAN;
  };
  std::vector<Row> rows(static_cast<size_t>(n));
  parallel_for(n, [&](int i) {
    const Vec& x = pts[static_cast<size_t>(i)];
    Row& r = rows[static_cast<size_t>(i)];
    r.kind = classify_point(x, ctx).kind;
    if (r.kind == RegionKind::outside_A) return;
    const GValue gv = g_value(x, ctx, sym);
    r.gt = gv.g_tilde;
    r.g = gv.g;
    r.G = gv.g_tilde - std::pow(x.squaredNorm(), p.l);
    r.f = f_value(x, ctx, sym, cutoff, cfg.asymptotics.shell_width).value;
    if (r.kind == RegionKind::non_resonance_B) {
      try {
        r.grad = grad_G(x, ctx, sym).grad.norm();
      } catch (const ValidationError&) {
        // The stencil leaves the non-resonance set.
      }
    }
  });
  *summary = std::to_string(n) + " points at rho = " + format_double(p.rho);
  if (cfg.format == "json") {
    json arr = json::array();
    for (size_t i = 0; i < rows.size(); ++i) {
      const Row& r = rows[i];
      arr.push_back({{"x", to_std(pts[i])}, {"region", kind_name(r.kind)}, {"g_tilde", r.gt}, {"g", r.g},
                     {"f", r.f}, {"G", r.G}, {"grad_norm", r.grad}});
    }
    return dump_json(envelope(cfg, "asymptotics", {{"cutoff", cutoff}, {"points", arr}}));
  }
  auto header = coord_header("x_", lat.dim);
  for (const char* h : {"region", "g_tilde", "g", "f", "G", "grad_norm"}) header.push_back(h);
  CsvTable t(header);
  for (size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    for (int a = 0; a < lat.dim; ++a) t.add(pts[i](a));
    t.add(std::string(kind_name(r.kind))).add(r.gt).add(r.g).add(r.f).add(r.G).add(r.grad);
    t.end_row();
  }
  return t.str();
}

json geometry_json(const GeometryStudy& s) {
  json arr = json::array();
  for (const auto& c : s.checks)
    arr.push_back({{"name", c.name},
                   {"rho", c.rho},
                   {"samples", c.samples},
                   {"tested", c.tested},
                   {"violations", c.violations},
                   {"worst_ratio", c.worst_ratio}});
  return {{"checks", arr}, {"total_violations", s.total_violations()}};
}

}  // namespace

json verify_suite(const RunConfig& cfg) {
  const bool full = cfg.verify.scale == "full";
  const std::uint64_t seed = cfg.seed;
  const std::string& suite = cfg.verify.suite;
  if (suite == "oracle") {
    const OracleStudy s = unperturbed_oracle_study(seed, full ? 100 : 20);
    json rows = json::array();
    for (const auto& r : s.rows) rows.push_back({{"d", r.d}, {"samples", r.samples}, {"max_rel_error", r.max_rel_error}});
    return {{"rows", rows}, {"worst", s.worst}, {"tolerance", 1e-10}, {"pass", s.worst <= 1e-10}};
  }
  if (suite == "perturbation") {
    const PerturbationStudy s = perturbation_study(seed, full ? 500 : 50);
    json arr = json::array();
    int bad = 0;
    for (const auto& t : s.lemmas) {
      arr.push_back({{"name", t.name}, {"instances", t.instances}, {"violations", t.violations}, {"worst_ratio", t.worst_ratio}});
      bad += t.violations;
    }
    return {{"checks", arr}, {"index_shift_instances", s.index_shift_instances}, {"pass", bad == 0}};
  }
  if (suite == "shell") {
    const ShellStudy s = full ? shell_truncation_study() : shell_truncation_study(0.3, {10, 15});
    return {{"q", s.q},   {"k", to_std(s.k)}, {"rho", s.rho}, {"max_dev", s.max_dev},
            {"slope", s.slope}, {"pass", s.slope < 0 && (!full || s.max_dev.back() < 1e-6)}};
  }
  if (suite == "geometry") {
    const GeometryStudy s = full ? geometry_study({100, 200}, 100000, seed) : geometry_study({100}, 4000, seed);
    json j = geometry_json(s);
    j["pass"] = s.total_violations() == 0;
    return j;
  }
  if (suite == "asymptotics") {
    const ReductionStudy s = full ? reduction_study({50, 100, 200}, 1000, 40, 0.005, seed)
                                  : reduction_study({50, 100}, 20, 6, 0.005, seed);
    json rows = json::array();
    bool ok = true;
    for (const auto& r : s.rows) {
      rows.push_back({{"rho", r.rho},
                      {"points", r.points},
                      {"max_rel_diff", r.max_rel_diff},
                      {"max_schur_slope", r.max_schur_slope},
                      {"grad_points", r.grad_points},
                      {"sup_grad", r.sup_grad}});
      ok = ok && r.max_rel_diff <= 1e-8 && r.max_schur_slope <= 0.5;
    }
    const double bound = -1 + 0.15;  // the study symbol has alpha = 0
    return {{"q", s.q},
            {"rows", rows},
            {"grad_exponent", s.grad_exponent},
            {"grad_exponent_bound", bound},
            {"pass", ok && s.grad_exponent <= bound}};
  }
  if (suite == "resonance") {
    ResonanceOptions o;
    if (!full) {
      o.coffee_fibers = 1;
      o.icon_samples = 10;
      o.icon_points = 4;
      o.nu_rhos = {50, 100};
      o.nu_samples = 5;
      o.sweep_samples = 5;
    }
    const ResonanceStudy s = resonance_study(o, seed);
    bool sweep_ok = true;
    for (size_t i = 1; i < s.sweep_max_diff.size(); ++i) sweep_ok = sweep_ok && s.sweep_max_diff[i] < s.sweep_max_diff[i - 1];
    const bool ok = s.coffee_partition_ok && s.coffee_max_diff <= 1e-8 && s.icon_failures == 0 &&
                    s.nu_exponent <= s.nu_bound && sweep_ok;
    return {{"q", s.q},
            {"block_sum", {{"rho", s.coffee_rho}, {"fibers", s.coffee_fibers}, {"classes", s.coffee_classes},
                           {"max_rel_diff", s.coffee_max_diff}, {"partition_ok", s.coffee_partition_ok}}},
            {"index_constancy", {{"samples", s.icon_samples}, {"points", s.icon_points}, {"failures", s.icon_failures}}},
            {"nu_derivative", {{"rho", s.nu_rho}, {"max", s.nu_max}, {"exponent", s.nu_exponent}, {"bound", s.nu_bound}}},
            {"m_sweep", {{"rho", s.sweep_rho}, {"samples", s.sweep_samples}, {"M", s.sweep_M},
                         {"max_diff", s.sweep_max_diff}}},
            {"pass", ok}};
  }
  if (suite == "volumes") {
    const VolumeStudy s = volume_study({50, 100, 200}, 1.0, full ? 1000000 : 20000, seed);
    json inter = json::array();
    for (size_t i = 0; i < s.inter.size(); ++i) {
      json e = estimate_json(s.inter[i]);
      e["rho"] = s.inter_rho[i];
      inter.push_back(e);
    }
    bool dec = true;
    for (size_t i = 1; i < s.ratio.size(); ++i) dec = dec && s.ratio[i] < s.ratio[i - 1];
    const bool annulus_ok = std::abs(s.annulus.estimate - s.annulus_exact) <= s.annulus.ci95;
    return {{"delta", s.delta},
            {"samples", s.samples},
            {"annulus", {{"rho", s.annulus_rho}, {"exact", s.annulus_exact}, {"mc", estimate_json(s.annulus)}}},
            {"ratio", {{"rho", s.ratio_rho}, {"value", s.ratio}}},
            {"intersection", {{"shift", to_std(s.shift)}, {"estimates", inter}, {"exponent", s.inter_exponent},
                              {"predicted", s.inter_predicted}}},
            {"pass", annulus_ok && dec && std::abs(s.inter_exponent - s.inter_predicted) <= 0.3}};
  }
  if (suite == "coverage") {
    const CoverageStudy s = full ? coverage_study({5, 10, 15}) : coverage_study({5}, 0.1, 0.5, {16, 16});
    json rows = json::array();
    bool ok = true;
    for (const auto& r : s.rows) {
      rows.push_back({{"rho", r.rho},
                      {"covered", r.coarse.covered},
                      {"margin", r.coarse.margin},
                      {"union_margin", r.coarse.union_margin},
                      {"delta", r.coarse.delta},
                      {"fine_covered", r.fine.covered},
                      {"fine_margin", r.fine.margin},
                      {"endpoint_change", r.endpoint_change},
                      {"refined_bands", r.refined_bands}});
      ok = ok && r.coarse.covered && r.fine.covered && r.endpoint_change < 1e-3;
    }
    return {{"q", s.q}, {"c3", s.c3}, {"grid", s.grid}, {"cutoff_factor", s.cutoff_factor}, {"rows", rows}, {"pass", ok}};
  }
  std::string list;
  for (const auto& s : kSuites) list += (list.empty() ? "" : ", ") + s;
  throw ValidationError("unknown suite '" + suite + "'; expected one of {" + list + "}");
}

std::string run_subcommand(const std::string& name, RunConfig& cfg, std::string* summary) {
  if (name == "bands") return cmd_bands(cfg, summary);
  if (name == "gaps") return cmd_gaps(cfg, summary);
  if (name == "regions") return cmd_regions(cfg, summary);
  if (name == "volumes") return cmd_volumes(cfg, summary);
  if (name == "asymptotics") return cmd_asymptotics(cfg, summary);
  if (name == "verify") {
    if (cfg.format == "csv") throw ValidationError("verify writes JSON only");
    json res = verify_suite(cfg);
    *summary = "suite " + cfg.verify.suite + (res.value("pass", false) ? " PASS" : " FAIL");
    return dump_json(envelope(cfg, "verify", std::move(res)));
  }
  throw ValidationError("unknown subcommand '" + name + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"Bloch-Floquet band and resonance-geometry toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path;
  Overrides o;
  app.add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; }, "random seed");
  app.add_option_function<int>("--threads", [&](const int& v) { o.threads = v; }, "worker threads (FLOQUET_THREADS)")
      ->check(CLI::PositiveNumber);
  app.add_option_function<std::string>("--out", [&](const std::string& v) { o.out = v; }, "report path, - for stdout");
  app.add_option_function<std::string>("--format", [&](const std::string& v) { o.format = v; }, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option_function<double>("--rho", [&](const double& v) { o.rho = v; }, "radius rho");
  app.add_option_function<double>("--delta", [&](const double& v) { o.delta = v; }, "energy half-width delta");
  app.add_option_function<std::string>("--delta-rule", [&](const std::string& v) { o.delta_rule = v; },
                                       "fixed, or paper for c3 rho^{2l-6} (d = 2) and c3 rho^{2l-d-1} otherwise")
      ->check(CLI::IsMember({"fixed", "paper"}));
  app.add_option_function<std::int64_t>("--samples", [&](const std::int64_t& v) { o.samples = v; }, "Monte Carlo samples");
  app.add_option_function<std::string>("--suite", [&](const std::string& v) { o.suite = v; }, "verify suite")
      ->check(CLI::IsMember(kSuites));
  app.add_option_function<std::string>("--set", [&](const std::string& v) { o.set = v; }, "volume set A, B or D")
      ->check(CLI::IsMember({"A", "B", "D"}));
  const std::pair<const char*, const char*> subcommands[] = {
      {"bands", "band table [a_j, b_j] over the k grid"},
      {"gaps", "gaps and interval coverage near rho^{2l}"},
      {"regions", "resonance / non-resonance labels of sampled points"},
      {"volumes", "Monte Carlo volume of the set A, B or D at energy width delta"},
      {"asymptotics", "g_tilde, g, f and grad G at sampled points"},
      {"verify", "one verification suite with a pass field"}};
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = config_path.empty() ? parse_config("", "<defaults>") : load_config(config_path);
    apply_overrides(cfg, o);
    finalize(cfg);
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    if (cfg.format.empty()) cfg.format = (name == "bands" || name == "regions" || name == "asymptotics") ? "csv" : "json";
    std::string summary;
    const std::string text = run_subcommand(name, cfg, &summary);
    write_output(cfg.out, text);
    std::cerr << "floquet " << name << ": " << summary << (cfg.out.empty() || cfg.out == "-" ? "" : " -> " + cfg.out)
              << "\n";
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "floquet " << name << ": invalid input: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "floquet " << name << ": numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "floquet " << name << ": numerical failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace floquet::cli
