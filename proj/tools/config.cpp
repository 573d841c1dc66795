#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "floquet/bands.hpp"
#include "floquet/studies.hpp"

namespace floquet::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> kKeys = {
    {"lattice", {"dim", "basis"}},
    {"operator", {"l"}},
    {"symbol", {"kind", "q", "direction", "alpha", "R", "modes"}},
    {"region", {"preset", "rho", "M", "R", "L", "subspace_radius", "q", "gamma", "eps0"}},
    {"bands", {"grid", "cutoff", "c3", "window", "refine"}},
    {"volumes", {"set", "delta", "delta_rule", "unperturbed"}},
    {"asymptotics", {"points", "shell_width", "cutoff"}},
    {"verify", {"suite", "scale"}},
    {"run", {"seed", "samples", "format", "out", "threads"}},
};

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ValidationError("config " + where + ": " + what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

double to_double(const std::string& where, const std::string& s) {
  std::istringstream in(s);
  double v;
  if (!(in >> v) || !(in >> std::ws).eof()) bad(where, "expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& where, const std::string& s) {
  std::istringstream in(s);
  long long v;
  if (!(in >> v) || !(in >> std::ws).eof()) bad(where, "expected an integer, got '" + s + "'");
  return v;
}

std::vector<double> to_doubles(const std::string& where, const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(where, tok));
  return out;
}

bool to_bool(const std::string& where, const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  bad(where, "expected true or false, got '" + s + "'");
}

std::string one_of(const std::string& where, const std::string& s, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (s == a) return s;
    list += list.empty() ? a : std::string(", ") + a;
  }
  bad(where, "expected one of {" + list + "}, got '" + s + "'");
}

// "c_1 ... c_d : re [im] ; ..." in dual-basis coordinates.
std::vector<ModeSpec> to_modes(const std::string& where, const std::string& s, int d) {
  std::vector<ModeSpec> out;
  std::istringstream all(s);
  std::string item;
  while (std::getline(all, item, ';')) {
    if (trim(item).empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) bad(where, "mode '" + trim(item) + "' needs 'coords : value'");
    const auto c = to_doubles(where, item.substr(0, colon));
    const auto z = to_doubles(where, item.substr(colon + 1));
    if (static_cast<int>(c.size()) != d) bad(where, "mode coordinates need " + std::to_string(d) + " entries");
    if (z.empty() || z.size() > 2) bad(where, "mode value is 're' or 're im'");
    ModeSpec m;
    m.theta = IVec(d);
    for (int i = 0; i < d; ++i) {
      if (c[static_cast<size_t>(i)] != std::round(c[static_cast<size_t>(i)])) bad(where, "mode coordinates must be integers");
      m.theta(i) = static_cast<int>(c[static_cast<size_t>(i)]);
    }
    m.z = cplx(z[0], z.size() > 1 ? z[1] : 0.0);
    out.push_back(m);
  }
  return out;
}

struct Reader {
  const pt::ptree& tree;
  const std::string& origin;

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    auto s = tree.get_child_optional(section);
    if (!s) return std::nullopt;
    auto v = s->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return trim(*v);
  }
  std::string where(const std::string& section, const std::string& key) const {
    return origin + " [" + section + "] " + key;
  }
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("config " + origin + ": line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    auto it = kKeys.find(section);
    if (it == kKeys.end()) {
      if (!body.data().empty()) bad(origin, "key '" + section + "' outside a section");
      bad(origin, "unknown section [" + section + "]");
    }
    for (const auto& kv : body)
      if (!it->second.count(kv.first)) bad(origin + " [" + section + "]", "unknown key '" + kv.first + "'");
  }

  const Reader r{tree, origin};
  RunConfig cfg;
  cfg.path = origin;
  if (auto v = r.get("lattice", "dim")) cfg.dim = static_cast<int>(to_int(r.where("lattice", "dim"), *v));
  if (cfg.dim < 1 || cfg.dim > 3) bad(r.where("lattice", "dim"), "dimension must be 1, 2 or 3");
  cfg.basis = 2 * M_PI * Mat::Identity(cfg.dim, cfg.dim);
  if (auto v = r.get("lattice", "basis")) {
    const auto b = to_doubles(r.where("lattice", "basis"), *v);
    if (static_cast<int>(b.size()) != cfg.dim * cfg.dim)
      bad(r.where("lattice", "basis"), "needs dim^2 = " + std::to_string(cfg.dim * cfg.dim) + " numbers");
    for (int c = 0; c < cfg.dim; ++c)
      for (int i = 0; i < cfg.dim; ++i) cfg.basis(i, c) = b[static_cast<size_t>(c * cfg.dim + i)];
  }
  if (auto v = r.get("operator", "l")) cfg.l = to_double(r.where("operator", "l"), *v);
  if (!(cfg.l > 0)) bad(r.where("operator", "l"), "l > 0 violated");

  auto& s = cfg.symbol;
  if (auto v = r.get("symbol", "kind")) s.kind = one_of(r.where("symbol", "kind"), *v, {"zero", "cosine", "axis_cosines", "modes"});
  if (auto v = r.get("symbol", "q")) s.q = to_double(r.where("symbol", "q"), *v);
  if (auto v = r.get("symbol", "alpha")) s.alpha = to_double(r.where("symbol", "alpha"), *v);
  if (auto v = r.get("symbol", "R")) s.R = to_double(r.where("symbol", "R"), *v);
  if (auto v = r.get("symbol", "direction")) {
    for (double x : to_doubles(r.where("symbol", "direction"), *v)) s.direction.push_back(static_cast<int>(x));
    if (static_cast<int>(s.direction.size()) != cfg.dim) bad(r.where("symbol", "direction"), "needs dim integers");
  }
  if (auto v = r.get("symbol", "modes")) s.modes = to_modes(r.where("symbol", "modes"), *v, cfg.dim);
  if (s.kind == "modes" && s.modes.empty()) bad(r.where("symbol", "modes"), "kind = modes needs at least one mode");

  auto& p = cfg.region;
  p.rho = 100;
  p.M = 1;
  p.R = 1.1;
  p.L = 0.02;
  p.subspace_radius = 2.2;
  if (auto v = r.get("region", "preset")) cfg.region_preset = one_of(r.where("region", "preset"), *v, {"auto", "explicit"});
  if (auto v = r.get("region", "rho")) p.rho = to_double(r.where("region", "rho"), *v);
  if (auto v = r.get("region", "M")) p.M = static_cast<int>(to_int(r.where("region", "M"), *v));
  if (auto v = r.get("region", "R")) p.R = to_double(r.where("region", "R"), *v);
  if (auto v = r.get("region", "L")) p.L = to_double(r.where("region", "L"), *v);
  if (auto v = r.get("region", "subspace_radius")) p.subspace_radius = to_double(r.where("region", "subspace_radius"), *v);
  const bool has_q = r.get("region", "q").has_value();
  const bool has_gamma = r.get("region", "gamma").has_value();
  if (cfg.region_preset == "auto" && (has_q || has_gamma || r.get("region", "eps0")))
    bad(r.where("region", "preset"), "q, gamma and eps0 are derived when preset = auto; use preset = explicit");
  if (cfg.region_preset == "explicit") {
    if (!has_q || !has_gamma) bad(r.where("region", "preset"), "preset = explicit needs q and gamma");
    p.q = to_doubles(r.where("region", "q"), *r.get("region", "q"));
    p.gamma = to_double(r.where("region", "gamma"), *r.get("region", "gamma"));
    p.eps0 = std::numeric_limits<double>::quiet_NaN();
    if (auto v = r.get("region", "eps0")) p.eps0 = to_double(r.where("region", "eps0"), *v);
  }

  auto& b = cfg.bands;
  b.grid.assign(static_cast<size_t>(cfg.dim), 32);
  if (auto v = r.get("bands", "grid")) {
    b.grid.clear();
    for (double x : to_doubles(r.where("bands", "grid"), *v)) b.grid.push_back(static_cast<int>(x));
    if (static_cast<int>(b.grid.size()) != cfg.dim) bad(r.where("bands", "grid"), "needs one count per axis");
  }
  for (int n : b.grid)
    if (n < 8) bad(r.where("bands", "grid"), "grid counts >= 8 violated");
  if (auto v = r.get("bands", "cutoff")) b.cutoff = *v == "auto" ? 0.0 : to_double(r.where("bands", "cutoff"), *v);
  if (auto v = r.get("bands", "c3")) b.c3 = to_double(r.where("bands", "c3"), *v);
  if (!(b.c3 > 0)) bad(r.where("bands", "c3"), "c3 > 0 violated");
  if (auto v = r.get("bands", "window")) {
    const auto w = to_doubles(r.where("bands", "window"), *v);
    if (w.size() != 2 || !(w[0] < w[1])) bad(r.where("bands", "window"), "expected 'lo hi' with lo < hi");
    b.window = std::make_pair(w[0], w[1]);
  }
  if (auto v = r.get("bands", "refine")) b.refine = to_bool(r.where("bands", "refine"), *v);

  auto& vo = cfg.volumes;
  if (auto v = r.get("volumes", "set")) vo.set = one_of(r.where("volumes", "set"), *v, {"A", "B", "D"});
  if (auto v = r.get("volumes", "delta")) vo.delta = to_double(r.where("volumes", "delta"), *v);
  if (auto v = r.get("volumes", "delta_rule")) vo.delta_rule = one_of(r.where("volumes", "delta_rule"), *v, {"fixed", "paper"});
  if (auto v = r.get("volumes", "unperturbed")) vo.unperturbed = to_bool(r.where("volumes", "unperturbed"), *v);

  auto& as = cfg.asymptotics;
  if (auto v = r.get("asymptotics", "points")) as.points = static_cast<int>(to_int(r.where("asymptotics", "points"), *v));
  if (auto v = r.get("asymptotics", "shell_width")) as.shell_width = to_double(r.where("asymptotics", "shell_width"), *v);
  if (auto v = r.get("asymptotics", "cutoff"))
    as.cutoff = *v == "auto" ? 0.0 : to_double(r.where("asymptotics", "cutoff"), *v);
  if (as.points < 0) bad(r.where("asymptotics", "points"), "points >= 0 violated");

  if (auto v = r.get("verify", "suite")) cfg.verify.suite = *v;
  if (auto v = r.get("verify", "scale")) cfg.verify.scale = one_of(r.where("verify", "scale"), *v, {"quick", "full"});

  if (auto v = r.get("run", "seed")) {
    const long long x = to_int(r.where("run", "seed"), *v);
    if (x < 0) bad(r.where("run", "seed"), "seed >= 0 violated");
    cfg.seed = static_cast<std::uint64_t>(x);
  }
  if (auto v = r.get("run", "samples")) cfg.samples = to_int(r.where("run", "samples"), *v);
  if (auto v = r.get("run", "format")) cfg.format = one_of(r.where("run", "format"), *v, {"csv", "json"});
  if (auto v = r.get("run", "out")) cfg.out = *v;
  if (auto v = r.get("run", "threads")) cfg.threads = static_cast<int>(to_int(r.where("run", "threads"), *v));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config " + path + ": cannot be read");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (o.out) cfg.out = *o.out;
  if (o.format) cfg.format = one_of("--format", *o.format, {"csv", "json"});
  if (o.rho) cfg.region.rho = *o.rho;
  if (o.delta) {
    cfg.volumes.delta = *o.delta;
    cfg.volumes.delta_rule = "fixed";
  }
  if (o.delta_rule) cfg.volumes.delta_rule = one_of("--delta-rule", *o.delta_rule, {"fixed", "paper"});
  if (o.samples) cfg.samples = *o.samples;
  if (o.suite) cfg.verify.suite = *o.suite;
  if (o.set) cfg.volumes.set = one_of("--set", *o.set, {"A", "B", "D"});
}

void finalize(RunConfig& cfg) {
  RegionParams& p = cfg.region;
  if (cfg.region_preset == "auto") {
    p = auto_region_params(cfg.dim, cfg.l, cfg.symbol.alpha, p.rho, p.M, p.R, p.L, p.subspace_radius);
  } else {
    p.l = cfg.l;
    p.alpha = cfg.symbol.alpha;
    if (std::isnan(p.eps0) && static_cast<int>(p.q.size()) == cfg.dim) p.eps0 = eps0_formula(p.l, p.alpha, p.q, p.gamma);
    p.validate(cfg.dim);
  }
  if (cfg.samples < 1) throw ValidationError("samples >= 1 violated");
  if (cfg.threads < 0) throw ValidationError("threads >= 0 violated");
  if (cfg.volumes.delta_rule == "paper") cfg.volumes.delta = coverage_delta(cfg.dim, cfg.l, p.rho, cfg.bands.c3);
  if (!(cfg.volumes.delta > 0)) throw ValidationError("delta > 0 violated");
  if (!(cfg.asymptotics.shell_width >= 0)) throw ValidationError("asymptotics shell_width >= 0 violated");
}

LatticePair make_lattice(const RunConfig& cfg) { return make_lattice_pair(cfg.basis); }

TrigSymbol make_symbol(const RunConfig& cfg, const LatticePair& lat) {
  const auto& s = cfg.symbol;
  if (s.kind == "zero") return zero_symbol(lat);
  if (s.kind == "axis_cosines") {
    if (s.alpha != 0) throw ValidationError("axis_cosines has order alpha = 0");
    return axis_cosines(lat, s.q);
  }
  if (s.kind == "modes") return floquet::make_symbol(lat, s.modes, s.alpha, s.R);
  IVec dir = IVec::Zero(lat.dim);
  if (s.direction.empty())
    dir(0) = 1;
  else
    for (int i = 0; i < lat.dim; ++i) dir(i) = s.direction[static_cast<size_t>(i)];
  return cosine_symbol(lat, dir, s.q, s.alpha, s.R);
}

double resolved_cutoff(double cutoff, double rho) { return cutoff > 0 ? cutoff : 2 * rho; }

nlohmann::json config_echo(const RunConfig& cfg) {
  using nlohmann::json;
  json j;
  j["lattice"] = {{"dim", cfg.dim}};
  std::vector<double> basis;
  for (int c = 0; c < cfg.dim; ++c)
    for (int i = 0; i < cfg.dim; ++i) basis.push_back(cfg.basis(i, c));
  j["lattice"]["basis"] = basis;
  j["operator"] = {{"l", cfg.l}};
  const auto& s = cfg.symbol;
  j["symbol"] = {{"kind", s.kind}, {"q", s.q}, {"alpha", s.alpha}, {"R", s.R}, {"direction", s.direction}};
  json modes = json::array();
  for (const auto& m : s.modes) {
    std::vector<int> c(m.theta.data(), m.theta.data() + m.theta.size());
    modes.push_back({{"coords", c}, {"re", m.z.real()}, {"im", m.z.imag()}});
  }
  j["symbol"]["modes"] = modes;
  const auto& p = cfg.region;
  j["region"] = {{"preset", cfg.region_preset}, {"rho", p.rho}, {"q", p.q},   {"gamma", p.gamma},
                 {"eps0", p.eps0},               {"M", p.M},     {"R", p.R},   {"L", p.L},
                 {"subspace_radius", p.table_radius()}};
  const auto& b = cfg.bands;
  j["bands"] = {{"grid", b.grid}, {"cutoff", resolved_cutoff(b.cutoff, p.rho)}, {"c3", b.c3}, {"refine", b.refine}};
  if (b.window) j["bands"]["window"] = {b.window->first, b.window->second};
  j["volumes"] = {{"set", cfg.volumes.set},
                  {"delta", cfg.volumes.delta},
                  {"delta_rule", cfg.volumes.delta_rule},
                  {"unperturbed", cfg.volumes.unperturbed}};
  j["asymptotics"] = {{"points", cfg.asymptotics.points},
                      {"shell_width", cfg.asymptotics.shell_width},
                      {"cutoff", resolved_cutoff(cfg.asymptotics.cutoff, p.rho)}};
  j["verify"] = {{"suite", cfg.verify.suite}, {"scale", cfg.verify.scale}};
  j["samples"] = cfg.samples;
  return j;
}

}  // namespace floquet::cli
