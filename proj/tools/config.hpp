#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "floquet/lattice.hpp"
#include "floquet/regions.hpp"
#include "floquet/symbol.hpp"

namespace floquet::cli {

struct SymbolConfig {
  std::string kind = "cosine";  // zero | cosine | axis_cosines | modes
  double q = 0.1;
  std::vector<int> direction;   // cosine only; defaults to the first dual basis vector
  std::vector<ModeSpec> modes;  // modes only
  double alpha = 0.0;
  double R = 0.0;
};

struct BandsConfig {
  std::vector<int> grid;
  double cutoff = 0.0;  // <= 0: 2 rho
  double c3 = 0.5;
  std::optional<std::pair<double, double>> window;
  bool refine = true;
};

struct VolumesConfig {
  std::string set = "A";           // A | B | D
  double delta = 1.0;
  std::string delta_rule = "fixed";  // fixed | paper
  bool unperturbed = true;         // g = |xi|^{2l} instead of the asymptotic g
};

struct AsymptoticsConfig {
  int points = 20;
  double shell_width = 1.0;
  double cutoff = 0.0;  // <= 0: 2 rho
};

struct VerifyConfig {
  std::string suite = "perturbation";
  std::string scale = "quick";  // quick | full
};

struct RunConfig {
  std::string path;
  int dim = 2;
  Mat basis;
  double l = 1.0;
  SymbolConfig symbol;
  std::string region_preset = "auto";  // auto | explicit
  RegionParams region;
  BandsConfig bands;
  VolumesConfig volumes;
  AsymptoticsConfig asymptotics;
  VerifyConfig verify;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string format;  // empty: subcommand default
  std::string out;
  int threads = 0;  // 0: FLOQUET_THREADS or 1
};

// Command-line values applied on top of the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> rho;
  std::optional<double> delta;
  std::optional<std::int64_t> samples;
  std::optional<std::string> suite;
  std::optional<std::string> set;
  std::optional<std::string> delta_rule;
};

// Parses the INI-style grammar documented in the README. Throws ValidationError with the
// section and key of the offending entry, or the violated region inequality.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& cfg, const Overrides& o);

// Re-derives the region parameters after overrides and validates everything.
void finalize(RunConfig& cfg);

LatticePair make_lattice(const RunConfig& cfg);
TrigSymbol make_symbol(const RunConfig& cfg, const LatticePair& lat);
double resolved_cutoff(double cutoff, double rho);

// Resolved settings for the report header; leaves out paths and thread counts.
nlohmann::json config_echo(const RunConfig& cfg);

}  // namespace floquet::cli
