#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paleyscope/corpus.hpp"
#include "paleyscope/spectral.hpp"
#include "paleyscope/symbols.hpp"

namespace paleyscope {

/// Invalid configuration; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int d = 1;
  int n = 128;
  double L = 24.0;
  int nt = 128;
  double dt = 0.01;
};

struct McConfig {
  int M = 4096;
  int K = 3;
  std::uint64_t seed = 0x5eed5eedULL;
  int mode = 1;            // wave index of the single-mode forcing
  int obs_time = -1;       // -1: last slice
  int obs_index = -1;      // -1: grid centre
};

struct KernelDumpConfig {
  double s = 0.0;
  double t = 0.1;
  std::optional<double> eta;  // default: 0
  std::string file = "kernel.plsf";
};

struct ExponentsConfig {
  std::string gamma = "2";
  int dim = 1;
};

struct ExperimentConfig {
  std::string suite;
  nlohmann::json symbol;          // raw symbol block
  GridConfig grid;
  CorpusSpec corpus;
  std::vector<double> p{2.0, 4.0, 8.0};
  McConfig mc;
  KernelDumpConfig kernel;
  ExponentsConfig exponents;
  std::optional<double> eta;      // default: symbol order / 2
  bool allow_3d = false;
  std::string report_name;        // file stem, default = suite name
  nlohmann::json raw;             // the parsed document, for hashing
};

const std::vector<std::string>& suite_names();
/// Canonical suite name for NAME or an alias ("assumptions" -> "verify-assumptions").
std::optional<std::string> canonical_suite(const std::string& name);

/// Validates and fills defaults. Throws ConfigError with a descriptive
/// message on unknown keys, wrong types or violated grid constraints.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Builds a symbol from its JSON block:
///   {"family": "fractional", "gamma": 2, "nu": 0.5, "a": <coef>}
///   {"family": "polyform", "m": 1, "nu": 1, "terms": [{"alpha": [1], "beta": [1], "a": <coef>}]}
///   {"family": "levy", "k": 0, "gamma": 0.5, "c1": 1, "c2": 1, "N0": 1,
///    "sphere_nodes": 256, "density": <number or {"starts": [...], "values": [[...], ...]}>}
/// where <coef> is a number, [re, im], or {"starts": [...], "values": [...]}.
Symbol make_symbol(const nlohmann::json& block, int d);

/// FNV-1a 64 of the compact canonical dump of the configuration.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace paleyscope
