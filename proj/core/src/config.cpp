#include "paleyscope/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "paleyscope/report.hpp"

namespace paleyscope {
namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

Complex complex_value(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(where + ": expected a number or [re, im]");
}

TimeCoefficient coefficient(const json& v, const std::string& where) {
  if (v.is_object()) {
    require_keys(v, where, {"starts", "values"});
    if (!v.contains("starts") || !v.contains("values") || !v["starts"].is_array() ||
        !v["values"].is_array()) {
      throw ConfigError(where + ": needs arrays 'starts' and 'values'");
    }
    std::vector<double> starts;
    for (const auto& s : v["starts"]) starts.push_back(number(s, where + ".starts"));
    std::vector<Complex> values;
    for (const auto& x : v["values"]) values.push_back(complex_value(x, where + ".values"));
    try {
      return TimeCoefficient(std::move(starts), std::move(values));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return TimeCoefficient::constant(complex_value(v, where));
}

MultiIndex multi_index(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an integer array");
  MultiIndex out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ConfigError(where + ": expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"verify-assumptions", "lp-ratio", "sharp-bound",
                                              "spde", "exponents", "kernel-dump"};
  return names;
}

std::optional<std::string> canonical_suite(const std::string& name) {
  if (name == "assumptions") return "verify-assumptions";
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return name;
  return std::nullopt;
}

Symbol make_symbol(const json& block, int d) {
  if (!block.is_object() || !block.contains("family") || !block["family"].is_string()) {
    throw ConfigError("symbol: needs a string 'family'");
  }
  const std::string family = block["family"].get<std::string>();
  try {
    if (family == "fractional") {
      require_keys(block, "symbol", {"family", "gamma", "nu", "a"});
      const double gamma = get_or<double>(block, "gamma", 2.0, "symbol");
      const double nu = get_or<double>(block, "nu", 0.5, "symbol");
      const auto a = block.contains("a") ? coefficient(block["a"], "symbol.a")
                                         : TimeCoefficient::constant(1.0);
      return FractionalSymbol(gamma, a, nu);
    }
    if (family == "polyform") {
      require_keys(block, "symbol", {"family", "m", "nu", "terms"});
      const int m = get_or<int>(block, "m", 1, "symbol");
      const double nu = get_or<double>(block, "nu", 1.0, "symbol");
      if (!block.contains("terms") || !block["terms"].is_array()) {
        throw ConfigError("symbol: polyform needs a 'terms' array");
      }
      std::vector<PolyTerm> terms;
      for (std::size_t i = 0; i < block["terms"].size(); ++i) {
        const auto& t = block["terms"][i];
        const std::string where = "symbol.terms[" + std::to_string(i) + "]";
        require_keys(t, where, {"alpha", "beta", "a"});
        if (!t.contains("alpha") || !t.contains("beta")) throw ConfigError(where + ": needs alpha and beta");
        terms.push_back({multi_index(t["alpha"], where + ".alpha"), multi_index(t["beta"], where + ".beta"),
                         t.contains("a") ? coefficient(t["a"], where + ".a") : TimeCoefficient::constant(1.0)});
      }
      return PolyFormSymbol(d, m, std::move(terms), nu);
    }
    if (family == "levy") {
      require_keys(block, "symbol", {"family", "k", "gamma", "c1", "c2", "N0", "sphere_nodes", "density"});
      LevyParams params;
      params.d = d;
      params.k = get_or<int>(block, "k", 0, "symbol");
      params.gamma = get_or<double>(block, "gamma", 0.5, "symbol");
      params.c1 = get_or<double>(block, "c1", 1.0, "symbol");
      params.c2 = get_or<double>(block, "c2", 1.0, "symbol");
      params.N0 = get_or<double>(block, "N0", 1.0, "symbol");
      params.sphere_nodes = get_or<int>(block, "sphere_nodes", 256, "symbol");
      const std::size_t nodes = d == 1 ? 2 : static_cast<std::size_t>(params.sphere_nodes);
      if (!block.contains("density") || block["density"].is_number()) {
        const double m = block.contains("density") ? block["density"].get<double>() : 1.0;
        return LevySymbol(params, {0.0}, {std::vector<double>(nodes, m)});
      }
      const auto& dens = block["density"];
      require_keys(dens, "symbol.density", {"starts", "values"});
      if (!dens.contains("starts") || !dens.contains("values")) {
        throw ConfigError("symbol.density: needs 'starts' and 'values'");
      }
      std::vector<double> starts;
      for (const auto& s : dens["starts"]) starts.push_back(number(s, "symbol.density.starts"));
      std::vector<std::vector<double>> table;
      for (const auto& row : dens["values"]) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(number(v, "symbol.density.values"));
        table.push_back(std::move(r));
      }
      return LevySymbol(params, std::move(starts), std::move(table));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("symbol: ") + e.what());
  }
  throw ConfigError("symbol: unknown family '" + family + "'");
}

ExperimentConfig parse_config(const json& doc) {
  require_keys(doc, "config", {"suite", "symbol", "grid", "corpus", "p", "mc", "kernel", "exponents",
                               "eta", "allow_3d", "report_name"});
  ExperimentConfig cfg;
  cfg.raw = doc;
  if (doc.contains("suite")) {
    const auto name = canonical_suite(get_or<std::string>(doc, "suite", "", "config"));
    if (!name) throw ConfigError("config.suite: unknown suite '" + doc["suite"].get<std::string>() + "'");
    cfg.suite = *name;
  }
  cfg.allow_3d = get_or<bool>(doc, "allow_3d", false, "config");
  cfg.report_name = get_or<std::string>(doc, "report_name", "", "config");

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    require_keys(g, "grid", {"d", "n", "L", "nt", "dt"});
    cfg.grid.d = get_or<int>(g, "d", cfg.grid.d, "grid");
    cfg.grid.n = get_or<int>(g, "n", cfg.grid.n, "grid");
    cfg.grid.L = get_or<double>(g, "L", cfg.grid.L, "grid");
    cfg.grid.nt = get_or<int>(g, "nt", cfg.grid.nt, "grid");
    cfg.grid.dt = get_or<double>(g, "dt", cfg.grid.dt, "grid");
  }
  try {
    SpaceGrid(cfg.grid.d, cfg.grid.n, cfg.grid.L);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (cfg.grid.d == 3 && !cfg.allow_3d) throw ConfigError("grid: d = 3 requires \"allow_3d\": true");
  if (cfg.grid.nt < 2) throw ConfigError("grid: nt must be >= 2");
  if (!(cfg.grid.dt > 0.0)) throw ConfigError("grid: dt must be positive");

  cfg.symbol = doc.contains("symbol") ? doc["symbol"] : json{{"family", "fractional"}, {"gamma", 2}, {"nu", 0.5}};
  make_symbol(cfg.symbol, cfg.grid.d);  // validate early

  if (doc.contains("corpus")) {
    const auto& c = doc["corpus"];
    require_keys(c, "corpus", {"seed", "count", "channels", "L"});
    cfg.corpus.seed = get_or<std::uint64_t>(c, "seed", cfg.corpus.seed, "corpus");
    cfg.corpus.count = get_or<int>(c, "count", cfg.corpus.count, "corpus");
    cfg.corpus.channels = get_or<int>(c, "channels", cfg.corpus.channels, "corpus");
    cfg.corpus.L = get_or<double>(c, "L", cfg.grid.L, "corpus");
  } else {
    cfg.corpus.L = cfg.grid.L;
  }
  if (cfg.corpus.count < 1 || cfg.corpus.channels < 1) throw ConfigError("corpus: count and channels must be >= 1");

  if (doc.contains("p")) {
    if (!doc["p"].is_array() || doc["p"].empty()) throw ConfigError("p: expected a nonempty array");
    cfg.p.clear();
    for (const auto& v : doc["p"]) {
      const double p = number(v, "p");
      if (!(p >= 2.0)) throw ConfigError("p: entries must be >= 2");
      cfg.p.push_back(p);
    }
  }

  if (doc.contains("mc")) {
    const auto& m = doc["mc"];
    require_keys(m, "mc", {"M", "K", "seed", "mode", "obs_time", "obs_index"});
    cfg.mc.M = get_or<int>(m, "M", cfg.mc.M, "mc");
    cfg.mc.K = get_or<int>(m, "K", cfg.mc.K, "mc");
    cfg.mc.seed = get_or<std::uint64_t>(m, "seed", cfg.mc.seed, "mc");
    cfg.mc.mode = get_or<int>(m, "mode", cfg.mc.mode, "mc");
    cfg.mc.obs_time = get_or<int>(m, "obs_time", cfg.mc.obs_time, "mc");
    cfg.mc.obs_index = get_or<int>(m, "obs_index", cfg.mc.obs_index, "mc");
  }
  if (cfg.mc.M < 2 || cfg.mc.K < 1) throw ConfigError("mc: need M >= 2 and K >= 1");
  if (cfg.mc.obs_time >= cfg.grid.nt) throw ConfigError("mc.obs_time: beyond the time grid");

  if (doc.contains("kernel")) {
    const auto& k = doc["kernel"];
    require_keys(k, "kernel", {"s", "t", "eta", "file"});
    cfg.kernel.s = get_or<double>(k, "s", cfg.kernel.s, "kernel");
    cfg.kernel.t = get_or<double>(k, "t", cfg.kernel.t, "kernel");
    if (k.contains("eta")) cfg.kernel.eta = number(k["eta"], "kernel.eta");
    cfg.kernel.file = get_or<std::string>(k, "file", cfg.kernel.file, "kernel");
    if (cfg.kernel.s > cfg.kernel.t) throw ConfigError("kernel: requires s <= t");
  }

  if (doc.contains("exponents")) {
    const auto& e = doc["exponents"];
    require_keys(e, "exponents", {"gamma", "dim"});
    if (e.contains("gamma")) {
      cfg.exponents.gamma = e["gamma"].is_string() ? e["gamma"].get<std::string>()
                                                   : e["gamma"].dump();
    }
    cfg.exponents.dim = get_or<int>(e, "dim", cfg.exponents.dim, "exponents");
  }

  if (doc.contains("eta")) {
    cfg.eta = number(doc["eta"], "eta");
    if (*cfg.eta < 0.0) throw ConfigError("eta: must be >= 0");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

std::string config_hash(const ExperimentConfig& cfg) {
  json canon = cfg.raw;
  canon["suite"] = cfg.suite;
  return hex64(fnv1a64(canon.dump()));
}

}  // namespace paleyscope
