// paleyscope: run one verification suite from a JSON config.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "paleyscope/config.hpp"
#include "paleyscope/experiment.hpp"
#include "paleyscope/parallel.hpp"

namespace ps = paleyscope;

namespace {

std::string suite_list() {
  std::string out;
  for (const auto& s : ps::suite_names()) out += (out.empty() ? "" : " | ") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral verification harness for time-dependent pseudo-differential kernels"};
  app.usage("paleyscope <suite> --config experiment.json [--out dir] [--threads N]\n"
            "  suites: " + suite_list());

  std::string suite_pos, suite_opt, config_path, out_dir = "out";
  std::string gamma;
  int dim = 0;
  int threads = -1;
  app.add_option("command", suite_pos, "Suite to run");
  app.add_option("--suite", suite_opt, "Suite to run (overrides the positional and the config)");
  app.add_option("-c,--config", config_path, "Experiment config (JSON)");
  app.add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("-j,--threads", threads, "Worker threads, 0 = auto (PALEY_THREADS fallback)");
  app.add_option("--gamma", gamma, "exponents: symbol order, e.g. 2 or 1/2");
  app.add_option("--dim", dim, "exponents: spatial dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ps::ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = ps::load_config(config_path);
    } else {
      cfg = ps::parse_config(nlohmann::json::object());
    }
    std::string requested = !suite_opt.empty() ? suite_opt : !suite_pos.empty() ? suite_pos : cfg.suite;
    if (requested.empty()) throw ps::ConfigError("no suite given");
    const auto suite = ps::canonical_suite(requested);
    if (!suite) throw ps::ConfigError("unknown suite '" + requested + "'");
    cfg.suite = *suite;
    if (config_path.empty() && cfg.suite != "exponents") {
      throw ps::ConfigError("--config is required for suite " + cfg.suite);
    }
    if (!gamma.empty()) {
      cfg.exponents.gamma = gamma;
      cfg.raw["exponents"]["gamma"] = gamma;
    }
    if (dim != 0) {
      cfg.exponents.dim = dim;
      cfg.raw["exponents"]["dim"] = dim;
    }
    if (threads >= 0) ps::set_thread_count(threads);
    return ps::run_experiment(cfg, out_dir, std::cerr);
  } catch (const ps::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
