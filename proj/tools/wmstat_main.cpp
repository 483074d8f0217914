// wmstat <experiment> --config <file> [--key value ...] --seed S --out path.csv
//
// Exit codes: 0 success, 1 runtime or resource limit, 2 configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "svg_plot.hpp"
#include "wmstat/csv.hpp"
#include "wmstat/error.hpp"
#include "wmstat/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kConfig = 2;

// "--key value" and "--key=value" pairs left over after the fixed options.
wmstat::ParamMap parse_overrides(const std::vector<std::string>& extras) {
  wmstat::ParamMap out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() == 2) {
      throw wmstat::ConfigError(tok, "unexpected argument '" + tok + "'");
    }
    std::string key = tok.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else if (i + 1 < extras.size()) {
      value = extras[++i];
    } else {
      throw wmstat::ConfigError(key, "parameter '" + key + "' has no value");
    }
    out[key] = value;
  }
  return out;
}

void print_registry() {
  for (const auto& e : wmstat::experiment_registry()) {
    std::cout << e.name << ": " << e.summary << '\n';
    for (const auto& p : e.params) {
      std::cout << "  " << p.name << " (default '" << p.default_value << "') " << p.help << '\n';
    }
  }
}

int plot_main(int argc, char** argv) {
  CLI::App app{"Render CSV columns as an SVG line plot"};
  std::string in_path, out_path, x;
  std::vector<std::string> y;
  wmstat::tools::PlotSpec spec;
  app.add_option("--in", in_path, "input CSV")->required();
  app.add_option("--out", out_path, "output SVG")->required();
  app.add_option("--x", spec.x, "x column")->required();
  app.add_option("--y", spec.y, "y columns")->required()->delimiter(',');
  app.add_option("--title", spec.title, "plot title");
  app.add_flag("--log-y", spec.log_y, "log10 y axis");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  try {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const wmstat::CsvTable table = wmstat::parse_csv(text);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    wmstat::tools::write_svg_plot(out, table, spec);
  } catch (const std::invalid_argument& e) {
    std::cerr << "wmstat plot: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "wmstat plot: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 2 && std::string(argv[1]) == "plot") return plot_main(argc - 1, argv + 1);
  if (argc >= 2 && std::string(argv[1]) == "list") {
    print_registry();
    return kOk;
  }

  CLI::App app{"Watermark detection experiments"};
  app.allow_extras();
  wmstat::ExperimentConfig cfg;
  std::string config_path;
  unsigned workers = 1;
  app.add_option("experiment", cfg.experiment, "ump | rates | agnostic | robust | schemes | list | plot")
      ->required();
  app.add_option("--config", config_path, "key=value parameter file");
  app.add_option("--seed", cfg.seed, "64-bit seed")->required();
  app.add_option("--out", cfg.output, "output CSV path, '-' for stdout")->required();
  app.add_option("--workers", workers, "worker threads (output does not depend on it)")
      ->check(CLI::Range(1U, 256U));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    wmstat::ParamMap params;
    if (!config_path.empty()) params = wmstat::load_config(config_path);
    cfg.params = wmstat::merge_params(std::move(params), parse_overrides(app.remaining()));
    wmstat::validate_config(cfg);

    const wmstat::CsvTable table = wmstat::run(cfg, workers);
    if (cfg.output == "-") {
      wmstat::write_csv(std::cout, table);
    } else {
      std::ofstream out(cfg.output, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write '" + cfg.output + "'");
      wmstat::write_csv(out, table);
      if (!out.flush()) throw std::runtime_error("write to '" + cfg.output + "' failed");
    }
  } catch (const wmstat::ConfigError& e) {
    std::cerr << "wmstat: config error [" << e.key() << "]: " << e.what() << '\n';
    return kConfig;
  } catch (const wmstat::ResourceLimitError& e) {
    std::cerr << "wmstat: resource limit: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::invalid_argument& e) {
    std::cerr << "wmstat: invalid configuration: " << e.what() << '\n';
    return kConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "wmstat: invalid configuration: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "wmstat: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
