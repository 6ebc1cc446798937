#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "paraqk/error.hpp"
#include "paraqk/verify/suites.hpp"

// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or domain error.
int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of the HK/QK correspondence and the c-map"};
  std::string config_path;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  bool list = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--suite", suites, "restrict to these suites (repeatable)");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--out", out_path, "report path (default: config 'out', else stdout)");
  app.add_flag("--list-checks", list, "print the check catalogue and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& c : paraqk::verify::check_catalogue()) std::printf("%-32s %s\n", c.id.c_str(), c.anchor.c_str());
    return 0;
  }
  if (config_path.empty()) {
    std::cerr << "verify: --config is required\n";
    return 2;
  }

  try {
    auto cfg = paraqk::verify::load_config(config_path);
    if (!suites.empty()) {
      nlohmann::json patch = paraqk::verify::to_json(cfg);
      patch["suites"] = suites;
      auto selected = paraqk::verify::parse_config(patch);
      cfg.suites = selected.suites;
    }
    if (seed) cfg.seed = *seed;
    if (!out_path.empty()) cfg.out = out_path;

    const auto report = paraqk::verify::run_suite(cfg);
    const std::string text = paraqk::verify::to_text(report);
    if (cfg.out) {
      std::ofstream out(*cfg.out, std::ios::binary);
      if (!out) {
        std::cerr << "verify: cannot write " << *cfg.out << "\n";
        return 2;
      }
      out << text;
    } else {
      std::cout << text;
    }
    for (const auto& r : report.checks) {
      if (!r.pass)
        std::cerr << "FAIL " << r.spec.id << " value=" << r.value << " tol=" << r.spec.tol
                  << (r.errors ? " (" + r.first_error + ")" : std::string()) << "\n";
    }
    std::cerr << report.checks.size() - static_cast<std::size_t>(report.failed) << "/" << report.checks.size()
              << " checks passed\n";
    return report.pass() ? 0 : 1;
  } catch (const paraqk::ConfigError& e) {
    std::cerr << "verify: config error: " << e.what() << "\n";
    return 2;
  } catch (const paraqk::DomainError& e) {
    std::cerr << "verify: domain error: " << e.what() << "\n";
    return 2;
  } catch (const paraqk::Error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }
}
