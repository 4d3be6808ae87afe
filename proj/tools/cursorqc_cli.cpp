// Command-line front end: `cursorqc grover|custom|validate [options]`.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "cursorqc/app.hpp"

namespace {

using Settings = std::vector<std::pair<std::string, std::string>>;

void add_setting(CLI::App* cmd, Settings& settings, const std::string& key, const std::string& help) {
  cmd->add_option_function<std::string>(
      "--" + key, [&settings, key](const std::string& v) { settings.emplace_back(key, v); }, help);
}

void add_emit(CLI::App* cmd, Settings& settings) {
  cmd->add_option_function<std::vector<std::string>>(
         "--emit",
         [&settings](const std::vector<std::string>& v) {
           for (const auto& item : v) settings.emplace_back("emit", item);
         },
         "outputs: bloch, entropy, success, collapse, energy, variance (comma separated; default all)")
      ->delimiter(',');
}

void add_common(CLI::App* cmd, Settings& settings, std::string& config_path) {
  cmd->add_option("--config", config_path, "settings file, one key=value per line");
  add_setting(cmd, settings, "lambda", "cursor coupling (default 1)");
}

void add_run_options(CLI::App* cmd, Settings& settings) {
  add_setting(cmd, settings, "t-max", "end of the time series (default 2 s / lambda)");
  add_setting(cmd, settings, "dt", "time-series sampling step (default 0.5)");
  add_setting(cmd, settings, "tau", "readout time for collapse/energy outputs (default: optimal tau)");
  add_setting(cmd, settings, "out-dir", "directory for CSV output (default .)");
  add_emit(cmd, settings);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clocked reversible computation on a quantum cursor: simulation and checks"};
  Settings settings;
  std::string config_path;
  app.add_option("--config", config_path, "settings file, one key=value per line (mode=grover|custom|validate)");
  app.require_subcommand(0, 1);

  auto* grover = app.add_subcommand("grover", "Grover-parameterized qubit example");
  add_common(grover, settings, config_path);
  add_setting(grover, settings, "mu", "marked-word length; s = 2^mu + 1");
  add_run_options(grover, settings);

  auto* custom = app.add_subcommand("custom", "qubit example with explicit s, theta, alpha");
  add_common(custom, settings, config_path);
  add_setting(custom, settings, "s", "number of cursor sites");
  add_setting(custom, settings, "theta", "initial polar angle of the register");
  add_setting(custom, settings, "alpha", "rotation angle about e2 per step");
  add_run_options(custom, settings);

  auto* validate = app.add_subcommand("validate", "run the oracle cross-checks");
  add_common(validate, settings, config_path);
  add_setting(validate, settings, "mu", "marked-word length (default 5)");
  add_setting(validate, settings, "dt", "RK4 step of the oracle integrations (default 0.005)");

  CLI11_PARSE(app, argc, argv);

  if (app.get_subcommands().empty() && config_path.empty()) {
    std::cerr << app.help();
    return 1;
  }

  cursorqc::app::RunConfig cfg;
  try {
    if (!config_path.empty()) cursorqc::app::apply_config_file(cfg, config_path);
    if (grover->parsed()) cfg.mode = cursorqc::app::Mode::grover;
    if (custom->parsed()) cfg.mode = cursorqc::app::Mode::custom;
    if (validate->parsed()) cfg.mode = cursorqc::app::Mode::validate;
    for (const auto& [key, value] : settings) cursorqc::app::apply_setting(cfg, key, value);
    cursorqc::app::check_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (cfg.mode == cursorqc::app::Mode::validate) {
    try {
      const auto report = cursorqc::app::validate(cfg);
      cursorqc::app::print_report(report, std::cout);
      return report.all_passed() ? 0 : 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return cursorqc::app::run(cfg, std::cout, std::cerr);
}
