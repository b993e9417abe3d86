// hc3: command-line front end over the hc3 library.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hc3/cli.hpp"

namespace {

std::string usage_commands() {
  std::string s = "commands:";
  for (const auto& [name, cmd] : hc3::cli::command_names()) s += " " + name;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  using hc3::cli::Range;

  CLI::App app{"Surface critical field spectral toolkit"};
  app.footer(usage_commands() + "\nHC3_THREADS caps the number of worker threads.");

  std::string command, format;
  std::optional<double> b, b_min, b_max, b_step, kappa, k_min, k_max_range, k_step, at;
  std::optional<std::string> zeta_path;
  hc3::cli::RunConfig config;

  app.add_option("command", command, "what to compute")->required();
  app.add_option("--b", b, "field strength B");
  app.add_option("--b-min", b_min, "first B of a sweep");
  app.add_option("--b-max", b_max, "last B of a sweep");
  app.add_option("--b-step", b_step, "B sweep step");
  app.add_option("--kappa", kappa, "Ginzburg-Landau parameter");
  app.add_option("--kappa-min", k_min, "first kappa of a sweep");
  app.add_option("--kappa-max", k_max_range, "last kappa of a sweep");
  app.add_option("--kappa-step", k_step, "kappa sweep step");
  app.add_option("--at", at, "zeta for the mu command (default xi0)");
  app.add_option("--zeta", zeta_path, "CSV file of j,zeta_j rows for the series command");
  app.add_option("--order", config.order, "number of eta terms minus one")->capture_default_str();
  app.add_option("--k-max", config.k_max, "maximal boundary curvature")->capture_default_str();
  app.add_option("--k2", config.k2, "minus the second derivative of curvature at its maximum")->capture_default_str();
  app.add_option("--grid-l", config.grid_l, "half-line grid length")->capture_default_str();
  app.add_option("--grid-n", config.grid_n, "half-line grid points")->capture_default_str();
  app.add_option("--radial-n", config.radial_n, "radial cells per unit boundary-layer depth")->capture_default_str();
  app.add_option("--format", format, "json or csv (default depends on the command)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto cmd = hc3::cli::parse_command(command);
  if (!cmd) {
    std::cerr << "unknown command '" << command << "'\n" << app.help() << '\n';
    return 2;
  }
  config.command = *cmd;

  if (!format.empty()) {
    config.format = hc3::cli::parse_format(format);
    if (!config.format) {
      std::cerr << "error: --format must be json or csv\n";
      return 2;
    }
  }

  auto make_range = [](const char* name, const std::optional<double>& lo, const std::optional<double>& hi,
                       const std::optional<double>& step) -> std::optional<std::optional<Range>> {
    if (!lo && !hi && !step) return std::optional<Range>{};
    if (!lo || !hi || !step) {
      std::cerr << "error: --" << name << "-min, --" << name << "-max and --" << name
                << "-step must be given together\n";
      return std::nullopt;
    }
    return std::optional<Range>{Range{*lo, *hi, *step}};
  };
  const auto br = make_range("b", b_min, b_max, b_step);
  const auto kr = make_range("kappa", k_min, k_max_range, k_step);
  if (!br || !kr) return 2;
  config.b = b;
  config.b_range = *br;
  config.kappa = kappa;
  config.kappa_range = *kr;
  config.at = at;
  config.zeta_path = zeta_path;

  return hc3::cli::run(config, std::cout, std::cerr);
}
