#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace pointscatter::cli;

int main(int argc, char **argv) {
  CLI::App app{"Spectra, resonances and scattering for two relativistic point interactions",
               "pointscatter"};
  std::string task, config_path, out, format;
  std::optional<std::size_t> grid;
  std::optional<double> tol;
  std::optional<int> figure;

  std::string task_help = "one of:";
  for (const auto &[t, name] : task_names)
    task_help += std::string(" ") + name;
  app.add_option("task", task, task_help)->required();
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out, "output file (figure: output directory); stdout by default");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--grid", grid, "grid size for the task's main scan")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "tolerance for the task's main solver")->check(CLI::PositiveNumber);
  app.add_option("--figure", figure, "figure id 1..10 for the figure task");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_invalid;
  }

  RunConfig cfg;
  try {
    const Task t = parse_task(task);
    if (!config_path.empty())
      cfg = load_config(config_path);
    else if (t != Task::figure)
      throw ConfigError("--config is required for task '" + task + "'");
    cfg.task = t;
    if (!out.empty())
      cfg.out = out;
    if (!format.empty())
      cfg.format = parse_format(format);
    if (figure)
      cfg.figure = *figure;
    if (grid) {
      switch (cfg.task) {
      case Task::scatter: cfg.energies.count = *grid; break;
      case Task::resonances:
        cfg.seeds_nx = *grid;
        cfg.seeds_ny = std::max<std::size_t>(2, *grid / 2);
        break;
      default: cfg.grid = *grid; break;
      }
    }
    if (tol)
      cfg.tol = *tol;
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_invalid;
  }
  return run_task(cfg);
}
