// mrac: run adaptive model reference control scenarios and inspect data.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "mrac/sim_harness.h"

namespace fs = std::filesystem;
using namespace mrac;

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

int run_and_write(Scenario sc, const std::optional<std::uint64_t>& seed,
                  const std::string& out_dir, bool plot) {
  if (seed) sc.seed = *seed;
  sc.validate();
  const RunResult res = run(sc);
  const nlohmann::json report = report_to_json(res.report);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    export_report(res.report, (fs::path(out_dir) / "report.json").string());
    export_csv(res.log, sc.plant.n(), sc.plant.m(),
               (fs::path(out_dir) / "steps.csv").string());
    if (plot) emit_plots(res.log, out_dir);
  }
  std::cout << report.dump(2) << "\n";
  return exit_code(res.report.verdict);
}

void print_matrix(const std::string& name, const Matrix& m) {
  std::cout << name << " =\n";
  const Eigen::IOFormat fmt(8, 0, "  ", "\n", "  ", "");
  std::cout << std::setprecision(8) << m.format(fmt) << "\n";
}

// The model file may be a scenario (model under "model", optional "plant") or
// a bare {"Am": ..., "Bm": ...} object.
int check(const std::string& data_path, const std::string& model_path) {
  const nlohmann::json j = read_json(model_path);
  const nlohmann::json& mj = j.contains("model") ? j.at("model") : j;
  const ReferenceModel model(matrix_from_json(mj.at("Am"), "Am"),
                             matrix_from_json(mj.at("Bm"), "Bm"));
  const Trajectory traj = read_trajectory_csv(data_path);
  if (traj.n() != model.n()) {
    throw DimensionError("data have " + std::to_string(traj.n()) +
                         " states, model has " + std::to_string(model.n()));
  }
  const int rank = numeric_rank(vstack(traj.X_minus(), traj.U_minus()));
  const bool sysid = informative_for_sysid(traj);
  const bool mrc = informative_for_mrc(traj, model);
  std::cout << "samples: " << traj.length() << "\n"
            << "rank [X-; U-]: " << rank << " of " << traj.n() + traj.m()
            << "\n"
            << "informative for system identification: "
            << (sysid ? "yes" : "no") << "\n"
            << "informative for model reference control: "
            << (mrc ? "yes" : "no") << "\n";
  if (!mrc) return 0;
  const GainPair g = gains_from_data(traj, model);
  print_matrix("K", g.K);
  print_matrix("L", g.L);
  if (j.contains("plant")) {
    const StateSpacePlant plant(matrix_from_json(j["plant"].at("A"), "A"),
                                matrix_from_json(j["plant"].at("B"), "B"));
    std::cout << "matching residual against plant: " << std::setprecision(6)
              << matching_residual(plant, model, g) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-driven model reference adaptive control"};
  app.require_subcommand(1);

  std::string config, out_dir, scenario, data, model_file;
  std::optional<std::uint64_t> seed;
  bool plot = false;

  auto* sim = app.add_subcommand("simulate", "run a scenario file");
  sim->add_option("--config", config, "scenario JSON")->required();
  sim->add_option("--seed", seed, "override the scenario seed");
  sim->add_option("--out", out_dir, "directory for report.json and steps.csv");
  sim->add_flag("--plot", plot, "also write SVG plots into --out");

  auto* paper = app.add_subcommand("paper", "run a built-in preset");
  paper->add_option("--scenario", scenario, "S1..S8")->required();
  paper->add_option("--seed", seed, "override the preset seed");
  paper->add_option("--out", out_dir, "directory for report, log and plots");

  auto* chk = app.add_subcommand("check", "informativity of recorded data");
  chk->add_option("--data", data, "trajectory CSV")->required();
  chk->add_option("--model", model_file, "reference model JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      if (plot && out_dir.empty()) throw ConfigError("--plot needs --out");
      return run_and_write(load_scenario(config), seed, out_dir, plot);
    }
    if (*paper) return run_and_write(paper_scenario(scenario), seed, out_dir, true);
    return check(data, model_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
