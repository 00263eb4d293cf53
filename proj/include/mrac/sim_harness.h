#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrac/adaptive_controller.h"

namespace mrac {

struct ReferenceSpec {
  enum class Kind { NormalRandom, Constant };
  Kind kind = Kind::NormalRandom;
  double stddev = 1.0;
  Vector value;                        // Constant only
  std::optional<std::uint64_t> seed;   // NormalRandom; falls back to the scenario seed
};

// r(t). NormalRandom draws are a pure function of (seed, t), so the signal
// does not depend on how many earlier samples were taken.
Vector reference_signal(const ReferenceSpec& spec, Eigen::Index t,
                        Eigen::Index p, std::uint64_t seed);

struct Scenario {
  std::string name;
  StateSpacePlant plant;
  ReferenceModel model;
  ReferenceSpec reference;
  std::optional<Vector> x0;   // standard normal from the seed when absent
  std::optional<Vector> xm0;
  ControllerConfig controller;
  double epsilon = 1e-10;
  Eigen::Index max_steps = 10000;
  std::uint64_t seed = 0;

  Scenario(StateSpacePlant p, ReferenceModel m)
      : plant(std::move(p)), model(std::move(m)) {}

  void validate() const;
};

enum class Verdict { Converged, Unsolvable, MaxSteps };

std::string to_string(Verdict v);
int exit_code(Verdict v);

struct StepRecord {
  Eigen::Index t = 0;
  InputMode mode = InputMode::Adaptive;
  Vector u;
  Vector x;
  Vector xm;
  double e_norm = 0.0;
  double residual_sq = 0.0;
  double matching_error = 0.0;
  bool informative = false;
};

// Checks evaluated while the loop runs.
struct RunDiagnostics {
  Eigen::Index exploration_steps = 0;
  Eigen::Index exploration_rank_failures = 0;  // u_r that did not add rank 1
  Eigen::Index late_exploration_steps = 0;     // exploration at t >= n + m
  Eigen::Index lyapunov_steps = 0;
  Eigen::Index lyapunov_violations = 0;  // V(t+1) > V(t)(1 + 1e-12) + 1e-12
  Eigen::Index decrease_violations = 0;  // strict decrease bound broken
  double max_lyapunov_increase = 0.0;
  double max_state_after_tstar = 0.0;
  double max_input_after_tstar = 0.0;
  double mean_e_final = 0.0;  // mean |e| over the last 50 logged steps
  std::optional<int> data_rank_at_tstar;  // rank [X-; U-] at T*
  double v_solution_residual = 0.0;       // solve_v residual at T*
  Eigen::Index longest_hold = 0;
  bool starvation_warning = false;
  // First step whose state overflowed. The run stops there with verdict
  // MaxSteps.
  std::optional<Eigen::Index> diverged_at;
};

struct RunReport {
  std::optional<Eigen::Index> t_star;
  Verdict verdict = Verdict::MaxSteps;
  Eigen::Index stop_step = 0;
  GainPair final_gains;
  double final_matching_error = 0.0;
  double final_residual_sq = 0.0;
  std::uint64_t seed = 0;
  RunDiagnostics diagnostics;
};

struct RunResult {
  RunReport report;
  std::vector<StepRecord> log;
};

struct RunOptions {
  bool keep_log = true;
};

RunResult run(const Scenario& scenario, RunOptions options = {});

// Presets S1..S8: S1-S4 the 4-state system, S5-S8 the aircraft. Odd/even
// pairs differ by seed; S1, S2, S5, S6 use a normal reference, the others a
// constant one.
std::vector<Scenario> paper_scenarios();
Scenario paper_scenario(const std::string& name);

// The 2-state pair whose matching equations have no solution.
Scenario unsolvable_scenario();

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

nlohmann::json report_to_json(const RunReport& r);

std::string step_log_header(Eigen::Index n, Eigen::Index m);
void export_csv(const std::vector<StepRecord>& log, Eigen::Index n,
                Eigen::Index m, const std::string& path);
void export_report(const RunReport& report, const std::string& path);
// One SVG per panel: tracking error, matching error, residual, inputs.
// Returns the written paths.
std::vector<std::string> emit_plots(const std::vector<StepRecord>& log,
                                    const std::string& dir);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);
Vector vector_from_json(const nlohmann::json& j, const std::string& what);

}  // namespace mrac
