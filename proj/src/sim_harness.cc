#include "mrac/sim_harness.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mrac/rng.h"

namespace mrac {

namespace {

constexpr std::uint64_t kInitialStream = 0;
constexpr std::uint64_t kReferenceStreamBase = 1ULL << 32;
constexpr Eigen::Index kTrackingWindow = 50;

Vector normal_vector(CounterRng& rng, Eigen::Index k, double stddev = 1.0) {
  Vector v(k);
  for (Eigen::Index i = 0; i < k; ++i) v(i) = stddev * rng.normal();
  return v;
}

Matrix rows_to_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

Vector reference_signal(const ReferenceSpec& spec, Eigen::Index t,
                        Eigen::Index p, std::uint64_t seed) {
  if (spec.kind == ReferenceSpec::Kind::Constant) {
    if (spec.value.size() != p) {
      throw DimensionError("constant reference must have p entries");
    }
    return spec.value;
  }
  CounterRng rng(spec.seed.value_or(seed),
                 kReferenceStreamBase + static_cast<std::uint64_t>(t));
  return normal_vector(rng, p, spec.stddev);
}

void Scenario::validate() const {
  check_pair(plant, model);
  controller.validate(plant.m());
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (max_steps < 1) throw ConfigError("max_steps must be positive");
  if (x0 && x0->size() != plant.n()) throw DimensionError("x0 must have n entries");
  if (xm0 && xm0->size() != plant.n()) {
    throw DimensionError("xm0 must have n entries");
  }
  if (reference.kind == ReferenceSpec::Kind::Constant &&
      reference.value.size() != model.p()) {
    throw DimensionError("constant reference must have p entries");
  }
  if (reference.kind == ReferenceSpec::Kind::NormalRandom &&
      !(reference.stddev >= 0.0)) {
    throw ConfigError("reference stddev must be nonnegative");
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "Converged";
    case Verdict::Unsolvable:
      return "Unsolvable";
    case Verdict::MaxSteps:
      return "MaxSteps";
  }
  return "unknown";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return 0;
    case Verdict::Unsolvable:
      return 2;
    case Verdict::MaxSteps:
      return 3;
  }
  return 1;
}

RunResult run(const Scenario& sc, RunOptions options) {
  sc.validate();
  const Eigen::Index n = sc.plant.n();
  const Eigen::Index m = sc.plant.m();
  const Eigen::Index p = sc.model.p();
  const double gamma = sc.controller.gamma;
  const double margin = gamma - 0.5 * gamma * gamma;
  const RankTolerance tol(sc.controller.rank_tol);

  CounterRng init_rng(sc.seed, kInitialStream);
  Vector x = sc.x0 ? *sc.x0 : normal_vector(init_rng, n);
  Vector xm = sc.xm0 ? *sc.xm0 : normal_vector(init_rng, n);

  ControllerConfig cfg = sc.controller;
  cfg.exploration_seed = sc.seed;
  AdaptiveController ctrl(sc.model, m, cfg);
  RunResult out;
  RunReport& rep = out.report;
  RunDiagnostics& diag = rep.diagnostics;
  rep.seed = sc.seed;

  std::vector<double> e_window;
  auto log_step = [&](Eigen::Index t, InputMode mode, const Vector& u,
                      double residual, double matching, bool informative) {
    const double e = (x - xm).norm();
    e_window.push_back(e);
    if (static_cast<Eigen::Index>(e_window.size()) > kTrackingWindow) {
      e_window.erase(e_window.begin());
    }
    if (!options.keep_log) return;
    out.log.push_back(StepRecord{t, mode, u, x, xm, e, residual, matching,
                                 informative});
  };

  const GainPair zero{Matrix::Zero(m, n), Matrix::Zero(m, p)};
  Vector u = ctrl.start(x);
  log_step(0, InputMode::Initial, u, ctrl.residual_sq(),
           matching_residual(sc.plant, sc.model, zero), false);
  {
    const Vector r = reference_signal(sc.reference, 0, p, sc.seed);
    const Vector x_next = step(sc.plant, x, u);
    xm = reference_step(sc.model, xm, r);
    ctrl.advance(u, x, x_next);
    x = x_next;
  }

  for (Eigen::Index t = 1;; ++t) {
    const bool had_tstar = ctrl.tracker().t_star.has_value();
    ctrl.update_informativity();
    const auto& tracker = ctrl.tracker();
    if (!had_tstar && tracker.t_star) {
      const DataBuffers& b = ctrl.buffers();
      diag.data_rank_at_tstar = numeric_rank(vstack(b.Xm, b.U), tol);
      const Matrix phi = b.X();
      const Matrix target = target_block(sc.model.Am(), sc.model.Bm());
      diag.v_solution_residual =
          (phi * min_norm_solve(phi, target, tol) - target).norm() /
          (1.0 + target.norm());
    }
    const double residual = ctrl.residual_sq();
    rep.t_star = tracker.t_star;
    rep.stop_step = t;
    rep.final_residual_sq = residual;

    if (tracker.unsolvable) {
      rep.verdict = Verdict::Unsolvable;
      break;
    }
    if (tracker.t_star && t > *tracker.t_star && residual <= sc.epsilon) {
      rep.verdict = Verdict::Converged;
      break;
    }
    if (t >= sc.max_steps) {
      rep.verdict = Verdict::MaxSteps;
      break;
    }

    const Vector r = reference_signal(sc.reference, t, p, sc.seed);
    const InputChoice choice = ctrl.choose_input(x, r);
    int rank_before = 0;
    if (choice.mode == InputMode::Exploration) {
      ++diag.exploration_steps;
      if (t >= tracker.horizon()) ++diag.late_exploration_steps;
      const DataBuffers& b = ctrl.buffers();
      rank_before = numeric_rank(vstack(b.Xm, b.U), tol);
    }
    const std::optional<double> v_before = ctrl.lyapunov();
    const double phi_f2 = ctrl.buffers().X().squaredNorm();

    const double matching =
        matching_residual(sc.plant, sc.model, ctrl.gains());
    log_step(t, choice.mode, choice.u, residual, matching,
             tracker.t_star.has_value());
    if (tracker.t_star && t > *tracker.t_star) {
      diag.max_state_after_tstar = std::max(diag.max_state_after_tstar, x.norm());
      diag.max_input_after_tstar =
          std::max(diag.max_input_after_tstar, choice.u.norm());
    }

    const Vector x_next = step(sc.plant, x, choice.u);
    if (!std::isfinite(x_next.norm())) {
      // The state overflowed; stop and say where.
      diag.diverged_at = t + 1;
      rep.verdict = Verdict::MaxSteps;
      break;
    }
    xm = reference_step(sc.model, xm, r);
    ctrl.advance(choice.u, x, x_next);
    x = x_next;

    if (choice.mode == InputMode::Exploration) {
      const DataBuffers& b = ctrl.buffers();
      if (numeric_rank(vstack(b.Xm, b.U), tol) != rank_before + 1) {
        ++diag.exploration_rank_failures;
      }
    }
    if (v_before) {
      const std::optional<double> v_after = ctrl.lyapunov();
      if (v_after) {
        ++diag.lyapunov_steps;
        const double increase = *v_after - *v_before;
        diag.max_lyapunov_increase =
            std::max(diag.max_lyapunov_increase, increase);
        if (*v_after > *v_before * (1.0 + 1e-12) + 1e-12) {
          ++diag.lyapunov_violations;
        }
        // V(t+1) - V(t) <= -(gamma - gamma^2/2) |Phi_X Theta - M|^2 / |Phi_X|^2
        const double bound = -margin * residual / phi_f2;
        if (increase > bound + 1e-12 * (1.0 + *v_before)) {
          ++diag.decrease_violations;
        }
      }
    }
    diag.longest_hold =
        std::max<Eigen::Index>(diag.longest_hold, ctrl.buffers().held_steps);
  }

  rep.final_gains = ctrl.gains();
  rep.final_matching_error =
      matching_residual(sc.plant, sc.model, rep.final_gains);
  if (!e_window.empty()) {
    double s = 0.0;
    for (double e : e_window) s += e;
    diag.mean_e_final = s / static_cast<double>(e_window.size());
  }
  diag.starvation_warning = diag.longest_hold > 10 * (n + m);
  return out;
}

namespace {

Scenario numerical_system() {
  StateSpacePlant plant(
      rows_to_matrix({{-1.1, -0.85, -0.1, -0.62},
                      {-0.24, -0.65, 0.77, -0.34},
                      {-1.57, -0.26, -0.36, -1.2},
                      {0.33, -0.99, -0.43, 0.56}}),
      rows_to_matrix({{0.35, 0.52, 0.01},
                      {0.39, -0.14, 1.45},
                      {1.04, 0.98, 1.16},
                      {0.13, 0.34, -0.29}}));
  ReferenceModel model(
      rows_to_matrix({{-0.75, -0.32, 0.24, -0.27},
                      {0.15, 0.66, -0.29, 0.05},
                      {-0.53, 1.88, -0.48, -0.16},
                      {0.46, -0.94, -0.01, 0.69}}),
      rows_to_matrix({{0.52, -0.86, -0.69},
                      {-0.14, 1.2, 0.67},
                      {0.98, -0.86, -0.92},
                      {0.34, -0.76, -0.55}}));
  Scenario s(std::move(plant), std::move(model));
  s.max_steps = 10000;
  return s;
}

Scenario aircraft() {
  const Matrix b = rows_to_matrix({{-0.2436, -0.1708, -0.0050, -0.1997},
                                   {-0.4621, -0.3160, 0.2240, -0.3118},
                                   {0, 0, 0, 0}});
  StateSpacePlant plant(rows_to_matrix({{0.9810, 0.9831, -0.0007},
                                        {0.0012, 0.9737, 0},
                                        {0, 0.01, 1}}),
                        b);
  ReferenceModel model(rows_to_matrix({{0.98, 0.6484, -0.7487},
                                       {-0.0008, 0.2964, -1.5178},
                                       {0, 0.01, 1}}),
                       b);
  Scenario s(std::move(plant), std::move(model));
  s.max_steps = 20000;
  return s;
}

}  // namespace

std::vector<Scenario> paper_scenarios() {
  std::vector<Scenario> out;
  for (int k = 0; k < 8; ++k) {
    Scenario s = k < 4 ? numerical_system() : aircraft();
    s.name = "S" + std::to_string(k + 1);
    s.seed = static_cast<std::uint64_t>(k + 1);
    s.controller.gamma = 1.99;
    s.controller.sigma = 100.0;
    s.epsilon = 1e-10;
    if (k % 4 >= 2) {
      s.reference.kind = ReferenceSpec::Kind::Constant;
      s.reference.value = Vector::Constant(s.model.p(), 0.1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Scenario paper_scenario(const std::string& name) {
  for (auto& s : paper_scenarios()) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "' (expected S1..S8)");
}

Scenario unsolvable_scenario() {
  StateSpacePlant plant(rows_to_matrix({{0, 1}, {0, 0}}),
                        rows_to_matrix({{0}, {1}}));
  ReferenceModel model(rows_to_matrix({{0, 1}, {0, 0.5}}),
                       rows_to_matrix({{1}, {1}}));
  Scenario s(std::move(plant), std::move(model));
  s.name = "unsolvable";
  s.max_steps = 100;
  return s;
}

// JSON ----------------------------------------------------------------------

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw ConfigError(what + ": expected a non-empty array of arrays");
  }
  Matrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != j[0].size()) {
      throw ConfigError(what + ": ragged rows");
    }
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      if (!j[i][k].is_number()) throw ConfigError(what + ": non-numeric entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(what + ": expected a non-empty array");
  }
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + ": non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

namespace {

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return j.at(key);
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
  try {
    const auto& pj = require(j, "plant");
    const auto& mj = require(j, "model");
    Scenario s(StateSpacePlant(matrix_from_json(require(pj, "A"), "plant.A"),
                               matrix_from_json(require(pj, "B"), "plant.B")),
               ReferenceModel(matrix_from_json(require(mj, "Am"), "model.Am"),
                              matrix_from_json(require(mj, "Bm"), "model.Bm")));
    s.name = j.value("name", std::string("custom"));
    if (j.contains("reference")) {
      const auto& rj = j.at("reference");
      const std::string kind = rj.value("kind", std::string("normal"));
      if (kind == "normal" || kind == "NormalRandom") {
        s.reference.kind = ReferenceSpec::Kind::NormalRandom;
        s.reference.stddev = rj.value("stddev", 1.0);
        if (rj.contains("seed") && !rj.at("seed").is_null()) {
          s.reference.seed = rj.at("seed").get<std::uint64_t>();
        }
      } else if (kind == "constant" || kind == "Constant") {
        s.reference.kind = ReferenceSpec::Kind::Constant;
        s.reference.value = vector_from_json(require(rj, "vector"), "reference.vector");
      } else {
        throw ConfigError("reference.kind must be 'normal' or 'constant'");
      }
    }
    if (j.contains("x0") && !j.at("x0").is_null()) {
      s.x0 = vector_from_json(j.at("x0"), "x0");
    }
    if (j.contains("xm0") && !j.at("xm0").is_null()) {
      s.xm0 = vector_from_json(j.at("xm0"), "xm0");
    }
    if (j.contains("controller")) {
      const auto& cj = j.at("controller");
      ControllerConfig& c = s.controller;
      c.gamma = cj.value("gamma", c.gamma);
      c.sigma = cj.value("sigma", c.sigma);
      c.c_r = cj.value("c_r", c.c_r);
      if (cj.contains("u0") && !cj.at("u0").is_null()) {
        c.u0 = vector_from_json(cj.at("u0"), "controller.u0");
      }
      if (cj.contains("exploration_scale")) {
        const std::string scale = cj.at("exploration_scale").get<std::string>();
        if (scale == "absolute") c.exploration_scale = ExplorationScale::Absolute;
        else if (scale == "state") c.exploration_scale = ExplorationScale::State;
        else throw ConfigError("exploration_scale must be 'absolute' or 'state'");
      }
      c.normalize_before_informative =
          cj.value("normalize_before_informative", c.normalize_before_informative);
      if (cj.contains("tolerances")) {
        const auto& tj = cj.at("tolerances");
        c.rank_tol = tj.value("rank", c.rank_tol);
        c.img_tol = tj.value("image", c.img_tol);
      }
    }
    s.epsilon = j.value("epsilon", s.epsilon);
    s.max_steps = j.value("max_steps", s.max_steps);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["plant"] = {{"A", matrix_to_json(s.plant.A())}, {"B", matrix_to_json(s.plant.B())}};
  j["model"] = {{"Am", matrix_to_json(s.model.Am())}, {"Bm", matrix_to_json(s.model.Bm())}};
  if (s.reference.kind == ReferenceSpec::Kind::Constant) {
    j["reference"] = {{"kind", "constant"}, {"vector", vector_to_json(s.reference.value)}};
  } else {
    j["reference"] = {{"kind", "normal"}, {"stddev", s.reference.stddev}};
    j["reference"]["seed"] = s.reference.seed
                                 ? nlohmann::json(*s.reference.seed)
                                 : nlohmann::json(nullptr);
  }
  j["x0"] = s.x0 ? vector_to_json(*s.x0) : nlohmann::json(nullptr);
  j["xm0"] = s.xm0 ? vector_to_json(*s.xm0) : nlohmann::json(nullptr);
  const ControllerConfig& c = s.controller;
  j["controller"] = {
      {"gamma", c.gamma},
      {"sigma", c.sigma},
      {"u0", c.u0.size() ? vector_to_json(c.u0) : nlohmann::json(nullptr)},
      {"c_r", c.c_r},
      {"exploration_scale",
       c.exploration_scale == ExplorationScale::State ? "state" : "absolute"},
      {"normalize_before_informative", c.normalize_before_informative},
      {"tolerances", {{"rank", c.rank_tol}, {"image", c.img_tol}}}};
  j["epsilon"] = s.epsilon;
  j["max_steps"] = s.max_steps;
  j["seed"] = s.seed;
  j["rng"] = CounterRng::kName;
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["t_star"] = r.t_star ? nlohmann::json(*r.t_star) : nlohmann::json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["stop_step"] = r.stop_step;
  j["K"] = matrix_to_json(r.final_gains.K);
  j["L"] = matrix_to_json(r.final_gains.L);
  j["final_matching_error"] = r.final_matching_error;
  j["final_residual_sq"] = r.final_residual_sq;
  j["seed"] = r.seed;
  const RunDiagnostics& d = r.diagnostics;
  j["diagnostics"] = {
      {"exploration_steps", d.exploration_steps},
      {"exploration_rank_failures", d.exploration_rank_failures},
      {"lyapunov_violations", d.lyapunov_violations},
      {"decrease_violations", d.decrease_violations},
      {"max_state_after_t_star", d.max_state_after_tstar},
      {"mean_tracking_error_final", d.mean_e_final},
      {"data_rank_at_t_star",
       d.data_rank_at_tstar ? nlohmann::json(*d.data_rank_at_tstar)
                            : nlohmann::json(nullptr)},
      {"starvation_warning", d.starvation_warning},
      {"diverged_at", d.diverged_at ? nlohmann::json(*d.diverged_at)
                                    : nlohmann::json(nullptr)}};
  return j;
}

// Files ---------------------------------------------------------------------

std::string step_log_header(Eigen::Index n, Eigen::Index m) {
  std::ostringstream os;
  os << "t,mode";
  for (Eigen::Index k = 1; k <= m; ++k) os << ",u_" << k;
  for (Eigen::Index k = 1; k <= n; ++k) os << ",x_" << k;
  for (Eigen::Index k = 1; k <= n; ++k) os << ",xm_" << k;
  os << ",e_norm,residual_sq,matching_error,informative";
  return os.str();
}

void export_csv(const std::vector<StepRecord>& log, Eigen::Index n,
                Eigen::Index m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << std::setprecision(17) << step_log_header(n, m) << "\n";
  for (const auto& rec : log) {
    out << rec.t << "," << to_string(rec.mode);
    for (Eigen::Index k = 0; k < rec.u.size(); ++k) out << "," << rec.u(k);
    for (Eigen::Index k = 0; k < rec.x.size(); ++k) out << "," << rec.x(k);
    for (Eigen::Index k = 0; k < rec.xm.size(); ++k) out << "," << rec.xm(k);
    out << "," << rec.e_norm << "," << rec.residual_sq << ","
        << rec.matching_error << "," << (rec.informative ? 1 : 0) << "\n";
  }
}

void export_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << report_to_json(report).dump(2) << "\n";
}

namespace {

struct Series {
  std::string label;
  std::vector<double> y;
};

// Static line chart. With log_y, nonpositive samples are dropped.
void write_svg(const std::string& path, const std::string& title,
               const std::vector<double>& t, const std::vector<Series>& series,
               bool log_y) {
  const double w = 800, h = 400, left = 70, right = 20, top = 40, bottom = 40;
  double x0 = t.empty() ? 0 : t.front(), x1 = t.empty() ? 1 : t.back();
  if (x1 <= x0) x1 = x0 + 1;
  double y0 = INFINITY, y1 = -INFINITY;
  auto tr = [&](double v) { return log_y ? std::log10(v) : v; };
  for (const auto& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v) || (log_y && v <= 0)) continue;
      y0 = std::min(y0, tr(v));
      y1 = std::max(y1, tr(v));
    }
  }
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double v) { return top + (y1 - v) / (y1 - y0) * (h - top - bottom); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
      << w - left - right << "\" height=\"" << h - top - bottom
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = y0 + (y1 - y0) * k / 4.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << (log_y ? "1e" : "") << std::setprecision(3) << v
        << std::setprecision(6) << "</text>\n";
  }
  out << "<text x=\"" << w - right << "\" y=\"" << h - 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">t = "
      << x1 << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < t.size() && i < series[s].y.size(); ++i) {
      const double v = series[s].y[i];
      if (!std::isfinite(v) || (log_y && v <= 0)) continue;
      out << px(t[i]) << "," << py(tr(v)) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << left + 10 + 90 * s << "\" y=\"" << top + 16
        << "\" fill=\"" << color << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

std::vector<std::string> emit_plots(const std::vector<StepRecord>& log,
                                    const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<double> t;
  Series e{"|e|", {}}, match{"matching error", {}}, resid{"residual^2", {}};
  std::vector<Series> inputs;
  for (const auto& rec : log) {
    t.push_back(static_cast<double>(rec.t));
    e.y.push_back(rec.e_norm);
    match.y.push_back(rec.matching_error);
    resid.y.push_back(rec.residual_sq);
    if (inputs.empty()) {
      for (Eigen::Index k = 0; k < rec.u.size(); ++k) {
        inputs.push_back(Series{"u_" + std::to_string(k + 1), {}});
      }
    }
    for (Eigen::Index k = 0; k < rec.u.size(); ++k) inputs[k].y.push_back(rec.u(k));
  }
  const std::filesystem::path base(dir);
  std::vector<std::string> paths = {
      (base / "tracking_error.svg").string(), (base / "matching_error.svg").string(),
      (base / "residual.svg").string(), (base / "inputs.svg").string()};
  write_svg(paths[0], "tracking error |x - xm|", t, {e}, true);
  write_svg(paths[1], "matching error", t, {match}, true);
  write_svg(paths[2], "|Phi_X Theta - M|_F^2", t, {resid}, true);
  write_svg(paths[3], "inputs", t, inputs, false);
  return paths;
}

}  // namespace mrac
