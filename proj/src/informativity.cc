#include "mrac/informativity.h"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace mrac {

Trajectory::Trajectory(Matrix u_minus, Matrix x)
    : u_(std::move(u_minus)), x_(std::move(x)) {
  if (u_.cols() < 1) throw DimensionError("trajectory needs t >= 1");
  if (x_.cols() != u_.cols() + 1) {
    throw DimensionError("trajectory needs t inputs and t+1 states");
  }
}

Trajectory Trajectory::generate(const StateSpacePlant& plant, const Vector& x0,
                                const Matrix& inputs) {
  if (inputs.rows() != plant.m()) {
    throw DimensionError("generate: input rows differ from m");
  }
  Matrix x(plant.n(), inputs.cols() + 1);
  x.col(0) = x0;
  for (Eigen::Index k = 0; k < inputs.cols(); ++k) {
    x.col(k + 1) = step(plant, x.col(k), inputs.col(k));
  }
  return Trajectory(inputs, x);
}

Trajectory Trajectory::prefix(Eigen::Index t) const {
  if (t < 1 || t > length()) throw DimensionError("prefix out of range");
  return Trajectory(u_.leftCols(t), x_.leftCols(t + 1));
}

Matrix hankel(const Matrix& u, Eigen::Index depth) {
  const Eigen::Index m = u.rows();
  const Eigen::Index t = u.cols();
  if (depth < 1 || depth > t) {
    throw DimensionError("hankel: depth must lie in [1, t]");
  }
  const Eigen::Index cols = t - depth + 1;
  Matrix h(m * depth, cols);
  for (Eigen::Index i = 0; i < depth; ++i) {
    h.middleRows(i * m, m) = u.middleCols(i, cols);
  }
  return h;
}

bool is_pe(const Matrix& u, Eigen::Index order, RankTolerance tol) {
  return numeric_rank(hankel(u, order), tol) == u.rows() * order;
}

bool informative_for_sysid(const Trajectory& traj, RankTolerance tol) {
  return numeric_rank(vstack(traj.X_minus(), traj.U_minus()), tol) ==
         traj.n() + traj.m();
}

bool informative_for_mrc(const Matrix& x_minus, const Matrix& x_plus,
                         const ReferenceModel& model, RankTolerance tol) {
  const Matrix data = vstack(x_minus, x_plus);
  const Matrix augmented = hstack(data, target_block(model.Am(), model.Bm()));
  return numeric_rank(data, tol) == numeric_rank(augmented, tol);
}

bool informative_for_mrc(const Trajectory& traj, const ReferenceModel& model,
                         RankTolerance tol) {
  return informative_for_mrc(traj.X_minus(), traj.X_plus(), model, tol);
}

namespace {

double relative_residual(const Matrix& a, const Matrix& x, const Matrix& b) {
  return (a * x - b).norm() / (1.0 + b.norm());
}

}  // namespace

bool mrc_image_inclusion(const Trajectory& traj, const ReferenceModel& model,
                         double tol_img) {
  const Matrix data = vstack(traj.X_minus(), traj.X_plus());
  const Matrix target = target_block(model.Am(), model.Bm());
  const Matrix v = min_norm_solve(data, target);
  return relative_residual(data, v, target) <= tol_img;
}

VSolution solve_v(const Trajectory& traj, const ReferenceModel& model,
                  double tol_img) {
  const Matrix data = vstack(traj.X_minus(), traj.X_plus());
  const Matrix target = target_block(model.Am(), model.Bm());
  const Matrix v = min_norm_solve(data, target);
  VSolution out;
  out.residual = relative_residual(data, v, target);
  if (out.residual > tol_img) {
    std::ostringstream os;
    os << "solve_v: data not informative (relative residual " << out.residual
       << ")";
    throw PreconditionError(os.str());
  }
  out.V1 = v.leftCols(model.n());
  out.V2 = v.rightCols(model.p());
  return out;
}

GainPair gains_from_data(const Trajectory& traj, const ReferenceModel& model,
                         double tol_img) {
  const VSolution v = solve_v(traj, model, tol_img);
  return GainPair{traj.U_minus() * v.V1, traj.U_minus() * v.V2};
}

InformativeTimeTracker make_tracker(const ReferenceModel& model,
                                    Eigen::Index m, RankTolerance tol) {
  return InformativeTimeTracker(model.n(), m, numeric_rank(model.Bm(), tol));
}

InformativeTimeTracker update_tracker(InformativeTimeTracker tracker,
                                      Eigen::Index t, const Matrix& x_minus,
                                      const Matrix& x_plus,
                                      const ReferenceModel& model,
                                      RankTolerance tol) {
  if (tracker.t_star || tracker.unsolvable) return tracker;
  if (t >= tracker.lower_bound() &&
      informative_for_mrc(x_minus, x_plus, model, tol)) {
    tracker.t_star = t;
  } else if (t >= tracker.horizon()) {
    tracker.unsolvable = true;
  }
  return tracker;
}

InformativeTimeTracker update_tracker(InformativeTimeTracker tracker,
                                      const Trajectory& traj,
                                      const ReferenceModel& model,
                                      RankTolerance tol) {
  return update_tracker(tracker, traj.length(), traj.X_minus(),
                        traj.X_plus(), model, tol);
}

bool initial_excitation_holds(const Trajectory& traj, double delta) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  const Matrix z = vstack(traj.X_minus(), traj.U_minus());
  const Matrix gram = z * z.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalue computation did not converge");
  }
  return es.eigenvalues().minCoeff() > delta;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << std::setprecision(17);
  out << "t";
  for (Eigen::Index k = 0; k < traj.m(); ++k) out << ",u_" << k + 1;
  for (Eigen::Index k = 0; k < traj.n(); ++k) out << ",x_" << k + 1;
  out << "\n";
  for (Eigen::Index t = 0; t <= traj.length(); ++t) {
    out << t;
    for (Eigen::Index k = 0; k < traj.m(); ++k) {
      out << ",";
      if (t < traj.length()) out << traj.U_minus()(k, t);
    }
    for (Eigen::Index k = 0; k < traj.n(); ++k) out << "," << traj.X()(k, t);
    out << "\n";
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      if (cell.rfind("u_", 0) == 0) ++m;
      else if (cell.rfind("x_", 0) == 0) ++n;
    }
  }
  if (m == 0 || n == 0) throw Error(path + ": header needs u_* and x_* columns");

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    while (static_cast<Eigen::Index>(cells.size()) < 1 + m + n) {
      cells.emplace_back();
    }
    rows.push_back(std::move(cells));
  }
  if (rows.size() < 2) throw Error(path + ": need at least two rows");
  const Eigen::Index t = static_cast<Eigen::Index>(rows.size()) - 1;
  Matrix u(m, t);
  Matrix x(n, t + 1);
  auto parse = [&](const std::string& s, Eigen::Index row) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw Error(path + ": bad number '" + s + "' in row " +
                  std::to_string(row + 1));
    }
  };
  for (Eigen::Index r = 0; r <= t; ++r) {
    const auto& cells = rows[r];
    for (Eigen::Index k = 0; k < m && r < t; ++k) u(k, r) = parse(cells[1 + k], r);
    for (Eigen::Index k = 0; k < n; ++k) x(k, r) = parse(cells[1 + m + k], r);
  }
  return Trajectory(u, x);
}

}  // namespace mrac
