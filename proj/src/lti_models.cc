#include "mrac/lti_models.h"

#include <Eigen/Eigenvalues>

namespace mrac {

bool is_controllable(const Matrix& a, const Matrix& b, RankTolerance tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n) {
    throw DimensionError("is_controllable: inconsistent dimensions");
  }
  Matrix ctrb(n, n * b.cols());
  Matrix block = b;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * b.cols(), b.cols()) = block;
    block = a * block;
  }
  return numeric_rank(ctrb, tol) == n;
}

double spectral_radius(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("spectral_radius: not square");
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalue computation did not converge");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_schur(const Matrix& a, double margin) {
  return spectral_radius(a) < 1.0 - margin;
}

StateSpacePlant::StateSpacePlant(Matrix a, Matrix b, bool require_controllable)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() < 1 || b_.cols() < 1) {
    throw DimensionError("plant needs n >= 1 and m >= 1");
  }
  require_dims(a_, a_.rows(), a_.rows(), "plant A");
  require_dims(b_, a_.rows(), b_.cols(), "plant B");
  if (require_controllable && !is_controllable(a_, b_)) {
    throw ConfigError("plant (A, B) is not controllable");
  }
}

ReferenceModel::ReferenceModel(Matrix am, Matrix bm, bool validate)
    : am_(std::move(am)), bm_(std::move(bm)) {
  if (am_.rows() < 1 || bm_.cols() < 1) {
    throw DimensionError("model needs n >= 1 and p >= 1");
  }
  require_dims(am_, am_.rows(), am_.rows(), "model Am");
  require_dims(bm_, am_.rows(), bm_.cols(), "model Bm");
  if (validate) {
    if (!is_schur(am_)) throw ConfigError("reference model Am is not Schur");
    if (!is_controllable(am_, bm_)) {
      throw ConfigError("reference model (Am, Bm) is not controllable");
    }
  }
}

Vector step(const StateSpacePlant& plant, const Vector& x, const Vector& u) {
  if (x.size() != plant.n() || u.size() != plant.m()) {
    throw DimensionError("step: dimension mismatch");
  }
  return plant.A() * x + plant.B() * u;
}

Vector reference_step(const ReferenceModel& model, const Vector& xm,
                      const Vector& r) {
  if (xm.size() != model.n() || r.size() != model.p()) {
    throw DimensionError("reference_step: dimension mismatch");
  }
  return model.Am() * xm + model.Bm() * r;
}

void check_pair(const StateSpacePlant& plant, const ReferenceModel& model) {
  if (plant.n() != model.n()) {
    throw DimensionError("plant and model state dimensions differ");
  }
  if (model.p() > plant.m()) {
    throw DimensionError("model has more reference inputs than plant inputs");
  }
}

double matching_residual(const StateSpacePlant& plant,
                         const ReferenceModel& model, const GainPair& gains) {
  if (plant.n() != model.n()) {
    throw DimensionError("plant and model state dimensions differ");
  }
  require_dims(gains.K, plant.m(), plant.n(), "gain K");
  require_dims(gains.L, plant.m(), model.p(), "gain L");
  const double k_part =
      (plant.A() + plant.B() * gains.K - model.Am()).squaredNorm();
  const double l_part = (plant.B() * gains.L - model.Bm()).squaredNorm();
  return std::sqrt(k_part + l_part);
}

std::optional<GainPair> matching_solvable(const StateSpacePlant& plant,
                                          const ReferenceModel& model,
                                          double tol) {
  if (plant.n() != model.n()) {
    throw DimensionError("plant and model state dimensions differ");
  }
  GainPair g;
  g.K = min_norm_solve(plant.B(), model.Am() - plant.A());
  g.L = min_norm_solve(plant.B(), model.Bm());
  const double scale =
      1.0 + std::sqrt(model.Am().squaredNorm() + model.Bm().squaredNorm());
  if (matching_residual(plant, model, g) <= tol * scale) return g;
  return std::nullopt;
}

}  // namespace mrac
