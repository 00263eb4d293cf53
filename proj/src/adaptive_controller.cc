#include "mrac/adaptive_controller.h"

#include <cmath>

#include "mrac/rng.h"

namespace mrac {

std::string to_string(InputMode mode) {
  switch (mode) {
    case InputMode::Initial:
      return "initial";
    case InputMode::Adaptive:
      return "adaptive";
    case InputMode::Exploration:
      return "exploration";
  }
  return "unknown";
}

void ControllerConfig::validate(Eigen::Index m) const {
  if (!(gamma > 0.0 && gamma < 2.0)) throw ConfigError("gamma must lie in (0, 2)");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(c_r > 0.0)) throw ConfigError("c_r must be positive");
  if (!(rank_tol >= 0.0)) throw ConfigError("rank tolerance must be nonnegative");
  if (!(img_tol > 0.0)) throw ConfigError("image tolerance must be positive");
  if (u0.size() != 0) {
    if (u0.size() != m) throw DimensionError("u0 must have m entries");
    if (!(u0.norm() > 0.0)) throw ConfigError("u0 must be nonzero");
  }
}

Vector ControllerConfig::initial_input(Eigen::Index m) const {
  if (u0.size() != 0) return u0;
  return Vector::Ones(m) / std::sqrt(static_cast<double>(m));
}

Eigen::Index theta_rows(Eigen::Index t, std::optional<Eigen::Index> t_star) {
  if (t <= 1) return 1;
  if (t_star && t > *t_star) return *t_star + 1;
  return t;
}

DataBuffers update_buffers(DataBuffers bufs, Eigen::Index t,
                           std::optional<Eigen::Index> t_star,
                           const Vector& u_prev, const Vector& x_prev,
                           const Vector& x_now) {
  if (u_prev.size() != bufs.U.rows() || x_prev.size() != bufs.Xm.rows() ||
      x_now.size() != bufs.Xp.rows()) {
    throw DimensionError("update_buffers: sample dimension mismatch");
  }
  if (!t_star || t <= *t_star + 1) {
    const Eigen::Index i = bufs.columns();
    bufs.U.conservativeResize(Eigen::NoChange, i + 1);
    bufs.Xm.conservativeResize(Eigen::NoChange, i + 1);
    bufs.Xp.conservativeResize(Eigen::NoChange, i + 1);
    bufs.U.col(i) = u_prev;
    bufs.Xm.col(i) = x_prev;
    bufs.Xp.col(i) = x_now;
    bufs.held_steps = 0;
    return bufs;
  }
  if (bufs.columns() != *t_star + 1) {
    throw PreconditionError("update_buffers: buffers do not hold T*+1 columns");
  }
  if (x_now.norm() <= bufs.sigma) {
    const Eigen::Index last = bufs.columns() - 1;
    bufs.U.col(last) = u_prev;
    bufs.Xm.col(last) = x_prev;
    bufs.Xp.col(last) = x_now;
    bufs.held_steps = 0;
  } else {
    ++bufs.held_steps;
  }
  return bufs;
}

Matrix compute_delta(const DataBuffers& bufs, const ThetaState& theta,
                     Eigen::Index t, std::optional<Eigen::Index> t_star,
                     const ReferenceModel& model, bool normalize_before) {
  const Matrix phi = bufs.X();
  if (theta.Theta.rows() != phi.cols() ||
      theta.Theta.cols() != model.n() + model.p()) {
    throw DimensionError("compute_delta: Theta does not match the buffers");
  }
  Matrix delta = phi * theta.Theta - target_block(model.Am(), model.Bm());
  const bool after = t_star && t > *t_star;
  if (after || normalize_before) {
    const double f2 = phi.squaredNorm();
    if (!(f2 > 0.0)) {
      throw NumericalError("compute_delta: data buffers are zero at t = " +
                           std::to_string(t));
    }
    delta /= f2;
  }
  return delta;
}

ThetaState theta_update(const ThetaState& theta, const DataBuffers& bufs,
                        const Matrix& delta, Eigen::Index t,
                        std::optional<Eigen::Index> t_star) {
  const Matrix phi = bufs.X();
  if (delta.rows() != phi.rows() || delta.cols() != theta.Theta.cols() ||
      phi.cols() != theta.Theta.rows()) {
    throw DimensionError("theta_update: dimension mismatch");
  }
  ThetaState out = theta;
  out.Theta = theta.Theta - theta.gamma * phi.transpose() * delta;
  if (!t_star || t <= *t_star) {
    out.Theta.conservativeResize(out.Theta.rows() + 1, Eigen::NoChange);
    out.Theta.bottomRows(1).setZero();
  }
  return out;
}

Vector adaptive_input(const DataBuffers& bufs, const ThetaState& theta,
                      const Vector& x, const Vector& r) {
  if (theta.Theta.rows() != bufs.columns() ||
      theta.Theta.cols() != x.size() + r.size()) {
    throw DimensionError("adaptive_input: dimension mismatch");
  }
  Vector z(x.size() + r.size());
  z << x, r;
  return bufs.U * (theta.Theta * z);
}

GainPair current_gains(const DataBuffers& bufs, const ThetaState& theta,
                       Eigen::Index n) {
  if (theta.Theta.rows() != bufs.columns() || theta.Theta.cols() < n) {
    throw DimensionError("current_gains: dimension mismatch");
  }
  const Matrix kl = bufs.U * theta.Theta;
  return GainPair{kl.leftCols(n), kl.rightCols(kl.cols() - n)};
}

Vector exploration_input(const DataBuffers& bufs, const Vector& x,
                         double magnitude, RankTolerance tol,
                         std::uint64_t tie_seed) {
  const Eigen::Index n = bufs.Xm.rows();
  const Matrix s = vstack(bufs.Xm, bufs.U);
  const Matrix null = left_null_space(s, tol);
  if (null.cols() == 0) {
    throw PreconditionError("exploration_input: data already have full row rank");
  }
  // Unit vectors of the null space ordered by the size of their eta block.
  Eigen::JacobiSVD<Matrix> svd(null.bottomRows(null.rows() - n),
                               Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double eta_max = sv(0);
  if (!(eta_max > 1e-10)) {
    throw PreconditionError("exploration_input: no annihilator with eta != 0");
  }
  Eigen::Index tied = 1;
  while (tied < sv.size() && sv(tied) >= eta_max * (1.0 - 1e-9)) ++tied;
  Vector w = Vector::Unit(svd.matrixV().cols(), 0);
  if (tied > 1) {
    CounterRng rng(tie_seed, 2);
    w.setZero();
    for (Eigen::Index k = 0; k < tied; ++k) w(k) = rng.normal();
    w.normalize();
  }
  const Vector v = null * (svd.matrixV() * w);
  const Vector xi = v.head(n);
  const Vector eta = v.tail(v.size() - n);
  const double sign = xi.dot(x) >= 0.0 ? 1.0 : -1.0;
  return sign * magnitude * eta / eta.norm();
}

InputChoice select_input(const DataBuffers& bufs, const ThetaState& theta,
                         const Vector& x, const Vector& r, Eigen::Index t,
                         bool mrc_informative, Eigen::Index horizon,
                         const ControllerConfig& cfg) {
  InputChoice out{adaptive_input(bufs, theta, x, r), InputMode::Adaptive};
  if (t >= horizon || mrc_informative) return out;
  const RankTolerance tol(cfg.rank_tol);
  const Matrix s = vstack(bufs.Xm, bufs.U);
  Vector z(x.size() + out.u.size());
  z << x, out.u;
  const Matrix c = min_norm_solve(s, z, tol);
  if ((s * c - z).norm() > cfg.img_tol * (1.0 + z.norm())) return out;
  double magnitude = cfg.c_r;
  if (cfg.exploration_scale == ExplorationScale::State) {
    magnitude *= std::max(1.0, x.norm());
  }
  out.u = exploration_input(bufs, x, magnitude, tol,
                            cfg.exploration_seed + static_cast<std::uint64_t>(t));
  out.mode = InputMode::Exploration;
  return out;
}

AdaptiveController::AdaptiveController(ReferenceModel model, Eigen::Index m,
                                       ControllerConfig cfg)
    : model_(std::move(model)), cfg_(std::move(cfg)), tol_(cfg_.rank_tol) {
  cfg_.validate(m);
  target_ = target_block(model_.Am(), model_.Bm());
  bufs_ = DataBuffers(model_.n(), m, cfg_.sigma);
  theta_.Theta = Matrix::Zero(1, model_.n() + model_.p());
  if (cfg_.theta1.size() != 0) {
    require_dims(cfg_.theta1, 1, model_.n() + model_.p(), "theta1");
    theta_.Theta = cfg_.theta1;
  }
  theta_.gamma = cfg_.gamma;
  tracker_ = make_tracker(model_, m, tol_);
}

Vector AdaptiveController::start(const Vector& x0) {
  if (x0.size() != model_.n()) throw DimensionError("x0 must have n entries");
  if (t_ != 0) throw PreconditionError("controller already started");
  return cfg_.initial_input(bufs_.U.rows());
}

void AdaptiveController::update_informativity() {
  if (t_ < 1) return;
  tracker_ = update_tracker(tracker_, t_, bufs_.Xm, bufs_.Xp, model_, tol_);
}

double AdaptiveController::residual_sq() const {
  if (bufs_.columns() == 0) return target_.squaredNorm();
  return (bufs_.X() * theta_.Theta - target_).squaredNorm();
}

InputChoice AdaptiveController::choose_input(const Vector& x,
                                             const Vector& r) const {
  if (t_ < 1) throw PreconditionError("choose_input needs t >= 1");
  return select_input(bufs_, theta_, x, r, t_, tracker_.t_star.has_value(),
                      tracker_.horizon(), cfg_);
}

void AdaptiveController::advance(const Vector& u, const Vector& x_now,
                                 const Vector& x_next) {
  if (t_ >= 1) {
    update_informativity();
    const Matrix delta = compute_delta(bufs_, theta_, t_, tracker_.t_star,
                                       model_,
                                       cfg_.normalize_before_informative);
    theta_ = theta_update(theta_, bufs_, delta, t_, tracker_.t_star);
  }
  bufs_ = update_buffers(bufs_, t_ + 1, tracker_.t_star, u, x_now, x_next);
  ++t_;
  if (tracker_.t_star && t_ == *tracker_.t_star + 1) {
    const Eigen::Index ts = *tracker_.t_star;
    const Matrix frozen = bufs_.X().leftCols(ts);
    Matrix star = Matrix::Zero(ts + 1, target_.cols());
    star.topRows(ts) = min_norm_solve(frozen, target_, tol_);
    theta_star_ = star;
  }
}

std::optional<double> AdaptiveController::lyapunov() const {
  if (!theta_star_ || theta_star_->rows() != theta_.Theta.rows()) {
    return std::nullopt;
  }
  return 0.5 * (theta_.Theta - *theta_star_).squaredNorm();
}

}  // namespace mrac
