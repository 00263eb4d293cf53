#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mrac/informativity.h"

namespace mrac {

enum class InputMode { Initial, Adaptive, Exploration };

std::string to_string(InputMode mode);

// How the magnitude of the exploration input is set.
enum class ExplorationScale {
  Absolute,  // |u_r| = c_r
  State,     // |u_r| = c_r * max(1, |x(t)|)
};

struct ControllerConfig {
  double gamma = 1.99;
  double sigma = 100.0;
  Vector u0;  // empty means ones / sqrt(m)
  Matrix theta1;  // 1 x (n + p); empty means zero
  double c_r = 1.0;
  ExplorationScale exploration_scale = ExplorationScale::State;
  double rank_tol = 1e-9;
  double img_tol = kImageTolerance;
  // Divide the residual by |Phi_X|_F^2 before the informative time as well.
  bool normalize_before_informative = true;
  // Breaks ties between equally good exploration directions.
  std::uint64_t exploration_seed = 0;

  void validate(Eigen::Index m) const;
  Vector initial_input(Eigen::Index m) const;
};

// Phi_U (m x i), Phi_Xm (n x i), Phi_Xp (n x i).
struct DataBuffers {
  Matrix U;
  Matrix Xm;
  Matrix Xp;
  double sigma = 100.0;
  int held_steps = 0;  // consecutive steps the gate rejected a sample

  DataBuffers() = default;
  DataBuffers(Eigen::Index n, Eigen::Index m, double sigma_)
      : U(m, 0), Xm(n, 0), Xp(n, 0), sigma(sigma_) {}

  Eigen::Index columns() const { return U.cols(); }
  Matrix X() const { return vstack(Xm, Xp); }
};

struct ThetaState {
  Matrix Theta;  // i_t x (n + p)
  double gamma = 1.99;
};

// Rows of Theta at time t for a given informative time.
Eigen::Index theta_rows(Eigen::Index t, std::optional<Eigen::Index> t_star);

// Appends the sample (u(t-1), x(t-1), x(t)) while t <= T* + 1. Afterwards
// the first T* columns stay frozen and the last one is replaced only when
// |x(t)| <= sigma.
DataBuffers update_buffers(DataBuffers bufs, Eigen::Index t,
                           std::optional<Eigen::Index> t_star,
                           const Vector& u_prev, const Vector& x_prev,
                           const Vector& x_now);

Matrix compute_delta(const DataBuffers& bufs, const ThetaState& theta,
                     Eigen::Index t, std::optional<Eigen::Index> t_star,
                     const ReferenceModel& model, bool normalize_before = false);

ThetaState theta_update(const ThetaState& theta, const DataBuffers& bufs,
                        const Matrix& delta, Eigen::Index t,
                        std::optional<Eigen::Index> t_star);

Vector adaptive_input(const DataBuffers& bufs, const ThetaState& theta,
                      const Vector& x, const Vector& r);

GainPair current_gains(const DataBuffers& bufs, const ThetaState& theta,
                       Eigen::Index n);

// Input whose data column raises rank [Phi_Xm; Phi_U] by one. Picks the
// left null vector (xi, eta) with the largest |eta| and the sign that
// maximizes |xi^T x + eta^T u_r|.
// When several unit null vectors share the largest |eta| (as happens while
// all past inputs are collinear), a seeded random combination of them is
// used instead of whichever one the SVD happens to return first.
Vector exploration_input(const DataBuffers& bufs, const Vector& x,
                         double magnitude,
                         RankTolerance tol = RankTolerance{},
                         std::uint64_t tie_seed = 0);

struct InputChoice {
  Vector u;
  InputMode mode = InputMode::Adaptive;
};

InputChoice select_input(const DataBuffers& bufs, const ThetaState& theta,
                         const Vector& x, const Vector& r, Eigen::Index t,
                         bool mrc_informative, Eigen::Index horizon,
                         const ControllerConfig& cfg);

// Owns the online state of one run: buffers, Theta and the tracker.
class AdaptiveController {
 public:
  AdaptiveController(ReferenceModel model, Eigen::Index m,
                     ControllerConfig cfg);

  // u(0). Must be called once with x(0) before anything else.
  Vector start(const Vector& x0);

  // Refreshes the informativity verdict for the data up to the current t.
  void update_informativity();

  // |Phi_X Theta - M|_F^2 at the current t.
  double residual_sq() const;

  InputChoice choose_input(const Vector& x, const Vector& r) const;

  // Applies the adaptive law with the current buffers, then records the
  // transition (u(t), x(t), x(t+1)) and advances t.
  void advance(const Vector& u, const Vector& x_now, const Vector& x_next);

  Eigen::Index t() const { return t_; }
  const InformativeTimeTracker& tracker() const { return tracker_; }
  const DataBuffers& buffers() const { return bufs_; }
  const ThetaState& theta() const { return theta_; }
  const ReferenceModel& model() const { return model_; }
  const ControllerConfig& config() const { return cfg_; }
  GainPair gains() const { return current_gains(bufs_, theta_, model_.n()); }

  // Minimal-norm Theta* on the frozen prefix padded with a zero row;
  // available once t > T*.
  const std::optional<Matrix>& theta_star() const { return theta_star_; }
  // 1/2 |Theta - Theta*|_F^2, or nullopt before Theta* exists.
  std::optional<double> lyapunov() const;

 private:
  ReferenceModel model_;
  ControllerConfig cfg_;
  RankTolerance tol_;
  Matrix target_;
  DataBuffers bufs_;
  ThetaState theta_;
  InformativeTimeTracker tracker_;
  std::optional<Matrix> theta_star_;
  Eigen::Index t_ = 0;
};

}  // namespace mrac
