#pragma once

#include <optional>
#include <string>

#include "mrac/lti_models.h"

namespace mrac {

constexpr double kImageTolerance = 1e-8;

// Input-state data u(0..t-1), x(0..t).
class Trajectory {
 public:
  Trajectory(Matrix u_minus, Matrix x);

  // Simulates t steps of the plant from x0 under the given inputs (m x t).
  static Trajectory generate(const StateSpacePlant& plant, const Vector& x0,
                             const Matrix& inputs);

  const Matrix& U_minus() const { return u_; }
  const Matrix& X() const { return x_; }
  Matrix X_minus() const { return x_.leftCols(length()); }
  Matrix X_plus() const { return x_.rightCols(length()); }
  Eigen::Index length() const { return u_.cols(); }
  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index m() const { return u_.rows(); }

  // The first t steps of this trajectory.
  Trajectory prefix(Eigen::Index t) const;

 private:
  Matrix u_;
  Matrix x_;
};

// Block Hankel matrix of depth l: H(i*m + k, j) = U(k, i + j).
Matrix hankel(const Matrix& u, Eigen::Index depth);

bool is_pe(const Matrix& u, Eigen::Index order,
           RankTolerance tol = RankTolerance{});

bool informative_for_sysid(const Trajectory& traj,
                           RankTolerance tol = RankTolerance{});

// Rank test rank [X-; X+] == rank [X- I 0; X+ Am Bm].
bool informative_for_mrc(const Trajectory& traj, const ReferenceModel& model,
                         RankTolerance tol = RankTolerance{});

bool informative_for_mrc(const Matrix& x_minus, const Matrix& x_plus,
                         const ReferenceModel& model,
                         RankTolerance tol = RankTolerance{});

// Same question answered by a least-squares residual instead of ranks.
bool mrc_image_inclusion(const Trajectory& traj, const ReferenceModel& model,
                         double tol_img = kImageTolerance);

struct VSolution {
  Matrix V1;  // t x n
  Matrix V2;  // t x p
  double residual = 0.0;
};

VSolution solve_v(const Trajectory& traj, const ReferenceModel& model,
                  double tol_img = kImageTolerance);

GainPair gains_from_data(const Trajectory& traj, const ReferenceModel& model,
                         double tol_img = kImageTolerance);

// Records the first time the data become informative for model reference
// control. Gives up once t passes n + m.
struct InformativeTimeTracker {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  int rank_bm = 0;
  std::optional<Eigen::Index> t_star;
  bool unsolvable = false;

  InformativeTimeTracker() = default;
  InformativeTimeTracker(Eigen::Index n_, Eigen::Index m_, int rank_bm_)
      : n(n_), m(m_), rank_bm(rank_bm_) {}

  Eigen::Index horizon() const { return n + m; }
  Eigen::Index lower_bound() const { return n + rank_bm; }
};

InformativeTimeTracker make_tracker(const ReferenceModel& model,
                                    Eigen::Index m,
                                    RankTolerance tol = RankTolerance{});

InformativeTimeTracker update_tracker(InformativeTimeTracker tracker,
                                      const Trajectory& traj,
                                      const ReferenceModel& model,
                                      RankTolerance tol = RankTolerance{});

// Tracker update from raw data columns; x_minus and x_plus have t columns.
InformativeTimeTracker update_tracker(InformativeTimeTracker tracker,
                                      Eigen::Index t, const Matrix& x_minus,
                                      const Matrix& x_plus,
                                      const ReferenceModel& model,
                                      RankTolerance tol = RankTolerance{});

// Smallest eigenvalue of sum [x;u][x;u]^T strictly above delta.
bool initial_excitation_holds(const Trajectory& traj, double delta);

// CSV with columns t,u_1..u_m,x_1..x_n. The last row leaves the u cells
// empty.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace mrac
