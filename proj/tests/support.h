#pragma once

// Random instance generators shared by the unit, property and acceptance
// tests. Everything is driven by CounterRng so failures reproduce by seed.

#include <cmath>
#include <cstdint>
#include <optional>

#include "mrac/informativity.h"
#include "mrac/rng.h"

namespace mrac::fixtures {

inline Matrix random_matrix(CounterRng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  }
  return m;
}

inline Matrix schur_matrix(CounterRng& rng, Eigen::Index n, double rho) {
  Matrix a = random_matrix(rng, n, n);
  const double s = spectral_radius(a);
  return s > 0.0 ? Matrix(a * (rho / s)) : a;
}

struct Instance {
  Matrix A, B, Am, Bm, K, L;

  StateSpacePlant plant() const { return StateSpacePlant(A, B); }
  ReferenceModel model() const { return ReferenceModel(Am, Bm); }
};

// A plant/model pair with a known solution (K, L) of the matching equations:
// Am Schur, Bm = B L, A = Am - B K with spectral radius at most 2.
// rank_l < min(m, p) gives a rank-deficient L (and Bm).
inline Instance solvable_instance(CounterRng& rng, Eigen::Index n,
                                  Eigen::Index m, Eigen::Index p,
                                  std::optional<Eigen::Index> rank_l = {}) {
  for (;;) {
    Instance in;
    in.Am = schur_matrix(rng, n, 0.3 + 0.6 * rng.uniform());
    in.B = random_matrix(rng, n, m);
    if (rank_l) {
      in.L = random_matrix(rng, m, *rank_l) * random_matrix(rng, *rank_l, p);
    } else {
      in.L = random_matrix(rng, m, p);
    }
    in.Bm = in.B * in.L;
    in.K = random_matrix(rng, m, n);
    in.A = in.Am - in.B * in.K;
    // A mildly unstable plant keeps the data within a few decades, so rank
    // decisions reflect structure rather than scale.
    if (spectral_radius(in.A) <= 2.0 && is_controllable(in.A, in.B) &&
        is_controllable(in.Am, in.Bm) && is_schur(in.Am)) {
      return in;
    }
  }
}

inline Trajectory random_trajectory(CounterRng& rng, const Instance& in,
                                    Eigen::Index t) {
  const Vector x0 = random_matrix(rng, in.A.rows(), 1);
  return Trajectory::generate(in.plant(), x0,
                              random_matrix(rng, in.B.cols(), t));
}

// Reference-model data re-expressed as plant data: u = K xm + L r.
inline Trajectory model_trajectory(CounterRng& rng, const Instance& in,
                                   Eigen::Index t) {
  const Eigen::Index n = in.Am.rows();
  const Matrix r = random_matrix(rng, in.Bm.cols(), t);
  Matrix xm(n, t + 1);
  xm.col(0) = random_matrix(rng, n, 1);
  Matrix u(in.B.cols(), t);
  for (Eigen::Index k = 0; k < t; ++k) {
    xm.col(k + 1) = in.Am * xm.col(k) + in.Bm * r.col(k);
    u.col(k) = in.K * xm.col(k) + in.L * r.col(k);
  }
  return Trajectory(u, xm);
}

}  // namespace mrac::fixtures
