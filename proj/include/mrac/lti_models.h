#pragma once

#include <optional>

#include "mrac/linalg.h"

namespace mrac {

constexpr double kSchurMargin = 1e-10;
constexpr double kMatchTolerance = 1e-8;

bool is_controllable(const Matrix& a, const Matrix& b,
                     RankTolerance tol = RankTolerance{});

// Spectral radius strictly below 1 - margin.
bool is_schur(const Matrix& a, double margin = kSchurMargin);

double spectral_radius(const Matrix& a);

// The true system x+ = A x + B u. Controllability is validated on
// construction.
class StateSpacePlant {
 public:
  StateSpacePlant(Matrix a, Matrix b, bool require_controllable = true);

  const Matrix& A() const { return a_; }
  const Matrix& B() const { return b_; }
  Eigen::Index n() const { return a_.rows(); }
  Eigen::Index m() const { return b_.cols(); }

 private:
  Matrix a_;
  Matrix b_;
};

// The target closed loop xm+ = Am xm + Bm r. Am must be Schur and the pair
// controllable.
class ReferenceModel {
 public:
  ReferenceModel(Matrix am, Matrix bm, bool validate = true);

  const Matrix& Am() const { return am_; }
  const Matrix& Bm() const { return bm_; }
  Eigen::Index n() const { return am_.rows(); }
  Eigen::Index p() const { return bm_.cols(); }

 private:
  Matrix am_;
  Matrix bm_;
};

struct GainPair {
  Matrix K;  // m x n
  Matrix L;  // m x p
};

Vector step(const StateSpacePlant& plant, const Vector& x, const Vector& u);
Vector reference_step(const ReferenceModel& model, const Vector& xm,
                      const Vector& r);

// Frobenius norm of [A + B K - Am, B L - Bm].
double matching_residual(const StateSpacePlant& plant,
                         const ReferenceModel& model, const GainPair& gains);

// Pseudoinverse candidate K = B+(Am - A), L = B+ Bm, kept only if it
// actually solves the matching equations. Needs the true plant, so this is
// a test and reporting oracle.
std::optional<GainPair> matching_solvable(const StateSpacePlant& plant,
                                          const ReferenceModel& model,
                                          double tol = kMatchTolerance);

void check_pair(const StateSpacePlant& plant, const ReferenceModel& model);

}  // namespace mrac
