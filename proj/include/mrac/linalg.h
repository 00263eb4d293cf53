#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mrac {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed (SVD/eigen non-convergence, zero normalizer).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Relative singular-value cutoff used by every rank decision.
struct RankTolerance {
  double tau = 1e-9;

  explicit RankTolerance(double t = 1e-9) : tau(t) {
    if (!(t >= 0.0)) throw ConfigError("rank tolerance must be nonnegative");
  }
};

Vector singular_values(const Matrix& m);

// Number of singular values strictly above tau * sigma_max. Zero or empty
// matrices have rank 0.
int numeric_rank(const Matrix& m, RankTolerance tol = RankTolerance{});

// Minimal-norm least-squares solution of a * x = b. Singular values at or
// below tau * sigma_max are treated as zero.
Matrix min_norm_solve(const Matrix& a, const Matrix& b,
                      RankTolerance tol = RankTolerance{});

// Orthonormal basis (as columns) of the left null space {y : y^T m = 0}.
Matrix left_null_space(const Matrix& m, RankTolerance tol = RankTolerance{});

// Frobenius norm of a - b, with a dimension check.
double frobenius_distance(const Matrix& a, const Matrix& b);

// Stacks blocks vertically; all blocks must have the same column count.
Matrix vstack(const Matrix& top, const Matrix& bottom);

// Concatenates blocks horizontally; all blocks must have the same row count.
Matrix hstack(const Matrix& left, const Matrix& right);

// The constant target block [I 0; Am Bm] that appears throughout the
// adaptive law and the informativity tests.
Matrix target_block(const Matrix& am, const Matrix& bm);

void require_dims(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const std::string& what);

}  // namespace mrac
