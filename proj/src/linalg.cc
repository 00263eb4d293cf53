#include "mrac/linalg.h"

#include <sstream>

namespace mrac {

namespace {

Eigen::BDCSVD<Matrix> checked_svd(const Matrix& m, unsigned int options) {
  Eigen::BDCSVD<Matrix> svd(m, options);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("SVD failed to converge");
  }
  return svd;
}

}  // namespace

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector(0);
  if (!m.allFinite()) throw NumericalError("singular values of a non-finite matrix");
  return checked_svd(m, 0).singularValues();
}

int numeric_rank(const Matrix& m, RankTolerance tol) {
  if (m.size() == 0) return 0;
  const Vector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = tol.tau * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix min_norm_solve(const Matrix& a, const Matrix& b, RankTolerance tol) {
  if (a.rows() != b.rows()) {
    throw DimensionError("min_norm_solve: row mismatch");
  }
  if (a.size() == 0) return Matrix::Zero(a.cols(), b.cols());
  const auto svd = checked_svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? tol.tau * s(0) : 0.0;
  Matrix x = Matrix::Zero(a.cols(), b.cols());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cutoff || s(i) == 0.0) break;
    x += svd.matrixV().col(i) *
         ((svd.matrixU().col(i).transpose() * b) / s(i));
  }
  return x;
}

Matrix left_null_space(const Matrix& m, RankTolerance tol) {
  if (m.cols() == 0) return Matrix::Identity(m.rows(), m.rows());
  const auto svd = checked_svd(m, Eigen::ComputeFullU);
  const int r = numeric_rank(m, tol);
  return svd.matrixU().rightCols(m.rows() - r);
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) {
    throw DimensionError("vstack: column mismatch");
  }
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

Matrix hstack(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows()) {
    throw DimensionError("hstack: row mismatch");
  }
  Matrix out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

Matrix target_block(const Matrix& am, const Matrix& bm) {
  const Eigen::Index n = am.rows();
  const Eigen::Index p = bm.cols();
  Matrix out = Matrix::Zero(2 * n, n + p);
  out.topLeftCorner(n, n).setIdentity();
  out.bottomLeftCorner(n, n) = am;
  out.bottomRightCorner(n, p) = bm;
  return out;
}

void require_dims(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << what << ": expected " << rows << "x" << cols << ", got " << m.rows()
       << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace mrac
