#include <gtest/gtest.h>

#include <cmath>

#include "mrac/linalg.h"
#include "mrac/rng.h"
#include "support.h"

using namespace mrac;

TEST(NumericRank, ZeroMatrixHasRankZero) {
  EXPECT_EQ(numeric_rank(Matrix::Zero(3, 5)), 0);
  EXPECT_EQ(numeric_rank(Matrix(0, 4)), 0);
}

TEST(NumericRank, Identity) { EXPECT_EQ(numeric_rank(Matrix::Identity(4, 4)), 4); }

TEST(NumericRank, ToleranceIsRelative) {
  Matrix m = Matrix::Identity(3, 3);
  m(2, 2) = 1e-12;
  EXPECT_EQ(numeric_rank(m), 2);
  EXPECT_EQ(numeric_rank(m, RankTolerance(1e-13)), 3);
  EXPECT_EQ(numeric_rank(1e8 * m), 2);
}

TEST(NumericRank, NegativeToleranceRejected) {
  EXPECT_THROW(RankTolerance(-1.0), ConfigError);
}

TEST(MinNormSolve, MatchesPseudoinverseOnRankDeficientSystem) {
  // a has rank 1; the minimal-norm solution of a x = b lies in row(a).
  Matrix a(2, 2);
  a << 1, 1, 2, 2;
  Matrix b(2, 1);
  b << 2, 4;
  const Matrix x = min_norm_solve(a, b);
  EXPECT_NEAR(x(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(x(1, 0), 1.0, 1e-14);
}

TEST(LeftNullSpace, AnnihilatesAndIsOrthonormal) {
  CounterRng rng(11);
  const Matrix m = fixtures::random_matrix(rng, 6, 3);
  const Matrix y = left_null_space(m);
  ASSERT_EQ(y.cols(), 3);
  EXPECT_LT((y.transpose() * m).norm(), 1e-12);
  EXPECT_LT((y.transpose() * y - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(LeftNullSpace, EmptyForFullRowRank) {
  EXPECT_EQ(left_null_space(Matrix::Identity(3, 5).eval()).cols(), 0);
}

TEST(Stacking, ShapeChecks) {
  EXPECT_THROW(vstack(Matrix(2, 3), Matrix(2, 4)), DimensionError);
  EXPECT_THROW(hstack(Matrix(2, 3), Matrix(3, 3)), DimensionError);
  EXPECT_THROW(frobenius_distance(Matrix(2, 2), Matrix(2, 3)), DimensionError);
}

TEST(TargetBlock, Layout) {
  Matrix am(2, 2), bm(2, 1);
  am << 1, 2, 3, 4;
  bm << 5, 6;
  Matrix expected(4, 3);
  expected << 1, 0, 0,
              0, 1, 0,
              1, 2, 5,
              3, 4, 6;
  EXPECT_EQ(target_block(am, bm), expected);
}

// Reference outputs of the splitmix64 generator started from state 0.
TEST(Rng, Splitmix64ReferenceValues) {
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(splitmix64(0x3C6EF372FE94F82AULL), 0x06C45D188009454FULL);
}

TEST(Rng, SameSeedAndStreamReproduce) {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs |= x != c.normal();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformStaysInOpenInterval) {
  CounterRng rng(3);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  CounterRng rng(5);
  const int n = 100000;
  double s = 0, s2 = 0;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}
