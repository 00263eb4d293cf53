#include <gtest/gtest.h>

#include <filesystem>

#include "mrac/informativity.h"
#include "mrac/sim_harness.h"
#include "support.h"

using namespace mrac;

namespace {

Matrix row(std::initializer_list<double> v) {
  Matrix m(1, static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (double d : v) m(0, j++) = d;
  return m;
}

// Data of a run up to its informative time, rebuilt from the step log.
Trajectory run_prefix(const Scenario& sc) {
  const RunResult res = run(sc);
  const Eigen::Index t = *res.report.t_star;
  Matrix u(sc.plant.m(), t), x(sc.plant.n(), t + 1);
  for (Eigen::Index k = 0; k <= t; ++k) {
    x.col(k) = res.log[static_cast<size_t>(k)].x;
    if (k < t) u.col(k) = res.log[static_cast<size_t>(k)].u;
  }
  return Trajectory(u, x);
}

}  // namespace

TEST(Trajectory, ShapeRules) {
  EXPECT_THROW(Trajectory(Matrix(1, 0), Matrix(1, 1)), DimensionError);
  EXPECT_THROW(Trajectory(Matrix(1, 2), Matrix(1, 2)), DimensionError);
}

TEST(Trajectory, GeneratedDataSatisfyDynamics) {
  CounterRng rng(4);
  const auto in = fixtures::solvable_instance(rng, 3, 2, 2);
  const Trajectory tr = fixtures::random_trajectory(rng, in, 6);
  EXPECT_LT((tr.X_plus() - in.A * tr.X_minus() - in.B * tr.U_minus()).norm(),
            1e-12);
  EXPECT_EQ(tr.prefix(3).length(), 3);
  EXPECT_EQ(tr.prefix(3).X(), tr.X().leftCols(4));
}

TEST(Hankel, ScalarDepthTwo) {
  Matrix expected(2, 2);
  expected << 1, 2, 2, 3;
  EXPECT_EQ(hankel(row({1, 2, 3}), 2), expected);
}

TEST(Hankel, DepthOneIsIdentityMap) {
  Matrix u(2, 2);
  u << 1, 2, 3, 4;
  EXPECT_EQ(hankel(u, 1), u);
}

TEST(Hankel, IndexFormula) {
  CounterRng rng(5);
  const Matrix u = fixtures::random_matrix(rng, 2, 4);
  const Matrix h = hankel(u, 2);
  ASSERT_EQ(h.rows(), 4);
  ASSERT_EQ(h.cols(), 3);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index k = 0; k < 2; ++k)
      for (Eigen::Index j = 0; j < 3; ++j) EXPECT_EQ(h(i * 2 + k, j), u(k, i + j));
}

TEST(Hankel, DepthTooLargeThrows) {
  EXPECT_THROW(hankel(row({1, 2}), 3), DimensionError);
}

TEST(PersistentExcitation, SmallCases) {
  const Matrix c = row({2, 2, 2, 2, 2});
  EXPECT_TRUE(is_pe(c, 1));
  EXPECT_FALSE(is_pe(c, 2));
  for (Eigen::Index l = 1; l <= 3; ++l) EXPECT_FALSE(is_pe(Matrix::Zero(1, 5), l));
  CounterRng rng(6);
  EXPECT_TRUE(is_pe(fixtures::random_matrix(rng, 1, 20), 5));
}

TEST(SysidInformativity, TooFewSamples) {
  Matrix x(1, 2);
  x << 0, 1;
  EXPECT_FALSE(informative_for_sysid(Trajectory(row({1}), x)));
}

TEST(SysidInformativity, PersistentlyExcitingInput) {
  CounterRng rng(7);
  const auto in = fixtures::solvable_instance(rng, 3, 2, 2);
  // Order n + 1 needs at least (m + 1)(n + 1) - 1 samples.
  const Trajectory tr = fixtures::random_trajectory(rng, in, 11);
  ASSERT_TRUE(is_pe(tr.U_minus(), 4));
  EXPECT_TRUE(informative_for_sysid(tr));
}

TEST(MrcInformativity, ModelDataWithZeroReferenceIsNotEnough) {
  CounterRng rng(8);
  const auto in = fixtures::solvable_instance(rng, 3, 2, 2);
  const Matrix xm = Matrix::Identity(3, 3);
  EXPECT_FALSE(informative_for_mrc(xm, in.Am * xm, in.model()));
}

TEST(MrcInformativity, ModelGeneratedData) {
  CounterRng rng(9);
  const auto in = fixtures::solvable_instance(rng, 3, 2, 2);
  const Trajectory tr = fixtures::model_trajectory(rng, in, 8);
  EXPECT_TRUE(informative_for_mrc(tr, in.model()));
  EXPECT_TRUE(mrc_image_inclusion(tr, in.model()));
}

TEST(SolveV, IdentityData) {
  // Companion form: the free response from e1 visits e2 and e3, so X- = I and
  // X+ = A_m. B_m is a zero column.
  Matrix am(3, 3);
  am << 0, 0, 0.1,
        1, 0, 0.2,
        0, 1, 0.3;
  const ReferenceModel model(am, Matrix::Zero(3, 1), false);
  Matrix x(3, 4);
  x << Matrix::Identity(3, 3), am.col(2);
  const Trajectory tr(Matrix::Zero(1, 3), x);
  ASSERT_EQ(tr.X_plus(), am);
  const VSolution v = solve_v(tr, model);
  EXPECT_TRUE(v.V1.isApprox(Matrix::Identity(3, 3), 1e-12));
  EXPECT_LT(v.V2.norm(), 1e-12);
}

TEST(SolveV, RecoversImageEquation) {
  CounterRng rng(12);
  const auto in = fixtures::solvable_instance(rng, 4, 3, 3);
  const Trajectory tr = fixtures::model_trajectory(rng, in, 9);
  const VSolution v = solve_v(tr, in.model());
  EXPECT_LT((tr.X_minus() * v.V1 - Matrix::Identity(4, 4)).norm(), 1e-9);
  EXPECT_LT((tr.X_minus() * v.V2).norm(), 1e-9);
  EXPECT_LT((tr.X_plus() * v.V1 - in.Am).norm(), 1e-9);
  EXPECT_LT((tr.X_plus() * v.V2 - in.Bm).norm(), 1e-9);
  EXPECT_LT(v.residual, 1e-9);
}

TEST(SolveV, NonInformativeDataThrow) {
  CounterRng rng(13);
  const auto in = fixtures::solvable_instance(rng, 4, 3, 3);
  const Trajectory tr = fixtures::random_trajectory(rng, in, 3);
  EXPECT_THROW(solve_v(tr, in.model()), PreconditionError);
}

TEST(GainsFromData, IdentityInputMatrix) {
  CounterRng rng(14);
  const Matrix a = fixtures::random_matrix(rng, 3, 3);
  const Matrix am = fixtures::schur_matrix(rng, 3, 0.5);
  const Matrix bm = fixtures::random_matrix(rng, 3, 2);
  const StateSpacePlant plant(a, Matrix::Identity(3, 3));
  const ReferenceModel model(am, bm);
  const Trajectory tr = Trajectory::generate(
      plant, fixtures::random_matrix(rng, 3, 1), fixtures::random_matrix(rng, 3, 6));
  ASSERT_TRUE(informative_for_mrc(tr, model));
  EXPECT_LT(matching_residual(plant, model, gains_from_data(tr, model)), 1e-8);
}

TEST(GainsFromData, NumericalSystemAtInformativeTime) {
  const Scenario sc = paper_scenario("S1");
  const Trajectory tr = run_prefix(sc);
  EXPECT_EQ(tr.length(), 6);
  EXPECT_LT(solve_v(tr, sc.model).residual, 1e-8);
  EXPECT_LT(matching_residual(sc.plant, sc.model, gains_from_data(tr, sc.model)),
            1e-6);
}

TEST(GainsFromData, AircraftAtInformativeTime) {
  const Scenario sc = paper_scenario("S5");
  const Trajectory tr = run_prefix(sc);
  EXPECT_EQ(tr.length(), 5);
  EXPECT_EQ(numeric_rank(vstack(tr.X_minus(), tr.U_minus())), 5);
  EXPECT_FALSE(informative_for_sysid(tr));
  EXPECT_FALSE(initial_excitation_holds(tr, 1e-12));
  EXPECT_LT(matching_residual(sc.plant, sc.model, gains_from_data(tr, sc.model)),
            1e-6);
}

TEST(Tracker, StopsAtHorizonForUnsolvablePair) {
  const Scenario sc = unsolvable_scenario();
  CounterRng rng(15);
  const Trajectory tr = Trajectory::generate(
      sc.plant, fixtures::random_matrix(rng, 2, 1), fixtures::random_matrix(rng, 1, 5));
  InformativeTimeTracker tk = make_tracker(sc.model, 1);
  EXPECT_EQ(tk.lower_bound(), 3);
  EXPECT_EQ(tk.horizon(), 3);
  for (Eigen::Index t = 1; t <= 3; ++t) {
    EXPECT_FALSE(informative_for_mrc(tr.prefix(t), sc.model));
    tk = update_tracker(tk, tr.prefix(t), sc.model);
  }
  EXPECT_TRUE(tk.unsolvable);
  EXPECT_FALSE(tk.t_star);
}

TEST(Tracker, InformativeTimeIsStable) {
  CounterRng rng(16);
  const auto in = fixtures::solvable_instance(rng, 3, 2, 2);
  const Trajectory tr = fixtures::random_trajectory(rng, in, 8);
  InformativeTimeTracker tk = make_tracker(in.model(), 2);
  std::optional<Eigen::Index> first;
  for (Eigen::Index t = 1; t <= 8; ++t) {
    tk = update_tracker(tk, tr.prefix(t), in.model());
    if (tk.t_star && !first) first = tk.t_star;
    if (first) {
      EXPECT_EQ(tk.t_star, first);
    }
  }
  ASSERT_TRUE(first);
  EXPECT_GE(*first, tk.lower_bound());
  EXPECT_LE(*first, tk.horizon());
}

TEST(InitialExcitation, SmallCases) {
  const Trajectory zero(Matrix::Zero(2, 4), Matrix::Zero(3, 5));
  EXPECT_FALSE(initial_excitation_holds(zero, 1e-9));
  CounterRng rng(17);
  const auto in = fixtures::solvable_instance(rng, 3, 2, 2);
  const Trajectory tr = fixtures::random_trajectory(rng, in, 10);
  ASSERT_TRUE(informative_for_sysid(tr));
  EXPECT_TRUE(initial_excitation_holds(tr, 1e-9));
}

TEST(TrajectoryCsv, RoundTrip) {
  CounterRng rng(18);
  const auto in = fixtures::solvable_instance(rng, 3, 2, 2);
  const Trajectory tr = fixtures::random_trajectory(rng, in, 5);
  const auto path =
      (std::filesystem::temp_directory_path() / "mrac_traj_roundtrip.csv").string();
  write_trajectory_csv(tr, path);
  const Trajectory back = read_trajectory_csv(path);
  EXPECT_EQ(back.U_minus(), tr.U_minus());
  EXPECT_EQ(back.X(), tr.X());
  std::filesystem::remove(path);
}
