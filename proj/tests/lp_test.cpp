#include <gtest/gtest.h>

#include "rptopic/lp.hpp"

using namespace rptopic::lp;

TEST(Lp, TwoVariableOptimum) {
  // max 3x + 2y st x + y <= 4, x + 3y <= 6, x <= 3  ->  x=3, y=1, value 11
  Problem p;
  p.objective = {-3.0, -2.0};
  p.constraints = {{{1, 1}, Relation::LessEqual, 4},
                   {{1, 3}, Relation::LessEqual, 6},
                   {{1, 0}, Relation::LessEqual, 3}};
  const Solution s = minimize(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.value, -11.0, 1e-12);
  EXPECT_NEAR(s.x[0], 3.0, 1e-12);
  EXPECT_NEAR(s.x[1], 1.0, 1e-12);
}

TEST(Lp, GreaterEqualAndEquality) {
  // min x + 2y + 3z st x + y + z = 1, y + z >= 0.5  ->  x=0.5, y=0.5, value 1.5
  Problem p;
  p.objective = {1, 2, 3};
  p.constraints = {{{1, 1, 1}, Relation::Equal, 1}, {{0, 1, 1}, Relation::GreaterEqual, 0.5}};
  const Solution s = minimize(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.value, 1.5, 1e-12);
  EXPECT_NEAR(s.x[0], 0.5, 1e-12);
  EXPECT_NEAR(s.x[1], 0.5, 1e-12);
  EXPECT_NEAR(s.x[2], 0.0, 1e-12);
}

TEST(Lp, NegativeRightHandSide) {
  // min x st -x <= -2  ->  x = 2
  Problem p;
  p.objective = {1};
  p.constraints = {{{-1}, Relation::LessEqual, -2}};
  const Solution s = minimize(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.x[0], 2.0, 1e-12);
}

TEST(Lp, Infeasible) {
  Problem p;
  p.objective = {1, 1};
  p.constraints = {{{1, 1}, Relation::LessEqual, 1}, {{1, 1}, Relation::GreaterEqual, 2}};
  EXPECT_EQ(minimize(p).status, Status::Infeasible);
}

TEST(Lp, Unbounded) {
  Problem p;
  p.objective = {-1, 0};
  p.constraints = {{{1, -1}, Relation::LessEqual, 1}};
  EXPECT_EQ(minimize(p).status, Status::Unbounded);
}

TEST(Lp, DegenerateVertexTerminates) {
  // Beale's cycling example; Bland's rule must terminate at value -0.05.
  Problem p;
  p.objective = {-0.75, 150, -0.02, 6};
  p.constraints = {{{0.25, -60, -0.04, 9}, Relation::LessEqual, 0},
                   {{0.5, -90, -0.02, 3}, Relation::LessEqual, 0},
                   {{0, 0, 1, 0}, Relation::LessEqual, 1}};
  const Solution s = minimize(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.value, -0.05, 1e-12);
}

TEST(Lp, RedundantEqualities) {
  Problem p;
  p.objective = {1, 1};
  p.constraints = {{{1, 1}, Relation::Equal, 2}, {{2, 2}, Relation::Equal, 4}};
  const Solution s = minimize(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.value, 2.0, 1e-12);
}
