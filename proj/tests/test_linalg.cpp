#include <gtest/gtest.h>

#include "oscint/linalg.hpp"
#include "support.hpp"

using namespace oscint;
using namespace oscint::testing;

TEST(Rational, ParsesAndCanonicalises) {
  EXPECT_EQ(parse_rat("6/4"), Rat(3, 2));
  EXPECT_TRUE(is_canonical(parse_rat("6/4")));
  EXPECT_EQ(to_string(parse_rat("6/4")), "3/2");
  EXPECT_EQ(parse_rat("-0.25"), Rat(-1, 4));
  EXPECT_EQ(parse_rat("7"), Rat(7));
  EXPECT_EQ(parse_rat("3/-6"), Rat(-1, 2));
  EXPECT_THROW(parse_rat("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rat("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rat(""), std::invalid_argument);
}

TEST(Rref, IdentityIsFixed) {
  const auto rr = rref(ints({{1, 0}, {0, 1}}));
  EXPECT_EQ(rr.reduced, ints({{1, 0}, {0, 1}}));
  EXPECT_EQ(rr.rank, 2);
  EXPECT_EQ(rr.pivots, (std::vector<Index>{0, 1}));
}

TEST(Rref, DependentRows) {
  const auto rr = rref(ints({{1, 2}, {2, 4}}));
  EXPECT_EQ(rr.reduced, ints({{1, 2}, {0, 0}}));
  EXPECT_EQ(rr.rank, 1);
}

TEST(Rref, ThirdWorkedExampleMapHasRankTwo) { EXPECT_EQ(exact_rank(worked_example_maps()[2].matrix), 2); }

TEST(Rref, IdempotentOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const RatMat m = random_int_matrix(rng, 1 + t % 5, 1 + (t * 7) % 6, 3);
    const auto once = rref(m);
    const auto twice = rref(once.reduced);
    EXPECT_EQ(once.reduced, twice.reduced);
    EXPECT_EQ(once.rank, bareiss_rank(m));
  }
}

TEST(Rref, AlsoWorksOverDoubles) {
  Eigen::MatrixXd m(2, 3);
  m << 2, 4, 6, 1, 1, 1;
  const auto rr = rref(m);
  EXPECT_EQ(rr.rank, 2);
  EXPECT_DOUBLE_EQ(rr.reduced(0, 0), 1.0);
}

TEST(Kernel, WorkedExampleMaps) {
  EXPECT_EQ(kernel(ints({{1, 0, 0, 0}, {0, 0, 1, 0}})), span_of({{0, 1, 0, 0}, {0, 0, 0, 1}}));
  EXPECT_EQ(kernel(ints({{1, 1, 0, 0}, {0, 0, 1, 1}})), span_of({{1, -1, 0, 0}, {0, 0, 1, -1}}));
  const Subspace k = kernel(ints({{1, 1, 0, 0}, {0, 0, 1, 1}}));
  EXPECT_TRUE((ints({{1, 1, 0, 0}, {0, 0, 1, 1}}) * k.basis()).isZero());
}

TEST(Kernel, ZeroRowIsFullSpace) {
  const Subspace k = kernel(RatMat::Zero(1, 5));
  EXPECT_EQ(k.dim(), 5);
  EXPECT_EQ(k, Subspace::full(5));
}

TEST(Subspace, CanonicalFormMakesEqualityStructural) {
  EXPECT_EQ(span_of({{1, 1, 0}, {1, -1, 0}}), span_of({{2, 0, 0}, {0, 3, 0}}));
  EXPECT_NE(span_of({{1, 0, 0}}), span_of({{0, 1, 0}}));
  EXPECT_EQ(Subspace::span(ints({{0}, {0}, {0}})), Subspace::zero(3));
}

TEST(Subspace, AnnihilatorRoundTrip) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const Index m = 2 + t % 5;
    const Index d = t % (m + 1);
    const Subspace s = Subspace::span(random_int_matrix(rng, m, d, 4));
    EXPECT_EQ(kernel(s.annihilator()), s);
    EXPECT_EQ(s.annihilator().rows(), m - s.dim());
  }
}

TEST(Intersect, Examples) {
  const Subspace a = span_of({{0, 1, 0, 0}, {0, 0, 0, 1}});
  const Subspace b = span_of({{1, 0, 0, 0}, {0, 0, 1, 0}});
  EXPECT_TRUE(intersect(a, b).is_zero());
  EXPECT_EQ(intersect(Subspace::full(4), a), a);
  EXPECT_EQ(intersect(a, a), a);
  EXPECT_THROW(intersect(a, Subspace::full(3)), DimensionMismatch);
}

TEST(Sum, Examples) {
  const Subspace a = span_of({{0, 1, 0, 0}, {0, 0, 0, 1}});
  const Subspace b = span_of({{1, 0, 0, 0}, {0, 0, 1, 0}});
  EXPECT_EQ(sum(a, b), Subspace::full(4));
  EXPECT_EQ(sum(a, Subspace::zero(4)), a);
  EXPECT_EQ(sum(a, a), a);
  EXPECT_THROW(sum(a, Subspace::zero(5)), DimensionMismatch);
}

TEST(Sum, DimensionFormulaOnRandomPairs) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 60; ++t) {
    const Index m = 2 + t % 6;
    std::uniform_int_distribution<Index> dim(0, m);
    const Subspace a = Subspace::span(random_int_matrix(rng, m, dim(rng), 2));
    const Subspace b = Subspace::span(random_int_matrix(rng, m, dim(rng), 2));
    EXPECT_EQ(sum(a, b).dim() + intersect(a, b).dim(), a.dim() + b.dim());
    EXPECT_GE(intersect(a, b).dim(), a.dim() + b.dim() - m);
    RatMat stacked(m, a.dim() + b.dim());
    stacked << a.basis(), b.basis();
    EXPECT_EQ(sum(a, b).dim(), bareiss_rank(stacked));
  }
}

TEST(RandomSubspace, EdgeDimensionsAndDeterminism) {
  EXPECT_TRUE(random_subspace(4, 0, 3).is_zero());
  EXPECT_EQ(random_subspace(4, 4, 1), Subspace::full(4));
  const Subspace a = random_subspace(4, 2, 7, 10);
  const Subspace b = random_subspace(4, 2, 7, 10);
  EXPECT_EQ(a.dim(), 2);
  EXPECT_EQ(a, b);
  EXPECT_THROW(random_subspace(3, 4, 0), PreconditionError);
}

TEST(RandomSubspace, BoundOneStillSucceedsOrReportsGenericity) {
  // Entries in {−1, 0, 1}: independence is common enough that 64 draws suffice.
  EXPECT_EQ(random_subspace(6, 5, 42, 1).dim(), 5);
}

TEST(RowsIndependent, AgreesWithExactRank) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 80; ++t) {
    const RatMat m = random_int_matrix(rng, 1 + t % 4, 4, 1);
    EXPECT_EQ(rows_independent(m), bareiss_rank(m) == m.rows());
  }
  RatMat fractional(2, 2);
  fractional << Rat(1, 3), Rat(2, 3), Rat(1, 2), Rat(1);
  EXPECT_FALSE(rows_independent(fractional));
}

TEST(SolveExact, ConsistentAndInconsistent) {
  RatMat x;
  EXPECT_TRUE(solve_exact(ints({{1, 2}, {3, 4}}), ints({{5}, {6}}), x));
  EXPECT_EQ(ints({{1, 2}, {3, 4}}) * x, ints({{5}, {6}}));
  EXPECT_FALSE(solve_exact(ints({{1, 2}, {2, 4}}), ints({{1}, {3}}), x));
}

TEST(Exactness, DenominatorsStayReduced) {
  RatMat m(2, 2);
  m << Rat(2, 4), Rat(3, 9), Rat(5, 10), Rat(1, 7);
  const auto rr = rref(m);
  for (Index i = 0; i < rr.reduced.rows(); ++i)
    for (Index j = 0; j < rr.reduced.cols(); ++j) EXPECT_TRUE(is_canonical(rr.reduced(i, j)));
}
