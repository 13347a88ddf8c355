#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "oscint/degeneracy.hpp"
#include "oscint/resolution.hpp"
#include "support.hpp"

using namespace oscint;
using namespace oscint::testing;

namespace {

// Coordinates (x1, x2, y1, y2).
MultiPoly x(int i) { return MultiPoly::variable(4, static_cast<std::size_t>(i - 1)); }
MultiPoly y(int i) { return MultiPoly::variable(4, static_cast<std::size_t>(i + 1)); }

MultiPoly wedge() { return x(1) * y(2) - x(2) * y(1); }

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Monomials, Examples) {
  EXPECT_EQ(monomials(1, 2), (std::vector<Exponents>{{0}, {1}, {2}}));
  EXPECT_EQ(monomials(2, 1), (std::vector<Exponents>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(monomials(4, 2).size(), 15u);
  for (std::size_t n = 1; n <= 5; ++n)
    for (unsigned d = 0; d <= 4; ++d) EXPECT_EQ(monomials(n, d).size(), binomial(n + d, d));
}

TEST(Polynomial, ArithmeticAndCanonicalTerms) {
  const MultiPoly p = x(1) + x(1) - x(1) * Rat(2);
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p.degree(), 0u);
  const MultiPoly q = (x(1) + y(1)) * (x(1) - y(1));
  EXPECT_EQ(q, x(1) * x(1) - y(1) * y(1));
  EXPECT_EQ(q.degree(), 2u);
  EXPECT_EQ(q.coefficient(exps({1, 0, 1, 0})), Rat(0));
  EXPECT_THROW(MultiPoly(2) + MultiPoly(3), DimensionMismatch);
  const std::vector<double> at{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(q.evaluate<double>(at), 1.0 - 9.0);
}

TEST(Compose, Examples) {
  const MultiPoly uv = monomial(2, {1, 1});
  EXPECT_EQ(compose(uv, worked_example_maps()[2].matrix), x(1) * y(1) + x(1) * y(2) + x(2) * y(1) + x(2) * y(2));
  EXPECT_EQ(compose(MultiPoly::constant(2, Rat(5)), worked_example_maps()[0].matrix), MultiPoly::constant(4, Rat(5)));
  EXPECT_EQ(compose(monomial(1, {1}), ints({{1, 0, 0, 0}})), x(1));
  EXPECT_THROW(compose(uv, ints({{1, 0, 0}})), DimensionMismatch);
}

TEST(Compose, LinearInThePolynomial) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    const RatMat map = random_int_matrix(rng, 2, 3, 3);
    const MultiPoly q1 = random_poly(rng, 2, 3), q2 = random_poly(rng, 2, 3);
    const Rat a(t - 7, 3), b(5, t + 1);
    EXPECT_EQ(compose(q1 * a + q2 * b, map), compose(q1, map) * a + compose(q2, map) * b);
    EXPECT_LE(compose(q1, map).degree(), q1.degree());
  }
}

TEST(CoefficientVector, RoundTrip) {
  std::mt19937_64 rng(2);
  const auto basis = monomials(3, 3);
  for (int t = 0; t < 20; ++t) {
    const MultiPoly p = random_poly(rng, 3, 3);
    EXPECT_EQ(from_coefficients(3, basis, coefficient_vector(p, basis)), p);
  }
  EXPECT_THROW(coefficient_vector(monomial(3, {0, 0, 4}), basis), PreconditionError);
}

TEST(DegenerateBasis, WorkedExampleRankMatchesHandCount) {
  // Constants 1, linear forms 4, quadratics 3 per map and independent: 9.
  constexpr Index kHandRank = 14;
  const auto maps = worked_example_maps();
  const auto span = degenerate_basis(maps, 2);
  EXPECT_EQ(span->columns.rows(), 15);
  EXPECT_EQ(span->columns.cols(), 3 * 6);
  EXPECT_EQ(span->rank(), kHandRank);
  EXPECT_EQ(bareiss_rank(span->columns), kHandRank);
}

TEST(DegenerateBasis, IdentityMapSpansEverything) {
  for (unsigned d = 0; d <= 3; ++d) {
    const std::vector<LabeledMap> maps{{"id", RatMat::Identity(3, 3)}};
    EXPECT_EQ(static_cast<std::size_t>(degenerate_basis(maps, d)->rank()), binomial(3 + d, d));
  }
}

TEST(DegenerateBasis, DegreeZeroIsConstants) {
  EXPECT_EQ(degenerate_basis(worked_example_maps(), 0)->rank(), 1);
}

TEST(DegenerateBasis, RejectsNonSurjectiveMaps) {
  const std::vector<LabeledMap> maps{{"bad", ints({{1, 0, 0}, {2, 0, 0}})}};
  EXPECT_THROW(degenerate_basis(maps, 2), NonSurjective);
}

TEST(DegenerateBasis, CacheIsSharedAcrossThreads) {
  const auto maps = worked_example_maps();
  std::shared_ptr<const DegenerateSpan> a, b;
  std::thread t1([&] { a = degenerate_basis(maps, 3); });
  std::thread t2([&] { b = degenerate_basis(maps, 3); });
  t1.join();
  t2.join();
  EXPECT_EQ(a->rank(), b->rank());
  EXPECT_EQ(degenerate_basis(maps, 3).get(), degenerate_basis(maps, 3).get());
}

TEST(IsDegenerate, SinglePullback) {
  const auto maps = worked_example_maps();
  const DegeneracyReport r = is_degenerate(x(1) * y(1), maps);
  ASSERT_TRUE(r.is_degenerate);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_EQ(r.quotient_norm, 0.0);
  EXPECT_EQ(expand_certificate(*r.certificate, maps), x(1) * y(1));
  EXPECT_EQ((*r.certificate)[0].second, monomial(2, {1, 1}));
  EXPECT_TRUE((*r.certificate)[1].second.is_zero());
}

TEST(IsDegenerate, WedgeIsNondegenerate) {
  const DegeneracyReport r = is_degenerate(wedge(), worked_example_maps());
  EXPECT_FALSE(r.is_degenerate);
  EXPECT_FALSE(r.certificate.has_value());
  // The degenerate quadratics are orthogonal to the wedge direction.
  EXPECT_NEAR(r.quotient_norm, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.residual.coefficient(exps({1, 0, 0, 1})), 1.0, 1e-15);
}

TEST(IsDegenerate, SymmetricMixedTermNeedsThreeMaps) {
  const auto maps = worked_example_maps();
  const MultiPoly p = (x(1) + x(2)) * (y(1) + y(2)) - x(1) * y(1) - x(2) * y(2);
  const DegeneracyReport r = is_degenerate(p, maps);
  ASSERT_TRUE(r.is_degenerate);
  EXPECT_EQ(expand_certificate(*r.certificate, maps), p);
  for (const auto& [label, q] : *r.certificate) EXPECT_FALSE(q.is_zero()) << label;
}

TEST(IsDegenerate, ZeroPolynomial) {
  const DegeneracyReport r = is_degenerate(MultiPoly(4), worked_example_maps());
  EXPECT_TRUE(r.is_degenerate);
  EXPECT_EQ(r.quotient_norm, 0.0);
}

TEST(IsDegenerate, RandomCertificatesRoundTrip) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 40; ++t) {
    const Index m = 2 + t % 3;
    const unsigned d = 1 + static_cast<unsigned>(t % 3);
    std::vector<LabeledMap> maps;
    for (int j = 0; j < 1 + t % 3; ++j) maps.push_back({"p" + std::to_string(j), random_surjection(rng, 1 + (j + t) % (m - 1 > 0 ? m - 1 : 1), m, 3)});
    Certificate cert;
    for (const auto& mp : maps) cert.emplace_back(mp.label, random_poly(rng, static_cast<std::size_t>(mp.matrix.rows()), d, 4));
    const MultiPoly p = expand_certificate(cert, maps);
    const DegeneracyReport r = is_degenerate(p, maps);
    ASSERT_TRUE(r.is_degenerate);
    EXPECT_TRUE((expand_certificate(*r.certificate, maps) - p).is_zero());
    EXPECT_EQ(r.quotient_norm, 0.0);
  }
}

TEST(IsDegenerate, CertificateHasMinimalNorm) {
  const auto maps = worked_example_maps();
  const MultiPoly p = x(1) + x(2);
  const DegeneracyReport r = is_degenerate(p, maps);
  ASSERT_TRUE(r.is_degenerate);
  // Linear part: x1 = u∘pi0, x2 = u∘pi1, x1 + x2 = u∘pi2; minimal split is 1/3, 1/3, 2/3.
  EXPECT_EQ((*r.certificate)[0].second.coefficient(exps({1, 0})), Rat(1, 3));
  EXPECT_EQ((*r.certificate)[1].second.coefficient(exps({1, 0})), Rat(1, 3));
  EXPECT_EQ((*r.certificate)[2].second.coefficient(exps({1, 0})), Rat(2, 3));
}

TEST(NdNorm, HomogeneityAndInvariance) {
  const auto maps = worked_example_maps();
  const MultiPoly p = x(1) * y(2);
  const double base = nd_norm(p, maps);
  EXPECT_NEAR(base, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(nd_norm(p * Rat(3), maps), 3 * base, 1e-12 * base);
  EXPECT_NEAR(nd_norm(p * Rat(-3), maps), 3 * base, 1e-12 * base);
  const MultiPoly d = compose(monomial(2, {1, 1}, 5), maps[0].matrix);
  EXPECT_NEAR(nd_norm(p + d, maps), base, 1e-9 * base);
}

TEST(NdNorm, ZeroSetInvariantUnderReparametrisedMaps) {
  auto maps = worked_example_maps();
  const RatMat l = ints({{2, 1}, {1, 1}});
  auto changed = maps;
  for (auto& m : changed) m.matrix = l * m.matrix;
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const MultiPoly p = random_poly(rng, 4, 2, 3, 0.3);
    EXPECT_EQ(is_degenerate(p, maps).is_degenerate, is_degenerate(p, changed).is_degenerate);
  }
  EXPECT_FALSE(is_degenerate(wedge(), changed).is_degenerate);
}

TEST(ExpandCertificate, RejectsMismatchedLabels) {
  const auto maps = worked_example_maps();
  Certificate bad{{"pi0", MultiPoly(2)}, {"zz", MultiPoly(2)}, {"pi2", MultiPoly(2)}};
  EXPECT_THROW(expand_certificate(bad, maps), InvalidCertificate);
  EXPECT_THROW(expand_certificate(Certificate{}, maps), InvalidCertificate);
}

class SliceSubtract : public ::testing::Test {
 protected:
  void SetUp() override {
    step = construct_transverse_splitting(worked_example_snarl(), "pi0", 8);
    pi0 = maps[0].matrix;
  }
  std::vector<LabeledMap> maps = worked_example_maps();
  SplittingStep step{Snarl(2, {}), Snarl(2, {}), {}, Subspace(2), Subspace(2), 0, 0, {}};
  RatMat pi0;
};

TEST_F(SliceSubtract, FunctionOfPi0VanishesIdentically) {
  const MultiPoly p = compose(monomial(2, {2, 1}, 3) + monomial(2, {0, 1}), pi0);
  EXPECT_TRUE(slice_subtract(p, step, pi0, vec({4, -1})).is_zero());
}

TEST_F(SliceSubtract, PreservesTheClass) {
  const MultiPoly p = x(1) * y(2);
  const MultiPoly q = slice_subtract(p, step, pi0, vec({0, 0}));
  EXPECT_TRUE(is_degenerate(p - q, maps).is_degenerate);
  EXPECT_NEAR(nd_norm(q, maps), nd_norm(p, maps), 1e-9 * nd_norm(p, maps));
}

TEST_F(SliceSubtract, DifferentBasePointsDifferByAPullback) {
  const MultiPoly p = wedge() + x(2) * x(2) * y(2);
  const MultiPoly q1 = slice_subtract(p, step, pi0, vec({1, 2}));
  const MultiPoly q2 = slice_subtract(p, step, pi0, vec({-3, 5}));
  EXPECT_TRUE(is_degenerate(q1 - q2, std::vector<LabeledMap>{maps[0]}).is_degenerate);
}

TEST_F(SliceSubtract, MalformedSplittingData) {
  EXPECT_THROW(slice_subtract(wedge(), pi0, Subspace::full(4), vec({0, 0})), PreconditionError);
  EXPECT_THROW(slice_subtract(wedge(), step, pi0, vec({0, 0, 0})), DimensionMismatch);
  EXPECT_THROW(slice_subtract(MultiPoly(3), step, pi0, vec({0, 0})), DimensionMismatch);
}
