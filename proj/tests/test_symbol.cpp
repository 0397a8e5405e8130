#include "hardy/corpus.hpp"
#include "hardy/symbol.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hardy;

namespace {

Matrix diag2(cplx a, cplx b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

double coeff_gap(const LaurentSymbol& a, const LaurentSymbol& b) {
  double g = 0.0;
  const int lo = std::min(a.n_min(), b.n_min()), hi = std::max(a.n_max(), b.n_max());
  for (int n = lo; n <= hi; ++n) g = std::max(g, (a.coefficient(n) - b.coefficient(n)).norm());
  return g;
}

}  // namespace

TEST(Blaschke, ZeroAtOriginIsShift) {
  const LaurentSymbol z = blaschke_factor(0.0);
  EXPECT_EQ(z.n_min(), 1);
  EXPECT_EQ(z.n_max(), 1);
  EXPECT_NEAR(std::abs(z.coefficient(1)(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_TRUE(z.is_polynomial());
}

TEST(Blaschke, LeadingCoefficients) {
  const LaurentSymbol b = blaschke_factor(0.5);
  EXPECT_NEAR(b.coefficient(0)(0, 0).real(), -0.5, 1e-15);
  EXPECT_NEAR(b.coefficient(2)(0, 0).real(), 0.375, 1e-15);
  EXPECT_TRUE(b.is_analytic());
  EXPECT_GT(b.tail_bound(), 0.0);
  EXPECT_LE(b.tail_bound(), kEpsSym);
}

TEST(Blaschke, CoefficientsMatchSampledFunction) {
  for (cplx a : {cplx(0.5, 0.0), cplx(-0.3, 0.4), cplx(0.0, 0.69)}) {
    const LaurentSymbol b = blaschke_factor(a);
    auto f = [a](cplx z) { return Matrix::Constant(1, 1, oracle::blaschke(a, z)); };
    for (int n = -3; n <= 12; ++n) {
      const cplx want = oracle::dft_coefficient(f, n)(0, 0);
      EXPECT_NEAR(std::abs(b.coefficient(n)(0, 0) - want), 0.0, 10 * b.tail_bound() + 1e-12) << n;
    }
  }
}

TEST(Blaschke, Evaluation) {
  const LaurentSymbol b = blaschke_factor(0.5);
  EXPECT_NEAR(std::abs(b.evaluate(0.5)(0, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(b.evaluate(1.0)(0, 0) - 1.0), 0.0, 1e-11);
  EXPECT_NEAR(std::abs(LaurentSymbol::monomial(1, 1).evaluate(cplx(0, 1))(0, 0) - cplx(0, 1)), 0.0, 1e-15);
}

TEST(Potapov, TrivialProjectionIsBlaschke) {
  const LaurentSymbol q = blaschke_potapov_factor(0.5, Matrix::Zero(1, 1));
  EXPECT_LE(coeff_gap(q, blaschke_factor(0.5)), 1e-15);
}

TEST(Potapov, DiagonalCases) {
  const LaurentSymbol q0 = blaschke_potapov_factor(0.0, diag2(1, 0));
  for (cplx z : {cplx(0.3, 0.1), cplx(-0.7, 0.2)})
    EXPECT_LE((q0.evaluate(z) - diag2(1, z)).norm(), 1e-14);
  const LaurentSymbol q = blaschke_potapov_factor(0.5, diag2(1, 0));
  EXPECT_LE((q.evaluate(0.5) - diag2(1, 0)).norm(), 1e-11);
}

TEST(Multiply, Examples) {
  const LaurentSymbol z = LaurentSymbol::monomial(1, 1);
  const LaurentSymbol zz = multiply(z, z);
  EXPECT_EQ(zz.n_min(), 2);
  EXPECT_EQ(zz.n_max(), 2);
  const LaurentSymbol p = multiply(blaschke_factor(0.5), blaschke_factor(-0.5));
  EXPECT_NEAR(std::abs(p.evaluate(0.0)(0, 0) + 0.25), 0.0, 1e-14);
  const LaurentSymbol a = blaschke_potapov_factor(0.0, diag2(1, 0));
  const LaurentSymbol b = blaschke_potapov_factor(0.0, diag2(0, 1));
  EXPECT_LE(coeff_gap(multiply(a, b), LaurentSymbol::monomial(1, 2)), 1e-15);
}

TEST(Multiply, MatchesPointwiseProduct) {
  Corpus c(11);
  const LaurentSymbol a = c.mixed_symbol(2), b = c.mixed_symbol(2);
  const LaurentSymbol ab = multiply(a, b);
  for (int k = 0; k < 8; ++k) {
    const cplx z = c.unimodular();
    EXPECT_LE((ab.evaluate(z) - a.evaluate(z) * b.evaluate(z)).norm(),
              1e-10 + 10 * ab.tail_bound());
  }
}

TEST(Multiply, AssociativeWithinTails) {
  Corpus c(12);
  for (int trial = 0; trial < 5; ++trial) {
    const LaurentSymbol a = c.bp_product(2, 2), b = c.mixed_symbol(2), d = c.bp_product(2, 1);
    const LaurentSymbol l = multiply(multiply(a, b), d), r = multiply(a, multiply(b, d));
    EXPECT_LE(coeff_gap(l, r), 1e-12 + l.tail_bound() + r.tail_bound());
  }
}

TEST(Tilde, Examples) {
  const LaurentSymbol t = tilde(LaurentSymbol::monomial(1, 1));
  EXPECT_EQ(t.n_min(), 1);
  EXPECT_NEAR(std::abs(t.coefficient(1)(0, 0) - 1.0), 0.0, 0.0);
  Matrix c(2, 2);
  c << cplx(1, 2), cplx(0, 1), 3.0, cplx(-1, 1);
  EXPECT_EQ(tilde(LaurentSymbol::constant(c)).coefficient(0), c.adjoint());
}

TEST(Tilde, MatchesConjugateReflection) {
  Corpus c(13);
  const LaurentSymbol a = c.mixed_symbol(2);
  const LaurentSymbol t = tilde(a);
  for (int k = 0; k < 5; ++k) {
    const cplx z = c.unimodular();
    EXPECT_LE((t.evaluate(z) - a.evaluate(std::conj(z)).adjoint()).norm(), 1e-12);
  }
}

TEST(Tilde, InvolutionProperty) {
  Corpus c(14);
  for (int trial = 0; trial < 10; ++trial) {
    const LaurentSymbol a = c.mixed_symbol(c.uniform_int(1, 3));
    EXPECT_TRUE(tilde(tilde(a)) == a);
  }
}

TEST(AdjointSymbol, PointwiseAdjointOnCircle) {
  Corpus c(15);
  const LaurentSymbol a = c.mixed_symbol(2);
  const LaurentSymbol s = adjoint_symbol(a);
  for (int k = 0; k < 5; ++k) {
    const cplx z = c.unimodular();
    EXPECT_LE((s.evaluate(z) - a.evaluate(z).adjoint()).norm(), 1e-12);
  }
}

TEST(Inner, Certificates) {
  const InnerCertificate z = check_inner(LaurentSymbol::monomial(1, 1));
  EXPECT_LE(z.left_inner_residual, 1e-15);
  EXPECT_EQ(z.unitary_part_rank, 0);
  EXPECT_TRUE(z.is_pure());

  const LaurentSymbol d = block_diag({LaurentSymbol::identity(1), blaschke_factor(0.5)});
  const InnerCertificate cd = check_inner(d);
  EXPECT_EQ(cd.unitary_part_rank, 1);
  EXPECT_EQ(cd.pure_part_dims, std::make_pair(1, 1));

  const LaurentSymbol p = multiply(blaschke_factor(0.5), blaschke_factor(-0.3));
  EXPECT_LE(check_inner(p).left_inner_residual, 10 * kEpsSym);
  for (int k = 0; k < 64; ++k) {
    const cplx z = std::polar(1.0, 2 * std::numbers::pi * k / 64);
    EXPECT_NEAR(std::abs(p.evaluate(z)(0, 0)), 1.0, 1e-11);
  }
}

TEST(Inner, ContractionIsRejected) {
  const LaurentSymbol half = scale(blaschke_factor(0.5), 0.5);
  EXPECT_FALSE(check_inner(half).is_inner(kInnerTol));
}

TEST(Inner, UnitaryRankBoundedByShape) {
  Corpus c(16);
  for (int trial = 0; trial < 10; ++trial) {
    const int cols = c.uniform_int(1, 3);
    const int rows = c.uniform_int(cols, 3);
    const int u = c.uniform_int(0, cols - 1);
    const InnerCertificate cert = check_inner(c.inner_with_unitary(rows, cols, 2, u));
    EXPECT_LE(cert.unitary_part_rank, std::min(rows, cols));
    EXPECT_EQ(cert.unitary_part_rank, u);
    EXPECT_GE(cert.left_inner_residual, 0.0);
  }
}

TEST(Inner, BlaschkePotapovProductsAreTwoSided) {
  Corpus c(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = c.uniform_int(1, 3);
    const InnerCertificate cert = check_inner(c.bp_product(d, c.uniform_int(1, 3)));
    EXPECT_LE(cert.left_inner_residual, 10 * kEpsSym * 10);
    ASSERT_TRUE(cert.two_sided_residual.has_value());
    EXPECT_LE(*cert.two_sided_residual, 10 * kEpsSym * 10);
  }
}

TEST(HittSarason, ZeroAtOrigin) {
  const LaurentSymbol phi = multiply(blaschke_factor(0.0), blaschke_factor(0.4));
  const HittSarasonPair p = hitt_sarason_pair(phi);
  EXPECT_LE(coeff_gap(p.g, LaurentSymbol::identity(1)), 1e-14);
  EXPECT_LE(coeff_gap(p.theta, scale(phi, -1.0)), 1e-11);
}

TEST(HittSarason, ValueOfGAtOrigin) {
  const HittSarasonPair p = hitt_sarason_pair(blaschke_factor(-0.5));
  // (1 - 0.25) / sqrt(1 - 0.25)
  EXPECT_NEAR(p.g.evaluate(0.0)(0, 0).real(), std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_NEAR(std::abs(p.theta.evaluate(0.0)(0, 0)), 0.0, 1e-12);
}

TEST(HittSarason, ThetaIsInnerOnCorpus) {
  Corpus c(18);
  for (int trial = 0; trial < 10; ++trial) {
    const LaurentSymbol phi = c.hitt_sarason_phi();
    const HittSarasonPair p = hitt_sarason_pair(phi);
    const double in = check_inner(phi).left_inner_residual;
    EXPECT_LE(check_inner(p.theta).left_inner_residual, 10 * (in + kEpsSym) + 1e-12);
    EXPECT_NEAR(std::abs(p.theta.evaluate(0.0)(0, 0)), 0.0, 1e-10);
  }
}

TEST(Symbol, StoredCoefficientsMatchSamplingOnCorpus) {
  Corpus c(19);
  for (int trial = 0; trial < 6; ++trial) {
    const LaurentSymbol s = c.bp_product(2, 2);
    auto f = [&s](cplx z) { return s.evaluate(z); };
    for (int n = 0; n <= std::min(s.n_max(), 20); ++n)
      EXPECT_LE((s.coefficient(n) - oracle::dft_coefficient(f, n)).norm(), 10 * s.tail_bound() + 1e-12);
  }
}

TEST(Symbol, ConstructionValidatesShapes) {
  EXPECT_THROW(LaurentSymbol(1, 1, 0, {Matrix::Zero(2, 1)}), Error);
  EXPECT_THROW(blaschke_factor(1.0), InvalidParameter);
  EXPECT_THROW(add(LaurentSymbol::identity(1), LaurentSymbol::identity(2)), DimensionMismatch);
}

TEST(Symbol, ReciprocalSeries) {
  const LaurentSymbol h(1, 1, 0, {Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, -0.5)});
  const LaurentSymbol r = series_reciprocal(h, 1e-12);
  for (int n = 0; n < 10; ++n) EXPECT_NEAR(r.coefficient(n)(0, 0).real(), std::pow(0.5, n), 1e-14);
}
