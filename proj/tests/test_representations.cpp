#include "hardy/corpus.hpp"
#include "hardy/invariance.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hardy;

namespace {

const int kN = 32;

LaurentSymbol z(int n = 1) { return LaurentSymbol::monomial(n, 1); }
RepSpec phi_model(const LaurentSymbol& phi, const LaurentSymbol& theta, int n = kN) {
  return {phi, theta, n, Flavor::PhiModel};
}
RepSpec range_of(const LaurentSymbol& theta, int n = kN) {
  return {LaurentSymbol::identity(theta.rows()), theta, n, Flavor::RangeOfInner};
}

}  // namespace

TEST(ModelSpace, Dimensions) {
  const Subspace kz = model_space(z(), kN);
  EXPECT_TRUE(same_subspace(kz, Subspace::degrees({kN, 1}, 0, 0)));
  EXPECT_EQ(model_space(z(3), kN).rank(), 3);
  const LaurentSymbol th = multiply(blaschke_factor(0.5), blaschke_factor(-0.3));
  for (int n : {32, 64}) {
    const TruncatedOp t = toeplitz(th, n);
    const Matrix i = Matrix::Identity(n, n);
    EXPECT_EQ(model_space(th, n).rank(), 2);
    EXPECT_EQ(oracle::rank(i - t.matrix() * t.matrix().adjoint()), 2);
  }
}

TEST(ModelSpace, BlaschkePotapovDimensionIsDegreeSum) {
  Corpus c(51);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = c.uniform_int(1, 3);
    std::vector<std::pair<cplx, Matrix>> fs;
    int expect = 0;
    for (int k = 0; k < c.uniform_int(1, 3); ++k) {
      const int r = c.uniform_int(0, d - 1);
      fs.emplace_back(c.point(), c.projection(d, r));
      expect += d - r;
    }
    const LaurentSymbol b = blaschke_potapov_product(c.unitary(d), fs);
    EXPECT_EQ(model_space(b, 64).rank(), expect);
  }
}

TEST(BuildRep, Examples) {
  const LaurentSymbol th = blaschke_factor(0.5);
  const Representation one = build_rep(phi_model(LaurentSymbol::identity(1), th));
  EXPECT_TRUE(one.pi.passed);
  EXPECT_LE(one.pi.residual, 1e-12);
  EXPECT_TRUE(same_subspace(one.m, model_space(th, kN)));

  const Representation r = build_rep(phi_model(blaschke_factor(0.3), th));
  EXPECT_TRUE(r.pi.passed);
  ASSERT_EQ(r.m.rank(), 1);
  // Phi(z) / (1 - 0.5 z) expanded in coefficients.
  const LaurentSymbol phi = blaschke_factor(0.3);
  Vector v(kN);
  for (int k = 0; k < kN; ++k) {
    cplx s = 0.0;
    for (int j = 0; j <= k; ++j) s += phi.coefficient(j)(0, 0) * std::pow(0.5, k - j);
    v(k) = s;
  }
  const Subspace want = Subspace::from_columns({kN, 1}, v, kRankTol);
  EXPECT_LE(subspace_distance(r.m, want), 1e-8);
}

TEST(BuildRep, HittSarasonReproducesModelSpace) {
  const LaurentSymbol phi = blaschke_factor(-0.5);
  const HittSarasonPair p = hitt_sarason_pair(phi);
  const Representation r = build_rep(phi_model(p.g, p.theta, 64));
  EXPECT_TRUE(r.pi.passed);
  EXPECT_LE(subspace_distance(r.m, model_space(phi, 64)), 1e-6);
}

TEST(BuildRep, RejectsInvalidSpecs) {
  const Matrix u = Matrix::Identity(1, 1);
  EXPECT_THROW(build_rep(phi_model(LaurentSymbol::identity(1), LaurentSymbol::constant(u))), NotInner);
  EXPECT_THROW(build_rep(phi_model(LaurentSymbol::identity(2), blaschke_factor(0.5))), DimensionMismatch);
  EXPECT_THROW(build_rep(phi_model(LaurentSymbol::identity(1), scale(blaschke_factor(0.5), 0.5))), NotInner);
}

TEST(BuildRep, ContractivePhiReportedNotRepaired) {
  const Representation r = build_rep(phi_model(scale(blaschke_factor(0.3), 0.5), blaschke_factor(0.5)));
  EXPECT_FALSE(r.pi.passed);
}

TEST(Theorems, BackwardShiftExamples) {
  const TheoremDefect r = defect_thm_main(range_of(blaschke_factor(0.5)));
  EXPECT_EQ(r.defect, 1);
  EXPECT_TRUE(r.match);
  Matrix u(1, 1);
  u << cplx(0.6, 0.8);
  const TheoremDefect c = defect_thm_main(range_of(LaurentSymbol::constant(u)));
  EXPECT_EQ(c.defect, 0);
  EXPECT_TRUE(c.match);
  const TheoremDefect p = defect_thm_main(phi_model(blaschke_factor(0.3), blaschke_factor(0.5)));
  EXPECT_EQ(p.defect, 1);
  EXPECT_EQ(p.generic_defect, 1);
  EXPECT_LE(p.angle, 1e-6);
}

TEST(Theorems, ForwardShiftExamples) {
  EXPECT_EQ(defect_thm_main2(range_of(blaschke_factor(0.5))).defect, 0);
  const TheoremDefect p = defect_thm_main2(phi_model(blaschke_factor(0.3), blaschke_factor(0.5)));
  EXPECT_EQ(p.defect, 1);
  EXPECT_TRUE(p.match);
  const LaurentSymbol th2 = block_diag({blaschke_factor(0.5), blaschke_factor(-0.4)});
  const TheoremDefect two = defect_thm_main2(phi_model(LaurentSymbol::identity(2), th2));
  EXPECT_EQ(two.defect, 2);
  EXPECT_EQ(two.generic_defect, almost_defect(shift(kN, 2), build_rep(phi_model(LaurentSymbol::identity(2), th2)).m).defect);
}

TEST(Theorems, AgreeWithGenericRankOnCorpus) {
  Corpus c(52);
  for (int trial = 0; trial < 6; ++trial) {
    const RepSpec spec = c.inner_rep(64);
    const TheoremDefect b = defect_thm_main(spec), f = defect_thm_main2(spec);
    EXPECT_EQ(b.defect, b.generic_defect);
    EXPECT_EQ(f.defect, f.generic_defect);
    EXPECT_LE(std::max(b.angle, f.angle), 1e-6);
  }
}

TEST(Theorems, ConstantBlockRankIsFullForPureTheta) {
  Corpus c(53);
  for (int trial = 0; trial < 6; ++trial) {
    const int e = c.uniform_int(1, 3);
    const LaurentSymbol th = c.pure_inner(e, e, c.uniform_int(1, 3));
    EXPECT_EQ(constant_block_rank(th, kN), th.rows());
  }
}

TEST(PerpRep, Examples) {
  const LaurentSymbol th = blaschke_factor(0.5);
  const PerpRep one = perp_rep(phi_model(LaurentSymbol::identity(1), th));
  EXPECT_TRUE(one.passed);
  EXPECT_TRUE(same_subspace(one.mperp, range_inner(th, kN)));

  const int n = 8;
  const PerpRep zz = perp_rep(phi_model(z(), z(), n));
  EXPECT_TRUE(zz.passed);
  // M = span{z}; its complement is span{1} plus z^2 H^2.
  EXPECT_TRUE(same_subspace(zz.mperp, sum(Subspace::degrees({n, 1}, 0, 0), Subspace::degrees({n, 1}, 2, n - 1))));
}

TEST(PerpRep, RandomScalarPairs) {
  Corpus c(54);
  for (int trial = 0; trial < 4; ++trial) {
    const RepSpec s = phi_model(c.bp_product(1, 2), c.pure_inner(1, 1, 2), 64);
    const PerpRep p = perp_rep(s);
    EXPECT_TRUE(p.passed);
    EXPECT_LE(p.angle_direct, 1e-6);
    EXPECT_LE(p.angle_rep, 1e-6);
  }
}

TEST(Nearly, CriterionExamples) {
  const LaurentSymbol th = blaschke_factor(0.5);
  const NearlyReport one = nearly_criterion(phi_model(LaurentSymbol::identity(1), th));
  EXPECT_TRUE(one.criterion);
  EXPECT_TRUE(one.agree);
  const NearlyReport zr = nearly_criterion(phi_model(z(), th));
  EXPECT_FALSE(zr.criterion);
  EXPECT_GT(zr.nearly_defect, 0);
  EXPECT_TRUE(zr.agree);
  const NearlyReport b = nearly_criterion(phi_model(blaschke_factor(0.5), th));
  EXPECT_TRUE(b.criterion);
  EXPECT_TRUE(b.agree);
}

TEST(Nearly, DefectBoundOnCorpus) {
  Corpus c(55);
  for (int trial = 0; trial < 6; ++trial) {
    const RepSpec spec = c.inner_rep(64);
    const Subspace m = build_rep(spec).m;
    const int p = nearly_defect(m).defect;
    EXPECT_LE(almost_defect(backshift(64, spec.phi.rows()), m).defect, p + spec.theta.cols());
  }
}

TEST(Equivalence, Examples) {
  const LaurentSymbol th = blaschke_factor(0.5);
  auto check = [&](std::function<Subspace(int)> f, int star, int sh) {
    const EquivalenceReport r = equivalence_check(f, kN);
    EXPECT_EQ(r.star_n, star);
    EXPECT_EQ(r.shift_n, sh);
    EXPECT_TRUE(r.star_stable && r.shift_stable && r.consistent);
  };
  check([&](int n) { return model_space(th, n); }, 0, 1);
  check([&](int n) { return range_inner(th, n); }, 1, 0);
  check([&](int n) { return build_rep(phi_model(blaschke_factor(0.3), th, n)).m; }, 1, 1);
}

TEST(Halfspace, Probes) {
  const LaurentSymbol cube = multiply(blaschke_factor(0.5), multiply(blaschke_factor(0.5), blaschke_factor(0.5)));
  const HalfspaceProbe a = halfspace_probe(phi_model(LaurentSymbol::identity(1), cube), {16, 32, 64});
  EXPECT_EQ(a.classification, "stabilizing");
  EXPECT_EQ(a.dims, (std::vector<int>{3, 3, 3}));

  const LaurentSymbol b1 = multiply(blaschke_factor(0.2), blaschke_factor(-0.4));
  const LaurentSymbol d = block_diag({b1, blaschke_factor(0.6)});
  const HalfspaceProbe b = halfspace_probe(phi_model(LaurentSymbol::identity(2), d), {32, 64});
  EXPECT_EQ(b.dims.back(), model_space(b1, 64).rank() + model_space(blaschke_factor(0.6), 64).rank());

  // A high-degree product looks like it grows while its degree exceeds N.
  const HalfspaceProbe g = halfspace_probe(range_of(z(1)), {32, 48, 64});
  EXPECT_EQ(g.classification, "growing");
  EXPECT_LT(g.dims[0], g.dims[1]);
  EXPECT_LT(g.dims[1], g.dims[2]);
}

TEST(TwoSided, Examples) {
  const TwoSidedReport a = two_sided_model_check(z(), kN);
  EXPECT_TRUE(a.passed);
  const TwoSidedReport c = two_sided_model_check(blaschke_factor(0.5), kN);
  EXPECT_TRUE(c.passed);
  EXPECT_LE(c.range_angle, 1e-8);
  EXPECT_LE(c.identity_residual, c.tolerance);
}
