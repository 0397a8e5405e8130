#include "hardy/corpus.hpp"
#include "hardy/invariance.hpp"
#include "hardy/perturbation.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hardy;

namespace {

const int kN = 32;

RepSpec model(const LaurentSymbol& phi, const LaurentSymbol& theta, int n = kN) {
  return {phi, theta, n, Flavor::PhiModel};
}

Vector in_subspace(Corpus& c, const Subspace& m) {
  return m.basis() * c.unit_vector(m.rank());
}

}  // namespace

TEST(Verify, BeurlingAndModelSpace) {
  const LaurentSymbol th = blaschke_factor(0.5);
  EXPECT_TRUE(verify_invariance(shift(kN, 1), range_inner(th, kN), InvarianceMode::Invariant, 1e-8).passed);
  const Subspace k = model_space(th, kN);
  const InvarianceReport r = verify_invariance(shift(kN, 1), k, InvarianceMode::Invariant, 1e-8);
  EXPECT_FALSE(r.passed);
  const Matrix p = oracle::projector(k.basis());
  const Matrix d = (Matrix::Identity(kN, kN) - p) * shift(kN, 1).matrix() * p;
  EXPECT_NEAR(r.residual, oracle::norm2(d), 1e-12);
}

TEST(General, Examples) {
  const LaurentSymbol th = blaschke_factor(0.5);
  const Subspace r = range_inner(th, kN);
  EXPECT_LE(synth_t0_general(shift(kN, 1), r, {}).matrix().norm(), 1e-8);
  const Subspace k = model_space(th, kN);
  const TruncatedOp t0 = synth_t0_general(shift(kN, 1), k, {});
  EXPECT_EQ(numerical_rank(t0.matrix(), kRankTol), 1);
  EXPECT_TRUE(verify_invariance(add(shift(kN, 1), t0), k, InvarianceMode::Invariant, 1e-8).passed);
}

TEST(General, FreeTermsKeepInvariance) {
  Corpus c(61);
  const Subspace k = model_space(c.bp_product(2, 2), kN);
  const Subspace kp = orth_complement(k);
  PerturbationSpec spec;
  spec.terms_m.emplace_back(in_subspace(c, k), c.unit_vector(k.ambient().size()));
  spec.terms_perp.emplace_back(c.unit_vector(k.ambient().size()), in_subspace(c, kp));
  const TruncatedOp t0 = synth_t0_general(shift(kN, 2), k, spec);
  EXPECT_TRUE(verify_invariance(add(shift(kN, 2), t0), k, InvarianceMode::Invariant, 1e-8).passed);
}

TEST(General, MembershipViolationNamesTerm) {
  Corpus c(62);
  const Subspace k = model_space(blaschke_factor(0.5), kN);
  PerturbationSpec spec;
  spec.terms_m.emplace_back(in_subspace(c, k), c.unit_vector(kN));
  spec.terms_m.emplace_back(in_subspace(c, orth_complement(k)), c.unit_vector(kN));
  try {
    synth_t0_general(shift(kN, 1), k, spec);
    FAIL() << "expected MembershipError";
  } catch (const MembershipError& e) {
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(Shift, ModelSpaceCore) {
  const LaurentSymbol th = blaschke_factor(0.5);
  const RepSpec s = model(LaurentSymbol::identity(1), th);
  const TruncatedOp t0 = synth_t0_shift(s);
  EXPECT_EQ(numerical_rank(t0.matrix(), kRankTol), 1);
  // On K_theta the core reduces to -T_theta P T_theta^* S.
  auto c = [&](int k) { return th.coefficient(k)(0, 0); };
  const Matrix t = oracle::toeplitz(c, kN);
  Matrix p = Matrix::Zero(kN, kN);
  p(0, 0) = 1.0;
  const Matrix sh = oracle::toeplitz([](int k) { return cplx(k == 1 ? 1.0 : 0.0); }, kN);
  const Matrix want = -t * p * t.adjoint() * sh;
  const Subspace k = model_space(th, kN);
  const Matrix pk = oracle::projector(k.basis());
  // The two agree after compression to M.
  EXPECT_LE(oracle::norm2((t0.matrix() - want) * pk), 1e-10);
  EXPECT_TRUE(verify_invariance(add(shift(kN, 1), t0), k, InvarianceMode::Invariant, 1e-8).passed);
}

TEST(Shift, CoreDiffersFromCompressionByAllowedTerms) {
  Corpus c(63);
  const RepSpec s = c.inner_rep(64);
  const Subspace m = build_rep(s).m;
  const TruncatedOp core = synth_t0_shift(s);
  const TruncatedOp gen = synth_t0_general(shift(64, s.phi.rows()), m, {});
  const Matrix pm = oracle::projector(m.basis());
  const Matrix i = Matrix::Identity(pm.rows(), pm.rows());
  // Difference maps M into M.
  EXPECT_LE(oracle::norm2((i - pm) * (core.matrix() - gen.matrix()) * pm), 1e-8);
}

TEST(Shift, CoreRankBoundOnCorpus) {
  Corpus c(64);
  for (int trial = 0; trial < 6; ++trial) {
    const RepSpec s = c.inner_rep(64);
    EXPECT_LE(numerical_rank(t0_shift_core(s).matrix(), kRankTol), s.theta.cols());
    EXPECT_LE(numerical_rank(t1_backshift_core(s).matrix(), kRankTol), s.phi.cols());
  }
}

TEST(Backshift, Examples) {
  const LaurentSymbol th = blaschke_factor(0.5);
  const RepSpec one = model(LaurentSymbol::identity(1), th);
  const Subspace k = model_space(th, kN);
  EXPECT_TRUE(verify_invariance(add(backshift(kN, 1), synth_t1_backshift(one)), k, InvarianceMode::Invariant, 1e-8).passed);

  const HittSarasonPair hs = hitt_sarason_pair(blaschke_factor(-0.5));
  const RepSpec g = model(hs.g, hs.theta, 64);
  const Subspace mg = build_rep(g).m;
  const InvarianceReport r = verify_invariance(add(backshift(64, 1), synth_t1_backshift(g)), mg, InvarianceMode::Invariant, 1e-8);
  EXPECT_LE(r.residual, 1e-8);
}

TEST(Backshift, ZeroSubspace) {
  const InvarianceReport r =
      verify_invariance(backshift(kN, 1), Subspace::zero({kN, 1}), InvarianceMode::Invariant, 1e-8);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(Reducing, ModelSpace) {
  const LaurentSymbol th = blaschke_factor(0.5);
  const TruncatedOp t2 = synth_t2_reducing(model(LaurentSymbol::identity(1), th));
  const InvarianceReport r = verify_invariance(add(shift(kN, 1), t2), model_space(th, kN), InvarianceMode::Reducing, 1e-8);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_LE(r.adjoint_residual, 1e-8);
}

TEST(Reducing, WholeSpaceFreeTermsOnly) {
  const Subspace w = Subspace::whole({8, 1});
  EXPECT_TRUE(verify_invariance(shift(8, 1), w, InvarianceMode::Reducing, 1e-8).passed);
}

TEST(Reducing, DroppingSecondCoreTermBreaksAdjointSide) {
  Corpus c(65);
  for (int trial = 0; trial < 4; ++trial) {
    const RepSpec s = c.inner_rep(64);
    const Subspace m = build_rep(s).m;
    const int f = s.phi.rows();
    const TruncatedOp t2 = synth_t2_reducing(s);
    const InvarianceReport good = verify_invariance(add(shift(64, f), t2), m, InvarianceMode::Reducing, 1e-8);
    EXPECT_TRUE(good.passed);
    // Keep only the t0 part of the core.
    const TruncatedOp half = synth_t0_shift(s);
    const InvarianceReport bad = verify_invariance(add(shift(64, f), half), m, InvarianceMode::Reducing, 1e-8);
    EXPECT_GT(bad.adjoint_residual, 1e-3);
  }
}

TEST(Decompose, CompletenessOnRandomQ) {
  Corpus c(66);
  for (int trial = 0; trial < 4; ++trial) {
    const Subspace m = model_space(c.bp_product(2, 2), kN);
    const Subspace mp = orth_complement(m);
    PerturbationSpec spec;
    for (int k = 0; k < 2; ++k) {
      spec.terms_m.emplace_back(in_subspace(c, m), c.unit_vector(m.ambient().size()));
      spec.terms_perp.emplace_back(c.unit_vector(m.ambient().size()), in_subspace(c, mp));
    }
    const TruncatedOp q = synth_t0_general(shift(kN, 2), m, spec);
    const Decomposition d = decompose_perturbation(shift(kN, 2), m, q);
    EXPECT_LE(d.residual, 1e-10);
  }
}

TEST(Kinds, NamesRoundTrip) {
  for (auto k : {PerturbationKind::T0General, PerturbationKind::T0Shift, PerturbationKind::T1Backshift,
                 PerturbationKind::T2Reducing})
    EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_THROW(parse_kind("t9"), InvalidParameter);
}
