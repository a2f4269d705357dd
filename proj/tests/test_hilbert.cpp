#include <gtest/gtest.h>

#include "jcsq/hilbert.hpp"
#include "oracles.hpp"

using namespace jcsq;

TEST(OscLadder, SmallCutMatrixElements) {
  const LadderRep rep = osc_ladder(2);
  EXPECT_EQ(rep.dim(), 3);
  EXPECT_EQ(rep.K()(0, 1), cplx(1.0));
  EXPECT_NEAR(rep.K()(1, 2).real(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ((rep.K().array() != cplx(0.0)).count(), 2);
}

TEST(OscLadder, LargeCutDimension) { EXPECT_EQ(osc_ladder(2000).dim(), 2001); }

TEST(OscLadder, CommutatorTruncationCorner) {
  const LadderRep rep = osc_ladder(5);
  const CMat comm = rep.K() * rep.Kdag() - rep.Kdag() * rep.K();
  CMat expected = CMat::Identity(6, 6);
  expected(5, 5) = -5.0;
  EXPECT_LE(max_abs(comm - expected), 1e-13);
}

TEST(OscLadder, NumberOperatorDiagonal) {
  const LadderRep rep = osc_ladder(7);
  const CMat n = rep.Kdag() * rep.K();
  for (Index k = 0; k < 8; ++k) EXPECT_NEAR(n(k, k).real(), double(k), 1e-13);
  EXPECT_LE(max_abs(n - CMat(n.diagonal().asDiagonal())), 1e-15);
}

TEST(OscLadder, RejectsZeroCut) { EXPECT_THROW(osc_ladder(0), std::invalid_argument); }

TEST(OscLadder, MatchesKetOracle) {
  for (int n : {1, 4, 33}) EXPECT_LE(max_abs(osc_ladder(n).K() - oracle::annihilation(n)), 1e-15);
}

TEST(SpinLadder, SpinHalfLowering) {
  const LadderRep rep = spin_ladder(SpinValue{1});
  // Ascending M = (-1/2, +1/2); in the descending ordering this reads [[0,0],[1,0]].
  CMat expected = CMat::Zero(2, 2);
  expected(0, 1) = 1.0;
  EXPECT_LE(max_abs(rep.K() - expected), 1e-15);
  CMat flip(2, 2);
  flip << 0, 1, 1, 0;
  CMat descending(2, 2);
  descending << 0, 0, 1, 0;
  EXPECT_LE(max_abs(flip * rep.K() * flip - descending), 1e-15);
}

TEST(SpinLadder, SpinOneElements) {
  const LadderRep rep = spin_ladder(SpinValue{2});
  // <0|J-|1> and <-1|J-|0>
  EXPECT_NEAR(rep.K()(1, 2).real(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(rep.K()(0, 1).real(), std::sqrt(2.0), 1e-15);
}

TEST(SpinLadder, Su2AlgebraAtJ20) {
  const LadderRep rep = spin_ladder(SpinValue{40});
  EXPECT_EQ(rep.dim(), 41);
  const CMat jx = rep.jx(), jy = rep.jy(), jz = rep.jz();
  EXPECT_LE(max_abs(jx * jy - jy * jx - kI * jz), 1e-12);
  EXPECT_LE(max_abs(jy * jz - jz * jy - kI * jx), 1e-12);
  EXPECT_LE(max_abs(jz * jx - jx * jz - kI * jy), 1e-12);
  const CMat casimir = jx * jx + jy * jy + jz * jz;
  EXPECT_LE(max_abs(casimir - 20.0 * 21.0 * CMat::Identity(41, 41)), 1e-10);
  EXPECT_LE(max_abs(rep.jplus() - rep.jminus().adjoint()), 0.0);
}

TEST(SpinLadder, MatchesKetOracleAcrossJ) {
  for (int tw = 1; tw <= 21; ++tw) {
    const LadderRep rep = spin_ladder(SpinValue{tw});
    EXPECT_EQ(rep.dim(), tw + 1);
    EXPECT_LE(max_abs(rep.K() - oracle::spin_lowering(tw)), 1e-13) << "2J = " << tw;
    EXPECT_LE(max_abs(rep.jz() - oracle::spin_z(tw)), 0.0);
  }
}

TEST(SpinLadder, ParsesRationalAndRejectsOthers) {
  EXPECT_EQ(SpinValue::parse("9/2").twice, 9);
  EXPECT_EQ(SpinValue::parse("4.5").twice, 9);
  EXPECT_EQ(SpinValue::parse("10").twice, 20);
  EXPECT_THROW(SpinValue::parse("4.3"), std::invalid_argument);
  EXPECT_THROW(SpinValue::parse("1/3"), std::invalid_argument);
  EXPECT_THROW(spin_ladder(SpinValue{0}), std::invalid_argument);
  EXPECT_EQ(spin_ladder(SpinValue{9}).label(0), "M=-9/2");
  EXPECT_EQ(spin_ladder(SpinValue{4}).label(4), "M=2");
}

TEST(CustomLadder, ValidatesShape) {
  EXPECT_THROW(custom_ladder(CMat::Zero(2, 3)), std::invalid_argument);
  EXPECT_THROW(custom_ladder(CMat::Zero(1, 1)), std::invalid_argument);
  EXPECT_EQ(custom_ladder(CMat::Zero(4, 4)).dim(), 4);
}

TEST(JointEmbed, IdentityAndSingleBlock) {
  const CMat id = joint_embed(CMat::Identity(2, 2), CMat::Identity(3, 3));
  EXPECT_LE(max_abs(id - CMat::Identity(6, 6)), 0.0);
  const LadderRep rep = spin_ladder(SpinValue{1});
  const CMat m = joint_embed(sigma_plus(), rep.K());
  EXPECT_LE(max_abs(m.block(2, 0, 2, 2) - rep.K()), 0.0);
  EXPECT_LE(m.block(0, 0, 2, 2).cwiseAbs().maxCoeff() + m.block(0, 2, 2, 2).cwiseAbs().maxCoeff() +
                m.block(2, 2, 2, 2).cwiseAbs().maxCoeff(),
            0.0);
}

TEST(JointEmbed, DimensionMismatch) {
  EXPECT_THROW(joint_embed(CMat::Identity(3, 3), CMat::Identity(2, 2)), std::invalid_argument);
  EXPECT_THROW(joint_embed(CMat::Identity(2, 2), CMat::Zero(2, 3)), std::invalid_argument);
}

TEST(JointEmbedProperty, MatchesIndexOracleAndMixedProduct) {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = gen.integer(2, 9);
    const CMat a = gen.matrix(2, 2), b = gen.matrix(d, d), c = gen.matrix(2, 2), e = gen.matrix(d, d);
    EXPECT_LE(max_abs(joint_embed(a, b) - oracle::kron(a, b)), 1e-14);
    EXPECT_LE(max_abs(joint_embed(a, b) * joint_embed(c, e) - joint_embed(a * c, b * e)), 1e-11);
  }
}

TEST(JointEmbedProperty, JcCombinationHermitianForAnyK) {
  oracle::Gen gen(12);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = gen.integer(2, 8);
    const LadderRep rep = custom_ladder(gen.matrix(d, d));
    const CMat h = joint_embed(sigma_plus(), rep.K()) + joint_embed(sigma_minus(), rep.Kdag());
    EXPECT_LE(max_abs(h - h.adjoint()), 0.0);
  }
  for (const LadderRep& rep : {osc_ladder(6), spin_ladder(SpinValue{5})}) {
    const CMat h = joint_embed(sigma_plus(), rep.K()) + joint_embed(sigma_minus(), rep.Kdag());
    EXPECT_LE(max_abs(h - h.adjoint()), 0.0);
  }
}

TEST(JointStateProperty, NormalizesAndKeepsLayout) {
  oracle::Gen gen(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = gen.integer(2, 30);
    const CVec v = gen.state(2 * d) * gen.uniform(0.1, 30.0);
    const JointState s(v);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    EXPECT_EQ(s.anc_dim(), d);
    EXPECT_LE((s.component(1) - v.segment(d, d) / v.norm()).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_THROW(JointState(CVec::Ones(5)), std::invalid_argument);
  EXPECT_THROW(JointState(CVec::Zero(4)), std::invalid_argument);
}

TEST(JointState, ProductLayoutIsTlsSlow) {
  CVec tls(2), anc(3);
  tls << 0.6, 0.8;
  anc << 1.0, 0.0, 0.0;
  const JointState s = JointState::product(tls, anc);
  EXPECT_NEAR(s.amplitudes()(0).real(), 0.6, 1e-15);
  EXPECT_NEAR(s.amplitudes()(3).real(), 0.8, 1e-15);
}
