#include "crdeform/deformation_complex.hpp"
#include "crdeform/galerkin.hpp"
#include "crdeform/norms.hpp"
#include "crdeform/sampling.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace crdeform;

namespace {

VectorXc random_vector(Rng& rng, int n)
{
  VectorXc v(n);
  for (int k = 0; k < n; ++k) v[k] = rng.gaussian_complex();
  return v;
}

const GalerkinComplex& complex6()
{
  static const GalerkinComplex gc(6);
  return gc;
}

}  // namespace

TEST(GalerkinSpace, Dimensions)
{
  const auto& gc = complex6();
  EXPECT_EQ(gc.F().dim(), ScalarSpace(2).dim());
  EXPECT_EQ(gc.E1().dim(), 3 * ScalarSpace(6).dim());
  EXPECT_EQ(gc.E2().dim(), 2 * ScalarSpace(8).dim());
  int total = 0;
  for (const auto& [k, idx] : gc.E1().sectors()) total += static_cast<int>(idx.size());
  EXPECT_EQ(total, gc.E1().dim());
  EXPECT_EQ(GalerkinComplex(3).F().dim(), 0);
  EXPECT_THROW(GalerkinComplex(1), std::invalid_argument);
}

TEST(Galerkin, DMatchesSymbolicOperator)
{
  const auto& gc = complex6();
  Rng rng(42, 31);
  for (int s = 0; s < 5; ++s) {
    const VectorXc u = random_vector(rng, gc.F().dim());
    const NumericFunction uf = synthesize(u, gc.F().scalar());
    const VectorXc sym = form_to_e1(D_op(uf), gc.E1());
    EXPECT_LT((gc.D().apply(u) - sym).norm(), 1e-11 * sym.norm());
  }
}

TEST(Galerkin, DColumnAtZbarSquaredGround)
{
  const auto& gc = complex6();
  const NumericFunction u = NumericFunction::ground().times_variable(Var::ZB1).times_variable(Var::ZB1);
  const VectorXc uc = project(u, gc.F().scalar());
  // z-bar_1^2 g0 = sqrt2 psi_{0,2}
  EXPECT_NEAR(std::abs(uc[gc.F().scalar().find(HermiteIndex{{0, 2, 0, 0, 0}})] - Complex(std::sqrt(2.0))), 0, 1e-14);
  const VectorXc sym = form_to_e1(D_op(u), gc.E1());
  EXPECT_LT((gc.D().apply(uc) - sym).norm(), 1e-12);
}

TEST(Galerkin, Delbar1MatchesSymbolicOperator)
{
  const auto& gc = complex6();
  Rng rng(42, 32);
  for (int s = 0; s < 3; ++s) {
    const VectorXc v = random_vector(rng, gc.E1().dim());
    const auto phi = e1_to_form(v, gc.E1());
    const auto psi = delbar_p(phi);
    EXPECT_LT(std::sqrt(norm_squared(psi.at(0, 0))), 1e-11 * v.norm());
    const VectorXc sym = form_to_e2(psi, gc.E2());
    EXPECT_LT((gc.delbar1().apply(v) - sym).norm(), 1e-11 * sym.norm());
    // roundtrip of the E1 coordinates
    EXPECT_LT((form_to_e1(phi, gc.E1()) - v).norm(), 1e-11 * v.norm());
  }
}

TEST(Galerkin, ComplexPropertySurvivesTruncation)
{
  for (int N : {4, 6}) {
    const GalerkinComplex gc(N);
    const SparseXc BD = gc.delbar1().m * gc.D().m;
    EXPECT_LT(BD.norm(), 1e-12 * gc.D().m.norm()) << N;
    EXPECT_LT((gc.DDstar() * gc.delbar1_star_L_delbar1()).norm(), 1e-9) << N;
  }
}

TEST(Galerkin, AdjointsAndPositivity)
{
  const auto& gc = complex6();
  EXPECT_EQ((gc.assemble("D*").m - SparseXc(gc.D().m.adjoint())).norm(), 0.0);
  const SparseXc& box = gc.box().m;
  EXPECT_LT(SparseXc(box - SparseXc(box.adjoint())).norm(), 1e-12 * box.norm());
  Rng rng(42, 33);
  for (int s = 0; s < 50; ++s) {
    const VectorXc v = random_vector(rng, gc.E1().dim());
    const Complex q = v.dot(box * v);
    EXPECT_GE(q.real(), 0);
    EXPECT_LT(std::abs(q.imag()), 1e-10 * std::abs(q));
    // (v, box v) = |D* v|^2 + (B v, L B v)
    const VectorXc Bv = gc.delbar1().apply(v);
    const double split = gc.D_star().apply(v).squaredNorm() + Bv.dot(gc.L().apply(Bv)).real();
    EXPECT_NEAR(q.real(), split, 1e-10 * split);
  }
  EXPECT_TRUE(gc.box().apply(VectorXc::Zero(gc.E1().dim())).isZero());
}

TEST(Galerkin, LMatchesProjectedSymbolicL)
{
  const GalerkinComplex gc(4);
  Rng rng(42, 34);
  const int n = gc.E2().scalar_dim();
  const VectorXc v = random_vector(rng, gc.E2().dim());
  const NumericFunction f = synthesize(v.segment(0, n), gc.E2().scalar());
  const VectorXc sym = project(L_scalar(f), gc.E2().scalar());
  EXPECT_LT((gc.L().apply(v).segment(0, n) - sym).norm(), 1e-10 * sym.norm());
}

TEST(Galerkin, NormGramsMatchSymbolicNorms)
{
  const GalerkinComplex gc(3);
  Rng rng(42, 35);
  const VectorXc v = random_vector(rng, gc.E1().dim());
  const auto phi = e1_to_form(v, gc.E1());
  for (auto [k, m] : {std::pair{0, 0}, {1, 0}, {2, 0}, {1, 1}}) {
    const double sym = mixed_norm_squared(phi, k, m);
    EXPECT_NEAR(v.dot(gc.E1_gram(k, m) * v).real(), sym, 1e-10 * sym) << k << "," << m;
    EXPECT_NEAR(mixed_norm_squared(v, gc.E1(), k, m), sym, 1e-10 * sym) << k << "," << m;
  }
}

TEST(Galerkin, OperatorsAreSectorDiagonal)
{
  const auto& gc = complex6();
  auto sector_of = [](const GalerkinSpace& S) {
    std::vector<SectorKey> out(static_cast<std::size_t>(S.dim()));
    for (const auto& [k, idx] : S.sectors())
      for (int i : idx) out[static_cast<std::size_t>(i)] = k;
    return out;
  };
  const auto sF = sector_of(gc.F()), s1 = sector_of(gc.E1()), s2 = sector_of(gc.E2());
  auto check = [](const SparseXc& M, const std::vector<SectorKey>& rows, const std::vector<SectorKey>& cols) {
    for (int k = 0; k < M.outerSize(); ++k)
      for (SparseXc::InnerIterator it(M, k); it; ++it)
        if (rows[static_cast<std::size_t>(it.row())] != cols[static_cast<std::size_t>(it.col())]) return false;
    return true;
  };
  EXPECT_TRUE(check(gc.D().m, s1, sF));
  EXPECT_TRUE(check(gc.delbar1().m, s2, s1));
  EXPECT_TRUE(check(gc.L().m, s2, s2));
  EXPECT_TRUE(check(gc.box().m, s1, s1));
  EXPECT_TRUE(check(gc.E1_gram(2), s1, s1));
}

TEST(Galerkin, InterfaceErrors)
{
  const GalerkinComplex gc(4);
  EXPECT_THROW(gc.assemble("curl"), std::invalid_argument);
  EXPECT_THROW(gc.D() * gc.D(), std::invalid_argument);
  EXPECT_THROW(gc.D().apply(VectorXc::Zero(3)), std::invalid_argument);
  EXPECT_NO_THROW(gc.delbar1() * gc.D());
}

TEST(Galerkin, MatrixMarketDump)
{
  const GalerkinComplex gc(4);
  const std::string path = testing::TempDir() + "crdeform_D.mtx";
  ASSERT_TRUE(save_matrix_market(gc.D(), path));
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("MatrixMarket"), std::string::npos);
  EXPECT_NE(header.find("complex"), std::string::npos);
  std::remove(path.c_str());
}
