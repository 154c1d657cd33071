#include "crdeform/kuranishi.hpp"
#include "crdeform/majorant.hpp"
#include "crdeform/sampling.hpp"

#include <gtest/gtest.h>

using namespace crdeform;

namespace {

struct Setup
{
  GalerkinComplex gc;
  HodgeData hd;
  KuranishiMap K;
  explicit Setup(int N) : gc(N), hd(gc), K(gc, hd) {}
};

const Setup& setup(int N)
{
  static const Setup s4(4), s6(6);
  return N == 4 ? s4 : s6;
}

}  // namespace

TEST(MultiIndex, EnumerationAndOrdering)
{
  EXPECT_EQ(multi_indices(2, 3).size(), 4u);
  EXPECT_EQ(multi_indices(3, 2).size(), 6u);
  EXPECT_EQ(multi_indices(2, 2).front(), (MultiIndex{2, 0}));
  EXPECT_TRUE(MultiIndexLess{}({0, 1}, {2, 0}));
  EXPECT_TRUE(MultiIndexLess{}({1, 0}, {0, 1}));
}

TEST(MultiIndexSeries, SliceAndEvaluate)
{
  MultiIndexSeries s(2, 3, 1);
  s.set({1, 0}, VectorXc::Constant(1, Complex(2)));
  s.set({1, 1}, VectorXc::Constant(1, Complex(3)));
  s.set({0, 3}, VectorXc::Constant(1, Complex(-1)));
  EXPECT_EQ(s.slice(2).coefficients().size(), 1u);
  EXPECT_TRUE(s.slice(2).coefficient({1, 0}).isZero());
  const Complex x(0.5, 0.25), y(-1, 2);
  EXPECT_LT(std::abs(s.evaluate({x, y})[0] - (2. * x + 3. * x * y - y * y * y)), 1e-14);
  EXPECT_THROW(s.set({2, 2}, VectorXc::Zero(1)), std::invalid_argument);
}

TEST(DftOracle, RecoversPolynomialCoefficients)
{
  auto g = [](const std::vector<Complex>& t) {
    VectorXc v(2);
    v << 1. + 2. * t[0] * t[1] - 3. * std::pow(t[1], 4), Complex(0, 1) * t[0] * t[0];
    return v;
  };
  const auto c = dft_coefficients(g, 2, 4, 4, 2);
  EXPECT_LT(std::abs(c.coefficient({0, 0})[0] - 1.), 1e-14);
  EXPECT_LT(std::abs(c.coefficient({1, 1})[0] - 2.), 1e-14);
  EXPECT_LT(std::abs(c.coefficient({0, 4})[0] + 3.), 1e-14);
  EXPECT_LT(std::abs(c.coefficient({2, 0})[1] - Complex(0, 1)), 1e-14);
  EXPECT_LT(c.coefficient({1, 0}).norm(), 1e-14);
}

TEST(Kuranishi, LinearSliceIsTheParameter)
{
  const auto& s = setup(6);
  const auto fam = solve_kuranishi(s.K);
  ASSERT_EQ(fam.t_basis.cols(), 2);
  EXPECT_EQ(fam.phi.coefficient({1, 0}), fam.t_basis.col(0));
  EXPECT_EQ(fam.phi.coefficient({0, 1}), fam.t_basis.col(1));
  EXPECT_TRUE(fam.phi.coefficient({0, 0}).isZero(0));
}

TEST(Kuranishi, QuadraticSliceFromParameterPart)
{
  const auto& s = setup(6);
  const auto fam = solve_kuranishi(s.K);
  const VectorXc h1 = fam.t_basis.col(0), h2 = fam.t_basis.col(1);
  EXPECT_LT((fam.phi.coefficient({2, 0}) + s.K.T(h1)).norm(), 1e-13);
  EXPECT_LT((fam.phi.coefficient({0, 2}) + s.K.T(h2)).norm(), 1e-13);
  // cross term from polarization: R2(h1 + h2) - R2(h1) - R2(h2)
  const VectorXc cross = s.K.r2(h1 + h2) - s.K.r2(h1) - s.K.r2(h2);
  EXPECT_LT((fam.phi.coefficient({1, 1}) + s.K.solve_part(cross)).norm(), 1e-12);
}

TEST(Kuranishi, ResidualsVanishThroughOrderThree)
{
  for (int N : {4, 6}) {
    const auto& s = setup(N);
    const auto fam = solve_kuranishi(s.K);
    const auto res = kuranishi_residuals(s.K, fam);
    EXPECT_LT(res.banach_residual, 1e-8) << N;
    EXPECT_EQ(res.linear_residual, 0.0) << N;
    EXPECT_LT(res.delbar_residual, 1e-8) << N;
    EXPECT_LT(res.obstruction_identity, 1e-8) << N;
    EXPECT_EQ(res.obstruction_low_order, 0.0) << N;
  }
}

TEST(Kuranishi, ObstructionAtLowOrdersIsExactlyZero)
{
  const auto fam = solve_kuranishi(setup(4).K);
  EXPECT_TRUE(obstruction(fam, {0, 0}).isZero(0));
  EXPECT_TRUE(obstruction(fam, {1, 0}).isZero(0));
  EXPECT_TRUE(obstruction(fam, {0, 1}).isZero(0));
}

TEST(Kuranishi, PicardIterationStabilizesSliceBySlice)
{
  const auto& s = setup(4);
  const auto fam = solve_kuranishi(s.K);
  const auto it = picard_iterates(s.K, fam.t_basis, 3, 3);
  for (int m = 1; m <= 3; ++m)
    for (const auto& a : multi_indices(2, m)) {
      // slice m is final after m - 1 iterations and unchanged after
      for (std::size_t k = static_cast<std::size_t>(m - 1); k < it.size(); ++k)
        EXPECT_LT((it[k].coefficient(a) - fam.phi.coefficient(a)).norm(), 1e-12) << m << " " << k;
    }
  EXPECT_GT((it[0].coefficient({2, 0}) - fam.phi.coefficient({2, 0})).norm(), 1e-6);
}

TEST(Kuranishi, EquivariantUnderUnitaryChangeOfParameters)
{
  const auto& s = setup(4);
  const auto fam = solve_kuranishi(s.K);
  const double th = 0.7;
  Eigen::Matrix2cd U;
  U << Complex(std::cos(th), 0), Complex(0, std::sin(th)), Complex(0, std::sin(th)), Complex(std::cos(th), 0);
  const auto fam2 = solve_kuranishi(s.K, fam.t_basis * U, 3);
  Rng rng(42, 51);
  for (int k = 0; k < 5; ++k) {
    const Eigen::Vector2cd sv(rng.gaussian_complex() * 0.3, rng.gaussian_complex() * 0.3);
    const Eigen::Vector2cd t = U * sv;
    EXPECT_LT((fam2.phi.evaluate({sv[0], sv[1]}) - fam.phi.evaluate({t[0], t[1]})).norm(), 1e-12);
    EXPECT_LT((fam2.obstruction.evaluate({sv[0], sv[1]}) - fam.obstruction.evaluate({t[0], t[1]})).norm(), 1e-12);
  }
}

TEST(Kuranishi, RigidFamilyWithoutParameters)
{
  const auto& s = setup(4);
  const auto fam = solve_kuranishi(s.K, MatrixXc(s.gc.E1().dim(), 0), 3);
  EXPECT_TRUE(fam.rigid());
  EXPECT_TRUE(fam.phi.coefficients().empty());
}

TEST(Kuranishi, TruncationOverflowIsReported)
{
  const auto& s = setup(4);
  const KuranishiMap tight(s.gc, s.hd, 6);
  EXPECT_THROW(solve_kuranishi(tight), std::overflow_error);
  EXPECT_THROW(solve_kuranishi(s.K, kuranishi_parameters(s.hd, 2), 0), std::invalid_argument);
}

TEST(Majorant, Coefficients)
{
  const mpq_class b(3), c(5);
  const auto A = build_A(b, c, 2, 4);
  EXPECT_EQ(A.coefficient({0, 0}), 0);
  EXPECT_EQ(A.coefficient({1, 0}), b / 16);
  EXPECT_EQ(A.coefficient({1, 1}), b / (16 * c) * c * c / 4);
  EXPECT_THROW(build_A(mpq_class(0), c, 2, 4), std::invalid_argument);
}

TEST(Majorant, DominationAtTruncationTwelve)
{
  const auto A = build_A(1, 1, 2, 12);
  EXPECT_TRUE(dominates(A, A));
  EXPECT_TRUE(dominates(series_mult(A, A), mpq_class(1) * A));
  for (int k : {3, 4}) EXPECT_TRUE(dominates(series_power(A, k), A)) << k;
  const MajorantSeries zero(2, 12);
  EXPECT_TRUE(series_mult(A, zero).coefficients().empty());
  // the converse fails: A is not dominated by A^2
  EXPECT_FALSE(dominates(A, series_mult(A, A)));
}

TEST(Majorant, DominationWithGeneralConstants)
{
  const mpq_class b(2, 3), c(7, 2);
  const auto A = build_A(b, c, 2, 8);
  const auto rep = domination_report(series_mult(A, A), (b / c) * A);
  EXPECT_TRUE(rep.holds);
  EXPECT_LE(rep.worst_ratio, 1);
}
