#include "crdeform/probes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace crdeform;

namespace {

struct Setup
{
  GalerkinComplex gc;
  HodgeData hd;
  KuranishiMap K;
  explicit Setup(int N) : gc(N), hd(gc), K(gc, hd) {}
};

const Setup& setup4()
{
  static const Setup s(4);
  return s;
}

}  // namespace

TEST(NeumannGainProbe, FiniteOverFiftySamples)
{
  const auto& s = setup4();
  for (int m : {0, 1}) {
    Rng rng(42, 61);
    const auto t = neumann_gain_probe(s.gc, s.hd, rng, 50, m);
    EXPECT_EQ(t.samples, 50);
    EXPECT_TRUE(std::isfinite(t.max_ratio));
    EXPECT_GT(t.max_ratio, 0);
    EXPECT_LE(t.mean_ratio, t.max_ratio);
  }
  Rng rng(42, 61);
  EXPECT_THROW(neumann_gain_probe(s.gc, s.hd, rng, 1, 2), std::invalid_argument);
}

TEST(NeumannGainProbe, LaplacianImagesAndHarmonics)
{
  const auto& s = setup4();
  Rng rng(42, 62);
  for (int m : {0, 1}) {
    const VectorXc v = random_coefficients(rng, s.gc.E1().dim());
    const VectorXc psi = s.gc.box().m * v;
    const double lhs = e1_mixed_norm(s.gc, s.hd.neumann(psi), 4, m) / e1_mixed_norm(s.gc, psi, 0, m);
    const double rhs = e1_mixed_norm(s.gc, v - s.hd.harmonic_projection(v), 4, m) / e1_mixed_norm(s.gc, psi, 0, m);
    EXPECT_NEAR(lhs, rhs, 1e-8 * rhs);
  }
  const VectorXc h = s.hd.harmonic_basis().col(0);
  EXPECT_LT(e1_mixed_norm(s.gc, s.hd.neumann(h), 4, 1), 1e-10);
}

TEST(R2BoundProbe, QuadraticHomogeneity)
{
  const auto& s = setup4();
  Rng rng(42, 63);
  for (int k = 0; k < 5; ++k) {
    const VectorXc phi = random_coefficients(rng, s.gc.E1().dim());
    for (int m : {0, 1}) EXPECT_NEAR(r2_bound_ratio(s.K, 3.0 * phi, m), r2_bound_ratio(s.K, phi, m), 1e-10);
  }
}

TEST(R2BoundProbe, BoundedOnFiftySamples)
{
  const auto& s = setup4();
  Rng rng(42, 64);
  const auto t = r2_bound_probe(s.K, rng, 50, 0);
  EXPECT_TRUE(std::isfinite(t.max_ratio));
  EXPECT_GT(t.max_ratio, 0);
}

TEST(R2BoundProbe, VanishesWhenR2Vanishes)
{
  // phi = f e1 (x) thetabar^1 has no bracket contributions
  const auto& s = setup4();
  Rng rng(42, 65);
  VectorXc phi = VectorXc::Zero(s.gc.E1().dim());
  const int n = s.gc.E1().scalar_dim();
  phi.head(n) = random_coefficients(rng, n);
  EXPECT_LT(s.K.r2(phi).norm(), 1e-14);
  EXPECT_LT(r2_bound_ratio(s.K, phi, 0), 1e-14);
}
