#include "crdeform/frame.hpp"
#include "crdeform/sampling.hpp"

#include <gtest/gtest.h>

using namespace crdeform;

namespace {

using Q = ComplexRational;
using Fn = ExactFunction;

Fn var(Var v) { return Fn::variable(v); }
Q I() { return Q::i(); }

FrameVector<Q> random_vector(Rng& rng, bool horizontal_only = false)
{
  FrameVector<Q> V;
  for (int k = horizontal_only ? 1 : 0; k < kFrameSize; ++k)
    V.c[static_cast<std::size_t>(k)] = random_exact_function(rng, 3, 3, Weight<mpq_class>::polynomial());
  return V;
}

}  // namespace

TEST(FrameField, KnownValues)
{
  EXPECT_TRUE(apply_frame_field(FrameField::E1, var(Var::ZB1)).is_zero());
  EXPECT_EQ(apply_frame_field(FrameField::EB1, var(Var::ZB1)), Fn::constant(1));
  EXPECT_EQ(apply_frame_field(FrameField::E1, var(Var::T)), var(Var::ZB1) * (I() * Q::ratio(1, 2)));
}

TEST(FrameField, GaussianWeightDerivative)
{
  // e1 g0 = (d/dz1)(exp(-|z|^2/2 - t^2/2)) + (i/2) zb1 d/dt(...) = (-zb1/2 - (i/2) zb1 t) g0
  const Fn g0 = Fn::ground();
  const Fn expected = var(Var::ZB1).with_weight(g0.weight()) * Q::ratio(-1, 2) +
                      (var(Var::ZB1) * var(Var::T)).with_weight(g0.weight()) * (-I() * Q::ratio(1, 2));
  EXPECT_EQ(apply_frame_field(FrameField::E1, g0), expected);
}

TEST(Bracket, KnownValues)
{
  using V = FrameVector<Q>;
  const auto e1 = V::basis(FrameField::E1), e2 = V::basis(FrameField::E2);
  const auto eb1 = V::basis(FrameField::EB1), eb2 = V::basis(FrameField::EB2);
  EXPECT_EQ(bracket(e1, eb1), V::basis(FrameField::Xi, Fn::constant(-I())));
  EXPECT_TRUE(bracket(e1, e2).is_zero());
  EXPECT_EQ(bracket(eb2, V::basis(FrameField::E1, var(Var::ZB2))), e1);
}

TEST(Bracket, FrameRelationsFromCoordinates)
{
  // [e_a, eb_b] computed as commutators of the coordinate derivatives on test functions.
  Rng rng(1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const Fn f = random_exact_function(rng, 4, 5, Weight<mpq_class>::polynomial());
    for (int a = 1; a <= 2; ++a)
      for (int b = 1; b <= 2; ++b) {
        const Fn lhs = apply_frame_field(e_field(a), apply_frame_field(eb_field(b), f)) -
                       apply_frame_field(eb_field(b), apply_frame_field(e_field(a), f));
        const Fn rhs = a == b ? apply_frame_field(FrameField::Xi, f) * (-I()) : Fn{};
        EXPECT_EQ(lhs, rhs);
      }
  }
}

TEST(Bracket, AntisymmetryAndJacobi)
{
  Rng rng(2, 1);
  for (int trial = 0; trial < 6; ++trial) {
    const auto X = random_vector(rng), Y = random_vector(rng), Z = random_vector(rng);
    EXPECT_TRUE((bracket(X, Y) + bracket(Y, X)).is_zero());
    const auto jac = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y));
    EXPECT_TRUE(jac.is_zero());
  }
}

TEST(Bracket, MatchesCommutatorOfDerivations)
{
  Rng rng(3, 1);
  for (int trial = 0; trial < 4; ++trial) {
    const auto X = random_vector(rng), Y = random_vector(rng);
    const Fn f = random_exact_function(rng, 3, 4, Weight<mpq_class>::polynomial());
    EXPECT_EQ(bracket(X, Y).apply(f), X.apply(Y.apply(f)) - Y.apply(X.apply(f)));
  }
}

TEST(ContactForm, ReebAndDtheta)
{
  using V = FrameVector<Q>;
  const auto xi = V::basis(FrameField::Xi);
  EXPECT_EQ(theta(xi), Fn::constant(1));
  Rng rng(4, 1);
  for (int trial = 0; trial < 6; ++trial) {
    const auto W = random_vector(rng);
    EXPECT_TRUE(dtheta(xi, W).is_zero());
    const auto X = random_vector(rng, true), Y = random_vector(rng, true);
    EXPECT_EQ(theta(bracket(X, Y)), -dtheta(X, Y));
  }
}

TEST(LeviForm, KnownValues)
{
  using V = FrameVector<Q>;
  EXPECT_EQ(levi_form(V::basis(FrameField::E1), V::basis(FrameField::EB1)), Fn::constant(1));
  EXPECT_TRUE(levi_form(V::basis(FrameField::E1), V::basis(FrameField::EB2)).is_zero());
  EXPECT_EQ(levi_form(V::basis(FrameField::E1, var(Var::Z1)), V::basis(FrameField::EB1)), var(Var::Z1));
  EXPECT_THROW(levi_form(V::basis(FrameField::Xi), V::basis(FrameField::EB1)), std::invalid_argument);
}

TEST(LeviForm, HermitianPositive)
{
  using V = FrameVector<Q>;
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      EXPECT_EQ(levi_form(V::basis(e_field(a)), V::basis(eb_field(b))), Fn::constant(a == b ? 1 : 0));
}

TEST(Projections, KnownValues)
{
  using V = FrameVector<Q>;
  const auto xi = V::basis(FrameField::Xi), e1 = V::basis(FrameField::E1), eb1 = V::basis(FrameField::EB1);
  EXPECT_EQ(pi_F(xi + e1), xi);
  EXPECT_TRUE(pi_prime(eb1).is_zero());
  const auto v = V::basis(FrameField::Xi, var(Var::ZB1)) + I() * e1;
  EXPECT_EQ(opi_prime(v), I() * e1);
}

TEST(Projections, IdempotentAndComplementary)
{
  Rng rng(5, 1);
  const auto v = random_vector(rng);
  EXPECT_EQ(pi_prime(pi_prime(v)), pi_prime(v));
  EXPECT_EQ(pi_prime(v) + opi_dblprime(v), v);
  EXPECT_EQ(pi_F(v) + opi_prime(v) + opi_dblprime(v), v);
  EXPECT_TRUE(pi_F(opi_prime(v)).is_zero());
}

TEST(InnerProduct, GroundStateAndMoments)
{
  const Fn g0 = Fn::ground();
  EXPECT_EQ(inner_product(g0, g0), Q(1));
  // x1 = (z1 + zb1)/2; one-dimensional second moment of exp(-x^2) / sqrt(pi) is 1/2
  const Fn x1 = (var(Var::Z1) + var(Var::ZB1)) * Q::ratio(1, 2);
  const Fn f = x1 * g0;
  EXPECT_EQ(inner_product(f, f), Q::ratio(1, 2));
  // t^2 g0: \int t^4 e^{-t^2} / sqrt(pi) = 3/4
  const Fn t2 = var(Var::T) * var(Var::T) * g0;
  EXPECT_EQ(inner_product(t2, t2), Q::ratio(3, 4));
  // distinct Hermite states are orthogonal
  EXPECT_TRUE(inner_product(g0, var(Var::Z1) * g0).is_zero());
  EXPECT_THROW(inner_product(var(Var::Z1), var(Var::Z1)), std::invalid_argument);
}

TEST(InnerProduct, ConjugateSymmetricAndPositive)
{
  Rng rng(6, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Fn f = random_exact_function(rng, 4, 5), g = random_exact_function(rng, 4, 5);
    EXPECT_EQ(inner_product(f, g), inner_product(g, f).conj());
    EXPECT_GT(inner_product(f, f).re(), 0);
    EXPECT_EQ(inner_product(f, f).im(), 0);
  }
}

TEST(InnerProduct, FrameAdjoints)
{
  Rng rng(7, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Fn f = random_exact_function(rng, 4, 4), g = random_exact_function(rng, 4, 4);
    for (int a = 1; a <= 2; ++a) {
      EXPECT_EQ(inner_product(apply_frame_field(e_field(a), f), g), -inner_product(f, apply_frame_field(eb_field(a), g)));
      EXPECT_EQ(inner_product(apply_frame_field(eb_field(a), f), g), -inner_product(f, apply_frame_field(e_field(a), g)));
    }
    EXPECT_EQ(inner_product(apply_frame_field(FrameField::Xi, f), g), -inner_product(f, apply_frame_field(FrameField::Xi, g)));
  }
}

TEST(InnerProduct, NumericMatchesExact)
{
  Rng rng(8, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const Fn f = random_exact_function(rng, 5, 6), g = random_exact_function(rng, 5, 6);
    const Complex exact = inner_product(f, g).to_complex();
    const Complex num = inner_product(f.cast<Complex>(), g.cast<Complex>());
    EXPECT_NEAR(std::abs(exact - num), 0.0, 1e-12 * (1 + std::abs(exact)));
  }
}

TEST(InnerProduct, MixedWeightsAgainstQuadrature)
{
  // weight (2,2) against weight (1,1), so c = d = 3/2; t-integral by trapezoid rule
  const Fn g0 = Fn::ground();
  const Fn f = (var(Var::T) * var(Var::T) + Fn::constant(1)) * (g0 * g0);
  const Fn g = var(Var::T) * var(Var::T) * g0;
  const Complex val = inner_product(f.cast<Complex>(), g.cast<Complex>());
  // z-part: ((1/pi) \int e^{-3|z|^2/2})^2 = (2/3)^2; t-part by trapezoid
  double tsum = 0;
  const double h = 1e-3;
  for (double t = -12; t <= 12; t += h) tsum += (t * t + 1) * t * t * std::exp(-1.5 * t * t) * h;
  const double expected = (4.0 / 9.0) * tsum / std::sqrt(M_PI);
  EXPECT_NEAR(val.real(), expected, 1e-9);
  EXPECT_NEAR(val.imag(), 0.0, 1e-14);
}

TEST(SmoothFunction, Dilation)
{
  const Fn f = var(Var::Z1) * var(Var::T) * Fn::ground();
  const Fn d = f.dilate(mpq_class(2));
  // z1 t -> 2 z1 * 4 t, weight (4, 16)
  EXPECT_EQ(d.coefficient(Monomial(1, 0, 0, 0, 1)), Q(8));
  EXPECT_EQ(d.weight().a, mpq_class(4));
  EXPECT_EQ(d.weight().b, mpq_class(16));
  EXPECT_EQ(f.dilate(mpq_class(1)), f);
}

TEST(SmoothFunction, MixedWeightsKeepSeparateBlocks)
{
  const Fn g0 = Fn::ground();
  const Fn f = g0 + g0 * g0;
  EXPECT_EQ(f.blocks().size(), 2u);
  EXPECT_THROW(f.weight(), std::logic_error);
  EXPECT_TRUE((f - g0 * g0 - g0).is_zero());
  // (g0 + g0^2, g0) = 1 + (1/pi)^2 (2/3)^2... exact only with rational sqrt(d); d = 3/2 is not
  EXPECT_THROW(inner_product(f, g0), std::invalid_argument);
  EXPECT_NEAR(inner_product(f.cast<Complex>(), g0.cast<Complex>()).real(), 1.0 + std::pow(2.0 / 3.0, 2.5), 1e-14);
  EXPECT_THROW(inner_product(g0 + var(Var::Z1), g0), std::invalid_argument);
}
