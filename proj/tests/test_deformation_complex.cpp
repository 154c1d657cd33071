#include "crdeform/deformation_complex.hpp"
#include "crdeform/sampling.hpp"

#include <gtest/gtest.h>

using namespace crdeform;

namespace {

using Q = ComplexRational;
using Fn = ExactFunction;
using Form = VectorValuedForm<Q>;

Fn var(Var v) { return Fn::variable(v); }
Fn one() { return Fn::constant(1); }
Q I() { return Q::i(); }

Form e_theta(int a, int b, const Fn& f = Fn::constant(1))
{
  Form phi(1);
  phi.at(a, b - 1) = f;
  return phi;
}

Form sample_phi() { return e_theta(1, 1, var(Var::Z2)) + e_theta(2, 2, var(Var::Z1)); }

}  // namespace

TEST(DelbarP, KnownValues)
{
  EXPECT_TRUE(delbar_T(FrameVector<Q>::basis(FrameField::Xi)).is_zero());
  // [eb1, zb1 e1] = e1 + i zb1 xi: the 0T' part is e1 (x) thetab^1, pi' also keeps the xi part
  const Form d = delbar_T(FrameVector<Q>::basis(FrameField::E1, var(Var::ZB1)));
  EXPECT_EQ(d, e_theta(1, 1) + e_theta(0, 1, var(Var::ZB1) * I()));
  EXPECT_TRUE(delbar_p(e_theta(1, 1)).is_zero());
  // degree-2 input maps to the (empty) degree-3 space
  Form psi(2);
  psi.at(1, 0) = var(Var::ZB1);
  EXPECT_TRUE(delbar_p(psi).is_zero());
  EXPECT_EQ(delbar_p(psi).degree(), 3);
}

TEST(DelbarP, LocalComponentFormula)
{
  // (delbar phi)^a_12 = eb1 phi^a_2 - eb2 phi^a_1 and
  // (delbar phi)^0_12 = eb1 phi^0_2 - eb2 phi^0_1 + i(phi^1_2 - phi^2_1)
  Rng rng(11, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Form phi = random_exact_form(rng, 1, 4, 3, false);
    const Form d = delbar_p(phi);
    for (int a = 1; a <= 2; ++a)
      EXPECT_EQ(d.at(a, 0), apply_frame_field(FrameField::EB1, phi.get(a, {2})) - apply_frame_field(FrameField::EB2, phi.get(a, {1})));
    EXPECT_EQ(d.at(0, 0), apply_frame_field(FrameField::EB1, phi.get(0, {2})) - apply_frame_field(FrameField::EB2, phi.get(0, {1})) +
                              (phi.get(1, {2}) - phi.get(2, {1})) * I());
  }
}

TEST(DelbarP, SquareZero)
{
  Rng rng(12, 1);
  for (int trial = 0; trial < 50; ++trial) {
    FrameVector<Q> Y;
    for (int s = 0; s < 3; ++s) Y.c[static_cast<std::size_t>(s)] = random_exact_function(rng, 6, 3);
    EXPECT_TRUE(delbar_p(delbar_T(Y)).is_zero());
    EXPECT_TRUE(delbar_p(delbar_p(random_exact_form(rng, 1, 6, 3, false))).is_zero());
  }
}

TEST(IsInE, KnownValues)
{
  EXPECT_TRUE(is_in_E(e_theta(1, 2) + e_theta(2, 1)));
  EXPECT_FALSE(is_in_E(e_theta(1, 2)));
  Form psi(2);
  psi.at(1, 0) = var(Var::Z1);
  psi.at(2, 0) = var(Var::T);
  EXPECT_TRUE(is_in_E(psi));
  EXPECT_THROW(is_in_E(e_theta(0, 1)), std::invalid_argument);
}

TEST(IsInE, AgreesWithSymmetryCondition)
{
  Rng rng(13, 1);
  int in = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Form phi = random_exact_form(rng, 1, 4, 2, true);
    if (trial % 2 == 0) phi.at(2, 0) = phi.at(1, 1);
    const bool sym = phi.get(1, {2}) == phi.get(2, {1});
    EXPECT_EQ(is_in_E(phi), sym);
    in += sym ? 1 : 0;
  }
  EXPECT_GE(in, 50);
}

TEST(IsInE, AgreesWithVanishingFPart)
{
  // E_1 is also {u : pi_F delbar u = 0}
  Rng rng(14, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Form phi = random_exact_form(rng, 1, 3, 2, true);
    if (trial % 2 == 0) phi.at(2, 0) = phi.at(1, 1);
    EXPECT_EQ(is_in_E(phi), delbar_p(phi).at(0, 0).is_zero());
  }
}

TEST(Rho, KnownValues)
{
  EXPECT_EQ(rho(one()), FrameVector<Q>::basis(FrameField::Xi));
  const auto r = rho(var(Var::ZB1));
  EXPECT_EQ(r, FrameVector<Q>::basis(FrameField::Xi, var(Var::ZB1)) + I() * FrameVector<Q>::basis(FrameField::E1));
  EXPECT_TRUE(delbar_T(rho(var(Var::ZB1) * var(Var::ZB2))).at(0, 0).is_zero());
  EXPECT_TRUE(delbar_T(rho(var(Var::ZB1) * var(Var::ZB2))).at(0, 1).is_zero());
}

TEST(Rho, DefiningPropertyOnRandomSections)
{
  Rng rng(15, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const Fn u = random_exact_function(rng, 6, 4);
    const Form d = delbar_T(rho(u));
    EXPECT_TRUE(d.at(0, 0).is_zero());
    EXPECT_TRUE(d.at(0, 1).is_zero());
  }
}

TEST(DOp, KnownValues)
{
  EXPECT_TRUE(D_op(one()).is_zero());
  EXPECT_TRUE(D_op(var(Var::ZB1)).is_zero());
  EXPECT_EQ(D_op(var(Var::ZB1) * var(Var::ZB1)), (Q(2) * I()) * e_theta(1, 1));
}

TEST(DOp, ComplexAndEMembership)
{
  Rng rng(16, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const Fn u = random_exact_function(rng, 6, 4);
    const Form d = D_op(u);
    EXPECT_TRUE(is_in_E(d));
    EXPECT_TRUE(delbar_p(d).is_zero());
    // (D u)^a_b = i eb_b eb_a u
    for (int a = 1; a <= 2; ++a)
      for (int b = 1; b <= 2; ++b)
        EXPECT_EQ(d.get(a, {b}), apply_frame_field(eb_field(b), apply_frame_field(eb_field(a), u)) * I());
  }
}

TEST(DOp, Linear)
{
  Rng rng(17, 1);
  const Fn u = random_exact_function(rng, 4, 3), v = random_exact_function(rng, 4, 3);
  const Q c = rng.small_rational();
  EXPECT_EQ(D_op(u * c + v), c * D_op(u) + D_op(v));
  EXPECT_EQ(rho(u * c + v), c * rho(u) + rho(v));
}

TEST(R2, KnownValues)
{
  EXPECT_TRUE(R2(Form(1)).is_zero());
  const Form phi = sample_phi();
  EXPECT_EQ(R2(Q(2) * phi), Q(4) * R2(phi));
  const Form r = R2(phi);
  EXPECT_EQ(r.at(1, 0), -var(Var::Z1));
  EXPECT_EQ(r.at(2, 0), var(Var::Z2));
  EXPECT_TRUE(r.at(0, 0).is_zero());
}

TEST(R2, BilinearPolarization)
{
  Rng rng(18, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Form phi = random_exact_form(rng, 1, 3, 2, trial % 2 == 0, Weight<mpq_class>::polynomial());
    const Form psi = random_exact_form(rng, 1, 3, 2, trial % 2 == 0, Weight<mpq_class>::polynomial());
    EXPECT_EQ(R2_bilinear(phi, phi), R2(phi));
    EXPECT_EQ(R2_bilinear(phi, psi), R2_bilinear(psi, phi));
    EXPECT_EQ(R2(phi + psi), R2(phi) + R2(psi) + Q(2) * R2_bilinear(phi, psi));
  }
}

TEST(R2, NoFPartForContactDeformations)
{
  Rng rng(19, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Form phi = random_exact_form(rng, 1, 4, 3, true);
    EXPECT_TRUE(R2(phi).at(0, 0).is_zero());
  }
}

TEST(R3, VanishesOnContactDeformationsAndIsCubic)
{
  Rng rng(20, 1);
  for (int trial = 0; trial < 10; ++trial) EXPECT_TRUE(R3(random_exact_form(rng, 1, 4, 3, true)).is_zero());
  EXPECT_TRUE(R3(Form(1)).is_zero());
  Form phi = sample_phi();
  phi.at(0, 0) = var(Var::ZB1);
  phi.at(0, 1) = var(Var::T);
  EXPECT_EQ(R3(Q(3) * phi), Q(27) * R3(phi));
}

TEST(R3, VanishesForXiValuedForms)
{
  // T' is closed under brackets in the model frame, so 0pi''[phi X, phi Y] = 0
  Rng rng(21, 1);
  for (int trial = 0; trial < 10; ++trial) EXPECT_TRUE(R3(random_exact_form(rng, 1, 3, 2, false)).is_zero());
}

TEST(PFull, KnownValues)
{
  EXPECT_TRUE(P_full(Form(1)).is_zero());
  Rng rng(22, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Form phi = random_exact_form(rng, 1, 4, 3, true);
    EXPECT_EQ(P_full(phi) - delbar_p(phi) - R2(phi), Form(2));
  }
  const Form d = D_op(var(Var::ZB1) * var(Var::ZB1));
  EXPECT_EQ(P_full(d), R2((Q(2) * I()) * e_theta(1, 1)));
}

TEST(LocalFormulas, DStarFormulaIsAdjointOfD)
{
  Rng rng(23, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Fn u = random_exact_function(rng, 4, 3);
    const Form phi = random_exact_E1(rng, 4, 3);
    EXPECT_EQ(form_inner_product(D_op(u), phi), inner_product(u, D_star_formula(phi)));
  }
}

TEST(LocalFormulas, Delbar1FormulaOnE1)
{
  Rng rng(24, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Form phi = random_exact_E1(rng, 4, 3);
    EXPECT_EQ(delbar_p(phi), delbar1_formula(phi));
  }
}
