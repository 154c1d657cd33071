#pragma once

// Deformation complex on the model: delbar_{T'}, delbar^(p), the algebraic
// E_p condition, rho, D = delbar_{T'} o rho, R2, R3 and P.
// Everything here goes through frame brackets; the constant-coefficient
// operator route in frame_operator.hpp is the independent cross-check.

#include "crdeform/vector_form.hpp"

#include <stdexcept>
#include <vector>

namespace crdeform {

template <class F>
FrameVector<F> eb_vector(int beta)
{
  return FrameVector<F>::basis(eb_field(beta));
}

/// delbar_{T'} Y (eb_b) = pi'[eb_b, Y] for Y in T'.
template <class F>
VectorValuedForm<F> delbar_T(const FrameVector<F>& Y)
{
  if (!Y.c[3].is_zero() || !Y.c[4].is_zero()) throw std::invalid_argument("delbar_T: argument must be T'-valued");
  VectorValuedForm<F> out(1);
  for (int b = 1; b <= 2; ++b) {
    const auto v = pi_prime(bracket(eb_vector<F>(b), Y));
    for (int s = 0; s < 3; ++s) out.at(s, b - 1) = v.c[static_cast<std::size_t>(s)];
  }
  return out;
}

/// Degree-0 forms are T'-vectors.
template <class F>
FrameVector<F> as_vector(const VectorValuedForm<F>& phi)
{
  if (phi.degree() != 0) throw std::invalid_argument("as_vector: needs a degree-0 form");
  FrameVector<F> v;
  for (int s = 0; s < 3; ++s) v.c[static_cast<std::size_t>(s)] = phi.at(s, 0);
  return v;
}

template <class F>
VectorValuedForm<F> as_form(const FrameVector<F>& v)
{
  if (!v.c[3].is_zero() || !v.c[4].is_zero()) throw std::invalid_argument("as_form: vector must be T'-valued");
  VectorValuedForm<F> phi(0);
  for (int s = 0; s < 3; ++s) phi.at(s, 0) = v.c[static_cast<std::size_t>(s)];
  return phi;
}

/// delbar^(p) by the alternating-sum formula evaluated on the eb-frame.
/// Degree 2 maps to the zero degree-3 form (no increasing triples in {1,2}).
template <class F>
VectorValuedForm<F> delbar_p(const VectorValuedForm<F>& phi)
{
  switch (phi.degree()) {
    case 0: return delbar_T(as_vector(phi));
    case 1: {
      // (X1, X2) = (eb1, eb2):
      //   pi'[X1, phi(X2)] - pi'[X2, phi(X1)] - phi([X1, X2])
      const auto X1 = eb_vector<F>(1), X2 = eb_vector<F>(2);
      auto v = pi_prime(bracket(X1, phi.apply(X2))) - pi_prime(bracket(X2, phi.apply(X1)));
      v -= phi.apply(bracket(X1, X2));
      VectorValuedForm<F> out(2);
      for (int s = 0; s < 3; ++s) out.at(s, 0) = v.c[static_cast<std::size_t>(s)];
      return out;
    }
    default: return VectorValuedForm<F>(phi.degree() + 1);
  }
}

/// The algebraic condition sum_j (-1)^{j+1} dtheta(X_j, u(..X_j-hat..)) = 0,
/// checked on all frame tuples. The alternating sign is the one that makes
/// the degree-1 condition agree with phi^1_2 = phi^2_1.
template <class F>
bool is_in_E(const VectorValuedForm<F>& u)
{
  if (!u.is_ot_prime_valued()) throw std::invalid_argument("is_in_E: form has a nonzero xi-component");
  const int p = u.degree();
  if (p > 2) return true;
  const int n = p + 1;
  std::vector<int> idx(static_cast<std::size_t>(n), 1);
  for (;;) {
    SmoothFunction<F> sum;
    for (int j = 0; j < n; ++j) {
      std::vector<int> rest;
      for (int k = 0; k < n; ++k)
        if (k != j) rest.push_back(idx[static_cast<std::size_t>(k)]);
      FrameVector<F> val;
      if (p == 0) val = u.value({});
      else if (p == 1) val = u.value({rest[0]});
      else val = u.value({rest[0], rest[1]});
      auto term = dtheta(eb_vector<F>(idx[static_cast<std::size_t>(j)]), val);
      if (j % 2 == 0) sum += term;
      else sum -= term;
    }
    if (!sum.is_zero()) return false;
    int k = n - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == 2) idx[static_cast<std::size_t>(k--)] = 1;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
  }
  return true;
}

/// rho(u xi) = u xi + i sum_a (eb_a u) e_a.
template <class F>
FrameVector<F> rho(const SmoothFunction<F>& u)
{
  FrameVector<F> v;
  v.c[0] = u;
  for (int a = 1; a <= 2; ++a) v[e_field(a)] = apply_frame_field(eb_field(a), u) * FieldTraits<F>::i();
  return v;
}

/// D(u xi) = delbar_{T'} rho(u xi); a degree-1 0T'-valued form.
template <class F>
VectorValuedForm<F> D_op(const SmoothFunction<F>& u)
{
  return delbar_T(rho(u));
}

namespace detail {

// T(phi, psi)(X, Y) = pi'[phi X, psi Y] - phi(0pi''[X, psi Y] + 0pi''[psi X, Y]);
// R2(phi) = T(phi, phi).
template <class F>
FrameVector<F> r2_part(const VectorValuedForm<F>& phi, const VectorValuedForm<F>& psi, const FrameVector<F>& X,
                       const FrameVector<F>& Y)
{
  auto v = pi_prime(bracket(phi.apply(X), psi.apply(Y)));
  const auto inner = opi_dblprime(bracket(X, psi.apply(Y))) + opi_dblprime(bracket(psi.apply(X), Y));
  v -= phi.apply(inner);
  return v;
}

template <class F>
VectorValuedForm<F> to_two_form(const FrameVector<F>& v)
{
  VectorValuedForm<F> out(2);
  for (int s = 0; s < 3; ++s) out.at(s, 0) = v.c[static_cast<std::size_t>(s)];
  return out;
}

}  // namespace detail

template <class F>
VectorValuedForm<F> R2(const VectorValuedForm<F>& phi)
{
  if (phi.degree() != 1) throw std::invalid_argument("R2: needs a degree-1 form");
  return detail::to_two_form(detail::r2_part(phi, phi, eb_vector<F>(1), eb_vector<F>(2)));
}

/// Symmetric bilinear form with R2_bilinear(phi, phi) = R2(phi).
template <class F>
VectorValuedForm<F> R2_bilinear(const VectorValuedForm<F>& phi, const VectorValuedForm<F>& psi)
{
  if (phi.degree() != 1 || psi.degree() != 1) throw std::invalid_argument("R2_bilinear: needs degree-1 forms");
  const auto X = eb_vector<F>(1), Y = eb_vector<F>(2);
  auto v = detail::r2_part(phi, psi, X, Y) + detail::r2_part(psi, phi, X, Y);
  return FieldTraits<F>::from_ratio(1, 2) * detail::to_two_form(v);
}

/// R3(phi)(X, Y) = -phi(0pi''[phi X, phi Y]).
template <class F>
VectorValuedForm<F> R3(const VectorValuedForm<F>& phi)
{
  if (phi.degree() != 1) throw std::invalid_argument("R3: needs a degree-1 form");
  const auto X = eb_vector<F>(1), Y = eb_vector<F>(2);
  auto v = phi.apply(opi_dblprime(bracket(phi.apply(X), phi.apply(Y))));
  return FieldTraits<F>::from_int(-1) * detail::to_two_form(v);
}

/// Integrability operator P(phi) = delbar^(1) phi + R2(phi) + R3(phi).
template <class F>
VectorValuedForm<F> P_full(const VectorValuedForm<F>& phi)
{
  return delbar_p(phi) + R2(phi) + R3(phi);
}

/// Pointwise local formula D* phi = -i sum e_a e_b phi^a_b (xi-coefficient).
template <class F>
SmoothFunction<F> D_star_formula(const VectorValuedForm<F>& phi)
{
  SmoothFunction<F> sum;
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      sum += apply_frame_field(e_field(a), apply_frame_field(e_field(b), phi.get(a, {b})));
  return sum * (-FieldTraits<F>::i());
}

/// Local formula (delbar_1 phi)^a ~ eb_1 phi^a_2 - eb_2 phi^a_1.
template <class F>
VectorValuedForm<F> delbar1_formula(const VectorValuedForm<F>& phi)
{
  VectorValuedForm<F> out(2);
  for (int a = 1; a <= 2; ++a)
    out.at(a, 0) = apply_frame_field(FrameField::EB1, phi.get(a, {2})) - apply_frame_field(FrameField::EB2, phi.get(a, {1}));
  return out;
}

/// Builds the degree-1 form with components phi^a_b from a 2x2 table.
template <class F>
VectorValuedForm<F> make_one_form(const SmoothFunction<F>& p11, const SmoothFunction<F>& p12, const SmoothFunction<F>& p21,
                                  const SmoothFunction<F>& p22)
{
  VectorValuedForm<F> phi(1);
  phi.at(1, 0) = p11;
  phi.at(1, 1) = p12;
  phi.at(2, 0) = p21;
  phi.at(2, 1) = p22;
  return phi;
}

}  // namespace crdeform
