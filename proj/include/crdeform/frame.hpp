#pragma once

// Heisenberg model frame on C^2 x R:
//   e_a = d/dz_a + (i/2) zb_a d/dt,  eb_a = d/dzb_a - (i/2) z_a d/dt,  xi = d/dt.
// [e_a, eb_b] = -i delta_ab xi; every other frame bracket vanishes.
// Contact form theta = dt + (i/2) sum (z_a dzb_a - zb_a dz_a), so theta(xi) = 1
// and theta kills e_a, eb_a.

#include "crdeform/smooth_function.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace crdeform {

enum class FrameField : int { Xi = 0, E1 = 1, E2 = 2, EB1 = 3, EB2 = 4 };

inline constexpr int kFrameSize = 5;

inline const char* frame_field_name(FrameField X)
{
  switch (X) {
    case FrameField::Xi: return "xi";
    case FrameField::E1: return "e1";
    case FrameField::E2: return "e2";
    case FrameField::EB1: return "eb1";
    case FrameField::EB2: return "eb2";
  }
  return "?";
}

inline FrameField frame_field_from_name(const std::string& s)
{
  for (int k = 0; k < kFrameSize; ++k)
    if (s == frame_field_name(static_cast<FrameField>(k))) return static_cast<FrameField>(k);
  throw std::invalid_argument("unknown frame field '" + s + "'");
}

inline FrameField e_field(int alpha) { return alpha == 1 ? FrameField::E1 : FrameField::E2; }
inline FrameField eb_field(int alpha) { return alpha == 1 ? FrameField::EB1 : FrameField::EB2; }

/// Coefficient of xi in the constant bracket [X, Y]; the only nonzero frame
/// brackets are [e_a, eb_a] = -i xi and [eb_a, e_a] = +i xi.
template <class F>
F frame_bracket_xi(FrameField X, FrameField Y)
{
  using T = FieldTraits<F>;
  const int x = static_cast<int>(X), y = static_cast<int>(Y);
  if ((x == 1 && y == 3) || (x == 2 && y == 4)) return -T::i();
  if ((x == 3 && y == 1) || (x == 4 && y == 2)) return T::i();
  return T::zero();
}

template <class F>
SmoothFunction<F> apply_frame_field(FrameField X, const SmoothFunction<F>& f)
{
  using T = FieldTraits<F>;
  const F half_i = T::i() * T::from_ratio(1, 2);
  switch (X) {
    case FrameField::Xi: return f.partial(Var::T);
    case FrameField::E1: return f.partial(Var::Z1) + f.partial(Var::T).times_variable(Var::ZB1) * half_i;
    case FrameField::E2: return f.partial(Var::Z2) + f.partial(Var::T).times_variable(Var::ZB2) * half_i;
    case FrameField::EB1: return f.partial(Var::ZB1) - f.partial(Var::T).times_variable(Var::Z1) * half_i;
    case FrameField::EB2: return f.partial(Var::ZB2) - f.partial(Var::T).times_variable(Var::Z2) * half_i;
  }
  return f;
}

/// Vector field sum_k v^k X_k over the frame (xi, e1, e2, eb1, eb2).
template <class F>
struct FrameVector
{
  using Fn = SmoothFunction<F>;
  std::array<Fn, kFrameSize> c{};

  static FrameVector basis(FrameField X, Fn coeff = Fn::constant(FieldTraits<F>::one()))
  {
    FrameVector v;
    v.c[static_cast<std::size_t>(X)] = std::move(coeff);
    return v;
  }

  Fn& operator[](FrameField X) { return c[static_cast<std::size_t>(X)]; }
  const Fn& operator[](FrameField X) const { return c[static_cast<std::size_t>(X)]; }

  bool is_zero() const
  {
    for (const auto& f : c)
      if (!f.is_zero()) return false;
    return true;
  }

  /// Directional derivative V(f).
  Fn apply(const Fn& f) const
  {
    Fn out;
    for (int k = 0; k < kFrameSize; ++k)
      if (!c[static_cast<std::size_t>(k)].is_zero())
        out += c[static_cast<std::size_t>(k)] * apply_frame_field(static_cast<FrameField>(k), f);
    return out;
  }

  FrameVector& operator+=(const FrameVector& o)
  {
    for (int k = 0; k < kFrameSize; ++k) c[static_cast<std::size_t>(k)] += o.c[static_cast<std::size_t>(k)];
    return *this;
  }
  FrameVector& operator-=(const FrameVector& o)
  {
    for (int k = 0; k < kFrameSize; ++k) c[static_cast<std::size_t>(k)] -= o.c[static_cast<std::size_t>(k)];
    return *this;
  }
  friend FrameVector operator+(FrameVector a, const FrameVector& b) { return a += b; }
  friend FrameVector operator-(FrameVector a, const FrameVector& b) { return a -= b; }
  friend FrameVector operator*(const F& s, FrameVector v)
  {
    for (auto& f : v.c) f *= s;
    return v;
  }
  friend FrameVector operator*(const Fn& g, FrameVector v)
  {
    for (auto& f : v.c) f = g * f;
    return v;
  }
  friend bool operator==(const FrameVector& a, const FrameVector& b) { return a.c == b.c; }
  friend bool operator!=(const FrameVector& a, const FrameVector& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const FrameVector& v)
  {
    bool first = true;
    for (int k = 0; k < kFrameSize; ++k) {
      if (v.c[static_cast<std::size_t>(k)].is_zero()) continue;
      os << (first ? "" : " + ") << "(" << v.c[static_cast<std::size_t>(k)] << ")" << frame_field_name(static_cast<FrameField>(k));
      first = false;
    }
    return os << (first ? "0" : "");
  }
};

/// Lie bracket [V, W] = V(w^k) X_k - W(v^k) X_k + v^j w^k [X_j, X_k].
template <class F>
FrameVector<F> bracket(const FrameVector<F>& V, const FrameVector<F>& W)
{
  FrameVector<F> out;
  for (int k = 0; k < kFrameSize; ++k) {
    const auto K = static_cast<std::size_t>(k);
    out.c[K] += V.apply(W.c[K]);
    out.c[K] -= W.apply(V.c[K]);
  }
  for (int j = 0; j < kFrameSize; ++j) {
    if (V.c[static_cast<std::size_t>(j)].is_zero()) continue;
    for (int k = 0; k < kFrameSize; ++k) {
      const F b = frame_bracket_xi<F>(static_cast<FrameField>(j), static_cast<FrameField>(k));
      if (FieldTraits<F>::is_zero(b) || W.c[static_cast<std::size_t>(k)].is_zero()) continue;
      out.c[0] += V.c[static_cast<std::size_t>(j)] * W.c[static_cast<std::size_t>(k)] * b;
    }
  }
  return out;
}

template <class F>
SmoothFunction<F> theta(const FrameVector<F>& V)
{
  return V.c[0];
}

/// dtheta(X, Y) = X theta(Y) - Y theta(X) - theta([X, Y]), no 1/2 factor.
template <class F>
SmoothFunction<F> dtheta(const FrameVector<F>& X, const FrameVector<F>& Y)
{
  return X.apply(theta(Y)) - Y.apply(theta(X)) - theta(bracket(X, Y));
}

/// Levi form +i theta([V, W]) for V in 0T', W in 0T''; gives L(e_a, eb_b) = delta_ab.
template <class F>
SmoothFunction<F> levi_form(const FrameVector<F>& V, const FrameVector<F>& W)
{
  if (!V.c[0].is_zero() || !W.c[0].is_zero()) throw std::invalid_argument("levi_form: arguments must have no xi-component");
  if (!V.c[3].is_zero() || !V.c[4].is_zero()) throw std::invalid_argument("levi_form: first argument must lie in 0T'");
  if (!W.c[1].is_zero() || !W.c[2].is_zero()) throw std::invalid_argument("levi_form: second argument must lie in 0T''");
  return theta(bracket(V, W)) * FieldTraits<F>::i();
}

// Projections of C TM = F + 0T' + 0T''; T' = F + 0T'.
template <class F>
FrameVector<F> pi_F(FrameVector<F> v)
{
  for (int k = 1; k < kFrameSize; ++k) v.c[static_cast<std::size_t>(k)] = {};
  return v;
}
template <class F>
FrameVector<F> pi_prime(FrameVector<F> v)
{
  v.c[3] = {};
  v.c[4] = {};
  return v;
}
template <class F>
FrameVector<F> opi_prime(FrameVector<F> v)
{
  v.c[0] = {};
  v.c[3] = {};
  v.c[4] = {};
  return v;
}
template <class F>
FrameVector<F> opi_dblprime(FrameVector<F> v)
{
  v.c[0] = {};
  v.c[1] = {};
  v.c[2] = {};
  return v;
}

}  // namespace crdeform
