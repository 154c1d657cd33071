#pragma once

// Constant-coefficient differential operators in the model frame. The frame
// generates a Heisenberg-type algebra: xi is central, e1, e2 commute, eb1, eb2
// commute, and eb_a e_b = e_b eb_a + i delta_ab xi. Every element has a unique
// normal form  sum c * xi^a e1^b1 e2^b2 eb1^d1 eb2^d2  (rightmost letter acts first).
//
// Matrices of such polynomials describe all operators of the complex; this is
// the operator route used for adjoints and Galerkin assembly, independent of
// the bracket expansions in deformation_complex.hpp.

#include "crdeform/vector_form.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace crdeform {

/// Exponents (xi, e1, e2, eb1, eb2) of a normal-ordered frame word.
using FrameMonomial = std::array<std::uint8_t, kFrameSize>;

template <class F>
class FramePoly
{
 public:
  using Traits = FieldTraits<F>;
  using Map = std::map<FrameMonomial, F>;

  FramePoly() = default;

  static FramePoly scalar(const F& c)
  {
    FramePoly p;
    p.add(FrameMonomial{}, c);
    return p;
  }
  static FramePoly letter(FrameField X, const F& c = Traits::one())
  {
    FrameMonomial m{};
    m[static_cast<std::size_t>(X)] = 1;
    FramePoly p;
    p.add(m, c);
    return p;
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Highest word length (order of the operator); -1 for zero.
  int order() const
  {
    int o = -1;
    for (const auto& [m, c] : terms_) {
      int len = 0;
      for (auto e : m) len += e;
      o = std::max(o, len);
    }
    return o;
  }

  void add(const FrameMonomial& m, const F& c)
  {
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  FramePoly& operator+=(const FramePoly& o)
  {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  FramePoly& operator-=(const FramePoly& o)
  {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend FramePoly operator+(FramePoly a, const FramePoly& b) { return a += b; }
  friend FramePoly operator-(FramePoly a, const FramePoly& b) { return a -= b; }
  friend FramePoly operator*(const F& s, const FramePoly& a)
  {
    FramePoly out;
    for (const auto& [m, c] : a.terms_) out.add(m, s * c);
    return out;
  }

  /// Composition (a * b) u = a(b(u)), normal ordered.
  friend FramePoly operator*(const FramePoly& a, const FramePoly& b)
  {
    FramePoly out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out += multiply_monomials(ma, mb, ca * cb);
    return out;
  }

  friend bool operator==(const FramePoly& a, const FramePoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const FramePoly& a, const FramePoly& b) { return !(a == b); }

  /// Formal L2 adjoint: reverse words, X -> X* with e_a* = -eb_a,
  /// eb_a* = -e_a, xi* = -xi, conjugate coefficients.
  FramePoly adjoint() const
  {
    FramePoly out;
    for (const auto& [m, c] : terms_) {
      // (xi^a e1^b1 e2^b2 eb1^d1 eb2^d2)* = (eb2*)^d2 (eb1*)^d1 (e2*)^b2 (e1*)^b1 (xi*)^a
      FramePoly w = scalar(Traits::conj(c));
      const FrameField order[kFrameSize] = {FrameField::EB2, FrameField::EB1, FrameField::E2, FrameField::E1, FrameField::Xi};
      for (FrameField X : order) {
        const FramePoly star = letter(adjoint_letter(X), -Traits::one());
        for (int k = 0; k < m[static_cast<std::size_t>(X)]; ++k) w = w * star;
      }
      out += w;
    }
    return out;
  }

  /// Action on a function: rightmost letters first.
  SmoothFunction<F> apply(const SmoothFunction<F>& f) const
  {
    SmoothFunction<F> out;
    for (const auto& [m, c] : terms_) {
      SmoothFunction<F> g = f;
      const FrameField order[kFrameSize] = {FrameField::EB2, FrameField::EB1, FrameField::E2, FrameField::E1, FrameField::Xi};
      for (FrameField X : order)
        for (int k = 0; k < m[static_cast<std::size_t>(X)]; ++k) g = apply_frame_field(X, g);
      out += g * c;
    }
    return out;
  }

 private:
  static FrameField adjoint_letter(FrameField X)
  {
    switch (X) {
      case FrameField::E1: return FrameField::EB1;
      case FrameField::E2: return FrameField::EB2;
      case FrameField::EB1: return FrameField::E1;
      case FrameField::EB2: return FrameField::E2;
      default: return FrameField::Xi;
    }
  }

  static F binom(int n, int k)
  {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Traits::from_int(r.get_si());
  }

  // xi^a e^B eb^D * xi^a' e^B' eb^D': move eb_a^{d} past e_a^{b'} with
  //   eb^d e^b = sum_k k! C(d,k) C(b,k) (c xi)^k e^{b-k} eb^{d-k},  c = [eb_a, e_a] / xi.
  static FramePoly multiply_monomials(const FrameMonomial& x, const FrameMonomial& y, const F& coeff)
  {
    FramePoly out;
    const int d1 = x[3], d2 = x[4], b1 = y[1], b2 = y[2];
    const F c1 = frame_bracket_xi<F>(FrameField::EB1, FrameField::E1);
    const F c2 = frame_bracket_xi<F>(FrameField::EB2, FrameField::E2);
    for (int k1 = 0; k1 <= std::min(d1, b1); ++k1) {
      F w1 = binom(d1, k1) * binom(b1, k1);
      for (int j = 2; j <= k1; ++j) w1 *= Traits::from_int(j);
      for (int j = 0; j < k1; ++j) w1 *= c1;
      for (int k2 = 0; k2 <= std::min(d2, b2); ++k2) {
        F w2 = binom(d2, k2) * binom(b2, k2);
        for (int j = 2; j <= k2; ++j) w2 *= Traits::from_int(j);
        for (int j = 0; j < k2; ++j) w2 *= c2;
        FrameMonomial m;
        m[0] = static_cast<std::uint8_t>(x[0] + y[0] + k1 + k2);
        m[1] = static_cast<std::uint8_t>(x[1] + b1 - k1);
        m[2] = static_cast<std::uint8_t>(x[2] + b2 - k2);
        m[3] = static_cast<std::uint8_t>(d1 - k1 + y[3]);
        m[4] = static_cast<std::uint8_t>(d2 - k2 + y[4]);
        out.add(m, coeff * w1 * w2);
      }
    }
    return out;
  }

  Map terms_;
};

/// rows x cols matrix of frame polynomials: a linear operator between trivial
/// bundles with the given slot counts.
template <class F>
class FrameOperator
{
 public:
  using Poly = FramePoly<F>;

  FrameOperator(int rows, int cols) : rows_(rows), cols_(cols), entries_(static_cast<std::size_t>(rows * cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Poly& operator()(int r, int c) { return entries_.at(static_cast<std::size_t>(r * cols_ + c)); }
  const Poly& operator()(int r, int c) const { return entries_.at(static_cast<std::size_t>(r * cols_ + c)); }

  bool is_zero() const
  {
    for (const auto& p : entries_)
      if (!p.is_zero()) return false;
    return true;
  }

  friend FrameOperator operator*(const FrameOperator& a, const FrameOperator& b)
  {
    if (a.cols_ != b.rows_) throw std::invalid_argument("FrameOperator: incompatible composition");
    FrameOperator out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j)
        for (int k = 0; k < a.cols_; ++k) out(i, j) += a(i, k) * b(k, j);
    return out;
  }
  friend FrameOperator operator+(const FrameOperator& a, const FrameOperator& b)
  {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("FrameOperator: shape mismatch");
    FrameOperator out = a;
    for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] += b.entries_[k];
    return out;
  }
  friend bool operator==(const FrameOperator& a, const FrameOperator& b)
  {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  /// Conjugate transpose with entrywise formal adjoints (slot norms are plain sums).
  FrameOperator adjoint() const
  {
    FrameOperator out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).adjoint();
    return out;
  }

  /// Restriction to a subset of input slots / output slots.
  FrameOperator select(const std::vector<int>& row_slots, const std::vector<int>& col_slots) const
  {
    FrameOperator out(static_cast<int>(row_slots.size()), static_cast<int>(col_slots.size()));
    for (std::size_t i = 0; i < row_slots.size(); ++i)
      for (std::size_t j = 0; j < col_slots.size(); ++j)
        out(static_cast<int>(i), static_cast<int>(j)) = (*this)(row_slots[i], col_slots[j]);
    return out;
  }

  std::vector<SmoothFunction<F>> apply(const std::vector<SmoothFunction<F>>& u) const
  {
    if (static_cast<int>(u.size()) != cols_) throw std::invalid_argument("FrameOperator::apply: wrong slot count");
    std::vector<SmoothFunction<F>> out(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero()) out[static_cast<std::size_t>(i)] += (*this)(i, j).apply(u[static_cast<std::size_t>(j)]);
    return out;
  }

 private:
  int rows_, cols_;
  std::vector<Poly> entries_;
};

// Slot layouts of the operator route.
//   F:            [u]
//   T':           [y^0 (xi), y^1 (e1), y^2 (e2)]
//   T' (x) 0T''*: [phi^0_1, phi^0_2, phi^1_1, phi^1_2, phi^2_1, phi^2_2]  (slot = 2 s + b - 1)
//   T' (x) L^2:   [psi^0_12, psi^1_12, psi^2_12]
namespace ops {

inline int one_form_slot(int s, int b) { return 2 * s + b - 1; }

template <class F>
FramePoly<F> L(FrameField X)
{
  return FramePoly<F>::letter(X);
}

/// rho: F -> T', u -> u xi + i (eb_a u) e_a.
template <class F>
FrameOperator<F> rho()
{
  FrameOperator<F> op(3, 1);
  op(0, 0) = FramePoly<F>::scalar(FieldTraits<F>::one());
  for (int a = 1; a <= 2; ++a) op(a, 0) = FieldTraits<F>::i() * L<F>(eb_field(a));
  return op;
}

/// delbar_{T'}: T' -> T' (x) 0T''*, from pi'[eb_b, Y] and the frame structure constants.
template <class F>
FrameOperator<F> delbar_T()
{
  FrameOperator<F> op(6, 3);
  for (int b = 1; b <= 2; ++b) {
    for (int s = 0; s < 3; ++s) op(one_form_slot(s, b), s) += L<F>(eb_field(b));
    for (int a = 1; a <= 2; ++a)
      op(one_form_slot(0, b), a) += FramePoly<F>::scalar(frame_bracket_xi<F>(eb_field(b), e_field(a)));
  }
  return op;
}

/// delbar^(1): T' (x) 0T''* -> T' (x) L^2, psi_12 = pi'[eb1, phi(eb2)] - pi'[eb2, phi(eb1)].
template <class F>
FrameOperator<F> delbar_1()
{
  FrameOperator<F> op(3, 6);
  const int sign[3] = {0, 1, -1};
  for (int X = 1; X <= 2; ++X) {
    const int Y = 3 - X;  // argument of phi
    const F sg = FieldTraits<F>::from_int(sign[X]);
    for (int s = 0; s < 3; ++s) op(s, one_form_slot(s, Y)) += sg * L<F>(eb_field(X));
    for (int a = 1; a <= 2; ++a)
      op(0, one_form_slot(a, Y)) += FramePoly<F>::scalar(sg * frame_bracket_xi<F>(eb_field(X), e_field(a)));
  }
  return op;
}

template <class F>
FrameOperator<F> D()
{
  return delbar_T<F>() * rho<F>();
}

/// L = 1 + sum (e_a* e_a + eb_a* eb_a) = 1 - sum (eb_a e_a + e_a eb_a).
template <class F>
FramePoly<F> L_scalar()
{
  FramePoly<F> p = FramePoly<F>::scalar(FieldTraits<F>::one());
  for (int a = 1; a <= 2; ++a) {
    const auto e = L<F>(e_field(a)), eb = L<F>(eb_field(a));
    p += e.adjoint() * e;
    p += eb.adjoint() * eb;
  }
  return p;
}

}  // namespace ops

/// Slot vector of a degree-1 form in the operator layout.
template <class F>
std::vector<SmoothFunction<F>> one_form_slots(const VectorValuedForm<F>& phi)
{
  std::vector<SmoothFunction<F>> v(6);
  for (int s = 0; s < 3; ++s)
    for (int b = 1; b <= 2; ++b) v[static_cast<std::size_t>(ops::one_form_slot(s, b))] = phi.get(s, {b});
  return v;
}

template <class F>
VectorValuedForm<F> one_form_from_slots(const std::vector<SmoothFunction<F>>& v)
{
  VectorValuedForm<F> phi(1);
  for (int s = 0; s < 3; ++s)
    for (int b = 1; b <= 2; ++b) phi.at(s, b - 1) = v.at(static_cast<std::size_t>(ops::one_form_slot(s, b)));
  return phi;
}

/// D* phi by the adjoint of the assembled operator D.
template <class F>
SmoothFunction<F> D_star_engine(const VectorValuedForm<F>& phi)
{
  static const FrameOperator<F> Dstar = ops::D<F>().adjoint();
  return Dstar.apply(one_form_slots(phi)).at(0);
}

}  // namespace crdeform
