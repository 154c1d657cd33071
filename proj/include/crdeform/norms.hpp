#pragma once

// Folland-Stein and mixed Sobolev norms of vector-valued forms, the second
// order operator L, and parabolic dilations. The connection of the model is
// flat, so covariant derivatives are frame derivatives applied componentwise.
// These are the symbolic versions; galerkin.hpp has the matrix counterparts.

#include "crdeform/vector_form.hpp"

#include <cmath>
#include <initializer_list>
#include <vector>

namespace crdeform {

inline constexpr FrameField kHorizontalFields[4] = {FrameField::E1, FrameField::E2, FrameField::EB1, FrameField::EB2};
inline constexpr FrameField kAllFields[5] = {FrameField::Xi, FrameField::E1, FrameField::E2, FrameField::EB1,
                                             FrameField::EB2};

inline bool is_horizontal(FrameField X) { return X != FrameField::Xi; }

/// Word in the frame letters; H-letters weigh 1 and xi weighs 2.
struct WeightedOpWord
{
  std::vector<FrameField> letters;

  WeightedOpWord() = default;
  WeightedOpWord(std::initializer_list<FrameField> l) : letters(l) {}
  explicit WeightedOpWord(std::vector<FrameField> l) : letters(std::move(l)) {}

  friend WeightedOpWord operator*(const WeightedOpWord& a, const WeightedOpWord& b)
  {
    WeightedOpWord w = a;
    w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
    return w;
  }

  /// Rightmost letter acts first.
  template <class F>
  SmoothFunction<F> apply(const SmoothFunction<F>& f) const
  {
    SmoothFunction<F> g = f;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) g = apply_frame_field(*it, g);
    return g;
  }
};

inline int weight(const WeightedOpWord& w)
{
  int s = 0;
  for (FrameField X : w.letters) s += is_horizontal(X) ? 1 : 2;
  return s;
}

struct NormSpec
{
  int k = 0;  // horizontal derivatives
  int m = 0;  // unconstrained derivatives
};

namespace detail {

template <class F>
void check_integrable(const VectorValuedForm<F>& phi, const char* who)
{
  for (const auto& f : phi.components())
    if (f.has_polynomial_part()) throw std::invalid_argument(std::string(who) + ": components must be Gaussian-class");
}

template <class F>
typename FieldTraits<F>::Real squared_l2(const VectorValuedForm<F>& phi)
{
  typename FieldTraits<F>::Real s(0);
  for (const auto& f : phi.components())
    if (!f.is_zero()) s += norm_squared(f);
  return s;
}

// All derivatives by words of length exactly `len` over the given letters.
template <class F, std::size_t K>
std::vector<VectorValuedForm<F>> next_level(const std::vector<VectorValuedForm<F>>& level, const FrameField (&letters)[K])
{
  std::vector<VectorValuedForm<F>> out;
  out.reserve(level.size() * K);
  for (const auto& phi : level)
    for (FrameField X : letters) {
      auto d = phi.map([X](const SmoothFunction<F>& f) { return apply_frame_field(X, f); });
      if (!d.is_zero()) out.push_back(std::move(d));
    }
  return out;
}

}  // namespace detail

/// ||phi||_{k,m}^2 = sum_{l<=m} sum_{j<=k} ||nabla^l nabla_H^j phi||^2.
template <class F>
typename FieldTraits<F>::Real mixed_norm_squared(const VectorValuedForm<F>& phi, int k, int m)
{
  if (k < 0 || m < 0) throw std::invalid_argument("mixed_norm: derivative counts must be nonnegative");
  detail::check_integrable(phi, "mixed_norm");
  typename FieldTraits<F>::Real total(0);
  std::vector<VectorValuedForm<F>> h_level{phi};
  for (int j = 0; j <= k; ++j) {
    if (j > 0) h_level = detail::next_level(h_level, kHorizontalFields);
    std::vector<VectorValuedForm<F>> level = h_level;
    for (int l = 0; l <= m; ++l) {
      if (l > 0) level = detail::next_level(level, kAllFields);
      for (const auto& v : level) total += detail::squared_l2(v);
    }
  }
  return total;
}

template <class F>
typename FieldTraits<F>::Real fs_norm_squared(const VectorValuedForm<F>& phi, int k)
{
  return mixed_norm_squared(phi, k, 0);
}

template <class F>
double fs_norm(const VectorValuedForm<F>& phi, int k)
{
  return std::sqrt(FieldTraits<F>::to_double(fs_norm_squared(phi, k)));
}

template <class F>
double mixed_norm(const VectorValuedForm<F>& phi, int k, int m)
{
  return std::sqrt(FieldTraits<F>::to_double(mixed_norm_squared(phi, k, m)));
}

/// L = 1 + sum_a (e_a^* e_a + eb_a^* eb_a) = 1 - sum_a (eb_a e_a + e_a eb_a).
template <class F>
SmoothFunction<F> L_scalar(const SmoothFunction<F>& f)
{
  SmoothFunction<F> out = f;
  for (int a = 1; a <= 2; ++a) {
    const FrameField e = e_field(a), eb = eb_field(a);
    out -= apply_frame_field(eb, apply_frame_field(e, f));
    out -= apply_frame_field(e, apply_frame_field(eb, f));
  }
  return out;
}

template <class F>
VectorValuedForm<F> L_op(const VectorValuedForm<F>& phi)
{
  return phi.map([](const SmoothFunction<F>& f) { return L_scalar(f); });
}

/// Components precomposed with (z, t) -> (lambda z, lambda^2 t).
template <class F>
VectorValuedForm<F> parabolic_dilation(const VectorValuedForm<F>& phi, const typename FieldTraits<F>::Real& lambda)
{
  if (!(lambda > 0)) throw std::invalid_argument("parabolic_dilation: lambda must be positive");
  return phi.map([&](const SmoothFunction<F>& f) { return f.dilate(lambda); });
}

/// L2-normalized dilation lambda^3 phi_lambda (homogeneous dimension 6).
template <class F>
VectorValuedForm<F> normalized_dilation(const VectorValuedForm<F>& phi, const typename FieldTraits<F>::Real& lambda)
{
  typename FieldTraits<F>::Real l3 = lambda * lambda * lambda;
  return FieldTraits<F>::from_real(l3) * parabolic_dilation(phi, lambda);
}

}  // namespace crdeform
