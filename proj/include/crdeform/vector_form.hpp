#pragma once

// T'-valued (0,q)-forms on the model. Vector slot s = 0 is the xi (F) part,
// s = 1, 2 are the e_1, e_2 (0T') parts. Lower indices are stored for
// increasing multi-indices only:
//   q = 0: {()}, q = 1: {(1), (2)}, q = 2: {(1,2)}, q >= 3: none (rank-2 0T'').

#include "crdeform/frame.hpp"

#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace crdeform {

template <class F>
class VectorValuedForm
{
 public:
  using Fn = SmoothFunction<F>;

  explicit VectorValuedForm(int degree = 1) : degree_(degree)
  {
    if (degree < 0) throw std::invalid_argument("VectorValuedForm: negative degree");
    comps_.resize(static_cast<std::size_t>(3 * index_count(degree)));
  }

  static int index_count(int q) { return q == 0 ? 1 : q == 1 ? 2 : q == 2 ? 1 : 0; }

  int degree() const { return degree_; }

  /// Stored component for vector slot s and increasing-index position I.
  Fn& at(int s, int I) { return comps_.at(static_cast<std::size_t>(s * index_count(degree_) + I)); }
  const Fn& at(int s, int I) const { return comps_.at(static_cast<std::size_t>(s * index_count(degree_) + I)); }

  /// phi^s_{b1...bq} with antisymmetry applied; indices are 1-based.
  Fn get(int s, std::initializer_list<int> lower) const
  {
    if (static_cast<int>(lower.size()) != degree_) throw std::invalid_argument("VectorValuedForm::get: wrong index count");
    std::vector<int> b(lower);
    switch (degree_) {
      case 0: return at(s, 0);
      case 1: return at(s, b[0] - 1);
      case 2:
        if (b[0] == b[1]) return {};
        return b[0] < b[1] ? at(s, 0) : -at(s, 0);
      default: return {};
    }
  }

  /// Value on frame vectors (eb_{b1}, ..., eb_{bq}) as a T'-vector.
  FrameVector<F> value(std::initializer_list<int> lower) const
  {
    FrameVector<F> v;
    v.c[0] = get(0, lower);
    v.c[1] = get(1, lower);
    v.c[2] = get(2, lower);
    return v;
  }

  /// phi(X) for a degree-1 form and a 0T''-vector X = sum_b x^b eb_b.
  FrameVector<F> apply(const FrameVector<F>& X) const
  {
    if (degree_ != 1) throw std::logic_error("VectorValuedForm::apply: needs a degree-1 form");
    FrameVector<F> out;
    for (int b = 1; b <= 2; ++b) {
      const auto& xb = X[eb_field(b)];
      if (xb.is_zero()) continue;
      out += xb * value({b});
    }
    return out;
  }

  /// phi(X, Y) for a degree-2 form.
  FrameVector<F> apply(const FrameVector<F>& X, const FrameVector<F>& Y) const
  {
    if (degree_ != 2) throw std::logic_error("VectorValuedForm::apply: needs a degree-2 form");
    // phi(X, Y) = (x^1 y^2 - x^2 y^1) phi(eb1, eb2)
    const Fn w = X[FrameField::EB1] * Y[FrameField::EB2] - X[FrameField::EB2] * Y[FrameField::EB1];
    if (w.is_zero()) return {};
    return w * value({1, 2});
  }

  bool is_zero() const
  {
    for (const auto& f : comps_)
      if (!f.is_zero()) return false;
    return true;
  }

  /// True iff every xi-component vanishes.
  bool is_ot_prime_valued() const
  {
    for (int I = 0; I < index_count(degree_); ++I)
      if (!at(0, I).is_zero()) return false;
    return true;
  }

  const std::vector<Fn>& components() const { return comps_; }
  std::vector<Fn>& components() { return comps_; }

  VectorValuedForm& operator+=(const VectorValuedForm& o)
  {
    check_same(o);
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] += o.comps_[k];
    return *this;
  }
  VectorValuedForm& operator-=(const VectorValuedForm& o)
  {
    check_same(o);
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] -= o.comps_[k];
    return *this;
  }
  friend VectorValuedForm operator+(VectorValuedForm a, const VectorValuedForm& b) { return a += b; }
  friend VectorValuedForm operator-(VectorValuedForm a, const VectorValuedForm& b) { return a -= b; }
  friend VectorValuedForm operator*(const F& s, VectorValuedForm a)
  {
    for (auto& f : a.comps_) f *= s;
    return a;
  }
  friend VectorValuedForm operator*(const Fn& g, VectorValuedForm a)
  {
    for (auto& f : a.comps_) f = g * f;
    return a;
  }
  friend bool operator==(const VectorValuedForm& a, const VectorValuedForm& b)
  {
    return a.degree_ == b.degree_ && a.comps_ == b.comps_;
  }
  friend bool operator!=(const VectorValuedForm& a, const VectorValuedForm& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const VectorValuedForm& phi)
  {
    static const char* lower[3][2] = {{"", ""}, {"1", "2"}, {"12", ""}};
    os << "{";
    bool first = true;
    for (int s = 0; s < 3; ++s)
      for (int I = 0; I < index_count(phi.degree_); ++I) {
        if (phi.at(s, I).is_zero()) continue;
        os << (first ? "" : ", ") << "phi^" << s << "_" << (phi.degree_ <= 2 ? lower[phi.degree_][I] : "") << " = "
           << phi.at(s, I);
        first = false;
      }
    return os << "}";
  }

  /// Componentwise map, e.g. a frame derivative or a dilation.
  template <class Op>
  VectorValuedForm map(Op&& op) const
  {
    VectorValuedForm out(degree_);
    for (std::size_t k = 0; k < comps_.size(); ++k) out.comps_[k] = op(comps_[k]);
    return out;
  }

 private:
  void check_same(const VectorValuedForm& o) const
  {
    if (degree_ != o.degree_) throw std::invalid_argument("VectorValuedForm: degree mismatch");
  }

  int degree_;
  std::vector<Fn> comps_;
};

/// Sum over all stored slots of pairings; for degree 1 the four 0T' slots and
/// two xi slots, for degree 2 the increasing pair (1,2) only.
template <class F>
F form_inner_product(const VectorValuedForm<F>& a, const VectorValuedForm<F>& b)
{
  if (a.degree() != b.degree()) throw std::invalid_argument("form_inner_product: degree mismatch");
  F sum = FieldTraits<F>::zero();
  for (std::size_t k = 0; k < a.components().size(); ++k) {
    const auto& x = a.components()[k];
    const auto& y = b.components()[k];
    if (x.is_zero() || y.is_zero()) continue;
    sum += inner_product(x, y);
  }
  return sum;
}

}  // namespace crdeform
