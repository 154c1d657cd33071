#pragma once

// Functions on the model chart R^5 = C^2 x R with coordinates (z1, z2, t):
// a polynomial in (z1, zb1, z2, zb2, t) times a Gaussian weight
//   W(z, t) = exp(-a |z|^2 / 2 - b t^2 / 2).
// a = b = 0 is the pure-polynomial class (symbolic identities only);
// a = b = 1 is the standard class exp(-|.|^2 / 2). Other weights arise from
// products (R2 doubles the weight) and parabolic dilations, so a function is
// stored as a short list of blocks, one polynomial per distinct weight.

#include "crdeform/field.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace crdeform {

/// Coordinate variables of the polynomial part.
enum class Var : int { Z1 = 0, ZB1 = 1, Z2 = 2, ZB2 = 3, T = 4 };

inline constexpr int kVarCount = 5;

/// Exponent vector (z1, zb1, z2, zb2, t), packed 8 bits per slot.
class Monomial
{
 public:
  constexpr Monomial() = default;
  constexpr Monomial(int z1, int zb1, int z2, int zb2, int t)
      : key_(pack(z1) << 32 | pack(zb1) << 24 | pack(z2) << 16 | pack(zb2) << 8 | pack(t))
  {
  }
  static constexpr Monomial from_key(std::uint64_t key)
  {
    Monomial m;
    m.key_ = key;
    return m;
  }

  constexpr int exponent(Var v) const
  {
    return static_cast<int>((key_ >> (8 * (4 - static_cast<int>(v)))) & 0xFFu);
  }
  constexpr int operator[](int v) const { return exponent(static_cast<Var>(v)); }
  constexpr std::uint64_t key() const { return key_; }

  constexpr int degree() const
  {
    int d = 0;
    for (int v = 0; v < kVarCount; ++v) d += (*this)[v];
    return d;
  }
  /// Parabolic degree: z-variables weigh 1, t weighs 2.
  constexpr int parabolic_degree() const { return degree() + (*this)[4]; }

  constexpr Monomial times(const Monomial& o) const
  {
    return {(*this)[0] + o[0], (*this)[1] + o[1], (*this)[2] + o[2], (*this)[3] + o[3], (*this)[4] + o[4]};
  }
  constexpr Monomial with(Var v, int e) const
  {
    std::array<int, kVarCount> x{(*this)[0], (*this)[1], (*this)[2], (*this)[3], (*this)[4]};
    x[static_cast<int>(v)] = e;
    return {x[0], x[1], x[2], x[3], x[4]};
  }
  /// Exponents of the complex conjugate monomial (z and zb swap).
  constexpr Monomial conjugate() const { return {(*this)[1], (*this)[0], (*this)[3], (*this)[2], (*this)[4]}; }

  friend constexpr bool operator==(const Monomial& a, const Monomial& b) { return a.key_ == b.key_; }
  friend constexpr bool operator<(const Monomial& a, const Monomial& b) { return a.key_ < b.key_; }

 private:
  static constexpr std::uint64_t pack(int e)
  {
    if (e < 0 || e > 255) throw std::overflow_error("Monomial: exponent out of range");
    return static_cast<std::uint64_t>(e);
  }
  std::uint64_t key_ = 0;
};

/// Gaussian weight exp(-a|z|^2/2 - b t^2/2).
template <class Real>
struct Weight
{
  Real a{0};
  Real b{0};

  static Weight polynomial() { return {Real(0), Real(0)}; }
  static Weight standard() { return {Real(1), Real(1)}; }

  bool is_polynomial() const { return a == Real(0) && b == Real(0); }
  friend bool operator==(const Weight& x, const Weight& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const Weight& x, const Weight& y) { return !(x == y); }
  friend Weight operator+(const Weight& x, const Weight& y) { return {x.a + y.a, x.b + y.b}; }
  friend bool operator<(const Weight& x, const Weight& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); }
};

namespace detail {

inline long double factorial_ld(int n)
{
  long double r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline long double double_factorial_ld(int n)
{
  long double r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

inline mpz_class factorial_z(int n)
{
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline mpz_class double_factorial_z(int n)
{
  mpz_class r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

inline bool rational_sqrt(const mpq_class& q, mpq_class& out)
{
  if (sgn(q) < 0) return false;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  out = mpq_class(rn, rd);
  out.canonicalize();
  return true;
}

}  // namespace detail

/// Polynomial times Gaussian weight, with coefficients in F; a finite sum of
/// such blocks with distinct weights.
template <class F>
class SmoothFunction
{
 public:
  using Traits = FieldTraits<F>;
  using Real = typename Traits::Real;
  using Term = std::pair<Monomial, F>;
  struct Block
  {
    Weight<Real> weight;
    std::vector<Term> terms;  // sorted by monomial, no zero coefficients
    friend bool operator==(const Block& x, const Block& y) { return x.weight == y.weight && x.terms == y.terms; }
  };

  SmoothFunction() = default;

  static SmoothFunction constant(const F& c, Weight<Real> w = Weight<Real>::polynomial())
  {
    return monomial(Monomial{}, c, std::move(w));
  }
  static SmoothFunction monomial(const Monomial& m, const F& c, Weight<Real> w = Weight<Real>::polynomial())
  {
    SmoothFunction f;
    if (!Traits::is_zero(c)) f.blocks_.push_back({std::move(w), {{m, c}}});
    return f;
  }
  static SmoothFunction variable(Var v, Weight<Real> w = Weight<Real>::polynomial())
  {
    return monomial(Monomial{}.with(v, 1), Traits::one(), std::move(w));
  }
  /// The normalized ground state g0 = exp(-|.|^2/2); <g0, g0> = 1.
  static SmoothFunction ground() { return constant(Traits::one(), Weight<Real>::standard()); }

  static SmoothFunction from_terms(std::vector<Term> terms, Weight<Real> w)
  {
    SmoothFunction f;
    normalize(terms);
    if (!terms.empty()) f.blocks_.push_back({std::move(w), std::move(terms)});
    return f;
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  bool is_zero() const { return blocks_.empty(); }

  /// Weight of a single-weight function (polynomial class for zero).
  Weight<Real> weight() const
  {
    if (blocks_.empty()) return Weight<Real>::polynomial();
    if (blocks_.size() > 1) throw std::logic_error("SmoothFunction::weight: function mixes several weights");
    return blocks_.front().weight;
  }
  /// Terms of a single-weight function.
  const std::vector<Term>& terms() const
  {
    static const std::vector<Term> empty;
    if (blocks_.empty()) return empty;
    if (blocks_.size() > 1) throw std::logic_error("SmoothFunction::terms: function mixes several weights");
    return blocks_.front().terms;
  }
  bool is_polynomial_class() const
  {
    for (const auto& b : blocks_)
      if (!b.weight.is_polynomial()) return false;
    return true;
  }
  bool has_polynomial_part() const
  {
    for (const auto& b : blocks_)
      if (b.weight.is_polynomial()) return true;
    return false;
  }
  std::size_t size() const
  {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.terms.size();
    return n;
  }

  int degree() const
  {
    int d = -1;
    for (const auto& b : blocks_)
      for (const auto& [m, c] : b.terms) d = std::max(d, m.degree());
    return d;
  }

  /// Coefficient of m in the block of weight w.
  F coefficient(const Monomial& m, const Weight<Real>& w) const
  {
    for (const auto& b : blocks_) {
      if (b.weight != w) continue;
      auto it = std::lower_bound(b.terms.begin(), b.terms.end(), m,
                                 [](const Term& t, const Monomial& k) { return t.first < k; });
      if (it != b.terms.end() && it->first == m) return it->second;
    }
    return Traits::zero();
  }
  F coefficient(const Monomial& m) const { return coefficient(m, weight()); }

  /// Same polynomial parts, every block moved to weight w.
  SmoothFunction with_weight(const Weight<Real>& w) const
  {
    SmoothFunction f;
    for (const auto& b : blocks_) f += from_terms(b.terms, w);
    return f;
  }

  SmoothFunction& operator+=(const SmoothFunction& o)
  {
    for (const auto& ob : o.blocks_) add_block(ob);
    return *this;
  }
  SmoothFunction& operator-=(const SmoothFunction& o) { return *this += -o; }

  SmoothFunction& operator*=(const F& c)
  {
    if (Traits::is_zero(c)) {
      blocks_.clear();
      return *this;
    }
    for (auto& b : blocks_)
      for (auto& t : b.terms) t.second *= c;
    return *this;
  }

  friend SmoothFunction operator+(SmoothFunction a, const SmoothFunction& b) { return a += b; }
  friend SmoothFunction operator-(SmoothFunction a, const SmoothFunction& b) { return a -= b; }
  friend SmoothFunction operator-(SmoothFunction a)
  {
    for (auto& b : a.blocks_)
      for (auto& t : b.terms) t.second = -t.second;
    return a;
  }
  friend SmoothFunction operator*(SmoothFunction a, const F& c) { return a *= c; }
  friend SmoothFunction operator*(const F& c, SmoothFunction a) { return a *= c; }

  /// Pointwise product; weights add.
  friend SmoothFunction operator*(const SmoothFunction& f, const SmoothFunction& g)
  {
    SmoothFunction out;
    for (const auto& bf : f.blocks_)
      for (const auto& bg : g.blocks_) out.add_block({bf.weight + bg.weight, multiply_terms(bf.terms, bg.terms)});
    return out;
  }

  friend bool operator==(const SmoothFunction& f, const SmoothFunction& g) { return f.blocks_ == g.blocks_; }
  friend bool operator!=(const SmoothFunction& f, const SmoothFunction& g) { return !(f == g); }

  /// Multiplies by a coordinate variable.
  SmoothFunction times_variable(Var v) const
  {
    SmoothFunction out = *this;
    const int idx = static_cast<int>(v);
    for (auto& b : out.blocks_) {
      for (auto& t : b.terms) t.first = t.first.with(v, t.first[idx] + 1);
      normalize(b.terms);
    }
    return out;
  }

  /// Partial derivative in a coordinate (z and zb are Wirtinger derivatives),
  /// including the derivative of the Gaussian weight.
  SmoothFunction partial(Var v) const
  {
    SmoothFunction result;
    const int idx = static_cast<int>(v);
    for (const auto& b : blocks_) {
      std::vector<Term> out;
      out.reserve(b.terms.size() * 2);
      for (const auto& [m, c] : b.terms) {
        const int e = m[idx];
        if (e > 0) out.emplace_back(m.with(v, e - 1), c * Traits::from_int(e));
      }
      // d/dz W = -(a/2) zb W,  d/dzb W = -(a/2) z W,  d/dt W = -b t W
      if (v == Var::T) {
        if (!Traits::is_zero(b.weight.b)) {
          const F k = -Traits::from_real(b.weight.b);
          for (const auto& [m, c] : b.terms) out.emplace_back(m.with(Var::T, m[4] + 1), c * k);
        }
      } else if (!Traits::is_zero(b.weight.a)) {
        const F k = -Traits::from_real(b.weight.a) * Traits::from_ratio(1, 2);
        const Var partner = partner_of(v);
        const int pidx = static_cast<int>(partner);
        for (const auto& [m, c] : b.terms) out.emplace_back(m.with(partner, m[pidx] + 1), c * k);
      }
      result += from_terms(std::move(out), b.weight);
    }
    return result;
  }

  /// Complex conjugate function.
  SmoothFunction conj() const
  {
    SmoothFunction result;
    for (const auto& b : blocks_) {
      std::vector<Term> out;
      out.reserve(b.terms.size());
      for (const auto& [m, c] : b.terms) out.emplace_back(m.conjugate(), Traits::conj(c));
      result += from_terms(std::move(out), b.weight);
    }
    return result;
  }

  /// Precomposition with the parabolic dilation (z, t) -> (lambda z, lambda^2 t).
  SmoothFunction dilate(const Real& lambda) const
  {
    SmoothFunction result;
    const Real l2 = lambda * lambda;
    for (const auto& b : blocks_) {
      std::vector<Term> out;
      out.reserve(b.terms.size());
      for (const auto& [m, c] : b.terms) {
        Real scale(1);
        for (int k = 0; k < m.parabolic_degree(); ++k) scale *= lambda;
        out.emplace_back(m, c * Traits::from_real(scale));
      }
      result += from_terms(std::move(out), Weight<Real>{b.weight.a * l2, b.weight.b * l2 * l2});
    }
    return result;
  }

  /// Value at a real point (x1, y1, x2, y2, t).
  Complex evaluate(double x1, double y1, double x2, double y2, double t) const
  {
    const Complex z1(x1, y1), z2(x2, y2);
    const std::array<Complex, kVarCount> base{z1, std::conj(z1), z2, std::conj(z2), Complex(t, 0)};
    Complex total = 0;
    for (const auto& b : blocks_) {
      Complex sum = 0;
      for (const auto& [m, c] : b.terms) {
        Complex v = Traits::to_complex(c);
        for (int k = 0; k < kVarCount; ++k)
          for (int e = 0; e < m[k]; ++e) v *= base[static_cast<std::size_t>(k)];
        sum += v;
      }
      const double a = Traits::to_double(b.weight.a);
      const double bb = Traits::to_double(b.weight.b);
      total += sum * std::exp(-0.5 * a * (x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2) - 0.5 * bb * t * t);
    }
    return total;
  }

  template <class G>
  SmoothFunction<G> cast() const
  {
    static_assert(std::is_same_v<F, ComplexRational>, "cast is defined from exact coefficients");
    using RealG = typename FieldTraits<G>::Real;
    SmoothFunction<G> result;
    for (const auto& b : blocks_) {
      std::vector<typename SmoothFunction<G>::Term> out;
      out.reserve(b.terms.size());
      for (const auto& [m, c] : b.terms) out.emplace_back(m, convert_coefficient<G>(c));
      Weight<RealG> w;
      if constexpr (std::is_same_v<RealG, double>) {
        w = {b.weight.a.get_d(), b.weight.b.get_d()};
      } else {
        w = {b.weight.a, b.weight.b};
      }
      result += SmoothFunction<G>::from_terms(std::move(out), w);
    }
    return result;
  }

  friend std::ostream& operator<<(std::ostream& os, const SmoothFunction& f)
  {
    if (f.is_zero()) return os << "0";
    static const char* names[kVarCount] = {"z1", "zb1", "z2", "zb2", "t"};
    bool first_block = true;
    for (const auto& b : f.blocks_) {
      if (!first_block) os << " + ";
      first_block = false;
      os << "[";
      bool first = true;
      for (const auto& [m, c] : b.terms) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (int k = 0; k < kVarCount; ++k)
          if (m[k] > 0) os << "*" << names[k] << (m[k] > 1 ? "^" + std::to_string(m[k]) : "");
      }
      os << "]";
      if (!b.weight.is_polynomial()) os << "*W(" << b.weight.a << "," << b.weight.b << ")";
    }
    return os;
  }

 private:
  static Var partner_of(Var v)
  {
    switch (v) {
      case Var::Z1: return Var::ZB1;
      case Var::ZB1: return Var::Z1;
      case Var::Z2: return Var::ZB2;
      case Var::ZB2: return Var::Z2;
      default: return Var::T;
    }
  }

  static std::vector<Term> multiply_terms(const std::vector<Term>& f, const std::vector<Term>& g)
  {
    const std::size_t work = f.size() * g.size();
    std::vector<Term> terms;
    if (work <= 4096) {
      terms.reserve(work);
      for (const auto& [mf, cf] : f)
        for (const auto& [mg, cg] : g) terms.emplace_back(mf.times(mg), cf * cg);
    } else {
      std::unordered_map<std::uint64_t, F> acc;
      acc.reserve(std::min<std::size_t>(work, 1u << 20));
      for (const auto& [mf, cf] : f)
        for (const auto& [mg, cg] : g) {
          auto [it, inserted] = acc.try_emplace(mf.times(mg).key(), cf * cg);
          if (!inserted) it->second += cf * cg;
        }
      terms.reserve(acc.size());
      for (auto& [k, c] : acc) terms.emplace_back(Monomial::from_key(k), std::move(c));
    }
    normalize(terms);
    return terms;
  }

  static std::vector<Term> merge_terms(const std::vector<Term>& x, const std::vector<Term>& y)
  {
    std::vector<Term> merged;
    merged.reserve(x.size() + y.size());
    auto a = x.begin();
    auto b = y.begin();
    while (a != x.end() || b != y.end()) {
      if (b == y.end() || (a != x.end() && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == x.end() || b->first < a->first) {
        merged.push_back(*b++);
      } else {
        F c = a->second + b->second;
        if (!Traits::is_zero(c)) merged.emplace_back(a->first, std::move(c));
        ++a;
        ++b;
      }
    }
    return merged;
  }

  void add_block(const Block& ob)
  {
    if (ob.terms.empty()) return;
    auto it = std::lower_bound(blocks_.begin(), blocks_.end(), ob.weight,
                               [](const Block& b, const Weight<Real>& w) { return b.weight < w; });
    if (it != blocks_.end() && it->weight == ob.weight) {
      it->terms = merge_terms(it->terms, ob.terms);
      if (it->terms.empty()) blocks_.erase(it);
    } else {
      blocks_.insert(it, ob);
    }
  }

  static void normalize(std::vector<Term>& terms)
  {
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
      if (!out.empty() && out.back().first == t.first) {
        out.back().second += t.second;
      } else {
        if (!out.empty() && Traits::is_zero(out.back().second)) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && Traits::is_zero(out.back().second)) out.pop_back();
    terms = std::move(out);
  }

  std::vector<Block> blocks_;
};

using ExactFunction = SmoothFunction<ComplexRational>;
using NumericFunction = SmoothFunction<Complex>;

namespace detail {

// Pairing of two single-weight blocks; see inner_product.
template <class F>
F block_inner_product(const typename SmoothFunction<F>::Block& f, const typename SmoothFunction<F>::Block& g)
{
  using Traits = FieldTraits<F>;
  using Real = typename Traits::Real;
  const Real c = (f.weight.a + g.weight.a) / Real(2);
  const Real d = (f.weight.b + g.weight.b) / Real(2);
  if (!(c > Real(0)) || !(d > Real(0)))
    throw std::invalid_argument("inner_product: both arguments must be Gaussian-class (pure polynomials are not integrable)");

  // z-plane: (1/pi) \int z^p zb^q e^{-c|z|^2} = delta_pq p!/c^{p+1}.
  // t: pi^{-1/2} \int t^m e^{-d t^2} = (m-1)!!/((2d)^{m/2} sqrt(d)) for even m.
  if constexpr (Traits::exact) {
    mpq_class root_d;
    if (!rational_sqrt(d, root_d))
      throw std::invalid_argument("inner_product: exact pairing needs a rational square root of the t-weight");
    ComplexRational sum;
    for (const auto& [mf, cf] : f.terms) {
      for (const auto& [mg, cg] : g.terms) {
        const int p1 = mf[0] + mg[1], q1 = mf[1] + mg[0];
        const int p2 = mf[2] + mg[3], q2 = mf[3] + mg[2];
        const int m = mf[4] + mg[4];
        if (p1 != q1 || p2 != q2 || (m % 2) != 0) continue;
        mpq_class moment(factorial_z(p1) * factorial_z(p2) * double_factorial_z(m - 1));
        mpq_class denom = 1;
        for (int k = 0; k < p1 + 1; ++k) denom *= c;
        for (int k = 0; k < p2 + 1; ++k) denom *= c;
        for (int k = 0; k < m / 2; ++k) denom *= 2 * d;
        denom *= root_d;
        moment /= denom;
        sum += cf * cg.conj() * ComplexRational(moment);
      }
    }
    return sum;
  } else {
    const long double cl = c, dl = d;
    Complex sum = 0;
    for (const auto& [mf, cf] : f.terms) {
      for (const auto& [mg, cg] : g.terms) {
        const int p1 = mf[0] + mg[1], q1 = mf[1] + mg[0];
        const int p2 = mf[2] + mg[3], q2 = mf[3] + mg[2];
        const int m = mf[4] + mg[4];
        if (p1 != q1 || p2 != q2 || (m % 2) != 0) continue;
        const long double moment = factorial_ld(p1) / std::pow(cl, p1 + 1) * factorial_ld(p2) / std::pow(cl, p2 + 1) *
                                   double_factorial_ld(m - 1) / (std::pow(2 * dl, m / 2) * std::sqrt(dl));
        sum += cf * std::conj(cg) * static_cast<double>(moment);
      }
    }
    return sum;
  }
}

}  // namespace detail

/// L2 pairing (f, g) = pi^{-5/2} \int f conj(g) dV. The pi^{-5/2} normalization
/// makes (g0, g0) = 1 and keeps all pairings of the exact class rational.
/// Both factors must carry Gaussian weights; pure polynomials are rejected.
template <class F>
F inner_product(const SmoothFunction<F>& f, const SmoothFunction<F>& g)
{
  if (f.has_polynomial_part() || g.has_polynomial_part())
    throw std::invalid_argument("inner_product: both arguments must be Gaussian-class (pure polynomials are not integrable)");
  F sum = FieldTraits<F>::zero();
  for (const auto& bf : f.blocks())
    for (const auto& bg : g.blocks()) sum += detail::block_inner_product<F>(bf, bg);
  return sum;
}

template <class F>
typename FieldTraits<F>::Real norm_squared(const SmoothFunction<F>& f)
{
  if constexpr (FieldTraits<F>::exact) {
    return inner_product(f, f).re();
  } else {
    return inner_product(f, f).real();
  }
}

}  // namespace crdeform
