#pragma once

// Scalar fields used for section coefficients: exact complex rationals for the
// symbolic layer and std::complex<double> for Galerkin numerics.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crdeform {

/// Complex number with exact rational real and imaginary parts.
class ComplexRational
{
 public:
  ComplexRational() = default;
  ComplexRational(long v) : re_(v), im_(0) {}  // NOLINT: implicit from integers is intended
  ComplexRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im))
  {
    re_.canonicalize();
    im_.canonicalize();
  }

  static ComplexRational i() { return {mpq_class(0), mpq_class(1)}; }
  static ComplexRational ratio(long num, long den) { return {mpq_class(num, den)}; }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  ComplexRational conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  ComplexRational& operator+=(const ComplexRational& o)
  {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o)
  {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o)
  {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o)
  {
    mpq_class d = o.norm();
    if (sgn(d) == 0) throw std::domain_error("ComplexRational: division by zero");
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / d;
    mpq_class m = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b)
  {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  std::string str() const
  {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const ComplexRational& z)
  {
    if (sgn(z.im_) == 0) return os << z.re_;
    if (sgn(z.re_) == 0) return os << z.im_ << "i";
    return os << "(" << z.re_ << (sgn(z.im_) > 0 ? "+" : "") << z.im_ << "i)";
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

using Complex = std::complex<double>;

/// Uniform access to the two coefficient fields. `Real` is the matching
/// real type used for Gaussian weight parameters.
template <class F>
struct FieldTraits;

template <>
struct FieldTraits<ComplexRational>
{
  using Real = mpq_class;
  static constexpr bool exact = true;
  static ComplexRational zero() { return {}; }
  static ComplexRational one() { return {1}; }
  static ComplexRational i() { return ComplexRational::i(); }
  static ComplexRational from_real(const Real& r) { return {r}; }
  static ComplexRational from_int(long v) { return {v}; }
  static ComplexRational from_ratio(long n, long d) { return ComplexRational::ratio(n, d); }
  static ComplexRational conj(const ComplexRational& z) { return z.conj(); }
  static bool is_zero(const ComplexRational& z) { return z.is_zero(); }
  static bool is_zero(const Real& r) { return sgn(r) == 0; }
  static Complex to_complex(const ComplexRational& z) { return z.to_complex(); }
  static double to_double(const Real& r) { return r.get_d(); }
  static Real real_from_int(long v) { return Real(v); }
};

template <>
struct FieldTraits<Complex>
{
  using Real = double;
  static constexpr bool exact = false;
  static Complex zero() { return {}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex i() { return {0.0, 1.0}; }
  static Complex from_real(double r) { return {r, 0.0}; }
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static Complex from_ratio(long n, long d) { return {static_cast<double>(n) / static_cast<double>(d), 0.0}; }
  static Complex conj(const Complex& z) { return std::conj(z); }
  static bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }
  static bool is_zero(double r) { return r == 0.0; }
  static Complex to_complex(const Complex& z) { return z; }
  static double to_double(double r) { return r; }
  static double real_from_int(long v) { return static_cast<double>(v); }
};

/// Converts an exact coefficient into either field.
template <class F>
F convert_coefficient(const ComplexRational& z)
{
  if constexpr (std::is_same_v<F, ComplexRational>) {
    return z;
  } else {
    return z.to_complex();
  }
}

}  // namespace crdeform
