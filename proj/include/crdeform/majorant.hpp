#pragma once

// Majorant series A(s) = (b/16c) sum_{|a|>=1} c^{|a|} s^a / |a|^2 in exact
// rational arithmetic, truncated at a fixed order.

#include "crdeform/kuranishi.hpp"

#include <gmpxx.h>

#include <map>

namespace crdeform {

class MajorantSeries
{
 public:
  MajorantSeries(int r, int M) : r_(r), M_(M)
  {
    if (r < 1 || M < 0) throw std::invalid_argument("MajorantSeries: need r >= 1 and M >= 0");
  }

  int params() const { return r_; }
  int order() const { return M_; }

  mpq_class coefficient(const MultiIndex& a) const
  {
    auto it = c_.find(a);
    return it == c_.end() ? mpq_class(0) : it->second;
  }
  void set(const MultiIndex& a, const mpq_class& v)
  {
    if (static_cast<int>(a.size()) != r_) throw std::invalid_argument("MajorantSeries: wrong number of parameters");
    if (sgn(v) < 0) throw std::invalid_argument("MajorantSeries: coefficients must be nonnegative");
    if (order_of(a) > M_) return;
    if (sgn(v) == 0) c_.erase(a);
    else c_[a] = v;
  }
  const std::map<MultiIndex, mpq_class, MultiIndexLess>& coefficients() const { return c_; }

  friend MajorantSeries operator*(const mpq_class& s, MajorantSeries A)
  {
    if (sgn(s) < 0) throw std::invalid_argument("MajorantSeries: negative scale");
    for (auto& [a, v] : A.c_) v *= s;
    if (sgn(s) == 0) A.c_.clear();
    return A;
  }

 private:
  int r_, M_;
  std::map<MultiIndex, mpq_class, MultiIndexLess> c_;
};

inline MajorantSeries build_A(const mpq_class& b, const mpq_class& c, int r, int M)
{
  if (sgn(b) <= 0 || sgn(c) <= 0) throw std::invalid_argument("build_A: b and c must be positive");
  MajorantSeries A(r, M);
  const mpq_class lead = b / (16 * c);
  mpq_class cp = 1;
  for (int m = 1; m <= M; ++m) {
    cp *= c;
    const mpq_class v = lead * cp / (m * m);
    for (const auto& a : multi_indices(r, m)) A.set(a, v);
  }
  return A;
}

/// Cauchy product truncated at the common order.
inline MajorantSeries series_mult(const MajorantSeries& A, const MajorantSeries& B)
{
  if (A.params() != B.params() || A.order() != B.order()) throw std::invalid_argument("series_mult: incompatible series");
  MajorantSeries out(A.params(), A.order());
  std::map<MultiIndex, mpq_class, MultiIndexLess> acc;
  for (const auto& [a, x] : A.coefficients())
    for (const auto& [b, y] : B.coefficients()) {
      const MultiIndex ab = add(a, b);
      if (order_of(ab) <= A.order()) acc[ab] += x * y;
    }
  for (const auto& [a, v] : acc) out.set(a, v);
  return out;
}

inline MajorantSeries series_power(const MajorantSeries& A, int k)
{
  if (k < 1) throw std::invalid_argument("series_power: exponent must be positive");
  MajorantSeries P = A;
  for (int j = 1; j < k; ++j) P = series_mult(P, A);
  return P;
}

/// A << B: every coefficient of A is at most the corresponding one of B.
inline bool dominates(const MajorantSeries& A, const MajorantSeries& B)
{
  for (const auto& [a, v] : A.coefficients())
    if (v > B.coefficient(a)) return false;
  return true;
}

struct DominationReport
{
  bool holds = true;
  MultiIndex worst;           // multi-index with the largest lhs/rhs ratio
  mpq_class worst_ratio = 0;  // max lhs/rhs over nonzero rhs
};

/// Coefficientwise comparison with the tightest ratio reported.
inline DominationReport domination_report(const MajorantSeries& lhs, const MajorantSeries& rhs)
{
  DominationReport rep;
  for (const auto& [a, v] : lhs.coefficients()) {
    const mpq_class r = rhs.coefficient(a);
    if (sgn(r) == 0) {
      rep.holds = false;
      rep.worst = a;
      continue;
    }
    const mpq_class q = v / r;
    if (q > rep.worst_ratio) {
      rep.worst_ratio = q;
      rep.worst = a;
    }
    if (q > 1) rep.holds = false;
  }
  return rep;
}

}  // namespace crdeform
