#pragma once

// Scalar forms on the model in the coframe (theta, theta^1, theta^2, thetabar^1, thetabar^2)
// dual to (xi, e1, e2, eb1, eb2). theta^a = dz_a and thetabar^a = dzb_a are closed and
// d theta = i sum_a theta^a ^ thetabar^a. A basis monomial is a 5-bit mask in that order.
// Bidegree (p, q): p counts theta, theta^1, theta^2; q counts thetabar^1, thetabar^2.
//
// The bridge to the deformation complex:
//   K_M = theta ^ theta^1 ^ theta^2,
//   P_k(phi) = sum_I (i_{phi_I} K_M) ^ thetabar^I,   P_0(u xi) = [u theta^1 ^ theta^2],
//   D''[u] = theta ^ Lambda^{1,1} part of d u~,  d'' = theta ^ Lambda^{1,q+1} part of d.
// Interior products act from the left as antiderivations.

#include "crdeform/deformation_complex.hpp"

#include <array>
#include <bit>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace crdeform {

namespace coframe {
inline constexpr unsigned kTheta = 1u << 0;
inline constexpr unsigned kTheta1 = 1u << 1;
inline constexpr unsigned kTheta2 = 1u << 2;
inline constexpr unsigned kThetaBar1 = 1u << 3;
inline constexpr unsigned kThetaBar2 = 1u << 4;
inline unsigned theta(int a) { return a == 1 ? kTheta1 : kTheta2; }
inline unsigned theta_bar(int a) { return a == 1 ? kThetaBar1 : kThetaBar2; }
inline int p_degree(unsigned mask) { return std::popcount(mask & 0b00111u); }
inline int q_degree(unsigned mask) { return std::popcount(mask & 0b11000u); }
inline const char* name(int bit)
{
  static const char* n[5] = {"th", "th1", "th2", "thb1", "thb2"};
  return n[bit];
}
}  // namespace coframe

template <class F>
class ScalarForm
{
 public:
  using Fn = SmoothFunction<F>;

  ScalarForm() = default;
  static ScalarForm basis(unsigned mask, Fn coeff = Fn::constant(FieldTraits<F>::one()))
  {
    ScalarForm w;
    w.add(mask, coeff);
    return w;
  }

  const std::map<unsigned, Fn>& terms() const { return terms_; }
  Fn coefficient(unsigned mask) const
  {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Fn{} : it->second;
  }

  void add(unsigned mask, const Fn& f)
  {
    if (f.is_zero()) return;
    auto& slot = terms_[mask];
    slot += f;
    if (slot.is_zero()) terms_.erase(mask);
  }

  bool is_zero() const { return terms_.empty(); }

  /// True iff every monomial has bidegree (p, q).
  bool has_bidegree(int p, int q) const
  {
    for (const auto& [m, f] : terms_)
      if (coframe::p_degree(m) != p || coframe::q_degree(m) != q) return false;
    return true;
  }

  /// Part spanned by monomials satisfying pred.
  template <class Pred>
  ScalarForm filter(Pred pred) const
  {
    ScalarForm out;
    for (const auto& [m, f] : terms_)
      if (pred(m)) out.terms_.emplace(m, f);
    return out;
  }

  ScalarForm& operator+=(const ScalarForm& o)
  {
    for (const auto& [m, f] : o.terms_) add(m, f);
    return *this;
  }
  ScalarForm& operator-=(const ScalarForm& o)
  {
    for (const auto& [m, f] : o.terms_) add(m, -f);
    return *this;
  }
  friend ScalarForm operator+(ScalarForm a, const ScalarForm& b) { return a += b; }
  friend ScalarForm operator-(ScalarForm a, const ScalarForm& b) { return a -= b; }
  friend ScalarForm operator*(const Fn& g, const ScalarForm& w)
  {
    ScalarForm out;
    for (const auto& [m, f] : w.terms_) out.add(m, g * f);
    return out;
  }
  friend ScalarForm operator*(const F& s, const ScalarForm& w)
  {
    ScalarForm out;
    for (const auto& [m, f] : w.terms_) out.add(m, f * s);
    return out;
  }
  friend bool operator==(const ScalarForm& a, const ScalarForm& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ScalarForm& a, const ScalarForm& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const ScalarForm& w)
  {
    if (w.terms_.empty()) return os << "0";
    bool first = true;
    for (const auto& [m, f] : w.terms_) {
      os << (first ? "" : " + ") << "(" << f << ")";
      for (int b = 0; b < 5; ++b)
        if (m & (1u << b)) os << " " << coframe::name(b);
      first = false;
    }
    return os;
  }

 private:
  std::map<unsigned, Fn> terms_;
};

/// Sign and mask of (basis a) ^ (basis b); sign 0 if they share a factor.
inline std::pair<int, unsigned> wedge_masks(unsigned a, unsigned b)
{
  if (a & b) return {0, 0};
  // each factor of b passes every factor of a with a higher index
  int swaps = 0;
  for (int k = 0; k < 5; ++k)
    if (b & (1u << k)) swaps += std::popcount(a >> (k + 1));
  return {swaps % 2 ? -1 : 1, a | b};
}

template <class F>
ScalarForm<F> wedge(const ScalarForm<F>& x, const ScalarForm<F>& y)
{
  ScalarForm<F> out;
  for (const auto& [a, f] : x.terms())
    for (const auto& [b, g] : y.terms()) {
      const auto [s, m] = wedge_masks(a, b);
      if (s == 0) continue;
      const auto fg = f * g;
      out.add(m, s > 0 ? fg : -fg);
    }
  return out;
}

/// d theta = i (theta^1 ^ thetabar^1 + theta^2 ^ thetabar^2).
template <class F>
ScalarForm<F> dtheta_form()
{
  using Fn = SmoothFunction<F>;
  ScalarForm<F> w;
  for (int a = 1; a <= 2; ++a) w.add(coframe::theta(a) | coframe::theta_bar(a), Fn::constant(FieldTraits<F>::i()));
  return w;
}

/// Exterior derivative d(f w_I) = df ^ w_I + f d(w_I), df = sum_k (X_k f) theta^k.
template <class F>
ScalarForm<F> exterior_d(const ScalarForm<F>& w)
{
  ScalarForm<F> out;
  const auto dth = dtheta_form<F>();
  for (const auto& [m, f] : w.terms()) {
    for (int k = 0; k < kFrameSize; ++k) {
      const auto df = apply_frame_field(static_cast<FrameField>(k), f);
      if (df.is_zero()) continue;
      const auto [s, mm] = wedge_masks(1u << k, m);
      if (s != 0) out.add(mm, s > 0 ? df : -df);
    }
    if (m & coframe::kTheta) {
      // d(theta ^ rest) = dtheta ^ rest, since the other coforms are closed
      out += wedge(f * dth, ScalarForm<F>::basis(m & ~coframe::kTheta));
    }
  }
  return out;
}

/// Interior product with a frame field, antiderivation acting from the left.
template <class F>
ScalarForm<F> interior(FrameField X, const ScalarForm<F>& w)
{
  const int k = static_cast<int>(X);
  ScalarForm<F> out;
  for (const auto& [m, f] : w.terms()) {
    if (!(m & (1u << k))) continue;
    const int before = std::popcount(m & ((1u << k) - 1));
    out.add(m & ~(1u << k), before % 2 ? -f : f);
  }
  return out;
}

template <class F>
ScalarForm<F> interior(const FrameVector<F>& V, const ScalarForm<F>& w)
{
  ScalarForm<F> out;
  for (int k = 0; k < kFrameSize; ++k) {
    const auto& c = V.c[static_cast<std::size_t>(k)];
    if (!c.is_zero()) out += c * interior(static_cast<FrameField>(k), w);
  }
  return out;
}

template <class F>
ScalarForm<F> canonical_KM()
{
  return ScalarForm<F>::basis(coframe::kTheta | coframe::kTheta1 | coframe::kTheta2);
}

/// u in F^{p,q}: u = theta ^ (something in Lambda^{p-1,q} H*) and dtheta ^ u = 0.
template <class F>
bool is_in_F(const ScalarForm<F>& u, int p, int q)
{
  if (p + q < 3) throw std::invalid_argument("is_in_F: needs p + q >= 3");
  for (const auto& [m, f] : u.terms())
    if (!(m & coframe::kTheta) || coframe::p_degree(m) != p || coframe::q_degree(m) != q) return false;
  return wedge(dtheta_form<F>(), u).is_zero();
}

namespace detail {

// Horizontal basis masks of bidegree (p, q), i.e. no theta.
inline std::vector<unsigned> horizontal_masks(int p, int q)
{
  std::vector<unsigned> out;
  for (unsigned m = 0; m < 32; m += 2)
    if (coframe::p_degree(m) == p && coframe::q_degree(m) == q) out.push_back(m);
  return out;
}

// Column-reduced image of dtheta ^ . : Lambda^{p-1,q-1} -> Lambda^{p,q} as
// (pivot mask, column) pairs; constant coefficients, exact.
inline std::vector<std::pair<unsigned, std::map<unsigned, ComplexRational>>> lefschetz_image(int p, int q)
{
  std::vector<std::map<unsigned, ComplexRational>> cols;
  if (p >= 1 && q >= 1)
    for (unsigned src : horizontal_masks(p - 1, q - 1)) {
      const auto img = wedge(dtheta_form<ComplexRational>(), ScalarForm<ComplexRational>::basis(src));
      std::map<unsigned, ComplexRational> col;
      for (const auto& [m, f] : img.terms()) col[m] = f.coefficient(Monomial{}, Weight<mpq_class>::polynomial());
      cols.push_back(col);
    }
  std::vector<std::pair<unsigned, std::map<unsigned, ComplexRational>>> reduced;
  for (auto col : cols) {
    for (const auto& [piv, r] : reduced) {
      auto it = col.find(piv);
      if (it == col.end()) continue;
      const ComplexRational f = it->second / r.at(piv);
      for (const auto& [m, c] : r) col[m] -= f * c;
      for (auto jt = col.begin(); jt != col.end();) jt = jt->second.is_zero() ? col.erase(jt) : std::next(jt);
    }
    if (!col.empty()) reduced.emplace_back(col.begin()->first, col);
  }
  return reduced;
}

}  // namespace detail

/// Element of E^{p,q} = Lambda^{p,q} H* / <dtheta>, stored by a canonical
/// representative with the pivot coefficients of dtheta ^ Lambda^{p-1,q-1} removed.
template <class F>
class RuminClass
{
 public:
  RuminClass(int p, int q, const ScalarForm<F>& rep) : p_(p), q_(q)
  {
    for (const auto& [m, f] : rep.terms())
      if ((m & coframe::kTheta) || coframe::p_degree(m) != p || coframe::q_degree(m) != q)
        throw std::invalid_argument("RuminClass: representative must lie in the horizontal forms of the given bidegree");
    rep_ = rep;
    for (const auto& [piv, col] : detail::lefschetz_image(p, q)) {
      const auto c = rep_.coefficient(piv);
      if (c.is_zero()) continue;
      const F inv = FieldTraits<F>::one() / convert_coefficient<F>(col.at(piv));
      for (const auto& [m, v] : col) rep_.add(m, -(c * (inv * convert_coefficient<F>(v))));
    }
  }

  int p() const { return p_; }
  int q() const { return q_; }
  const ScalarForm<F>& representative() const { return rep_; }
  bool is_zero() const { return rep_.is_zero(); }

  friend RuminClass operator+(const RuminClass& a, const RuminClass& b)
  {
    if (a.p_ != b.p_ || a.q_ != b.q_) throw std::invalid_argument("RuminClass: bidegree mismatch");
    return RuminClass(a.p_, a.q_, a.rep_ + b.rep_);
  }
  friend bool operator==(const RuminClass& a, const RuminClass& b)
  {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.rep_ == b.rep_;
  }
  friend bool operator!=(const RuminClass& a, const RuminClass& b) { return !(a == b); }

 private:
  int p_, q_;
  ScalarForm<F> rep_;
};

/// P_k for a T'-valued (0,k)-form, k = 1, 2.
template <class F>
ScalarForm<F> P_k(const VectorValuedForm<F>& phi)
{
  const auto K = canonical_KM<F>();
  ScalarForm<F> out;
  const int k = phi.degree();
  if (k < 1 || k > 2) throw std::invalid_argument("P_k: degree must be 1 or 2");
  const int n = VectorValuedForm<F>::index_count(k);
  for (int I = 0; I < n; ++I) {
    const unsigned bars = k == 1 ? coframe::theta_bar(I + 1) : (coframe::kThetaBar1 | coframe::kThetaBar2);
    FrameVector<F> v;
    for (int s = 0; s < 3; ++s) v.c[static_cast<std::size_t>(s)] = phi.at(s, I);
    out += wedge(interior(v, K), ScalarForm<F>::basis(bars));
  }
  return out;
}

/// P_0(u xi) = [u theta^1 ^ theta^2] in E^{2,0} (theta dropped from u K_M).
template <class F>
RuminClass<F> P_0(const SmoothFunction<F>& u)
{
  return RuminClass<F>(2, 0, ScalarForm<F>::basis(coframe::kTheta1 | coframe::kTheta2, u));
}

/// Representative u~ = u + theta ^ v of a class in E^{2,0} with the horizontal
/// part of d u~ equal to zero; v in Lambda^{1,0} from the pointwise Levi system.
template <class F>
ScalarForm<F> rumin_lift(const RuminClass<F>& cls)
{
  if (cls.p() != 2 || cls.q() != 0) throw std::invalid_argument("rumin_lift: needs a class in E^{2,0}");
  using Fn = SmoothFunction<F>;
  const auto& u = cls.representative();
  const auto du_h = exterior_d(u).filter([](unsigned m) { return !(m & coframe::kTheta); });
  // dtheta ^ v for v = v1 theta^1 + v2 theta^2 lands in Lambda^{2,1}: matrix A[row][col]
  const std::array<unsigned, 2> rows = {coframe::kTheta1 | coframe::kTheta2 | coframe::kThetaBar1,
                                        coframe::kTheta1 | coframe::kTheta2 | coframe::kThetaBar2};
  std::array<std::array<F, 2>, 2> A{};
  for (int c = 0; c < 2; ++c) {
    const auto img = wedge(dtheta_form<F>(), ScalarForm<F>::basis(coframe::theta(c + 1)));
    for (int r = 0; r < 2; ++r) {
      const auto f = img.coefficient(rows[static_cast<std::size_t>(r)]);
      A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          f.is_zero() ? FieldTraits<F>::zero() : f.coefficient(Monomial{}, Weight<typename FieldTraits<F>::Real>::polynomial());
    }
  }
  const F det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  if (FieldTraits<F>::is_zero(det)) throw std::logic_error("rumin_lift: degenerate Levi system");
  // solve A v = -du_h (rows), v = A^{-1} (-h)
  const Fn h0 = -du_h.coefficient(rows[0]), h1 = -du_h.coefficient(rows[1]);
  const F inv = FieldTraits<F>::one() / det;
  const Fn v1 = (h0 * A[1][1] - h1 * A[0][1]) * inv;
  const Fn v2 = (h1 * A[0][0] - h0 * A[1][0]) * inv;
  ScalarForm<F> v;
  v.add(coframe::kTheta1, v1);
  v.add(coframe::kTheta2, v2);
  return u + wedge(ScalarForm<F>::basis(coframe::kTheta), v);
}

/// D''[u]: the theta ^ Lambda^{1,1} part of d u~.
template <class F>
ScalarForm<F> rumin_Dpp(const RuminClass<F>& cls)
{
  return exterior_d(rumin_lift(cls)).filter([](unsigned m) {
    return (m & coframe::kTheta) && coframe::p_degree(m) == 2 && coframe::q_degree(m) == 1;
  });
}

/// d'' on F^{2,q}: the theta ^ Lambda^{1,q+1} part of d.
template <class F>
ScalarForm<F> d_second(const ScalarForm<F>& u)
{
  int q = -1;
  for (const auto& [m, f] : u.terms()) {
    if (!(m & coframe::kTheta) || coframe::p_degree(m) != 2) throw std::invalid_argument("d_second: input must lie in theta ^ Lambda^{1,q}");
    if (q >= 0 && coframe::q_degree(m) != q) throw std::invalid_argument("d_second: mixed bidegrees");
    q = coframe::q_degree(m);
  }
  if (q < 0) return {};
  return exterior_d(u).filter([q](unsigned m) {
    return (m & coframe::kTheta) && coframe::p_degree(m) == 2 && coframe::q_degree(m) == q + 1;
  });
}

/// Exact rank of a list of vectors with sparse keyed entries.
template <class Key>
int exact_rank(std::vector<std::map<Key, ComplexRational>> vecs)
{
  std::vector<std::pair<Key, std::map<Key, ComplexRational>>> basis;
  for (auto& v : vecs) {
    for (const auto& [piv, b] : basis) {
      auto it = v.find(piv);
      if (it == v.end()) continue;
      const ComplexRational f = it->second / b.at(piv);
      for (const auto& [k, c] : b) v[k] -= f * c;
      for (auto jt = v.begin(); jt != v.end();) jt = jt->second.is_zero() ? v.erase(jt) : std::next(jt);
    }
    if (!v.empty()) basis.emplace_back(v.begin()->first, std::move(v));
  }
  return static_cast<int>(basis.size());
}

/// Coefficient vector of a scalar form keyed by (mask, weight, monomial).
inline std::map<std::tuple<unsigned, mpq_class, mpq_class, std::uint64_t>, ComplexRational> flatten(
    const ScalarForm<ComplexRational>& w)
{
  std::map<std::tuple<unsigned, mpq_class, mpq_class, std::uint64_t>, ComplexRational> out;
  for (const auto& [m, f] : w.terms())
    for (const auto& b : f.blocks())
      for (const auto& [mono, c] : b.terms) out[{m, b.weight.a, b.weight.b, mono.key()}] = c;
  return out;
}

struct PkRankReport
{
  int size0 = 0, rank0 = 0;  // P_0 on scalar monomials
  int size1 = 0, rank1 = 0;  // P_1 on E1 slot monomials
  int size2 = 0, rank2 = 0;  // P_2 on E2 slot monomials
  bool full() const { return rank0 == size0 && rank1 == size1 && rank2 == size2; }
};

/// Exact ranks of P_0, P_1, P_2 on Gaussian-weighted monomials of degree <= max_degree.
inline PkRankReport pk_rank_check(int max_degree)
{
  if (max_degree < 0) throw std::invalid_argument("pk_rank_check: negative degree");
  std::vector<Monomial> monos;
  for (int a = 0; a <= max_degree; ++a)
    for (int b = 0; a + b <= max_degree; ++b)
      for (int c = 0; a + b + c <= max_degree; ++c)
        for (int d = 0; a + b + c + d <= max_degree; ++d)
          for (int e = 0; a + b + c + d + e <= max_degree; ++e) monos.emplace_back(a, b, c, d, e);
  using Key = std::tuple<unsigned, mpq_class, mpq_class, std::uint64_t>;
  std::vector<std::map<Key, ComplexRational>> im0, im1, im2;
  for (const auto& m : monos) {
    const auto f = ExactFunction::monomial(m, ComplexRational(1), Weight<mpq_class>::standard());
    im0.push_back(flatten(P_0(f).representative()));
    for (int slot = 0; slot < 3; ++slot) {
      VectorValuedForm<ComplexRational> phi(1);
      if (slot == 0) phi.at(1, 0) = f;
      if (slot == 1) phi.at(1, 1) = phi.at(2, 0) = f;
      if (slot == 2) phi.at(2, 1) = f;
      im1.push_back(flatten(P_k(phi)));
    }
    for (int s = 0; s < 3; ++s) {
      VectorValuedForm<ComplexRational> psi(2);
      psi.at(s, 0) = f;
      im2.push_back(flatten(P_k(psi)));
    }
  }
  PkRankReport rep;
  rep.size0 = static_cast<int>(im0.size());
  rep.size1 = static_cast<int>(im1.size());
  rep.size2 = static_cast<int>(im2.size());
  rep.rank0 = exact_rank(std::move(im0));
  rep.rank1 = exact_rank(std::move(im1));
  rep.rank2 = exact_rank(std::move(im2));
  return rep;
}

}  // namespace crdeform
