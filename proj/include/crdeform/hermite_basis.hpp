#pragma once

// Orthonormal Hermite basis of the standard Gaussian class.
//
// In each z-plane the complex Hermite functions
//   psi_jk(z) = H_jk(z, zb) e^{-|z|^2/2} / sqrt(j! k!),
//   H_jk = sum_m (-1)^m m! C(j,m) C(k,m) z^{j-m} zb^{k-m},
// are orthonormal for dA/pi; in t the functions psi_n = H_n(t) e^{-t^2/2} / sqrt(2^n n!)
// are orthonormal for dt/sqrt(pi). Span{psi_jk : j+k <= n} equals the span of
// real products h_a(x) h_b(y), a+b <= n, so the truncations coincide with the
// real tensor-product ones; the complex labels make every frame field shift
// the U(1)^2 charge (j1-k1, j2-k2) by exactly one unit.
//
// Ladder relations (with the Gaussian factor included):
//   d/dz  psi_jk = sqrt(j)/2 psi_{j-1,k} - sqrt(k+1)/2 psi_{j,k+1}
//   d/dzb psi_jk = sqrt(k)/2 psi_{j,k-1} - sqrt(j+1)/2 psi_{j+1,k}
//   z  psi_jk = sqrt(j+1) psi_{j+1,k} + sqrt(k) psi_{j,k-1}
//   zb psi_jk = sqrt(k+1) psi_{j,k+1} + sqrt(j) psi_{j-1,k}
//   t psi_n = sqrt(n/2) psi_{n-1} + sqrt((n+1)/2) psi_{n+1}
//   d/dt psi_n = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}

#include "crdeform/frame.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace crdeform {

using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;
using SparseXc = Eigen::SparseMatrix<Complex>;

/// Labels (j1, k1, j2, k2, n) of a product basis function.
struct HermiteIndex
{
  std::array<int, 5> q{};  // j1, k1, j2, k2, n

  int degree() const { return q[0] + q[1] + q[2] + q[3] + q[4]; }
  int charge1() const { return q[0] - q[1]; }
  int charge2() const { return q[2] - q[3]; }
  std::uint64_t key() const
  {
    std::uint64_t k = 0;
    for (int v : q) k = (k << 8) | static_cast<std::uint64_t>(v);
    return k;
  }
  friend bool operator==(const HermiteIndex& a, const HermiteIndex& b) { return a.q == b.q; }
};

/// Hermite functions of total degree <= N, ordered by degree so that the
/// basis of a smaller N is a prefix of the larger one.
class ScalarSpace
{
 public:
  explicit ScalarSpace(int N) : N_(N)
  {
    if (N < 0) throw std::invalid_argument("ScalarSpace: negative truncation degree");
    for (int d = 0; d <= N; ++d) {
      offsets_.push_back(static_cast<int>(idx_.size()));
      for (int j1 = d; j1 >= 0; --j1)
        for (int k1 = d - j1; k1 >= 0; --k1)
          for (int j2 = d - j1 - k1; j2 >= 0; --j2)
            for (int k2 = d - j1 - k1 - j2; k2 >= 0; --k2) {
              HermiteIndex h{{j1, k1, j2, k2, d - j1 - k1 - j2 - k2}};
              pos_.emplace(h.key(), static_cast<int>(idx_.size()));
              idx_.push_back(h);
            }
    }
    offsets_.push_back(static_cast<int>(idx_.size()));
  }

  /// Shared instance per N.
  static std::shared_ptr<const ScalarSpace> get(int N)
  {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const ScalarSpace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[N];
    if (!slot) slot = std::make_shared<const ScalarSpace>(N);
    return slot;
  }

  int N() const { return N_; }
  int dim() const { return static_cast<int>(idx_.size()); }
  /// Number of basis functions of degree <= d.
  int dim_upto(int d) const { return d < 0 ? 0 : offsets_.at(static_cast<std::size_t>(std::min(d, N_) + 1)); }
  const HermiteIndex& operator[](int i) const { return idx_[static_cast<std::size_t>(i)]; }
  const std::vector<HermiteIndex>& indices() const { return idx_; }

  /// Position of h, or -1 if outside the truncation.
  int find(const HermiteIndex& h) const
  {
    for (int v : h.q)
      if (v < 0) return -1;
    if (h.degree() > N_) return -1;
    auto it = pos_.find(h.key());
    return it == pos_.end() ? -1 : it->second;
  }

 private:
  int N_;
  std::vector<HermiteIndex> idx_;
  std::vector<int> offsets_;
  std::unordered_map<std::uint64_t, int> pos_;
};

/// Sparse combination of Hermite labels.
using HermiteCombination = std::vector<std::pair<HermiteIndex, Complex>>;

namespace hermite {

inline void push(HermiteCombination& out, HermiteIndex h, int slot, int delta, Complex c)
{
  h.q[static_cast<std::size_t>(slot)] += delta;
  if (h.q[static_cast<std::size_t>(slot)] < 0 || c == Complex(0)) return;
  out.emplace_back(h, c);
}

/// Applies a coordinate derivative (Var) to each term.
inline HermiteCombination partial(const HermiteCombination& in, Var v)
{
  HermiteCombination out;
  for (const auto& [h, c] : in) {
    switch (v) {
      case Var::Z1:
      case Var::Z2: {
        const int js = v == Var::Z1 ? 0 : 2, ks = js + 1;
        const double j = h.q[static_cast<std::size_t>(js)], k = h.q[static_cast<std::size_t>(ks)];
        push(out, h, js, -1, c * (std::sqrt(j) / 2));
        push(out, h, ks, +1, c * (-std::sqrt(k + 1) / 2));
        break;
      }
      case Var::ZB1:
      case Var::ZB2: {
        const int js = v == Var::ZB1 ? 0 : 2, ks = js + 1;
        const double j = h.q[static_cast<std::size_t>(js)], k = h.q[static_cast<std::size_t>(ks)];
        push(out, h, ks, -1, c * (std::sqrt(k) / 2));
        push(out, h, js, +1, c * (-std::sqrt(j + 1) / 2));
        break;
      }
      case Var::T: {
        const double n = h.q[4];
        push(out, h, 4, -1, c * std::sqrt(n / 2));
        push(out, h, 4, +1, c * (-std::sqrt((n + 1) / 2)));
        break;
      }
    }
  }
  return out;
}

/// Multiplies each term by a coordinate.
inline HermiteCombination times(const HermiteCombination& in, Var v)
{
  HermiteCombination out;
  for (const auto& [h, c] : in) {
    switch (v) {
      case Var::Z1:
      case Var::Z2: {
        const int js = v == Var::Z1 ? 0 : 2, ks = js + 1;
        const double j = h.q[static_cast<std::size_t>(js)], k = h.q[static_cast<std::size_t>(ks)];
        push(out, h, js, +1, c * std::sqrt(j + 1));
        push(out, h, ks, -1, c * std::sqrt(k));
        break;
      }
      case Var::ZB1:
      case Var::ZB2: {
        const int js = v == Var::ZB1 ? 0 : 2, ks = js + 1;
        const double j = h.q[static_cast<std::size_t>(js)], k = h.q[static_cast<std::size_t>(ks)];
        push(out, h, ks, +1, c * std::sqrt(k + 1));
        push(out, h, js, -1, c * std::sqrt(j));
        break;
      }
      case Var::T: {
        const double n = h.q[4];
        push(out, h, 4, -1, c * std::sqrt(n / 2));
        push(out, h, 4, +1, c * std::sqrt((n + 1) / 2));
        break;
      }
    }
  }
  return out;
}

inline HermiteCombination scaled(HermiteCombination in, Complex s)
{
  for (auto& t : in) t.second *= s;
  return in;
}

inline HermiteCombination concat(HermiteCombination a, const HermiteCombination& b)
{
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Frame field applied to a single basis function.
inline HermiteCombination apply_frame(FrameField X, const HermiteIndex& h)
{
  const HermiteCombination base{{h, Complex(1)}};
  const Complex half_i(0, 0.5);
  switch (X) {
    case FrameField::Xi: return partial(base, Var::T);
    case FrameField::E1: return concat(partial(base, Var::Z1), scaled(times(partial(base, Var::T), Var::ZB1), half_i));
    case FrameField::E2: return concat(partial(base, Var::Z2), scaled(times(partial(base, Var::T), Var::ZB2), half_i));
    case FrameField::EB1: return concat(partial(base, Var::ZB1), scaled(times(partial(base, Var::T), Var::Z1), -half_i));
    case FrameField::EB2: return concat(partial(base, Var::ZB2), scaled(times(partial(base, Var::T), Var::Z2), -half_i));
  }
  return {};
}

/// Unnormalized complex Hermite polynomial H_jk(z, zb) in the chosen plane (exact).
inline ExactFunction complex_hermite_poly(int j, int k, int plane)
{
  std::vector<ExactFunction::Term> terms;
  for (int m = 0; m <= std::min(j, k); ++m) {
    mpz_class c = detail::factorial_z(m);
    mpz_class b1, b2;
    mpz_bin_uiui(b1.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(m));
    mpz_bin_uiui(b2.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(m));
    c *= b1 * b2;
    if (m % 2) c = -c;
    const Monomial mono = plane == 1 ? Monomial(j - m, k - m, 0, 0, 0) : Monomial(0, 0, j - m, k - m, 0);
    terms.emplace_back(mono, ComplexRational(mpq_class(c)));
  }
  return ExactFunction::from_terms(std::move(terms), Weight<mpq_class>::polynomial());
}

/// Physicists' Hermite polynomial H_n(t) (exact).
inline ExactFunction real_hermite_poly(int n)
{
  // H_n = sum_l (-1)^l n! / (l! (n-2l)!) (2t)^{n-2l}
  std::vector<ExactFunction::Term> terms;
  for (int l = 0; 2 * l <= n; ++l) {
    mpz_class c = detail::factorial_z(n) / (detail::factorial_z(l) * detail::factorial_z(n - 2 * l));
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(n - 2 * l));
    c *= p2;
    if (l % 2) c = -c;
    terms.emplace_back(Monomial(0, 0, 0, 0, n - 2 * l), ComplexRational(mpq_class(c)));
  }
  return ExactFunction::from_terms(std::move(terms), Weight<mpq_class>::polynomial());
}

/// Unnormalized basis function H_{j1k1} H_{j2k2} H_n g0; squared norm is
/// j1! k1! j2! k2! 2^n n!.
inline ExactFunction unnormalized_function(const HermiteIndex& h)
{
  return complex_hermite_poly(h.q[0], h.q[1], 1) * complex_hermite_poly(h.q[2], h.q[3], 2) * real_hermite_poly(h.q[4]) *
         ExactFunction::ground();
}

inline mpz_class squared_norm(const HermiteIndex& h)
{
  mpz_class p2;
  mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(h.q[4]));
  return detail::factorial_z(h.q[0]) * detail::factorial_z(h.q[1]) * detail::factorial_z(h.q[2]) *
         detail::factorial_z(h.q[3]) * detail::factorial_z(h.q[4]) * p2;
}

/// Normalized basis function as a numeric polynomial times g0.
inline NumericFunction basis_function(const HermiteIndex& h)
{
  const double scale = 1.0 / std::sqrt(squared_norm(h).get_d());
  return unnormalized_function(h).cast<Complex>() * Complex(scale);
}

}  // namespace hermite

/// Matrix of a frame field from span(ScalarSpace(n_in)) into ScalarSpace(n_out).
/// Exact (no truncation) when n_out >= n_in + 2.
inline SparseXc letter_matrix(FrameField X, int n_in, int n_out)
{
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, SparseXc> cache;
  const auto key = std::make_tuple(static_cast<int>(X), n_in, n_out);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const auto in = ScalarSpace::get(n_in);
  const auto out = ScalarSpace::get(n_out);
  std::vector<Eigen::Triplet<Complex>> trips;
  for (int j = 0; j < in->dim(); ++j)
    for (const auto& [h, c] : hermite::apply_frame(X, (*in)[j])) {
      const int i = out->find(h);
      if (i >= 0) trips.emplace_back(i, j, c);
    }
  SparseXc M(out->dim(), in->dim());
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, M);
  return M;
}

/// Coefficient vector to a numeric function (polynomial times g0).
inline NumericFunction synthesize(const VectorXc& coeffs, const ScalarSpace& space)
{
  NumericFunction f;
  for (int i = 0; i < static_cast<int>(coeffs.size()); ++i)
    if (coeffs[i] != Complex(0)) f += hermite::basis_function(space[i]) * coeffs[i];
  return f;
}

namespace detail {

// Exact moment tables for projecting weight-(a,b) monomials onto the basis.
// z-plane: (1/pi) \int z^p zb^q conj(H_jk) e^{-c|z|^2},  c = (a+1)/2,
// t: pi^{-1/2} \int t^m H_n e^{-d t^2} * sqrt(d),  d = (b+1)/2 (the 1/sqrt(d) is applied later).
class ProjectionTables
{
 public:
  ProjectionTables(const mpq_class& c, const mpq_class& d, int max_in, int max_basis)
      : P_(max_in), J_(max_basis), z_((P_ + 1) * (P_ + 1) * (J_ + 1) * (J_ + 1), 0.0), t_((P_ + 1) * (J_ + 1), 0.0)
  {
    std::vector<mpq_class> cinv_pow(static_cast<std::size_t>(P_ + J_ + 2));
    cinv_pow[0] = 1;
    for (std::size_t k = 1; k < cinv_pow.size(); ++k) cinv_pow[k] = cinv_pow[k - 1] / c;
    for (int p = 0; p <= P_; ++p)
      for (int q = 0; q <= P_; ++q)
        for (int j = 0; j <= J_; ++j)
          for (int k = 0; k <= J_; ++k) {
            if (p - q != j - k) continue;
            // conj(z^{j-m} zb^{k-m}) = zb^{j-m} z^{k-m}; pairing needs p + k - m = q + j - m
            mpq_class s = 0;
            for (int m = 0; m <= std::min(j, k); ++m) {
              mpz_class b1, b2;
              mpz_bin_uiui(b1.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(m));
              mpz_bin_uiui(b2.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(m));
              const int e = p + k - m;
              mpq_class term(factorial_z(m) * b1 * b2 * factorial_z(e));
              term *= cinv_pow[static_cast<std::size_t>(e + 1)];
              if (m % 2) s -= term;
              else s += term;
            }
            z_[zi(p, q, j, k)] = s.get_d() / std::sqrt(factorial_z(j).get_d() * factorial_z(k).get_d());
          }
    for (int m = 0; m <= P_; ++m)
      for (int n = 0; n <= J_; ++n) {
        mpq_class s = 0;
        for (int l = 0; 2 * l <= n; ++l) {
          const int e = m + n - 2 * l;
          if (e % 2) continue;
          mpz_class coeff = factorial_z(n) / (factorial_z(l) * factorial_z(n - 2 * l));
          mpz_class p2;
          mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(n - 2 * l));
          coeff *= p2;
          mpq_class mom(double_factorial_z(e - 1));
          for (int r = 0; r < e / 2; ++r) mom /= 2 * d;
          if (l % 2) s -= coeff * mom;
          else s += coeff * mom;
        }
        mpz_class p2n;
        mpz_ui_pow_ui(p2n.get_mpz_t(), 2, static_cast<unsigned long>(n));
        t_[static_cast<std::size_t>(m * (J_ + 1) + n)] = s.get_d() / std::sqrt(mpz_class(p2n * factorial_z(n)).get_d());
      }
  }

  double z(int p, int q, int j, int k) const { return z_[zi(p, q, j, k)]; }
  double t(int m, int n) const { return t_[static_cast<std::size_t>(m * (J_ + 1) + n)]; }
  int max_in() const { return P_; }

 private:
  std::size_t zi(int p, int q, int j, int k) const
  {
    return static_cast<std::size_t>(((p * (P_ + 1) + q) * (J_ + 1) + j) * (J_ + 1) + k);
  }
  int P_, J_;
  std::vector<double> z_, t_;
};

inline const ProjectionTables& projection_tables(double a, double b, int max_in, int max_basis)
{
  static std::mutex mu;
  static std::map<std::tuple<double, double, int, int>, std::unique_ptr<ProjectionTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  // round the cached degree up so nearby requests share a table
  const int pin = ((max_in + 7) / 8) * 8;
  auto& slot = cache[std::make_tuple(a, b, pin, max_basis)];
  if (!slot) {
    const mpq_class c = (mpq_class(a) + 1) / 2, d = (mpq_class(b) + 1) / 2;
    slot = std::make_unique<ProjectionTables>(c, d, pin, max_basis);
  }
  return *slot;
}

}  // namespace detail

/// Orthogonal projection coefficients (f, psi_i) for i in ScalarSpace(N).
/// Accepts any positive weights, so products of basis functions project too.
inline VectorXc project(const NumericFunction& f, const ScalarSpace& space)
{
  VectorXc out = VectorXc::Zero(space.dim());
  if (f.is_zero()) return out;
  if (f.has_polynomial_part()) throw std::invalid_argument("project: pure polynomials are not integrable");
  // group basis functions by charge
  std::map<std::pair<int, int>, std::vector<int>> by_charge;
  for (int i = 0; i < space.dim(); ++i) by_charge[{space[i].charge1(), space[i].charge2()}].push_back(i);
  for (const auto& block : f.blocks()) {
    int maxe = 0;
    for (const auto& [m, c] : block.terms)
      for (int v = 0; v < kVarCount; ++v) maxe = std::max(maxe, m[v]);
    const auto& tab = detail::projection_tables(block.weight.a, block.weight.b, maxe, space.N());
    const double inv_sqrt_d = 1.0 / std::sqrt((block.weight.b + 1) / 2);
    for (const auto& [m, c] : block.terms) {
      auto it = by_charge.find({m[0] - m[1], m[2] - m[3]});
      if (it == by_charge.end()) continue;
      for (int i : it->second) {
        const auto& h = space[i];
        const double v = tab.z(m[0], m[1], h.q[0], h.q[1]) * tab.z(m[2], m[3], h.q[2], h.q[3]) * tab.t(m[4], h.q[4]);
        out[i] += c * (v * inv_sqrt_d);
      }
    }
  }
  return out;
}

}  // namespace crdeform
