#pragma once

// Degree-by-degree solution of phi(t) + N dbar1* L R2(phi(t)) = t on a
// Galerkin truncation, with the obstruction coefficients
//   R2(phi(t)) - dbar1 N dbar1* L R2(phi(t))
// whose vanishing cuts out the family. R2 is evaluated symbolically on the
// synthesized Hermite expansions and projected back onto E2.

#include "crdeform/deformation_complex.hpp"
#include "crdeform/hodge.hpp"

#include <complex>
#include <functional>
#include <map>
#include <vector>

namespace crdeform {

using MultiIndex = std::vector<int>;

inline int order_of(const MultiIndex& a)
{
  int s = 0;
  for (int v : a) s += v;
  return s;
}

/// Graded order: total order first, then reverse lexicographic (t1^2 before t1 t2).
struct MultiIndexLess
{
  bool operator()(const MultiIndex& a, const MultiIndex& b) const
  {
    const int oa = order_of(a), ob = order_of(b);
    if (oa != ob) return oa < ob;
    return b < a;
  }
};

/// All multi-indices of r entries with order exactly m, in MultiIndexLess order.
inline std::vector<MultiIndex> multi_indices(int r, int m)
{
  std::vector<MultiIndex> out;
  MultiIndex a(static_cast<std::size_t>(r), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == r - 1) {
      a[static_cast<std::size_t>(pos)] = left;
      out.push_back(a);
      return;
    }
    for (int v = left; v >= 0; --v) {
      a[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  if (r > 0) rec(0, m);
  return out;
}

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b)
{
  MultiIndex c = a;
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += b[k];
  return c;
}

/// Power series in r parameters with vector coefficients, truncated at order M.
class MultiIndexSeries
{
 public:
  MultiIndexSeries(int r = 0, int M = 0, Eigen::Index dim = 0) : r_(r), M_(M), dim_(dim) {}

  int params() const { return r_; }
  int order() const { return M_; }
  Eigen::Index dim() const { return dim_; }

  /// Coefficient of t^alpha (zero vector if absent).
  VectorXc coefficient(const MultiIndex& a) const
  {
    auto it = c_.find(a);
    return it == c_.end() ? VectorXc::Zero(dim_) : it->second;
  }
  void set(const MultiIndex& a, VectorXc v)
  {
    if (static_cast<int>(a.size()) != r_) throw std::invalid_argument("MultiIndexSeries: wrong number of parameters");
    if (order_of(a) > M_) throw std::invalid_argument("MultiIndexSeries: multi-index beyond the truncation order");
    c_[a] = std::move(v);
  }
  void add_to(const MultiIndex& a, const VectorXc& v)
  {
    if (order_of(a) > M_) return;
    auto it = c_.find(a);
    if (it == c_.end()) set(a, v);
    else it->second += v;
  }

  const std::map<MultiIndex, VectorXc, MultiIndexLess>& coefficients() const { return c_; }

  /// kappa_m: the homogeneous slice of order m.
  MultiIndexSeries slice(int m) const
  {
    MultiIndexSeries s(r_, M_, dim_);
    for (const auto& [a, v] : c_)
      if (order_of(a) == m) s.c_[a] = v;
    return s;
  }

  /// Value at a parameter point.
  VectorXc evaluate(const std::vector<Complex>& t) const
  {
    VectorXc out = VectorXc::Zero(dim_);
    for (const auto& [a, v] : c_) {
      Complex w(1);
      for (std::size_t k = 0; k < a.size(); ++k) w *= std::pow(t[k], a[k]);
      out += w * v;
    }
    return out;
  }

  double max_coefficient_norm() const
  {
    double m = 0;
    for (const auto& [a, v] : c_) m = std::max(m, v.norm());
    return m;
  }

 private:
  int r_, M_;
  Eigen::Index dim_;
  std::map<MultiIndex, VectorXc, MultiIndexLess> c_;
};

struct KuranishiOptions
{
  int order = 3;           // M
  int max_params = 2;      // r = min(dim H, max_params)
  int max_r2_degree = 96;  // cap on the polynomial degree fed to R2 and the projection tables
};

/// R2, its Galerkin projection, and the map T(phi) = N dbar1* L P R2(phi) on one truncation.
class KuranishiMap
{
 public:
  KuranishiMap(const GalerkinComplex& gc, const HodgeData& hd, int max_r2_degree = 96)
      : gc_(gc), hd_(hd), cap_(max_r2_degree)
  {
  }

  const GalerkinComplex& complex() const { return gc_; }
  const HodgeData& hodge() const { return hd_; }

  /// P R2(phi, psi) in E2 coordinates (symmetric bilinear).
  VectorXc r2_bilinear(const VectorXc& phi, const VectorXc& psi) const
  {
    const auto a = e1_to_form(phi, gc_.E1());
    const auto b = e1_to_form(psi, gc_.E1());
    for (const auto* f : {&a, &b})
      for (const auto& comp : f->components())
        if (comp.degree() + 4 > cap_)
          throw std::overflow_error("KuranishiMap: truncation overflow, R2 input degree exceeds the cap of " +
                                    std::to_string(cap_));
    const auto r = R2_bilinear(a, b);
    return form_to_e2(r, gc_.E2());
  }

  VectorXc r2(const VectorXc& phi) const { return r2_bilinear(phi, phi); }

  /// N dbar1* L applied to an E2 vector.
  VectorXc solve_part(const VectorXc& e2) const
  {
    return hd_.neumann(gc_.delbar1().m.adjoint() * (gc_.L().m * e2));
  }

  /// Obstruction part (1 - dbar1 N dbar1* L) applied to an E2 vector.
  VectorXc obstruction_part(const VectorXc& e2) const { return e2 - gc_.delbar1().m * solve_part(e2); }

  /// T(phi) = N dbar1* L P R2(phi).
  VectorXc T(const VectorXc& phi) const { return solve_part(r2(phi)); }

 private:
  const GalerkinComplex& gc_;
  const HodgeData& hd_;
  int cap_;
};

struct KuranishiFamily
{
  MatrixXc t_basis;            // harmonic columns used as parameters
  MultiIndexSeries phi;        // E1 coefficients
  MultiIndexSeries r2;         // P R2(phi(t)) in E2 coordinates
  MultiIndexSeries obstruction;
  bool rigid() const { return t_basis.cols() == 0; }
};

/// The parameter directions: the first r harmonic basis columns.
inline MatrixXc kuranishi_parameters(const HodgeData& hd, int max_params)
{
  const MatrixXc Hb = hd.harmonic_basis();
  return Hb.leftCols(std::min<Eigen::Index>(Hb.cols(), max_params));
}

namespace detail {

// kappa_alpha R2(phi) = sum over ordered pairs beta + gamma = alpha of R2(phi_beta, phi_gamma).
inline VectorXc r2_coefficient(const KuranishiMap& K, const MultiIndexSeries& phi, const MultiIndex& alpha)
{
  VectorXc out = VectorXc::Zero(K.complex().E2().dim());
  const int m = order_of(alpha);
  for (int mb = 1; mb < m; ++mb)
    for (const auto& beta : multi_indices(phi.params(), mb)) {
      MultiIndex gamma = alpha;
      bool ok = true;
      for (std::size_t k = 0; k < gamma.size(); ++k) {
        gamma[k] -= beta[k];
        ok = ok && gamma[k] >= 0;
      }
      if (!ok) continue;
      // each unordered pair once with weight 2, diagonal once
      if (MultiIndexLess{}(gamma, beta)) continue;
      const VectorXc term = K.r2_bilinear(phi.coefficient(beta), phi.coefficient(gamma));
      out += (beta == gamma ? 1.0 : 2.0) * term;
    }
  return out;
}

}  // namespace detail

/// Solves through order M with the given parameter directions (columns of t_basis).
inline KuranishiFamily solve_kuranishi(const KuranishiMap& K, const MatrixXc& t_basis, int M)
{
  if (M < 1) throw std::invalid_argument("solve_kuranishi: order must be at least 1");
  const auto& gc = K.complex();
  const int r = static_cast<int>(t_basis.cols());
  KuranishiFamily fam{t_basis, MultiIndexSeries(r, M, gc.E1().dim()), MultiIndexSeries(r, M, gc.E2().dim()),
                      MultiIndexSeries(r, M, gc.E2().dim())};
  if (r == 0) return fam;
  for (int i = 0; i < r; ++i) {
    MultiIndex e(static_cast<std::size_t>(r), 0);
    e[static_cast<std::size_t>(i)] = 1;
    fam.phi.set(e, t_basis.col(i));
  }
  for (int m = 0; m <= M; ++m)
    for (const auto& alpha : multi_indices(r, m)) {
      // orders 0 and 1 receive no quadratic contribution
      const VectorXc rc = m >= 2 ? detail::r2_coefficient(K, fam.phi, alpha) : VectorXc::Zero(gc.E2().dim());
      fam.r2.set(alpha, rc);
      fam.obstruction.set(alpha, m >= 2 ? K.obstruction_part(rc) : rc);
      if (m >= 2) fam.phi.set(alpha, -K.solve_part(rc));
    }
  return fam;
}

inline KuranishiFamily solve_kuranishi(const KuranishiMap& K, const KuranishiOptions& opt = {})
{
  return solve_kuranishi(K, kuranishi_parameters(K.hodge(), opt.max_params), opt.order);
}

/// Obstruction coefficient at alpha.
inline VectorXc obstruction(const KuranishiFamily& fam, const MultiIndex& alpha)
{
  return fam.obstruction.coefficient(alpha);
}

/// Picard iteration phi <- t - T(phi) in truncated series arithmetic, starting from phi = t.
inline std::vector<MultiIndexSeries> picard_iterates(const KuranishiMap& K, const MatrixXc& t_basis, int M, int iterations)
{
  const int r = static_cast<int>(t_basis.cols());
  const auto dim = K.complex().E1().dim();
  MultiIndexSeries t(r, M, dim);
  for (int i = 0; i < r; ++i) {
    MultiIndex e(static_cast<std::size_t>(r), 0);
    e[static_cast<std::size_t>(i)] = 1;
    t.set(e, t_basis.col(i));
  }
  std::vector<MultiIndexSeries> out{t};
  for (int it = 0; it < iterations; ++it) {
    const MultiIndexSeries& cur = out.back();
    MultiIndexSeries next = t;
    for (int m = 2; m <= M; ++m)
      for (const auto& alpha : multi_indices(r, m))
        next.add_to(alpha, -K.solve_part(detail::r2_coefficient(K, cur, alpha)));
    out.push_back(std::move(next));
  }
  return out;
}

/// Coefficients of a vector-valued polynomial g(t) of total degree <= D in r <= 2
/// variables, recovered by a discrete Fourier transform over K-th roots of unity
/// (K > D, so there is no aliasing).
inline MultiIndexSeries dft_coefficients(const std::function<VectorXc(const std::vector<Complex>&)>& g, int r, int D,
                                         int keep_order, Eigen::Index dim)
{
  if (r < 1 || r > 2) throw std::invalid_argument("dft_coefficients: supports one or two parameters");
  const int K = D + 1;
  std::vector<Complex> w(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) w[static_cast<std::size_t>(k)] = std::polar(1.0, 2 * M_PI * k / K);
  std::vector<VectorXc> samples;
  const int npts = r == 1 ? K : K * K;
  for (int p = 0; p < npts; ++p) {
    std::vector<Complex> t{w[static_cast<std::size_t>(p % K)]};
    if (r == 2) t.push_back(w[static_cast<std::size_t>(p / K)]);
    samples.push_back(g(t));
  }
  MultiIndexSeries out(r, keep_order, dim);
  for (int m = 0; m <= keep_order; ++m)
    for (const auto& a : multi_indices(r, m)) {
      VectorXc c = VectorXc::Zero(dim);
      for (int p = 0; p < npts; ++p) {
        const int i = p % K, j = p / K;
        Complex wt = std::conj(w[static_cast<std::size_t>((a[0] * i) % K)]);
        if (r == 2) wt *= std::conj(w[static_cast<std::size_t>((a[1] * j) % K)]);
        c += wt * samples[static_cast<std::size_t>(p)];
      }
      out.set(a, c / static_cast<double>(npts));
    }
  return out;
}

struct KuranishiResiduals
{
  double banach_residual = 0;      // max_alpha |kappa_alpha[phi + T(phi) - t]|
  double linear_residual = 0;      // max_i |kappa_{e_i} phi - t_i|
  double delbar_residual = 0;      // max_alpha |kappa_alpha[dbar1 phi + dbar1 N dbar1* L R2(phi)]|
  double obstruction_identity = 0; // max_alpha |kappa_alpha[dbar1 phi + P R2(phi)] - O_alpha|
  double obstruction_low_order = 0;  // max norm of O_alpha for |alpha| <= 1 (exactly zero)
};

/// Residuals of the family, recomputed by substituting phi(t) at roots of unity
/// rather than from the bilinear expansion used by the solver.
inline KuranishiResiduals kuranishi_residuals(const KuranishiMap& K, const KuranishiFamily& fam)
{
  KuranishiResiduals res;
  const int r = fam.phi.params(), M = fam.phi.order();
  if (r == 0) return res;
  const auto& gc = K.complex();
  const SparseXc& B = gc.delbar1().m;

  // g(t) = (phi + T(phi) - t, dbar1 phi + dbar1 N dbar1* L PR2(phi), dbar1 phi + PR2(phi)); degree <= 2M
  const Eigen::Index n1 = gc.E1().dim(), n2 = gc.E2().dim();
  auto g = [&](const std::vector<Complex>& t) {
    const VectorXc phi = fam.phi.evaluate(t);
    VectorXc lin = VectorXc::Zero(n1);
    for (int i = 0; i < r; ++i) lin += t[static_cast<std::size_t>(i)] * fam.t_basis.col(i);
    const VectorXc pr2 = K.r2(phi);
    const VectorXc sp = K.solve_part(pr2);
    VectorXc out(n1 + 2 * n2);
    out << phi + sp - lin, B * phi + B * sp, B * phi + pr2;
    return out;
  };
  const MultiIndexSeries c = dft_coefficients(g, r, 2 * M, M, n1 + 2 * n2);
  for (const auto& [a, v] : c.coefficients()) {
    res.banach_residual = std::max(res.banach_residual, v.head(n1).norm());
    res.delbar_residual = std::max(res.delbar_residual, v.segment(n1, n2).norm());
    res.obstruction_identity = std::max(res.obstruction_identity, (v.tail(n2) - fam.obstruction.coefficient(a)).norm());
  }
  for (int i = 0; i < r; ++i) {
    MultiIndex e(static_cast<std::size_t>(r), 0);
    e[static_cast<std::size_t>(i)] = 1;
    res.linear_residual = std::max(res.linear_residual, (fam.phi.coefficient(e) - fam.t_basis.col(i)).norm());
  }
  for (int m = 0; m <= 1; ++m)
    for (const auto& a : multi_indices(r, m)) res.obstruction_low_order = std::max(res.obstruction_low_order, fam.obstruction.coefficient(a).norm());
  return res;
}

}  // namespace crdeform
