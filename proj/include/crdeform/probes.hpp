#pragma once

// Diagnostic bound probes on a truncation. A finite truncation cannot certify
// the continuum constants; these record the observed ratios.

#include "crdeform/kuranishi.hpp"
#include "crdeform/sampling.hpp"

namespace crdeform {

/// |v|_{k,m} on E1 coordinates through the Gram matrix.
inline double e1_mixed_norm(const GalerkinComplex& gc, const VectorXc& v, int k, int m)
{
  return std::sqrt(std::max(0.0, v.dot(gc.E1_gram(k, m) * v).real()));
}

inline VectorXc random_coefficients(Rng& rng, Eigen::Index n)
{
  VectorXc v(n);
  for (Eigen::Index k = 0; k < n; ++k) v[k] = rng.gaussian_complex();
  return v / v.norm();
}

struct ProbeTable
{
  int N = 0, m = 0, samples = 0;
  double max_ratio = 0, mean_ratio = 0;
};

/// max over samples of |N psi|_{4,m} / |psi|_{0,m}.
inline ProbeTable neumann_gain_probe(const GalerkinComplex& gc, const HodgeData& hd, Rng& rng, int samples, int m)
{
  if (m < 0 || m > 1) throw std::invalid_argument("neumann_gain_probe: m must be 0 or 1");
  ProbeTable t{gc.N(), m, samples, 0, 0};
  for (int s = 0; s < samples; ++s) {
    const VectorXc psi = random_coefficients(rng, gc.E1().dim());
    const double r = e1_mixed_norm(gc, hd.neumann(psi), 4, m) / e1_mixed_norm(gc, psi, 0, m);
    t.max_ratio = std::max(t.max_ratio, r);
    t.mean_ratio += r / samples;
  }
  return t;
}

/// |dbar1* L R2(phi)|_{0,m} / |phi|_{4,m}^2 for one phi.
inline double r2_bound_ratio(const KuranishiMap& K, const VectorXc& phi, int m)
{
  const auto& gc = K.complex();
  const VectorXc lhs = gc.delbar1().m.adjoint() * (gc.L().m * K.r2(phi));
  const double den = e1_mixed_norm(gc, phi, 4, m);
  return den == 0 ? 0.0 : e1_mixed_norm(gc, lhs, 0, m) / (den * den);
}

inline ProbeTable r2_bound_probe(const KuranishiMap& K, Rng& rng, int samples, int m)
{
  if (m < 0) throw std::invalid_argument("r2_bound_probe: m must be nonnegative");
  ProbeTable t{K.complex().N(), m, samples, 0, 0};
  for (int s = 0; s < samples; ++s) {
    const double r = r2_bound_ratio(K, random_coefficients(rng, K.complex().E1().dim()), m);
    t.max_ratio = std::max(t.max_ratio, r);
    t.mean_ratio += r / samples;
  }
  return t;
}

}  // namespace crdeform
