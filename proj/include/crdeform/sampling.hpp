#pragma once

// Seeded random sections. Every consumer gets its own stream from
// (seed, stream-id) so adding a check never perturbs the others.

#include "crdeform/vector_form.hpp"

#include <cstdint>
#include <random>

namespace crdeform {

class Rng
{
 public:
  Rng(std::uint64_t seed, std::uint64_t stream)
  {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi]; modulo bias is irrelevant at these ranges
  /// and avoids library-dependent distribution output.
  long uniform_int(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

  /// Uniform double in [-1, 1).
  double uniform_signed() { return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0; }

  /// Small exact complex rational with nonzero value.
  ComplexRational small_rational()
  {
    for (;;) {
      ComplexRational z(mpq_class(uniform_int(-4, 4), uniform_int(1, 3)), mpq_class(uniform_int(-4, 4), uniform_int(1, 3)));
      if (!z.is_zero()) return z;
    }
  }

  Complex gaussian_complex()
  {
    // Box-Muller on raw draws
    const double u1 = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
  }

 private:
  std::mt19937_64 engine_;
};

/// Random exact function with `terms` monomials of total degree <= max_degree.
inline ExactFunction random_exact_function(Rng& rng, int max_degree, int terms,
                                           Weight<mpq_class> w = Weight<mpq_class>::standard())
{
  ExactFunction f;
  for (int k = 0; k < terms; ++k) {
    int e[kVarCount] = {0, 0, 0, 0, 0};
    const int d = static_cast<int>(rng.uniform_int(0, max_degree));
    for (int j = 0; j < d; ++j) ++e[rng.uniform_int(0, kVarCount - 1)];
    f += ExactFunction::monomial(Monomial(e[0], e[1], e[2], e[3], e[4]), rng.small_rational(), w);
  }
  return f;
}

/// Random degree-q form; ot_prime_only drops the xi-slots.
inline VectorValuedForm<ComplexRational> random_exact_form(Rng& rng, int q, int max_degree, int terms, bool ot_prime_only,
                                                           Weight<mpq_class> w = Weight<mpq_class>::standard())
{
  VectorValuedForm<ComplexRational> phi(q);
  const int n = VectorValuedForm<ComplexRational>::index_count(q);
  for (int s = ot_prime_only ? 1 : 0; s < 3; ++s)
    for (int I = 0; I < n; ++I) phi.at(s, I) = random_exact_function(rng, max_degree, terms, w);
  return phi;
}

/// Random element of E1: 0T'-valued with phi^1_2 = phi^2_1.
inline VectorValuedForm<ComplexRational> random_exact_E1(Rng& rng, int max_degree, int terms,
                                                         Weight<mpq_class> w = Weight<mpq_class>::standard())
{
  auto phi = random_exact_form(rng, 1, max_degree, terms, true, w);
  phi.at(2, 0) = phi.at(1, 1);
  return phi;
}

}  // namespace crdeform
