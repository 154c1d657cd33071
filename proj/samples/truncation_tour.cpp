// Walks one truncation end to end: exact identities, spectrum of box,
// the main-estimate constant, and a second-order Kuranishi family.
//   truncation_tour [N] [M]

#include "crdeform/crdeform.hpp"

#include <cstdlib>
#include <iostream>

using namespace crdeform;

int main(int argc, char** argv)
{
  const int N = argc > 1 ? std::atoi(argv[1]) : 4;
  const int M = argc > 2 ? std::atoi(argv[2]) : 2;
  if (N < 2 || M < 1) {
    std::cerr << "usage: truncation_tour [N >= 2] [M >= 1]\n";
    return 2;
  }

  // exact side: D(zb1^2) and the complex property on it
  const auto zb1 = ExactFunction::variable(Var::ZB1);
  const auto Du = D_op(zb1 * zb1);
  std::cout << "D(zb1^2 xi) has phi^1_1 = " << Du.at(1, 0) << ", dbar1 of it is zero: " << std::boolalpha
            << delbar_p(Du).is_zero() << "\n";

  // Galerkin side
  const GalerkinComplex gc(N);
  const HodgeData hd(gc);
  std::cout << "N=" << N << ": dim F=" << gc.F().dim() << " dim E1=" << gc.E1().dim() << " dim E2=" << gc.E2().dim()
            << ", dim ker box=" << hd.harmonic_dim() << ", spectral gap " << hd.min_nonzero_eigenvalue() << "\n";

  const auto est = certify_main_estimate(gc);
  std::cout << "c_N = " << est.c_N << "\n";

  const KuranishiMap K(gc, hd);
  KuranishiOptions opt;
  opt.order = M;
  const auto fam = solve_kuranishi(K, opt);
  if (fam.rigid()) {
    std::cout << "no harmonic parameters: rigid\n";
    return 0;
  }
  const auto res = kuranishi_residuals(K, fam);
  std::cout << "Kuranishi family with r=" << fam.phi.params() << ", M=" << M << ": residual " << res.banach_residual
            << ", delbar residual " << res.delbar_residual << "\n";
  for (int m = 0; m <= M; ++m) {
    double w = 0;
    for (const auto& a : multi_indices(fam.phi.params(), m)) w = std::max(w, obstruction(fam, a).norm());
    std::cout << "  obstruction at order " << m << ": " << w << "\n";
  }
}
