#pragma once

// Harmonic space, Neumann operator and the Main Estimate constant on a
// Galerkin truncation. Everything is solved sector by sector; the matrices
// are Hermitian so eigen-decompositions stand in for SVDs.

#include "crdeform/galerkin.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>

namespace crdeform {

struct HodgeOptions
{
  double kernel_rel_threshold = 1e-9;  // eigenvalues below this times the largest count as zero
  double gap_factor = 10;              // smallest nonzero eigenvalue must exceed gap_factor * threshold
};

struct SectorSpectrum
{
  SectorKey key;
  std::vector<int> idx;  // E1 coordinates of the sector
  Eigen::VectorXd evals;  // ascending
  MatrixXc evecs;
  int kernel_dim = 0;
};

/// Spectral data of box: harmonic projector H and Neumann operator N.
class HodgeData
{
 public:
  HodgeData(const GalerkinComplex& gc, HodgeOptions opt = {}) : dim_(gc.E1().dim()), opt_(opt)
  {
    const SparseXc& box = gc.box().m;
    for (const auto& [key, idx] : gc.E1().sectors()) {
      Eigen::SelfAdjointEigenSolver<MatrixXc> es(dense_block(box, idx, idx));
      if (es.info() != Eigen::Success) throw std::runtime_error("HodgeData: eigen-solver failure");
      blocks_.push_back({key, idx, es.eigenvalues(), es.eigenvectors(), 0});
      lambda_max_ = std::max(lambda_max_, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    threshold_ = opt.kernel_rel_threshold * lambda_max_;
    min_nonzero_ = std::numeric_limits<double>::infinity();
    for (auto& b : blocks_) {
      for (Eigen::Index k = 0; k < b.evals.size(); ++k) {
        if (b.evals[k] < threshold_) {
          ++b.kernel_dim;
          max_zero_ = std::max(max_zero_, std::abs(b.evals[k]));
        } else {
          min_nonzero_ = std::min(min_nonzero_, b.evals[k]);
        }
      }
      harmonic_dim_ += b.kernel_dim;
    }
  }

  int dim() const { return dim_; }
  int harmonic_dim() const { return harmonic_dim_; }
  double threshold() const { return threshold_; }
  double lambda_max() const { return lambda_max_; }
  double min_nonzero_eigenvalue() const { return min_nonzero_; }
  double max_kernel_eigenvalue() const { return max_zero_; }
  /// False when the spectrum has no clear gap at the threshold.
  bool gap_ok() const { return min_nonzero_ > opt_.gap_factor * threshold_; }
  const std::vector<SectorSpectrum>& sectors() const { return blocks_; }

  /// H f.
  VectorXc harmonic_projection(const VectorXc& f) const
  {
    return apply([](double, bool harmonic) { return harmonic ? 1.0 : 0.0; }, f);
  }

  /// N f: inverse of box on the orthogonal complement of the kernel, zero on the kernel.
  VectorXc neumann(const VectorXc& f) const
  {
    return apply([](double lam, bool harmonic) { return harmonic ? 0.0 : 1.0 / lam; }, f);
  }

  /// Orthonormal columns spanning the harmonic space.
  MatrixXc harmonic_basis() const
  {
    MatrixXc Hb = MatrixXc::Zero(dim_, harmonic_dim_);
    int col = 0;
    for (const auto& b : blocks_)
      for (int k = 0; k < b.kernel_dim; ++k, ++col)
        for (std::size_t r = 0; r < b.idx.size(); ++r) Hb(b.idx[r], col) = b.evecs(static_cast<Eigen::Index>(r), k);
    return Hb;
  }

  /// Dense sector blocks of H and N (materialized, for the algebraic identities).
  MatrixXc sector_H(std::size_t s) const { return sector_matrix(s, [](double, bool h) { return h ? 1.0 : 0.0; }); }
  MatrixXc sector_N(std::size_t s) const { return sector_matrix(s, [](double l, bool h) { return h ? 0.0 : 1.0 / l; }); }

 private:
  template <class Fn>
  VectorXc apply(Fn fn, const VectorXc& f) const
  {
    if (f.size() != dim_) throw std::invalid_argument("HodgeData: vector does not live on E1");
    VectorXc out = VectorXc::Zero(dim_);
    for (const auto& b : blocks_) {
      VectorXc c = b.evecs.adjoint() * gather(f, b.idx);
      for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= fn(b.evals[k], k < b.kernel_dim);
      scatter_add(out, b.idx, b.evecs * c);
    }
    return out;
  }

  template <class Fn>
  MatrixXc sector_matrix(std::size_t s, Fn fn) const
  {
    const auto& b = blocks_.at(s);
    Eigen::VectorXd d(b.evals.size());
    for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = fn(b.evals[k], k < b.kernel_dim);
    return b.evecs * d.asDiagonal() * b.evecs.adjoint();
  }

  int dim_;
  HodgeOptions opt_;
  std::vector<SectorSpectrum> blocks_;
  double lambda_max_ = 0, threshold_ = 0, min_nonzero_ = 0, max_zero_ = 0;
  int harmonic_dim_ = 0;
};

/// Largest sine of the principal angles between two orthonormal column spaces;
/// 1 when the dimensions differ.
inline double principal_angle_sine(const MatrixXc& U, const MatrixXc& V)
{
  if (U.cols() != V.cols()) return 1.0;
  if (U.cols() == 0) return 0.0;
  const MatrixXc R = V - U * (U.adjoint() * V);
  Eigen::JacobiSVD<MatrixXc> svd(R);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

struct KernelCrossCheck
{
  int box_kernel_dim = 0;
  int intersection_dim = 0;  // dim ker D* cap ker dbar1
  double max_angle_sine = 0;  // worst sector
};

/// ker box against ker D* cap ker dbar1, computed from D D* + dbar1* dbar1
/// (no L), sector by sector, with the same relative threshold.
inline KernelCrossCheck kernel_cross_check(const GalerkinComplex& gc, const HodgeData& hd, double rel_threshold = 1e-9)
{
  const SparseXc K = detail::prune(gc.DDstar() + SparseXc(gc.delbar1().m.adjoint() * gc.delbar1().m));
  std::vector<Eigen::SelfAdjointEigenSolver<MatrixXc>> solvers;
  double lmax = 0;
  for (const auto& b : hd.sectors()) {
    solvers.emplace_back(dense_block(K, b.idx, b.idx));
    lmax = std::max(lmax, solvers.back().eigenvalues().cwiseAbs().maxCoeff());
  }
  KernelCrossCheck out;
  for (std::size_t s = 0; s < hd.sectors().size(); ++s) {
    const auto& b = hd.sectors()[s];
    const auto& ev = solvers[s].eigenvalues();
    int kd = 0;
    while (kd < ev.size() && ev[kd] < rel_threshold * lmax) ++kd;
    out.box_kernel_dim += b.kernel_dim;
    out.intersection_dim += kd;
    const double a = principal_angle_sine(b.evecs.leftCols(b.kernel_dim), solvers[s].eigenvectors().leftCols(kd));
    out.max_angle_sine = std::max(out.max_angle_sine, a);
  }
  return out;
}

struct MainEstimateResult
{
  int N = 0;
  double c_N = 0;
  VectorXc minimizer;  // normalized to ||phi||_2 = 1
  double minimizer_quotient = 0;  // recomputed from the global matrices
  SectorKey minimizer_sector{0, 0};
};

/// c_N = min over truncated E1 of ((phi, box phi) + ||phi||_1^2) / ||phi||_2^2,
/// as the smallest generalized eigenvalue of (box + G1, G2).
inline MainEstimateResult certify_main_estimate(const GalerkinComplex& gc)
{
  const SparseXc A = detail::prune(gc.box().m + gc.E1_gram(1));
  const SparseXc G2 = gc.E1_gram(2);
  MainEstimateResult res;
  res.N = gc.N();
  res.c_N = std::numeric_limits<double>::infinity();
  for (const auto& [key, idx] : gc.E1().sectors()) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXc> es(dense_block(A, idx, idx), dense_block(G2, idx, idx));
    if (es.info() != Eigen::Success) throw std::runtime_error("certify_main_estimate: eigen-solver failure");
    if (es.eigenvalues()[0] < res.c_N) {
      res.c_N = es.eigenvalues()[0];
      res.minimizer = VectorXc::Zero(gc.E1().dim());
      scatter_add(res.minimizer, idx, es.eigenvectors().col(0));
      res.minimizer_sector = key;
    }
  }
  const double n2 = res.minimizer.dot(G2 * res.minimizer).real();
  res.minimizer /= std::sqrt(n2);
  res.minimizer_quotient = res.minimizer.dot(A * res.minimizer).real() / res.minimizer.dot(G2 * res.minimizer).real();
  return res;
}

/// min over u orthogonal to ker box of (|D* u|^2 + |dbar1 u|_1^2) / |u|_1^2.
inline double coercivity_probe(const GalerkinComplex& gc, const HodgeData& hd)
{
  const SparseXc G1 = gc.E1_gram(1);
  const SparseXc& box = gc.box().m;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : hd.sectors()) {
    const Eigen::Index r = b.evecs.cols() - b.kernel_dim;
    if (r == 0) continue;
    const MatrixXc Q = b.evecs.rightCols(r);
    const MatrixXc A = Q.adjoint() * dense_block(box, b.idx, b.idx) * Q;
    const MatrixXc G = Q.adjoint() * dense_block(G1, b.idx, b.idx) * Q;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXc> es(A, G);
    best = std::min(best, es.eigenvalues()[0]);
  }
  return best;
}

}  // namespace crdeform
