#pragma once

// Galerkin truncations of the deformation complex on the Hermite basis.
//
// Spaces at truncation N:
//   F  : one scalar slot u on S(N-4)          (section u xi)
//   E1 : three slots (a, b, c) on S(N), a = phi^1_1, b = sqrt2 phi^1_2 = sqrt2 phi^2_1, c = phi^2_2
//   E2 : two slots (psi^1_12, psi^2_12) on S(N+2)
// The sqrt2 makes the E1 coordinates orthonormal for the four-slot norm.
// Each frame field raises the Hermite degree by at most two, so with these
// levels D : F -> E1 and dbar1 : E1 -> E2 are represented without truncation
// and dbar1 D = 0 holds for the matrices. The adjoints are conjugate
// transposes, i.e. the continuum adjoints followed by orthogonal projection.
//
// Every operator commutes with the U(1)^2 action, so matrices split into
// charge sectors; a sector is labeled by the charge of the underlying F
// element (slot charge minus the slot's fixed shift).

#include "crdeform/hermite_basis.hpp"
#include "crdeform/vector_form.hpp"

#include <unsupported/Eigen/SparseExtra>

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace crdeform {

enum class SpaceKind { F, E1, E2 };

using SectorKey = std::pair<int, int>;

inline const char* space_kind_name(SpaceKind k)
{
  switch (k) {
    case SpaceKind::F: return "F";
    case SpaceKind::E1: return "E1";
    case SpaceKind::E2: return "E2";
  }
  return "?";
}

class GalerkinSpace
{
 public:
  GalerkinSpace() = default;
  GalerkinSpace(SpaceKind kind, int level) : kind_(kind), level_(level)
  {
    if (level >= 0) scalar_ = ScalarSpace::get(level);
    const int n = scalar_dim();
    for (int s = 0; s < slots(); ++s) {
      const auto sh = shift(s);
      for (int i = 0; i < n; ++i) {
        const auto& h = (*scalar_)[i];
        sectors_[{h.charge1() - sh.first, h.charge2() - sh.second}].push_back(s * n + i);
      }
    }
  }

  SpaceKind kind() const { return kind_; }
  int level() const { return level_; }
  int slots() const { return kind_ == SpaceKind::F ? 1 : kind_ == SpaceKind::E1 ? 3 : 2; }
  int scalar_dim() const { return scalar_ ? scalar_->dim() : 0; }
  int dim() const { return slots() * scalar_dim(); }
  const ScalarSpace& scalar() const { return *scalar_; }
  int index(int slot, int i) const { return slot * scalar_dim() + i; }

  /// Charge shift of a slot relative to the sector label.
  SectorKey shift(int slot) const
  {
    switch (kind_) {
      case SpaceKind::F: return {0, 0};
      case SpaceKind::E1: return slot == 0 ? SectorKey{2, 0} : slot == 1 ? SectorKey{1, 1} : SectorKey{0, 2};
      case SpaceKind::E2: return slot == 0 ? SectorKey{2, 1} : SectorKey{1, 2};
    }
    return {0, 0};
  }

  const std::map<SectorKey, std::vector<int>>& sectors() const { return sectors_; }
  const std::vector<int>& sector(const SectorKey& k) const
  {
    static const std::vector<int> empty;
    auto it = sectors_.find(k);
    return it == sectors_.end() ? empty : it->second;
  }

  std::string name() const { return std::string(space_kind_name(kind_)) + "(" + std::to_string(level_) + ")"; }

  friend bool operator==(const GalerkinSpace& a, const GalerkinSpace& b)
  {
    return a.kind_ == b.kind_ && a.level_ == b.level_;
  }
  friend bool operator!=(const GalerkinSpace& a, const GalerkinSpace& b) { return !(a == b); }

 private:
  SpaceKind kind_ = SpaceKind::F;
  int level_ = -1;
  std::shared_ptr<const ScalarSpace> scalar_;
  std::map<SectorKey, std::vector<int>> sectors_;
};

struct OperatorMatrix
{
  GalerkinSpace domain, codomain;
  SparseXc m;
  bool exact = true;  // no part of the image was cut off by the truncation

  OperatorMatrix adjoint() const { return {codomain, domain, SparseXc(m.adjoint()), exact}; }
  VectorXc apply(const VectorXc& v) const
  {
    if (v.size() != domain.dim()) throw std::invalid_argument("OperatorMatrix::apply: vector does not live on " + domain.name());
    return m * v;
  }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b)
  {
    if (a.domain != b.codomain) throw std::invalid_argument("OperatorMatrix: incompatible spaces " + a.domain.name() + " and " + b.codomain.name());
    return {b.domain, a.codomain, SparseXc(a.m * b.m), a.exact && b.exact};
  }
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b)
  {
    if (a.domain != b.domain || a.codomain != b.codomain) throw std::invalid_argument("OperatorMatrix: incompatible spaces in sum");
    return {a.domain, a.codomain, SparseXc(a.m + b.m), a.exact && b.exact};
  }
};

namespace detail {

using SlotBlock = std::tuple<int, int, Complex, SparseXc>;  // row slot, col slot, factor, scalar block

inline SparseXc assemble_slots(int rows, int row_slot_dim, int cols, int col_slot_dim, const std::vector<SlotBlock>& blocks)
{
  std::vector<Eigen::Triplet<Complex>> trips;
  for (const auto& [rs, cs, f, M] : blocks)
    for (int k = 0; k < M.outerSize(); ++k)
      for (SparseXc::InnerIterator it(M, k); it; ++it)
        trips.emplace_back(rs * row_slot_dim + static_cast<int>(it.row()), cs * col_slot_dim + static_cast<int>(it.col()),
                           f * it.value());
  SparseXc out(rows, cols);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

inline SparseXc identity(int n)
{
  SparseXc I(n, n);
  I.setIdentity();
  return I;
}

inline SparseXc prune(SparseXc M)
{
  M.prune(Complex(0), 1e-300);
  M.makeCompressed();
  return M;
}

}  // namespace detail

/// Gram matrix on S(n) of ||u||_{k,m}^2 = sum_{l<=m} sum_{j<=k} ||nabla^l nabla_H^j u||^2.
/// Exact: each letter maps S(p) into S(p+2) without loss.
inline SparseXc scalar_norm_gram(int n, int k, int m)
{
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, SparseXc> memo;  // (kind, n, j, m)

  // kind 0: A(n, l) over all letters; kind 1: T(n, j, m) over H letters on top of C(., m)
  std::function<SparseXc(int, int, int, int)> get = [&](int kind, int p, int j, int mm) -> SparseXc {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find({kind, p, j, mm});
      if (it != memo.end()) return it->second;
    }
    const int dim = ScalarSpace::get(p)->dim();
    SparseXc out(dim, dim);
    if (kind == 0) {
      if (j == 0) out = detail::identity(dim);
      else {
        const SparseXc inner = get(0, p + 2, j - 1, 0);
        for (FrameField X : {FrameField::Xi, FrameField::E1, FrameField::E2, FrameField::EB1, FrameField::EB2}) {
          const SparseXc L = letter_matrix(X, p, p + 2);
          out += SparseXc(L.adjoint() * inner * L);
        }
      }
    } else {
      if (j == 0) {
        for (int l = 0; l <= mm; ++l) out += get(0, p, l, 0);
      } else {
        const SparseXc inner = get(1, p + 2, j - 1, mm);
        for (FrameField X : {FrameField::E1, FrameField::E2, FrameField::EB1, FrameField::EB2}) {
          const SparseXc L = letter_matrix(X, p, p + 2);
          out += SparseXc(L.adjoint() * inner * L);
        }
      }
    }
    out = detail::prune(out);
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(std::make_tuple(kind, p, j, mm), out);
    return out;
  };

  SparseXc total(ScalarSpace::get(n)->dim(), ScalarSpace::get(n)->dim());
  for (int j = 0; j <= k; ++j) total += get(1, n, j, m);
  return detail::prune(total);
}

/// ||v||_{k,m}^2 for a vector on a Galerkin space, slot by slot, by pushing
/// the vector through every word (cheaper than the Gram matrix for one-off use).
inline double mixed_norm_squared(const VectorXc& v, const GalerkinSpace& space, int k, int m)
{
  if (k < 0 || m < 0) throw std::invalid_argument("mixed_norm: derivative counts must be nonnegative");
  const int n = space.scalar_dim();
  double total = 0;
  for (int s = 0; s < space.slots(); ++s) {
    std::vector<VectorXc> h_level{v.segment(s * n, n)};
    int lev = space.level();
    for (int j = 0; j <= k; ++j) {
      if (j > 0) {
        std::vector<VectorXc> next;
        for (const auto& w : h_level)
          for (FrameField X : {FrameField::E1, FrameField::E2, FrameField::EB1, FrameField::EB2})
            next.push_back(letter_matrix(X, lev, lev + 2) * w);
        h_level = std::move(next);
        lev += 2;
      }
      std::vector<VectorXc> level = h_level;
      int lev2 = lev;
      for (int l = 0; l <= m; ++l) {
        if (l > 0) {
          std::vector<VectorXc> next;
          for (const auto& w : level)
            for (FrameField X : {FrameField::Xi, FrameField::E1, FrameField::E2, FrameField::EB1, FrameField::EB2})
              next.push_back(letter_matrix(X, lev2, lev2 + 2) * w);
          level = std::move(next);
          lev2 += 2;
        }
        for (const auto& w : level) total += w.squaredNorm();
      }
    }
  }
  return total;
}

/// The truncated complex F(N-4) -> E1(N) -> E2(N+2) with its operators.
class GalerkinComplex
{
 public:
  explicit GalerkinComplex(int N) : N_(N), F_(SpaceKind::F, N - 4), E1_(SpaceKind::E1, N), E2_(SpaceKind::E2, N + 2)
  {
    if (N < 2) throw std::invalid_argument("GalerkinComplex: truncation degree must be at least 2");
    const Complex i(0, 1);
    const double r2 = std::sqrt(2.0);
    const int nE1 = E1_.scalar_dim(), nE2 = E2_.scalar_dim();

    // D u = i eb_b eb_a u
    if (F_.dim() > 0) {
      const int nF = F_.scalar_dim();
      const SparseXc eb1 = letter_matrix(FrameField::EB1, N - 2, N) * letter_matrix(FrameField::EB1, N - 4, N - 2);
      const SparseXc eb12 = letter_matrix(FrameField::EB1, N - 2, N) * letter_matrix(FrameField::EB2, N - 4, N - 2);
      const SparseXc eb2 = letter_matrix(FrameField::EB2, N - 2, N) * letter_matrix(FrameField::EB2, N - 4, N - 2);
      D_ = {F_, E1_,
            detail::assemble_slots(E1_.dim(), nE1, F_.dim(), nF, {{0, 0, i, eb1}, {1, 0, i * r2, eb12}, {2, 0, i, eb2}}), true};
    } else {
      D_ = {F_, E1_, SparseXc(E1_.dim(), 0), true};
    }

    // (B phi)^1 = eb1 b / sqrt2 - eb2 a,  (B phi)^2 = eb1 c - eb2 b / sqrt2
    const SparseXc e1 = letter_matrix(FrameField::EB1, N, N + 2), e2 = letter_matrix(FrameField::EB2, N, N + 2);
    B_ = {E1_, E2_,
          detail::assemble_slots(E2_.dim(), nE2, E1_.dim(), nE1,
                                 {{0, 1, Complex(1 / r2), e1}, {0, 0, Complex(-1), e2}, {1, 2, Complex(1), e1}, {1, 1, Complex(-1 / r2), e2}}),
          true};

    // L on E2 slots equals the first Folland-Stein Gram matrix
    const SparseXc Ls = scalar_norm_gram(N + 2, 1, 0);
    L_ = {E2_, E2_, detail::assemble_slots(E2_.dim(), nE2, E2_.dim(), nE2, {{0, 0, Complex(1), Ls}, {1, 1, Complex(1), Ls}}), true};

    DDh_ = detail::prune(D_.m * D_.m.adjoint());
    BhLB_ = detail::prune(B_.m.adjoint() * L_.m * B_.m);
    box_ = {E1_, E1_, detail::prune(DDh_ + BhLB_), true};
  }

  int N() const { return N_; }
  const GalerkinSpace& F() const { return F_; }
  const GalerkinSpace& E1() const { return E1_; }
  const GalerkinSpace& E2() const { return E2_; }

  const OperatorMatrix& D() const { return D_; }
  OperatorMatrix D_star() const { return D_.adjoint(); }
  const OperatorMatrix& delbar1() const { return B_; }
  OperatorMatrix delbar1_star() const { return B_.adjoint(); }
  const OperatorMatrix& L() const { return L_; }
  const OperatorMatrix& box() const { return box_; }
  const SparseXc& DDstar() const { return DDh_; }
  const SparseXc& delbar1_star_L_delbar1() const { return BhLB_; }

  /// Folland-Stein (k, m) Gram matrix on E1 coordinates.
  SparseXc E1_gram(int k, int m = 0) const
  {
    const SparseXc G = scalar_norm_gram(N_, k, m);
    const int n = E1_.scalar_dim();
    return detail::assemble_slots(E1_.dim(), n, E1_.dim(), n, {{0, 0, Complex(1), G}, {1, 1, Complex(1), G}, {2, 2, Complex(1), G}});
  }

  /// Lookup by name: D, D*, delbar1, delbar1*, L, box.
  OperatorMatrix assemble(const std::string& name) const
  {
    if (name == "D") return D_;
    if (name == "D*") return D_star();
    if (name == "delbar1") return B_;
    if (name == "delbar1*") return delbar1_star();
    if (name == "L") return L_;
    if (name == "box") return box_;
    throw std::invalid_argument("assemble: unknown operator '" + name + "'");
  }

 private:
  int N_;
  GalerkinSpace F_, E1_, E2_;
  OperatorMatrix D_, B_, L_, box_;
  SparseXc DDh_, BhLB_;
};

/// Dense sub-block M[rows, cols] of a sparse matrix.
inline MatrixXc dense_block(const SparseXc& M, const std::vector<int>& rows, const std::vector<int>& cols)
{
  std::vector<int> pos(static_cast<std::size_t>(M.rows()), -1);
  for (std::size_t r = 0; r < rows.size(); ++r) pos[static_cast<std::size_t>(rows[r])] = static_cast<int>(r);
  MatrixXc out = MatrixXc::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (SparseXc::InnerIterator it(M, cols[c]); it; ++it) {
      const int r = pos[static_cast<std::size_t>(it.row())];
      if (r >= 0) out(r, static_cast<Eigen::Index>(c)) = it.value();
    }
  return out;
}

inline VectorXc gather(const VectorXc& v, const std::vector<int>& idx)
{
  VectorXc out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[idx[k]];
  return out;
}

inline void scatter_add(VectorXc& v, const std::vector<int>& idx, const VectorXc& part)
{
  for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] += part[static_cast<Eigen::Index>(k)];
}

/// E1 coordinates <-> symbolic numeric form (phi^1_2 = phi^2_1 = b / sqrt2).
inline VectorValuedForm<Complex> e1_to_form(const VectorXc& v, const GalerkinSpace& E1)
{
  const int n = E1.scalar_dim();
  const auto& S = E1.scalar();
  VectorValuedForm<Complex> phi(1);
  phi.at(1, 0) = synthesize(v.segment(0, n), S);
  phi.at(1, 1) = synthesize(v.segment(n, n), S) * Complex(1 / std::sqrt(2.0));
  phi.at(2, 0) = phi.at(1, 1);
  phi.at(2, 1) = synthesize(v.segment(2 * n, n), S);
  return phi;
}

/// Orthogonal projection of a 0T'-valued one-form onto E1 coordinates (symmetrizes phi^1_2, phi^2_1).
inline VectorXc form_to_e1(const VectorValuedForm<Complex>& phi, const GalerkinSpace& E1)
{
  const int n = E1.scalar_dim();
  const auto& S = E1.scalar();
  VectorXc v(E1.dim());
  v.segment(0, n) = project(phi.at(1, 0), S);
  v.segment(n, n) = (project(phi.at(1, 1), S) + project(phi.at(2, 0), S)) / std::sqrt(2.0);
  v.segment(2 * n, n) = project(phi.at(2, 1), S);
  return v;
}

/// E2 coordinates of the 0T' part of a degree-2 form.
inline VectorXc form_to_e2(const VectorValuedForm<Complex>& psi, const GalerkinSpace& E2)
{
  const int n = E2.scalar_dim();
  VectorXc v(E2.dim());
  v.segment(0, n) = project(psi.at(1, 0), E2.scalar());
  v.segment(n, n) = project(psi.at(2, 0), E2.scalar());
  return v;
}

inline VectorValuedForm<Complex> e2_to_form(const VectorXc& v, const GalerkinSpace& E2)
{
  const int n = E2.scalar_dim();
  VectorValuedForm<Complex> psi(2);
  psi.at(1, 0) = synthesize(v.segment(0, n), E2.scalar());
  psi.at(2, 0) = synthesize(v.segment(n, n), E2.scalar());
  return psi;
}

/// Matrix Market dump for external inspection.
inline bool save_matrix_market(const OperatorMatrix& op, const std::string& path)
{
  return Eigen::saveMarket(op.m, path);
}

}  // namespace crdeform
