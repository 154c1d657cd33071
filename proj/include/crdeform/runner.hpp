#pragma once

// Command suites. Each check is a named function of a shared run context;
// commands select checks by group and --check filters by id prefix.

#include "crdeform/config.hpp"
#include "crdeform/frame_operator.hpp"
#include "crdeform/majorant.hpp"
#include "crdeform/norms.hpp"
#include "crdeform/probes.hpp"
#include "crdeform/report.hpp"
#include "crdeform/rumin.hpp"

#include <functional>
#include <memory>
#include <set>

namespace crdeform {

/// Degrees of the exact symbolic samples.
inline constexpr int kExactSampleDegree = 6;

class RunContext
{
 public:
  explicit RunContext(const RunConfig& cfg) : cfg_(cfg) {}

  const RunConfig& config() const { return cfg_; }

  const GalerkinComplex& complex(int N)
  {
    auto& p = complexes_[N];
    if (!p) p = std::make_unique<GalerkinComplex>(N);
    return *p;
  }

  const HodgeData& hodge(int N)
  {
    auto& p = hodges_[N];
    if (!p) p = std::make_unique<HodgeData>(complex(N), HodgeOptions{cfg_.kernel_threshold, 10});
    return *p;
  }

  const KuranishiMap& kuranishi_map()
  {
    if (!kmap_) kmap_ = std::make_unique<KuranishiMap>(complex(cfg_.degree), hodge(cfg_.degree));
    return *kmap_;
  }

  const KuranishiFamily& family()
  {
    if (!family_) {
      KuranishiOptions opt;
      opt.order = cfg_.order;
      opt.max_params = cfg_.kuranishi_params;
      family_ = std::make_unique<KuranishiFamily>(solve_kuranishi(kuranishi_map(), opt));
    }
    return *family_;
  }

  /// Independent stream per check id, so filters never shift other checks' samples.
  Rng rng(const std::string& id) const
  {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : id) h = (h ^ ch) * 1099511628211ull;
    return Rng(cfg_.seed, h);
  }

 private:
  const RunConfig& cfg_;
  std::map<int, std::unique_ptr<GalerkinComplex>> complexes_;
  std::map<int, std::unique_ptr<HodgeData>> hodges_;
  std::unique_ptr<KuranishiMap> kmap_;
  std::unique_ptr<KuranishiFamily> family_;
};

struct CheckSpec
{
  std::string id;
  std::string group;  // command that owns it
  std::function<CheckRecord(RunContext&)> fn;
};

namespace checks {

using Q = ComplexRational;

inline CheckRecord record(std::string id, bool ok, ojson measured, ojson tolerance, ojson truncation, std::string note = {})
{
  return {std::move(id), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(measured), std::move(tolerance),
          std::move(truncation), std::move(note)};
}

inline CheckRecord diagnostic(std::string id, ojson measured, ojson truncation, std::string note)
{
  return {std::move(id), CheckStatus::Diagnostic, std::move(measured), ojson::object(), std::move(truncation), std::move(note)};
}

inline ojson exact_truncation(int samples) { return {{"max_degree", kExactSampleDegree}, {"samples", samples}}; }
inline ojson galerkin_truncation(int N) { return {{"N", N}}; }

inline ojson probe_json(const ProbeTable& t)
{
  return {{"m", t.m}, {"samples", t.samples}, {"max_ratio", t.max_ratio}, {"mean_ratio", t.mean_ratio}};
}

// ---- deformation complex (exact)

inline CheckRecord delbar_square_zero(RunContext& ctx)
{
  const std::string id = "complex.delbar_square_zero";
  Rng rng = ctx.rng(id);
  const int n = ctx.config().samples;
  int bad0 = 0, bad1 = 0;
  for (int s = 0; s < n; ++s) {
    FrameVector<Q> Y;
    for (int k = 0; k < 3; ++k) Y.c[static_cast<std::size_t>(k)] = random_exact_function(rng, kExactSampleDegree, 3);
    bad0 += delbar_p(delbar_T(Y)).is_zero() ? 0 : 1;
    bad1 += delbar_p(delbar_p(random_exact_form(rng, 1, kExactSampleDegree, 3, false))).is_zero() ? 0 : 1;
  }
  const bool op = (ops::delbar_1<Q>() * ops::delbar_T<Q>()).is_zero();
  return record(id, bad0 == 0 && bad1 == 0 && op,
                {{"nonzero_p0", bad0}, {"nonzero_p1", bad1}, {"operator_identity_zero", op}},
                {{"exact", true}}, exact_truncation(n));
}

inline CheckRecord delbar1_D(RunContext& ctx)
{
  const std::string id = "complex.delbar1_D";
  Rng rng = ctx.rng(id);
  const int n = ctx.config().samples;
  int bad = 0;
  for (int s = 0; s < n; ++s) bad += delbar_p(D_op(random_exact_function(rng, kExactSampleDegree, 4))).is_zero() ? 0 : 1;
  const bool op = (ops::delbar_1<Q>() * ops::D<Q>()).is_zero();
  return record(id, bad == 0 && op, {{"nonzero", bad}, {"operator_identity_zero", op}}, {{"exact", true}},
                exact_truncation(n));
}

inline CheckRecord rho_defining(RunContext& ctx)
{
  const std::string id = "complex.rho_defining";
  Rng rng = ctx.rng(id);
  const int n = ctx.config().samples;
  int bad = 0;
  for (int s = 0; s < n; ++s) {
    const auto d = delbar_T(rho(random_exact_function(rng, kExactSampleDegree, 4)));
    bad += d.at(0, 0).is_zero() && d.at(0, 1).is_zero() ? 0 : 1;
  }
  // D(zb1^2 xi) = 2i e1 (x) thetabar^1
  const ExactFunction zb1 = ExactFunction::variable(Var::ZB1);
  VectorValuedForm<Q> expect(1);
  expect.at(1, 0) = ExactFunction::constant(Q(2) * Q::i());
  const bool example = D_op(zb1 * zb1) == expect;
  return record(id, bad == 0 && example, {{"nonzero_F_part", bad}, {"D_zb1_squared_matches", example}},
                {{"exact", true}}, exact_truncation(n));
}

inline CheckRecord E_characterization(RunContext& ctx)
{
  const std::string id = "complex.E_characterization";
  Rng rng = ctx.rng(id);
  const int n = ctx.config().samples;
  int disagree = 0, symmetric = 0, nonvacuous = 0;
  for (int s = 0; s < 2 * n; ++s) {
    auto phi = random_exact_form(rng, 1, 4, 2, true);
    if (s % 2 == 0) phi.at(2, 0) = phi.at(1, 1);
    const bool sym = phi.get(1, {2}) == phi.get(2, {1});
    symmetric += sym ? 1 : 0;
    disagree += is_in_E(phi) == sym ? 0 : 1;
  }
  for (int s = 0; s < n; ++s) nonvacuous += is_in_E(random_exact_form(rng, 2, 4, 2, true)) ? 0 : 1;
  return record(id, disagree == 0 && nonvacuous == 0,
                {{"degree1_forms", 2 * n}, {"degree1_symmetric", symmetric}, {"degree1_disagreements", disagree},
                 {"degree2_forms", n}, {"degree2_rejected", nonvacuous}},
                {{"exact", true}}, {{"max_degree", 4}, {"samples", 3 * n}});
}

/// sqrt(|a - b|^2 / |b|^2) with the exact pairing; 0 when a == b.
inline double relative_deviation(const ExactFunction& a, const ExactFunction& b)
{
  if (a == b) return 0.0;
  const ExactFunction d = a - b;
  const double num = inner_product(d, d).re().get_d(), den = inner_product(b, b).re().get_d();
  return den == 0 ? std::numeric_limits<double>::infinity() : std::sqrt(num / den);
}

inline CheckRecord dilation_adjoint(RunContext& ctx)
{
  const std::string id = "complex.dilation_adjoint";
  Rng rng = ctx.rng(id);
  const auto phi = random_exact_E1(rng, 3, 4);
  ojson dev = ojson::object();
  std::vector<double> d;
  for (int l : {2, 4, 8}) {
    const auto pl = normalized_dilation(phi, mpq_class(l));
    d.push_back(relative_deviation(D_star_engine(pl), D_star_formula(pl)));
    dev[std::to_string(l)] = d.back();
  }
  const bool monotone = d[0] >= d[1] && d[1] >= d[2];
  return record(id, monotone && d[2] < 0.1, {{"relative_deviation_by_lambda", dev}, {"non_increasing", monotone}},
                {{"at_lambda_8", 0.1}}, {{"max_degree", 3}, {"lambda", {2, 4, 8}}},
                "engine adjoint against the pointwise top-weight formula");
}

// ---- main estimate and norms

inline std::vector<int> estimate_degrees(int N)
{
  std::vector<int> out;
  for (int n : {N - 2, N, N + 2})
    if (n >= 2) out.push_back(n);
  return out;
}

inline CheckRecord main_estimate(RunContext& ctx)
{
  const std::string id = "estimate.main_estimate";
  const auto& cfg = ctx.config();
  ojson cn = ojson::object(), q = ojson::object();
  bool ok = true;
  for (int N : estimate_degrees(cfg.degree)) {
    const auto res = certify_main_estimate(ctx.complex(N));
    cn[std::to_string(N)] = res.c_N;
    q[std::to_string(N)] = res.minimizer_quotient;
    const double rel = std::abs(res.minimizer_quotient - res.c_N) / res.c_N;
    ok = ok && res.c_N >= cfg.estimate_floor && rel < cfg.identity_tolerance;
  }
  return record(id, ok, {{"c_N", cn}, {"minimizer_quotient", q}},
                {{"floor", cfg.estimate_floor}, {"minimizer_relative", cfg.identity_tolerance}},
                {{"N", estimate_degrees(cfg.degree)}});
}

inline CheckRecord c_N_trend(RunContext& ctx)
{
  const std::vector<int> Ns = estimate_degrees(ctx.config().degree);
  ojson cn = ojson::object(), ratio = ojson::object();
  double prev = 0;
  for (int N : Ns) {
    const double c = certify_main_estimate(ctx.complex(N)).c_N;
    cn[std::to_string(N)] = c;
    if (prev > 0) ratio[std::to_string(N)] = c / prev;
    prev = c;
  }
  return diagnostic("estimate.c_N_trend", {{"c_N", cn}, {"ratio_to_previous", ratio}}, {{"N", Ns}},
                    "a finite truncation cannot certify the continuum constant");
}

inline CheckRecord coercivity(RunContext& ctx)
{
  const int N = ctx.config().degree;
  return diagnostic("estimate.coercivity", {{"min_quotient", coercivity_probe(ctx.complex(N), ctx.hodge(N))}},
                    galerkin_truncation(N), "min (|D* u|^2 + |dbar1 u|_1^2) / |u|_1^2 off ker box");
}

inline CheckRecord operator_symmetry(RunContext& ctx)
{
  const auto& cfg = ctx.config();
  const auto& gc = ctx.complex(cfg.degree);
  const double l = SparseXc(gc.L().m - SparseXc(gc.L().m.adjoint())).norm() / gc.L().m.norm();
  const double b = SparseXc(gc.box().m - SparseXc(gc.box().m.adjoint())).norm() / gc.box().m.norm();
  const double bd = gc.delbar1().m.rows() && gc.D().m.cols() ? SparseXc(gc.delbar1().m * gc.D().m).norm() : 0.0;
  return record("norms.operator_symmetry", l < cfg.projector_tolerance && b < cfg.projector_tolerance && bd < cfg.identity_tolerance,
                {{"L_asymmetry", l}, {"box_asymmetry", b}, {"delbar1_D_norm", bd}},
                {{"asymmetry", cfg.projector_tolerance}, {"delbar1_D", cfg.identity_tolerance}},
                galerkin_truncation(cfg.degree), "relative Frobenius norms");
}

// ---- Hodge theory

inline CheckRecord hodge_kernel(RunContext& ctx)
{
  const int N = ctx.config().degree;
  const auto& hd = ctx.hodge(N);
  return record("hodge.kernel", hd.gap_ok(),
                {{"E1_dim", hd.dim()},
                 {"harmonic_dim", hd.harmonic_dim()},
                 {"lambda_max", hd.lambda_max()},
                 {"threshold", hd.threshold()},
                 {"max_kernel_eigenvalue", hd.max_kernel_eigenvalue()},
                 {"min_nonzero_eigenvalue", hd.min_nonzero_eigenvalue()}},
                {{"relative_threshold", ctx.config().kernel_threshold}, {"gap_factor", 10}}, galerkin_truncation(N));
}

inline CheckRecord hodge_decomposition(RunContext& ctx)
{
  const std::string id = "hodge.decomposition";
  const auto& cfg = ctx.config();
  const auto& gc = ctx.complex(cfg.degree);
  const auto& hd = ctx.hodge(cfg.degree);
  Rng rng = ctx.rng(id);
  double r1 = 0, r2 = 0;
  for (int s = 0; s < cfg.samples; ++s) {
    const VectorXc f = random_coefficients(rng, gc.E1().dim());
    const VectorXc Hf = hd.harmonic_projection(f);
    r1 = std::max(r1, (f - Hf - gc.box().m * hd.neumann(f)).norm() / f.norm());
    r2 = std::max(r2, (f - Hf - hd.neumann(gc.box().m * f)).norm() / f.norm());
  }
  return record(id, r1 < cfg.identity_tolerance && r2 < cfg.identity_tolerance,
                {{"box_N_residual", r1}, {"N_box_residual", r2}}, {{"relative", cfg.identity_tolerance}},
                {{"N", cfg.degree}, {"samples", cfg.samples}});
}

inline CheckRecord hodge_projectors(RunContext& ctx)
{
  const auto& cfg = ctx.config();
  const auto& hd = ctx.hodge(cfg.degree);
  double nh = 0, hn = 0;
  for (std::size_t s = 0; s < hd.sectors().size(); ++s) {
    const MatrixXc H = hd.sector_H(s), Nm = hd.sector_N(s);
    nh = std::max(nh, (Nm * H).norm());
    hn = std::max(hn, (H * Nm).norm());
  }
  return record("hodge.projector_products", nh < cfg.projector_tolerance && hn < cfg.projector_tolerance,
                {{"NH_norm", nh}, {"HN_norm", hn}}, {{"absolute", cfg.projector_tolerance}},
                galerkin_truncation(cfg.degree), "Frobenius norms, an upper bound for the operator norm");
}

inline CheckRecord hodge_commutator(RunContext& ctx)
{
  const std::string id = "hodge.commutator";
  const auto& cfg = ctx.config();
  const auto& gc = ctx.complex(cfg.degree);
  const auto& hd = ctx.hodge(cfg.degree);
  Rng rng = ctx.rng(id);
  double worst = 0;
  for (int s = 0; s < cfg.samples; ++s) {
    const VectorXc v = random_coefficients(rng, gc.E1().dim());
    const VectorXc c = hd.neumann(gc.DDstar() * v) - gc.DDstar() * hd.neumann(v);
    worst = std::max(worst, c.norm() / v.norm());
  }
  return record(id, worst < cfg.commutator_tolerance, {{"max_relative", worst}},
                {{"relative", cfg.commutator_tolerance}}, {{"N", cfg.degree}, {"samples", cfg.samples}},
                "[N, D D*]");
}

inline CheckRecord hodge_kernel_cross_check(RunContext& ctx)
{
  const auto& cfg = ctx.config();
  const auto x = kernel_cross_check(ctx.complex(cfg.degree), ctx.hodge(cfg.degree), cfg.kernel_threshold);
  return record("hodge.kernel_cross_check",
                x.box_kernel_dim == x.intersection_dim && x.max_angle_sine < cfg.angle_tolerance,
                {{"box_kernel_dim", x.box_kernel_dim},
                 {"intersection_dim", x.intersection_dim},
                 {"max_principal_angle_sine", x.max_angle_sine}},
                {{"angle_sine", cfg.angle_tolerance}}, galerkin_truncation(cfg.degree),
                "ker box against ker D* and ker dbar1");
}

inline CheckRecord neumann_gain(RunContext& ctx)
{
  const std::string id = "hodge.neumann_gain_probe";
  const auto& cfg = ctx.config();
  Rng rng = ctx.rng(id);
  ojson rows = ojson::array();
  for (int m : {0, 1})
    rows.push_back(probe_json(neumann_gain_probe(ctx.complex(cfg.degree), ctx.hodge(cfg.degree), rng, cfg.samples, m)));
  return diagnostic(id, {{"rows", rows}}, galerkin_truncation(cfg.degree), "|N psi|_{4,m} / |psi|_{0,m}");
}

inline CheckRecord r2_bound(RunContext& ctx)
{
  const std::string id = "hodge.r2_bound_probe";
  const auto& cfg = ctx.config();
  Rng rng = ctx.rng(id);
  ojson rows = ojson::array();
  for (int m : {0, 1}) rows.push_back(probe_json(r2_bound_probe(ctx.kuranishi_map(), rng, cfg.samples, m)));
  return diagnostic(id, {{"rows", rows}}, galerkin_truncation(cfg.degree), "|dbar1* L R2(phi)|_{0,m} / |phi|_{4,m}^2");
}

// ---- Kuranishi family

inline ojson kuranishi_truncation(RunContext& ctx)
{
  return {{"N", ctx.config().degree}, {"M", ctx.config().order}, {"r", ctx.family().phi.params()}};
}

inline CheckRecord kuranishi_family(RunContext& ctx)
{
  const std::string id = "kuranishi.family";
  const auto& cfg = ctx.config();
  const auto& fam = ctx.family();
  if (fam.rigid())
    return diagnostic(id, {{"harmonic_dim", ctx.hodge(cfg.degree).harmonic_dim()}, {"rigid", true}},
                      kuranishi_truncation(ctx), "no harmonic tensors in this truncation; the family is rigid");
  const auto res = kuranishi_residuals(ctx.kuranishi_map(), fam);
  const bool ok = res.banach_residual < cfg.identity_tolerance && res.linear_residual == 0 &&
                  res.delbar_residual < cfg.identity_tolerance && res.obstruction_identity < cfg.identity_tolerance &&
                  res.obstruction_low_order == 0;
  return record(id, ok,
                {{"rigid", false},
                 {"banach_residual", res.banach_residual},
                 {"linear_residual", res.linear_residual},
                 {"delbar_residual", res.delbar_residual},
                 {"obstruction_identity", res.obstruction_identity},
                 {"obstruction_low_order", res.obstruction_low_order}},
                {{"residual", cfg.identity_tolerance}, {"linear", 0}, {"low_order_obstruction", 0}},
                kuranishi_truncation(ctx), "residuals recomputed from phi(t) at roots of unity");
}

inline CheckRecord kuranishi_picard(RunContext& ctx)
{
  const std::string id = "kuranishi.picard";
  const auto& cfg = ctx.config();
  const auto& fam = ctx.family();
  if (fam.rigid()) return diagnostic(id, {{"rigid", true}}, kuranishi_truncation(ctx), "nothing to iterate");
  const auto it = picard_iterates(ctx.kuranishi_map(), fam.t_basis, cfg.order, cfg.order);
  double worst = 0;
  for (int m = 1; m <= cfg.order; ++m)
    for (const auto& a : multi_indices(fam.phi.params(), m))
      worst = std::max(worst, (it.back().coefficient(a) - fam.phi.coefficient(a)).norm());
  return record(id, worst < cfg.identity_tolerance, {{"iterations", cfg.order}, {"max_difference", worst}},
                {{"absolute", cfg.identity_tolerance}}, kuranishi_truncation(ctx),
                "Picard iteration against the order-by-order solve");
}

inline CheckRecord kuranishi_obstruction(RunContext& ctx)
{
  const auto& fam = ctx.family();
  ojson by_order = ojson::object();
  if (!fam.rigid())
    for (int m = 0; m <= fam.obstruction.order(); ++m) {
      double w = 0;
      for (const auto& a : multi_indices(fam.phi.params(), m)) w = std::max(w, fam.obstruction.coefficient(a).norm());
      by_order[std::to_string(m)] = w;
    }
  return diagnostic("kuranishi.obstruction", {{"max_norm_by_order", by_order}}, kuranishi_truncation(ctx),
                    "nonzero coefficients mean the truncated family is obstructed at that order");
}

inline CheckRecord majorant(RunContext& ctx)
{
  const auto& cfg = ctx.config();
  const MajorantSeries A = build_A(cfg.majorant_b, cfg.majorant_c, cfg.majorant_r, cfg.majorant_order);
  const mpq_class bc = cfg.majorant_b / cfg.majorant_c;
  ojson worst = ojson::object();
  bool ok = true;
  mpq_class scale = bc;
  for (int k = 2; k <= 4; ++k) {
    const auto rep = domination_report(series_power(A, k), scale * A);
    ok = ok && rep.holds;
    worst[std::to_string(k)] = rep.worst_ratio.get_d();
    scale *= bc;
  }
  return record("kuranishi.majorant", ok, {{"worst_ratio_by_power", worst}}, {{"ratio", 1}},
                {{"r", cfg.majorant_r}, {"order", cfg.majorant_order}},
                "A^k << (b/c)^(k-1) A coefficientwise in exact arithmetic");
}

// ---- Rumin bridge

inline CheckRecord rumin_KM(RunContext&)
{
  const auto K = canonical_KM<Q>();
  const bool closed = exterior_d(K).is_zero();
  return record("rumin.KM_closed", closed, {{"dK_zero", closed}}, {{"exact", true}}, ojson::object());
}

inline CheckRecord rumin_diagram(RunContext& ctx)
{
  const std::string id = "rumin.diagram";
  Rng rng = ctx.rng(id);
  const int n = ctx.config().samples;
  int bad0 = 0, bad1 = 0;
  for (int s = 0; s < n; ++s) {
    const auto u = random_exact_function(rng, 5, 4);
    bad0 += P_k(D_op(u)) == rumin_Dpp(P_0(u)) ? 0 : 1;
    const auto phi = random_exact_E1(rng, 4, 3);
    bad1 += P_k(delbar_p(phi)) == d_second(P_k(phi)) ? 0 : 1;
  }
  return record(id, bad0 == 0 && bad1 == 0, {{"P1_D_mismatches", bad0}, {"P2_delbar1_mismatches", bad1}},
                {{"exact", true}}, {{"max_degree", 5}, {"samples", n}});
}

inline CheckRecord rumin_square_zero(RunContext& ctx)
{
  const std::string id = "rumin.square_zero";
  Rng rng = ctx.rng(id);
  const int n = ctx.config().samples;
  int bad = 0;
  for (int s = 0; s < n; ++s) {
    bad += d_second(rumin_Dpp(P_0(random_exact_function(rng, 4, 4)))).is_zero() ? 0 : 1;
    bad += d_second(d_second(P_k(random_exact_E1(rng, 4, 3)))).is_zero() ? 0 : 1;
  }
  return record(id, bad == 0, {{"nonzero", bad}}, {{"exact", true}}, {{"max_degree", 4}, {"samples", n}});
}

inline CheckRecord rumin_rank(RunContext&)
{
  const auto r = pk_rank_check(2);
  return record("rumin.Pk_rank", r.full(),
                {{"P0", {{"size", r.size0}, {"rank", r.rank0}}},
                 {"P1", {{"size", r.size1}, {"rank", r.rank1}}},
                 {"P2", {{"size", r.size2}, {"rank", r.rank2}}}},
                {{"exact", true}}, {{"monomial_degree", 2}});
}

}  // namespace checks

/// Every check in execution order.
inline const std::vector<CheckSpec>& check_registry()
{
  using namespace checks;
  static const std::vector<CheckSpec> reg = {
      {"complex.delbar_square_zero", "verify-complex", delbar_square_zero},
      {"complex.delbar1_D", "verify-complex", delbar1_D},
      {"complex.rho_defining", "verify-complex", rho_defining},
      {"complex.E_characterization", "verify-complex", E_characterization},
      {"complex.dilation_adjoint", "verify-complex", dilation_adjoint},
      {"norms.operator_symmetry", "verify-estimate", operator_symmetry},
      {"estimate.main_estimate", "verify-estimate", main_estimate},
      {"estimate.c_N_trend", "verify-estimate", c_N_trend},
      {"estimate.coercivity", "verify-estimate", coercivity},
      {"hodge.kernel", "hodge", hodge_kernel},
      {"hodge.decomposition", "hodge", hodge_decomposition},
      {"hodge.projector_products", "hodge", hodge_projectors},
      {"hodge.commutator", "hodge", hodge_commutator},
      {"hodge.kernel_cross_check", "hodge", hodge_kernel_cross_check},
      {"hodge.neumann_gain_probe", "hodge", neumann_gain},
      {"hodge.r2_bound_probe", "hodge", r2_bound},
      {"kuranishi.family", "kuranishi", kuranishi_family},
      {"kuranishi.picard", "kuranishi", kuranishi_picard},
      {"kuranishi.obstruction", "kuranishi", kuranishi_obstruction},
      {"kuranishi.majorant", "kuranishi", majorant},
      {"rumin.KM_closed", "rumin-check", rumin_KM},
      {"rumin.diagram", "rumin-check", rumin_diagram},
      {"rumin.square_zero", "rumin-check", rumin_square_zero},
      {"rumin.Pk_rank", "rumin-check", rumin_rank},
  };
  return reg;
}

inline const std::vector<std::string>& command_names()
{
  static const std::vector<std::string> names = {"verify-complex", "verify-estimate", "hodge", "kuranishi", "rumin-check", "all"};
  return names;
}

/// A filter matches its exact id or any id below it ("hodge" matches "hodge.kernel").
inline bool filter_matches(const std::string& filter, const std::string& id)
{
  return id == filter || (id.size() > filter.size() && id.compare(0, filter.size(), filter) == 0 && id[filter.size()] == '.');
}

/// Runs a command. Throws ConfigError for an unknown command or a filter that
/// selects nothing; a numerical failure inside a check ends the run with
/// complete = false and the checks finished so far.
inline VerificationReport run(const std::string& command, const RunConfig& cfg)
{
  cfg.validate();
  if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
    throw ConfigError("unknown command '" + command + "'");
  std::vector<const CheckSpec*> selected;
  std::set<std::string> used;
  for (const auto& spec : check_registry()) {
    if (command != "all" && spec.group != command) continue;
    bool take = cfg.checks.empty();
    for (const auto& f : cfg.checks)
      if (filter_matches(f, spec.id)) take = true, used.insert(f);
    if (take) selected.push_back(&spec);
  }
  for (const auto& f : cfg.checks)
    if (!used.count(f)) throw ConfigError("check filter '" + f + "' selects nothing under '" + command + "'");

  VerificationReport rep;
  rep.command = command;
  rep.config = config_to_json(cfg);
  RunContext ctx(cfg);
  for (const auto* spec : selected) {
    try {
      rep.checks.push_back(spec->fn(ctx));
    } catch (const std::exception& e) {
      rep.complete = false;
      rep.error = spec->id + ": " + e.what();
      break;
    }
  }
  return rep;
}

/// 0 all gating checks pass, 1 a gating check failed, 3 numerical failure.
inline int exit_code(const VerificationReport& rep)
{
  if (!rep.complete) return 3;
  return rep.all_gating_pass() ? 0 : 1;
}

}  // namespace crdeform
