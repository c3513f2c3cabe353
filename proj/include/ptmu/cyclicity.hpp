#pragma once

#include "ptmu/quadrature.hpp"

#include <span>
#include <string>
#include <vector>

namespace ptmu {

struct DistanceCurve {
  std::vector<int> degrees;
  std::vector<double> values;  ///< d_N
  std::vector<double> squared; ///< d_N^2 before clamping at zero
  std::vector<std::vector<cplx>> coefficients;
  std::vector<double> jitter;
  GramProvenance provenance;
  bool iterative = false;
  double t = 2.0;
};

struct SolveReport {
  double jitter = 0.0;
  double squared = 0.0;
  std::vector<cplx> coefficients;
};

/// d_N^2 = ||1||^2 - b* c with c solving the leading (N+1) block, the monomials
/// taken in `order` (identity when empty). Cholesky in long double with
/// jitter escalation 1e-14 -> 1e-10 (relative to the largest diagonal entry).
SolveReport gram_distance(const GramSystem& gs, int N, std::span<const int> order = {});

DistanceCurve distance_curve(const GramSystem& gs, const std::vector<int>& degrees);
DistanceCurve distance_curve(const BoundedFunctionSpec& theta, const SpaceMeasure& mu,
                             const std::vector<int>& degrees, const QuadratureOptions& q = {});

/// t in [1, inf) by iteratively reweighted least squares on a fixed node set;
/// marked iterative.
DistanceCurve distance_curve_iterative(const BoundedFunctionSpec& theta, const SpaceMeasure& mu,
                                       const std::vector<int>& degrees, const QuadratureOptions& q = {},
                                       int iterations = 60);

struct CauchySolution {
  std::vector<cplx> G;
  double norm = 0.0;
  std::size_t cutoff = 0;
};

/// G_n = g_n / m_{2n}, ||G||^2 = sum |g_n|^2 / m_{2n}. Coefficients are cut
/// where the Sobolev tail at tau drops below 1e-10 of the head; throws
/// Error("insufficient-decay") if that happens only in the last quarter.
/// Coefficients below `noise` (and 1e-14 max|g_n|) count as zero in the test.
CauchySolution cauchy_solve_radial(std::span<const cplx> g, const RadialMoments& m, double tau, double noise = 0.0);

struct CertificateOptions {
  int cutoff_N = 4;
  int grid_log2 = 16;
  int basis_size = 8;
  int zero_order = 6;         ///< order of p's zeros at atoms of theta in E
  bool endpoint_zeros = true; ///< p also vanishes at endpoints of E
  int residual_order = 50;
  double residual_tol = 1e-6;
  double grid_tol = 1e-6;
};

/// F_p = P_+(theta conj(zeta p s H)) and its membership evidence.
struct KthetaFunctional {
  std::vector<cplx> p;
  std::vector<cplx> F; ///< nonnegative Fourier modes
  std::vector<double> residuals; ///< |<theta z^j, F_p>|, j = 0..residual_order
  double max_residual = 0.0;
  double grid_shift = 0.0;
  int grid = 0;
};

struct DualCertificate {
  double bound = 0.0;
  double F0 = 0.0;             ///< |F_p(0)| = |Lambda(1)|
  double norm = 0.0;           ///< ||G||_{mu,2}
  double disk_norm = 0.0;
  double boundary_norm = 0.0;
  double max_residual = 0.0;
  double grid_shift = 0.0;
  std::size_t disk_cutoff = 0;
  int basis_size = 0;
  int zero_order = 0;
  int cutoff_N = 0;
  int grid = 0;
  std::vector<cplx> p;
  std::vector<double> residuals;
};

/// Precomputed boundary samples shared by all functionals of one (theta, mu).
class CertificateContext {
public:
  CertificateContext(const BoundedFunctionSpec& theta, const SpaceMeasure& mu, const CertificateOptions& opts,
                     const QuadratureOptions& q = {});

  KthetaFunctional functional(std::span<const cplx> p) const;
  /// Coefficients of the off-carrier part of F_p (nonnegative modes).
  std::vector<cplx> off_carrier(std::span<const cplx> p) const;
  /// Bound on the sample error of the off-carrier part for p.
  double off_carrier_noise(std::span<const cplx> p) const;
  /// int_E |p|^2 min(1, w)^2 / w dm.
  double boundary_norm2(std::span<const cplx> p) const;
  /// Product basis z^k prod (z - zeta)^L over atoms in E and endpoints of E.
  std::vector<std::vector<cplx>> basis() const;
  const RadialMoments& moments() const { return moments_; }
  const CertificateOptions& options() const { return opts_; }
  const SpaceMeasure& mu() const { return mu_; }
  double tau() const { return 4.0 + 2.0 * mu_.disk_alpha; }

private:
  std::vector<cplx> transform(const std::vector<cplx>& samples, int stride) const;
  std::vector<cplx> samples(std::span<const cplx> p, bool off_only) const;

  BoundedFunctionSpec theta_;
  SpaceMeasure mu_;
  CertificateOptions opts_;
  QuadratureOptions q_;
  int n_ = 0;
  std::vector<cplx> zeta_;
  std::vector<cplx> theta_vals_;
  std::vector<cplx> sH_;
  std::vector<double> sH_err_;
  std::vector<char> in_E_;
  std::vector<cplx> theta_taylor_;
  std::vector<double> zero_angles_;
  BoundaryPanels panels_;
  std::vector<double> panel_factor_;
  RadialMoments moments_;
};

KthetaFunctional ktheta_functional(const BoundedFunctionSpec& theta, std::span<const cplx> p, const SpaceMeasure& mu,
                                   const CertificateOptions& opts);

/// Certificate for a single p.
DualCertificate dual_lower_bound(const CertificateContext& ctx, std::span<const cplx> p);
/// Best certificate over the context basis: sqrt(a* Q^-1 a) with a_k = conj F_{p_k}(0)
/// and Q the Gram matrix of the representing functions.
DualCertificate best_certificate(const CertificateContext& ctx);

enum class VerdictKind { certified_noncyclic, evidence_cyclic, inconclusive };

struct Verdict {
  VerdictKind kind = VerdictKind::inconclusive;
  double level = 0.0;     ///< certified lower bound
  double threshold = 0.0; ///< evidence threshold
  std::string trend;
  std::string label() const;
};

Verdict classify(const DistanceCurve& curve, const std::vector<DualCertificate>& certificates, double threshold,
                 double residual_tol);

struct CoronaCheck {
  double delta = 0.0;
  cplx argmin;
  std::size_t nodes = 0;
};

/// min over nodes of |S(z)| + |f(z)|.
CoronaCheck corona_hypothesis_check(const BoundedFunctionSpec& S, const BoundedFunctionSpec& f,
                                    const std::vector<cplx>& nodes);

} // namespace ptmu
