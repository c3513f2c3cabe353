#pragma once

#include "ptmu/analytic.hpp"

#include "json.hpp"

#include <vector>

namespace ptmu {

/// m_k = scale * int |z|^k dA_alpha for the probability measure proportional
/// to (1-|z|)^alpha dA, k = 0..kmax.
struct RadialMoments {
  double alpha = 0.0;
  double scale = 1.0;
  std::vector<double> values;

  RadialMoments() = default;
  RadialMoments(double alpha, double scale, int kmax);
  /// Closed form at real order k >= 0 (used for |z|^{nt}).
  static double moment(double alpha, double scale, double k);
  double operator[](std::size_t k) const { return values.at(k); }
};

/// Parameters of the shared quadrature.
struct QuadratureOptions {
  int angular_log2 = 13; ///< disk angular nodes 2^angular_log2 (offset grid)
  int radial_nodes = 128;
  double boundary_dmin = 1e-5; ///< excluded half-width around atoms on the carrier
  double boundary_hmax = 0.02; ///< maximal boundary panel width (radians)
  int boundary_order = 10;     ///< Gauss-Legendre nodes per boundary panel
};

/// Integrates a vector-valued integrand over every carrier component against
/// omega dm with Gauss-Legendre panels graded toward `atoms` (angles, masses).
/// f(theta, out) must add its values into `out` (size `width`).
struct BoundaryPanels {
  std::vector<double> theta;
  std::vector<double> weight; ///< includes omega(theta) and dm = dtheta / 2pi
  double truncated_mass = 0.0; ///< omega dm mass excluded around atoms
};

BoundaryPanels boundary_panels(const BoundaryWeight& w, const std::vector<Atom>& atoms,
                               const QuadratureOptions& q, const std::vector<double>& breakpoints = {});

struct GramProvenance {
  int N = 0;
  int angular_nodes = 0;
  int radial_nodes = 0;
  std::size_t boundary_nodes = 0;
  double boundary_dmin = 0.0;
  double truncated_mass = 0.0;
  double asymmetry = 0.0;
  double min_eigenvalue = 0.0;
  int cantor_atoms = 0;
  double max_eval_error = 0.0;
};

struct GramSystem {
  std::vector<std::vector<cplx>> G; ///< (N+1) x (N+1)
  std::vector<cplx> b;
  double one_norm2 = 0.0;
  GramProvenance provenance;

  int size() const { return static_cast<int>(b.size()); }
};

/// G_jk = <theta z^j, theta z^k>_mu, b_j = <1, theta z^j>_mu, ||1||^2.
/// Throws Error("node-collision") and Error("non-psd").
GramSystem gram_system(const BoundedFunctionSpec& theta, const SpaceMeasure& mu, int N,
                       const QuadratureOptions& q = {});

/// Row-major JSON export with [re, im] pairs.
nlohmann::json gram_to_json(const GramSystem& g);

/// ||f||_{mu,t} = (int |f|^t dmu)^{min(1, 1/t)} by grid quadrature.
double pt_norm(const BoundedFunctionSpec& f, const SpaceMeasure& mu, double t, const QuadratureOptions& q = {});
/// Polynomial with coefficients c; t = 2 uses moments and omega's Fourier
/// coefficients exactly.
double pt_norm(const std::vector<cplx>& coeffs, const SpaceMeasure& mu, double t, const QuadratureOptions& q = {});

/// Fourier moments int_E zeta^d omega dm for d = 0..dmax.
std::vector<cplx> boundary_moments(const BoundaryWeight& w, int dmax);

struct DecayFit {
  double beta = 0.0;
  double residual = 0.0;
  bool used_disk_part = true;
  std::vector<double> n;
  std::vector<double> norms;
};

/// Least-squares slope of log ||z^n||_{mu|D,t} against log n on [n_max/2, n_max].
/// Falls back to the full measure when mu has no disk part.
DecayFit monomial_decay(const SpaceMeasure& mu, double t, int n_max);

} // namespace ptmu
