#include "ptmu/cyclicity.hpp"

#include "ptmu/error.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ptmu {

namespace {

using lcplx = std::complex<long double>;
using LMatrix = std::vector<std::vector<lcplx>>;

// Solves A x = rhs for Hermitian positive definite A; false on a nonpositive pivot.
bool cholesky_solve(const LMatrix& A, const std::vector<lcplx>& rhs, std::vector<lcplx>& x) {
  const std::size_t n = rhs.size();
  LMatrix L(n, std::vector<lcplx>(n, 0.0L));
  for (std::size_t j = 0; j < n; ++j) {
    long double d = A[j][j].real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(L[j][k]);
    if (!(d > 0.0L) || !std::isfinite(static_cast<double>(d))) return false;
    L[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      lcplx s = A[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i][k] * std::conj(L[j][k]);
      L[i][j] = s / L[j][j].real();
    }
  }
  std::vector<lcplx> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    lcplx s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= L[i][k] * y[k];
    y[i] = s / L[i][i].real();
  }
  x.assign(n, 0.0L);
  for (std::size_t i = n; i-- > 0;) {
    lcplx s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(L[k][i]) * x[k];
    x[i] = s / L[i][i].real();
  }
  return true;
}

// Cholesky with diagonal jitter escalation; returns the jitter used.
double solve_with_jitter(const LMatrix& A, const std::vector<lcplx>& rhs, std::vector<lcplx>& x) {
  long double dmax = 0.0L;
  for (std::size_t i = 0; i < A.size(); ++i) dmax = std::max(dmax, std::abs(A[i][i].real()));
  if (dmax == 0.0L) dmax = 1.0L;
  const double levels[] = {0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10};
  for (double j : levels) {
    LMatrix B = A;
    for (std::size_t i = 0; i < B.size(); ++i) B[i][i] += j * dmax;
    if (cholesky_solve(B, rhs, x)) return j;
  }
  throw Error("solver-failure", "Cholesky failed at jitter 1e-10");
}

cplx to_c(lcplx v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

cplx horner(std::span<const cplx> p, cplx z) {
  cplx v = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) v = v * z + p[k];
  return v;
}

std::vector<cplx> poly_mul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

} // namespace

SolveReport gram_distance(const GramSystem& gs, int N, std::span<const int> order) {
  if (N < 0 || N >= gs.size()) throw Error("invalid-degree", "degree " + std::to_string(N) + " outside the Gram system");
  const std::size_t n = N + 1;
  std::vector<int> idx(n);
  if (order.empty()) {
    std::iota(idx.begin(), idx.end(), 0);
  } else {
    if (order.size() != n) throw Error("invalid-order", "order must list every monomial once");
    idx.assign(order.begin(), order.end());
  }
  // Normal equations in the convention <f, g> = int f conj(g): M_ab = G_{o_b, o_a}.
  LMatrix M(n, std::vector<lcplx>(n));
  std::vector<lcplx> rhs(n);
  for (std::size_t a = 0; a < n; ++a) {
    rhs[a] = gs.b[idx[a]];
    for (std::size_t b = 0; b < n; ++b) M[a][b] = gs.G[idx[b]][idx[a]];
  }
  std::vector<lcplx> x;
  SolveReport rep;
  rep.jitter = solve_with_jitter(M, rhs, x);
  lcplx quad = 0.0L, lin = 0.0L;
  for (std::size_t a = 0; a < n; ++a) {
    lcplx row = 0.0L;
    for (std::size_t b = 0; b < n; ++b) row += M[a][b] * x[b];
    quad += std::conj(x[a]) * row;
    lin += std::conj(rhs[a]) * x[a];
  }
  rep.squared = static_cast<double>(quad.real() - 2.0L * lin.real() + static_cast<long double>(gs.one_norm2));
  rep.coefficients.assign(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) rep.coefficients[idx[a]] = to_c(x[a]);
  return rep;
}

DistanceCurve distance_curve(const GramSystem& gs, const std::vector<int>& degrees) {
  if (degrees.empty()) throw Error("invalid-degree", "degree list is empty");
  if (!std::is_sorted(degrees.begin(), degrees.end())) throw Error("invalid-degree", "degrees must be ascending");
  DistanceCurve c;
  c.degrees = degrees;
  c.provenance = gs.provenance;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    SolveReport r;
    try {
      r = gram_distance(gs, degrees[i]);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (degree index " + std::to_string(i) + ")");
    }
    c.squared.push_back(r.squared);
    c.values.push_back(std::sqrt(std::max(0.0, r.squared)));
    c.coefficients.push_back(std::move(r.coefficients));
    c.jitter.push_back(r.jitter);
  }
  return c;
}

DistanceCurve distance_curve(const BoundedFunctionSpec& theta, const SpaceMeasure& mu, const std::vector<int>& degrees,
                             const QuadratureOptions& q) {
  if (mu.t != 2.0) return distance_curve_iterative(theta, mu, degrees, q);
  if (degrees.empty()) throw Error("invalid-degree", "degree list is empty");
  const GramSystem gs = gram_system(theta, mu, degrees.back(), q);
  return distance_curve(gs, degrees);
}

DistanceCurve distance_curve_iterative(const BoundedFunctionSpec& theta, const SpaceMeasure& mu,
                                       const std::vector<int>& degrees, const QuadratureOptions& q, int iterations) {
  mu.validate();
  const double t = mu.t;
  if (t < 1.0) throw Error("T_RANGE", "distance minimization needs t >= 1");
  if (degrees.empty() || !std::is_sorted(degrees.begin(), degrees.end())) {
    throw Error("invalid-degree", "degrees must be nonempty and ascending");
  }
  const Evaluator ev(theta);
  std::vector<cplx> z, th;
  std::vector<double> w;
  if (mu.disk_mass_scale > 0.0) {
    const int M = 1 << std::min(q.angular_log2, 9);
    const Rule rr = radial_rule(std::min(q.radial_nodes, 48), mu.disk_alpha);
    for (std::size_t i = 0; i < rr.nodes.size(); ++i) {
      for (int m = 0; m < M; ++m) {
        z.push_back(std::polar(rr.nodes[i], kTwoPi * (m + 0.5) / M));
        w.push_back(mu.disk_mass_scale * rr.weights[i] / M);
      }
    }
  }
  if (!mu.boundary.is_zero()) {
    QuadratureOptions qb = q;
    qb.boundary_hmax = std::max(q.boundary_hmax, 0.05);
    qb.boundary_dmin = std::max(q.boundary_dmin, 1e-4);
    const BoundaryPanels bp = boundary_panels(mu.boundary, ev.atoms(), qb, theta.outer.breakpoints());
    for (std::size_t i = 0; i < bp.theta.size(); ++i) {
      z.push_back(unit(bp.theta[i]));
      w.push_back(bp.weight[i]);
    }
  }
  th.resize(z.size());
  parallel_for(static_cast<int>(z.size()), [&](int i) { th[i] = ev(z[i]).value; });

  DistanceCurve c;
  c.degrees = degrees;
  c.iterative = true;
  c.t = t;
  c.provenance.N = degrees.back();
  c.provenance.boundary_nodes = z.size();
  for (int N : degrees) {
    const int n = N + 1;
    Eigen::MatrixXcd A(z.size(), n);
    for (std::size_t i = 0; i < z.size(); ++i) {
      cplx zp = th[i];
      for (int k = 0; k < n; ++k) {
        A(i, k) = zp;
        zp *= z[i];
      }
    }
    Eigen::VectorXd W = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    double best = std::numeric_limits<double>::infinity();
    std::vector<cplx> best_x(n, 0.0);
    for (int it = 0; it < iterations; ++it) {
      const Eigen::VectorXcd r = A * x - Eigen::VectorXcd::Ones(z.size());
      double obj = 0.0;
      Eigen::VectorXd Wt(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double a = std::abs(r(i));
        obj += W(i) * std::pow(a, t);
        Wt(i) = W(i) * std::pow(std::max(a, 1e-9), t - 2.0);
      }
      if (it > 0 && obj < best) {
        best = obj;
        for (int k = 0; k < n; ++k) best_x[k] = x(k);
      }
      Eigen::MatrixXcd Nm = A.adjoint() * Wt.asDiagonal() * A;
      const Eigen::VectorXcd rhs = A.adjoint() * Wt.cast<cplx>();
      Nm.diagonal().array() += 1e-13 * Nm.diagonal().real().maxCoeff();
      const Eigen::VectorXcd xn = Nm.ldlt().solve(rhs);
      x = (it == 0 || t == 2.0) ? xn : 0.5 * (x + xn);
    }
    const double v = std::pow(best, std::min(1.0, 1.0 / t));
    c.values.push_back(v);
    c.squared.push_back(v * v);
    c.coefficients.push_back(best_x);
    c.jitter.push_back(1e-13);
  }
  return c;
}

CauchySolution cauchy_solve_radial(std::span<const cplx> g, const RadialMoments& m, double tau, double noise) {
  const std::size_t n = g.size();
  if (n == 0) return {};
  if (m.values.size() < 2 * n - 1) throw Error("insufficient-moments", "moments do not reach order 2n");
  // Coefficients below the sample error or FFT roundoff carry no information.
  double gmax = 0.0;
  for (const cplx& v : g) gmax = std::max(gmax, std::abs(v));
  const double floor = std::max(noise, 1e-14 * gmax);
  std::vector<double> s(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::max(0.0, std::abs(g[k]) - floor);
    s[k] = std::pow(k + 1.0, tau) * a * a;
  }
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) tail[k] = tail[k + 1] + s[k];
  std::size_t cut = n;
  double head = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    head += s[k];
    if (tail[k + 1] <= 1e-20 * head) {
      cut = k + 1;
      break;
    }
  }
  if (n >= 16 && cut > 3 * n / 4) {
    throw Error("insufficient-decay", "Sobolev tail of the off-carrier coefficients does not decay");
  }
  CauchySolution out;
  out.cutoff = cut;
  out.G.resize(cut);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < cut; ++k) {
    out.G[k] = g[k] / m[2 * k];
    norm2 += std::norm(g[k]) / m[2 * k];
  }
  out.norm = std::sqrt(norm2);
  return out;
}

CertificateContext::CertificateContext(const BoundedFunctionSpec& theta, const SpaceMeasure& mu,
                                       const CertificateOptions& opts, const QuadratureOptions& q)
    : theta_(theta), mu_(mu), opts_(opts), q_(q) {
  mu_.validate();
  if (mu_.t != 2.0) throw Error("T_RANGE", "certificates use t = 2");
  if (mu_.boundary.is_zero()) throw Error("no-carrier", "certificates need a boundary carrier");
  if (opts.grid_log2 < 6 || opts.grid_log2 > 22) throw Error("invalid-grid", "grid_log2 out of range");
  n_ = 1 << opts.grid_log2;
  const CircleSet& E = mu_.boundary.carrier;
  const OuterRule sH = cutoff_outer(E, opts.cutoff_N).outer + weight_outer(mu_.boundary);
  const Evaluator ev(theta_);
  zeta_.resize(n_);
  theta_vals_.resize(n_);
  sH_.resize(n_);
  sH_err_.resize(n_);
  in_E_.resize(n_);
  parallel_for(n_, [&](int m) {
    const double a = kTwoPi * m / n_;
    zeta_[m] = unit(a);
    in_E_[m] = E.contains(a) ? 1 : 0;
    try {
      theta_vals_[m] = ev(zeta_[m]).value;
    } catch (const Error& e) {
      if (e.code() != "on-singular-support") throw;
      theta_vals_[m] = 0.0;
    }
    const Value v = eval_outer(sH, zeta_[m]);
    sH_[m] = v.value;
    sH_err_[m] = v.err;
  });

  std::vector<double> in_atoms;
  for (const Atom& a : ev.atoms()) {
    if (E.contains(a.angle)) in_atoms.push_back(a.angle);
  }
  if (in_atoms.size() <= 8) zero_angles_ = in_atoms;
  if (opts.endpoint_zeros) {
    for (const Arc& c : E.components()) {
      if (c.length <= 0.0 || c.length >= 1.0) continue;
      zero_angles_.push_back(wrap_angle(c.start));
      zero_angles_.push_back(wrap_angle(c.end_angle()));
    }
  }
  theta_taylor_ = taylor_coefficients(theta_, n_ / 2);
  panels_ = boundary_panels(mu_.boundary, {}, q_);
  panel_factor_.resize(panels_.theta.size());
  for (std::size_t i = 0; i < panels_.theta.size(); ++i) {
    const double w = mu_.boundary(panels_.theta[i]);
    const double h = std::min(1.0, w) / w;
    panel_factor_[i] = w > 0.0 ? h * h : 0.0;
  }
  if (mu_.disk_mass_scale > 0.0) moments_ = RadialMoments(mu_.disk_alpha, mu_.disk_mass_scale, n_);
}

std::vector<cplx> CertificateContext::samples(std::span<const cplx> p, bool off_only) const {
  std::vector<cplx> g(n_);
  for (int m = 0; m < n_; ++m) {
    if (off_only && in_E_[m]) {
      g[m] = 0.0;
      continue;
    }
    g[m] = theta_vals_[m] * std::conj(zeta_[m] * horner(p, zeta_[m]) * sH_[m]);
  }
  return g;
}

std::vector<cplx> CertificateContext::transform(const std::vector<cplx>& s, int stride) const {
  const int m = n_ / stride;
  fftw_complex* in = fftw_alloc_complex(m);
  fftw_complex* out = fftw_alloc_complex(m);
  fftw_plan plan = fftw_plan_dft_1d(m, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  for (int i = 0; i < m; ++i) {
    in[i][0] = s[i * stride].real();
    in[i][1] = s[i * stride].imag();
  }
  fftw_execute(plan);
  std::vector<cplx> F(m / 2);
  for (int k = 0; k < m / 2; ++k) F[k] = cplx(out[k][0], out[k][1]) / static_cast<double>(m);
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);
  return F;
}

KthetaFunctional CertificateContext::functional(std::span<const cplx> p) const {
  const std::vector<cplx> g = samples(p, false);
  KthetaFunctional f;
  f.p.assign(p.begin(), p.end());
  f.grid = n_;
  f.F = transform(g, 1);
  const std::vector<cplx> coarse = transform(g, 2);
  double fmax = 0.0;
  for (const cplx& v : f.F) fmax = std::max(fmax, std::abs(v));
  for (std::size_t k = 0; k < coarse.size() / 4; ++k) f.grid_shift = std::max(f.grid_shift, std::abs(coarse[k] - f.F[k]));
  if (f.grid_shift > opts_.grid_tol * std::max(1.0, fmax)) {
    throw Error("grid-too-coarse", "halving the grid shifts F_p coefficients by " + std::to_string(f.grid_shift));
  }
  const int J = opts_.residual_order;
  f.residuals.resize(J + 1);
  const std::size_t K = f.F.size();
  for (int j = 0; j <= J; ++j) {
    lcplx s = 0.0L;
    for (std::size_t k = j; k < K; ++k) {
      const cplx t = theta_taylor_[k - j] * std::conj(f.F[k]);
      s += lcplx(t.real(), t.imag());
    }
    f.residuals[j] = std::abs(to_c(s));
    f.max_residual = std::max(f.max_residual, f.residuals[j]);
  }
  return f;
}

std::vector<cplx> CertificateContext::off_carrier(std::span<const cplx> p) const { return transform(samples(p, true), 1); }

double CertificateContext::off_carrier_noise(std::span<const cplx> p) const {
  double e = 0.0;
  for (int m = 0; m < n_; ++m) {
    if (!in_E_[m]) e = std::max(e, std::abs(theta_vals_[m]) * std::abs(horner(p, zeta_[m])) * sH_err_[m]);
  }
  return e;
}

double CertificateContext::boundary_norm2(std::span<const cplx> p) const {
  std::vector<double> terms(panels_.theta.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = panels_.weight[i] * std::norm(horner(p, unit(panels_.theta[i]))) * panel_factor_[i];
  }
  return pairwise_sum(terms);
}

std::vector<std::vector<cplx>> CertificateContext::basis() const {
  std::vector<cplx> base{1.0};
  for (double a : zero_angles_) {
    for (int l = 0; l < opts_.zero_order; ++l) base = poly_mul(base, {-unit(a), 1.0});
  }
  std::vector<std::vector<cplx>> out;
  for (int k = 0; k < opts_.basis_size; ++k) {
    std::vector<cplx> p(k, 0.0);
    p.insert(p.end(), base.begin(), base.end());
    out.push_back(std::move(p));
  }
  return out;
}

KthetaFunctional ktheta_functional(const BoundedFunctionSpec& theta, std::span<const cplx> p, const SpaceMeasure& mu,
                                   const CertificateOptions& opts) {
  return CertificateContext(theta, mu, opts).functional(p);
}

namespace {

double disk_part_norm(const CertificateContext& ctx, const std::vector<cplx>& g, double noise, std::size_t* cutoff) {
  double gmax = 0.0;
  for (const cplx& v : g) gmax = std::max(gmax, std::abs(v));
  if (gmax == 0.0) {
    *cutoff = 0;
    return 0.0;
  }
  if (!(ctx.mu().disk_mass_scale > 0.0)) {
    throw Error("no-disk-part", "off-carrier part of F_p needs a disk measure to be represented");
  }
  const CauchySolution s = cauchy_solve_radial(g, ctx.moments(), ctx.tau(), noise);
  *cutoff = s.cutoff;
  return s.norm;
}

} // namespace

DualCertificate dual_lower_bound(const CertificateContext& ctx, std::span<const cplx> p) {
  const KthetaFunctional f = ctx.functional(p);
  DualCertificate c;
  c.p = f.p;
  c.residuals = f.residuals;
  c.max_residual = f.max_residual;
  c.grid_shift = f.grid_shift;
  c.grid = f.grid;
  c.basis_size = 1;
  c.zero_order = ctx.options().zero_order;
  c.cutoff_N = ctx.options().cutoff_N;
  c.F0 = std::abs(f.F.front());
  c.disk_norm = disk_part_norm(ctx, ctx.off_carrier(p), ctx.off_carrier_noise(p), &c.disk_cutoff);
  c.boundary_norm = std::sqrt(ctx.boundary_norm2(p));
  c.norm = std::hypot(c.disk_norm, c.boundary_norm);
  c.bound = c.norm > 0.0 ? c.F0 / c.norm : 0.0;
  return c;
}

DualCertificate best_certificate(const CertificateContext& ctx) {
  const auto basis = ctx.basis();
  const std::size_t K = basis.size();
  std::vector<KthetaFunctional> fs;
  std::vector<std::vector<cplx>> offs;
  std::size_t cut = 0;
  for (const auto& p : basis) {
    fs.push_back(ctx.functional(p));
    offs.push_back(ctx.off_carrier(p));
    std::size_t c = 0;
    disk_part_norm(ctx, offs.back(), ctx.off_carrier_noise(p), &c);
    cut = std::max(cut, c);
  }
  // Q_kl = <G_l, G_k>_mu.
  LMatrix Q(K, std::vector<lcplx>(K, 0.0L));
  const auto& panels = basis;
  (void)panels;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l <= k; ++l) {
      lcplx s = 0.0L;
      for (std::size_t n = 0; n < cut; ++n) {
        const cplx t = offs[l][n] * std::conj(offs[k][n]) / ctx.moments()[2 * n];
        s += lcplx(t.real(), t.imag());
      }
      Q[k][l] = s;
    }
  }
  // Boundary part through polarization of the boundary quadratic form.
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t l = 0; l <= k; ++l) {
      auto combo = [&](cplx a) {
        std::vector<cplx> p(std::max(basis[k].size(), basis[l].size()), 0.0);
        for (std::size_t i = 0; i < basis[l].size(); ++i) p[i] += basis[l][i];
        for (std::size_t i = 0; i < basis[k].size(); ++i) p[i] += a * basis[k][i];
        return ctx.boundary_norm2(p);
      };
      // int conj(p_l) p_k = (1/4) sum_a conj(a) ||p_l + a p_k||^2 over a in {1, -1, i, -i}.
      const cplx I(0.0, 1.0);
      const cplx v = 0.25 * (combo(1.0) - combo(-1.0) - I * combo(I) + I * combo(-I));
      Q[k][l] += lcplx(v.real(), v.imag());
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    Q[k][k] = Q[k][k].real();
    for (std::size_t l = 0; l < k; ++l) Q[l][k] = std::conj(Q[k][l]);
  }
  std::vector<long double> scale(K);
  for (std::size_t k = 0; k < K; ++k) scale[k] = 1.0L / std::sqrt(std::max(Q[k][k].real(), 1e-300L));
  LMatrix Qs = Q;
  std::vector<lcplx> a(K);
  for (std::size_t k = 0; k < K; ++k) {
    const cplx c = fs[k].F.front();
    a[k] = lcplx(c.real(), -c.imag()) * scale[k];
    for (std::size_t l = 0; l < K; ++l) Qs[k][l] *= scale[k] * scale[l];
  }
  std::vector<lcplx> ys;
  solve_with_jitter(Qs, a, ys);
  std::vector<lcplx> y(K);
  for (std::size_t k = 0; k < K; ++k) y[k] = ys[k] * scale[k];

  DualCertificate c;
  c.basis_size = static_cast<int>(K);
  c.zero_order = ctx.options().zero_order;
  c.cutoff_N = ctx.options().cutoff_N;
  c.grid = fs.front().grid;
  lcplx num = 0.0L, quad = 0.0L;
  for (std::size_t k = 0; k < K; ++k) {
    const cplx f0 = fs[k].F.front();
    num += y[k] * lcplx(f0.real(), f0.imag());
    for (std::size_t l = 0; l < K; ++l) quad += std::conj(y[k]) * Q[k][l] * y[l];
  }
  c.F0 = static_cast<double>(std::abs(num));
  c.norm = std::sqrt(std::max(0.0, static_cast<double>(quad.real())));
  c.bound = c.norm > 0.0 ? c.F0 / c.norm : 0.0;
  // Split of the norm for the report.
  std::vector<cplx> p;
  std::vector<cplx> off(offs.front().size(), 0.0);
  std::vector<cplx> F(fs.front().F.size(), 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const cplx yk = to_c(y[k]);
    if (p.size() < basis[k].size()) p.resize(basis[k].size(), 0.0);
    for (std::size_t i = 0; i < basis[k].size(); ++i) p[i] += std::conj(yk) * basis[k][i];
    for (std::size_t i = 0; i < off.size(); ++i) off[i] += yk * offs[k][i];
    for (std::size_t i = 0; i < F.size(); ++i) F[i] += yk * fs[k].F[i];
    c.grid_shift += std::abs(yk) * fs[k].grid_shift;
  }
  c.p = p;
  c.disk_norm = disk_part_norm(ctx, off, ctx.off_carrier_noise(p), &c.disk_cutoff);
  c.boundary_norm = std::sqrt(ctx.boundary_norm2(p));
  // Residuals of the combined functional, directly.
  const KthetaFunctional combined = ctx.functional(p);
  c.residuals = combined.residuals;
  c.max_residual = combined.max_residual;
  (void)F;
  return c;
}

std::string Verdict::label() const {
  switch (kind) {
  case VerdictKind::certified_noncyclic:
    return "certified-noncyclic";
  case VerdictKind::evidence_cyclic:
    return "evidence-cyclic";
  case VerdictKind::inconclusive:
    return "inconclusive";
  }
  return "inconclusive";
}

Verdict classify(const DistanceCurve& curve, const std::vector<DualCertificate>& certificates, double threshold,
                 double residual_tol) {
  if (curve.values.empty()) throw Error("empty-curve", "distance curve has no values");
  Verdict v;
  v.threshold = threshold;
  for (const DualCertificate& c : certificates) {
    if (c.bound > 0.0 && c.max_residual <= residual_tol && c.bound > v.level) {
      v.kind = VerdictKind::certified_noncyclic;
      v.level = c.bound;
    }
  }
  const std::size_t n = curve.values.size();
  const std::size_t start = n / 2;
  bool monotone = true;
  for (std::size_t i = start + 1; i < n; ++i) monotone = monotone && curve.values[i] <= curve.values[i - 1];
  const bool decreasing = monotone && n >= 2 && curve.values.back() < curve.values[start];
  v.trend = decreasing ? "decreasing" : (monotone ? "flat" : "non-monotone");
  if (v.kind == VerdictKind::certified_noncyclic) return v;
  if (decreasing && curve.values.back() < threshold) v.kind = VerdictKind::evidence_cyclic;
  return v;
}

CoronaCheck corona_hypothesis_check(const BoundedFunctionSpec& S, const BoundedFunctionSpec& f,
                                    const std::vector<cplx>& nodes) {
  const Evaluator es(S), ef(f);
  std::vector<double> v(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), [&](int i) {
    v[i] = std::abs(es(nodes[i]).value) + std::abs(ef(nodes[i]).value);
  });
  CoronaCheck c;
  c.nodes = nodes.size();
  c.delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < c.delta) {
      c.delta = v[i];
      c.argmin = nodes[i];
    }
  }
  return c;
}

} // namespace ptmu
