#include "ptmu/quadrature.hpp"

#include "ptmu/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptmu {

namespace {

constexpr double kPi = std::numbers::pi;

double circ_dist(double a, double b) { return kTwoPi * circular_gap(a, b); }

} // namespace

RadialMoments::RadialMoments(double alpha_, double scale_, int kmax) : alpha(alpha_), scale(scale_) {
  if (!(alpha > -1.0)) throw Error("ALPHA_RANGE", "alpha must exceed -1");
  values.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) values[k] = moment(alpha, scale, k);
}

double RadialMoments::moment(double alpha, double scale, double k) {
  return scale * std::exp(std::lgamma(k + 2.0) + std::lgamma(alpha + 3.0) - std::lgamma(k + alpha + 3.0));
}

BoundaryPanels boundary_panels(const BoundaryWeight& w, const std::vector<Atom>& atoms,
                               const QuadratureOptions& q, const std::vector<double>& breakpoints) {
  BoundaryPanels out;
  const Rule gl = gauss_legendre(q.boundary_order);
  for (std::size_t k = 0; k < w.pieces.size(); ++k) {
    const Arc& c = w.components[k];
    const WeightPiece& piece = w.pieces[k];
    if (c.length <= 0.0) continue;
    const double t0 = c.start;
    const double t1 = c.start + kTwoPi * std::min(c.length, 1.0);
    std::vector<double> cuts{t0, t1};
    auto lift = [&](double theta) { return t0 + wrap_angle(theta - t0); };
    for (double b : breakpoints) {
      const double t = lift(b);
      if (t > t0 && t < t1) cuts.push_back(t);
    }
    std::vector<const Atom*> inside;
    for (const Atom& a : atoms) {
      const double t = lift(a.angle);
      if (t >= t0 - q.boundary_dmin && t <= t1 + q.boundary_dmin) inside.push_back(&a);
    }
    std::sort(cuts.begin(), cuts.end());
    auto weight_at = [&](double theta) {
      const double u = std::clamp((theta - t0) / (kTwoPi * c.length), 0.0, 1.0);
      return piece(u, c.length);
    };
    // Excluded zones around atoms, in lifted coordinates.
    std::vector<std::pair<double, double>> holes;
    for (const Atom* a : inside) {
      double t = lift(a->angle);
      if (t1 - t0 >= kTwoPi - 1e-15 && t > t1 - q.boundary_dmin) t -= kTwoPi;
      holes.emplace_back(t - q.boundary_dmin, t + q.boundary_dmin);
      if (c.length >= 1.0) {
        holes.emplace_back(t - q.boundary_dmin + kTwoPi, t + q.boundary_dmin + kTwoPi);
        holes.emplace_back(t - q.boundary_dmin - kTwoPi, t + q.boundary_dmin - kTwoPi);
      }
    }
    std::vector<std::pair<double, double>> segments;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      std::vector<std::pair<double, double>> pieces{{cuts[i], cuts[i + 1]}};
      for (const auto& h : holes) {
        std::vector<std::pair<double, double>> next;
        for (const auto& s : pieces) {
          if (h.second <= s.first || h.first >= s.second) {
            next.push_back(s);
            continue;
          }
          const double lo = std::max(h.first, s.first), hi = std::min(h.second, s.second);
          for (int j = 0; j < 4; ++j) {
            const double x = lo + (hi - lo) * (j + 0.5) / 4.0;
            out.truncated_mass += weight_at(x) * (hi - lo) / 4.0 / kTwoPi;
          }
          if (h.first > s.first) next.emplace_back(s.first, h.first);
          if (h.second < s.second) next.emplace_back(h.second, s.second);
        }
        pieces = std::move(next);
      }
      segments.insert(segments.end(), pieces.begin(), pieces.end());
    }
    for (const auto& [a, b] : segments) {
      double t = a;
      while (t < b) {
        double h = q.boundary_hmax;
        if (!inside.empty()) {
          double dphase = 0.0;
          double xmin = std::numeric_limits<double>::infinity();
          for (const Atom* at : inside) {
            const double x = circ_dist(at->angle, t);
            xmin = std::min(xmin, x);
            const double s = std::sin(0.5 * x);
            dphase += at->mass / (2.0 * s * s);
          }
          h = std::min({h, 0.5 * xmin, 2.0 / dphase});
        }
        const double e = std::min(b, t + h);
        if (e - t < 1e-15) break;
        for (int i = 0; i < q.boundary_order; ++i) {
          const double x = 0.5 * (t + e) + 0.5 * (e - t) * gl.nodes[i];
          const double wt = 0.5 * (e - t) * gl.weights[i] * weight_at(x) / kTwoPi;
          if (wt == 0.0) continue;
          out.theta.push_back(wrap_angle(x));
          out.weight.push_back(wt);
        }
        t = e;
      }
    }
  }
  return out;
}

std::vector<cplx> boundary_moments(const BoundaryWeight& w, int dmax) {
  std::vector<cplx> t(dmax + 1, 0.0);
  for (std::size_t k = 0; k < w.pieces.size(); ++k) {
    const Arc& c = w.components[k];
    const WeightPiece& p = w.pieces[k];
    if (c.length <= 0.0) continue;
    if (p.kind == WeightPiece::Kind::constant) {
      if (c.length >= 1.0) {
        t[0] += p.value;
        continue;
      }
      t[0] += p.value * c.length;
      const double t1 = c.start, t2 = c.end_angle();
      for (int d = 1; d <= dmax; ++d) {
        t[d] += p.value * (std::polar(1.0, d * t2) - std::polar(1.0, d * t1)) / cplx(0.0, kTwoPi * d);
      }
      continue;
    }
    const Rule gl = gauss_legendre(16);
    const double len = std::min(c.length, 1.0);
    const int panels = std::max(64, static_cast<int>(4.0 * dmax * len));
    for (int j = 0; j < panels; ++j) {
      for (int i = 0; i < 16; ++i) {
        const double u = (j + 0.5 + 0.5 * gl.nodes[i]) / panels;
        const double wt = 0.5 * gl.weights[i] / panels * len * p(u, c.length);
        const double theta = c.start + kTwoPi * len * u;
        for (int d = 0; d <= dmax; ++d) t[d] += wt * std::polar(1.0, d * theta);
      }
    }
  }
  return t;
}

namespace {

struct DiskTransforms {
  std::vector<cplx> A; ///< (1/M) sum |theta|^2 e^{-i d phi}, d = 0..N
  std::vector<cplx> C; ///< (1/M) sum theta e^{+i j phi}, j = 0..N
  double max_err = 0.0;
};

} // namespace

GramSystem gram_system(const BoundedFunctionSpec& theta, const SpaceMeasure& mu, int N, const QuadratureOptions& q) {
  mu.validate();
  if (N < 0) throw Error("invalid-degree", "N must be nonnegative");
  const Evaluator ev(theta);
  GramSystem gs;
  const int n = N + 1;
  gs.G.assign(n, std::vector<cplx>(n, 0.0));
  gs.b.assign(n, 0.0);
  auto& prov = gs.provenance;
  prov.N = N;
  prov.boundary_dmin = q.boundary_dmin;
  prov.cantor_atoms = static_cast<int>(ev.atoms().size());

  auto guarded = [&](cplx z) {
    try {
      return ev(z);
    } catch (const Error& e) {
      if (e.code() == "on-singular-support") throw Error("node-collision", e.what());
      throw;
    }
  };

  if (mu.disk_mass_scale > 0.0) {
    const int M = 1 << q.angular_log2;
    const int R = q.radial_nodes;
    prov.angular_nodes = M;
    prov.radial_nodes = R;
    const Rule rr = radial_rule(R, mu.disk_alpha);
    std::vector<cplx> table(M);
    for (int m = 0; m < M; ++m) table[m] = std::polar(1.0, -kTwoPi * m / M);
    std::vector<DiskTransforms> tr(R);
    parallel_for(R, [&](int i) {
      const double r = rr.nodes[i];
      std::vector<cplx> vals(M);
      std::vector<double> mod2(M);
      double max_err = 0.0;
      for (int m = 0; m < M; ++m) {
        const Value v = guarded(std::polar(r, kTwoPi * (m + 0.5) / M));
        vals[m] = v.value;
        mod2[m] = std::norm(v.value);
        max_err = std::max(max_err, v.err);
      }
      DiskTransforms& t = tr[i];
      t.A.assign(n, 0.0);
      t.C.assign(n, 0.0);
      t.max_err = max_err;
      for (int d = 0; d < n; ++d) {
        const cplx half = std::polar(1.0, -kPi * d / M);
        cplx sa = 0.0, sc = 0.0;
        long idx = 0;
        for (int m = 0; m < M; ++m) {
          const cplx tw = table[idx];
          sa += mod2[m] * tw;
          sc += vals[m] * std::conj(tw);
          idx += d;
          if (idx >= M) idx -= M;
        }
        t.A[d] = sa * half / static_cast<double>(M);
        t.C[d] = sc * std::conj(half) / static_cast<double>(M);
      }
    });
    for (int i = 0; i < R; ++i) {
      const double r = rr.nodes[i];
      const double w = rr.weights[i] * mu.disk_mass_scale;
      prov.max_eval_error = std::max(prov.max_eval_error, tr[i].max_err);
      std::vector<double> rp(2 * n, 1.0);
      for (int k = 1; k < 2 * n; ++k) rp[k] = rp[k - 1] * r;
      for (int j = 0; j < n; ++j) {
        gs.b[j] += w * rp[j] * std::conj(tr[i].C[j]);
        for (int k = 0; k <= j; ++k) gs.G[j][k] += w * rp[j + k] * std::conj(tr[i].A[j - k]);
      }
    }
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) gs.G[j][k] = std::conj(gs.G[k][j]);
    }
    gs.one_norm2 += mu.disk_mass_scale;
  }

  if (!mu.boundary.is_zero()) {
    std::vector<cplx> t;
    if (theta.is_inner()) {
      t = boundary_moments(mu.boundary, N);
    } else {
      t.assign(n, 0.0);
      const BoundaryPanels bp = boundary_panels(mu.boundary, {}, q, theta.outer.breakpoints());
      for (std::size_t i = 0; i < bp.theta.size(); ++i) {
        const double a2 = std::exp(2.0 * theta.boundary_log_modulus(bp.theta[i]));
        const cplx step = unit(bp.theta[i]);
        cplx zp = 1.0;
        for (int d = 0; d < n; ++d) {
          t[d] += bp.weight[i] * a2 * zp;
          zp *= step;
        }
      }
      prov.boundary_nodes += bp.theta.size();
    }
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) gs.G[j][k] += j >= k ? t[j - k] : std::conj(t[k - j]);
    }
    const BoundaryPanels bp = boundary_panels(mu.boundary, ev.atoms(), q, theta.outer.breakpoints());
    prov.boundary_nodes += bp.theta.size();
    prov.truncated_mass = bp.truncated_mass;
    std::vector<Value> vals(bp.theta.size());
    parallel_for(static_cast<int>(bp.theta.size()), [&](int i) { vals[i] = guarded(unit(bp.theta[i])); });
    std::vector<std::complex<long double>> acc(n, 0.0L);
    for (std::size_t i = 0; i < bp.theta.size(); ++i) {
      const cplx step = unit(-bp.theta[i]);
      cplx v = bp.weight[i] * std::conj(vals[i].value);
      for (int j = 0; j < n; ++j) {
        acc[j] += std::complex<long double>(v.real(), v.imag());
        v *= step;
      }
    }
    for (int j = 0; j < n; ++j) gs.b[j] += cplx(static_cast<double>(acc[j].real()), static_cast<double>(acc[j].imag()));
    for (const Value& v : vals) prov.max_eval_error = std::max(prov.max_eval_error, v.err);
    gs.one_norm2 += mu.boundary.total_mass();
  }

  double asym = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      asym = std::max(asym, std::abs(gs.G[j][k] - std::conj(gs.G[k][j])));
      const cplx avg = 0.5 * (gs.G[j][k] + std::conj(gs.G[k][j]));
      gs.G[j][k] = avg;
      gs.G[k][j] = std::conj(avg);
    }
    gs.G[j][j] = gs.G[j][j].real();
  }
  prov.asymmetry = asym;
  Eigen::MatrixXcd Gm(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) Gm(j, k) = gs.G[j][k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gm, Eigen::EigenvaluesOnly);
  prov.min_eigenvalue = es.eigenvalues().minCoeff();
  if (prov.min_eigenvalue < -1e-8) {
    throw Error("non-psd", "Gram matrix eigenvalue " + std::to_string(prov.min_eigenvalue));
  }
  return gs;
}

nlohmann::json gram_to_json(const GramSystem& g) {
  nlohmann::json j;
  const int n = g.size();
  j["rows"] = n;
  j["cols"] = n;
  nlohmann::json data = nlohmann::json::array();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) data.push_back({g.G[r][c].real(), g.G[r][c].imag()});
  }
  j["G"] = data;
  nlohmann::json b = nlohmann::json::array();
  for (const cplx& v : g.b) b.push_back({v.real(), v.imag()});
  j["b"] = b;
  j["one_norm2"] = g.one_norm2;
  const auto& p = g.provenance;
  j["provenance"] = {{"N", p.N},
                     {"angular_nodes", p.angular_nodes},
                     {"radial_nodes", p.radial_nodes},
                     {"boundary_nodes", p.boundary_nodes},
                     {"boundary_dmin", p.boundary_dmin},
                     {"truncated_mass", p.truncated_mass},
                     {"asymmetry", p.asymmetry},
                     {"min_eigenvalue", p.min_eigenvalue},
                     {"realized_atoms", p.cantor_atoms},
                     {"max_eval_error", p.max_eval_error}};
  return j;
}

namespace {

double exponent_for(double t) { return std::min(1.0, 1.0 / t); }

template <class F>
double disk_integral(const SpaceMeasure& mu, const QuadratureOptions& q, F&& absf_t) {
  if (!(mu.disk_mass_scale > 0.0)) return 0.0;
  const int M = 1 << std::min(q.angular_log2, 12);
  const Rule rr = radial_rule(q.radial_nodes, mu.disk_alpha);
  std::vector<double> ring(rr.nodes.size());
  parallel_for(static_cast<int>(rr.nodes.size()), [&](int i) {
    std::vector<double> vals(M);
    for (int m = 0; m < M; ++m) vals[m] = absf_t(std::polar(rr.nodes[i], kTwoPi * (m + 0.5) / M));
    ring[i] = pairwise_sum(vals) / M;
  });
  double s = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) s += rr.weights[i] * ring[i];
  return mu.disk_mass_scale * s;
}

} // namespace

double pt_norm(const BoundedFunctionSpec& f, const SpaceMeasure& mu, double t, const QuadratureOptions& q) {
  if (!(t > 0.0)) throw Error("T_RANGE", "t must be positive");
  const Evaluator ev(f);
  const double disk = disk_integral(mu, q, [&](cplx z) { return std::pow(std::abs(ev(z).value), t); });
  double bdry = 0.0;
  if (!mu.boundary.is_zero()) {
    const BoundaryPanels bp = boundary_panels(mu.boundary, {}, q, f.outer.breakpoints());
    std::vector<double> terms(bp.theta.size());
    for (std::size_t i = 0; i < bp.theta.size(); ++i) {
      terms[i] = bp.weight[i] * std::exp(t * f.boundary_log_modulus(bp.theta[i]));
    }
    bdry = pairwise_sum(terms);
  }
  return std::pow(disk + bdry, exponent_for(t));
}

double pt_norm(const std::vector<cplx>& c, const SpaceMeasure& mu, double t, const QuadratureOptions& q) {
  if (!(t > 0.0)) throw Error("T_RANGE", "t must be positive");
  const int n = static_cast<int>(c.size());
  if (t == 2.0) {
    double disk = 0.0;
    if (mu.disk_mass_scale > 0.0) {
      const RadialMoments m(mu.disk_alpha, mu.disk_mass_scale, 2 * std::max(n - 1, 0));
      for (int k = 0; k < n; ++k) disk += std::norm(c[k]) * m[2 * k];
    }
    double bdry = 0.0;
    if (!mu.boundary.is_zero() && n > 0) {
      const auto tm = boundary_moments(mu.boundary, n - 1);
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) s += c[j] * std::conj(c[k]) * (j >= k ? tm[j - k] : std::conj(tm[k - j]));
      }
      bdry = s.real();
    }
    return std::sqrt(disk + bdry);
  }
  auto poly = [&](cplx z) {
    cplx v = 0.0;
    for (int k = n - 1; k >= 0; --k) v = v * z + c[k];
    return v;
  };
  const double disk = disk_integral(mu, q, [&](cplx z) { return std::pow(std::abs(poly(z)), t); });
  double bdry = 0.0;
  if (!mu.boundary.is_zero()) {
    const BoundaryPanels bp = boundary_panels(mu.boundary, {}, q);
    for (std::size_t i = 0; i < bp.theta.size(); ++i) bdry += bp.weight[i] * std::pow(std::abs(poly(unit(bp.theta[i]))), t);
  }
  return std::pow(disk + bdry, exponent_for(t));
}

DecayFit monomial_decay(const SpaceMeasure& mu, double t, int n_max) {
  if (n_max < 16) throw Error("invalid-parameters", "n_max must be at least 16");
  DecayFit fit;
  fit.used_disk_part = mu.disk_mass_scale > 0.0;
  const double bmass = mu.boundary.is_zero() ? 0.0 : mu.boundary.total_mass();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = n_max / 2; n <= n_max; ++n) {
    const double integral = fit.used_disk_part ? RadialMoments::moment(mu.disk_alpha, mu.disk_mass_scale, n * t) : bmass;
    const double norm = std::pow(integral, exponent_for(t));
    fit.n.push_back(n);
    fit.norms.push_back(norm);
    const double x = std::log(static_cast<double>(n)), y = std::log(norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(fit.n.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / m;
  double res = 0.0;
  for (std::size_t i = 0; i < fit.n.size(); ++i) {
    const double e = std::log(fit.norms[i]) - (icpt + slope * std::log(fit.n[i]));
    res += e * e;
  }
  fit.beta = -slope;
  fit.residual = std::sqrt(res / m);
  return fit;
}

} // namespace ptmu
